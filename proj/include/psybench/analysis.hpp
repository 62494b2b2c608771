#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psybench/lexicon.hpp"
#include "psybench/stats.hpp"
#include "psybench/userfeat.hpp"

namespace psybench {

struct MeritRow {
    std::string feature;
    TTestResult test;  // mean_a = bipolar group, mean_b = control group
};

struct MeritReport {
    std::vector<MeritRow> rows;        // ascending p
    std::vector<std::string> skipped;  // zero variance in both groups

    Json to_json() const;
    std::string to_tsv(std::size_t top_n = 0) const;  // 0 = all rows
};

// Per-feature Welch t-test between the two label groups, ranked by p.
// An empty feature list means all columns.
MeritReport feature_merit(const FeatureMatrix& matrix,
                          const std::vector<std::string>& features = {});

struct EmotionRow {
    std::string category;
    double mean_bipolar = 0.0;
    double std_bipolar = 0.0;
    double mean_control = 0.0;
    double std_control = 0.0;
    std::optional<double> p;  // absent when the test is undefined
};

struct EmotionReport {
    std::vector<EmotionRow> rows;  // in the requested category order
    Json to_json() const;
    std::string to_tsv() const;
};

inline const std::vector<std::string> kDefaultEmotionCategories = {
    "posemo", "negemo", "anxiety", "anger", "sad", "affect"};

// Mean +/- std per group plus Welch p for each emotion category feature
// ("<ns>:<category>" columns). A missing category column is an error.
EmotionReport emotion_summary(const FeatureMatrix& matrix,
                              const std::vector<std::string>& categories,
                              const std::string& ns = "liwc");

// UTC calendar month buckets of a user's tokens; months below the token
// floor are dropped.
std::map<std::pair<int, int>, TokenStream> monthly_chunks(const UserDoc& user,
                                                          int min_month_tokens = 100);

struct VarianceRow {
    std::string category;
    double mean_std_bipolar = 0.0;
    double mean_std_control = 0.0;
    std::optional<double> p;
};

struct VarianceReport {
    std::vector<VarianceRow> rows;  // in the requested category order
    std::vector<std::string> sampled_bipolar;
    std::vector<std::string> sampled_control;
    std::map<std::string, int> months_used;  // author -> qualifying months

    Json to_json() const;
    std::string to_tsv() const;
};

// Within-user monthly variability of category usage, compared across
// groups: sample n users per group among those with at least
// min_user_tokens tokens, require >= 3 qualifying months per user
// (resampling replacements in seeded shuffle order), take the std of the
// monthly percentages per user and category, and Welch-test the group
// means of those stds.
VarianceReport variance_analysis(const std::vector<UserDoc>& bipolar_users,
                                 const std::vector<UserDoc>& control_users, const Lexicon& lexicon,
                                 const std::vector<std::string>& categories, int n_sample,
                                 std::int64_t min_user_tokens, int min_month_tokens,
                                 std::uint64_t seed);

}  // namespace psybench
