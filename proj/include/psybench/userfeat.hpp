#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psybench/jsonio.hpp"
#include "psybench/lexicon.hpp"
#include "psybench/textproc.hpp"
#include "psybench/types.hpp"

namespace psybench {

struct BehavioralFeatures {
    double post_comment_ratio = 0.0;
    double gilded_count = 0.0;
    double mean_controversiality = 0.0;
    double mean_score_diff = 0.0;
    double interval_mean = 0.0;
    double interval_median = 0.0;
    double interval_p10 = 0.0;
    double interval_p25 = 0.0;
    double interval_p75 = 0.0;
    double interval_p90 = 0.0;
    double interval_mode = 0.0;
    bool interval_defined = false;

    // Fixed export order; interval_defined is exported as 0/1.
    static const std::vector<std::string>& feature_names();
    std::vector<double> to_row() const;
};

// Statistics over consecutive gaps of an ascending timestamp list.
// Percentiles use linear interpolation at rank q*(n-1); the mode is the
// most frequent whole-minute bucket (ties take the smallest), in seconds.
// Fewer than two timestamps leaves interval_defined=false and zeros.
void interval_stats(const std::vector<std::int64_t>& timestamps, BehavioralFeatures& out);

// Interaction-pattern features over a user's retained records.
BehavioralFeatures behavioral(const UserDoc& user);

struct FeatureMatrix {
    std::vector<std::string> feature_names;
    std::vector<std::string> user_ids;
    std::vector<int> labels;  // bipolar=1, control=0
    std::vector<std::vector<double>> rows;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_cols() const { return feature_names.size(); }

    std::int64_t column(std::string_view name) const;  // -1 if absent

    // Columns that hold sparse tf-idf weights (by the "tfidf:" namespace);
    // these are excluded from standardization by the linear models.
    std::vector<bool> sparse_mask() const;

    FeatureMatrix subset_rows(const std::vector<std::size_t>& indices) const;

    void to_csv(const std::string& path) const;
    static FeatureMatrix from_csv(const std::string& path);
    Json to_json() const;
    static FeatureMatrix from_json(const Json& j);
};

// One dictionary worth of profile columns, namespaced "<ns>:<category>".
struct LexiconPart {
    std::string ns;  // e.g. "liwc" or "empath"
    const Lexicon* lexicon = nullptr;
    const std::vector<SummaryVariableDef>* summaries = nullptr;  // optional
};

struct AssembleSpec {
    std::vector<LexiconPart> lexicons;   // profile columns, in order
    const TfidfModel* tfidf = nullptr;   // "tfidf:<stem>" columns
    bool behavioral = false;             // "user:<name>" columns
};

// Concatenates the requested feature parts; rows ordered by user id.
// Empty user set, duplicate user ids, or a token-less user under a lexicon
// part are errors.
FeatureMatrix assemble(const std::vector<UserDoc>& users, const AssembleSpec& spec);

}  // namespace psybench
