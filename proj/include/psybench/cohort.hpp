#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "psybench/ingest.hpp"
#include "psybench/jsonio.hpp"
#include "psybench/types.hpp"

namespace psybench {

struct CohortConfig {
    // Subreddit names are matched case-insensitively.
    std::set<std::string> bipolar_subreddits = {"bipolar", "bipolar2", "BipolarReddit",
                                                "BipolarSOs", "bipolarart"};
    std::set<std::string> mentalhealth_subreddits = {"mentalhealth"};

    // Case-insensitive phrases matched as whole-token sequences, so
    // whitespace and punctuation between words are flexible. Each pattern
    // carries its own first-person subject.
    std::vector<std::string> self_report_patterns = {
        "i am diagnosed with bipolar",    "i'm diagnosed with bipolar",
        "i was diagnosed with bipolar",   "i've been diagnosed with bipolar",
        "i have been diagnosed with bipolar", "i got diagnosed with bipolar",
        "diagnosed me with bipolar",
    };
    std::vector<std::string> flair_keywords = {"bipolar", "bp"};
    std::set<std::string> mention_words = {"bipolar", "bp"};

    int min_words = 1000;
    int control_mh_max_words = 1000;
    int category_min_words = 1000;
    std::map<std::string, std::set<std::string>> category_map;

    // When false (default), self-report/flair detection only looks at
    // comments on the disorder-related subreddits.
    bool self_report_global = false;

    // Union of bipolar and mentalhealth subreddits, lowercased.
    std::set<std::string> disorder_subreddits_lower() const;

    static CohortConfig from_json(const Json& j);
    Json to_json() const;
    static CohortConfig load(const std::string& path);
};

// True iff any pattern occurs in the body as a consecutive token sequence.
bool detect_self_report(std::string_view body, const std::vector<std::string>& patterns);

// True iff the flair is present and contains any keyword case-insensitively.
bool detect_flair(const std::optional<std::string>& flair_text,
                  const std::vector<std::string>& keywords);

// True iff the body contains the word as a whole token, with token
// boundaries at non-alphanumeric characters, case-insensitive.
bool contains_whole_word(std::string_view body, std::string_view word);

// Authors with a self-report comment or a matching flair on the
// disorder-related subreddits.
std::set<std::string> build_bipolar_cohort(const GroupedRecords& corpus, const CohortConfig& cfg);

struct PruneResult {
    std::optional<UserDoc> doc;
    std::string reject_reason;  // set iff !doc
};

// Drops disorder-subreddit comments and any comment mentioning one of the
// mention words, then applies the minimum-token rule.
PruneResult prune_user(const std::string& author, const std::vector<CommentRecord>& comments,
                       const CohortConfig& cfg);

// Control candidates: post in a subreddit where the bipolar group's comment
// share is above its mean share, carry at most control_mh_max_words tokens
// on the disorder subreddits, meet the total minimum, and are not bipolar.
std::set<std::string> select_control(const GroupedRecords& corpus,
                                     const std::set<std::string>& bipolar_authors,
                                     const CohortConfig& cfg);

std::set<std::string> assign_topic_categories(const UserDoc& user, const CohortConfig& cfg);

struct CohortResult {
    std::vector<UserDoc> bipolar;  // sorted by author
    std::vector<UserDoc> control;  // sorted by author
    Json stats;
};

// Full cohort construction over a grouped corpus.
CohortResult build_cohorts(const GroupedRecords& corpus, const CohortConfig& cfg);

}  // namespace psybench
