#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace psybench {

enum class RecordKind { post, comment };

// One Reddit post/comment event as it appears in the public dump files.
struct CommentRecord {
    std::string id;
    std::string author;
    std::string subreddit;
    std::int64_t created_utc = 0;
    std::string body;
    RecordKind kind = RecordKind::comment;
    int gilded = 0;
    int controversiality = 0;
    int ups = 0;
    int downs = 0;
    std::optional<std::string> flair_text;

    bool operator==(const CommentRecord&) const = default;
};

// Accepted timestamp window: [2005-01-01, 2019-01-01) UTC.
inline constexpr std::int64_t kMinCreatedUtc = 1104537600;
inline constexpr std::int64_t kMaxCreatedUtc = 1546300800;

struct CorpusStats {
    std::uint64_t records_read = 0;
    std::uint64_t records_skipped = 0;
    std::uint64_t users_seen = 0;
    std::map<std::string, std::uint64_t> skip_reasons;

    std::uint64_t accepted() const { return records_read - records_skipped; }
};

enum class GroupLabel : int { control = 0, bipolar = 1 };

inline const char* to_string(GroupLabel g) {
    return g == GroupLabel::bipolar ? "bipolar" : "control";
}

// A user admitted to one of the two cohorts, with the comments retained
// after pruning (bipolar group) or all comments (control group).
struct UserDoc {
    std::string author;
    GroupLabel label = GroupLabel::control;
    std::vector<CommentRecord> comments;
    std::int64_t token_count = 0;
    std::set<std::string> categories;
};

}  // namespace psybench
