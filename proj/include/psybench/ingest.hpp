#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "psybench/jsonio.hpp"
#include "psybench/types.hpp"

namespace psybench {

// Result of parsing one dump line: either a validated record or a skip
// reason. Bad lines never abort a stream.
struct ParsedLine {
    std::optional<CommentRecord> record;
    std::string skip_reason;

    bool ok() const { return record.has_value(); }
};

ParsedLine parse_dump_line(std::string_view line);

struct StreamFilter {
    std::optional<std::set<std::string>> subreddits;  // lowercase names
    std::optional<std::set<std::string>> authors;
};

// Streams validated records from a JSONL dump file (gzip detected by magic
// bytes). Unreadable input or a broken compression stream is fatal.
class CorpusReader {
public:
    explicit CorpusReader(const std::string& path, StreamFilter filter = {});

    bool next(CommentRecord& rec);
    const CorpusStats& stats() const { return stats_; }

private:
    LineReader reader_;
    StreamFilter filter_;
    CorpusStats stats_;
    std::set<std::string> users_;
};

using GroupedRecords = std::map<std::string, std::vector<CommentRecord>>;

// Partitions records by author; per-user lists sorted by (created_utc, id).
GroupedRecords group_by_user(std::vector<CommentRecord> records);

GroupedRecords read_grouped_corpus(const std::string& path, StreamFilter filter = {},
                                   CorpusStats* stats_out = nullptr);

// Grouped JSONL: {"author": ..., "comments": [...]} per line.
void write_grouped(const std::string& path, const GroupedRecords& grouped);
GroupedRecords read_grouped(const std::string& path);

// The `ingest` pipeline stage: dump in, grouped JSONL out.
CorpusStats run_ingest(const std::string& input_path,
                       const std::optional<std::string>& subreddits_path,
                       const std::string& out_path);

Json stats_to_json(const CorpusStats& stats);

// Lowercases ASCII letters; subreddit comparisons are case-insensitive.
std::string lower_ascii_copy(std::string_view s);

}  // namespace psybench
