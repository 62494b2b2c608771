#include "psybench/ingest.hpp"

#include <algorithm>
#include <charconv>

#include "psybench/error.hpp"

namespace psybench {

namespace {

// Dump schemas vary across years: created_utc appears both as a number and
// as a decimal string.
bool read_epoch(const Json& j, std::int64_t& out) {
    const auto& v = j.at("created_utc");
    if (v.is_number_integer()) {
        out = v.get<std::int64_t>();
        return true;
    }
    if (v.is_number_float()) {
        out = static_cast<std::int64_t>(v.get<double>());
        return true;
    }
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && ptr == s.data() + s.size();
    }
    return false;
}

bool read_int_field(const Json& j, const char* key, int& out) {
    if (!j.contains(key) || j[key].is_null()) {
        out = 0;
        return true;
    }
    const auto& v = j[key];
    if (v.is_number_integer()) {
        out = v.get<int>();
        return true;
    }
    if (v.is_boolean()) {
        out = v.get<bool>() ? 1 : 0;
        return true;
    }
    return false;
}

}  // namespace

std::string lower_ascii_copy(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

ParsedLine parse_dump_line(std::string_view line) {
    auto skip = [](std::string reason) {
        ParsedLine p;
        p.skip_reason = std::move(reason);
        return p;
    };

    bool blank = true;
    for (char c : line) {
        if (c != ' ' && c != '\t' && c != '\r') {
            blank = false;
            break;
        }
    }
    if (blank) return skip("empty_line");

    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return skip("malformed_json");

    for (const char* key : {"id", "author", "subreddit", "created_utc", "body"}) {
        if (!j.contains(key) || j[key].is_null()) return skip("missing_field");
    }

    CommentRecord rec;
    if (!j["id"].is_string() || !j["author"].is_string() || !j["subreddit"].is_string() ||
        !j["body"].is_string()) {
        return skip("invalid_field");
    }
    rec.id = j["id"].get<std::string>();
    rec.author = j["author"].get<std::string>();
    rec.subreddit = j["subreddit"].get<std::string>();
    rec.body = j["body"].get<std::string>();

    if (rec.author.empty() || rec.subreddit.empty() || rec.id.empty()) {
        return skip("empty_field");
    }
    if (rec.author == "[deleted]") return skip("deleted_author");

    if (!read_epoch(j, rec.created_utc)) return skip("invalid_field");
    if (rec.created_utc < kMinCreatedUtc || rec.created_utc >= kMaxCreatedUtc) {
        return skip("timestamp_out_of_range");
    }

    if (!read_int_field(j, "gilded", rec.gilded) ||
        !read_int_field(j, "controversiality", rec.controversiality) ||
        !read_int_field(j, "ups", rec.ups) || !read_int_field(j, "downs", rec.downs)) {
        return skip("invalid_field");
    }
    if (rec.gilded < 0 || rec.controversiality < 0 || rec.controversiality > 1) {
        return skip("invalid_field");
    }

    if (j.contains("author_flair_text") && j["author_flair_text"].is_string()) {
        rec.flair_text = j["author_flair_text"].get<std::string>();
    }

    rec.kind = rec.id.rfind("t3_", 0) == 0 ? RecordKind::post : RecordKind::comment;

    ParsedLine p;
    p.record = std::move(rec);
    return p;
}

CorpusReader::CorpusReader(const std::string& path, StreamFilter filter)
    : reader_(path), filter_(std::move(filter)) {}

bool CorpusReader::next(CommentRecord& rec) {
    std::string line;
    while (reader_.next(line)) {
        ++stats_.records_read;
        ParsedLine parsed = parse_dump_line(line);
        if (!parsed.ok()) {
            ++stats_.records_skipped;
            ++stats_.skip_reasons[parsed.skip_reason];
            continue;
        }
        if (filter_.subreddits &&
            !filter_.subreddits->count(lower_ascii_copy(parsed.record->subreddit))) {
            ++stats_.records_skipped;
            ++stats_.skip_reasons["filtered"];
            continue;
        }
        if (filter_.authors && !filter_.authors->count(parsed.record->author)) {
            ++stats_.records_skipped;
            ++stats_.skip_reasons["filtered"];
            continue;
        }
        if (users_.insert(parsed.record->author).second) ++stats_.users_seen;
        rec = std::move(*parsed.record);
        return true;
    }
    return false;
}

GroupedRecords group_by_user(std::vector<CommentRecord> records) {
    GroupedRecords grouped;
    for (auto& rec : records) {
        grouped[rec.author].push_back(std::move(rec));
    }
    for (auto& [author, list] : grouped) {
        std::sort(list.begin(), list.end(), [](const CommentRecord& a, const CommentRecord& b) {
            if (a.created_utc != b.created_utc) return a.created_utc < b.created_utc;
            return a.id < b.id;
        });
    }
    return grouped;
}

GroupedRecords read_grouped_corpus(const std::string& path, StreamFilter filter,
                                   CorpusStats* stats_out) {
    CorpusReader reader(path, std::move(filter));
    std::vector<CommentRecord> records;
    CommentRecord rec;
    while (reader.next(rec)) records.push_back(std::move(rec));
    if (stats_out) *stats_out = reader.stats();
    return group_by_user(std::move(records));
}

void write_grouped(const std::string& path, const GroupedRecords& grouped) {
    std::string out;
    for (const auto& [author, list] : grouped) {
        Json j;
        j["author"] = author;
        Json comments = Json::array();
        for (const auto& rec : list) comments.push_back(record_to_json(rec));
        j["comments"] = std::move(comments);
        out += j.dump();
        out += '\n';
    }
    write_text_file(path, out);
}

GroupedRecords read_grouped(const std::string& path) {
    GroupedRecords grouped;
    LineReader reader(path);
    std::string line;
    std::size_t lineno = 0;
    while (reader.next(line)) {
        ++lineno;
        if (line.empty()) continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw DataError(path + ":" + std::to_string(lineno) + ": malformed grouped record");
        }
        try {
            std::string author = j.at("author").get<std::string>();
            auto& list = grouped[author];
            for (const auto& c : j.at("comments")) list.push_back(record_from_json(c));
        } catch (const Json::exception& e) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return grouped;
}

CorpusStats run_ingest(const std::string& input_path,
                       const std::optional<std::string>& subreddits_path,
                       const std::string& out_path) {
    StreamFilter filter;
    if (subreddits_path) {
        std::set<std::string> subs;
        LineReader reader(*subreddits_path);
        std::string line;
        while (reader.next(line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
            if (!line.empty()) subs.insert(lower_ascii_copy(line));
        }
        filter.subreddits = std::move(subs);
    }
    CorpusStats stats;
    GroupedRecords grouped = read_grouped_corpus(input_path, std::move(filter), &stats);
    write_grouped(out_path, grouped);
    return stats;
}

Json stats_to_json(const CorpusStats& stats) {
    Json j;
    j["records_read"] = stats.records_read;
    j["records_skipped"] = stats.records_skipped;
    j["records_accepted"] = stats.accepted();
    j["users_seen"] = stats.users_seen;
    j["skip_reasons"] = stats.skip_reasons;
    return j;
}

}  // namespace psybench
