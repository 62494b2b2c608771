#pragma once

#include <functional>
#include <memory>
#include <string>

#include <json.hpp>

#include "psybench/types.hpp"

namespace psybench {

// All file-bound JSON goes through ordered_json so that reruns produce
// byte-identical artifacts.
using Json = nlohmann::ordered_json;

// Reads a text file line by line, transparently inflating gzip input
// (detected by the 1f 8b magic bytes, not the file name).
class LineReader {
public:
    explicit LineReader(const std::string& path);
    ~LineReader();

    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    // Returns false at end of input. The returned line has no trailing '\n'.
    bool next(std::string& line);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Json record_to_json(const CommentRecord& rec);
CommentRecord record_from_json(const Json& j);

Json userdoc_to_json(const UserDoc& doc);
UserDoc userdoc_from_json(const Json& j);

// Reads one UserDoc per JSONL line.
std::vector<UserDoc> read_userdocs(const std::string& path);
void write_userdocs(const std::string& path, const std::vector<UserDoc>& docs);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

// Writes content atomically enough for our purposes (truncate + write);
// throws DataError on I/O failure.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace psybench
