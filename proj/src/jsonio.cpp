#include "psybench/jsonio.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "psybench/error.hpp"

namespace psybench {

namespace {

constexpr std::size_t kChunk = 1 << 16;

}  // namespace

struct LineReader::Impl {
    FILE* file = nullptr;
    bool gzipped = false;
    z_stream zs{};
    bool zs_init = false;
    bool eof = false;
    std::string buffer;       // decoded bytes not yet returned
    std::size_t buffer_pos = 0;
    unsigned char in[kChunk];
    unsigned char out[kChunk];
    std::string path;

    ~Impl() {
        if (zs_init) inflateEnd(&zs);
        if (file) std::fclose(file);
    }

    // Appends more decoded bytes to buffer; returns false at end of input.
    bool fill() {
        if (eof) return false;
        if (!gzipped) {
            std::size_t n = std::fread(in, 1, kChunk, file);
            if (n == 0) {
                if (std::ferror(file)) throw DataError("read failed: " + path);
                eof = true;
                return false;
            }
            buffer.append(reinterpret_cast<char*>(in), n);
            return true;
        }
        std::size_t n = std::fread(in, 1, kChunk, file);
        if (n == 0) {
            if (std::ferror(file)) throw DataError("read failed: " + path);
            eof = true;
            if (zs.avail_in != 0) throw DataError("truncated gzip stream: " + path);
            return false;
        }
        zs.next_in = in;
        zs.avail_in = static_cast<uInt>(n);
        while (zs.avail_in > 0) {
            zs.next_out = out;
            zs.avail_out = kChunk;
            int rc = inflate(&zs, Z_NO_FLUSH);
            if (rc != Z_OK && rc != Z_STREAM_END) {
                throw DataError("gzip decompression failed: " + path);
            }
            buffer.append(reinterpret_cast<char*>(out), kChunk - zs.avail_out);
            if (rc == Z_STREAM_END) {
                // Support concatenated gzip members.
                if (inflateReset(&zs) != Z_OK) throw DataError("gzip reset failed: " + path);
                if (zs.avail_in == 0) break;
            }
        }
        return true;
    }
};

LineReader::LineReader(const std::string& path) : impl_(std::make_unique<Impl>()) {
    impl_->path = path;
    impl_->file = std::fopen(path.c_str(), "rb");
    if (!impl_->file) throw DataError("cannot open input file: " + path);

    int c0 = std::fgetc(impl_->file);
    int c1 = std::fgetc(impl_->file);
    impl_->gzipped = (c0 == 0x1f && c1 == 0x8b);
    std::rewind(impl_->file);

    if (impl_->gzipped) {
        impl_->zs.zalloc = Z_NULL;
        impl_->zs.zfree = Z_NULL;
        impl_->zs.opaque = Z_NULL;
        // 15 + 16 selects gzip framing.
        if (inflateInit2(&impl_->zs, 15 + 16) != Z_OK) {
            throw InternalError("zlib inflateInit2 failed");
        }
        impl_->zs_init = true;
    }
}

LineReader::~LineReader() = default;

bool LineReader::next(std::string& line) {
    auto& im = *impl_;
    for (;;) {
        std::size_t nl = im.buffer.find('\n', im.buffer_pos);
        if (nl != std::string::npos) {
            line.assign(im.buffer, im.buffer_pos, nl - im.buffer_pos);
            im.buffer_pos = nl + 1;
            if (im.buffer_pos > kChunk) {
                im.buffer.erase(0, im.buffer_pos);
                im.buffer_pos = 0;
            }
            return true;
        }
        if (!im.fill()) {
            if (im.buffer_pos < im.buffer.size()) {
                line.assign(im.buffer, im.buffer_pos, im.buffer.size() - im.buffer_pos);
                im.buffer.clear();
                im.buffer_pos = 0;
                return true;
            }
            return false;
        }
    }
}

Json record_to_json(const CommentRecord& rec) {
    Json j;
    j["id"] = rec.id;
    j["author"] = rec.author;
    j["subreddit"] = rec.subreddit;
    j["created_utc"] = rec.created_utc;
    j["body"] = rec.body;
    j["gilded"] = rec.gilded;
    j["controversiality"] = rec.controversiality;
    j["ups"] = rec.ups;
    j["downs"] = rec.downs;
    if (rec.flair_text) j["author_flair_text"] = *rec.flair_text;
    return j;
}

CommentRecord record_from_json(const Json& j) {
    CommentRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.author = j.at("author").get<std::string>();
    rec.subreddit = j.at("subreddit").get<std::string>();
    rec.created_utc = j.at("created_utc").get<std::int64_t>();
    rec.body = j.at("body").get<std::string>();
    rec.kind = rec.id.rfind("t3_", 0) == 0 ? RecordKind::post : RecordKind::comment;
    rec.gilded = j.value("gilded", 0);
    rec.controversiality = j.value("controversiality", 0);
    rec.ups = j.value("ups", 0);
    rec.downs = j.value("downs", 0);
    if (j.contains("author_flair_text") && !j["author_flair_text"].is_null()) {
        rec.flair_text = j["author_flair_text"].get<std::string>();
    }
    return rec;
}

Json userdoc_to_json(const UserDoc& doc) {
    Json j;
    j["author"] = doc.author;
    j["label"] = to_string(doc.label);
    j["token_count"] = doc.token_count;
    j["categories"] = doc.categories;  // std::set keeps them sorted
    Json comments = Json::array();
    for (const auto& rec : doc.comments) comments.push_back(record_to_json(rec));
    j["comments"] = std::move(comments);
    return j;
}

UserDoc userdoc_from_json(const Json& j) {
    UserDoc doc;
    doc.author = j.at("author").get<std::string>();
    std::string label = j.at("label").get<std::string>();
    if (label == "bipolar") {
        doc.label = GroupLabel::bipolar;
    } else if (label == "control") {
        doc.label = GroupLabel::control;
    } else {
        throw DataError("unknown user label: " + label);
    }
    doc.token_count = j.value("token_count", std::int64_t{0});
    if (j.contains("categories")) {
        for (const auto& c : j["categories"]) doc.categories.insert(c.get<std::string>());
    }
    for (const auto& c : j.at("comments")) doc.comments.push_back(record_from_json(c));
    return doc;
}

std::vector<UserDoc> read_userdocs(const std::string& path) {
    std::vector<UserDoc> docs;
    LineReader reader(path);
    std::string line;
    std::size_t lineno = 0;
    while (reader.next(line)) {
        ++lineno;
        if (line.empty()) continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw DataError(path + ":" + std::to_string(lineno) + ": malformed user record");
        }
        try {
            docs.push_back(userdoc_from_json(j));
        } catch (const Json::exception& e) {
            throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return docs;
}

void write_userdocs(const std::string& path, const std::vector<UserDoc>& docs) {
    std::string out;
    for (const auto& doc : docs) {
        out += userdoc_to_json(doc).dump();
        out += '\n';
    }
    write_text_file(path, out);
}

Json read_json_file(const std::string& path) {
    std::string text = read_text_file(path);
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw DataError("malformed JSON file: " + path);
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open output file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace psybench
