#include "psybench/textproc.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "psybench/error.hpp"

namespace psybench {

bool is_token_char(unsigned char c) {
    // Non-ASCII bytes count as word characters: UTF-8 sequences stay intact
    // and non-Latin words survive as opaque tokens.
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c >= 0x80;
}

namespace {

bool is_word_byte(unsigned char c) { return is_token_char(c); }

bool is_space_byte(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool starts_url(const std::string& s, std::size_t i) {
    if (i > 0 && is_word_byte(static_cast<unsigned char>(s[i - 1]))) return false;
    return s.compare(i, 7, "http://") == 0 || s.compare(i, 8, "https://") == 0 ||
           s.compare(i, 4, "www.") == 0;
}

// Blanks markdown link targets "](...)" and bare URLs in place.
void blank_links(std::string& s) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == ']' && s[i + 1] == '(') {
            std::size_t close = s.find(')', i + 1);
            if (close == std::string::npos) break;
            for (std::size_t j = i + 1; j <= close; ++j) s[j] = ' ';
            i = close;
        }
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (starts_url(s, i)) {
            while (i < s.size() && !is_space_byte(static_cast<unsigned char>(s[i]))) {
                s[i++] = ' ';
            }
        }
    }
}

}  // namespace

TokenStream tokenize(std::string_view text) {
    std::string s(text);
    // Normalize the typographic apostrophe so "don’t" and "don't" agree.
    for (std::size_t pos; (pos = s.find("\xe2\x80\x99")) != std::string::npos;) {
        s.replace(pos, 3, "'");
    }
    blank_links(s);

    TokenStream tokens;
    std::string cur;
    for (std::size_t i = 0; i < s.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (is_word_byte(c)) {
            if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
            cur.push_back(static_cast<char>(c));
        } else if (c == '\'' && !cur.empty() && i + 1 < s.size() &&
                   is_word_byte(static_cast<unsigned char>(s[i + 1]))) {
            cur.push_back('\'');
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

TokenStream record_tokens(const CommentRecord& rec) {
    if (rec.body == "[deleted]" || rec.body == "[removed]") return {};
    return tokenize(rec.body);
}

TfidfModel fit_tfidf(const std::vector<TokenStream>& docs, int min_df,
                     std::optional<int> max_features) {
    if (min_df < 1) throw ConfigError("tfidf min_df must be >= 1");
    if (max_features && *max_features < 1) throw ConfigError("tfidf max_features must be >= 1");

    // std::map keeps document-frequency iteration in stem order, which makes
    // the whole fit independent of document order.
    std::map<std::string, std::int64_t> df;
    std::int64_t n_nonempty = 0;
    std::vector<std::string> doc_stems;
    for (const auto& doc : docs) {
        if (doc.empty()) continue;
        ++n_nonempty;
        doc_stems.clear();
        doc_stems.reserve(doc.size());
        for (const auto& tok : doc) doc_stems.push_back(porter_stem(tok));
        std::sort(doc_stems.begin(), doc_stems.end());
        doc_stems.erase(std::unique(doc_stems.begin(), doc_stems.end()), doc_stems.end());
        for (const auto& stem : doc_stems) ++df[stem];
    }
    if (n_nonempty == 0) throw DataError("tfidf fit requires at least one non-empty document");

    std::vector<std::pair<std::string, std::int64_t>> candidates;
    for (const auto& [stem, count] : df) {
        if (count >= min_df) candidates.emplace_back(stem, count);
    }
    if (max_features && candidates.size() > static_cast<std::size_t>(*max_features)) {
        std::stable_sort(candidates.begin(), candidates.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        candidates.resize(static_cast<std::size_t>(*max_features));
        std::sort(candidates.begin(), candidates.end());
    }

    TfidfModel model;
    model.doc_count = static_cast<std::int64_t>(docs.size());
    model.min_df = min_df;
    model.max_features = max_features;
    model.vocab.reserve(candidates.size());
    model.idf.reserve(candidates.size());
    for (const auto& [stem, count] : candidates) {
        model.index.emplace(stem, static_cast<std::int32_t>(model.vocab.size()));
        model.vocab.push_back(stem);
        model.idf.push_back(
            std::log((1.0 + static_cast<double>(model.doc_count)) / (1.0 + static_cast<double>(count))) + 1.0);
    }
    return model;
}

SparseVec transform_tfidf(const TfidfModel& model, const TokenStream& doc) {
    std::map<std::int32_t, double> counts;
    for (const auto& tok : doc) {
        auto it = model.index.find(porter_stem(tok));
        if (it != model.index.end()) counts[it->second] += 1.0;
    }
    SparseVec vec;
    vec.reserve(counts.size());
    double norm_sq = 0.0;
    for (const auto& [col, count] : counts) {
        double w = count * model.idf[static_cast<std::size_t>(col)];
        norm_sq += w * w;
        vec.emplace_back(col, w);
    }
    if (norm_sq > 0.0) {
        double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [col, w] : vec) w *= inv;
    }
    return vec;
}

Json TfidfModel::to_json() const {
    Json j;
    j["vocabulary"] = vocab;
    j["idf"] = idf;
    j["doc_count"] = doc_count;
    j["min_df"] = min_df;
    if (max_features) {
        j["max_features"] = *max_features;
    } else {
        j["max_features"] = nullptr;
    }
    return j;
}

TfidfModel TfidfModel::from_json(const Json& j) {
    TfidfModel model;
    model.vocab = j.at("vocabulary").get<std::vector<std::string>>();
    model.idf = j.at("idf").get<std::vector<double>>();
    model.doc_count = j.at("doc_count").get<std::int64_t>();
    model.min_df = j.value("min_df", 1);
    if (j.contains("max_features") && !j["max_features"].is_null()) {
        model.max_features = j["max_features"].get<int>();
    }
    if (model.vocab.size() != model.idf.size()) {
        throw DataError("tfidf model: vocabulary/idf size mismatch");
    }
    for (std::size_t i = 0; i < model.vocab.size(); ++i) {
        model.index.emplace(model.vocab[i], static_cast<std::int32_t>(i));
    }
    return model;
}

void TfidfModel::save(const std::string& path) const { write_json_file(path, to_json()); }

TfidfModel TfidfModel::load(const std::string& path) {
    return from_json(read_json_file(path));
}

}  // namespace psybench
