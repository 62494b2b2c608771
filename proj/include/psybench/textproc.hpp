#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "psybench/jsonio.hpp"

namespace psybench {

using TokenStream = std::vector<std::string>;

// ASCII alphanumerics and all non-ASCII bytes count as word characters.
bool is_token_char(unsigned char c);

// Lowercased word tokens. Splits on non-alphanumeric boundaries, keeps
// internal apostrophes ("i'm" stays one token), drops URLs and markdown
// link targets. Non-ASCII bytes are treated as word characters, so UTF-8
// sequences are never split mid-codepoint.
TokenStream tokenize(std::string_view text);

// Classic Porter suffix-stripping stemmer. Input is expected to be a
// lowercase token; anything containing a character outside [a-z] (and
// words of one or two letters) passes through unchanged.
std::string porter_stem(std::string_view word);

// Tokens of a record body. Bodies that are exactly the "[deleted]" or
// "[removed]" sentinel yield no tokens.
TokenStream record_tokens(const CommentRecord& rec);

struct TfidfModel {
    std::vector<std::string> vocab;  // dense indices, lexicographic stem order
    std::unordered_map<std::string, std::int32_t> index;
    std::vector<double> idf;
    std::int64_t doc_count = 0;
    int min_df = 1;
    std::optional<int> max_features;

    std::size_t size() const { return vocab.size(); }

    Json to_json() const;
    static TfidfModel from_json(const Json& j);
    void save(const std::string& path) const;
    static TfidfModel load(const std::string& path);
};

// Sparse tf-idf weight vector: (column, weight) pairs sorted by column.
using SparseVec = std::vector<std::pair<std::int32_t, double>>;

// Builds a stem vocabulary with document frequency >= min_df, truncated to
// the max_features highest-df stems (ties broken lexicographically).
// idf(t) = ln((1+N)/(1+df(t))) + 1.
TfidfModel fit_tfidf(const std::vector<TokenStream>& docs, int min_df,
                     std::optional<int> max_features = std::nullopt);

// Raw term count x idf, L2-normalized. Out-of-vocabulary stems are ignored;
// a document with no in-vocabulary stems maps to the zero vector.
SparseVec transform_tfidf(const TfidfModel& model, const TokenStream& doc);

}  // namespace psybench
