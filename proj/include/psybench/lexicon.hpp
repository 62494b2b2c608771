#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "psybench/jsonio.hpp"
#include "psybench/textproc.hpp"

namespace psybench {

// Composite score computed from category percentages, e.g. the usual
// "summary variables" shipped with commercial dictionaries. Definitions are
// data, not code, since the real formulas are proprietary.
struct SummaryVariableDef {
    enum class Transform { linear, logistic100 };

    std::string name;
    std::vector<std::pair<std::string, double>> weights;  // category name -> weight
    double intercept = 0.0;
    Transform transform = Transform::linear;
};

std::vector<SummaryVariableDef> parse_summary_defs(const Json& j);
std::vector<SummaryVariableDef> load_summary_defs(const std::string& path);

struct CategoryProfile {
    std::vector<double> percent;   // aligned to Lexicon category order
    std::int64_t token_count = 0;
    std::vector<double> summary;   // aligned to the summary definition list
};

// Word -> category dictionary in the tab-separated ".dic" convention:
// a category block between two '%' lines (id<TAB>name), then entry lines
// (word<TAB>id...). A trailing '*' marks a prefix entry.
class Lexicon {
public:
    static Lexicon parse(std::string_view text);
    static Lexicon load(const std::string& path);

    std::size_t category_count() const { return category_names_.size(); }
    const std::vector<std::string>& category_names() const { return category_names_; }

    // Slot of a category name in declaration order, or -1.
    std::int32_t category_slot(std::string_view name) const;

    // Category slots for a lowercase token: the exact entry if present,
    // otherwise the longest matching prefix entry, otherwise empty.
    const std::vector<std::int32_t>& match_token(std::string_view token) const;

    // Percentage of tokens per category plus summary variables. Throws
    // DataError on an empty token stream.
    CategoryProfile profile(const TokenStream& tokens,
                            const std::vector<SummaryVariableDef>& summaries = {}) const;

    // Words usable as generation pools: exact entries tagged with the given
    // category, in lexicographic order.
    std::vector<std::string> exact_words_in_category(std::string_view name) const;

    std::size_t exact_entry_count() const { return exact_.size(); }
    std::size_t prefix_entry_count() const { return prefix_count_; }

private:
    struct TrieNode {
        std::vector<std::pair<unsigned char, std::int32_t>> children;
        std::int32_t entry = -1;  // index into entry_sets_, -1 if none
    };

    std::int32_t trie_child(std::int32_t node, unsigned char c) const;
    std::int32_t trie_insert(std::string_view prefix);

    std::vector<std::string> category_names_;
    std::unordered_map<std::string, std::int32_t> name_to_slot_;
    std::unordered_map<std::string, std::int32_t> exact_;  // word -> entry set
    std::vector<std::vector<std::int32_t>> entry_sets_;
    std::vector<TrieNode> trie_;
    std::size_t prefix_count_ = 0;
};

// Converts "category: word, word, ..." line format (one category per line)
// to .dic text, numbering categories in order of first appearance.
std::string category_lists_to_dic(std::string_view text);

double summary_value(const SummaryVariableDef& def, const Lexicon& lex,
                     const std::vector<double>& percent);

}  // namespace psybench
