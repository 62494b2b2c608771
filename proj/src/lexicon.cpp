#include "psybench/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "psybench/error.hpp"

namespace psybench {

namespace {

const std::vector<std::int32_t> kNoCategories;

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::vector<std::string> split_tabs(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (start <= line.size()) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void parse_fail(std::size_t lineno, const std::string& msg) {
    throw DataError("dic line " + std::to_string(lineno) + ": " + msg);
}

}  // namespace

std::int32_t Lexicon::trie_child(std::int32_t node, unsigned char c) const {
    for (const auto& [ch, idx] : trie_[static_cast<std::size_t>(node)].children) {
        if (ch == c) return idx;
    }
    return -1;
}

std::int32_t Lexicon::trie_insert(std::string_view prefix) {
    if (trie_.empty()) trie_.emplace_back();
    std::int32_t node = 0;
    for (unsigned char c : prefix) {
        std::int32_t next = trie_child(node, c);
        if (next < 0) {
            next = static_cast<std::int32_t>(trie_.size());
            trie_.emplace_back();
            trie_[static_cast<std::size_t>(node)].children.emplace_back(c, next);
        }
        node = next;
    }
    return node;
}

Lexicon Lexicon::parse(std::string_view text) {
    Lexicon lex;
    lex.trie_.emplace_back();

    std::istringstream stream{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    int delimiters_seen = 0;
    std::map<int, std::int32_t> id_to_slot;

    // word -> set of category slots, merged across duplicate lines.
    std::map<std::string, std::set<std::int32_t>> exact_sets;
    std::map<std::string, std::set<std::int32_t>> prefix_sets;

    while (std::getline(stream, raw)) {
        ++lineno;
        std::string_view line = trim(raw);
        if (line.empty()) continue;
        if (line == "%") {
            ++delimiters_seen;
            continue;
        }
        if (delimiters_seen == 0) {
            parse_fail(lineno, "expected '%' before category declarations");
        }
        auto fields = split_tabs(line);
        if (delimiters_seen == 1) {
            // Category declaration: id <TAB> name.
            if (fields.size() < 2) parse_fail(lineno, "category line needs id<TAB>name");
            int id = 0;
            try {
                id = std::stoi(fields[0]);
            } catch (...) {
                parse_fail(lineno, "category id is not an integer: " + fields[0]);
            }
            std::string name(trim(fields[1]));
            if (name.empty()) parse_fail(lineno, "empty category name");
            if (id_to_slot.count(id)) parse_fail(lineno, "duplicate category id");
            if (lex.name_to_slot_.count(name)) parse_fail(lineno, "duplicate category name: " + name);
            std::int32_t slot = static_cast<std::int32_t>(lex.category_names_.size());
            id_to_slot[id] = slot;
            lex.name_to_slot_[name] = slot;
            lex.category_names_.push_back(std::move(name));
            continue;
        }
        // Entry line: word <TAB> id...
        if (fields.size() < 2) parse_fail(lineno, "entry line needs word<TAB>id...");
        std::string word = lower_ascii(trim(fields[0]));
        if (word.empty()) parse_fail(lineno, "empty entry word");
        bool is_prefix = word.back() == '*';
        if (is_prefix) word.pop_back();
        if (word.empty()) parse_fail(lineno, "bare '*' entry");
        if (word.find('*') != std::string::npos) {
            parse_fail(lineno, "'*' is only allowed at the end of an entry");
        }
        auto& target = is_prefix ? prefix_sets[word] : exact_sets[word];
        for (std::size_t i = 1; i < fields.size(); ++i) {
            std::string_view f = trim(fields[i]);
            if (f.empty()) continue;
            int id = 0;
            try {
                id = std::stoi(std::string(f));
            } catch (...) {
                parse_fail(lineno, "category id is not an integer: " + std::string(f));
            }
            auto it = id_to_slot.find(id);
            if (it == id_to_slot.end()) {
                parse_fail(lineno, "entry references undeclared category id " + std::to_string(id));
            }
            target.insert(it->second);
        }
        if (target.empty()) parse_fail(lineno, "entry has no category ids");
    }
    if (delimiters_seen < 2) {
        throw DataError("dic file: missing '%' delimiters around the category block");
    }

    for (const auto& [word, slots] : exact_sets) {
        std::vector<std::int32_t> v(slots.begin(), slots.end());
        lex.exact_.emplace(word, static_cast<std::int32_t>(lex.entry_sets_.size()));
        lex.entry_sets_.push_back(std::move(v));
    }
    for (const auto& [word, slots] : prefix_sets) {
        std::vector<std::int32_t> v(slots.begin(), slots.end());
        std::int32_t node = lex.trie_insert(word);
        lex.trie_[static_cast<std::size_t>(node)].entry =
            static_cast<std::int32_t>(lex.entry_sets_.size());
        lex.entry_sets_.push_back(std::move(v));
        ++lex.prefix_count_;
    }
    return lex;
}

Lexicon Lexicon::load(const std::string& path) {
    return parse(read_text_file(path));
}

std::int32_t Lexicon::category_slot(std::string_view name) const {
    auto it = name_to_slot_.find(std::string(name));
    return it == name_to_slot_.end() ? -1 : it->second;
}

const std::vector<std::int32_t>& Lexicon::match_token(std::string_view token) const {
    auto it = exact_.find(std::string(token));
    if (it != exact_.end()) return entry_sets_[static_cast<std::size_t>(it->second)];

    std::int32_t node = 0;
    std::int32_t best = -1;
    for (unsigned char c : token) {
        node = trie_child(node, c);
        if (node < 0) break;
        if (trie_[static_cast<std::size_t>(node)].entry >= 0) {
            best = trie_[static_cast<std::size_t>(node)].entry;
        }
    }
    return best >= 0 ? entry_sets_[static_cast<std::size_t>(best)] : kNoCategories;
}

CategoryProfile Lexicon::profile(const TokenStream& tokens,
                                 const std::vector<SummaryVariableDef>& summaries) const {
    if (tokens.empty()) throw DataError("cannot profile an empty token stream");
    std::vector<std::int64_t> counts(category_names_.size(), 0);
    for (const auto& tok : tokens) {
        for (std::int32_t slot : match_token(tok)) ++counts[static_cast<std::size_t>(slot)];
    }
    CategoryProfile prof;
    prof.token_count = static_cast<std::int64_t>(tokens.size());
    prof.percent.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        prof.percent[i] = 100.0 * static_cast<double>(counts[i]) /
                          static_cast<double>(prof.token_count);
    }
    prof.summary.reserve(summaries.size());
    for (const auto& def : summaries) {
        prof.summary.push_back(summary_value(def, *this, prof.percent));
    }
    return prof;
}

double summary_value(const SummaryVariableDef& def, const Lexicon& lex,
                     const std::vector<double>& percent) {
    double x = def.intercept;
    for (const auto& [name, weight] : def.weights) {
        std::int32_t slot = lex.category_slot(name);
        if (slot < 0) {
            throw ConfigError("summary variable '" + def.name +
                              "' references unknown category '" + name + "'");
        }
        x += weight * percent[static_cast<std::size_t>(slot)];
    }
    if (def.transform == SummaryVariableDef::Transform::logistic100) {
        return 100.0 / (1.0 + std::exp(-x));
    }
    return x;
}

std::vector<std::string> Lexicon::exact_words_in_category(std::string_view name) const {
    std::int32_t slot = category_slot(name);
    std::vector<std::string> words;
    if (slot < 0) return words;
    for (const auto& [word, entry] : exact_) {
        const auto& slots = entry_sets_[static_cast<std::size_t>(entry)];
        if (std::find(slots.begin(), slots.end(), slot) != slots.end()) {
            words.push_back(word);
        }
    }
    std::sort(words.begin(), words.end());
    return words;
}

std::vector<SummaryVariableDef> parse_summary_defs(const Json& j) {
    if (!j.is_array()) throw ConfigError("summary definitions must be a JSON array");
    std::vector<SummaryVariableDef> defs;
    for (const auto& item : j) {
        SummaryVariableDef def;
        def.name = item.at("name").get<std::string>();
        def.intercept = item.value("intercept", 0.0);
        std::string transform = item.value("transform", "linear");
        if (transform == "linear") {
            def.transform = SummaryVariableDef::Transform::linear;
        } else if (transform == "logistic100") {
            def.transform = SummaryVariableDef::Transform::logistic100;
        } else {
            throw ConfigError("unknown summary transform: " + transform);
        }
        if (item.contains("weights")) {
            for (const auto& [name, w] : item["weights"].items()) {
                def.weights.emplace_back(name, w.get<double>());
            }
        }
        std::sort(def.weights.begin(), def.weights.end());
        defs.push_back(std::move(def));
    }
    return defs;
}

std::vector<SummaryVariableDef> load_summary_defs(const std::string& path) {
    return parse_summary_defs(read_json_file(path));
}

std::string category_lists_to_dic(std::string_view text) {
    std::istringstream stream{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    std::vector<std::string> categories;
    std::map<std::string, std::set<int>> words;  // word -> category ids
    while (std::getline(stream, raw)) {
        ++lineno;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) {
            throw DataError("category list line " + std::to_string(lineno) +
                            ": expected 'category: word, word, ...'");
        }
        std::string category = lower_ascii(trim(line.substr(0, colon)));
        if (category.empty()) {
            throw DataError("category list line " + std::to_string(lineno) + ": empty category");
        }
        auto found = std::find(categories.begin(), categories.end(), category);
        int id;
        if (found == categories.end()) {
            categories.push_back(category);
            id = static_cast<int>(categories.size());
        } else {
            id = static_cast<int>(found - categories.begin()) + 1;
        }
        std::string_view rest = line.substr(colon + 1);
        std::size_t start = 0;
        while (start <= rest.size()) {
            std::size_t comma = rest.find(',', start);
            std::string_view piece =
                comma == std::string_view::npos ? rest.substr(start) : rest.substr(start, comma - start);
            std::string word = lower_ascii(trim(piece));
            if (!word.empty()) words[word].insert(id);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }
    std::ostringstream out;
    out << "%\n";
    for (std::size_t i = 0; i < categories.size(); ++i) {
        out << (i + 1) << '\t' << categories[i] << '\n';
    }
    out << "%\n";
    for (const auto& [word, ids] : words) {
        out << word;
        for (int id : ids) out << '\t' << id;
        out << '\n';
    }
    return out.str();
}

}  // namespace psybench
