#include <string>
#include <string_view>

#include "psybench/textproc.hpp"

// Porter's suffix-stripping algorithm, as published in 1980. The word is
// viewed as [C](VC)^m[V]; every rule below is "suffix -> replacement, given
// a condition on the remaining stem", and within a step only the longest
// matching suffix is considered.

namespace psybench {

namespace {

bool is_consonant(const std::string& w, std::size_t i) {
    switch (w[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return false;
        case 'y':
            // y is a vowel exactly when it follows a consonant.
            return i == 0 ? true : !is_consonant(w, i - 1);
        default:
            return true;
    }
}

// Number of VC sequences in w[0..len).
int measure(const std::string& w, std::size_t len) {
    int m = 0;
    for (std::size_t i = 1; i < len; ++i) {
        if (is_consonant(w, i) && !is_consonant(w, i - 1)) ++m;
    }
    return m;
}

bool has_vowel(const std::string& w, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
        if (!is_consonant(w, i)) return true;
    }
    return false;
}

bool ends_double_consonant(const std::string& w) {
    std::size_t n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// *o: stem ends consonant-vowel-consonant and the final consonant is not
// w, x or y.
bool ends_cvc(const std::string& w, std::size_t len) {
    if (len < 3) return false;
    if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) || !is_consonant(w, len - 1)) {
        return false;
    }
    char c = w[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
    return w.size() >= suffix.size() &&
           w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
    int min_measure;  // condition: m(stem) > min_measure
};

// Applies the longest matching rule from the list; returns true if any
// suffix matched (even when its measure condition failed, in which case the
// word is left alone — shorter suffixes are not retried).
bool apply_rules(std::string& w, const Rule* rules, std::size_t n_rules) {
    const Rule* best = nullptr;
    for (std::size_t i = 0; i < n_rules; ++i) {
        if (ends_with(w, rules[i].suffix)) {
            if (!best || rules[i].suffix.size() > best->suffix.size()) best = &rules[i];
        }
    }
    if (!best) return false;
    std::size_t stem_len = w.size() - best->suffix.size();
    if (measure(w, stem_len) > best->min_measure) {
        w.resize(stem_len);
        w.append(best->replacement);
    }
    return true;
}

void step1a(std::string& w) {
    if (ends_with(w, "sses")) {
        w.resize(w.size() - 2);
    } else if (ends_with(w, "ies")) {
        w.resize(w.size() - 2);
    } else if (ends_with(w, "ss")) {
        // unchanged
    } else if (ends_with(w, "s")) {
        w.resize(w.size() - 1);
    }
}

void step1b(std::string& w) {
    if (ends_with(w, "eed")) {
        if (measure(w, w.size() - 3) > 0) w.resize(w.size() - 1);
        return;
    }
    bool stripped = false;
    if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
        w.resize(w.size() - 2);
        stripped = true;
    } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
        w.resize(w.size() - 3);
        stripped = true;
    }
    if (!stripped) return;

    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
        w.push_back('e');
    } else if (ends_double_consonant(w)) {
        char c = w.back();
        if (c != 'l' && c != 's' && c != 'z') w.pop_back();
    } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
        w.push_back('e');
    }
}

void step1c(std::string& w) {
    if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) {
        w.back() = 'i';
    }
}

void step2(std::string& w) {
    static constexpr Rule rules[] = {
        {"ational", "ate", 0}, {"tional", "tion", 0}, {"enci", "ence", 0},
        {"anci", "ance", 0},   {"izer", "ize", 0},    {"abli", "able", 0},
        {"alli", "al", 0},     {"entli", "ent", 0},   {"eli", "e", 0},
        {"ousli", "ous", 0},   {"ization", "ize", 0}, {"ation", "ate", 0},
        {"ator", "ate", 0},    {"alism", "al", 0},    {"iveness", "ive", 0},
        {"fulness", "ful", 0}, {"ousness", "ous", 0}, {"aliti", "al", 0},
        {"iviti", "ive", 0},   {"biliti", "ble", 0},
    };
    apply_rules(w, rules, std::size(rules));
}

void step3(std::string& w) {
    static constexpr Rule rules[] = {
        {"icate", "ic", 0}, {"ative", "", 0}, {"alize", "al", 0},
        {"iciti", "ic", 0}, {"ical", "ic", 0}, {"ful", "", 0},
        {"ness", "", 0},
    };
    apply_rules(w, rules, std::size(rules));
}

void step4(std::string& w) {
    static constexpr Rule rules[] = {
        {"al", "", 1},    {"ance", "", 1}, {"ence", "", 1}, {"er", "", 1},
        {"ic", "", 1},    {"able", "", 1}, {"ible", "", 1}, {"ant", "", 1},
        {"ement", "", 1}, {"ment", "", 1}, {"ent", "", 1},  {"ou", "", 1},
        {"ism", "", 1},   {"ate", "", 1},  {"iti", "", 1},  {"ous", "", 1},
        {"ive", "", 1},   {"ize", "", 1},
    };
    // "ion" carries an extra stem condition (*S or *T). No other suffix in
    // the step ends in "ion", so when it matches it is the longest match.
    if (ends_with(w, "ion")) {
        std::size_t stem_len = w.size() - 3;
        if (stem_len > 0 && (w[stem_len - 1] == 's' || w[stem_len - 1] == 't') &&
            measure(w, stem_len) > 1) {
            w.resize(stem_len);
        }
        return;
    }
    apply_rules(w, rules, std::size(rules));
}

void step5a(std::string& w) {
    if (!ends_with(w, "e")) return;
    std::size_t stem_len = w.size() - 1;
    int m = measure(w, stem_len);
    if (m > 1 || (m == 1 && !ends_cvc(w, stem_len))) {
        w.pop_back();
    }
}

void step5b(std::string& w) {
    if (w.back() == 'l' && ends_double_consonant(w) && measure(w, w.size()) > 1) {
        w.pop_back();
    }
}

}  // namespace

std::string porter_stem(std::string_view word) {
    std::string w(word);
    if (w.size() <= 2) return w;  // one- and two-letter words are left alone
    for (char c : w) {
        if (c < 'a' || c > 'z') return w;
    }
    step1a(w);
    step1b(w);
    step1c(w);
    step2(w);
    step3(w);
    step4(w);
    step5a(w);
    step5b(w);
    return w;
}

}  // namespace psybench
