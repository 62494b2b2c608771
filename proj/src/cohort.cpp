#include "psybench/cohort.hpp"

#include <algorithm>

#include "psybench/error.hpp"
#include "psybench/textproc.hpp"

namespace psybench {

namespace {

std::set<std::string> lower_set(const std::set<std::string>& in) {
    std::set<std::string> out;
    for (const auto& s : in) out.insert(lower_ascii_copy(s));
    return out;
}

// Consecutive-token subsequence search.
bool contains_token_seq(const TokenStream& haystack, const TokenStream& needle) {
    if (needle.empty() || haystack.size() < needle.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        if (std::equal(needle.begin(), needle.end(), haystack.begin() + static_cast<std::ptrdiff_t>(i))) {
            return true;
        }
    }
    return false;
}

std::vector<TokenStream> tokenize_patterns(const std::vector<std::string>& patterns) {
    std::vector<TokenStream> out;
    out.reserve(patterns.size());
    for (const auto& p : patterns) out.push_back(tokenize(p));
    return out;
}

std::int64_t total_tokens(const std::vector<CommentRecord>& comments) {
    std::int64_t n = 0;
    for (const auto& rec : comments) {
        n += static_cast<std::int64_t>(record_tokens(rec).size());
    }
    return n;
}

}  // namespace

std::set<std::string> CohortConfig::disorder_subreddits_lower() const {
    std::set<std::string> out = lower_set(bipolar_subreddits);
    for (const auto& s : mentalhealth_subreddits) out.insert(lower_ascii_copy(s));
    return out;
}

bool detect_self_report(std::string_view body, const std::vector<std::string>& patterns) {
    TokenStream tokens = tokenize(body);
    if (tokens.empty()) return false;
    for (const auto& pattern : patterns) {
        if (contains_token_seq(tokens, tokenize(pattern))) return true;
    }
    return false;
}

bool detect_flair(const std::optional<std::string>& flair_text,
                  const std::vector<std::string>& keywords) {
    if (!flair_text) return false;
    std::string flair = lower_ascii_copy(*flair_text);
    for (const auto& kw : keywords) {
        if (flair.find(lower_ascii_copy(kw)) != std::string::npos) return true;
    }
    return false;
}

bool contains_whole_word(std::string_view body, std::string_view word) {
    if (word.empty()) return false;
    std::string haystack = lower_ascii_copy(body);
    std::string needle = lower_ascii_copy(word);
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || !is_token_char(static_cast<unsigned char>(haystack[pos - 1]));
        std::size_t end = pos + needle.size();
        bool right_ok =
            end == haystack.size() || !is_token_char(static_cast<unsigned char>(haystack[end]));
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

std::set<std::string> build_bipolar_cohort(const GroupedRecords& corpus, const CohortConfig& cfg) {
    const std::set<std::string> disorder = cfg.disorder_subreddits_lower();
    const std::vector<TokenStream> patterns = tokenize_patterns(cfg.self_report_patterns);

    std::set<std::string> authors;
    for (const auto& [author, comments] : corpus) {
        for (const auto& rec : comments) {
            if (!cfg.self_report_global && !disorder.count(lower_ascii_copy(rec.subreddit))) {
                continue;
            }
            bool hit = detect_flair(rec.flair_text, cfg.flair_keywords);
            if (!hit) {
                for (const auto& pattern : patterns) {
                    if (contains_token_seq(record_tokens(rec), pattern)) {
                        hit = true;
                        break;
                    }
                }
            }
            if (hit) {
                authors.insert(author);
                break;
            }
        }
    }
    return authors;
}

PruneResult prune_user(const std::string& author, const std::vector<CommentRecord>& comments,
                       const CohortConfig& cfg) {
    const std::set<std::string> disorder = cfg.disorder_subreddits_lower();

    UserDoc doc;
    doc.author = author;
    doc.label = GroupLabel::bipolar;
    for (const auto& rec : comments) {
        if (disorder.count(lower_ascii_copy(rec.subreddit))) continue;
        bool mentions = false;
        for (const auto& word : cfg.mention_words) {
            if (contains_whole_word(rec.body, word)) {
                mentions = true;
                break;
            }
        }
        if (mentions) continue;
        doc.token_count += static_cast<std::int64_t>(record_tokens(rec).size());
        doc.comments.push_back(rec);
    }

    PruneResult result;
    if (doc.token_count < cfg.min_words) {
        result.reject_reason = "below_min_words";
        return result;
    }
    result.doc = std::move(doc);
    return result;
}

std::set<std::string> select_control(const GroupedRecords& corpus,
                                     const std::set<std::string>& bipolar_authors,
                                     const CohortConfig& cfg) {
    // Comment share of the bipolar group per subreddit.
    std::map<std::string, std::int64_t> bip_comments;
    std::int64_t bip_total = 0;
    for (const auto& author : bipolar_authors) {
        auto it = corpus.find(author);
        if (it == corpus.end()) continue;
        for (const auto& rec : it->second) {
            ++bip_comments[lower_ascii_copy(rec.subreddit)];
            ++bip_total;
        }
    }
    std::set<std::string> eligible;
    if (bip_total > 0 && !bip_comments.empty()) {
        double mean_share = 1.0 / static_cast<double>(bip_comments.size());
        for (const auto& [sub, count] : bip_comments) {
            double share = static_cast<double>(count) / static_cast<double>(bip_total);
            if (share > mean_share) eligible.insert(sub);
        }
    }

    const std::set<std::string> disorder = cfg.disorder_subreddits_lower();
    std::set<std::string> selected;
    for (const auto& [author, comments] : corpus) {
        if (bipolar_authors.count(author)) continue;
        bool in_eligible = false;
        std::int64_t mh_tokens = 0;
        std::int64_t all_tokens = 0;
        for (const auto& rec : comments) {
            std::string sub = lower_ascii_copy(rec.subreddit);
            if (eligible.count(sub)) in_eligible = true;
            std::int64_t n = static_cast<std::int64_t>(record_tokens(rec).size());
            all_tokens += n;
            if (disorder.count(sub)) mh_tokens += n;
        }
        if (in_eligible && mh_tokens <= cfg.control_mh_max_words && all_tokens >= cfg.min_words) {
            selected.insert(author);
        }
    }
    return selected;
}

std::set<std::string> assign_topic_categories(const UserDoc& user, const CohortConfig& cfg) {
    // Token counts per subreddit, then per category.
    std::map<std::string, std::int64_t> sub_tokens;
    for (const auto& rec : user.comments) {
        sub_tokens[lower_ascii_copy(rec.subreddit)] +=
            static_cast<std::int64_t>(record_tokens(rec).size());
    }
    std::set<std::string> categories;
    for (const auto& [category, subs] : cfg.category_map) {
        std::int64_t n = 0;
        for (const auto& sub : subs) {
            auto it = sub_tokens.find(lower_ascii_copy(sub));
            if (it != sub_tokens.end()) n += it->second;
        }
        if (n >= cfg.category_min_words) categories.insert(category);
    }
    return categories;
}

CohortResult build_cohorts(const GroupedRecords& corpus, const CohortConfig& cfg) {
    CohortResult result;
    std::set<std::string> bip_authors = build_bipolar_cohort(corpus, cfg);

    std::map<std::string, std::uint64_t> reject_reasons;
    for (const auto& author : bip_authors) {
        auto it = corpus.find(author);
        if (it == corpus.end()) continue;
        PruneResult pruned = prune_user(author, it->second, cfg);
        if (!pruned.doc) {
            ++reject_reasons[pruned.reject_reason];
            continue;
        }
        pruned.doc->categories = assign_topic_categories(*pruned.doc, cfg);
        result.bipolar.push_back(std::move(*pruned.doc));
    }

    std::set<std::string> ctrl_authors = select_control(corpus, bip_authors, cfg);
    for (const auto& author : ctrl_authors) {
        const auto& comments = corpus.at(author);
        UserDoc doc;
        doc.author = author;
        doc.label = GroupLabel::control;
        doc.comments = comments;
        doc.token_count = total_tokens(comments);
        doc.categories = assign_topic_categories(doc, cfg);
        result.control.push_back(std::move(doc));
    }

    // GroupedRecords iteration is already author-sorted; keep the output
    // order explicit anyway.
    auto by_author = [](const UserDoc& a, const UserDoc& b) { return a.author < b.author; };
    std::sort(result.bipolar.begin(), result.bipolar.end(), by_author);
    std::sort(result.control.begin(), result.control.end(), by_author);

    result.stats["bipolar_detected"] = bip_authors.size();
    result.stats["bipolar_admitted"] = result.bipolar.size();
    result.stats["bipolar_rejected"] = reject_reasons;
    result.stats["control_admitted"] = result.control.size();
    return result;
}

CohortConfig CohortConfig::from_json(const Json& j) {
    CohortConfig cfg;
    auto read_set = [&](const char* key, std::set<std::string>& target) {
        if (j.contains(key)) {
            target.clear();
            for (const auto& s : j.at(key)) target.insert(s.get<std::string>());
        }
    };
    auto read_list = [&](const char* key, std::vector<std::string>& target) {
        if (j.contains(key)) {
            target.clear();
            for (const auto& s : j.at(key)) target.push_back(s.get<std::string>());
        }
    };
    read_set("bipolar_subreddits", cfg.bipolar_subreddits);
    read_set("mentalhealth_subreddits", cfg.mentalhealth_subreddits);
    read_list("self_report_patterns", cfg.self_report_patterns);
    read_list("flair_keywords", cfg.flair_keywords);
    read_set("mention_words", cfg.mention_words);
    cfg.min_words = j.value("min_words", cfg.min_words);
    cfg.control_mh_max_words = j.value("control_mh_max_words", cfg.control_mh_max_words);
    cfg.category_min_words = j.value("category_min_words", cfg.category_min_words);
    cfg.self_report_global = j.value("self_report_global", cfg.self_report_global);
    if (j.contains("category_map")) {
        for (const auto& [category, subs] : j.at("category_map").items()) {
            std::set<std::string> set;
            for (const auto& s : subs) set.insert(s.get<std::string>());
            cfg.category_map[category] = std::move(set);
        }
    }
    if (cfg.min_words <= 0) throw ConfigError("cohort min_words must be positive");
    if (cfg.control_mh_max_words < 0) throw ConfigError("control_mh_max_words must be >= 0");
    if (cfg.category_min_words <= 0) throw ConfigError("category_min_words must be positive");
    return cfg;
}

Json CohortConfig::to_json() const {
    Json j;
    j["bipolar_subreddits"] = bipolar_subreddits;
    j["mentalhealth_subreddits"] = mentalhealth_subreddits;
    j["self_report_patterns"] = self_report_patterns;
    j["flair_keywords"] = flair_keywords;
    j["mention_words"] = mention_words;
    j["min_words"] = min_words;
    j["control_mh_max_words"] = control_mh_max_words;
    j["category_min_words"] = category_min_words;
    j["self_report_global"] = self_report_global;
    j["category_map"] = category_map;
    return j;
}

CohortConfig CohortConfig::load(const std::string& path) {
    return from_json(read_json_file(path));
}

}  // namespace psybench
