#include "psybench/userfeat.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "psybench/error.hpp"

namespace psybench {

namespace {

double percentile(const std::vector<double>& sorted, double q) {
    // Linear interpolation at rank q*(n-1).
    double rank = q * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= sorted.size()) return sorted.back();
    double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

void append_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    out.append(buf, ptr);
}

}  // namespace

const std::vector<std::string>& BehavioralFeatures::feature_names() {
    static const std::vector<std::string> names = {
        "post_comment_ratio", "gilded_count",   "mean_controversiality", "mean_score_diff",
        "interval_mean",      "interval_median", "interval_p10",          "interval_p25",
        "interval_p75",       "interval_p90",    "interval_mode",         "interval_defined",
    };
    return names;
}

std::vector<double> BehavioralFeatures::to_row() const {
    return {post_comment_ratio, gilded_count,   mean_controversiality, mean_score_diff,
            interval_mean,      interval_median, interval_p10,          interval_p25,
            interval_p75,       interval_p90,    interval_mode,         interval_defined ? 1.0 : 0.0};
}

void interval_stats(const std::vector<std::int64_t>& timestamps, BehavioralFeatures& out) {
    if (timestamps.size() < 2) {
        out.interval_defined = false;
        return;
    }
    std::vector<double> intervals;
    intervals.reserve(timestamps.size() - 1);
    double sum = 0.0;
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        double d = static_cast<double>(timestamps[i] - timestamps[i - 1]);
        intervals.push_back(d);
        sum += d;
    }
    std::sort(intervals.begin(), intervals.end());

    out.interval_defined = true;
    out.interval_mean = sum / static_cast<double>(intervals.size());
    out.interval_median = percentile(intervals, 0.50);
    out.interval_p10 = percentile(intervals, 0.10);
    out.interval_p25 = percentile(intervals, 0.25);
    out.interval_p75 = percentile(intervals, 0.75);
    out.interval_p90 = percentile(intervals, 0.90);

    // Mode of a continuous quantity: histogram over whole minutes, ties to
    // the smallest bucket, reported back in seconds.
    std::map<long long, std::size_t> buckets;
    for (double d : intervals) ++buckets[std::llround(d / 60.0)];
    long long best_bucket = 0;
    std::size_t best_count = 0;
    for (const auto& [minutes, count] : buckets) {
        if (count > best_count) {
            best_bucket = minutes;
            best_count = count;
        }
    }
    out.interval_mode = static_cast<double>(best_bucket) * 60.0;
}

BehavioralFeatures behavioral(const UserDoc& user) {
    if (user.comments.empty()) {
        throw DataError("behavioral features need at least one comment (user " + user.author + ")");
    }
    BehavioralFeatures f;
    std::int64_t posts = 0, comments = 0, gilded = 0;
    double contro = 0.0, score_diff = 0.0;
    std::vector<std::int64_t> timestamps;
    timestamps.reserve(user.comments.size());
    for (const auto& rec : user.comments) {
        (rec.kind == RecordKind::post ? posts : comments) += 1;
        gilded += rec.gilded;
        contro += rec.controversiality;
        score_diff += static_cast<double>(rec.ups - rec.downs);
        timestamps.push_back(rec.created_utc);
    }
    double n = static_cast<double>(user.comments.size());
    // +1 smoothing so post-only users stay finite.
    f.post_comment_ratio = static_cast<double>(posts) / (static_cast<double>(comments) + 1.0);
    f.gilded_count = static_cast<double>(gilded);
    f.mean_controversiality = contro / n;
    f.mean_score_diff = score_diff / n;
    std::sort(timestamps.begin(), timestamps.end());
    interval_stats(timestamps, f);
    return f;
}

std::int64_t FeatureMatrix::column(std::string_view name) const {
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
        if (feature_names[i] == name) return static_cast<std::int64_t>(i);
    }
    return -1;
}

std::vector<bool> FeatureMatrix::sparse_mask() const {
    std::vector<bool> mask(feature_names.size(), false);
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
        mask[i] = feature_names[i].rfind("tfidf:", 0) == 0;
    }
    return mask;
}

FeatureMatrix FeatureMatrix::subset_rows(const std::vector<std::size_t>& indices) const {
    FeatureMatrix out;
    out.feature_names = feature_names;
    out.user_ids.reserve(indices.size());
    out.labels.reserve(indices.size());
    out.rows.reserve(indices.size());
    for (std::size_t i : indices) {
        out.user_ids.push_back(user_ids.at(i));
        out.labels.push_back(labels.at(i));
        out.rows.push_back(rows.at(i));
    }
    return out;
}

FeatureMatrix assemble(const std::vector<UserDoc>& users, const AssembleSpec& spec) {
    if (users.empty()) throw DataError("assemble: empty user set");
    if (spec.lexicons.empty() && !spec.tfidf && !spec.behavioral) {
        throw ConfigError("assemble: no feature parts requested");
    }
    for (const auto& part : spec.lexicons) {
        if (!part.lexicon) throw ConfigError("assemble: lexicon part without a lexicon");
    }

    std::vector<std::size_t> order(users.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return users[a].author < users[b].author;
    });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (users[order[i - 1]].author == users[order[i]].author) {
            throw DataError("assemble: duplicate user id " + users[order[i]].author);
        }
    }

    FeatureMatrix m;
    for (const auto& part : spec.lexicons) {
        for (const auto& name : part.lexicon->category_names()) {
            m.feature_names.push_back(part.ns + ":" + name);
        }
        if (part.summaries) {
            for (const auto& def : *part.summaries) {
                m.feature_names.push_back(part.ns + ":" + def.name);
            }
        }
    }
    std::size_t tfidf_offset = m.feature_names.size();
    if (spec.tfidf) {
        for (const auto& stem : spec.tfidf->vocab) {
            m.feature_names.push_back("tfidf:" + stem);
        }
    }
    if (spec.behavioral) {
        for (const auto& name : BehavioralFeatures::feature_names()) {
            m.feature_names.push_back("user:" + name);
        }
    }

    static const std::vector<SummaryVariableDef> kNoSummaries;
    for (std::size_t idx : order) {
        const UserDoc& user = users[idx];
        std::vector<double> row;
        row.reserve(m.feature_names.size());

        TokenStream tokens;
        if (!spec.lexicons.empty() || spec.tfidf) {
            for (const auto& rec : user.comments) {
                TokenStream t = record_tokens(rec);
                tokens.insert(tokens.end(), t.begin(), t.end());
            }
        }
        for (const auto& part : spec.lexicons) {
            if (tokens.empty()) {
                throw DataError("assemble: user " + user.author + " has no tokens to profile");
            }
            const auto& summaries = part.summaries ? *part.summaries : kNoSummaries;
            CategoryProfile prof = part.lexicon->profile(tokens, summaries);
            row.insert(row.end(), prof.percent.begin(), prof.percent.end());
            row.insert(row.end(), prof.summary.begin(), prof.summary.end());
        }
        if (spec.tfidf) {
            std::size_t width = spec.tfidf->size();
            row.resize(row.size() + width, 0.0);
            for (const auto& [col, w] : transform_tfidf(*spec.tfidf, tokens)) {
                row[tfidf_offset + static_cast<std::size_t>(col)] = w;
            }
        }
        if (spec.behavioral) {
            std::vector<double> b = behavioral(user).to_row();
            row.insert(row.end(), b.begin(), b.end());
        }

        m.user_ids.push_back(user.author);
        m.labels.push_back(static_cast<int>(user.label));
        m.rows.push_back(std::move(row));
    }
    return m;
}

void FeatureMatrix::to_csv(const std::string& path) const {
    std::string out = "user_id,label";
    for (const auto& name : feature_names) {
        if (name.find(',') != std::string::npos || name.find('\n') != std::string::npos) {
            throw DataError("feature name not CSV-safe: " + name);
        }
        out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (user_ids[r].find(',') != std::string::npos) {
            throw DataError("user id not CSV-safe: " + user_ids[r]);
        }
        out += user_ids[r];
        out += ',';
        out += std::to_string(labels[r]);
        for (double v : rows[r]) {
            out += ',';
            append_double(out, v);
        }
        out += '\n';
    }
    write_text_file(path, out);
}

FeatureMatrix FeatureMatrix::from_csv(const std::string& path) {
    FeatureMatrix m;
    LineReader reader(path);
    std::string line;
    if (!reader.next(line)) throw DataError("empty feature CSV: " + path);

    auto split = [](const std::string& s) {
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (start <= s.size()) {
            std::size_t comma = s.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(s.substr(start));
                break;
            }
            fields.push_back(s.substr(start, comma - start));
            start = comma + 1;
        }
        return fields;
    };

    auto header = split(line);
    if (header.size() < 2 || header[0] != "user_id" || header[1] != "label") {
        throw DataError("feature CSV must start with user_id,label columns: " + path);
    }
    m.feature_names.assign(header.begin() + 2, header.end());

    std::size_t lineno = 1;
    while (reader.next(line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split(line);
        if (fields.size() != header.size()) {
            throw DataError(path + ":" + std::to_string(lineno) + ": wrong column count");
        }
        m.user_ids.push_back(fields[0]);
        int label = 0;
        auto [p1, e1] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), label);
        if (e1 != std::errc() || p1 != fields[1].data() + fields[1].size() ||
            (label != 0 && label != 1)) {
            throw DataError(path + ":" + std::to_string(lineno) + ": bad label " + fields[1]);
        }
        m.labels.push_back(label);
        std::vector<double> row;
        row.reserve(fields.size() - 2);
        for (std::size_t i = 2; i < fields.size(); ++i) {
            double v = 0.0;
            auto [p, e] = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), v);
            if (e != std::errc() || p != fields[i].data() + fields[i].size()) {
                throw DataError(path + ":" + std::to_string(lineno) + ": bad number " + fields[i]);
            }
            row.push_back(v);
        }
        m.rows.push_back(std::move(row));
    }
    return m;
}

Json FeatureMatrix::to_json() const {
    Json j;
    j["feature_names"] = feature_names;
    Json users = Json::array();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        Json u;
        u["id"] = user_ids[r];
        u["label"] = labels[r];
        u["values"] = rows[r];
        users.push_back(std::move(u));
    }
    j["users"] = std::move(users);
    return j;
}

FeatureMatrix FeatureMatrix::from_json(const Json& j) {
    FeatureMatrix m;
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    for (const auto& u : j.at("users")) {
        m.user_ids.push_back(u.at("id").get<std::string>());
        m.labels.push_back(u.at("label").get<int>());
        m.rows.push_back(u.at("values").get<std::vector<double>>());
        if (m.rows.back().size() != m.feature_names.size()) {
            throw DataError("feature matrix row width mismatch for user " + m.user_ids.back());
        }
    }
    return m;
}

}  // namespace psybench
