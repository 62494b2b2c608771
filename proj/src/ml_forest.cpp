#include <algorithm>
#include <cmath>
#include <numeric>

#include "psybench/error.hpp"
#include "psybench/ml.hpp"
#include "psybench/parallel.hpp"
#include "psybench/rng.hpp"

namespace psybench {

namespace {

struct Sample {
    std::uint32_t row;
    double weight;
};

struct TreeBuilder {
    const FeatureMatrix* X;
    int max_depth;
    std::size_t n_candidates;
    Rng rng{0};
    std::vector<TreeNode> nodes;
    std::vector<std::int32_t> feature_pool;  // scratch for per-split sampling

    double gini(double c0, double c1) const {
        double total = c0 + c1;
        if (total <= 0.0) return 0.0;
        double p0 = c0 / total;
        double p1 = c1 / total;
        return 1.0 - p0 * p0 - p1 * p1;
    }

    std::int32_t make_leaf(double c0, double c1) {
        TreeNode node;
        double total = c0 + c1;
        node.leaf = {c0 / total, c1 / total};
        nodes.push_back(node);
        return static_cast<std::int32_t>(nodes.size() - 1);
    }

    std::int32_t build(std::vector<Sample>& samples, int depth) {
        double c0 = 0.0, c1 = 0.0;
        for (const auto& s : samples) {
            (X->labels[s.row] == 1 ? c1 : c0) += s.weight;
        }
        if (c0 == 0.0 || c1 == 0.0 || samples.size() < 2 ||
            (max_depth >= 0 && depth >= max_depth)) {
            return make_leaf(c0, c1);
        }

        // Candidate features for this split, sampled without replacement.
        for (std::size_t i = 0; i < n_candidates; ++i) {
            std::size_t j = i + static_cast<std::size_t>(
                                    rng.next_below(feature_pool.size() - i));
            std::swap(feature_pool[i], feature_pool[j]);
        }

        const double parent_impurity = gini(c0, c1);
        const double total_w = c0 + c1;
        double best_gain = 0.0;
        std::int32_t best_feature = -1;
        double best_threshold = 0.0;

        std::vector<std::pair<double, const Sample*>> sorted;
        sorted.reserve(samples.size());
        std::vector<std::int32_t> candidates(feature_pool.begin(),
                                             feature_pool.begin() + static_cast<std::ptrdiff_t>(n_candidates));
        std::sort(candidates.begin(), candidates.end());
        for (std::int32_t f : candidates) {
            sorted.clear();
            for (const auto& s : samples) {
                sorted.emplace_back(X->rows[s.row][static_cast<std::size_t>(f)], &s);
            }
            std::sort(sorted.begin(), sorted.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (sorted.front().first == sorted.back().first) continue;

            double left0 = 0.0, left1 = 0.0;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                const Sample& s = *sorted[i].second;
                (X->labels[s.row] == 1 ? left1 : left0) += s.weight;
                if (sorted[i].first == sorted[i + 1].first) continue;
                double right0 = c0 - left0;
                double right1 = c1 - left1;
                double lw = left0 + left1;
                double rw = right0 + right1;
                double child = (lw * gini(left0, left1) + rw * gini(right0, right1)) / total_w;
                double gain = parent_impurity - child;
                double threshold = sorted[i].first + 0.5 * (sorted[i + 1].first - sorted[i].first);
                // Ties resolve to the lowest feature index, then the lowest
                // threshold; candidates are visited in ascending feature
                // order and thresholds in ascending value order.
                if (gain > best_gain + 1e-15) {
                    best_gain = gain;
                    best_feature = f;
                    best_threshold = threshold;
                }
            }
        }

        if (best_feature < 0) return make_leaf(c0, c1);

        std::vector<Sample> left, right;
        left.reserve(samples.size());
        right.reserve(samples.size());
        for (const auto& s : samples) {
            if (X->rows[s.row][static_cast<std::size_t>(best_feature)] <= best_threshold) {
                left.push_back(s);
            } else {
                right.push_back(s);
            }
        }
        samples.clear();
        samples.shrink_to_fit();

        TreeNode node;
        node.feature = best_feature;
        node.threshold = best_threshold;
        std::int32_t self = static_cast<std::int32_t>(nodes.size());
        nodes.push_back(node);
        std::int32_t l = build(left, depth + 1);
        std::int32_t r = build(right, depth + 1);
        nodes[static_cast<std::size_t>(self)].left = l;
        nodes[static_cast<std::size_t>(self)].right = r;
        return self;
    }
};

}  // namespace

int Tree::predict(const std::vector<double>& row) const {
    std::size_t i = 0;
    while (nodes[i].feature >= 0) {
        i = static_cast<std::size_t>(row[static_cast<std::size_t>(nodes[i].feature)] <=
                                             nodes[i].threshold
                                         ? nodes[i].left
                                         : nodes[i].right);
    }
    return nodes[i].leaf[1] > nodes[i].leaf[0] ? 1 : 0;  // tie -> class 0
}

Forest train_forest(const FeatureMatrix& X, const Hyperparams& hp, std::uint64_t seed,
                    int threads) {
    if (X.n_rows() == 0) throw DataError("train_forest: empty matrix");
    if (hp.n_trees < 1) throw ConfigError("train_forest: n_trees must be >= 1");
    for (const auto& row : X.rows) {
        for (double v : row) {
            if (!std::isfinite(v)) throw DataError("train_forest: non-finite feature value");
        }
    }
    bool has_pos = false, has_neg = false;
    for (int y : X.labels) (y == 1 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw DataError("train_forest: need both classes");

    const std::size_t n = X.n_rows();
    const std::size_t d = X.n_cols();
    std::size_t n_candidates;
    if (hp.max_features_rule == "all") {
        n_candidates = d;
    } else if (hp.max_features_rule == "sqrt") {
        n_candidates = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
    } else {
        throw ConfigError("train_forest: unknown max_features_rule " + hp.max_features_rule);
    }

    std::vector<double> weight_of(n, 1.0);
    if (hp.class_weighted) {
        auto w = class_weights(X.labels);
        for (std::size_t i = 0; i < n; ++i) weight_of[i] = w[X.labels[i]];
    }

    Forest forest;
    forest.hp = hp;
    forest.seed = seed;
    forest.trees.resize(static_cast<std::size_t>(hp.n_trees));

    Rng master(seed);
    parallel_for(forest.trees.size(), threads, [&](std::size_t t) {
        TreeBuilder builder;
        builder.X = &X;
        builder.max_depth = hp.max_depth;
        builder.n_candidates = n_candidates;
        builder.rng = master.fork(t);
        builder.feature_pool.resize(d);
        std::iota(builder.feature_pool.begin(), builder.feature_pool.end(), 0);

        // Bootstrap sample: n draws with replacement, weights folded in.
        std::vector<double> bag(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            bag[builder.rng.next_below(n)] += 1.0;
        }
        std::vector<Sample> samples;
        samples.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (bag[i] > 0.0) {
                samples.push_back({static_cast<std::uint32_t>(i), bag[i] * weight_of[i]});
            }
        }
        builder.build(samples, 0);
        forest.trees[t].nodes = std::move(builder.nodes);
    });
    return forest;
}

}  // namespace psybench
