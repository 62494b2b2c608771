#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psybench/jsonio.hpp"
#include "psybench/userfeat.hpp"

namespace psybench {

enum class ModelKind { logreg, svm, forest };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& s);

struct Hyperparams {
    ModelKind kind = ModelKind::logreg;
    double C = 1.0;        // inverse regularization strength (linear models)
    int n_trees = 100;     // forest
    int max_depth = -1;    // forest; -1 = unlimited
    std::string max_features_rule = "sqrt";  // "sqrt" or "all"
    bool class_weighted = true;

    Json to_json() const;
    static Hyperparams from_json(const Json& j);
};

// w_c = n / (2 * n_c); requires both classes present.
std::map<int, double> class_weights(const std::vector<int>& labels);

struct LinearModel {
    ModelKind kind = ModelKind::logreg;
    std::vector<double> weights;
    double bias = 0.0;
    // Fit-time standardization; sparse (tf-idf) columns carry mean 0, std 1.
    std::vector<double> feat_mean;
    std::vector<double> feat_std;
    Hyperparams hp;

    double decision(const std::vector<double>& row) const;
};

// Full-batch gradient descent with backtracking line search on
//   (1/n) sum_i w_i * loss(y_i, f(x_i)) + (1/(2C)) ||w||^2
// (log-loss for logreg, hinge for svm; bias unregularized). Stops when the
// gradient norm drops below 1e-6 or after 500 epochs.
LinearModel train_linear(const FeatureMatrix& X, const Hyperparams& hp);

struct TreeNode {
    std::int32_t feature = -1;  // -1 for leaves
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::array<double, 2> leaf = {0.0, 0.0};  // class vote fractions
};

struct Tree {
    std::vector<TreeNode> nodes;
    int predict(const std::vector<double>& row) const;  // vote, tie -> 0
};

struct Forest {
    std::vector<Tree> trees;
    Hyperparams hp;
    std::uint64_t seed = 0;
};

// CART on bootstrap samples with class weights as sample weights, Gini
// splits over sqrt(d) candidate features (ties: lowest feature index, then
// lowest threshold). Per-tree RNG streams derive from (seed, tree index).
Forest train_forest(const FeatureMatrix& X, const Hyperparams& hp, std::uint64_t seed,
                    int threads = 1);

// Serializable model of either family, tagged with its feature schema.
struct Model {
    ModelKind kind = ModelKind::logreg;
    std::uint64_t seed = 0;
    std::vector<std::string> feature_names;
    std::optional<LinearModel> linear;
    std::optional<Forest> forest;

    std::vector<int> predict(const FeatureMatrix& X) const;
    // Decision scores for linear models (probability for logreg, margin for
    // svm); empty for forests.
    std::vector<double> scores(const FeatureMatrix& X) const;

    Json to_json() const;
    static Model from_json(const Json& j);
    void save(const std::string& path) const;
    static Model load(const std::string& path);
};

Model train_model(const FeatureMatrix& X, const Hyperparams& hp, std::uint64_t seed,
                  int threads = 1);

struct Metrics {
    double accuracy = 0.0;
    double f1 = 0.0;  // positive class = 1 (bipolar)
};

Metrics compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// Majority-class baseline label (tie -> 0).
int baseline_mcc_label(const std::vector<int>& y_train);

// Random baseline: labels sampled i.i.d. from the training priors.
std::vector<int> baseline_random_predict(const std::vector<int>& y_train, std::size_t n,
                                         std::uint64_t seed);

// Analytic accuracy of the prior-sampling baseline: p^2 + (1-p)^2.
double random_baseline_expected_accuracy(double positive_share);

}  // namespace psybench
