#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "psybench/ml.hpp"

namespace psybench {

// Disjoint index folds with per-fold class proportions within one member of
// the global proportions: per-class seeded shuffle, then round-robin.
std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels, int k,
                                                       std::uint64_t seed);

std::vector<Hyperparams> default_grid(ModelKind kind, bool class_weighted = true);
std::vector<Hyperparams> grid_from_json(const Json& j, ModelKind kind);

struct FoldOutcome {
    Metrics metrics;
    Hyperparams chosen;
};

struct BaselineReport {
    std::vector<double> mcc_fold_accuracy;
    double mcc_mean_accuracy = 0.0;
    std::vector<double> random_fold_accuracy;
    std::vector<double> random_fold_f1;
    double random_mean_accuracy = 0.0;
    double random_mean_f1 = 0.0;
    double random_analytic_accuracy = 0.0;  // p^2 + (1-p)^2 on the full labels
};

struct CVReport {
    ModelKind kind = ModelKind::logreg;
    std::uint64_t seed = 0;
    std::vector<FoldOutcome> outer;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;  // sample std over folds
    double mean_f1 = 0.0;

    BaselineReport baselines;
    std::optional<double> p_vs_mcc;  // paired two-sided t-test over folds

    std::vector<double> fold_accuracies() const;
    Json to_json() const;
};

// Outer k-fold evaluation with an inner k-fold grid search on each outer
// training split. The grid point with the best mean inner accuracy (ties:
// earliest grid order) is refit on the full outer-train and scored on the
// outer test fold. Model selection never sees outer-test rows.
CVReport nested_cv(const FeatureMatrix& X, ModelKind kind, const std::vector<Hyperparams>& grid,
                   int k_outer = 10, int k_inner = 5, std::uint64_t seed = 0, int threads = 1);

// Paired two-sided t-test on per-fold score differences. All-zero
// differences give p=1; zero variance with nonzero mean gives p=0.
double compare_significance(const std::vector<double>& scores_a,
                            const std::vector<double>& scores_b);

struct CategoryEval {
    bool skipped = false;
    std::string skip_reason;
    std::optional<CVReport> report;
};

// Runs nested CV plus the MCC baseline per topic category, with class
// weighting forced on. Categories failing fold preconditions are reported
// as skipped, not fatal.
std::map<std::string, CategoryEval> per_category_eval(
    const std::map<std::string, FeatureMatrix>& matrices, ModelKind kind,
    const std::vector<Hyperparams>& grid, int k_outer = 10, int k_inner = 5,
    std::uint64_t seed = 0, int threads = 1);

// Per-category row filter: a user lands in every category it belongs to.
std::map<std::string, FeatureMatrix> split_by_category(const FeatureMatrix& matrix,
                                                       const std::vector<UserDoc>& users);

Json category_eval_to_json(const std::map<std::string, CategoryEval>& evals);

}  // namespace psybench
