#include "psybench/eval.hpp"

#include <algorithm>
#include <cmath>

#include "psybench/error.hpp"
#include "psybench/parallel.hpp"
#include "psybench/rng.hpp"
#include "psybench/stats.hpp"

namespace psybench {

namespace {

std::vector<std::size_t> complement(const std::vector<std::vector<std::size_t>>& folds,
                                    std::size_t skip, std::size_t n) {
    std::vector<bool> in_test(n, false);
    for (std::size_t i : folds[skip]) in_test[i] = true;
    std::vector<std::size_t> out;
    out.reserve(n - folds[skip].size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_test[i]) out.push_back(i);
    }
    return out;
}

std::vector<int> labels_at(const std::vector<int>& labels, const std::vector<std::size_t>& idx) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(labels[i]);
    return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<int>& labels, int k,
                                                       std::uint64_t seed) {
    if (k < 2) throw ConfigError("stratified_kfold: k must be >= 2");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    for (const auto& [cls, members] : by_class) {
        if (members.size() < static_cast<std::size_t>(k)) {
            throw DataError("stratified_kfold: class " + std::to_string(cls) + " has " +
                            std::to_string(members.size()) + " members, fewer than k=" +
                            std::to_string(k));
        }
    }
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    Rng rng(seed);
    std::uint64_t class_key = 0;
    for (auto& [cls, members] : by_class) {
        Rng class_rng = rng.fork(class_key++);
        class_rng.shuffle(members);
        for (std::size_t i = 0; i < members.size(); ++i) {
            folds[i % static_cast<std::size_t>(k)].push_back(members[i]);
        }
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

std::vector<Hyperparams> default_grid(ModelKind kind, bool class_weighted) {
    std::vector<Hyperparams> grid;
    if (kind == ModelKind::forest) {
        for (int n_trees : {100, 200}) {
            for (int max_depth : {8, 16, -1}) {
                Hyperparams hp;
                hp.kind = kind;
                hp.n_trees = n_trees;
                hp.max_depth = max_depth;
                hp.class_weighted = class_weighted;
                grid.push_back(hp);
            }
        }
    } else {
        for (double c : {0.01, 0.1, 1.0, 10.0}) {
            Hyperparams hp;
            hp.kind = kind;
            hp.C = c;
            hp.class_weighted = class_weighted;
            grid.push_back(hp);
        }
    }
    return grid;
}

std::vector<Hyperparams> grid_from_json(const Json& j, ModelKind kind) {
    if (!j.is_array() || j.empty()) throw ConfigError("hyperparameter grid must be a non-empty array");
    std::vector<Hyperparams> grid;
    for (const auto& item : j) {
        Json with_kind = item;
        if (!with_kind.contains("kind")) with_kind["kind"] = to_string(kind);
        Hyperparams hp = Hyperparams::from_json(with_kind);
        if (hp.kind != kind) throw ConfigError("grid point kind does not match the model");
        grid.push_back(hp);
    }
    return grid;
}

std::vector<double> CVReport::fold_accuracies() const {
    std::vector<double> out;
    out.reserve(outer.size());
    for (const auto& fo : outer) out.push_back(fo.metrics.accuracy);
    return out;
}

double compare_significance(const std::vector<double>& scores_a,
                            const std::vector<double>& scores_b) {
    if (scores_a.size() != scores_b.size()) {
        throw DataError("compare_significance: fold score length mismatch");
    }
    if (scores_a.size() < 2) throw DataError("compare_significance: need at least two folds");
    std::vector<double> diffs(scores_a.size());
    bool all_zero = true;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        diffs[i] = scores_a[i] - scores_b[i];
        if (diffs[i] != 0.0) all_zero = false;
    }
    if (all_zero) return 1.0;
    double m = mean(diffs);
    double var = sample_variance(diffs);
    if (var == 0.0) return 0.0;  // constant nonzero difference
    double n = static_cast<double>(diffs.size());
    double t = m / std::sqrt(var / n);
    return student_t_two_sided_p(t, n - 1.0);
}

CVReport nested_cv(const FeatureMatrix& X, ModelKind kind, const std::vector<Hyperparams>& grid,
                   int k_outer, int k_inner, std::uint64_t seed, int threads) {
    if (grid.empty()) throw ConfigError("nested_cv: empty hyperparameter grid");
    for (const auto& hp : grid) {
        if (hp.kind != kind) throw ConfigError("nested_cv: grid point kind mismatch");
    }

    const auto outer_folds = stratified_kfold(X.labels, k_outer, seed);
    CVReport report;
    report.kind = kind;
    report.seed = seed;
    report.outer.resize(outer_folds.size());
    report.baselines.mcc_fold_accuracy.resize(outer_folds.size());
    report.baselines.random_fold_accuracy.resize(outer_folds.size());
    report.baselines.random_fold_f1.resize(outer_folds.size());

    parallel_for(outer_folds.size(), threads, [&](std::size_t fold) {
        const auto& test_idx = outer_folds[fold];
        const auto train_idx = complement(outer_folds, fold, X.n_rows());
        FeatureMatrix train = X.subset_rows(train_idx);
        FeatureMatrix test = X.subset_rows(test_idx);

        // Inner grid search on the outer-train split only.
        const auto inner_folds =
            stratified_kfold(train.labels, k_inner, mix_seed(seed, 1000 + fold));
        std::size_t best_grid = 0;
        double best_score = -1.0;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            double acc_sum = 0.0;
            for (std::size_t inner = 0; inner < inner_folds.size(); ++inner) {
                const auto inner_train_idx = complement(inner_folds, inner, train.n_rows());
                FeatureMatrix itrain = train.subset_rows(inner_train_idx);
                FeatureMatrix itest = train.subset_rows(inner_folds[inner]);
                Model model = train_model(itrain, grid[g],
                                          mix_seed(seed, fold * 1000 + inner * 10 + g));
                acc_sum += compute_metrics(itest.labels, model.predict(itest)).accuracy;
            }
            double mean_acc = acc_sum / static_cast<double>(inner_folds.size());
            if (mean_acc > best_score) {  // strict: ties keep earliest grid order
                best_score = mean_acc;
                best_grid = g;
            }
        }

        Model model = train_model(train, grid[best_grid], mix_seed(seed, 500000 + fold));
        report.outer[fold].metrics = compute_metrics(test.labels, model.predict(test));
        report.outer[fold].chosen = grid[best_grid];

        // Baselines share the same outer folds, giving paired score vectors.
        int mcc = baseline_mcc_label(train.labels);
        std::vector<int> mcc_pred(test.n_rows(), mcc);
        report.baselines.mcc_fold_accuracy[fold] =
            compute_metrics(test.labels, mcc_pred).accuracy;
        std::vector<int> rnd_pred = baseline_random_predict(
            train.labels, test.n_rows(), mix_seed(seed, 900000 + fold));
        Metrics rnd = compute_metrics(test.labels, rnd_pred);
        report.baselines.random_fold_accuracy[fold] = rnd.accuracy;
        report.baselines.random_fold_f1[fold] = rnd.f1;
    });

    std::vector<double> accs = report.fold_accuracies();
    report.mean_accuracy = mean(accs);
    report.std_accuracy = accs.size() > 1 ? sample_stddev(accs) : 0.0;
    double f1_sum = 0.0;
    for (const auto& fo : report.outer) f1_sum += fo.metrics.f1;
    report.mean_f1 = f1_sum / static_cast<double>(report.outer.size());

    report.baselines.mcc_mean_accuracy = mean(report.baselines.mcc_fold_accuracy);
    report.baselines.random_mean_accuracy = mean(report.baselines.random_fold_accuracy);
    report.baselines.random_mean_f1 = mean(report.baselines.random_fold_f1);
    double ones = 0.0;
    for (int y : X.labels) ones += y == 1;
    report.baselines.random_analytic_accuracy =
        random_baseline_expected_accuracy(ones / static_cast<double>(X.labels.size()));
    report.p_vs_mcc = compare_significance(accs, report.baselines.mcc_fold_accuracy);
    return report;
}

std::map<std::string, FeatureMatrix> split_by_category(const FeatureMatrix& matrix,
                                                       const std::vector<UserDoc>& users) {
    std::map<std::string, std::vector<std::size_t>> rows_by_category;
    std::map<std::string, std::size_t> row_of_user;
    for (std::size_t i = 0; i < matrix.user_ids.size(); ++i) row_of_user[matrix.user_ids[i]] = i;
    for (const auto& user : users) {
        auto it = row_of_user.find(user.author);
        if (it == row_of_user.end()) continue;
        for (const auto& category : user.categories) {
            rows_by_category[category].push_back(it->second);
        }
    }
    std::map<std::string, FeatureMatrix> out;
    for (auto& [category, rows] : rows_by_category) {
        std::sort(rows.begin(), rows.end());
        out.emplace(category, matrix.subset_rows(rows));
    }
    return out;
}

std::map<std::string, CategoryEval> per_category_eval(
    const std::map<std::string, FeatureMatrix>& matrices, ModelKind kind,
    const std::vector<Hyperparams>& grid, int k_outer, int k_inner, std::uint64_t seed,
    int threads) {
    // Class weighting is forced on for category splits.
    std::vector<Hyperparams> weighted = grid;
    for (auto& hp : weighted) hp.class_weighted = true;

    std::map<std::string, CategoryEval> out;
    std::uint64_t category_key = 0;
    for (const auto& [category, matrix] : matrices) {
        std::uint64_t cat_seed = mix_seed(seed, category_key++);
        CategoryEval eval;
        std::size_t n0 = 0, n1 = 0;
        for (int y : matrix.labels) (y == 1 ? n1 : n0) += 1;
        if (n0 < static_cast<std::size_t>(k_outer) || n1 < static_cast<std::size_t>(k_outer)) {
            eval.skipped = true;
            eval.skip_reason = "class counts " + std::to_string(n0) + "/" + std::to_string(n1) +
                               " below k=" + std::to_string(k_outer);
        } else {
            eval.report = nested_cv(matrix, kind, weighted, k_outer, k_inner, cat_seed, threads);
        }
        out.emplace(category, std::move(eval));
    }
    return out;
}

Json CVReport::to_json() const {
    Json j;
    j["model"] = psybench::to_string(kind);
    j["seed"] = seed;
    j["mean_accuracy"] = mean_accuracy;
    j["std_accuracy"] = std_accuracy;
    j["mean_f1"] = mean_f1;
    Json folds = Json::array();
    for (const auto& fo : outer) {
        Json f;
        f["accuracy"] = fo.metrics.accuracy;
        f["f1"] = fo.metrics.f1;
        f["chosen_hyperparams"] = fo.chosen.to_json();
        folds.push_back(std::move(f));
    }
    j["outer_folds"] = std::move(folds);
    Json b;
    b["mcc_fold_accuracy"] = baselines.mcc_fold_accuracy;
    b["mcc_mean_accuracy"] = baselines.mcc_mean_accuracy;
    b["random_fold_accuracy"] = baselines.random_fold_accuracy;
    b["random_fold_f1"] = baselines.random_fold_f1;
    b["random_mean_accuracy"] = baselines.random_mean_accuracy;
    b["random_mean_f1"] = baselines.random_mean_f1;
    b["random_analytic_accuracy"] = baselines.random_analytic_accuracy;
    j["baselines"] = std::move(b);
    if (p_vs_mcc) {
        j["p_vs_mcc"] = *p_vs_mcc;
    } else {
        j["p_vs_mcc"] = nullptr;
    }
    return j;
}

Json category_eval_to_json(const std::map<std::string, CategoryEval>& evals) {
    Json j = Json::object();
    for (const auto& [category, eval] : evals) {
        Json e;
        if (eval.skipped) {
            e["skipped"] = true;
            e["reason"] = eval.skip_reason;
        } else {
            e["skipped"] = false;
            e["report"] = eval.report->to_json();
            e["significant_at_0.001"] =
                eval.report->p_vs_mcc && *eval.report->p_vs_mcc < 0.001;
        }
        j[category] = std::move(e);
    }
    return j;
}

}  // namespace psybench
