#include <cmath>

#include "psybench/error.hpp"
#include "psybench/ml.hpp"
#include "psybench/rng.hpp"

namespace psybench {

namespace {

constexpr double kGradTol = 1e-6;
constexpr int kMaxEpochs = 500;

double softplus(double u) {
    // log(1 + e^u), overflow-safe.
    return std::max(u, 0.0) + std::log1p(std::exp(-std::fabs(u)));
}

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

struct Problem {
    const std::vector<std::vector<double>>* rows;
    std::vector<double> mean, std;
    std::vector<double> y;        // -1 / +1
    std::vector<double> sample_w;
    double inv_c;
    bool hinge;

    std::size_t n() const { return rows->size(); }
    std::size_t d() const { return mean.size(); }

    double x(std::size_t i, std::size_t j) const {
        return ((*rows)[i][j] - mean[j]) / std[j];
    }

    double objective(const std::vector<double>& w, double b) const {
        double loss = 0.0;
        for (std::size_t i = 0; i < n(); ++i) {
            double z = b;
            for (std::size_t j = 0; j < d(); ++j) z += w[j] * x(i, j);
            double yz = y[i] * z;
            loss += sample_w[i] * (hinge ? std::max(0.0, 1.0 - yz) : softplus(-yz));
        }
        loss /= static_cast<double>(n());
        double reg = 0.0;
        for (double wj : w) reg += wj * wj;
        return loss + 0.5 * inv_c * reg;
    }

    // Returns the gradient (d entries + bias last).
    std::vector<double> gradient(const std::vector<double>& w, double b) const {
        std::vector<double> g(d() + 1, 0.0);
        for (std::size_t i = 0; i < n(); ++i) {
            double z = b;
            for (std::size_t j = 0; j < d(); ++j) z += w[j] * x(i, j);
            double yz = y[i] * z;
            double dz;
            if (hinge) {
                // Subgradient: 0 at the kink (yz == 1).
                dz = yz < 1.0 ? -y[i] : 0.0;
            } else {
                dz = -y[i] * sigmoid(-yz);
            }
            double c = sample_w[i] * dz;
            if (c != 0.0) {
                for (std::size_t j = 0; j < d(); ++j) g[j] += c * x(i, j);
                g[d()] += c;
            }
        }
        double inv_n = 1.0 / static_cast<double>(n());
        for (auto& gj : g) gj *= inv_n;
        for (std::size_t j = 0; j < d(); ++j) g[j] += inv_c * w[j];
        return g;
    }
};

}  // namespace

std::map<int, double> class_weights(const std::vector<int>& labels) {
    std::map<int, std::size_t> counts;
    for (int y : labels) ++counts[y];
    if (counts.size() < 2) {
        throw DataError("class_weights requires both classes in the labels");
    }
    std::map<int, double> w;
    double n = static_cast<double>(labels.size());
    for (const auto& [cls, count] : counts) {
        w[cls] = n / (2.0 * static_cast<double>(count));
    }
    return w;
}

LinearModel train_linear(const FeatureMatrix& X, const Hyperparams& hp) {
    if (X.n_rows() == 0) throw DataError("train_linear: empty matrix");
    if (hp.C <= 0.0) throw ConfigError("train_linear: C must be positive");
    for (const auto& row : X.rows) {
        for (double v : row) {
            if (!std::isfinite(v)) throw DataError("train_linear: non-finite feature value");
        }
    }

    const std::size_t n = X.n_rows();
    const std::size_t d = X.n_cols();
    const std::vector<bool> sparse = X.sparse_mask();

    LinearModel model;
    model.kind = hp.kind;
    model.hp = hp;
    model.feat_mean.assign(d, 0.0);
    model.feat_std.assign(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        if (sparse[j]) continue;  // centering would destroy sparsity
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += X.rows[i][j];
        m /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double delta = X.rows[i][j] - m;
            var += delta * delta;
        }
        var /= static_cast<double>(n);
        model.feat_mean[j] = m;
        model.feat_std[j] = var > 0.0 ? std::sqrt(var) : 1.0;
    }

    Problem prob;
    prob.rows = &X.rows;
    prob.mean = model.feat_mean;
    prob.std = model.feat_std;
    prob.inv_c = 1.0 / hp.C;
    prob.hinge = hp.kind == ModelKind::svm;
    prob.y.resize(n);
    prob.sample_w.assign(n, 1.0);
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        prob.y[i] = X.labels[i] == 1 ? 1.0 : -1.0;
        (X.labels[i] == 1 ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) throw DataError("train_linear: need both classes");
    if (hp.class_weighted) {
        auto w = class_weights(X.labels);
        for (std::size_t i = 0; i < n; ++i) prob.sample_w[i] = w[X.labels[i]];
    }

    std::vector<double> w(d, 0.0);
    double b = 0.0;
    double f = prob.objective(w, b);
    double step = 1.0;
    for (int epoch = 0; epoch < kMaxEpochs; ++epoch) {
        std::vector<double> g = prob.gradient(w, b);
        double gnorm_sq = 0.0;
        for (double gj : g) gnorm_sq += gj * gj;
        if (std::sqrt(gnorm_sq) < kGradTol) break;

        // Backtracking line search (Armijo), monotone by construction.
        std::vector<double> w_try(d);
        double b_try = 0.0, f_try = 0.0;
        double eta = step;
        bool accepted = false;
        for (int halvings = 0; halvings < 60; ++halvings) {
            for (std::size_t j = 0; j < d; ++j) w_try[j] = w[j] - eta * g[j];
            b_try = b - eta * g[d];
            f_try = prob.objective(w_try, b_try);
            if (f_try <= f - 1e-4 * eta * gnorm_sq) {
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) break;  // step has shrunk below usefulness
        w.swap(w_try);
        b = b_try;
        f = f_try;
        step = eta * 2.0;  // let the step grow back
    }

    model.weights = std::move(w);
    model.bias = b;
    return model;
}

double LinearModel::decision(const std::vector<double>& row) const {
    double z = bias;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        z += weights[j] * (row[j] - feat_mean[j]) / feat_std[j];
    }
    return z;
}

Metrics compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) throw DataError("metrics: length mismatch");
    if (y_true.empty()) throw DataError("metrics: empty inputs");
    std::size_t correct = 0, tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == y_pred[i]) ++correct;
        if (y_pred[i] == 1 && y_true[i] == 1) ++tp;
        if (y_pred[i] == 1 && y_true[i] == 0) ++fp;
        if (y_pred[i] == 0 && y_true[i] == 1) ++fn;
    }
    Metrics m;
    m.accuracy = static_cast<double>(correct) / static_cast<double>(y_true.size());
    double precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    double recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    m.f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    return m;
}

int baseline_mcc_label(const std::vector<int>& y_train) {
    if (y_train.empty()) throw DataError("baseline_mcc: empty training labels");
    std::size_t ones = 0;
    for (int y : y_train) ones += y == 1;
    std::size_t zeros = y_train.size() - ones;
    return ones > zeros ? 1 : 0;  // tie -> class 0
}

std::vector<int> baseline_random_predict(const std::vector<int>& y_train, std::size_t n,
                                         std::uint64_t seed) {
    if (y_train.empty()) throw DataError("baseline_random: empty training labels");
    std::size_t ones = 0;
    for (int y : y_train) ones += y == 1;
    double p1 = static_cast<double>(ones) / static_cast<double>(y_train.size());
    Rng rng(seed);
    std::vector<int> out(n);
    for (auto& y : out) y = rng.next_bool(p1) ? 1 : 0;
    return out;
}

double random_baseline_expected_accuracy(double positive_share) {
    return positive_share * positive_share + (1.0 - positive_share) * (1.0 - positive_share);
}

}  // namespace psybench
