#include "psybench/ml.hpp"

#include <cmath>

#include "psybench/error.hpp"

namespace psybench {

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::logreg: return "logreg";
        case ModelKind::svm: return "svm";
        case ModelKind::forest: return "rf";
    }
    return "unknown";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "logreg") return ModelKind::logreg;
    if (s == "svm") return ModelKind::svm;
    if (s == "rf" || s == "forest") return ModelKind::forest;
    throw ConfigError("unknown model kind: " + s + " (expected logreg, svm, or rf)");
}

Json Hyperparams::to_json() const {
    Json j;
    j["kind"] = to_string(kind);
    if (kind == ModelKind::forest) {
        j["n_trees"] = n_trees;
        j["max_depth"] = max_depth;
        j["max_features_rule"] = max_features_rule;
    } else {
        j["C"] = C;
    }
    j["class_weighted"] = class_weighted;
    return j;
}

Hyperparams Hyperparams::from_json(const Json& j) {
    Hyperparams hp;
    hp.kind = model_kind_from_string(j.at("kind").get<std::string>());
    hp.C = j.value("C", hp.C);
    hp.n_trees = j.value("n_trees", hp.n_trees);
    hp.max_depth = j.value("max_depth", hp.max_depth);
    hp.max_features_rule = j.value("max_features_rule", hp.max_features_rule);
    hp.class_weighted = j.value("class_weighted", hp.class_weighted);
    return hp;
}

Model train_model(const FeatureMatrix& X, const Hyperparams& hp, std::uint64_t seed,
                  int threads) {
    Model model;
    model.kind = hp.kind;
    model.seed = seed;
    model.feature_names = X.feature_names;
    if (hp.kind == ModelKind::forest) {
        model.forest = train_forest(X, hp, seed, threads);
    } else {
        model.linear = train_linear(X, hp);
    }
    return model;
}

std::vector<int> Model::predict(const FeatureMatrix& X) const {
    if (X.n_cols() != feature_names.size()) {
        throw DataError("predict: feature width mismatch (model " +
                        std::to_string(feature_names.size()) + ", input " +
                        std::to_string(X.n_cols()) + ")");
    }
    std::vector<int> out(X.n_rows());
    if (kind == ModelKind::forest) {
        for (std::size_t i = 0; i < X.n_rows(); ++i) {
            std::size_t votes1 = 0;
            for (const auto& tree : forest->trees) {
                votes1 += static_cast<std::size_t>(tree.predict(X.rows[i]));
            }
            // Majority of tree votes, tie -> class 0.
            out[i] = 2 * votes1 > forest->trees.size() ? 1 : 0;
        }
        return out;
    }
    for (std::size_t i = 0; i < X.n_rows(); ++i) {
        double z = linear->decision(X.rows[i]);
        // logreg thresholds at probability 0.5 <=> margin 0; both tie to 0.
        out[i] = z > 0.0 ? 1 : 0;
    }
    return out;
}

std::vector<double> Model::scores(const FeatureMatrix& X) const {
    std::vector<double> out;
    if (kind == ModelKind::forest) return out;
    if (X.n_cols() != feature_names.size()) {
        throw DataError("scores: feature width mismatch");
    }
    out.resize(X.n_rows());
    for (std::size_t i = 0; i < X.n_rows(); ++i) {
        double z = linear->decision(X.rows[i]);
        out[i] = kind == ModelKind::logreg ? 1.0 / (1.0 + std::exp(-z)) : z;
    }
    return out;
}

Json Model::to_json() const {
    Json j;
    j["kind"] = to_string(kind);
    j["seed"] = seed;
    j["feature_names"] = feature_names;
    if (linear) {
        Json lin;
        lin["weights"] = linear->weights;
        lin["bias"] = linear->bias;
        lin["feat_mean"] = linear->feat_mean;
        lin["feat_std"] = linear->feat_std;
        lin["hyperparams"] = linear->hp.to_json();
        j["linear"] = std::move(lin);
    }
    if (forest) {
        Json f;
        f["hyperparams"] = forest->hp.to_json();
        f["seed"] = forest->seed;
        Json trees = Json::array();
        for (const auto& tree : forest->trees) {
            Json nodes = Json::array();
            for (const auto& n : tree.nodes) {
                nodes.push_back(Json::array(
                    {n.feature, n.threshold, n.left, n.right, n.leaf[0], n.leaf[1]}));
            }
            trees.push_back(std::move(nodes));
        }
        f["trees"] = std::move(trees);
        j["forest"] = std::move(f);
    }
    return j;
}

Model Model::from_json(const Json& j) {
    Model model;
    model.kind = model_kind_from_string(j.at("kind").get<std::string>());
    model.seed = j.value("seed", std::uint64_t{0});
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    if (j.contains("linear")) {
        const Json& lin = j["linear"];
        LinearModel m;
        m.kind = model.kind;
        m.weights = lin.at("weights").get<std::vector<double>>();
        m.bias = lin.at("bias").get<double>();
        m.feat_mean = lin.at("feat_mean").get<std::vector<double>>();
        m.feat_std = lin.at("feat_std").get<std::vector<double>>();
        m.hp = Hyperparams::from_json(lin.at("hyperparams"));
        if (m.weights.size() != model.feature_names.size()) {
            throw DataError("model file: weight/feature count mismatch");
        }
        model.linear = std::move(m);
    }
    if (j.contains("forest")) {
        const Json& f = j["forest"];
        Forest forest;
        forest.hp = Hyperparams::from_json(f.at("hyperparams"));
        forest.seed = f.value("seed", std::uint64_t{0});
        for (const auto& tj : f.at("trees")) {
            Tree tree;
            for (const auto& nj : tj) {
                TreeNode n;
                n.feature = nj.at(0).get<std::int32_t>();
                n.threshold = nj.at(1).get<double>();
                n.left = nj.at(2).get<std::int32_t>();
                n.right = nj.at(3).get<std::int32_t>();
                n.leaf = {nj.at(4).get<double>(), nj.at(5).get<double>()};
                tree.nodes.push_back(n);
            }
            forest.trees.push_back(std::move(tree));
        }
        model.forest = std::move(forest);
    }
    if (!model.linear && !model.forest) throw DataError("model file has no parameters");
    return model;
}

void Model::save(const std::string& path) const { write_json_file(path, to_json()); }

Model Model::load(const std::string& path) { return from_json(read_json_file(path)); }

}  // namespace psybench
