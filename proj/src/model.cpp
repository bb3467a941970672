#include "cfswarm/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "cfswarm/errors.hpp"
#include "cfswarm/rng.hpp"

namespace cfswarm {

namespace {

void check_two_classes(const Dataset& data) {
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t i : data.train_idx) (data.labels[i] == 1 ? n1 : n0)++;
    if (n0 == 0 || n1 == 0)
        throw TrainingError("training data contains a single class");
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

} // namespace

double LogisticModel::predict_proba(std::span<const double> x) const {
    if (x.size() != weights_.size())
        throw UsageError("logistic: input width mismatch");
    double z = bias_;
    for (std::size_t j = 0; j < weights_.size(); ++j) z += weights_[j] * x[j];
    return sigmoid(z);
}

nlohmann::json LogisticModel::to_json() const {
    return {{"kind", "logistic"}, {"weights", weights_}, {"bias", bias_}};
}

std::unique_ptr<LogisticModel> LogisticModel::from_json(const nlohmann::json& j) {
    return std::make_unique<LogisticModel>(
        j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>());
}

std::unique_ptr<DecisionFunction> train_logistic(const Dataset& data, double lr,
                                                 std::size_t epochs,
                                                 std::uint64_t /*seed*/) {
    check_two_classes(data);
    const std::size_t width = data.schema.encoded_width();
    const std::size_t n = data.train_idx.size();
    std::vector<double> w(width, 0.0);
    double b = 0.0;

    std::vector<double> grad(width);
    for (std::size_t e = 0; e < epochs; ++e) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i : data.train_idx) {
            const auto& x = data.rows[i];
            double z = b;
            for (std::size_t j = 0; j < width; ++j) z += w[j] * x[j];
            const double err = sigmoid(z) - data.labels[i];
            for (std::size_t j = 0; j < width; ++j) grad[j] += err * x[j];
            grad_b += err;
        }
        const double step = lr / static_cast<double>(n);
        for (std::size_t j = 0; j < width; ++j) w[j] -= step * grad[j];
        b -= step * grad_b;
    }
    return std::make_unique<LogisticModel>(std::move(w), b);
}

double ForestModel::tree_predict(const std::vector<TreeNode>& tree,
                                 std::span<const double> x) {
    int node = 0;
    while (tree[node].feature >= 0) {
        node = x[static_cast<std::size_t>(tree[node].feature)] <= tree[node].threshold
                   ? tree[node].left
                   : tree[node].right;
    }
    return tree[node].leaf;
}

double ForestModel::predict_proba(std::span<const double> x) const {
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree_predict(tree, x);
    return sum / static_cast<double>(trees_.size());
}

nlohmann::json ForestModel::to_json() const {
    nlohmann::json jt = nlohmann::json::array();
    for (const auto& tree : trees_) {
        nlohmann::json jn = nlohmann::json::array();
        for (const auto& n : tree)
            jn.push_back({n.feature, n.threshold, n.left, n.right, n.leaf});
        jt.push_back(std::move(jn));
    }
    return {{"kind", "forest"}, {"trees", std::move(jt)}};
}

std::unique_ptr<ForestModel> ForestModel::from_json(const nlohmann::json& j) {
    std::vector<std::vector<TreeNode>> trees;
    for (const auto& jt : j.at("trees")) {
        std::vector<TreeNode> tree;
        tree.reserve(jt.size());
        for (const auto& jn : jt) {
            tree.push_back(TreeNode{jn[0].get<int>(), jn[1].get<double>(),
                                    jn[2].get<int>(), jn[3].get<int>(),
                                    jn[4].get<double>()});
        }
        trees.push_back(std::move(tree));
    }
    return std::make_unique<ForestModel>(std::move(trees));
}

namespace {

struct TreeBuilder {
    const Dataset& data;
    std::size_t max_depth;
    std::size_t n_candidates;
    RngStream& rng;
    std::vector<TreeNode> nodes;

    double leaf_fraction(std::span<const std::size_t> rows) const {
        std::size_t pos = 0;
        for (std::size_t i : rows) pos += static_cast<std::size_t>(data.labels[i]);
        return static_cast<double>(pos) / static_cast<double>(rows.size());
    }

    static double gini(std::size_t pos, std::size_t n) {
        if (n == 0) return 0.0;
        const double p = static_cast<double>(pos) / static_cast<double>(n);
        return 2.0 * p * (1.0 - p);
    }

    int build(std::vector<std::size_t> rows, std::size_t depth) {
        const std::size_t node_id = nodes.size();
        nodes.emplace_back();
        const double frac = leaf_fraction(rows);
        if (depth >= max_depth || rows.size() < 2 || frac == 0.0 || frac == 1.0) {
            nodes[node_id].leaf = frac;
            return static_cast<int>(node_id);
        }

        // sqrt(width) candidate columns, sampled without replacement and
        // scanned in ascending order for a stable tie-break.
        const std::size_t width = data.schema.encoded_width();
        std::vector<std::size_t> cols(width);
        std::iota(cols.begin(), cols.end(), std::size_t{0});
        for (std::size_t c = 0; c < n_candidates; ++c) {
            const std::size_t j = c + rng.uniform_index(width - c);
            std::swap(cols[c], cols[j]);
        }
        cols.resize(n_candidates);
        std::sort(cols.begin(), cols.end());

        const std::size_t n = rows.size();
        std::size_t total_pos = 0;
        for (std::size_t i : rows) total_pos += static_cast<std::size_t>(data.labels[i]);

        double best_impurity = std::numeric_limits<double>::infinity();
        std::size_t best_col = 0;
        double best_thr = 0.0;

        std::vector<std::pair<double, int>> vals(n);
        for (std::size_t col : cols) {
            for (std::size_t r = 0; r < n; ++r)
                vals[r] = {data.rows[rows[r]][col], data.labels[rows[r]]};
            std::sort(vals.begin(), vals.end());
            std::size_t left_pos = 0;
            for (std::size_t r = 0; r + 1 < n; ++r) {
                left_pos += static_cast<std::size_t>(vals[r].second);
                if (vals[r].first == vals[r + 1].first) continue;
                const std::size_t nl = r + 1, nr = n - nl;
                const double impurity =
                    (static_cast<double>(nl) * gini(left_pos, nl) +
                     static_cast<double>(nr) * gini(total_pos - left_pos, nr)) /
                    static_cast<double>(n);
                if (impurity < best_impurity) {
                    best_impurity = impurity;
                    best_col = col;
                    best_thr = 0.5 * (vals[r].first + vals[r + 1].first);
                }
            }
        }

        if (best_impurity >= gini(total_pos, n) - 1e-12) {
            nodes[node_id].leaf = frac;
            return static_cast<int>(node_id);
        }

        std::vector<std::size_t> left, right;
        for (std::size_t i : rows)
            (data.rows[i][best_col] <= best_thr ? left : right).push_back(i);

        nodes[node_id].feature = static_cast<int>(best_col);
        nodes[node_id].threshold = best_thr;
        const int l = build(std::move(left), depth + 1);
        nodes[node_id].left = l;
        const int r = build(std::move(right), depth + 1);
        nodes[node_id].right = r;
        return static_cast<int>(node_id);
    }
};

} // namespace

std::unique_ptr<DecisionFunction> train_forest(const Dataset& data,
                                               std::size_t n_trees,
                                               std::size_t max_depth,
                                               std::uint64_t seed) {
    if (n_trees == 0) throw UsageError("train_forest: n_trees must be >= 1");
    check_two_classes(data);
    const std::size_t n = data.train_idx.size();
    const std::size_t width = data.schema.encoded_width();
    const std::size_t n_candidates = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(width)))));

    std::vector<std::vector<TreeNode>> trees;
    trees.reserve(n_trees);
    for (std::size_t t = 0; t < n_trees; ++t) {
        RngStream rng = RngStream::derive(seed, {stream_id::kForestTree, t});
        std::vector<std::size_t> sample(n);
        for (std::size_t i = 0; i < n; ++i)
            sample[i] = data.train_idx[rng.uniform_index(n)];
        TreeBuilder builder{data, max_depth, n_candidates, rng, {}};
        builder.build(sample, 0);
        trees.push_back(std::move(builder.nodes));
    }
    return std::make_unique<ForestModel>(std::move(trees));
}

double accuracy(const DecisionFunction& f, const Dataset& data, Split split) {
    const auto& idx = split == Split::Train ? data.train_idx : data.test_idx;
    if (idx.empty()) throw UsageError("accuracy over an empty split");
    std::size_t hits = 0;
    for (std::size_t i : idx)
        if (f.predict_class(data.rows[i]) == data.labels[i]) ++hits;
    return static_cast<double>(hits) / static_cast<double>(idx.size());
}

std::unique_ptr<DecisionFunction> model_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "cfswarm.model")
        throw ConfigError("not a cfswarm model file");
    if (j.value("version", 0) != 1)
        throw ConfigError("unsupported model file version");
    const auto& body = j.at("model");
    const std::string kind = body.at("kind").get<std::string>();
    if (kind == "logistic") return LogisticModel::from_json(body);
    if (kind == "forest") return ForestModel::from_json(body);
    throw ConfigError("unknown model kind '" + kind + "'");
}

void save_model(const DecisionFunction& f, const std::string& path) {
    nlohmann::json j;
    j["format"] = "cfswarm.model";
    j["version"] = 1;
    j["model"] = f.to_json();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write model file: " + path);
    out << j.dump(1) << "\n";
}

std::unique_ptr<DecisionFunction> load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("model file " + path + ": " + e.what());
    }
    return model_from_json(j);
}

} // namespace cfswarm
