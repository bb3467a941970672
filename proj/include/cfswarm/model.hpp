#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfswarm/dataset.hpp"

namespace cfswarm {

/// The decision function f(.). Implementations are immutable after training
/// and must tolerate concurrent predict_proba calls.
class DecisionFunction {
public:
    virtual ~DecisionFunction() = default;

    /// Probability of class 1, always in [0, 1].
    virtual double predict_proba(std::span<const double> x) const = 0;

    /// Class assignment: 1 iff probability >= 0.5.
    int predict_class(std::span<const double> x) const {
        return predict_proba(x) >= 0.5 ? 1 : 0;
    }

    virtual std::string kind() const = 0;
    virtual nlohmann::json to_json() const = 0;
};

class LogisticModel final : public DecisionFunction {
public:
    LogisticModel(std::vector<double> weights, double bias)
        : weights_(std::move(weights)), bias_(bias) {}

    double predict_proba(std::span<const double> x) const override;
    std::string kind() const override { return "logistic"; }
    nlohmann::json to_json() const override;
    static std::unique_ptr<LogisticModel> from_json(const nlohmann::json& j);

    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }

private:
    std::vector<double> weights_;
    double bias_;
};

/// Axis-aligned CART-style tree stored as a flat node array.
struct TreeNode {
    int feature = -1;      // -1 marks a leaf
    double threshold = 0;  // go left iff x[feature] <= threshold
    int left = -1;
    int right = -1;
    double leaf = 0;       // class-1 fraction at the leaf
};

class ForestModel final : public DecisionFunction {
public:
    explicit ForestModel(std::vector<std::vector<TreeNode>> trees)
        : trees_(std::move(trees)) {}

    double predict_proba(std::span<const double> x) const override;
    std::string kind() const override { return "forest"; }
    nlohmann::json to_json() const override;
    static std::unique_ptr<ForestModel> from_json(const nlohmann::json& j);

    const std::vector<std::vector<TreeNode>>& trees() const { return trees_; }
    static double tree_predict(const std::vector<TreeNode>& tree,
                               std::span<const double> x);

private:
    std::vector<std::vector<TreeNode>> trees_;
};

/// Full-batch gradient descent on log loss from zero-initialized weights,
/// so zero epochs yields p = 0.5 everywhere.
std::unique_ptr<DecisionFunction> train_logistic(const Dataset& data, double lr,
                                                 std::size_t epochs,
                                                 std::uint64_t seed);

/// Bootstrap-sampled trees, greedy Gini splits, sqrt(width) feature
/// subsampling per split; the forest probability is the mean of the trees'
/// leaf fractions.
std::unique_ptr<DecisionFunction> train_forest(const Dataset& data,
                                               std::size_t n_trees,
                                               std::size_t max_depth,
                                               std::uint64_t seed);

enum class Split { Train, Test };

/// Fraction of rows in the split whose predicted class equals the label.
double accuracy(const DecisionFunction& f, const Dataset& data, Split split);

void save_model(const DecisionFunction& f, const std::string& path);
std::unique_ptr<DecisionFunction> load_model(const std::string& path);
std::unique_ptr<DecisionFunction> model_from_json(const nlohmann::json& j);

} // namespace cfswarm
