#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace engage {

struct ForestConfig {
    int num_trees = 100;
    int max_depth = 12;
    int min_samples_leaf = 1;
    int min_samples_split = 2;
    int max_features = 0;  // 0 -> round(sqrt(d))
    bool bootstrap = true;
    int num_threads = 1;   // trees are seeded individually, so thread count
                           // never changes the result
    std::uint64_t seed = 0;
};

struct TreeNode {
    int feature = -1; // -1 -> leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> value; // leaf payload: class shares or mean targets
};

struct Tree {
    std::vector<TreeNode> nodes;
    const std::vector<double>& predict(std::span<const double> x) const;
};

/// Random forest with Gini splits. Probabilities are hard-vote shares.
class RandomForestClassifier {
public:
    void fit(const Matrix& x, const std::vector<int>& y, int num_classes,
             const ForestConfig& config);

    std::vector<double> predict_proba(std::span<const double> x) const;
    int predict(std::span<const double> x) const;

    /// Mean decrease in impurity per feature, averaged over trees. Left
    /// unnormalized: values sum to the mean total impurity decrease.
    const std::vector<double>& feature_importance() const { return importance_; }

    int num_classes() const { return k_; }
    const std::vector<Tree>& trees() const { return trees_; }

    std::string to_json() const;
    static RandomForestClassifier from_json(const std::string& json);

private:
    int k_ = 0;
    int d_ = 0;
    std::vector<Tree> trees_;
    std::vector<double> importance_;
};

/// Multi-output regression forest; splits minimize the summed per-output
/// squared error. Used to fit correction residuals.
class RegressionForest {
public:
    void fit(const Matrix& x, const Matrix& y, const ForestConfig& config);

    std::vector<double> predict(std::span<const double> x) const;

    int num_outputs() const { return q_; }
    const std::vector<Tree>& trees() const { return trees_; }

    std::string to_json() const;
    static RegressionForest from_json(const std::string& json);

private:
    int q_ = 0;
    int d_ = 0;
    std::vector<Tree> trees_;
};

} // namespace engage
