#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"

namespace engage {

struct SvmConfig {
    int num_classes = 2;
    double lambda = 1e-4;
    double learning_rate = 0.05;
    int epochs = 30;
    std::uint64_t seed = 0;
};

/// Linear SVM, one-vs-rest hinge loss with L2, trained by SGD. Probabilities
/// come from a softmax over the per-class margins.
class LinearSvm {
public:
    void fit(const Matrix& x, const std::vector<int>& y, const SvmConfig& config);

    std::vector<double> margins(std::span<const double> x) const;
    std::vector<double> predict_proba(std::span<const double> x) const;
    int predict(std::span<const double> x) const;

    int num_classes() const { return k_; }

    std::string to_json() const;
    static LinearSvm from_json(const std::string& json);

private:
    int k_ = 0;
    int d_ = 0;
    std::vector<double> w_; // K x (d + 1), bias last
};

} // namespace engage
