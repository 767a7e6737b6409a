#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "../rng.hpp"
#include "dataset.hpp"

namespace engage {

struct LogRegConfig {
    int num_classes = 2;
    double lambda = 1e-4;       // L2 strength, bias unpenalized
    double learning_rate = 0.1;
    int epochs = 30;
    int batch_size = 64;        // 0 -> full batch, no shuffling
    std::uint64_t seed = 0;
};

/// Multinomial logistic regression trained by minibatch gradient descent.
class LogReg {
public:
    void fit(const Matrix& x, const std::vector<int>& y, const LogRegConfig& config);

    std::vector<double> predict_proba(std::span<const double> x) const;
    int predict(std::span<const double> x) const;

    /// Regularized mean negative log likelihood at the current weights.
    double loss(const Matrix& x, const std::vector<int>& y) const;
    /// Full-batch gradient at the current weights, flattened like weights().
    std::vector<double> gradient(const Matrix& x, const std::vector<int>& y) const;

    /// Row-major K x (d + 1); bias is the last column of each row.
    std::vector<double>& weights() { return w_; }
    const std::vector<double>& weights() const { return w_; }
    int num_classes() const { return k_; }
    int dimension() const { return d_; }

    /// Coefficients scaled by 2 * std of the feature where numeric_mask is
    /// set, so binary and numeric features compare on one footing.
    std::vector<double> standardized_coefficients(const Matrix& x,
                                                  const std::vector<bool>& numeric_mask) const;

    std::string to_json() const;
    static LogReg from_json(const std::string& json);

private:
    std::vector<double> scores(std::span<const double> x) const;

    int k_ = 0;
    int d_ = 0;
    double lambda_ = 0.0;
    std::vector<double> w_;
};

} // namespace engage
