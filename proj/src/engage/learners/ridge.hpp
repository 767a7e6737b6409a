#pragma once

#include <string>
#include <vector>

#include "dataset.hpp"

namespace engage {

struct RidgeConfig {
    double lambda = 1e-2; // bias unpenalized
};

/// Multi-output ridge regression solved exactly by Cholesky factorization of
/// the normal equations.
class Ridge {
public:
    void fit(const Matrix& x, const Matrix& y, const RidgeConfig& config);

    std::vector<double> predict(std::span<const double> x) const;

    int num_outputs() const { return q_; }

    std::string to_json() const;
    static Ridge from_json(const std::string& json);

private:
    int q_ = 0;
    int d_ = 0;
    std::vector<double> w_; // Q x (d + 1), bias last
};

} // namespace engage
