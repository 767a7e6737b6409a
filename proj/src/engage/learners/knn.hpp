#pragma once

#include <string>
#include <vector>

#include "dataset.hpp"

namespace engage {

struct KnnConfig {
    int num_classes = 2;
    int k = 15;
};

/// Exact k-nearest-neighbour classifier, Euclidean distance. Ties on distance
/// break toward the earlier training row, so results are deterministic.
class Knn {
public:
    void fit(const Matrix& x, const std::vector<int>& y, const KnnConfig& config);

    std::vector<double> predict_proba(std::span<const double> x) const;
    int predict(std::span<const double> x) const;

    int num_classes() const { return num_classes_; }

    std::string to_json() const;
    static Knn from_json(const std::string& json);

private:
    int num_classes_ = 0;
    int k_ = 15;
    Matrix x_;
    std::vector<int> y_;
};

} // namespace engage
