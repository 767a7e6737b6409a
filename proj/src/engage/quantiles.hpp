#pragma once

#include <map>
#include <string>
#include <vector>

#include "taxonomy.hpp"
#include "types.hpp"

namespace engage {

/// Per-category 33% / 67% dwell-time thresholds. Categories unseen at fit
/// time fall back to a global (all-category) row.
class QuantileTable {
public:
    struct Row {
        double q33 = 0.0;
        double q67 = 0.0;
        std::size_t n = 0;
    };

    const Row& row(int category) const; // falls back to global row
    bool has_category(int category) const { return rows_.count(category) > 0; }
    const std::map<int, Row>& rows() const { return rows_; }
    const Row& global_row() const { return global_; }

    std::string to_json(const Taxonomy& taxonomy) const;
    static QuantileTable from_json(const std::string& json, const Taxonomy& taxonomy);

    friend QuantileTable fit_quantiles(const std::vector<const DwellRecord*>& train_records);

private:
    std::map<int, Row> rows_;
    Row global_;
};

/// Empirical quantile with linear interpolation between order statistics.
/// `sorted` must be ascending and non-empty.
double interpolated_quantile(const std::vector<double>& sorted, double p);

QuantileTable fit_quantiles(const std::vector<const DwellRecord*>& train_records);

EngagementLevel label_engagement(const DwellRecord& record, const QuantileTable& table);
EngagementLevel label_engagement(double dwell_seconds, const QuantileTable::Row& row);

} // namespace engage
