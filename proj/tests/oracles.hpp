#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "engage/types.hpp"

namespace testutil {

// Deliberately naive reference implementations, kept structurally different
// from the library code so they can serve as independent oracles.

struct BruteRecord {
    std::string user_id;
    std::string app_id;
    int category = -1;
    int session_index = -1;
    std::int64_t start = 0;
    double dwell_seconds = 0.0;
};

inline std::vector<std::vector<engage::UsageEvent>>
brute_sessions(const std::vector<engage::UsageEvent>& events, double gap_seconds) {
    std::vector<std::vector<engage::UsageEvent>> sessions;
    for (std::size_t i = 0; i < events.size(); ++i) {
        bool new_session = i == 0;
        if (!new_session) {
            const double prev_end = static_cast<double>(events[i - 1].timestamp) +
                                    events[i - 1].duration_seconds;
            new_session = static_cast<double>(events[i].timestamp) - prev_end > gap_seconds;
        }
        if (new_session) sessions.emplace_back();
        sessions.back().push_back(events[i]);
    }
    return sessions;
}

inline std::vector<BruteRecord>
brute_dwell_records(const std::vector<engage::UsageEvent>& events, double gap_seconds) {
    std::vector<BruteRecord> out;
    const auto sessions = brute_sessions(events, gap_seconds);
    for (std::size_t si = 0; si < sessions.size(); ++si) {
        const auto& s = sessions[si];
        std::size_t i = 0;
        while (i < s.size()) {
            std::size_t j = i;
            while (j + 1 < s.size() && s[j + 1].app_id == s[i].app_id) ++j;
            BruteRecord r;
            r.user_id = s[i].user_id;
            r.app_id = s[i].app_id;
            r.category = s[i].category;
            r.session_index = static_cast<int>(si);
            r.start = s[i].timestamp;
            for (std::size_t k = i; k <= j; ++k) r.dwell_seconds += s[k].duration_seconds;
            out.push_back(r);
            i = j + 1;
        }
    }
    return out;
}

// numpy-style linear interpolation between order statistics.
inline double brute_quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    const double h = p * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(h));
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

struct BruteMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Textbook support-weighted precision/recall/F1 computed from scratch.
inline BruteMetrics brute_metrics(const std::vector<std::string>& truth,
                                  const std::vector<std::string>& predicted) {
    std::set<std::string> labels(truth.begin(), truth.end());
    labels.insert(predicted.begin(), predicted.end());

    BruteMetrics m;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i];
    m.accuracy = static_cast<double>(hits) / static_cast<double>(truth.size());

    const double n = static_cast<double>(truth.size());
    for (const auto& label : labels) {
        double tp = 0.0, fp = 0.0, fn = 0.0, support = 0.0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const bool t = truth[i] == label;
            const bool p = predicted[i] == label;
            support += t;
            if (t && p) tp += 1.0;
            if (!t && p) fp += 1.0;
            if (t && !p) fn += 1.0;
        }
        const double precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
        const double recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
        const double f1 =
            precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
        m.precision += support / n * precision;
        m.recall += support / n * recall;
        m.f1 += support / n * f1;
    }
    return m;
}

} // namespace testutil
