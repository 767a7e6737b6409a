#include "baselines.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "io_util.hpp"
#include "learners/svm.hpp"
#include "rng.hpp"

namespace engage {

namespace {

constexpr double kHoursCap = 168.0;

template <typename K>
K argmax_count(const std::map<K, int>& counts, const K& fallback) {
    K best_key = fallback;
    int best = 0;
    for (const auto& [k, c] : counts) {
        if (c > best) {
            best = c;
            best_key = k;
        }
    }
    return best_key;
}

struct UserView {
    const std::vector<DwellRecord>* records;
    const std::vector<EngagementLevel>* levels;
    std::size_t n_train;
};

std::map<std::string, UserView> user_views(const LabeledCorpus& corpus,
                                           const std::map<std::string, std::size_t>& train_counts) {
    std::map<std::string, UserView> views;
    for (const auto& [user, su] : corpus.base->users) {
        auto it = train_counts.find(user);
        if (it == train_counts.end()) continue;
        views[user] = {&su.records, &corpus.levels.at(user), it->second};
    }
    return views;
}

std::string global_train_mfu(const std::map<std::string, UserView>& views) {
    std::map<std::string, int> counts;
    for (const auto& [user, v] : views)
        for (std::size_t k = 0; k < std::min(v.n_train, v.records->size()); ++k)
            counts[(*v.records)[k].app_id] += 1;
    return argmax_count(counts, std::string());
}

BaselineOutputs run_mfu(const std::map<std::string, UserView>& views, bool with_level) {
    BaselineOutputs out;
    const std::string global = with_level ? std::string() : global_train_mfu(views);
    for (const auto& [user, v] : views) {
        if (with_level) {
            std::map<std::pair<std::string, int>, int> counts;
            for (std::size_t k = 0; k < std::min(v.n_train, v.records->size()); ++k)
                counts[{(*v.records)[k].app_id, static_cast<int>((*v.levels)[k])}] += 1;
            const auto best = argmax_count(counts, std::pair<std::string, int>{});
            BaselinePrediction p;
            p.app = best.first;
            p.level = static_cast<EngagementLevel>(best.second);
            p.has_level = true;
            for (std::size_t k = 1; k < v.records->size(); ++k)
                out.predictions[user][static_cast<int>(k)] = p;
        } else {
            std::map<std::string, int> counts;
            for (std::size_t k = 0; k < std::min(v.n_train, v.records->size()); ++k)
                counts[(*v.records)[k].app_id] += 1;
            BaselinePrediction p;
            p.app = argmax_count(counts, global);
            for (std::size_t k = 1; k < v.records->size(); ++k)
                out.predictions[user][static_cast<int>(k)] = p;
        }
    }
    return out;
}

BaselineOutputs run_mru(const std::map<std::string, UserView>& views, bool with_level) {
    BaselineOutputs out;
    for (const auto& [user, v] : views) {
        for (std::size_t k = 1; k < v.records->size(); ++k) {
            BaselinePrediction p;
            p.app = (*v.records)[k - 1].app_id;
            if (with_level) {
                p.level = (*v.levels)[k - 1];
                p.has_level = true;
            }
            out.predictions[user][static_cast<int>(k)] = p;
        }
    }
    return out;
}

BaselineOutputs run_cpd(const std::map<std::string, UserView>& views) {
    BaselineOutputs out;
    const std::string global = global_train_mfu(views);
    for (const auto& [user, v] : views) {
        std::array<std::map<std::string, int>, 24> slots;
        std::map<std::string, int> overall;
        for (std::size_t k = 0; k < std::min(v.n_train, v.records->size()); ++k) {
            const auto& r = (*v.records)[k];
            slots[static_cast<std::size_t>(r.hour_of_day)][r.app_id] += 1;
            overall[r.app_id] += 1;
        }
        const std::string user_mfu = argmax_count(overall, global);
        for (std::size_t k = 1; k < v.records->size(); ++k) {
            const auto& slot = slots[static_cast<std::size_t>((*v.records)[k].hour_of_day)];
            BaselinePrediction p;
            // add-one smoothing over the train vocabulary leaves the slot
            // argmax unchanged, so an empty slot falls back to the user MFU
            p.app = slot.empty() ? user_mfu : argmax_count(slot, user_mfu);
            out.predictions[user][static_cast<int>(k)] = p;
        }
    }
    return out;
}

BaselineOutputs run_bn(const std::map<std::string, UserView>& views) {
    BaselineOutputs out;
    const std::string global = global_train_mfu(views);
    for (const auto& [user, v] : views) {
        std::set<std::string> vocab;
        std::map<std::string, std::map<std::string, int>> bigram;  // a_{t-1} -> a_t
        std::map<std::string, std::map<std::string, int>> skipgram; // a_{t-2} -> a_t
        std::map<std::string, int> overall;
        const std::size_t n_train = std::min(v.n_train, v.records->size());
        for (std::size_t k = 0; k < n_train; ++k) {
            const auto& app = (*v.records)[k].app_id;
            vocab.insert(app);
            overall[app] += 1;
            if (k >= 1) bigram[(*v.records)[k - 1].app_id][app] += 1;
            if (k >= 2) skipgram[(*v.records)[k - 2].app_id][app] += 1;
        }
        const std::string user_mfu = argmax_count(overall, global);
        const double vsize = static_cast<double>(vocab.size());
        auto smoothed = [&](const std::map<std::string, std::map<std::string, int>>& table,
                            const std::string& context, const std::string& app) {
            auto it = table.find(context);
            double total = vsize, count = 1.0; // add-one over the vocabulary
            if (it != table.end()) {
                for (const auto& [a, c] : it->second) total += c;
                auto ait = it->second.find(app);
                if (ait != it->second.end()) count += ait->second;
            }
            return count / total;
        };
        for (std::size_t k = 1; k < v.records->size(); ++k) {
            BaselinePrediction p;
            if (vocab.empty()) {
                p.app = user_mfu;
            } else {
                const std::string& a1 = (*v.records)[k - 1].app_id;
                const std::string* a2 = k >= 2 ? &(*v.records)[k - 2].app_id : nullptr;
                double best = -1.0;
                for (const auto& app : vocab) {
                    double score = 0.5 * smoothed(bigram, a1, app);
                    score += 0.5 * (a2 ? smoothed(skipgram, *a2, app)
                                       : smoothed(bigram, a1, app));
                    if (score > best) {
                        best = score;
                        p.app = app;
                    }
                }
            }
            out.predictions[user][static_cast<int>(k)] = p;
        }
    }
    return out;
}

BaselineOutputs run_svm_context(const std::map<std::string, UserView>& views,
                                std::uint64_t seed) {
    BaselineOutputs out;
    const std::string global = global_train_mfu(views);
    for (const auto& [user, v] : views) {
        const std::size_t n_train = std::min(v.n_train, v.records->size());
        std::set<std::string> vocab_set;
        std::map<std::string, int> overall;
        for (std::size_t k = 0; k < n_train; ++k) {
            vocab_set.insert((*v.records)[k].app_id);
            overall[(*v.records)[k].app_id] += 1;
        }
        const std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());
        const std::string user_mfu = argmax_count(overall, global);
        const int vsize = static_cast<int>(vocab.size());
        auto app_index = [&](const std::string& app) {
            auto it = std::lower_bound(vocab.begin(), vocab.end(), app);
            return it != vocab.end() && *it == app ? static_cast<int>(it - vocab.begin()) : -1;
        };

        std::map<std::string, std::int64_t> last_use;
        auto featurize = [&](std::size_t k) {
            const auto& r = (*v.records)[k];
            std::vector<double> x(24 + 7 + static_cast<std::size_t>(vsize) + 1 +
                                      static_cast<std::size_t>(vsize),
                                  0.0);
            x[static_cast<std::size_t>(r.hour_of_day)] = 1.0;
            x[24 + static_cast<std::size_t>(r.day_of_week)] = 1.0;
            const int last = app_index((*v.records)[k - 1].app_id);
            x[31 + static_cast<std::size_t>(last < 0 ? vsize : last)] = 1.0;
            for (int a = 0; a < vsize; ++a) {
                auto it = last_use.find(vocab[static_cast<std::size_t>(a)]);
                double h = kHoursCap;
                if (it != last_use.end())
                    h = std::min(kHoursCap,
                                 static_cast<double>(r.start - it->second) / 3600.0);
                x[32 + static_cast<std::size_t>(vsize) + static_cast<std::size_t>(a)] =
                    h / kHoursCap;
            }
            return x;
        };

        LinearSvm svm;
        bool trained = false;
        {
            Matrix x;
            std::vector<int> y;
            std::set<int> distinct;
            std::map<std::string, std::int64_t> train_last_use;
            for (std::size_t k = 0; k < n_train; ++k) {
                if (k >= 1) {
                    const int label = app_index((*v.records)[k].app_id);
                    if (label >= 0) {
                        last_use = train_last_use; // featurize reads last_use
                        x.push_row(featurize(k));
                        y.push_back(label);
                        distinct.insert(label);
                    }
                }
                train_last_use[(*v.records)[k].app_id] = (*v.records)[k].start;
            }
            if (x.rows() >= 10 && distinct.size() >= 2) {
                SvmConfig sc;
                sc.num_classes = vsize;
                sc.seed = Rng(seed ^ fnv1a64(user)).next_u64();
                svm.fit(x, y, sc);
                trained = true;
            }
        }

        last_use.clear();
        for (std::size_t k = 0; k < v.records->size(); ++k) {
            if (k >= 1) {
                BaselinePrediction p;
                if (trained) {
                    const auto x = featurize(k);
                    p.app = vocab[static_cast<std::size_t>(svm.predict(x))];
                } else {
                    p.app = user_mfu;
                }
                out.predictions[user][static_cast<int>(k)] = p;
            }
            last_use[(*v.records)[k].app_id] = (*v.records)[k].start;
        }
    }
    return out;
}

} // namespace

const std::vector<std::string>& baseline_names() {
    static const std::vector<std::string> names = {"mfu", "mru", "cpd",       "bn",
                                                   "svm_context", "tuple_mfu", "tuple_mru"};
    return names;
}

BaselineOutputs run_baseline(const std::string& name, const LabeledCorpus& corpus,
                             const std::map<std::string, std::size_t>& train_counts,
                             std::uint64_t seed) {
    const auto views = user_views(corpus, train_counts);
    BaselineOutputs out;
    if (name == "mfu") out = run_mfu(views, false);
    else if (name == "tuple_mfu") out = run_mfu(views, true);
    else if (name == "mru") out = run_mru(views, false);
    else if (name == "tuple_mru") out = run_mru(views, true);
    else if (name == "cpd") out = run_cpd(views);
    else if (name == "bn") out = run_bn(views);
    else if (name == "svm_context") out = run_svm_context(views, seed);
    else throw UsageError("unknown baseline: " + name);
    out.name = name;
    return out;
}

} // namespace engage
