#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "features.hpp"
#include "learners/forest.hpp"
#include "learners/logreg.hpp"
#include "learners/ridge.hpp"
#include "learners/svm.hpp"

namespace engage {

enum class Strategy { Sequential, Stacking, Boosting };

Strategy parse_strategy(const std::string& s);
std::string to_string(Strategy s);

struct JointConfig {
    ForestConfig generic_forest{.num_trees = 100, .max_depth = 12};
    SvmConfig personal_svm{};
    int min_personal_instances = 20;
    LogRegConfig engagement_logreg{.num_classes = 3, .epochs = 200};
    int min_category_support = 50;
    LogRegConfig meta_logreg{.learning_rate = 0.3, .epochs = 100};
    int num_folds = 5;
    std::string residual_kind = "forest"; // "forest" or "ridge"
    // The correction signal must survive tree averaging to overcome the 1.0
    // one-hot margin, so the residual trees see every feature and keep leaves
    // large enough that unpredictable residuals average toward zero.
    ForestConfig residual_forest{
        .num_trees = 50, .max_depth = 12, .min_samples_leaf = 8, .max_features = 1 << 20};
    RidgeConfig residual_ridge{};
    std::vector<double> gamma_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    int num_threads = 1;
    std::uint64_t seed = 0;
};

/// Correction learner for the boosting strategy: maps a feature vector to a
/// residual over the (category blocks + level blocks) output.
class ResidualRegressor {
public:
    virtual ~ResidualRegressor() = default;
    virtual void fit(const Matrix& x, const Matrix& residuals) = 0;
    virtual std::vector<double> predict(std::span<const double> x) const = 0;
    virtual std::string kind() const = 0;
    virtual std::string to_json() const = 0;
};

std::unique_ptr<ResidualRegressor> make_residual_regressor(const JointConfig& config);
std::unique_ptr<ResidualRegressor> residual_regressor_from_json(const std::string& kind,
                                                                const std::string& json);

/// Next-app model: a population-level category forest multiplied with a
/// per-user app model, frequency fallback for thin users.
class HybridModel {
public:
    void fit(const InstanceSet& set, const JointConfig& config);

    struct RankedApp {
        std::string app;
        int category = -1;
        double score = 0.0;
    };

    std::vector<double> category_proba(const PredictionInstance& instance) const;
    int predict_category(const PredictionInstance& instance) const;
    /// Top-1 contract: best app within the argmax category.
    std::string predict_app(const PredictionInstance& instance) const;
    /// Full product ranking P_g(cat(a)) * P_p(a) over the user's vocabulary,
    /// kept for diagnostics; empty when the user has no personal model.
    std::vector<RankedApp> rank_apps(const PredictionInstance& instance) const;
    /// App choice constrained to the given category (used after a joint
    /// strategy overrides the generic category).
    std::string predict_app_in_category(const PredictionInstance& instance, int category) const;

    const RandomForestClassifier& generic() const { return generic_; }
    bool has_personal_model(const std::string& user) const { return personal_.count(user) > 0; }
    int num_categories() const { return num_categories_; }

    std::string to_json() const;
    static HybridModel from_json(const std::string& json);

private:
    struct Personal {
        PersonalSchema schema;
        LinearSvm svm;
    };

    int num_categories_ = 0;
    RandomForestClassifier generic_;
    std::map<std::string, Personal> personal_;
    std::map<std::string, int> app_category_;
    std::map<std::string, std::map<std::string, int>> user_app_counts_;
    std::map<int, std::string> category_top_app_;
    std::string top_app_;
};

/// One engagement classifier per category with enough support, plus a global
/// fallback trained on everything.
class EngagementModelBank {
public:
    void fit(const std::vector<const PredictionInstance*>& train, const JointConfig& config);

    std::vector<double> level_proba(const EngagementSnapshot& snapshot, int category) const;
    EngagementLevel predict_level(const EngagementSnapshot& snapshot, int category) const;

    bool has_category_model(int category) const { return per_category_.count(category) > 0; }
    const LogReg& category_model(int category) const { return per_category_.at(category); }
    const LogReg& global_model() const { return global_; }

    std::string to_json() const;
    static EngagementModelBank from_json(const std::string& json);

private:
    std::map<int, LogReg> per_category_;
    LogReg global_;
};

struct JointPrediction {
    int category = -1;
    EngagementLevel level = EngagementLevel::Light;
    std::string app;
    int generic_category = -1; // before any strategy-level correction
};

/// Out-of-fold generic-category probabilities for the training instances,
/// shared between the stacking and boosting strategies.
struct FoldedGenericPredictions {
    std::vector<std::vector<double>> proba; // parallel to the train pointer list
    std::vector<int> predicted;
};

FoldedGenericPredictions folded_generic_predictions(
    const std::vector<const PredictionInstance*>& train, int num_categories,
    const JointConfig& config);

/// Components shared when several strategies train on the same instance set;
/// avoids refitting the hybrid model and the fold forests per strategy.
struct TrainCache {
    bool has_components = false;
    HybridModel hybrid;
    EngagementModelBank bank;
    bool has_folded = false;
    FoldedGenericPredictions folded;
};

class JointModel {
public:
    struct BoostingOverride {
        std::unique_ptr<ResidualRegressor> h2; // pre-built correction model
        bool skip_h2_fit = false;
        bool fix_gamma = false;
        double gamma = 1.0;
    };

    void train(const InstanceSet& set, Strategy strategy, const JointConfig& config,
               BoostingOverride* boosting_override = nullptr, TrainCache* cache = nullptr);

    JointPrediction predict(const PredictionInstance& instance) const;

    Strategy strategy() const { return strategy_; }
    double gamma() const { return gamma_; }
    const HybridModel& hybrid() const { return hybrid_; }
    const EngagementModelBank& bank() const { return bank_; }

    void save(const std::string& dir) const;
    static JointModel load(const std::string& dir);

private:
    std::vector<double> boosting_scores(const PredictionInstance& instance,
                                        int generic_category) const;

    Strategy strategy_ = Strategy::Sequential;
    int num_categories_ = 0;
    std::string generic_digest_;
    std::string engagement_digest_;
    HybridModel hybrid_;
    EngagementModelBank bank_;
    LogReg meta_;                                   // stacking
    std::vector<int> meta_classes_;                 // observed cat*3+level codes
    std::unique_ptr<ResidualRegressor> residual_;   // boosting
    double gamma_ = 1.0;
};

/// Residual target per Algorithm 1: indicator of the true (category, level)
/// minus the indicator of the predicted category with zero level block.
std::vector<double> residual_target(int true_category, EngagementLevel true_level,
                                    int predicted_category, int num_categories);

/// Correction-model input: engagement vector assembled with the first-stage
/// category, concatenated with that category's indicator.
std::vector<double> boosting_input(const EngagementSnapshot& snapshot, int predicted_category,
                                   int num_categories);

} // namespace engage
