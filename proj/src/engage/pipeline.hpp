#pragma once

#include <string>
#include <vector>

#include "predictors.hpp"
#include "synthgen.hpp"

namespace engage {

/// One JSON config drives every stage; stages exchange data only through
/// files under workdir and each writes a manifest with input/output digests.
struct RunConfig {
    std::string workdir = "run";
    std::uint64_t seed = 42;
    int threads = 1;
    std::string report_format = "csv"; // csv or json

    std::string log_path;              // empty -> <workdir>/data/events.csv
    std::string log_format = "csv";
    std::vector<std::string> taxonomy; // empty -> inferred from the log
    int timezone_offset_minutes = 0;
    std::size_t malformed_tolerance = 0;

    double session_gap_seconds = 300.0;
    double train_fraction = 0.7;

    std::string strategy = "all"; // sequential | stacking | boosting | all
    std::string task = "joint";   // app | level | joint (report emphasis)
    JointConfig joint;
    std::vector<std::string> baselines; // empty -> all baselines

    GeneratorConfig generator;

    std::string raw_json = "{}"; // original config text, digested in manifests

    static RunConfig from_json(const std::string& json);
    static RunConfig from_json_file(const std::string& path);
};

extern const std::vector<std::string> kStageNames;

/// generate | ingest | analyze | featurize | train | evaluate | report.
void run_stage(const RunConfig& config, const std::string& stage);

/// Loads the model saved under model_dir and scores one serialized instance.
/// Returns a JSON object with app, category and level.
std::string run_predict_json(const std::string& model_dir, const std::string& snapshot_json);

} // namespace engage
