#include "model_io.hpp"

#include "json.hpp"

#include "../errors.hpp"
#include "../io_util.hpp"

namespace engage {

namespace {
constexpr int kEnvelopeVersion = 1;
}

void save_model(const std::string& path, const ModelEnvelope& envelope) {
    nlohmann::ordered_json j;
    j["kind"] = envelope.kind;
    j["version"] = kEnvelopeVersion;
    j["schema_digest"] = envelope.schema_digest;
    j["params"] = nlohmann::ordered_json::parse(envelope.params);
    write_file(path, j.dump(2) + "\n");
}

ModelEnvelope load_model(const std::string& path, const std::string& expected_kind,
                         const std::string& expected_digest) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw DataError("model file " + path + " is not valid JSON: " + e.what());
    }
    ModelEnvelope env;
    env.kind = j.at("kind").get<std::string>();
    env.version = j.at("version").get<int>();
    env.schema_digest = j.at("schema_digest").get<std::string>();
    env.params = j.at("params").dump();
    if (env.version != kEnvelopeVersion)
        throw DataError("model file " + path + " has unsupported version " +
                        std::to_string(env.version));
    if (!expected_kind.empty() && env.kind != expected_kind)
        throw DataError("model file " + path + " holds a '" + env.kind + "' model, expected '" +
                        expected_kind + "'");
    if (!expected_digest.empty() && env.schema_digest != expected_digest)
        throw DataError("model file " + path + " was trained on a different feature schema");
    return env;
}

} // namespace engage
