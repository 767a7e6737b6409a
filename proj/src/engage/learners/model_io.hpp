#pragma once

#include <string>

namespace engage {

/// All persisted models share one envelope so loaders can reject mismatched
/// kinds and feature schemas before touching the payload.
struct ModelEnvelope {
    std::string kind;
    int version = 1;
    std::string schema_digest;
    std::string params; // learner-specific JSON payload
};

void save_model(const std::string& path, const ModelEnvelope& envelope);

/// Throws DataError when the file is missing or malformed, or when
/// expected_kind / expected_digest (non-empty) do not match.
ModelEnvelope load_model(const std::string& path, const std::string& expected_kind = "",
                         const std::string& expected_digest = "");

} // namespace engage
