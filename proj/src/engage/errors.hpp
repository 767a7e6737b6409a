#pragma once

#include <stdexcept>
#include <string>

namespace engage {

// Exit-code taxonomy shared by the C API and the CLI:
//   2 usage error, 3 data error, 4 internal invariant violation.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InternalError : std::logic_error {
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace engage
