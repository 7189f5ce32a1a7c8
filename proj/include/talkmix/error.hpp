#pragma once

#include <stdexcept>
#include <string>

namespace talkmix {

// Error in input data or files (bad schema, malformed line, kind mismatch...).
// The CLI maps this to exit code 2; usage errors exit with 1.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace talkmix
