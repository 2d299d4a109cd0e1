#pragma once

#include <stdexcept>
#include <string>

namespace ridgewalk {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// shortest decimal string that round-trips the exact double
std::string format_double(double x);

// Write content to a temporary file in the target directory, then rename it
// over path, so readers never observe a partially written artifact.
void atomic_write(const std::string& path, const std::string& content);

} // namespace ridgewalk
