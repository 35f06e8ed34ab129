#ifndef AFFECT_CORE_ERROR_HPP
#define AFFECT_CORE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace affect {

// Stable failure categories; mirrored 1:1 by the C API status codes.
enum class Status {
    ok = 0,
    io_error = 1,
    bad_format = 2,
    invalid_argument = 3,
    no_voiced_frames = 4,
    too_short = 5,
    untestable = 6,
    internal_error = 7,
};

class Error : public std::runtime_error {
public:
    Error(Status status, const std::string& message)
        : std::runtime_error(message), status_(status) {}

    Status status() const { return status_; }

private:
    Status status_;
};

} // namespace affect

#endif
