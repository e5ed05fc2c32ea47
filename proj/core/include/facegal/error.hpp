#pragma once

#include <stdexcept>
#include <string>

namespace facegal {

// Error categories. Data errors (bad files, malformed vectors) map to CLI
// exit code 2, contract violations (bad arguments, mismatched dims) to 3.
enum class errc {
    zero_vector,
    non_finite,
    dimension_mismatch,
    empty_label,
    unknown_index,
    insufficient_data,
    invalid_config,
    empty_dataset,
    parse_error,
    io_error,
    version_mismatch,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }

    // true for errors caused by input data rather than caller contract
    bool is_data_error() const noexcept {
        switch (code_) {
            case errc::zero_vector:
            case errc::non_finite:
            case errc::parse_error:
            case errc::io_error:
            case errc::version_mismatch:
                return true;
            default:
                return false;
        }
    }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace facegal
