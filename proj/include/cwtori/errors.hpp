#pragma once

#include <stdexcept>
#include <string>

namespace cwtori {

//! Base error; `exit_code` is the CLI mapping (1 I/O, 2 validation,
//! 3 undetermined, 4 no spectral curve, 5 degenerate transform).
struct error : std::runtime_error {
    int exit_code;
    explicit error(const std::string& msg, int code = 2) : std::runtime_error(msg), exit_code(code) {}
};

struct io_error : error {
    explicit io_error(const std::string& msg) : error(msg, 1) {}
};

struct validation_error : error {
    explicit validation_error(const std::string& msg) : error(msg, 2) {}
};

struct undetermined_error : error {
    explicit undetermined_error(const std::string& msg) : error(msg, 3) {}
};

struct no_spectral_curve_error : error {
    explicit no_spectral_curve_error(const std::string& msg) : error(msg, 4) {}
};

struct degenerate_transform_error : error {
    explicit degenerate_transform_error(const std::string& msg) : error(msg, 5) {}
};

}  // namespace cwtori
