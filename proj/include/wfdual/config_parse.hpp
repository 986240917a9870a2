#pragma once

#include <stdexcept>
#include <string>

#include "wfdual/model_config.hpp"

namespace wfdual {

struct ConfigParseError : std::runtime_error {
    explicit ConfigParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parses the sectioned config format:
//
//   [lambda]            # measure on [0,1]
//   atom = 0, 1.0
//   beta_density = 0.5, 0.5, 1   # c, a, b
//   [mu]                # measure on (-1,1)
//   [nu]
//   [theta]
//   theta_a = 0.5
//   theta_A = 0.5
//   [selection]
//   kappa = 3
//   beta_l = 3, 0.5     # l, rate
//   p = 3, 1, 1.0       # l, i, value
//
// '#' starts a comment.  Unknown keys and malformed lines are errors, reported
// with their line number.  The parsed config is validated; violations raise
// ConfigParseError as well.
ModelConfig parse_config_text(const std::string& text);
ModelConfig parse_config_file(const std::string& path);

}  // namespace wfdual
