#pragma once

#include <stdexcept>
#include <string>

namespace swave {

/// Runtime numerical failure: non-finite state, blow-up past the configured
/// ceiling, or a truncated improper integral that cannot meet its tolerance.
/// Distinct from std::invalid_argument, which marks configuration and
/// precondition errors.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace swave
