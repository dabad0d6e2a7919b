#pragma once

#include <stdexcept>
#include <string>

namespace ak {

// Bad user input: wrong shapes, out-of-range parameters, malformed configs.
struct invalid_argument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Input is well formed but outside the mathematical domain of the operation.
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Quadrature failure, Riccati blow-up, non-convergence.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw invalid_argument(what);
}

inline void require_domain(bool ok, const std::string& what) {
    if (!ok) throw domain_error(what);
}

}  // namespace ak
