#pragma once

#include <complex>
#include <string>
#include <vector>

namespace ak {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

// Value plus diagnostics returned by every pricer.
struct price_quote {
    double value = 0.0;
    double error_estimate = 0.0;
    std::vector<std::string> warnings;
};

}  // namespace ak
