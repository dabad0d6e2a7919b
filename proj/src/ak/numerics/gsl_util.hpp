#pragma once

#include <gsl/gsl_errno.h>

#include <string>

#include "ak/core/errors.hpp"

namespace ak::num::detail {

// GSL aborts on error by default; every call site checks status codes instead.
inline void quiet_gsl() {
    static const bool done = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)done;
}

inline void gsl_check(int status, const char* fn) {
    if (status != GSL_SUCCESS && status != GSL_EUNDRFLW)
        throw numerical_error(std::string(fn) + ": " + gsl_strerror(status));
}

}  // namespace ak::num::detail
