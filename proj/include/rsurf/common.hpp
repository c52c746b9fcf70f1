#ifndef RSURF_COMMON_HPP
#define RSURF_COMMON_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsurf {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Invalid input for the requested operation (exit code 2 at the CLI).
struct domain_error : std::domain_error {
    explicit domain_error(const std::string& msg) : std::domain_error(msg) {}
};

/// An iteration failed to converge or a tolerance could not be met
/// (exit code 3 at the CLI). Carries the best residual seen.
struct numeric_error : std::runtime_error {
    double residual;
    explicit numeric_error(const std::string& msg, double res = 0.0)
        : std::runtime_error(msg), residual(res) {}
};

/// A structural invariant was violated; indicates a bug upstream
/// (exit code 4 at the CLI).
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

inline bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

inline double sqr(double x) { return x * x; }

} // namespace rsurf

#endif // RSURF_COMMON_HPP
