#ifndef RSURF_GAUSSINT_HPP
#define RSURF_GAUSSINT_HPP

#include <optional>
#include <boost/multiprecision/cpp_int.hpp>

#include "rsurf/common.hpp"
#include "rsurf/unipoly.hpp"

namespace rsurf {

using bigint = boost::multiprecision::cpp_int;

/// Gaussian integer a + bi with arbitrary-precision components.
struct GaussInt {
    bigint re, im;

    GaussInt() : re(0), im(0) {}
    GaussInt(bigint r, bigint i) : re(std::move(r)), im(std::move(i)) {}
    explicit GaussInt(long r) : re(r), im(0) {}

    bool is_zero() const { return re == 0 && im == 0; }
    GaussInt operator+(const GaussInt& o) const { return {re + o.re, im + o.im}; }
    GaussInt operator-(const GaussInt& o) const { return {re - o.re, im - o.im}; }
    GaussInt operator-() const { return {-re, -im}; }
    GaussInt operator*(const GaussInt& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    bool operator==(const GaussInt& o) const { return re == o.re && im == o.im; }

    /// Exact quotient; throws internal_error if the division has a remainder.
    GaussInt div_exact(const GaussInt& d) const {
        bigint n2 = d.re * d.re + d.im * d.im;
        if (n2 == 0) throw internal_error("GaussInt: division by zero");
        bigint qr = re * d.re + im * d.im;
        bigint qi = im * d.re - re * d.im;
        if (qr % n2 != 0 || qi % n2 != 0)
            throw internal_error("GaussInt: inexact division");
        return {qr / n2, qi / n2};
    }

    cplx to_cplx() const {
        return {static_cast<double>(re), static_cast<double>(im)};
    }
};

/// Coefficients as Gaussian integers, if every coefficient is within `eps`
/// of one; otherwise nullopt.
inline std::optional<std::vector<GaussInt>> as_gaussian_coeffs(const UniPoly& p,
                                                               double eps = 1e-9) {
    std::vector<GaussInt> out;
    out.reserve(p.coeffs().size());
    for (cplx a : p.coeffs()) {
        double rr = std::round(a.real()), ri = std::round(a.imag());
        if (std::abs(a.real() - rr) > eps || std::abs(a.imag() - ri) > eps) return std::nullopt;
        if (std::abs(rr) > 1e15 || std::abs(ri) > 1e15) return std::nullopt;
        out.emplace_back(bigint(static_cast<long long>(rr)), bigint(static_cast<long long>(ri)));
    }
    return out;
}

/// Fraction-free Bareiss determinant; exact over the Gaussian integers.
inline GaussInt bareiss_det(std::vector<std::vector<GaussInt>> a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return GaussInt(1);
    GaussInt prev(1);
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k].is_zero()) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (!a[i][k].is_zero()) { piv = i; break; }
            if (piv < 0) return GaussInt(0);
            std::swap(a[k], a[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                GaussInt num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                a[i][j] = num.div_exact(prev);
            }
        prev = a[k][k];
    }
    GaussInt det = a[n - 1][n - 1];
    if (sign < 0) det = -det;
    return det;
}

} // namespace rsurf

#endif // RSURF_GAUSSINT_HPP
