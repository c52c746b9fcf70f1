#ifndef RSURF_RESULTANT_HPP
#define RSURF_RESULTANT_HPP

#include <Eigen/Dense>

#include "rsurf/gaussint.hpp"
#include "rsurf/unipoly.hpp"

namespace rsurf {

/**
 * Sylvester matrix of f (degree m) and g (degree n): order m+n, with n rows
 * of shifted f-coefficients followed by m rows of shifted g-coefficients,
 * each row listing the coefficients from the leading one down.
 */
inline Eigen::MatrixXcd sylvester(const UniPoly& f, const UniPoly& g) {
    if (f.is_zero() || g.is_zero()) throw domain_error("sylvester: zero polynomial");
    const int m = f.degree(), n = g.degree();
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(m + n, m + n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s(r, r + k) = f.coeff(m - k);
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s(n + r, r + k) = g.coeff(n - k);
    return s;
}

/// Same layout with entries taken from descending coefficient arrays of
/// nominal degrees m and n; used when evaluating polynomial-entry resultants
/// at points where the actual degree may drop.
inline Eigen::MatrixXcd sylvester_nominal(const std::vector<cplx>& a_desc,
                                          const std::vector<cplx>& b_desc) {
    const int m = static_cast<int>(a_desc.size()) - 1;
    const int n = static_cast<int>(b_desc.size()) - 1;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(m + n, m + n);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s(r, r + k) = a_desc[k];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s(n + r, r + k) = b_desc[k];
    return s;
}

/// Exact resultant when both inputs have Gaussian-integer coefficients.
inline std::optional<GaussInt> resultant_exact(const UniPoly& f, const UniPoly& g) {
    if (f.is_zero() || g.is_zero()) throw domain_error("resultant: zero polynomial");
    auto fa = as_gaussian_coeffs(f);
    auto ga = as_gaussian_coeffs(g);
    if (!fa || !ga) return std::nullopt;
    const int m = f.degree(), n = g.degree();
    std::vector<std::vector<GaussInt>> s(m + n, std::vector<GaussInt>(m + n));
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s[r][r + k] = (*fa)[m - k];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s[n + r][r + k] = (*ga)[n - k];
    return bareiss_det(std::move(s));
}

/// Determinant of the Sylvester matrix. Takes the exact fraction-free path
/// when both polynomials have Gaussian-integer coefficients, LU otherwise.
inline cplx resultant(const UniPoly& f, const UniPoly& g) {
    if (auto ex = resultant_exact(f, g)) return ex->to_cplx();
    Eigen::MatrixXcd s = sylvester(f, g);
    if (s.rows() == 0) return 1.0;
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(s).determinant();
}

/// Exact discriminant through Res(f, f') = (-1)^{m(m-1)/2} a0 Disc(f).
inline std::optional<GaussInt> discriminant_exact(const UniPoly& f) {
    if (f.degree() < 1) throw domain_error("discriminant: constant polynomial");
    if (f.degree() == 1) {
        if (!as_gaussian_coeffs(f)) return std::nullopt;
        return GaussInt(1);
    }
    auto fa = as_gaussian_coeffs(f);
    if (!fa) return std::nullopt;
    auto r = resultant_exact(f, f.derivative());
    if (!r) return std::nullopt;
    GaussInt num = *r;
    if ((static_cast<long long>(f.degree()) * (f.degree() - 1) / 2) % 2 != 0) num = -num;
    return num.div_exact(fa->back());
}

inline cplx discriminant(const UniPoly& f) {
    if (f.degree() < 1) throw domain_error("discriminant: constant polynomial");
    if (auto ex = discriminant_exact(f)) return ex->to_cplx();
    const int m = f.degree();
    cplx r = resultant(f, f.derivative());
    double sign = ((static_cast<long long>(m) * (m - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    return sign * r / f.lead();
}

} // namespace rsurf

#endif // RSURF_RESULTANT_HPP
