#ifndef RSURF_BIPOLY_HPP
#define RSURF_BIPOLY_HPP

#include "rsurf/resultant.hpp"
#include "rsurf/unipoly.hpp"

namespace rsurf {

/**
 * Polynomial F(w,z) = sum_j q_j(z) w^j, stored by ascending w-power.
 * In the classical notation F = p_0(z) w^n + ... + p_n(z), the leading
 * coefficient p_0 is q_n and must be nonzero.
 */
class BivariatePoly {
  public:
    BivariatePoly() = default;
    explicit BivariatePoly(std::vector<UniPoly> wc) : wc_(std::move(wc)) {
        while (!wc_.empty() && wc_.back().is_zero()) wc_.pop_back();
        if (wc_.size() < 2)
            throw domain_error("BivariatePoly: degree in w must be at least 1");
    }

    /// Build from (z-power, w-power, coefficient) monomials.
    static BivariatePoly from_monomials(
        const std::vector<std::tuple<int, int, cplx>>& monomials) {
        int max_w = 0;
        for (const auto& [i, j, a] : monomials) {
            if (i < 0 || j < 0) throw domain_error("BivariatePoly: negative exponent");
            max_w = std::max(max_w, j);
        }
        std::vector<std::vector<cplx>> acc(max_w + 1);
        for (const auto& [i, j, a] : monomials) {
            auto& row = acc[j];
            if (static_cast<int>(row.size()) <= i) row.resize(i + 1, 0.0);
            row[i] += a;
        }
        std::vector<UniPoly> wc;
        wc.reserve(acc.size());
        for (auto& row : acc) wc.emplace_back(std::move(row));
        return BivariatePoly(std::move(wc));
    }

    int deg_w() const { return static_cast<int>(wc_.size()) - 1; }
    int deg_z() const {
        int d = 0;
        for (const auto& q : wc_) d = std::max(d, q.degree());
        return d;
    }
    const UniPoly& w_coeff(int j) const { return wc_[j]; }
    /// p_k of the classical display, the coefficient of w^(n-k).
    const UniPoly& p(int k) const { return wc_[deg_w() - k]; }

    cplx eval(cplx w, cplx z) const {
        cplx acc = 0.0;
        for (auto it = wc_.rbegin(); it != wc_.rend(); ++it) acc = acc * w + it->eval(z);
        return acc;
    }
    double scale_at(cplx w, cplx z) const {
        double aw = std::abs(w), acc = 0.0;
        for (auto it = wc_.rbegin(); it != wc_.rend(); ++it) acc = acc * aw + it->scale_at(z);
        return acc;
    }

    cplx eval_dw(cplx w, cplx z) const {
        cplx acc = 0.0;
        for (int j = deg_w(); j >= 1; --j) acc = acc * w + wc_[j].eval(z) * double(j);
        return acc;
    }
    cplx eval_dz(cplx w, cplx z) const {
        cplx acc = 0.0;
        for (auto it = wc_.rbegin(); it != wc_.rend(); ++it)
            acc = acc * w + it->derivative().eval(z);
        return acc;
    }

    /// F(., z) as a polynomial in w with the full nominal coefficient list.
    std::vector<cplx> fiber_coeffs(cplx z) const {
        std::vector<cplx> c(wc_.size());
        for (size_t j = 0; j < wc_.size(); ++j) c[j] = wc_[j].eval(z);
        return c;
    }

  private:
    std::vector<UniPoly> wc_;
};

/**
 * Res_w(F, dF/dw) as a polynomial in z, the locus where the fiber over z is
 * degenerate. Computed by evaluating the nominal-degree Sylvester
 * determinant at scaled roots of unity and interpolating, so
 * leading-coefficient drop at sample points is harmless.
 */
inline UniPoly discriminant_locus_poly(const BivariatePoly& F) {
    const int n = F.deg_w();
    const int dz = F.deg_z();
    if (n == 1) return UniPoly::constant(1.0); // single sheet, no collisions
    const int bound = (2 * n - 1) * dz;
    const int K = bound + 1;
    const double rho = 1.37;

    std::vector<cplx> vals(K);
    for (int t = 0; t < K; ++t) {
        cplx zt = std::polar(rho, 2.0 * pi * t / K);
        std::vector<cplx> a(n + 1), b(n);
        for (int k = 0; k <= n; ++k) a[k] = F.w_coeff(n - k).eval(zt);
        for (int k = 0; k <= n - 1; ++k)
            b[k] = F.w_coeff(n - k).eval(zt) * double(n - k);
        Eigen::MatrixXcd s = sylvester_nominal(a, b);
        vals[t] = Eigen::PartialPivLU<Eigen::MatrixXcd>(s).determinant();
    }
    std::vector<cplx> coeffs(K, 0.0);
    double vmax = 0.0;
    for (int k = 0; k < K; ++k) {
        cplx acc = 0.0;
        for (int t = 0; t < K; ++t)
            acc += vals[t] * std::polar(1.0, -2.0 * pi * k * t / K);
        coeffs[k] = acc / (double(K) * std::pow(rho, k));
        vmax = std::max(vmax, std::abs(coeffs[k]));
    }
    // strip numerically-zero leading coefficients so spurious huge roots
    // cannot appear downstream
    int deg = K - 1;
    while (deg >= 0 && std::abs(coeffs[deg]) < 1e-10 * vmax) --deg;
    coeffs.resize(deg + 1);
    if (vmax == 0.0) return UniPoly();
    return UniPoly(std::move(coeffs));
}

} // namespace rsurf

#endif // RSURF_BIPOLY_HPP
