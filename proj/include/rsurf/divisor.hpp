#ifndef RSURF_DIVISOR_HPP
#define RSURF_DIVISOR_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "rsurf/local.hpp"
#include "rsurf/topology.hpp"

namespace rsurf {

/// Finite formal sum of curve points with integer coefficients.
class Divisor {
  public:
    Divisor() = default;

    void add(const CurvePoint& pt, int n) {
        if (n == 0) return;
        for (auto& [q, m] : terms_) {
            if (same_point(q, pt)) {
                m += n;
                compact();
                return;
            }
        }
        terms_.emplace_back(pt, n);
    }

    const std::vector<std::pair<CurvePoint, int>>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& [q, n] : terms_) d += n;
        return d;
    }
    bool is_positive() const {
        for (const auto& [q, n] : terms_)
            if (n < 0) return false;
        return true;
    }

    Divisor operator+(const Divisor& o) const {
        Divisor r = *this;
        for (const auto& [q, n] : o.terms_) r.add(q, n);
        return r;
    }
    Divisor operator-() const {
        Divisor r = *this;
        for (auto& [q, n] : r.terms_) n = -n;
        return r;
    }
    Divisor operator-(const Divisor& o) const { return *this + (-o); }

  private:
    void compact() {
        std::erase_if(terms_, [](const auto& t) { return t.second == 0; });
    }
    std::vector<std::pair<CurvePoint, int>> terms_;
};

inline int degree(const Divisor& d) { return d.degree(); }

/// Euler characteristic chi(D) = deg D - g + 1.
inline int chi(const Divisor& d, int g) { return d.degree() - g + 1; }
inline int chi(int deg_d, int g) { return deg_d - g + 1; }

/// deg K = 2g - 2.
inline int canonical_degree(int g) {
    if (g < 0) throw domain_error("canonical_degree: negative genus");
    return 2 * g - 2;
}

/// Genus of a hyperelliptic curve read off the defining polynomial.
inline int curve_genus(const Curve& c) {
    return hyperelliptic_genus(c.hyper_p().degree());
}

struct Rational {
    UniPoly num;
    UniPoly den = UniPoly::constant(1.0);
    cplx eval(cplx z) const { return num.eval(z) / den.eval(z); }
    bool is_zero() const { return num.is_zero(); }
};

/// Function R(z) + S(z) w on a hyperelliptic curve, R and S rational in z.
struct CurveFunction {
    Rational R, S;
    cplx eval(cplx z, cplx w) const {
        cplx v = 0.0;
        if (!R.is_zero()) v += R.eval(z);
        if (!S.is_zero()) v += S.eval(z) * w;
        return v;
    }
    bool is_zero() const { return R.is_zero() && S.is_zero(); }
};

namespace detail {

inline UniPoly square(const UniPoly& u) { return u * u; }

// distance from z to the nearest entry of pts, skipping those within skip_tol
inline double dist_excluding(cplx z, const std::vector<cplx>& pts, double skip_tol) {
    double d = 1e300;
    for (cplx q : pts) {
        double dd = std::abs(z - q);
        if (dd > skip_tol) d = std::min(d, dd);
    }
    return d;
}

// both infinity points of the chart-at-infinity (one when deg p is odd)
inline std::vector<CurvePoint> infinity_points(const Curve& c) {
    if (c.hyper_p().degree() % 2 == 1) return {CurvePoint::infinity(0)};
    return {CurvePoint::infinity(0), CurvePoint::infinity(1)};
}

} // namespace detail

/// Order of the differential R(z,w) dz at a point (argument principle in the
/// local chart).
inline int differential_order(const Curve& c, const CurvePoint& pt,
                              const std::function<cplx(cplx, cplx)>& density,
                              double chart_radius) {
    HyperChart ch = HyperChart::at_point(c, pt);
    return chart_order(ch, chart_radius,
                       [&](const HyperChart::Sample& s) { return density(s.z, s.w) * s.dzdt; });
}

/**
 * Divisor of zeros and poles of f = R(z) + S(z) w on a hyperelliptic curve.
 * Candidate locations come from the norm (R^2 - S^2 p) and the denominators;
 * the order at each candidate point is the winding number of f around a
 * small chart circle, so sheets, branch points and infinity are handled
 * uniformly. The result must have degree zero.
 */
inline Divisor principal_divisor(const Curve& c, const CurveFunction& f) {
    if (!c.is_hyperelliptic())
        throw domain_error("principal_divisor: hyperelliptic curves only");
    if (f.is_zero()) throw domain_error("principal_divisor: f is identically zero");
    const UniPoly& p = c.hyper_p();

    const UniPoly rn = f.R.num, rd = f.R.den, sn = f.S.num, sd = f.S.den;
    UniPoly norm_num = detail::square(rn) * detail::square(sd) -
                       detail::square(sn) * detail::square(rd) * p;
    if (norm_num.is_zero())
        throw internal_error("principal_divisor: norm vanished identically");

    std::vector<cplx> branch;
    for (const auto& b : c.finite_branch_points()) branch.push_back(b.z);

    // candidate z-locations: zeros of the norm and of the denominators
    std::vector<cplx> cand;
    auto push_roots = [&cand](const UniPoly& u) {
        if (u.degree() >= 1)
            for (const auto& cl : roots(u)) cand.push_back(cl.center);
    };
    push_roots(norm_num);
    push_roots(rd);
    push_roots(sd);
    std::vector<cplx> uniq;
    for (cplx z : cand) {
        bool dup = false;
        for (cplx q : uniq)
            if (std::abs(z - q) < 1e-7 * std::max(1.0, std::abs(z))) dup = true;
        if (!dup) uniq.push_back(z);
    }

    double rmax = 1.0;
    for (cplx q : uniq) rmax = std::max(rmax, std::abs(q));
    for (cplx b : branch) rmax = std::max(rmax, std::abs(b));

    auto feval = [&](const HyperChart::Sample& s) { return f.eval(s.z, s.w); };

    Divisor div;
    for (cplx z0 : uniq) {
        double skip = 1e-6 * std::max(1.0, std::abs(z0));
        double r = 0.3 * std::min(detail::dist_excluding(z0, uniq, skip),
                                  detail::dist_excluding(z0, branch, skip));
        r = std::min(r, 0.5 * std::max(1.0, std::abs(z0)));
        bool at_branch = detail::dist_excluding(z0, branch, -1.0) < skip;
        if (at_branch) {
            // snap to the stored branch point
            cplx e = z0;
            for (cplx b : branch)
                if (std::abs(b - z0) < skip) e = b;
            HyperChart ch = HyperChart::branch(c, e);
            int ord = chart_order(ch, std::sqrt(r), feval);
            div.add(CurvePoint::branch(e), ord);
        } else {
            cplx wplus = std::sqrt(p.eval(z0));
            Fiber fib = {wplus, -wplus};
            std::sort(fib.begin(), fib.end(), [](cplx a, cplx b) {
                if (a.real() != b.real()) return a.real() < b.real();
                return a.imag() < b.imag();
            });
            for (int sheet = 0; sheet < 2; ++sheet) {
                HyperChart ch = HyperChart::regular(c, z0, fib[sheet]);
                int ord = chart_order(ch, r, feval);
                div.add(CurvePoint::regular(z0, sheet + 1, fib[sheet]), ord);
            }
        }
    }
    for (const CurvePoint& ip : detail::infinity_points(c)) {
        HyperChart ch = HyperChart::infinity(c, ip.inf_index);
        double t_r = (c.hyper_p().degree() % 2 == 1) ? 1.0 / std::sqrt(8.0 * rmax)
                                                     : 1.0 / (8.0 * rmax);
        int ord = chart_order(ch, t_r, feval);
        div.add(ip, ord);
    }

    if (div.degree() != 0)
        throw numeric_error("principal_divisor: total degree is not zero",
                            std::abs(div.degree()));
    return div;
}

/**
 * Matrix of leading Taylor coefficients of the holomorphic basis at the
 * points of a positive divisor: row s is the differential z^(s-1) dz / w,
 * and a point with coefficient n contributes its first n columns.
 */
inline Eigen::MatrixXcd taylor_table(const Curve& c, const Divisor& D) {
    if (!c.is_hyperelliptic())
        throw domain_error("taylor_table: hyperelliptic curves only");
    if (!D.is_positive()) throw domain_error("taylor_table: divisor must be positive");
    const int g = curve_genus(c);
    const UniPoly& p = c.hyper_p();

    std::vector<cplx> branch;
    for (const auto& b : c.finite_branch_points()) branch.push_back(b.z);
    double rmax = 1.0;
    for (cplx b : branch) rmax = std::max(rmax, std::abs(b));

    // Columns hold ring Fourier coefficients c_j r^j scaled by the largest
    // density magnitude at the point. Column scaling leaves the rank alone,
    // and this way an exactly-vanishing coefficient stays at machine epsilon
    // instead of being inflated by a later normalization.
    Eigen::MatrixXcd table(g, D.degree());
    int col = 0;
    for (const auto& [pt, n] : D.terms()) {
        HyperChart ch = HyperChart::at_point(c, pt);
        double r;
        switch (pt.kind) {
            case PointKind::regular:
                r = 0.25 * detail::dist_excluding(pt.z, branch, -1.0);
                rmax = std::max(rmax, std::abs(pt.z));
                break;
            case PointKind::branch:
                r = std::sqrt(0.25 * detail::dist_excluding(
                                          pt.z, branch, 1e-6 * std::max(1.0, std::abs(pt.z))));
                break;
            default:
                r = (p.degree() % 2 == 1) ? 1.0 / std::sqrt(8.0 * rmax) : 1.0 / (8.0 * rmax);
        }
        auto rg = ch.ring(r, 64);
        Eigen::MatrixXcd block(g, n);
        double fmax = 0.0;
        for (int s = 0; s < g; ++s) {
            std::vector<cplx> dens(rg.size());
            for (size_t i = 0; i < rg.size(); ++i) {
                dens[i] = std::pow(rg[i].z, s) * rg[i].dzdt / rg[i].w;
                fmax = std::max(fmax, std::abs(dens[i]));
            }
            auto coef = taylor_from_ring(dens, r, n);
            for (int j = 0; j < n; ++j) block(s, j) = coef[j] * std::pow(r, j);
        }
        if (fmax > 0) block /= fmax;
        table.block(0, col, g, n) = block;
        col += n;
    }
    return table;
}

/// dim I(-D) = g - rank of the Taylor table, for positive D.
inline int dim_I_minus(const Curve& c, const Divisor& D) {
    const int g = curve_genus(c);
    if (D.empty()) return g;
    Eigen::MatrixXcd table = taylor_table(c, D);
    if (table.rows() == 0 || table.cols() == 0) return g;
    // columns are pre-conditioned to the density scale of their point;
    // normalize only those carrying genuine content
    double gmax = table.cwiseAbs().maxCoeff();
    if (gmax == 0.0) return g;
    for (int j = 0; j < table.cols(); ++j) {
        double m = table.col(j).cwiseAbs().maxCoeff();
        if (m > 1e-10 * gmax) table.col(j) /= m;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(table);
    double top = svd.singularValues()(0);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-8 * top) ++rank;
    return g - rank;
}

/// dim L(D) for positive (or zero) D by the rank route.
inline int dim_L(const Curve& c, const Divisor& D) {
    if (!D.is_positive())
        throw domain_error("dim_L: divisor must be positive (or shifted first)");
    const int g = curve_genus(c);
    return dim_I_minus(c, D) + D.degree() - g + 1;
}

/// dim L(D) for D linearly equivalent to a positive divisor via the
/// caller-supplied shifting function: D' = D + (f) must be positive.
inline int dim_L(const Curve& c, const Divisor& D, const CurveFunction& shift) {
    Divisor shifted = D + principal_divisor(c, shift);
    if (!shifted.is_positive())
        throw domain_error("dim_L: shift did not make the divisor positive");
    return dim_L(c, shifted);
}

/**
 * Points where the Wronskian of the holomorphic basis vanishes. The
 * determinant is evaluated in the local parameter from Taylor coefficients;
 * a coarse grid plus refinement scans for zeros away from the special
 * points, and branch points and infinity are tested in their own charts.
 */
inline std::vector<CurvePoint> weierstrass_points(const Curve& c) {
    const int g = curve_genus(c);
    if (g < 2) throw domain_error("weierstrass_points: genus must be at least 2");
    const UniPoly& p = c.hyper_p();

    std::vector<cplx> branch;
    for (const auto& b : c.finite_branch_points()) branch.push_back(b.z);
    double rmax = 1.0;
    for (cplx b : branch) rmax = std::max(rmax, std::abs(b));

    auto wronskian_mag = [&](const HyperChart& ch, double r) {
        // scaled derivative matrix: entries c_{s,k} r^k relative to the
        // density magnitude, so a vanishing row stays near machine epsilon
        auto rg = ch.ring(r, 64);
        Eigen::MatrixXcd m(g, g);
        double fmax = 0.0;
        for (int s = 0; s < g; ++s) {
            std::vector<cplx> dens(rg.size());
            for (size_t i = 0; i < rg.size(); ++i) {
                dens[i] = std::pow(rg[i].z, s) * rg[i].dzdt / rg[i].w;
                fmax = std::max(fmax, std::abs(dens[i]));
            }
            auto coef = taylor_from_ring(dens, r, g);
            for (int k = 0; k < g; ++k) m(s, k) = coef[k] * std::pow(r, k);
        }
        if (fmax > 0) m /= fmax;
        return std::abs(Eigen::PartialPivLU<Eigen::MatrixXcd>(m).determinant());
    };

    std::vector<CurvePoint> found;

    // grid scan for vanishing away from the special points (none exist for
    // the hyperelliptic basis, but the search is the defining computation)
    double lo_re = 1e300, hi_re = -1e300, lo_im = 1e300, hi_im = -1e300;
    for (cplx b : branch) {
        lo_re = std::min(lo_re, b.real());
        hi_re = std::max(hi_re, b.real());
        lo_im = std::min(lo_im, b.imag());
        hi_im = std::max(hi_im, b.imag());
    }
    double pad = 0.5 + 0.25 * (hi_re - lo_re + hi_im - lo_im);
    const int N = 13;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            cplx z(lo_re - pad + (hi_re - lo_re + 2 * pad) * i / (N - 1.0),
                   lo_im - pad + (hi_im - lo_im + 2 * pad) * j / (N - 1.0));
            double d = detail::dist_excluding(z, branch, -1.0);
            if (d < 4.0 * c.margin()) continue;
            cplx w0 = std::sqrt(p.eval(z));
            double val = wronskian_mag(HyperChart::regular(c, z, w0), 0.2 * d);
            if (val < 1e-6) {
                // refine by shrinking grid descent
                cplx best = z;
                double radius = (hi_re - lo_re + 2 * pad) / (N - 1.0);
                for (int lev = 0; lev < 4; ++lev) {
                    double bv = 1e300;
                    cplx bz = best;
                    for (int a = -2; a <= 2; ++a)
                        for (int b2 = -2; b2 <= 2; ++b2) {
                            cplx cand = best + cplx(a * radius / 2, b2 * radius / 2);
                            double dd = detail::dist_excluding(cand, branch, -1.0);
                            if (dd < 2.0 * c.margin()) continue;
                            double v = wronskian_mag(
                                HyperChart::regular(c, cand, std::sqrt(p.eval(cand))),
                                0.2 * dd);
                            if (v < bv) {
                                bv = v;
                                bz = cand;
                            }
                        }
                    best = bz;
                    radius /= 2;
                }
                bool dup = false;
                for (const auto& q : found)
                    if (q.kind == PointKind::regular &&
                        std::abs(q.z - best) < 1e-4 * std::max(1.0, std::abs(best)))
                        dup = true;
                if (!dup)
                    found.push_back(CurvePoint::regular(best, 1, std::sqrt(p.eval(best))));
            }
        }

    for (cplx e : branch) {
        double r = std::sqrt(
            0.25 * detail::dist_excluding(e, branch, 1e-6 * std::max(1.0, std::abs(e))));
        if (wronskian_mag(HyperChart::branch(c, e), r) < 1e-6)
            found.push_back(CurvePoint::branch(e));
    }
    for (const CurvePoint& ip : detail::infinity_points(c)) {
        double r = (p.degree() % 2 == 1) ? 1.0 / std::sqrt(8.0 * rmax) : 1.0 / (8.0 * rmax);
        if (wronskian_mag(HyperChart::infinity(c, ip.inf_index), r) < 1e-6)
            found.push_back(ip);
    }
    return found;
}

} // namespace rsurf

#endif // RSURF_DIVISOR_HPP
