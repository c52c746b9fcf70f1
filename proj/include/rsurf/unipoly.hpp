#ifndef RSURF_UNIPOLY_HPP
#define RSURF_UNIPOLY_HPP

#include <functional>
#include <algorithm>
#include <numeric>

#include "rsurf/common.hpp"

namespace rsurf {

/**
 * Dense univariate polynomial over the complex numbers, coefficients stored
 * by ascending power. The zero polynomial has an empty coefficient vector
 * and degree -1; otherwise the leading coefficient is nonzero.
 */
class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }
    static UniPoly constant(cplx a) { return UniPoly({a}); }
    static UniPoly monomial(int k, cplx a = 1.0) {
        std::vector<cplx> c(static_cast<size_t>(k) + 1, 0.0);
        c.back() = a;
        return UniPoly(std::move(c));
    }
    static UniPoly from_roots(const std::vector<cplx>& roots, cplx lead = 1.0) {
        UniPoly p = constant(lead);
        for (cplx r : roots) p = p * UniPoly({-r, 1.0});
        return p;
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<cplx>& coeffs() const { return c_; }
    cplx coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : cplx(0.0);
    }
    cplx lead() const { return c_.empty() ? cplx(0.0) : c_.back(); }

    cplx eval(cplx z) const {
        cplx acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
        return acc;
    }
    /// Sum of |a_k| |z|^k, the natural residual scale at z.
    double scale_at(cplx z) const {
        double az = std::abs(z), acc = 0.0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * az + std::abs(*it);
        return acc;
    }

    UniPoly derivative() const {
        if (c_.size() <= 1) return UniPoly();
        std::vector<cplx> d(c_.size() - 1);
        for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * double(k);
        return UniPoly(std::move(d));
    }

    UniPoly operator*(const UniPoly& o) const {
        if (is_zero() || o.is_zero()) return UniPoly();
        std::vector<cplx> r(c_.size() + o.c_.size() - 1, 0.0);
        for (size_t i = 0; i < c_.size(); ++i)
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return UniPoly(std::move(r));
    }
    UniPoly operator+(const UniPoly& o) const {
        std::vector<cplx> r(std::max(c_.size(), o.c_.size()), 0.0);
        for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
        return UniPoly(std::move(r));
    }
    UniPoly operator-(const UniPoly& o) const { return *this + (o * constant(-1.0)); }
    UniPoly operator*(cplx s) const {
        std::vector<cplx> r = c_;
        for (auto& a : r) a *= s;
        return UniPoly(std::move(r));
    }

    /// Quotient by the linear factor (z - root); the remainder is discarded.
    UniPoly deflate(cplx root) const {
        if (degree() < 1) return UniPoly();
        std::vector<cplx> q(c_.size() - 1);
        cplx acc = c_.back();
        for (int k = degree() - 1; k >= 0; --k) {
            q[k] = acc;
            acc = c_[k] + acc * root;
        }
        return UniPoly(std::move(q));
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == cplx(0.0)) c_.pop_back();
    }
    std::vector<cplx> c_;
};

/// A group of numerically coincident roots with its combined multiplicity.
struct RootCluster {
    cplx center;
    int multiplicity = 1;
    double radius = 0.0; // spread of merged approximations
};

struct RootOptions {
    double merge_tol = 1e-6;    // cluster distance, scaled by max(1, |center|)
    double residual_tol = 1e-10;
    int max_iter = 400;
};

namespace detail {

// Fujiwara upper bound on root moduli of a monic polynomial.
inline double root_radius_bound(const std::vector<cplx>& monic) {
    const int n = static_cast<int>(monic.size()) - 1;
    double r = 0.0;
    for (int k = 1; k <= n; ++k) {
        double m = std::abs(monic[n - k]);
        if (k == n) m *= 0.5;
        if (m > 0) r = std::max(r, std::pow(m, 1.0 / k));
    }
    return 2.0 * std::max(r, 1e-12);
}

} // namespace detail

/**
 * All complex roots of `p` by Ehrlich–Aberth simultaneous iteration,
 * merged into clusters so that multiplicities sum to deg p.
 */
inline std::vector<RootCluster> roots(const UniPoly& p, const RootOptions& opt = {}) {
    if (p.is_zero()) throw domain_error("roots: zero polynomial");
    if (p.degree() == 0) return {};

    // exact zero roots split off so the iteration sees a nonzero constant term
    std::vector<cplx> c = p.coeffs();
    int zero_mult = 0;
    while (c.size() > 1 && c.front() == cplx(0.0)) {
        c.erase(c.begin());
        ++zero_mult;
    }

    const int n = static_cast<int>(c.size()) - 1;
    std::vector<cplx> z;
    if (n > 0) {
        std::vector<cplx> monic(c.size());
        for (size_t k = 0; k < c.size(); ++k) monic[k] = c[k] / c.back();
        UniPoly q{std::vector<cplx>(monic)};
        UniPoly dq = q.derivative();

        const double R = detail::root_radius_bound(monic);
        z.resize(n);
        for (int i = 0; i < n; ++i) {
            double theta = 2.0 * pi * i / n + 0.41;
            double r = R * (0.6 + 0.25 * i / std::max(1, n));
            z[i] = std::polar(r, theta);
        }

        std::vector<bool> done(n, false);
        int it = 0;
        for (; it < opt.max_iter; ++it) {
            bool all_done = true;
            for (int i = 0; i < n; ++i) {
                if (done[i]) continue;
                cplx pv = q.eval(z[i]);
                if (std::abs(pv) <= opt.residual_tol * (q.scale_at(z[i]) + 1e-300)) {
                    done[i] = true;
                    continue;
                }
                all_done = false;
                cplx dv = dq.eval(z[i]);
                if (dv == cplx(0.0)) { // sit exactly on a critical point: nudge
                    z[i] += 1e-8 * (std::abs(z[i]) + 1.0);
                    continue;
                }
                cplx newton = pv / dv;
                cplx s = 0.0;
                for (int j = 0; j < n; ++j)
                    if (j != i) s += 1.0 / (z[i] - z[j]);
                cplx denom = 1.0 - newton * s;
                cplx step = (std::abs(denom) < 1e-14) ? newton : newton / denom;
                z[i] -= step;
            }
            if (all_done) break;
        }
        if (it == opt.max_iter) {
            double worst = 0.0;
            for (int i = 0; i < n; ++i)
                worst = std::max(worst, std::abs(q.eval(z[i])) / (q.scale_at(z[i]) + 1e-300));
            // multiple roots converge slowly; accept if the residual is still
            // consistent with a cluster of this size, otherwise give up
            if (worst > std::sqrt(opt.residual_tol))
                throw numeric_error("roots: Ehrlich-Aberth failed to converge", worst);
        }
    }
    for (int k = 0; k < zero_mult; ++k) z.push_back(0.0);

    // Polish each approximation by damped Newton. Near a multiplicity-k root
    // this stalls on a noise plateau of radius about eps^(1/k), which is the
    // best plain double evaluation can resolve.
    {
        UniPoly dp = p.derivative();
        for (auto& c : z) {
            double best = std::abs(p.eval(c));
            for (int it = 0; it < 100; ++it) {
                cplx dv = dp.eval(c);
                if (dv == cplx(0.0)) break;
                cplx step = p.eval(c) / dv;
                cplx cand = c - step;
                double v = std::abs(p.eval(cand));
                int halvings = 0;
                while (v > best && halvings++ < 20) {
                    step *= 0.5;
                    cand = c - step;
                    v = std::abs(p.eval(cand));
                }
                if (v > best) break;
                c = cand;
                best = v;
                if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(c))) break;
            }
        }
    }

    // Recursive certified clustering. Plain double evaluation resolves a
    // multiplicity-k root only to about eps^(1/k), so a candidate group of
    // size k is accepted when its points sit inside that resolution limit
    // AND the recentered point (a simple root of p^(k-1)) carries the
    // derivative ladder of a k-fold root: p^(j) negligible for j < k against
    // a clearly nonzero p^(k). Groups failing the certificate are split.
    std::vector<UniPoly> derivs = {p};
    for (int k = 0; k < p.degree(); ++k) derivs.push_back(derivs.back().derivative());

    std::vector<RootCluster> out;
    auto finish = [&](const std::vector<cplx>& pts, cplx center) {
        RootCluster cl;
        cl.center = center;
        cl.multiplicity = static_cast<int>(pts.size());
        cl.radius = 0.0;
        for (cplx v : pts) cl.radius = std::max(cl.radius, std::abs(v - center));
        out.push_back(cl);
    };

    std::function<void(std::vector<cplx>)> cluster_rec = [&](std::vector<cplx> pts) {
        const int k = static_cast<int>(pts.size());
        cplx mean = 0.0;
        for (cplx v : pts) mean += v;
        mean /= double(k);
        if (k == 1) {
            finish(pts, mean);
            return;
        }
        const double scale = std::max(1.0, std::abs(mean));
        const double limit =
            std::max(opt.merge_tol,
                     std::min(0.02, 80.0 * std::pow(1e-13, 1.0 / k))) * scale;
        double diameter = 0.0;
        for (cplx v : pts) diameter = std::max(diameter, std::abs(v - mean));

        if (diameter <= limit) {
            // recenter on the simple root of p^(k-1)
            cplx c = mean;
            const UniPoly& d = derivs[k - 1];
            const UniPoly& dd = derivs[k];
            for (int it = 0; it < 60; ++it) {
                cplx dv = dd.eval(c);
                if (dv == cplx(0.0)) break;
                cplx step = d.eval(c) / dv;
                c -= step;
                if (std::abs(step) < 1e-15 * scale) break;
            }
            bool ok = std::abs(c - mean) <= 2.0 * limit;
            cplx dk = derivs[k].eval(c);
            ok = ok && std::abs(dk) > 1e-8 * (derivs[k].scale_at(c) + 1e-300);
            if (ok) {
                double binom = 1.0;
                for (int j = k - 1; j >= 0 && ok; --j) {
                    binom = binom * (j + 1) / (k - j); // C(k, j)
                    double bound =
                        8.0 * binom * std::pow(4.0 * limit, k - j) * std::abs(dk);
                    if (std::abs(derivs[j].eval(c)) > bound) ok = false;
                }
            }
            if (ok) {
                finish(pts, c);
                return;
            }
            if (diameter <= opt.merge_tol * scale) {
                finish(pts, mean); // numerically coincident; keep as one
                return;
            }
        }
        // split at a fraction of the diameter (or the requested merge
        // radius, whichever is larger) and recurse
        double cut = std::max(opt.merge_tol * scale, diameter / 3.0);
        std::vector<int> parent(k);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int a) {
            while (parent[a] != a) a = parent[a] = parent[parent[a]];
            return a;
        };
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (std::abs(pts[i] - pts[j]) < cut) parent[find(i)] = find(j);
        std::vector<std::vector<cplx>> groups(k);
        for (int i = 0; i < k; ++i) groups[find(i)].push_back(pts[i]);
        int nonempty = 0;
        for (const auto& g : groups)
            if (!g.empty()) ++nonempty;
        if (nonempty <= 1) {
            finish(pts, mean); // cannot be separated further
            return;
        }
        for (auto& g : groups)
            if (!g.empty()) cluster_rec(std::move(g));
    };
    cluster_rec(z);

    std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
        return a.center.imag() < b.center.imag();
    });
    return out;
}

inline std::vector<RootCluster> roots(const UniPoly& p, double merge_tol) {
    RootOptions opt;
    opt.merge_tol = merge_tol;
    return roots(p, opt);
}

/// Roots repeated per multiplicity, as plain values.
inline std::vector<cplx> root_values(const UniPoly& p, const RootOptions& opt = {}) {
    std::vector<cplx> v;
    for (const auto& cl : roots(p, opt))
        for (int k = 0; k < cl.multiplicity; ++k) v.push_back(cl.center);
    return v;
}

} // namespace rsurf

#endif // RSURF_UNIPOLY_HPP
