#ifndef RSURF_LOCAL_HPP
#define RSURF_LOCAL_HPP

#include <functional>

#include "rsurf/curve.hpp"

namespace rsurf {

/**
 * Local parameter charts on a hyperelliptic curve w^2 = p(z), with t = 0 at
 * the charted point:
 *
 *   regular point   t = z - z0,      w = sheet value continued from w0
 *   branch point e  t = sqrt(z - e), z = e + t^2, w = t sqrt(q(t^2))
 *   infinity, odd   t = 1/sqrt(z),   z = 1/t^2,   w = sqrt(u(t)) / t^d
 *   infinity, even  t = 1/z,         z = 1/t,     w = sqrt(v(t)) / t^(g+1)
 *
 * where q, u, v are polynomials without zeros near t = 0. Square-root
 * branches are continued sequentially around sampled rings; the overall sign
 * of a branch or infinity chart can be flipped to match a tracked sheet.
 */
class HyperChart {
  public:
    enum class Kind { regular, branch, infinity_odd, infinity_even };

    struct Sample {
        cplx t, z, w, dzdt;
    };

    static HyperChart at_point(const Curve& c, const CurvePoint& pt) {
        switch (pt.kind) {
            case PointKind::regular:
                return regular(c, pt.z, pt.w);
            case PointKind::branch:
                return branch(c, pt.z);
            case PointKind::infinity_pt:
                return infinity(c, pt.inf_index);
        }
        throw internal_error("HyperChart: unknown point kind");
    }

    static HyperChart regular(const Curve& c, cplx z0, cplx w0) {
        HyperChart ch;
        ch.kind_ = Kind::regular;
        ch.p_ = c.hyper_p();
        ch.z0_ = z0;
        ch.w0_ = w0;
        double res = std::abs(w0 * w0 - ch.p_.eval(z0));
        if (res > 1e-5 * (ch.p_.scale_at(z0) + std::norm(w0) + 1.0))
            throw domain_error("HyperChart: (z0, w0) does not lie on the curve");
        return ch;
    }

    static HyperChart branch(const Curve& c, cplx e) {
        HyperChart ch;
        ch.kind_ = Kind::branch;
        ch.p_ = c.hyper_p();
        ch.z0_ = e;
        ch.q_ = ch.p_.deflate(e); // p(z)/(z - e), exact to root accuracy
        return ch;
    }

    static HyperChart infinity(const Curve& c, int index) {
        HyperChart ch;
        ch.p_ = c.hyper_p();
        const int d = ch.p_.degree();
        ch.kind_ = (d % 2 == 1) ? Kind::infinity_odd : Kind::infinity_even;
        if (ch.kind_ == Kind::infinity_odd && index != 0)
            throw domain_error("HyperChart: odd-degree curve has one point at infinity");
        if (ch.kind_ == Kind::infinity_even && index != 0 && index != 1)
            throw domain_error("HyperChart: infinity index must be 0 or 1");
        ch.sign_ = (index == 1) ? -1.0 : 1.0;
        // u(t) = p(1/t^2) t^(2d) resp. v(t) = p(1/t) t^d, both polynomials
        std::vector<cplx> rev(ch.p_.coeffs().rbegin(), ch.p_.coeffs().rend());
        if (ch.kind_ == Kind::infinity_odd) {
            std::vector<cplx> u(2 * d + 1, 0.0);
            for (int j = 0; j <= d; ++j) u[2 * j] = rev[j];
            ch.q_ = UniPoly(std::move(u));
        } else {
            ch.q_ = UniPoly(std::move(rev));
        }
        return ch;
    }

    Kind kind() const { return kind_; }

    cplx z_of(cplx t) const {
        switch (kind_) {
            case Kind::regular: return z0_ + t;
            case Kind::branch: return z0_ + t * t;
            case Kind::infinity_odd: return 1.0 / (t * t);
            case Kind::infinity_even: return 1.0 / t;
        }
        return 0.0;
    }
    cplx dzdt_of(cplx t) const {
        switch (kind_) {
            case Kind::regular: return 1.0;
            case Kind::branch: return 2.0 * t;
            case Kind::infinity_odd: return -2.0 / (t * t * t);
            case Kind::infinity_even: return -1.0 / (t * t);
        }
        return 0.0;
    }

    /// M samples on |t| = r with the square-root branch continued around the
    /// ring starting from its canonical value at angle 0.
    std::vector<Sample> ring(double r, int M) const {
        std::vector<Sample> out(M);
        cplx prev_root;
        for (int m = 0; m < M; ++m) {
            cplx t = std::polar(r, 2.0 * pi * m / M);
            Sample s;
            s.t = t;
            s.z = z_of(t);
            s.dzdt = dzdt_of(t);
            switch (kind_) {
                case Kind::regular: {
                    cplx root = std::sqrt(p_.eval(s.z));
                    cplx ref = (m == 0) ? w0_ : prev_root;
                    s.w = (std::abs(root - ref) <= std::abs(-root - ref)) ? root : -root;
                    prev_root = s.w;
                    break;
                }
                case Kind::branch: {
                    cplx root = std::sqrt(q_.eval(s.z));
                    if (m > 0 && std::abs(root - prev_root) > std::abs(-root - prev_root))
                        root = -root;
                    prev_root = root;
                    s.w = sign_ * t * root;
                    break;
                }
                case Kind::infinity_odd:
                case Kind::infinity_even: {
                    cplx root = std::sqrt(q_.eval(t));
                    if (m == 0) {
                        // canonical: continue the principal sqrt(q(0))
                        cplx r0 = std::sqrt(q_.eval(cplx(0.0)));
                        if (std::abs(root - r0) > std::abs(-root - r0)) root = -root;
                    } else if (std::abs(root - prev_root) > std::abs(-root - prev_root)) {
                        root = -root;
                    }
                    prev_root = root;
                    int d = p_.degree();
                    int half = (kind_ == Kind::infinity_odd) ? d : d / 2;
                    s.w = sign_ * root / std::pow(t, half);
                    break;
                }
            }
            out[m] = s;
        }
        return out;
    }

    /// Values of w along a straight t-segment from t_from (where w equals
    /// w_from) to t_to, continued sequentially. Returns the samples at the
    /// given interior parameters (ts in (0,1], 0 -> t_from, 1 -> t_to).
    std::vector<Sample> segment(cplx t_from, cplx w_from, cplx t_to,
                                const std::vector<double>& ts) const {
        std::vector<Sample> out(ts.size());
        cplx prev = w_from;
        for (size_t i = 0; i < ts.size(); ++i) {
            cplx t = t_from + ts[i] * (t_to - t_from);
            Sample s;
            s.t = t;
            s.z = z_of(t);
            s.dzdt = dzdt_of(t);
            cplx wmag;
            switch (kind_) {
                case Kind::regular: wmag = std::sqrt(p_.eval(s.z)); break;
                case Kind::branch: wmag = t * std::sqrt(q_.eval(s.z)); break;
                case Kind::infinity_odd:
                case Kind::infinity_even: {
                    int d = p_.degree();
                    int half = (kind_ == Kind::infinity_odd) ? d : d / 2;
                    wmag = std::sqrt(q_.eval(t)) / std::pow(t, half);
                    break;
                }
            }
            s.w = (std::abs(wmag - prev) <= std::abs(-wmag - prev)) ? wmag : -wmag;
            prev = s.w;
            out[i] = s;
        }
        return out;
    }

    /// Canonical pointwise sheet value at t: principal square roots, with the
    /// infinity charts matched to their index-defining value at t = 0.
    cplx w_canonical(cplx t) const {
        switch (kind_) {
            case Kind::regular: {
                cplx root = std::sqrt(p_.eval(z_of(t)));
                return (std::abs(root - w0_) <= std::abs(-root - w0_)) ? root : -root;
            }
            case Kind::branch:
                return sign_ * t * std::sqrt(q_.eval(z_of(t)));
            case Kind::infinity_odd:
            case Kind::infinity_even: {
                cplx root = std::sqrt(q_.eval(t));
                cplx r0 = std::sqrt(q_.eval(cplx(0.0)));
                if (std::abs(root - r0) > std::abs(-root - r0)) root = -root;
                int d = p_.degree();
                int half = (kind_ == Kind::infinity_odd) ? d : d / 2;
                return sign_ * root / std::pow(t, half);
            }
        }
        return 0.0;
    }

    /// Flip the chart sheet so that w(t_ref) matches w_expect.
    void match_sign(cplx t_ref, cplx w_expect) {
        if (kind_ == Kind::regular) {
            w0_ = w_expect;
            return;
        }
        cplx w_here;
        switch (kind_) {
            case Kind::branch: w_here = sign_ * t_ref * std::sqrt(q_.eval(z_of(t_ref))); break;
            default: {
                int d = p_.degree();
                int half = (kind_ == Kind::infinity_odd) ? d : d / 2;
                w_here = sign_ * std::sqrt(q_.eval(t_ref)) / std::pow(t_ref, half);
            }
        }
        if (std::abs(w_here - w_expect) > std::abs(-w_here - w_expect)) sign_ = -sign_;
    }

  private:
    Kind kind_ = Kind::regular;
    UniPoly p_, q_;
    cplx z0_, w0_;
    double sign_ = 1.0;
};

/// First K Taylor coefficients of an analytic function from its values on a
/// ring of radius r (discrete Cauchy integrals).
inline std::vector<cplx> taylor_from_ring(const std::vector<cplx>& fvals, double r, int K) {
    const int M = static_cast<int>(fvals.size());
    std::vector<cplx> c(K, 0.0);
    for (int k = 0; k < K; ++k) {
        cplx acc = 0.0;
        for (int m = 0; m < M; ++m)
            acc += fvals[m] * std::polar(1.0, -2.0 * pi * k * m / M);
        c[k] = acc / (double(M) * std::pow(r, k));
    }
    return c;
}

/// Residue (1/2 pi i) contour integral of f dt over the sampled ring.
inline cplx residue_from_ring(const std::vector<cplx>& fvals,
                              const std::vector<cplx>& ts) {
    cplx acc = 0.0;
    for (size_t m = 0; m < fvals.size(); ++m) acc += fvals[m] * ts[m];
    return acc / double(fvals.size());
}

/**
 * Winding number of f around the sampled ring = order of the zero/pole at
 * the center (argument principle). Throws when consecutive samples jump by
 * too large an angle for the count to be trusted.
 */
inline int winding_order(const std::vector<cplx>& fvals) {
    double total = 0.0;
    const size_t M = fvals.size();
    for (size_t m = 0; m < M; ++m) {
        cplx a = fvals[m], b = fvals[(m + 1) % M];
        if (a == cplx(0.0) || b == cplx(0.0))
            throw numeric_error("winding_order: function vanishes on the contour");
        double d = std::arg(b / a);
        if (std::abs(d) > 0.9 * pi)
            throw numeric_error("winding_order: contour resolution too coarse");
        total += d;
    }
    double turns = total / (2.0 * pi);
    int n = static_cast<int>(std::lround(turns));
    if (std::abs(turns - n) > 0.05)
        throw numeric_error("winding_order: non-integer winding", std::abs(turns - n));
    return n;
}

/// Order of a meromorphic expression at a charted point, via the argument
/// principle on rings of increasing resolution.
inline int chart_order(const HyperChart& ch, double r,
                       const std::function<cplx(const HyperChart::Sample&)>& f) {
    for (int M = 128; M <= 4096; M *= 2) {
        auto rg = ch.ring(r, M);
        std::vector<cplx> vals(rg.size());
        for (size_t i = 0; i < rg.size(); ++i) vals[i] = f(rg[i]);
        try {
            return winding_order(vals);
        } catch (const numeric_error&) {
            if (M == 4096) throw;
        }
    }
    throw numeric_error("chart_order: no resolution sufficed");
}

} // namespace rsurf

#endif // RSURF_LOCAL_HPP
