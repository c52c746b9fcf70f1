#ifndef RSURF_CURVE_HPP
#define RSURF_CURVE_HPP

#include <optional>

#include "rsurf/bipoly.hpp"

namespace rsurf {

enum class CurveKind { general, hyperelliptic, elliptic };
enum class BranchSource { disc_zero, p0_zero };

struct BranchPoint {
    cplx z;
    BranchSource source;
};

/// Finite branch locus plus the chart-at-infinity flag.
struct BranchLocus {
    std::vector<BranchPoint> finite_points;
    bool includes_infinity = false;
};

using Fiber = std::vector<cplx>;

enum class PointKind { regular, branch, infinity_pt };

/**
 * A point of the compact surface. Regular points carry (z, sheet, w) with
 * the sheet index referring to the lexicographically sorted fiber over z;
 * finite branch points carry (z, w); points over z = infinity carry a small
 * index distinguishing the preimages (0 for the single point when the sheet
 * count there is one, 0/1 for the two hyperelliptic even-degree points).
 */
struct CurvePoint {
    PointKind kind = PointKind::regular;
    cplx z;
    int sheet = 1;     // regular points, 1-based
    cplx w;            // redundant check value (regular and branch kinds)
    int inf_index = 0; // infinity points

    static CurvePoint regular(cplx z, int sheet, cplx w) {
        return {PointKind::regular, z, sheet, w, 0};
    }
    static CurvePoint branch(cplx z) { return {PointKind::branch, z, 0, 0.0, 0}; }
    static CurvePoint infinity(int index = 0) {
        return {PointKind::infinity_pt, 0.0, 0, 0.0, index};
    }
};

inline bool same_point(const CurvePoint& a, const CurvePoint& b, double tol = 1e-8) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case PointKind::infinity_pt:
            return a.inf_index == b.inf_index;
        case PointKind::branch:
            return std::abs(a.z - b.z) <= tol * std::max(1.0, std::abs(a.z));
        case PointKind::regular:
            return std::abs(a.z - b.z) <= tol * std::max(1.0, std::abs(a.z)) &&
                   std::abs(a.w - b.w) <= 1e-6 * std::max(1.0, std::abs(a.w));
    }
    return false;
}

struct CurveOptions {
    std::optional<cplx> base_point;
    double fiber_tol = 1e-9;  // residual tolerance for fiber roots
};

/**
 * The plane curve F(w,z) = 0 as an n-sheeted cover of the z-sphere, with its
 * finite branch locus, a fixed regular base point and the canonical sheet
 * labels given by the lexicographic fiber order there.
 */
class Curve {
  public:
    explicit Curve(BivariatePoly F, CurveOptions opt = {}) : F_(std::move(F)), opt_(opt) {
        n_ = F_.deg_w();

        UniPoly disc = discriminant_locus_poly(F_);
        if (disc.is_zero())
            throw domain_error("curve not squarefree in w");

        std::vector<BranchPoint> pts;
        if (disc.degree() >= 1)
            for (const auto& cl : roots(disc))
                pts.push_back({cl.center, BranchSource::disc_zero});
        const UniPoly& p0 = F_.w_coeff(n_);
        if (p0.degree() >= 1)
            for (const auto& cl : roots(p0)) {
                bool dup = false;
                for (auto& q : pts)
                    if (std::abs(q.z - cl.center) < 1e-7 * std::max(1.0, std::abs(cl.center))) {
                        q.source = BranchSource::p0_zero;
                        dup = true;
                    }
                if (!dup) pts.push_back({cl.center, BranchSource::p0_zero});
            }
        // de-duplicate disc-root clusters that the root finder left apart
        std::sort(pts.begin(), pts.end(), [](const BranchPoint& a, const BranchPoint& b) {
            if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
            return a.z.imag() < b.z.imag();
        });
        std::vector<BranchPoint> uniq;
        for (const auto& q : pts) {
            if (!uniq.empty() &&
                std::abs(uniq.back().z - q.z) < 1e-7 * std::max(1.0, std::abs(q.z)))
                continue;
            uniq.push_back(q);
        }
        branch_ = std::move(uniq);

        min_pair_dist_ = 1.0;
        if (branch_.size() >= 2) {
            min_pair_dist_ = 1e300;
            for (size_t i = 0; i < branch_.size(); ++i)
                for (size_t j = i + 1; j < branch_.size(); ++j)
                    min_pair_dist_ = std::min(min_pair_dist_, std::abs(branch_[i].z - branch_[j].z));
        }
        margin_ = std::max(1e-6, 0.05 * min_pair_dist_);

        classify();

        if (opt.base_point) {
            base_ = *opt.base_point;
            if (dist_to_branch(base_) <= margin_)
                throw domain_error("base point override lies inside the branch margin");
        } else {
            cplx centroid = 0.0;
            for (const auto& q : branch_) centroid += q.z;
            if (!branch_.empty()) centroid /= double(branch_.size());
            double spread = 0.0;
            for (const auto& q : branch_) spread = std::max(spread, std::abs(q.z - centroid));
            base_ = centroid + cplx(0.0, 2.0 + spread);
        }
        base_fiber_ = solve_fiber(base_);
    }

    const BivariatePoly& F() const { return F_; }
    int sheets() const { return n_; }
    CurveKind kind() const { return kind_; }
    const UniPoly& hyper_p() const {
        if (kind_ == CurveKind::general)
            throw domain_error("curve is not in hyperelliptic form w^2 - p(z)");
        return hyper_p_;
    }
    bool is_hyperelliptic() const { return kind_ != CurveKind::general; }
    cplx base_point() const { return base_; }
    const Fiber& base_fiber() const { return base_fiber_; }
    const std::vector<BranchPoint>& finite_branch_points() const { return branch_; }
    double margin() const { return margin_; }
    double min_branch_distance() const { return min_pair_dist_; }
    double fiber_tol() const { return opt_.fiber_tol; }

    double dist_to_branch(cplx z) const {
        double d = 1e300;
        for (const auto& q : branch_) d = std::min(d, std::abs(z - q.z));
        return d;
    }

    /// The n sheet values over a regular z, in lexicographic order.
    Fiber fiber(cplx z) const {
        if (dist_to_branch(z) <= margin_)
            throw numeric_error("near-singular fiber: z is inside the branch margin");
        return solve_fiber(z);
    }

    /// w on the sheet of a hyperelliptic curve: plain square roots of p(z).
    /// The two values returned are +sqrt and -sqrt of the principal branch.
    std::pair<cplx, cplx> hyper_w(cplx z) const {
        cplx s = std::sqrt(hyper_p().eval(z));
        return {s, -s};
    }

  private:
    void classify() {
        kind_ = CurveKind::general;
        if (n_ != 2) return;
        if (!F_.w_coeff(1).is_zero()) return;
        const UniPoly& lead = F_.w_coeff(2);
        if (lead.degree() != 0) return;
        hyper_p_ = F_.w_coeff(0) * (-1.0 / lead.coeff(0));
        if (hyper_p_.degree() < 1) return;
        for (const auto& cl : roots(hyper_p_))
            if (cl.multiplicity > 1) return; // not squarefree: stays general
        kind_ = (hyper_p_.degree() == 3 || hyper_p_.degree() == 4) ? CurveKind::elliptic
                                                                   : CurveKind::hyperelliptic;
    }

    Fiber solve_fiber(cplx z) const {
        UniPoly pw{F_.fiber_coeffs(z)};
        if (pw.degree() != n_)
            throw numeric_error("fiber: leading coefficient vanished at z");
        Fiber f;
        for (const auto& cl : roots(pw)) {
            if (cl.multiplicity != 1)
                throw numeric_error("near-singular fiber: repeated sheet values");
            f.push_back(cl.center);
        }
        std::sort(f.begin(), f.end(), [](cplx a, cplx b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });
        for (cplx w : f) {
            double res = std::abs(F_.eval(w, z));
            if (res > 1e-6 * (F_.scale_at(w, z) + 1e-300))
                throw numeric_error("fiber: root residual too large", res);
        }
        return f;
    }

    BivariatePoly F_;
    CurveOptions opt_;
    int n_ = 0;
    CurveKind kind_ = CurveKind::general;
    UniPoly hyper_p_;
    cplx base_;
    Fiber base_fiber_;
    std::vector<BranchPoint> branch_;
    double min_pair_dist_ = 1.0, margin_ = 1e-6;
};

/// Convenience builder for w^2 - p(z).
inline Curve hyperelliptic_curve(const UniPoly& p, CurveOptions opt = {}) {
    std::vector<UniPoly> wc(3);
    wc[0] = p * cplx(-1.0);
    wc[1] = UniPoly();
    wc[2] = UniPoly::constant(1.0);
    return Curve(BivariatePoly(std::move(wc)), opt);
}

} // namespace rsurf

#endif // RSURF_CURVE_HPP
