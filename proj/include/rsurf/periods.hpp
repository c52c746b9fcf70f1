#ifndef RSURF_PERIODS_HPP
#define RSURF_PERIODS_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "rsurf/divisor.hpp"
#include "rsurf/tracker.hpp"

namespace rsurf {

/// The holomorphic basis w_k = z^(k-1) dz / w, k = 1..g, of a hyperelliptic
/// curve, addressed through its density with respect to dz.
struct DifferentialBasis {
    int g = 0;
    cplx density(int k, cplx z, cplx w) const { return std::pow(z, k - 1) / w; }
};

inline DifferentialBasis differential_basis(const Curve& c) {
    if (!c.is_hyperelliptic())
        throw domain_error("differential_basis: hyperelliptic curves only");
    int g = curve_genus(c);
    if (g < 1) throw domain_error("differential_basis: no holomorphic differentials");
    return {g};
}

/// Closed counterclockwise polygon starting at its anchor waypoint.
struct Cycle {
    std::vector<cplx> waypoints;
};

/**
 * Symplectic homology layout for the two-sheet cut model: branch points are
 * sorted and paired into cuts (e1 e2 | e3 e4 | ...), with infinity appended
 * implicitly when the degree is odd. a_k is a rectangle around cut k; the
 * auxiliary gap rectangles around (e_{2k}, e_{2k+1}) compose the b-cycles,
 * b_k = gap_k + gap_{k+1} + ... + gap_{g-1}. Every rectangle is entered from
 * the simply connected region above the branch locus, which pins one
 * coherent sheet for all cycles.
 */
struct HomologyBasis {
    int g = 0;
    cplx frame = 1.0;                         // unit rotation of the sorting frame
    std::vector<cplx> points;                 // branch points sorted along the frame
    std::vector<std::array<int, 2>> cuts;     // index pairs, one per a-cycle
    std::vector<std::array<int, 2>> gaps;     // index pairs, one per gap loop
    std::vector<Cycle> a, gap_loops, b;       // b[k] kept for plotting/validation
};

namespace detail {

struct Box {
    double lo_re, hi_re, lo_im, hi_im;
    bool contains(cplx z) const {
        return z.real() >= lo_re && z.real() <= hi_re && z.imag() >= lo_im && z.imag() <= hi_im;
    }
    double dist(cplx z) const {
        double dx = std::max({lo_re - z.real(), 0.0, z.real() - hi_re});
        double dy = std::max({lo_im - z.imag(), 0.0, z.imag() - hi_im});
        return std::hypot(dx, dy);
    }
};

inline Box bounding_box(const std::vector<cplx>& pts, int from, int to) {
    Box b{1e300, -1e300, 1e300, -1e300};
    for (int i = from; i <= to; ++i) {
        b.lo_re = std::min(b.lo_re, pts[i].real());
        b.hi_re = std::max(b.hi_re, pts[i].real());
        b.lo_im = std::min(b.lo_im, pts[i].imag());
        b.hi_im = std::max(b.hi_im, pts[i].imag());
    }
    return b;
}

// Rectangle loop around the box inflated side-by-side, CCW, starting at
// (x_anchor, top).
inline Cycle rect_cycle(const Box& box, double rho_l, double rho_r, double rho_b,
                        double rho_t, double x_anchor) {
    Cycle c;
    double lo_re = box.lo_re - rho_l, hi_re = box.hi_re + rho_r;
    double lo_im = box.lo_im - rho_b, hi_im = box.hi_im + rho_t;
    c.waypoints = {cplx(x_anchor, hi_im), cplx(lo_re, hi_im), cplx(lo_re, lo_im),
                   cplx(hi_re, lo_im),    cplx(hi_re, hi_im), cplx(x_anchor, hi_im)};
    return c;
}

// Anchor abscissa within [lo, hi] whose vertical corridor above `top` keeps
// `lane` clear of every branch point higher than `top`.
inline double pick_anchor_x(double prefer, double lo, double hi, double top,
                            const std::vector<cplx>& pts, double lane) {
    auto clear = [&](double x) {
        if (x < lo || x > hi) return false;
        for (cplx q : pts)
            if (q.imag() > top && std::abs(q.real() - x) < lane) return false;
        return true;
    };
    if (clear(prefer)) return prefer;
    double span = hi - lo;
    for (int k = 1; k <= 64; ++k) {
        double dx = span * k / 128.0;
        if (clear(prefer + dx)) return prefer + dx;
        if (clear(prefer - dx)) return prefer - dx;
    }
    throw internal_error("homology_basis: no clear descent corridor for a cycle anchor");
}

} // namespace detail

inline HomologyBasis homology_basis(const Curve& c) {
    if (!c.is_hyperelliptic())
        throw domain_error("homology_basis: hyperelliptic curves only");
    HomologyBasis hb;
    hb.g = curve_genus(c);
    if (hb.g < 1) throw domain_error("homology_basis: genus is zero");

    std::vector<cplx> raw;
    for (const auto& q : c.finite_branch_points()) raw.push_back(q.z);

    // Sorting frame: project onto a direction chosen to maximize the
    // smallest gap between consecutive projections, so no branch point ends
    // up hugging the side of a neighbor's cycle box.
    double best_gap = -1.0, best_theta = 0.0;
    for (int k = 0; k < 60; ++k) {
        double theta = pi * k / 60.0;
        std::vector<double> proj;
        for (cplx z : raw) proj.push_back((z * std::polar(1.0, -theta)).real());
        std::sort(proj.begin(), proj.end());
        double gap = 1e300;
        for (size_t i = 1; i < proj.size(); ++i) gap = std::min(gap, proj[i] - proj[i - 1]);
        if (gap > best_gap) {
            best_gap = gap;
            best_theta = theta;
        }
    }
    hb.frame = std::polar(1.0, best_theta);
    const cplx to_frame = std::conj(hb.frame);

    hb.points = raw;
    std::sort(hb.points.begin(), hb.points.end(), [&](cplx u, cplx v) {
        cplx fu = u * to_frame, fv = v * to_frame;
        if (fu.real() != fv.real()) return fu.real() < fv.real();
        return fu.imag() < fv.imag();
    });
    std::vector<cplx> e; // frame coordinates
    for (cplx z : hb.points) e.push_back(z * to_frame);
    const int g = hb.g;

    double lane = 3.0 * c.margin();
    double floor_rho = 1.5 * c.margin();
    auto make_loop = [&](int from, int to, double shrink) {
        detail::Box box = detail::bounding_box(e, from, to);
        double diag = std::hypot(box.hi_re - box.lo_re, box.hi_im - box.lo_im);
        double cap = 0.35 * (1.0 + diag) * shrink;
        // each side inflates independently: an excluded branch point only
        // constrains the side(s) it faces
        double rl = cap, rr = cap, rb = cap, rt = cap;
        for (int i = 0; i < static_cast<int>(e.size()); ++i) {
            if (i >= from && i <= to) continue;
            if (box.contains(e[i]))
                throw internal_error("homology_basis: branch point inside a cycle box");
            double dx_l = box.lo_re - e[i].real(), dx_r = e[i].real() - box.hi_re;
            double dy_b = box.lo_im - e[i].imag(), dy_t = e[i].imag() - box.hi_im;
            double dx = std::max({dx_l, dx_r, 0.0});
            double dy = std::max({dy_b, dy_t, 0.0});
            if (dx >= dy) {
                if (dx_l > 0) rl = std::min(rl, 0.45 * dx_l);
                if (dx_r > 0) rr = std::min(rr, 0.45 * dx_r);
            } else {
                if (dy_b > 0) rb = std::min(rb, 0.45 * dy_b);
                if (dy_t > 0) rt = std::min(rt, 0.45 * dy_t);
            }
        }
        for (double* r : {&rl, &rr, &rb, &rt})
            if (*r < floor_rho)
                throw internal_error("homology_basis: cycle clearance collapsed");
        double x = detail::pick_anchor_x(e[to].real(), box.lo_re - 0.8 * rl,
                                         box.hi_re + 0.8 * rr, box.hi_im + rt, e, lane);
        Cycle cyc = detail::rect_cycle(box, rl, rr, rb, rt, x);
        for (cplx& wp : cyc.waypoints) wp *= hb.frame; // back to curve coordinates
        return cyc;
    };

    for (int k = 0; k < g; ++k) {
        hb.cuts.push_back({2 * k, 2 * k + 1});
        hb.a.push_back(make_loop(2 * k, 2 * k + 1, 1.0));
        hb.gaps.push_back({2 * k + 1, 2 * k + 2});
        hb.gap_loops.push_back(make_loop(2 * k + 1, 2 * k + 2, 0.85));
        hb.b.push_back(make_loop(2 * k + 1, 2 * g, 0.7));
    }
    return hb;
}

namespace detail {

/**
 * Gauss-Chebyshev value of the integrals of z^(j-1)/w dz over the open
 * segment between two branch points, j = 1..g, with the square-root branch
 * fixed canonically (the true sheet sign is matched afterwards against a
 * tracked loop). The endpoint singularities are absorbed by the rule; the
 * smooth part is the deflated radical sqrt(r), r = p / ((z-E1)(z-E2)).
 */
struct SegmentIntegrals {
    std::vector<cplx> vals; // one per differential
    double err = 0.0;       // last doubling change
};

inline SegmentIntegrals chebyshev_segment(const UniPoly& p, cplx E1, cplx E2,
                                          const std::vector<cplx>& all_roots, int g,
                                          double tol, int n_start, int n_max) {
    // deflated radical via the explicit root product
    std::vector<cplx> others;
    {
        bool skip1 = false, skip2 = false;
        for (cplx r : all_roots) {
            if (!skip1 && std::abs(r - E1) < 1e-7 * std::max(1.0, std::abs(r))) {
                skip1 = true;
                continue;
            }
            if (!skip2 && std::abs(r - E2) < 1e-7 * std::max(1.0, std::abs(r))) {
                skip2 = true;
                continue;
            }
            others.push_back(r);
        }
        if (!skip1 || !skip2)
            throw internal_error("chebyshev_segment: endpoints are not branch points");
    }
    const cplx lc = p.lead();
    const cplx mid = 0.5 * (E1 + E2);
    const cplx half = 0.5 * (E2 - E1);

    auto compute = [&](int N) {
        std::vector<cplx> acc(g, 0.0);
        std::vector<cplx> roots_of_r(N);
        // nodes ordered by angle so the radical can be continued sequentially
        cplx prev;
        for (int t = 0; t < N; ++t) {
            double x = std::cos(pi * (2.0 * t + 1.0) / (2.0 * N));
            cplx z = mid + x * half;
            cplx rv = lc;
            for (cplx q : others) rv *= (z - q);
            cplx root = std::sqrt(rv);
            if (t > 0 && std::abs(root - prev) > std::abs(-root - prev)) root = -root;
            prev = root;
            roots_of_r[t] = root;
        }
        // canonical orientation: the node nearest the midpoint gets a value
        // in the closed upper half plane (real axis ties broken toward +1)
        {
            cplx vm = roots_of_r[N / 2];
            bool flip = vm.imag() < 0.0 || (vm.imag() == 0.0 && vm.real() < 0.0);
            if (flip)
                for (auto& v : roots_of_r) v = -v;
        }
        for (int t = 0; t < N; ++t) {
            double x = std::cos(pi * (2.0 * t + 1.0) / (2.0 * N));
            cplx z = mid + x * half;
            cplx zp = 1.0;
            for (int j = 0; j < g; ++j) {
                acc[j] += zp / roots_of_r[t];
                zp *= z;
            }
        }
        cplx factor = cplx(0.0, -1.0) * pi / double(N);
        for (auto& v : acc) v *= factor;
        return acc;
    };

    SegmentIntegrals out;
    std::vector<cplx> prev = compute(n_start);
    for (int N = 2 * n_start; N <= n_max; N *= 2) {
        std::vector<cplx> cur = compute(N);
        double change = 0.0, scale = 0.0;
        for (int j = 0; j < g; ++j) {
            change = std::max(change, std::abs(cur[j] - prev[j]));
            scale = std::max(scale, std::abs(cur[j]));
        }
        out.err = change;
        prev = std::move(cur);
        if (change <= tol * std::max(1.0, scale)) break;
        if (N * 2 > n_max)
            throw numeric_error("chebyshev_segment: quadrature did not converge", change);
    }
    out.vals = std::move(prev);
    return out;
}

/**
 * Integrals of m densities f_j(z, w) dz along a tracked polyline, following
 * sheet index 0 of the state. Simpson per accepted continuation step, with
 * the substep cap halved `refine` extra times for error control. The state
 * is advanced to the end of the path.
 */
template <class DensityFn>
inline std::vector<cplx> tracked_path_integrals(const Curve& c,
                                                const std::vector<cplx>& wps, TrackState& st,
                                                int m, DensityFn dens,
                                                const TrackOptions& topt = {},
                                                int refine = 0) {
    if (std::abs(st.z - wps.front()) > 1e-9 * (1.0 + std::abs(st.z)))
        throw internal_error("tracked_path_integrals: state is not at the path start");
    std::vector<cplx> acc(m, 0.0);
    double total = 0.0;
    for (size_t i = 1; i < wps.size(); ++i) total += std::abs(wps[i] - wps[i - 1]);
    if (total == 0.0) return acc;
    const double shrink = std::pow(0.5, refine);

    for (size_t leg = 1; leg < wps.size(); ++leg) {
        cplx a = wps[leg - 1], b = wps[leg];
        double len = std::abs(b - a);
        if (len == 0.0) continue;
        double s = 0.0, h = total / 96.0 * shrink;
        std::vector<cplx> next;
        while (len - s > 1e-12 * len) {
            double cap = 0.45 * c.dist_to_branch(st.z) * shrink;
            double hh = std::min({h, cap, len - s});
            if (std::min(h, cap) < 1e-13 * total && len - s > 1e-10 * len)
                throw numeric_error("tracked_path_integrals: stalled near branch point");
            cplx target = a + (s + hh) / len * (b - a);
            if (!rsurf::detail::try_fiber_step(c, st.z, st.w, target, next, topt)) {
                h = 0.5 * hh;
                continue;
            }
            // Simpson on the substep with a corrected midpoint value
            cplx zm = 0.5 * (st.z + target);
            cplx wm = 0.5 * (st.w[0] + next[0]);
            if (!rsurf::detail::newton_w(c.F(), zm, wm, topt.track_tol, topt.newton_max))
                throw numeric_error("tracked_path_integrals: midpoint correction failed");
            cplx dz = target - st.z;
            for (int j = 0; j < m; ++j)
                acc[j] += dz / 6.0 *
                          (dens(st.z, st.w[0], j) + 4.0 * dens(zm, wm, j) +
                           dens(target, next[0], j));
            st.z = target;
            st.w = next;
            s += hh;
        }
    }
    return acc;
}

/// Loop variant: closed path, closure on the surface verified.
inline std::vector<cplx> tracked_loop_integrals(const Curve& c, const Cycle& loop,
                                                const TrackState& state, int g,
                                                const TrackOptions& topt = {}) {
    TrackState st = state;
    auto dens = [&](cplx z, cplx w, int j) { return std::pow(z, j) / w; };
    auto acc = tracked_path_integrals(c, loop.waypoints, st, g, dens, topt);
    if (std::abs(st.w[0] - state.w[0]) > 1e-5 * (1.0 + std::abs(state.w[0])))
        throw internal_error("tracked_loop_integrals: loop did not close on the surface");
    return acc;
}

// sign in {+1,-1} such that tracked ~ sign * composed, using the largest entry
inline double match_sign(const std::vector<cplx>& tracked, const std::vector<cplx>& composed,
                         double tol) {
    int best = 0;
    double mag = 0.0;
    for (size_t j = 0; j < composed.size(); ++j)
        if (std::abs(composed[j]) > mag) {
            mag = std::abs(composed[j]);
            best = static_cast<int>(j);
        }
    if (mag == 0.0) throw internal_error("match_sign: vanishing reference periods");
    cplx ratio = tracked[best] / composed[best];
    double sign = (ratio.real() >= 0.0) ? 1.0 : -1.0;
    if (std::abs(ratio - sign) > tol)
        throw internal_error("match_sign: tracked loop does not match the segment value");
    return sign;
}

} // namespace detail

/// Period matrix (E, F) with its normalized form Z = E^-1 F and the
/// residuals of the Riemann bilinear relations.
struct PeriodMatrix {
    Eigen::MatrixXcd E, F;              // g x g, rows = differentials
    Eigen::MatrixXcd Z;                 // E^-1 F
    double bilinear_residual = 0.0;     // |E F^T - F E^T| / |Omega|^2
    double hermitian_residual = 0.0;    // asymmetry of i(E Fbar^T - F Ebar^T)
    double min_imag_eigenvalue = 0.0;   // of Im Z
    double symmetry_residual = 0.0;     // |Z - Z^T|
    double quadrature_err = 0.0;        // last node-doubling change
    bool flipped_orientation = false;   // b-cycles reversed to make Im Z > 0

    Eigen::MatrixXcd omega() const {
        Eigen::MatrixXcd o(E.rows(), 2 * E.cols());
        o << E, F;
        return o;
    }
};

struct PeriodOptions {
    double quad_tol = 1e-11;
    int cheb_start = 32;
    int cheb_max = 16384;
    double sign_tol = 0.2;     // tracked/segment agreement for sign reading
    double validate_tol = 1e-5;
    TrackOptions track;
};

inline PeriodMatrix period_matrix(const Curve& c, const DifferentialBasis& basis,
                                  const HomologyBasis& hb, const PeriodOptions& opt = {}) {
    const int g = basis.g;
    if (g != hb.g) throw domain_error("period_matrix: basis and homology disagree on genus");
    const UniPoly& p = c.hyper_p();
    std::vector<cplx> all_roots;
    for (const auto& cl : roots(p)) all_roots.push_back(cl.center);

    // precise open-segment integrals for cuts and gaps
    std::vector<detail::SegmentIntegrals> cut_vals(g), gap_vals(g);
    double quad_err = 0.0;
    for (int k = 0; k < g; ++k) {
        cut_vals[k] = detail::chebyshev_segment(p, hb.points[hb.cuts[k][0]],
                                                hb.points[hb.cuts[k][1]], all_roots, g,
                                                opt.quad_tol, opt.cheb_start, opt.cheb_max);
        gap_vals[k] = detail::chebyshev_segment(p, hb.points[hb.gaps[k][0]],
                                                hb.points[hb.gaps[k][1]], all_roots, g,
                                                opt.quad_tol, opt.cheb_start, opt.cheb_max);
        quad_err = std::max({quad_err, cut_vals[k].err, gap_vals[k].err});
    }

    // One coherent sheet for every cycle: all anchors are reached from a
    // reference point through the simply connected region beyond the branch
    // locus in the frame's upward direction.
    const cplx to_frame = std::conj(hb.frame);
    cplx centroid_f = 0.0;
    for (cplx z : hb.points) centroid_f += z * to_frame;
    centroid_f /= double(hb.points.size());
    double spread_f = 0.0;
    for (cplx z : hb.points)
        spread_f = std::max(spread_f, std::abs(z * to_frame - centroid_f));
    cplx base_f = centroid_f + cplx(0.0, 2.0 + spread_f);
    double y_top = base_f.imag();
    for (const auto& cycles : {&hb.a, &hb.gap_loops, &hb.b})
        for (const auto& cy : *cycles)
            y_top = std::max(y_top, (cy.waypoints.front() * to_frame).imag() + 1.0);

    TrackState origin{base_f * hb.frame, c.fiber(base_f * hb.frame), 0.0, {}};
    auto state_at_anchor = [&](cplx anchor) {
        cplx anchor_f = anchor * to_frame;
        Path route;
        route.waypoints = {base_f * hb.frame, cplx(base_f.real(), y_top) * hb.frame,
                           cplx(anchor_f.real(), y_top) * hb.frame, anchor};
        return continue_along(c, origin, route, opt.track);
    };

    std::vector<double> cut_sign(g), gap_sign(g);
    for (int k = 0; k < g; ++k) {
        TrackState sa = state_at_anchor(hb.a[k].waypoints.front());
        auto ta = detail::tracked_loop_integrals(c, hb.a[k], sa, g, opt.track);
        std::vector<cplx> doubled(g);
        for (int j = 0; j < g; ++j) doubled[j] = 2.0 * cut_vals[k].vals[j];
        cut_sign[k] = detail::match_sign(ta, doubled, opt.sign_tol);

        TrackState sg = state_at_anchor(hb.gap_loops[k].waypoints.front());
        auto tg = detail::tracked_loop_integrals(c, hb.gap_loops[k], sg, g, opt.track);
        for (int j = 0; j < g; ++j) doubled[j] = 2.0 * gap_vals[k].vals[j];
        gap_sign[k] = detail::match_sign(tg, doubled, opt.sign_tol);
    }

    PeriodMatrix pm;
    pm.E.resize(g, g);
    pm.F.resize(g, g);
    pm.quadrature_err = quad_err;
    for (int j = 0; j < g; ++j)
        for (int k = 0; k < g; ++k) {
            pm.E(j, k) = cut_sign[k] * 2.0 * cut_vals[k].vals[j];
            cplx acc = 0.0;
            for (int l = k; l < g; ++l) acc += gap_sign[l] * 2.0 * gap_vals[l].vals[j];
            pm.F(j, k) = acc;
        }

    // cross-check the composed b-periods against directly tracked b-loops
    for (int k = 0; k < g; ++k) {
        TrackState sb = state_at_anchor(hb.b[k].waypoints.front());
        auto tb = detail::tracked_loop_integrals(c, hb.b[k], sb, g, opt.track);
        double scale = 0.0;
        for (int j = 0; j < g; ++j) scale = std::max(scale, std::abs(pm.F(j, k)));
        for (int j = 0; j < g; ++j)
            if (std::abs(tb[j] - pm.F(j, k)) > 0.05 * std::max(1.0, scale))
                throw internal_error(
                    "period_matrix: b-cycle assembly disagrees with direct tracking");
    }

    auto validate = [&](PeriodMatrix& m) {
        Eigen::MatrixXcd bl = m.E * m.F.transpose() - m.F * m.E.transpose();
        double omega_norm = m.omega().norm();
        m.bilinear_residual = bl.norm() / (omega_norm * omega_norm);
        Eigen::MatrixXcd h =
            cplx(0, 1) * (m.E * m.F.adjoint() - m.F * m.E.adjoint());
        m.hermitian_residual = (h - h.adjoint()).norm() / std::max(1.0, h.norm());
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(m.E);
        if (!lu.isInvertible())
            throw numeric_error("period_matrix: a-period matrix is singular");
        m.Z = lu.solve(m.F);
        m.symmetry_residual =
            (m.Z - m.Z.transpose()).norm() / std::max(1.0, m.Z.norm());
        Eigen::MatrixXd imz = m.Z.imag();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (imz + imz.transpose()));
        m.min_imag_eigenvalue = es.eigenvalues().minCoeff();
    };
    validate(pm);
    if (pm.min_imag_eigenvalue < 0.0) {
        // orientation convention: reverse all b-cycles so that Im Z > 0
        Eigen::MatrixXd imz = pm.Z.imag();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (imz + imz.transpose()));
        if (es.eigenvalues().maxCoeff() > 0.0)
            throw numeric_error("period_matrix: Im Z is indefinite");
        pm.F = -pm.F;
        pm.flipped_orientation = true;
        validate(pm);
    }
    if (pm.bilinear_residual > opt.validate_tol ||
        pm.symmetry_residual > opt.validate_tol || pm.min_imag_eigenvalue <= 0.0)
        throw numeric_error("period_matrix inconsistent", pm.bilinear_residual);
    return pm;
}

inline PeriodMatrix period_matrix(const Curve& c, const PeriodOptions& opt = {}) {
    return period_matrix(c, differential_basis(c), homology_basis(c), opt);
}

/// True iff the 2g real column vectors (Re, Im) of Omega have full rank
/// within a conditioning bound.
inline bool real_independence(const Eigen::MatrixXcd& omega) {
    const int g = static_cast<int>(omega.rows());
    const int n = static_cast<int>(omega.cols());
    Eigen::MatrixXd m(2 * g, n);
    m << omega.real(), omega.imag();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double top = svd.singularValues()(0);
    if (top == 0.0) return false;
    return svd.singularValues()(svd.singularValues().size() - 1) > 1e-10 * top;
}

/// Residues of a meromorphic differential f(z,w) dz at all of its poles,
/// located from the rationalized denominator; contour quadrature in the
/// local parameter at each candidate point.
struct ResidueReport {
    std::vector<std::pair<CurvePoint, cplx>> entries;
    cplx total = 0.0;
};

inline ResidueReport residues(const Curve& c, const CurveFunction& f) {
    if (!c.is_hyperelliptic()) throw domain_error("residues: hyperelliptic curves only");
    const UniPoly& p = c.hyper_p();
    std::vector<cplx> branch;
    for (const auto& b : c.finite_branch_points()) branch.push_back(b.z);

    std::vector<cplx> cand;
    auto push_roots = [&cand](const UniPoly& u) {
        if (u.degree() >= 1)
            for (const auto& cl : roots(u)) cand.push_back(cl.center);
    };
    push_roots(f.R.den);
    push_roots(f.S.den);
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

    auto ring_residue = [&](const HyperChart& ch, double r) {
        cplx prev = 0.0;
        for (int M = 64; M <= 1024; M *= 2) {
            auto rg = ch.ring(r, M);
            std::vector<cplx> vals(rg.size()), ts(rg.size());
            for (size_t i = 0; i < rg.size(); ++i) {
                vals[i] = f.eval(rg[i].z, rg[i].w) * rg[i].dzdt;
                ts[i] = rg[i].t;
            }
            cplx res = residue_from_ring(vals, ts);
            if (M > 64 && std::abs(res - prev) <= 1e-10 * (1.0 + std::abs(res))) return res;
            prev = res;
        }
        return prev;
    };

    ResidueReport rep;
    auto record = [&rep](const CurvePoint& pt, cplx res) {
        rep.total += res;
        if (std::abs(res) > 1e-9) rep.entries.emplace_back(pt, res);
    };

    for (cplx z0 : uniq) {
        double skip = 1e-6 * std::max(1.0, std::abs(z0));
        double r = 0.25 * std::min(detail::dist_excluding(z0, uniq, skip),
                                   detail::dist_excluding(z0, branch, skip));
        r = std::min(r, 0.5 * std::max(1.0, std::abs(z0)));
        bool at_branch = detail::dist_excluding(z0, branch, -1.0) < skip;
        if (at_branch) {
            cplx e = z0;
            for (cplx b : branch)
                if (std::abs(b - z0) < skip) e = b;
            record(CurvePoint::branch(e),
                   ring_residue(HyperChart::branch(c, e), std::sqrt(r)));
        } else {
            cplx wplus = std::sqrt(p.eval(z0));
            Fiber fib = {wplus, -wplus};
            std::sort(fib.begin(), fib.end(), [](cplx a, cplx b) {
                if (a.real() != b.real()) return a.real() < b.real();
                return a.imag() < b.imag();
            });
            for (int sheet = 0; sheet < 2; ++sheet)
                record(CurvePoint::regular(z0, sheet + 1, fib[sheet]),
                       ring_residue(HyperChart::regular(c, z0, fib[sheet]), r));
        }
    }
    for (const CurvePoint& ip : detail::infinity_points(c)) {
        double t_r = (p.degree() % 2 == 1) ? 1.0 / std::sqrt(8.0 * rmax) : 1.0 / (8.0 * rmax);
        record(ip, ring_residue(HyperChart::infinity(c, ip.inf_index), t_r));
    }
    return rep;
}

} // namespace rsurf

#endif // RSURF_PERIODS_HPP
