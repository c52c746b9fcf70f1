#ifndef RSURF_TRACKER_HPP
#define RSURF_TRACKER_HPP

#include <algorithm>
#include <functional>

#include "rsurf/curve.hpp"

namespace rsurf {

struct Path {
    enum class Kind { segment_chain, loop_around };
    std::vector<cplx> waypoints;
    Kind kind = Kind::segment_chain;
    int branch_index = -1; // for loop_around
};

struct TrackStats {
    long steps = 0;
    long rejects = 0;
};

/// Fiber state transported along a path; sheet k of `w` is the analytic
/// continuation of sheet k of the starting fiber.
struct TrackState {
    cplx z;
    std::vector<cplx> w;
    double step_hint = 0.0; // absolute step length carried between legs
    TrackStats stats;
};

struct TrackOptions {
    double track_tol = 1e-9;         // relative residual bound per sheet
    double collision_factor = 1e-3;  // of the local fiber diameter
    int newton_max = 12;
    double min_step_frac = 1e-12;    // of the segment length
};

inline TrackState start_state(const Curve& c) {
    return {c.base_point(), c.base_fiber(), 0.0, {}};
}

namespace detail {

inline double fiber_diameter(const std::vector<cplx>& w) {
    double d = 0.0;
    for (size_t i = 0; i < w.size(); ++i)
        for (size_t j = i + 1; j < w.size(); ++j) d = std::max(d, std::abs(w[i] - w[j]));
    return d;
}

inline bool newton_w(const BivariatePoly& F, cplx z, cplx& w, double tol, int max_iter) {
    for (int it = 0; it < max_iter; ++it) {
        cplx fv = F.eval(w, z);
        if (std::abs(fv) <= tol * (F.scale_at(w, z) + 1e-300)) return true;
        cplx dv = F.eval_dw(w, z);
        if (std::abs(dv) < 1e-300) return false;
        w -= fv / dv;
    }
    return std::abs(F.eval(w, z)) <= tol * (F.scale_at(w, z) + 1e-300);
}

// One predictor-corrector step of the whole fiber from (z0, w0) to z1.
inline bool try_fiber_step(const Curve& c, cplx z0, const std::vector<cplx>& w0, cplx z1,
                           std::vector<cplx>& w1, const TrackOptions& opt) {
    const BivariatePoly& F = c.F();
    const size_t n = w0.size();
    const cplx dz = z1 - z0;
    w1.resize(n);
    std::vector<cplx> pred(n);
    for (size_t k = 0; k < n; ++k) {
        cplx fw = F.eval_dw(w0[k], z0);
        if (std::abs(fw) < 1e-300) return false;
        cplx dwdz = -F.eval_dz(w0[k], z0) / fw;
        pred[k] = w0[k] + dwdz * dz;
        w1[k] = pred[k];
        if (!newton_w(F, z1, w1[k], opt.track_tol, opt.newton_max)) return false;
    }
    if (n >= 2) {
        double thr = opt.collision_factor * std::max(fiber_diameter(w0), 1e-30);
        double min_pair = 1e300;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                min_pair = std::min(min_pair, std::abs(w1[i] - w1[j]));
        if (min_pair < thr) return false;
        for (size_t k = 0; k < n; ++k) {
            // labels are only trustworthy when each sheet moves by a small
            // fraction of its distance to the neighboring sheets
            double sep = 1e300;
            for (size_t j = 0; j < n; ++j)
                if (j != k) sep = std::min(sep, std::abs(w0[j] - w0[k]));
            if (std::abs(w1[k] - w0[k]) > 0.3 * sep) return false;
            if (std::abs(w1[k] - pred[k]) > 0.25 * min_pair) return false;
        }
    }
    return true;
}

} // namespace detail

/**
 * Analytic continuation of the fiber along a polyline. First-order predictor
 * with dw/dz = -F_z/F_w, full-fiber Newton corrector, adaptive step halving
 * on corrector failure or sheet collision, doubling after five consecutive
 * accepts. Sheet indices are preserved.
 */
inline TrackState continue_along(const Curve& c, const TrackState& start, const Path& path,
                                 const TrackOptions& opt = {}) {
    if (path.waypoints.empty()) return start;
    TrackState st = start;
    if (std::abs(st.z - path.waypoints.front()) >
        1e-9 * std::max(1.0, std::abs(st.z)))
        throw domain_error("continue_along: state does not sit at the path start");
    for (cplx wv : st.w) {
        double res = std::abs(c.F().eval(wv, st.z));
        if (res > 1e-6 * (c.F().scale_at(wv, st.z) + 1e-300))
            throw domain_error("continue_along: start state violates F(w,z)=0");
    }

    double total_len = 0.0;
    for (size_t leg = 1; leg < path.waypoints.size(); ++leg)
        total_len += std::abs(path.waypoints[leg] - path.waypoints[leg - 1]);
    if (total_len == 0.0) return st;

    double h = (st.step_hint > 0.0) ? st.step_hint : total_len / 64.0;
    const double h_floor = opt.min_step_frac * total_len;
    int run = 0;
    std::vector<cplx> next;
    for (size_t leg = 1; leg < path.waypoints.size(); ++leg) {
        const cplx a = path.waypoints[leg - 1];
        const cplx b = path.waypoints[leg];
        const double len = std::abs(b - a);
        if (len == 0.0) continue;
        double s = 0.0; // arc length covered on this leg
        while (s < len) {
            // never outrun the local geometry: steps stay below half the
            // distance to the branch locus
            double cap = 0.5 * c.dist_to_branch(st.z);
            double hh = std::min({h, cap, len - s});
            if (hh < h_floor && len - s > h_floor)
                throw numeric_error("continue_along: path too close to branch point");
            cplx target = a + (s + hh) / len * (b - a);
            if (detail::try_fiber_step(c, st.z, st.w, target, next, opt)) {
                st.z = target;
                st.w = next;
                st.stats.steps++;
                s += hh;
                if (++run >= 5) {
                    h = std::min(2.0 * h, total_len);
                    run = 0;
                }
            } else {
                st.stats.rejects++;
                run = 0;
                h = 0.5 * hh;
                if (h < h_floor)
                    throw numeric_error("continue_along: path too close to branch point");
            }
        }
    }
    st.step_hint = h;
    return st;
}

/// Branch points with their sheet permutations; `perms[j]` corresponds to
/// `branch_points[j]` in the same order as Curve::finite_branch_points().
struct MonodromyData {
    int n = 0;
    std::vector<cplx> branch_points;
    std::vector<std::vector<int>> perms;   // perms[j][k]: sheet k lands on this base sheet
    std::vector<int> perm_infinity;
    std::vector<int> loop_order;           // traversal order used for the product
};

inline std::vector<int> compose() { return {}; }

/// pi_b applied after pi_a.
inline std::vector<int> compose(const std::vector<int>& pi_b, const std::vector<int>& pi_a) {
    std::vector<int> r(pi_a.size());
    for (size_t k = 0; k < pi_a.size(); ++k) r[k] = pi_b[pi_a[k]];
    return r;
}

inline std::vector<int> inverse_perm(const std::vector<int>& pi) {
    std::vector<int> r(pi.size());
    for (size_t k = 0; k < pi.size(); ++k) r[pi[k]] = static_cast<int>(k);
    return r;
}

inline bool is_identity(const std::vector<int>& pi) {
    for (size_t k = 0; k < pi.size(); ++k)
        if (pi[k] != static_cast<int>(k)) return false;
    return true;
}

namespace detail {

// Match a transported fiber against the base fiber; must be an unambiguous
// bijection or the tracking cannot be trusted.
inline std::vector<int> match_to_base(const std::vector<cplx>& end,
                                      const std::vector<cplx>& base) {
    const size_t n = base.size();
    double min_pair = 1e300;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            min_pair = std::min(min_pair, std::abs(base[i] - base[j]));
    std::vector<int> pi(n, -1);
    std::vector<bool> used(n, false);
    for (size_t k = 0; k < n; ++k) {
        double best = 1e300;
        int arg = -1;
        for (size_t j = 0; j < n; ++j) {
            double d = std::abs(end[k] - base[j]);
            if (d < best) {
                best = d;
                arg = static_cast<int>(j);
            }
        }
        if (arg < 0 || best > 0.25 * min_pair || used[arg])
            throw internal_error("monodromy: transported fiber does not match the base fiber");
        used[arg] = true;
        pi[k] = arg;
    }
    return pi;
}

// Detour `from`->`to` around circular obstacles; used for inter-point
// transport where only the endpoint values matter, not the homotopy class.
struct Disk {
    cplx center;
    double radius;
};

inline double dist_point_segment(cplx p, cplx a, cplx b) {
    cplx ab = b - a;
    double L2 = std::norm(ab);
    if (L2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(ab)).real() / L2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

inline void route_rec(cplx a, cplx b, const std::vector<Disk>& obstacles, int depth,
                      std::vector<cplx>& out) {
    int worst = -1;
    double worst_pen = 0.0;
    for (size_t i = 0; i < obstacles.size(); ++i) {
        if (std::abs(a - obstacles[i].center) < 1e-12 ||
            std::abs(b - obstacles[i].center) < 1e-12)
            continue;
        double d = dist_point_segment(obstacles[i].center, a, b);
        double pen = obstacles[i].radius - d;
        if (pen > worst_pen) {
            worst_pen = pen;
            worst = static_cast<int>(i);
        }
    }
    if (worst < 0 || depth <= 0) {
        out.push_back(b);
        return;
    }
    const Disk& o = obstacles[worst];
    cplx ab = b - a;
    double t = std::clamp((((o.center - a) * std::conj(ab)).real()) / std::norm(ab), 0.0, 1.0);
    cplx proj = a + t * ab;
    cplx nrm = proj - o.center;
    if (std::abs(nrm) < 1e-12 * std::max(1.0, o.radius))
        nrm = ab * cplx(0.0, 1.0); // segment hits the center: pick the left side
    nrm /= std::abs(nrm);
    cplx via = o.center + nrm * (1.6 * o.radius);
    route_rec(a, via, obstacles, depth - 1, out);
    route_rec(via, b, obstacles, depth - 1, out);
}

inline std::vector<cplx> route_avoiding(cplx a, cplx b, const std::vector<Disk>& obstacles) {
    std::vector<cplx> out = {a};
    route_rec(a, b, obstacles, 16, out);
    return out;
}

} // namespace detail

/**
 * Monodromy permutation at every finite branch point: the fiber is carried
 * from the base point around a circle of one third of the distance to the
 * nearest other branch point, entered along a straight spoke. The spokes
 * must clear all other loop circles, which is arranged by perturbing the
 * base point; this keeps the loops an ordered system of radial generators so
 * that the relation pi_infinity o (product of finite loops) = id holds. The
 * permutation at infinity is that inverse product, cross-checked against a
 * directly tracked circle enclosing the whole branch locus.
 */
inline MonodromyData monodromy(const Curve& c, const TrackOptions& opt = {}) {
    MonodromyData md;
    md.n = c.sheets();
    const auto& bps = c.finite_branch_points();
    for (const auto& q : bps) md.branch_points.push_back(q.z);
    const int m = static_cast<int>(bps.size());

    std::vector<int> ident(md.n);
    for (int k = 0; k < md.n; ++k) ident[k] = k;
    if (m == 0) {
        md.perm_infinity = ident;
        return md;
    }

    // Loop radii default to a third of the distance to the nearest other
    // branch point. Each spoke from the base must clear every other loop
    // circle so the loops form an ordered system of disjoint simple
    // generators: circles blocking a spoke are shrunk, and if that is not
    // enough the base point is perturbed.
    std::vector<double> radius0(m);
    for (int j = 0; j < m; ++j) {
        double d = 1e300;
        for (int k = 0; k < m; ++k)
            if (k != j) d = std::min(d, std::abs(bps[j].z - bps[k].z));
        if (m == 1) d = 3.0 * std::max(1.0, std::abs(bps[0].z));
        radius0[j] = d / 3.0;
    }

    cplx centroid = 0.0;
    for (const auto& q : bps) centroid += q.z;
    centroid /= double(m);
    double spread = 0.0;
    for (const auto& q : bps) spread = std::max(spread, std::abs(q.z - centroid));
    double sc = std::max(1.0, spread);

    std::vector<double> radius;
    auto try_geometry = [&](cplx zb) {
        if (c.dist_to_branch(zb) <= c.margin()) return false;
        radius = radius0;
        double floor_r = 3.0 * c.margin();
        for (int round = 0; round < 80; ++round) {
            int bad = -1;
            for (int j = 0; j < m && bad < 0; ++j) {
                cplx entry = bps[j].z + radius[j] * (zb - bps[j].z) / std::abs(zb - bps[j].z);
                for (int k = 0; k < m; ++k) {
                    if (k == j) continue;
                    if (detail::dist_point_segment(bps[k].z, zb, entry) <
                        radius[k] + 0.5 * c.margin()) {
                        bad = k;
                        break;
                    }
                }
            }
            if (bad < 0) return true;
            if (radius[bad] <= floor_r) return false;
            radius[bad] = std::max(floor_r, radius[bad] * 0.75);
        }
        return false;
    };

    cplx base = c.base_point();
    bool ok = try_geometry(base);
    for (int attempt = 0; attempt < 120 && !ok; ++attempt) {
        double dx = sc * 0.41 * ((attempt % 11) - 5);
        double dy = sc * (2.0 + 0.6 * (attempt / 11));
        base = centroid + cplx(dx, dy);
        ok = try_geometry(base);
    }
    if (!ok) throw internal_error("monodromy: could not find a base point with clear spokes");

    // carry the canonical sheet labels over to the loop base so the
    // permutations always refer to the fiber order at the curve base point
    TrackState origin = start_state(c);
    if (std::abs(base - c.base_point()) > 0.0) {
        std::vector<detail::Disk> disks;
        for (const auto& q : bps) disks.push_back({q.z, 3.0 * c.margin()});
        Path to_base;
        to_base.waypoints = detail::route_avoiding(c.base_point(), base, disks);
        origin = continue_along(c, origin, to_base, opt);
    }
    const Fiber& ref = origin.w;

    md.perms.resize(m);
    for (int j = 0; j < m; ++j) {
        cplx u = (base - bps[j].z) / std::abs(base - bps[j].z);
        cplx entry = bps[j].z + radius[j] * u;
        Path loop;
        loop.kind = Path::Kind::loop_around;
        loop.branch_index = j;
        loop.waypoints.push_back(base);
        loop.waypoints.push_back(entry);
        const int arcs = 24;
        double theta0 = std::arg(u);
        for (int t = 1; t <= arcs; ++t)
            loop.waypoints.push_back(bps[j].z +
                                     std::polar(radius[j], theta0 + 2.0 * pi * t / arcs));
        loop.waypoints.push_back(base);
        TrackState end = continue_along(c, origin, loop, opt);
        md.perms[j] = detail::match_to_base(end.w, ref);
    }

    // loops sorted by the angle of the spoke direction define the ordered
    // product around the whole branch locus
    md.loop_order.resize(m);
    std::iota(md.loop_order.begin(), md.loop_order.end(), 0);
    std::sort(md.loop_order.begin(), md.loop_order.end(), [&](int a, int b) {
        double ta = std::arg(bps[a].z - base), tb = std::arg(bps[b].z - base);
        if (ta != tb) return ta < tb;
        return std::abs(bps[a].z - base) < std::abs(bps[b].z - base);
    });
    std::vector<int> prod = ident;
    for (int idx : md.loop_order) prod = compose(md.perms[idx], prod);
    md.perm_infinity = inverse_perm(prod);

    // independent check: a tracked circle enclosing the entire finite branch
    // locus realizes the loop at infinity with reversed orientation
    {
        double R = 0.0;
        for (const auto& q : bps) R = std::max(R, std::abs(q.z - centroid));
        R = 2.0 * R + 2.0 + std::abs(base - centroid);
        Path big;
        cplx entry = centroid + R * (base - centroid) / std::abs(base - centroid);
        big.waypoints.push_back(base);
        big.waypoints.push_back(entry);
        const int arcs = 48;
        double theta0 = std::arg(base - centroid);
        for (int t = 1; t <= arcs; ++t)
            big.waypoints.push_back(centroid + std::polar(R, theta0 + 2.0 * pi * t / arcs));
        big.waypoints.push_back(base);
        TrackState end = continue_along(c, origin, big, opt);
        std::vector<int> big_perm = detail::match_to_base(end.w, ref);
        if (inverse_perm(big_perm) != md.perm_infinity)
            throw internal_error("monodromy: loop product disagrees with the tracked "
                                 "circle at infinity");
    }
    return md;
}

/// Cycle lengths of a permutation grouped as (length, count), ascending.
inline std::vector<std::pair<int, int>> cycle_type(const std::vector<int>& pi) {
    std::vector<bool> seen(pi.size(), false);
    std::vector<int> lengths;
    for (size_t k = 0; k < pi.size(); ++k) {
        if (seen[k]) continue;
        int len = 0;
        size_t cur = k;
        while (!seen[cur]) {
            seen[cur] = true;
            cur = pi[cur];
            ++len;
        }
        lengths.push_back(len);
    }
    std::sort(lengths.begin(), lengths.end());
    std::vector<std::pair<int, int>> out;
    for (int len : lengths) {
        if (!out.empty() && out.back().first == len)
            out.back().second++;
        else
            out.emplace_back(len, 1);
    }
    return out;
}

/// Partition of the sheet count into cycle lengths of the monodromy at
/// infinity; each cycle of length e is one point over z = infinity with
/// ramification index e-1.
inline std::vector<std::pair<int, int>> infinity_structure(const Curve& c,
                                                           const MonodromyData& md) {
    (void)c;
    return cycle_type(md.perm_infinity);
}

inline std::vector<std::pair<int, int>> infinity_structure(const Curve& c) {
    return infinity_structure(c, monodromy(c));
}

/// Finite branch points plus whether z = infinity is a branch point.
inline BranchLocus branch_locus(const Curve& c, const MonodromyData& md) {
    BranchLocus bl;
    bl.finite_points = c.finite_branch_points();
    bl.includes_infinity = !is_identity(md.perm_infinity);
    return bl;
}

inline BranchLocus branch_locus(const Curve& c) { return branch_locus(c, monodromy(c)); }

} // namespace rsurf

#endif // RSURF_TRACKER_HPP
