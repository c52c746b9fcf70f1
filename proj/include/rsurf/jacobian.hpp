#ifndef RSURF_JACOBIAN_HPP
#define RSURF_JACOBIAN_HPP

#include "rsurf/periods.hpp"

namespace rsurf {

/// Period lattice Z^g + Z Z^g of the normalized matrix (I, Z), with its
/// real 2g x 2g embedding.
struct Lattice {
    int g = 0;
    Eigen::MatrixXcd gens;   // g x 2g columns (I, Z)
    Eigen::MatrixXd embed;   // [[Re gens],[Im gens]]
};

inline Lattice make_lattice(const PeriodMatrix& pm) {
    Lattice L;
    L.g = static_cast<int>(pm.Z.rows());
    L.gens.resize(L.g, 2 * L.g);
    L.gens << Eigen::MatrixXcd::Identity(L.g, L.g), pm.Z;
    L.embed.resize(2 * L.g, 2 * L.g);
    L.embed << L.gens.real(), L.gens.imag();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(L.embed);
    if (!lu.isInvertible())
        throw numeric_error("make_lattice: real embedding is singular");
    return L;
}

/// Element of C^g / L: representative plus reduced lattice coordinates.
struct JacobianPoint {
    Eigen::VectorXcd rep;    // = sum coords_i * generator_i
    Eigen::VectorXd coords;  // 2g values in [0, 1)
};

inline JacobianPoint reduce_mod_lattice(const Eigen::VectorXcd& v, const Lattice& L) {
    Eigen::VectorXd rhs(2 * L.g);
    rhs << v.real(), v.imag();
    Eigen::VectorXd x = L.embed.fullPivLu().solve(rhs);
    JacobianPoint p;
    p.coords.resize(2 * L.g);
    for (int i = 0; i < 2 * L.g; ++i) p.coords(i) = x(i) - std::floor(x(i));
    p.rep = L.gens * p.coords.cast<cplx>();
    return p;
}

/// Max-norm of the shortest representative, scanning the 3^(2g) neighboring
/// integer shifts of the reduced coordinates.
inline double lattice_distance_to_zero(const JacobianPoint& p, const Lattice& L) {
    const int n = 2 * L.g;
    std::vector<int> shift(n, -1);
    double best = 1e300;
    while (true) {
        Eigen::VectorXd coords = p.coords;
        for (int i = 0; i < n; ++i) coords(i) += shift[i];
        Eigen::VectorXcd rep = L.gens * coords.cast<cplx>();
        best = std::min(best, rep.cwiseAbs().maxCoeff());
        int i = 0;
        while (i < n && shift[i] == 1) shift[i++] = -1;
        if (i == n) break;
        shift[i]++;
    }
    return best;
}

inline bool same_jacobian_point(const JacobianPoint& a, const JacobianPoint& b,
                                const Lattice& L, double tol = 1e-6) {
    return lattice_distance_to_zero(reduce_mod_lattice(a.rep - b.rep, L), L) < tol;
}

/// Everything the Abel-Jacobi machinery needs about one curve.
struct JacobianContext {
    PeriodMatrix pm;
    HomologyBasis hb;
    Lattice L;
    Eigen::MatrixXcd Einv;   // normalized basis eta = Einv * omega
    CurvePoint base;         // Abel-Jacobi base point p0
    double rmax = 1.0;       // scale of the branch locus
};

inline JacobianContext make_jacobian(const Curve& c, const PeriodOptions& opt = {}) {
    JacobianContext ctx;
    ctx.hb = homology_basis(c);
    ctx.pm = period_matrix(c, differential_basis(c), ctx.hb, opt);
    ctx.L = make_lattice(ctx.pm);
    ctx.Einv = ctx.pm.E.fullPivLu().inverse();
    ctx.base = CurvePoint::branch(ctx.hb.points.front());
    for (cplx z : ctx.hb.points) ctx.rmax = std::max(ctx.rmax, std::abs(z));
    return ctx;
}

namespace detail {

// junction between the local chart of a special endpoint and the tracked
// main route: a nearby regular point plus the sheet value reached there
struct EndpointLeg {
    cplx junction;           // regular z to route to
    cplx w_junction;         // sheet value there
    Eigen::VectorXcd integral; // int of eta from the junction to the point
};

// adaptive Gauss-Legendre on [0,1] of the chart-pulled densities
inline Eigen::VectorXcd chart_leg_integral(const HyperChart& ch, cplx t_from, cplx w_from,
                                           const Eigen::MatrixXcd& Einv) {
    const int g = static_cast<int>(Einv.rows());
    static const double gl_x[6] = {0.03376524289842399, 0.16939530676686776,
                                   0.38069040695840155, 0.6193095930415985,
                                   0.8306046932331322,  0.966234757101576};
    static const double gl_w[6] = {0.08566224618958517, 0.18038078652406930,
                                   0.23395696728634552, 0.23395696728634552,
                                   0.18038078652406930, 0.08566224618958517};
    // integrate from t_from down to 0 along a straight t-segment
    std::function<Eigen::VectorXcd(cplx, cplx, cplx, int)> panel =
        [&](cplx ta, cplx wa, cplx tb, int depth) -> Eigen::VectorXcd {
        auto quad = [&](cplx a, cplx wa0, cplx b) {
            std::vector<double> ts(6);
            for (int i = 0; i < 6; ++i) ts[i] = gl_x[i];
            auto samples = ch.segment(a, wa0, b, ts);
            Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(g);
            for (int i = 0; i < 6; ++i) {
                const auto& s = samples[i];
                Eigen::VectorXcd omega(g);
                cplx zp = 1.0;
                for (int j = 0; j < g; ++j) {
                    omega(j) = zp * s.dzdt / s.w;
                    zp *= s.z;
                }
                acc += gl_w[i] * (Einv * omega);
            }
            return Eigen::VectorXcd((b - a) * acc).eval();
        };
        Eigen::VectorXcd whole = quad(ta, wa, tb);
        cplx tm = 0.5 * (ta + tb);
        // sheet value at the midpoint by continuation along the segment
        auto mid = ch.segment(ta, wa, tm, {1.0});
        Eigen::VectorXcd split = quad(ta, wa, tm) + quad(tm, mid[0].w, tb);
        double err = (whole - split).cwiseAbs().maxCoeff();
        if (err < 1e-11 * (1.0 + split.cwiseAbs().maxCoeff()) || depth >= 14) return split;
        return panel(ta, wa, tm, depth + 1) + panel(tm, mid[0].w, tb, depth + 1);
    };
    return panel(t_from, w_from, cplx(0.0), 0);
}

// chart data for an endpoint of an Abel-Jacobi path
inline EndpointLeg endpoint_leg(const Curve& c, const JacobianContext& ctx,
                                const CurvePoint& pt, cplx toward) {
    const int g = static_cast<int>(ctx.Einv.rows());
    EndpointLeg leg;
    if (pt.kind == PointKind::regular) {
        leg.junction = pt.z;
        leg.w_junction = pt.w;
        leg.integral = Eigen::VectorXcd::Zero(g);
        return leg;
    }
    if (pt.kind == PointKind::branch) {
        double rho = 0.3 * c.min_branch_distance();
        cplx dir = toward - pt.z;
        dir = (std::abs(dir) < 1e-12) ? cplx(1.0) : dir / std::abs(dir);
        leg.junction = pt.z + rho * dir;
        HyperChart ch = HyperChart::branch(c, pt.z);
        cplx t1 = std::sqrt(rho) * std::sqrt(dir); // principal roots
        leg.w_junction = ch.w_canonical(t1);
        leg.integral = chart_leg_integral(ch, t1, leg.w_junction, ctx.Einv);
        return leg;
    }
    // infinity: enter along the positive real ray of the chart parameter
    HyperChart ch = HyperChart::infinity(c, pt.inf_index);
    bool odd = c.hyper_p().degree() % 2 == 1;
    double R = 8.0 * ctx.rmax;
    double t1 = odd ? 1.0 / std::sqrt(R) : 1.0 / R;
    leg.junction = ch.z_of(t1);
    leg.w_junction = ch.w_canonical(t1);
    leg.integral = chart_leg_integral(ch, t1, leg.w_junction, ctx.Einv);
    return leg;
}

inline std::vector<rsurf::detail::Disk> branch_obstacles(const Curve& c) {
    std::vector<rsurf::detail::Disk> disks;
    double rho = std::min(0.25 * c.min_branch_distance(), 0.5);
    for (const auto& q : c.finite_branch_points()) disks.push_back({q.z, rho});
    return disks;
}

} // namespace detail

/**
 * Abel-Jacobi image of a divisor: sum of n_p int_{p0}^{p} eta over the
 * support, computed along tracked polylines that detour around the branch
 * disks, with singular endpoints integrated in their local charts. The
 * result is reduced modulo the period lattice; for degree-zero divisors the
 * base point drops out.
 */
inline JacobianPoint abel_jacobi(const Curve& c, const JacobianContext& ctx,
                                 const Divisor& D) {
    const int g = ctx.L.g;
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(g);
    auto obstacles = detail::branch_obstacles(c);

    detail::EndpointLeg base_leg =
        detail::endpoint_leg(c, ctx, ctx.base, ctx.base.z + cplx(0.731, 0.532));

    for (const auto& [pt, n] : D.terms()) {
        cplx toward = (pt.kind == PointKind::infinity_pt) ? cplx(ctx.rmax, 0.0)
                                                          : base_leg.junction;
        detail::EndpointLeg leg = detail::endpoint_leg(c, ctx, pt, toward);
        // route between the junctions on the tracked cover
        std::vector<cplx> wps = rsurf::detail::route_avoiding(base_leg.junction,
                                                              leg.junction, obstacles);
        Fiber start = {base_leg.w_junction, -base_leg.w_junction};
        TrackState st{base_leg.junction, start, 0.0, {}};
        auto dens = [&](cplx z, cplx w, int j) {
            cplx omega = 0.0, zp = 1.0;
            for (int l = 0; l < g; ++l) {
                omega += ctx.Einv(j, l) * zp;
                zp *= z;
            }
            return omega / w; // Einv row j applied to (1, z, ..., z^{g-1})/w
        };
        Eigen::VectorXcd main = Eigen::VectorXcd::Zero(g);
        {
            auto vals = rsurf::detail::tracked_path_integrals(c, wps, st, g, dens, {}, 3);
            for (int j = 0; j < g; ++j) main(j) = vals[j];
        }
        // The tracked sheet at the far junction must be the one the target
        // chart expects. If it is the conjugate, redo the whole path through
        // the involution: starting the base leg and the route on the other
        // sheet flips both integrals' signs and lands correctly.
        cplx expect = (pt.kind == PointKind::regular) ? pt.w : leg.w_junction;
        bool matched = std::abs(st.w[0] - expect) <= std::abs(st.w[0] + expect);
        if (matched)
            acc += double(n) * (-base_leg.integral + main + leg.integral);
        else
            acc += double(n) * (base_leg.integral - main + leg.integral);
    }
    return reduce_mod_lattice(acc, ctx.L);
}

/// Abel's criterion: the image of (f) must be a lattice point.
inline std::pair<JacobianPoint, bool> abel_check(const Curve& c, const JacobianContext& ctx,
                                                 const CurveFunction& f, double tol = 1e-6) {
    Divisor d = principal_divisor(c, f);
    JacobianPoint img = abel_jacobi(c, ctx, d);
    return {img, lattice_distance_to_zero(img, ctx.L) < tol};
}

/**
 * General-divisor test for positive divisors of degree g: the confluent
 * determinant det(omega_j at p_k) (derivative columns for repeated points)
 * must be nonzero after column conditioning.
 */
inline bool is_general(const Curve& c, const Divisor& D, double threshold = 1e-6) {
    const int g = curve_genus(c);
    if (!D.is_positive() || D.degree() != g)
        throw domain_error("is_general: divisor must be positive of degree g");
    Eigen::MatrixXcd table = taylor_table(c, D);
    double gmax = table.cwiseAbs().maxCoeff();
    if (gmax == 0.0) return false;
    for (int j = 0; j < table.cols(); ++j) {
        double m = table.col(j).cwiseAbs().maxCoeff();
        if (m > 1e-10 * gmax) table.col(j) /= m;
    }
    return std::abs(Eigen::PartialPivLU<Eigen::MatrixXcd>(table).determinant()) > threshold;
}

namespace detail {

// positive degree-g divisor at regular points as coordinate vectors
struct WorkingDivisor {
    std::vector<cplx> z, w;
};

inline WorkingDivisor to_working(const Curve& c, const Divisor& D) {
    WorkingDivisor wd;
    for (const auto& [pt, n] : D.terms()) {
        if (pt.kind != PointKind::regular)
            throw domain_error("jacobi_invert: seed support must be at regular points");
        for (int i = 0; i < n; ++i) {
            wd.z.push_back(pt.z);
            wd.w.push_back(pt.w);
        }
    }
    return wd;
}

} // namespace detail

/// phi_g: Abel-Jacobi image of a positive degree-g divisor (with the context
/// base point), the map the inversion drives.
inline JacobianPoint abel_jacobi_positive(const Curve& c, const JacobianContext& ctx,
                                          const Divisor& D) {
    return abel_jacobi(c, ctx, D);
}

/**
 * Jacobi inversion: finds a positive degree-g divisor whose Abel-Jacobi
 * image is `target`, starting from a general seed divisor. The target is
 * approached along N equal increments in C^g; each increment is solved by a
 * damped Newton step on the g unknown z-coordinates, whose Jacobian is the
 * matrix of normalized differentials at the current points. N doubles on
 * stall.
 */
inline Divisor jacobi_invert(const Curve& c, const JacobianContext& ctx,
                             const JacobianPoint& target, const Divisor& seed,
                             int increments = 16, double tol = 1e-9) {
    const int g = ctx.L.g;
    if (!is_general(c, seed)) throw domain_error("jacobi_invert: seed divisor is not general");

    JacobianPoint phi_seed = abel_jacobi(c, ctx, seed);
    // shortest representative of target - phi(seed)
    Eigen::VectorXcd delta;
    {
        JacobianPoint diff = reduce_mod_lattice(target.rep - phi_seed.rep, ctx.L);
        const int n = 2 * g;
        std::vector<int> shift(n, -1);
        double best = 1e300;
        while (true) {
            Eigen::VectorXd coords = diff.coords;
            for (int i = 0; i < n; ++i) coords(i) += shift[i];
            Eigen::VectorXcd rep = ctx.L.gens * coords.cast<cplx>();
            double nn = rep.norm();
            if (nn < best) {
                best = nn;
                delta = rep;
            }
            int i = 0;
            while (i < n && shift[i] == 1) shift[i++] = -1;
            if (i == n) break;
            shift[i]++;
        }
    }

    auto eta_at = [&](cplx z, cplx w, int j) {
        cplx omega = 0.0, zp = 1.0;
        for (int l = 0; l < g; ++l) {
            omega += ctx.Einv(j, l) * zp;
            zp *= z;
        }
        return omega / w;
    };

    for (int N = increments; N <= 512; N *= 2) {
        detail::WorkingDivisor wd = detail::to_working(c, seed);
        Eigen::VectorXcd accumulated = Eigen::VectorXcd::Zero(g);
        bool failed = false;
        for (int step = 1; step <= N && !failed; ++step) {
            Eigen::VectorXcd goal = delta * (double(step) / N);
            double prev_res = 1e300;
            int stall = 0;
            for (int it = 0; it < 60; ++it) {
                Eigen::VectorXcd resid = accumulated - goal;
                double rn = resid.norm();
                if (rn < tol) break;
                if (rn >= prev_res * 0.9) {
                    if (++stall > 8) {
                        failed = true;
                        break;
                    }
                } else
                    stall = 0;
                prev_res = rn;
                Eigen::MatrixXcd J(g, g);
                for (int j = 0; j < g; ++j)
                    for (int k = 0; k < g; ++k) J(j, k) = eta_at(wd.z[k], wd.w[k], j);
                Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
                if (!lu.isInvertible()) {
                    failed = true;
                    break;
                }
                Eigen::VectorXcd dz = lu.solve(-resid);
                // damp: never move a point by more than a fraction of its
                // clearance from the branch locus
                double damp = 1.0;
                for (int k = 0; k < g; ++k) {
                    double lim = 0.35 * c.dist_to_branch(wd.z[k]);
                    if (std::abs(dz(k)) * damp > lim) damp = lim / std::abs(dz(k));
                }
                for (int k = 0; k < g; ++k) {
                    cplx move = dz(k) * damp;
                    if (std::abs(move) == 0.0) continue;
                    std::vector<cplx> seg = {wd.z[k], wd.z[k] + move};
                    TrackState st{wd.z[k], {wd.w[k], -wd.w[k]}, 0.0, {}};
                    auto vals = rsurf::detail::tracked_path_integrals(c, seg, st, g, eta_at);
                    for (int j = 0; j < g; ++j) accumulated(j) += vals[j];
                    wd.z[k] = st.z;
                    wd.w[k] = st.w[0];
                }
            }
            if (!failed) {
                Eigen::VectorXcd resid = accumulated - goal;
                if (resid.norm() > 1e3 * tol) failed = true;
            }
        }
        if (!failed) {
            Divisor out;
            for (int k = 0; k < g; ++k) {
                cplx wplus = std::sqrt(c.hyper_p().eval(wd.z[k]));
                int sheet = (std::abs(wd.w[k] - wplus) <= std::abs(wd.w[k] + wplus)) ? 1 : 2;
                out.add(CurvePoint::regular(wd.z[k], sheet, wd.w[k]), 1);
            }
            return out;
        }
    }
    throw numeric_error("jacobi_invert: Newton continuation stalled");
}

} // namespace rsurf

#endif // RSURF_JACOBIAN_HPP
