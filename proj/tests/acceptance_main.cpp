// Acceptance suite: every criterion prints one [PASS]/[FAIL] line; the exit
// code is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <random>

#include "rsurf/rsurf.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace rsurf;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, name,
                detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
void genus_golden() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    auto expect = [&](const char* label, const Curve& c, int want) {
        int got = genus(c);
        if (got != want) {
            ok = false;
            detail += std::string(label) + " got " + std::to_string(got) + " want " +
                      std::to_string(want) + "; ";
        }
    };
    expect("elliptic lambda=2", testing::elliptic_lambda(2.0), 1);
    expect("w^2=z^5-1", testing::hyper_z5(), 2);
    expect("w^4=z^4-1", testing::quartic_z4(), 3);
    expect("trigonal", testing::trigonal(), 4);
    expect("fermat3", testing::fermat(3), 1);
    expect("fermat4", testing::fermat(4), 3);
    expect("fermat5", testing::fermat(5), 6);
    double dt = seconds_since(t0);
    if (dt >= 30.0) {
        ok = false;
        detail += "runtime " + fmt(dt) + "s over budget; ";
    }
    if (detail.empty()) detail = "7 curves exact, " + fmt(dt) + "s";
    report(1, "genus golden suite", ok, detail);
}

// ---------------------------------------------------------------- criterion 2
void resultant_identities() {
    std::mt19937_64 rng(20240811);
    std::uniform_int_distribution<int> cdist(-5, 5), ddist(1, 6);
    auto random_poly = [&]() {
        int d = ddist(rng);
        std::vector<cplx> c(d + 1);
        for (auto& a : c) a = double(cdist(rng));
        if (c.back() == cplx(0.0)) c.back() = 1.0;
        return UniPoly(c);
    };
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    int exact_checked = 0;
    for (int trial = 0; trial < 500 && ok; ++trial) {
        UniPoly f = random_poly(), g = random_poly();
        cplx det = resultant(f, g);
        double scale = std::max(1.0, std::abs(det));

        cplx prod = std::pow(f.lead(), g.degree()) * std::pow(g.lead(), f.degree());
        for (cplx a : root_values(f))
            for (cplx b : root_values(g)) prod *= (a - b);
        cplx via_g = std::pow(f.lead(), g.degree());
        for (cplx a : root_values(f)) via_g *= g.eval(a);
        double sgn = (static_cast<long long>(f.degree()) * g.degree()) % 2 == 0 ? 1.0 : -1.0;
        cplx via_f = sgn * std::pow(g.lead(), f.degree());
        for (cplx b : root_values(g)) via_f *= f.eval(b);

        for (cplx v : {prod, via_g, via_f})
            worst = std::max(worst, std::abs(det - v) / scale);
        if (worst >= 1e-8) {
            ok = false;
            detail = "product formula drift " + fmt(worst) + " at trial " +
                     std::to_string(trial);
        }

        // exact path: Res(f, f') = (-1)^{m(m-1)/2} a0 Disc(f), identically
        auto r = resultant_exact(f, f.derivative());
        auto d = discriminant_exact(f);
        if (!r || !d) {
            ok = false;
            detail = "exact path unavailable on integer input";
            break;
        }
        GaussInt rhs = *d * as_gaussian_coeffs(f)->back();
        if ((static_cast<long long>(f.degree()) * (f.degree() - 1) / 2) % 2 != 0)
            rhs = -rhs;
        if (!(*r == rhs)) {
            ok = false;
            detail = "exact identity failed at trial " + std::to_string(trial);
            break;
        }
        ++exact_checked;
    }
    if (ok)
        detail = "500 pairs, worst relative drift " + fmt(worst) + ", " +
                 std::to_string(exact_checked) + " exact identities";
    report(2, "resultant and discriminant identities", ok, detail);
}

// ---------------------------------------------------------------- criterion 3
void bilinear_relations() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(31415);
    bool ok = true;
    std::string detail;
    double worst_bl = 0.0, worst_sym = 0.0, worst_eig = 1e300;
    for (int t = 0; t < 20 && ok; ++t) {
        int g = 1 + t % 3;
        Curve c = testing::random_hyperelliptic(rng, g, t % 2 == 0);
        try {
            PeriodMatrix pm = period_matrix(c);
            worst_bl = std::max(worst_bl, pm.bilinear_residual);
            worst_sym = std::max(worst_sym, pm.symmetry_residual);
            Eigen::MatrixXcd h =
                cplx(0, 1) * (pm.E * pm.F.adjoint() - pm.F * pm.E.adjoint());
            double herm = (h - h.adjoint()).norm() / std::max(1.0, h.norm());
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
            worst_eig = std::min(worst_eig, es.eigenvalues().minCoeff());
            if (pm.bilinear_residual >= 1e-6 || pm.symmetry_residual >= 1e-8 ||
                es.eigenvalues().minCoeff() <= 0.0 || herm >= 1e-8 ||
                pm.min_imag_eigenvalue <= 0.0) {
                ok = false;
                detail = "violation at curve " + std::to_string(t);
            }
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception at curve ") + std::to_string(t) + ": " + e.what();
        }
    }
    double dt = seconds_since(t0);
    if (dt >= 120.0) {
        ok = false;
        detail += " runtime " + fmt(dt) + "s over budget";
    }
    if (ok)
        detail = "20 curves, worst |OQO^T|/|O|^2 " + fmt(worst_bl) + ", |Z-Z^T| " +
                 fmt(worst_sym) + ", min eig " + fmt(worst_eig) + ", " + fmt(dt) + "s";
    report(3, "Riemann bilinear relations", ok, detail);
}

// ---------------------------------------------------------------- criterion 4
void legendre_point() {
    // oracle: complementary complete elliptic integrals at k^2 = 1/2 agree,
    // recomputed by dense midpoint quadrature, forcing tau = i exactly
    auto K_of = [](double k2) {
        const int N = 400000;
        double acc = 0.0;
        for (int i = 0; i < N; ++i) {
            double phi = (i + 0.5) * (pi / 2) / N;
            double s = std::sin(phi);
            acc += 1.0 / std::sqrt(1.0 - k2 * s * s);
        }
        return acc * (pi / 2) / N;
    };
    double K = K_of(0.5), Kp = K_of(1.0 - 0.5);
    bool oracle_ok = std::abs(K - Kp) < 1e-10 * K;

    Curve c = testing::elliptic_lambda(0.5);
    PeriodMatrix pm = period_matrix(c);
    cplx tau = pm.Z(0, 0);
    double err = std::abs(tau - cplx(0.0, Kp / K));
    bool ok = oracle_ok && err < 1e-6;
    report(4, "Legendre point lambda = 1/2", ok,
           "|tau - i| = " + fmt(std::abs(tau - cplx(0.0, 1.0))) + ", oracle K=K' to " +
               fmt(std::abs(K - Kp) / K));
}

// ---------------------------------------------------------------- criterion 5
void residue_sums() {
    std::mt19937_64 rng(5151);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    int done = 0, attempts = 0;
    while (done < 50 && attempts < 500 && ok) {
        ++attempts;
        Curve c = testing::random_hyperelliptic(rng, 1 + attempts % 2, attempts % 3 != 0);
        CurveFunction f;
        f.R.num = UniPoly({cplx(u(rng), u(rng)), cplx(u(rng), u(rng))});
        f.R.den = UniPoly({cplx(u(rng), u(rng)), 1.0});
        f.S.num = UniPoly({cplx(u(rng), u(rng)), cplx(u(rng), u(rng))});
        f.S.den = UniPoly({cplx(u(rng), u(rng)), 1.0});
        bool conditioned = true;
        for (const auto& den : {f.R.den, f.S.den})
            for (const auto& cl : roots(den))
                if (c.dist_to_branch(cl.center) < 4.0 * c.margin()) conditioned = false;
        if (!conditioned) continue;
        ++done;
        try {
            ResidueReport rep = residues(c, f);
            worst = std::max(worst, std::abs(rep.total));
            if (std::abs(rep.total) >= 1e-8) {
                ok = false;
                detail = "sum " + fmt(std::abs(rep.total)) + " at differential " +
                         std::to_string(done);
            }
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
    }
    if (done < 50) {
        ok = false;
        detail = "only " + std::to_string(done) + " differentials generated";
    }
    if (ok) detail = "50 differentials, worst |sum| " + fmt(worst);
    report(5, "residue sums vanish", ok, detail);
}

// ---------------------------------------------------------------- criterion 6
void riemann_roch_consistency() {
    Curve c = testing::hyper_z5();
    const int g = curve_genus(c);
    std::vector<CurvePoint> support;
    for (const auto& b : c.finite_branch_points()) support.push_back(CurvePoint::branch(b.z));
    support.push_back(CurvePoint::infinity(0));

    bool ok = true;
    std::string detail;
    int cases = 0;
    // enumerate all nonnegative coefficient vectors with degree 1..6
    std::vector<int> n(support.size(), 0);
    std::function<void(size_t, int)> walk = [&](size_t idx, int left) {
        if (!ok) return;
        if (idx == support.size()) {
            Divisor d;
            for (size_t i = 0; i < support.size(); ++i)
                if (n[i] > 0) d.add(support[i], n[i]);
            if (d.degree() == 0) return;
            ++cases;
            int got = dim_L(c, d);
            int want = testing::dim_L_exact(c, d);
            if (got != want) {
                ok = false;
                detail = "dim L mismatch " + std::to_string(got) + " vs " +
                         std::to_string(want) + " at deg " + std::to_string(d.degree());
                return;
            }
            if (chi(d, g) != d.degree() - g + 1) {
                ok = false;
                detail = "chi identity failed";
                return;
            }
            if (got - dim_I_minus(c, d) != d.degree() - g + 1) {
                ok = false;
                detail = "Riemann-Roch closure failed";
            }
            return;
        }
        for (int k = 0; k <= left; ++k) {
            n[idx] = k;
            walk(idx + 1, left - k);
        }
        n[idx] = 0;
    };
    walk(0, 6);

    // deg K = 2g-2 by direct order counting of dz/w
    auto density = [](cplx, cplx w) { return 1.0 / w; };
    int total = 0;
    for (const auto& b : c.finite_branch_points())
        total += differential_order(c, CurvePoint::branch(b.z), density,
                                    std::sqrt(0.25 * c.min_branch_distance()));
    double rmax = 1.0;
    for (const auto& b : c.finite_branch_points()) rmax = std::max(rmax, std::abs(b.z));
    total += differential_order(c, CurvePoint::infinity(0), density,
                                1.0 / std::sqrt(8.0 * rmax));
    if (total != canonical_degree(g)) {
        ok = false;
        detail = "deg(dz/w) = " + std::to_string(total);
    }
    if (ok)
        detail = std::to_string(cases) + " divisors match the monomial count, deg K = " +
                 std::to_string(total);
    report(6, "Riemann-Roch consistency on genus 2", ok, detail);
}

// ---------------------------------------------------------------- criterion 7
void abel_suite() {
    bool ok = true;
    std::string detail;
    double worst_principal = 0.0, best_probe = 1e300;
    std::mt19937_64 rng(7777);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int which = 0; which < 2 && ok; ++which) {
        Curve c = which == 0 ? testing::elliptic_lambda(2.0) : testing::hyper_z5();
        JacobianContext ctx = make_jacobian(c);
        std::vector<CurveFunction> funcs;
        {
            CurveFunction fz;
            fz.R.num = UniPoly({0.0, 1.0});
            funcs.push_back(fz);
            CurveFunction fw;
            fw.S.num = UniPoly::constant(1.0);
            funcs.push_back(fw);
            CurveFunction fc;
            fc.R.num = UniPoly({cplx(-0.41, -0.57), 1.0});
            funcs.push_back(fc);
        }
        for (const auto& f : funcs) {
            auto [img, principal] = abel_check(c, ctx, f);
            double dist = lattice_distance_to_zero(img, ctx.L);
            worst_principal = std::max(worst_principal, dist);
            if (!principal) {
                ok = false;
                detail = "principal divisor image at distance " + fmt(dist);
            }
        }
        int probes = 0;
        while (probes < 4 && ok) {
            cplx zp(u(rng), u(rng)), zq(u(rng), u(rng));
            if (c.dist_to_branch(zp) < 4 * c.margin() ||
                c.dist_to_branch(zq) < 4 * c.margin() || std::abs(zp - zq) < 0.3)
                continue;
            ++probes;
            Divisor d;
            d.add(CurvePoint::regular(zp, 1, c.fiber(zp)[0]), 1);
            d.add(CurvePoint::regular(zq, 1, c.fiber(zq)[0]), -1);
            double dist = lattice_distance_to_zero(abel_jacobi(c, ctx, d), ctx.L);
            best_probe = std::min(best_probe, dist);
            if (dist <= 1e-3) {
                ok = false;
                detail = "non-principal probe fell to distance " + fmt(dist);
            }
        }
    }
    if (ok)
        detail = "principal images within " + fmt(worst_principal) +
                 ", non-principal probes above " + fmt(best_probe);
    report(7, "Abel criterion on genus 1 and 2", ok, detail);
}

// ---------------------------------------------------------------- criterion 8
void jacobi_inversion() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    std::mt19937_64 rng(2468);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int which = 0; which < 2 && ok; ++which) {
        Curve c = which == 0 ? testing::elliptic_lambda(2.0) : testing::hyper_z5();
        JacobianContext ctx = make_jacobian(c);
        const int g = ctx.L.g;
        Divisor seed, seed2;
        if (which == 0) {
            seed.add(CurvePoint::regular(cplx(0.5, 1.4), 1, c.fiber(cplx(0.5, 1.4))[0]), 1);
            seed2.add(CurvePoint::regular(cplx(-0.8, 1.1), 2, c.fiber(cplx(-0.8, 1.1))[1]), 1);
        } else {
            seed.add(CurvePoint::regular(cplx(0.45, 0.85), 1, c.fiber(cplx(0.45, 0.85))[0]), 1);
            seed.add(CurvePoint::regular(cplx(-0.45, 0.35), 2, c.fiber(cplx(-0.45, 0.35))[1]),
                     1);
            seed2.add(CurvePoint::regular(cplx(1.2, 0.7), 2, c.fiber(cplx(1.2, 0.7))[1]), 1);
            seed2.add(CurvePoint::regular(cplx(-0.3, -1.1), 1, c.fiber(cplx(-0.3, -1.1))[0]),
                      1);
        }
        for (int t = 0; t < 10 && ok; ++t) {
            Eigen::VectorXd coords(2 * g);
            for (int i = 0; i < 2 * g; ++i) coords(i) = u(rng);
            JacobianPoint target;
            target.coords = coords;
            target.rep = ctx.L.gens * coords.cast<cplx>();
            try {
                Divisor out = jacobi_invert(c, ctx, target, seed);
                JacobianPoint img = abel_jacobi(c, ctx, out);
                double res = lattice_distance_to_zero(
                    reduce_mod_lattice(img.rep - target.rep, ctx.L), ctx.L);
                worst = std::max(worst, res);
                if (res >= 1e-6) {
                    ok = false;
                    detail = "inversion residual " + fmt(res);
                    break;
                }
                Divisor out2 = jacobi_invert(c, ctx, target, seed2);
                std::vector<cplx> za, zb;
                for (const auto& [pt, nn] : out.terms())
                    for (int i = 0; i < nn; ++i) za.push_back(pt.z);
                for (const auto& [pt, nn] : out2.terms())
                    for (int i = 0; i < nn; ++i) zb.push_back(pt.z);
                auto lex = [](cplx x, cplx y) {
                    if (x.real() != y.real()) return x.real() < y.real();
                    return x.imag() < y.imag();
                };
                std::sort(za.begin(), za.end(), lex);
                std::sort(zb.begin(), zb.end(), lex);
                for (size_t i = 0; i < za.size(); ++i)
                    if (std::abs(za[i] - zb[i]) > 1e-5) {
                        ok = false;
                        detail = "re-inversion divisor mismatch";
                    }
            } catch (const std::exception& e) {
                ok = false;
                detail = std::string("exception: ") + e.what();
            }
        }
    }
    double dt = seconds_since(t0);
    if (dt >= 120.0) {
        ok = false;
        detail += " runtime " + fmt(dt) + "s over budget";
    }
    if (ok) detail = "20 targets, worst residual " + fmt(worst) + ", " + fmt(dt) + "s";
    report(8, "Jacobi inversion round trips", ok, detail);
}

// ---------------------------------------------------------------- criterion 9
void monodromy_properties() {
    bool ok = true;
    std::string detail;
    std::vector<Curve> corpus;
    corpus.push_back(testing::elliptic_lambda(2.0));
    corpus.push_back(testing::hyper_z5());
    corpus.push_back(testing::quartic_z4());
    corpus.push_back(testing::fermat(4));
    corpus.push_back(testing::trigonal());
    std::mt19937_64 rng(999);
    corpus.push_back(testing::random_hyperelliptic(rng, 2));
    corpus.push_back(testing::random_hyperelliptic(rng, 3, false));

    double worst_rt = 0.0;
    for (size_t i = 0; i < corpus.size() && ok; ++i) {
        const Curve& c = corpus[i];
        try {
            // product relation, exact as permutations (also cross-checked
            // against the tracked circle at infinity inside monodromy)
            MonodromyData md = monodromy(c);
            std::vector<int> prod(md.n);
            std::iota(prod.begin(), prod.end(), 0);
            for (int idx : md.loop_order) prod = compose(md.perms[idx], prod);
            if (!is_identity(compose(md.perm_infinity, prod))) {
                ok = false;
                detail = "product relation broken on corpus curve " + std::to_string(i);
                break;
            }
            // null-homotopic round trip
            cplx corner = c.base_point() + cplx(1.0, 1.0);
            TrackState s{corner, c.fiber(corner), 0.0, {}};
            Path loop;
            loop.waypoints = {corner, corner + cplx(1.5, 0.0), corner + cplx(1.5, 1.5),
                              corner + cplx(0.0, 1.5), corner};
            TrackState e = continue_along(c, s, loop);
            for (size_t k = 0; k < s.w.size(); ++k)
                worst_rt = std::max(worst_rt, std::abs(e.w[k] - s.w[k]));
            if (worst_rt >= 1e-8) {
                ok = false;
                detail = "round trip drift " + fmt(worst_rt);
            }
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception on corpus curve ") + std::to_string(i) + ": " +
                     e.what();
        }
    }
    // Weierstrass point count on genus-2 hyperelliptic curves
    if (ok) {
        for (bool odd : {true, false}) {
            std::mt19937_64 r2(4242 + odd);
            Curve c = odd ? testing::hyper_z5() : testing::random_hyperelliptic(r2, 2, false);
            auto pts = weierstrass_points(c);
            if (pts.size() != 6) {
                ok = false;
                detail = "Weierstrass count " + std::to_string(pts.size());
            }
        }
    }
    if (ok)
        detail = std::to_string(corpus.size()) + " curves, round trips within " +
                 fmt(worst_rt) + ", Weierstrass counts 6";
    report(9, "monodromy and Weierstrass properties", ok, detail);
}

} // namespace

int main() {
    auto t0 = Clock::now();
    genus_golden();
    resultant_identities();
    bilinear_relations();
    legendre_point();
    residue_sums();
    riemann_roch_consistency();
    abel_suite();
    jacobi_inversion();
    monodromy_properties();
    std::printf("%d/9 criteria passed in %.1fs\n", 9 - failures, seconds_since(t0));
    return failures;
}
