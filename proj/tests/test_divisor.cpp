#include <catch2/catch_amalgamated.hpp>

#include "rsurf/divisor.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace rsurf;

namespace {

CurveFunction fn_z_minus(cplx a) {
    CurveFunction f;
    f.R.num = UniPoly({-a, 1.0});
    return f;
}

CurveFunction fn_w() {
    CurveFunction f;
    f.S.num = UniPoly::constant(1.0);
    return f;
}

CurveFunction fn_const(cplx a) {
    CurveFunction f;
    f.R.num = UniPoly::constant(a);
    return f;
}

// (R1 + S1 w)(R2 + S2 w) = R1R2 + S1S2 p + (R1S2 + R2S1) w, poly parts only
CurveFunction fn_mul(const Curve& c, const CurveFunction& a, const CurveFunction& b) {
    CurveFunction r;
    r.R.num = a.R.num * b.R.num + a.S.num * b.S.num * c.hyper_p();
    r.S.num = a.R.num * b.S.num + a.S.num * b.R.num;
    return r;
}

// 1/(R + S w) = (R - S w)/(R^2 - S^2 p), for polynomial R, S
CurveFunction fn_inv(const Curve& c, const CurveFunction& a) {
    UniPoly norm = a.R.num * a.R.num - a.S.num * a.S.num * c.hyper_p();
    CurveFunction r;
    r.R.num = a.R.num;
    r.R.den = norm;
    r.S.num = a.S.num * cplx(-1.0);
    r.S.den = norm;
    return r;
}

int coeff_at(const Divisor& d, const CurvePoint& pt) {
    for (const auto& [q, n] : d.terms())
        if (same_point(q, pt)) return n;
    return 0;
}

Divisor inf_divisor(int n) {
    Divisor d;
    d.add(CurvePoint::infinity(0), n);
    return d;
}

} // namespace

TEST_CASE("divisor degree arithmetic") {
    Divisor d;
    CHECK(d.degree() == 0);
    CurvePoint p = CurvePoint::regular(2.0, 1, 1.0);
    CurvePoint q = CurvePoint::regular(3.0, 1, 2.0);
    d.add(p, 2);
    d.add(q, -2);
    CHECK(d.degree() == 0);
    Divisor e;
    e.add(p, 3);
    e.add(q, 1);
    CHECK(e.degree() == 4);
    CHECK((d + e).degree() == 4);
    CHECK((d - d).empty());
}

TEST_CASE("chi and canonical degree") {
    CHECK(chi(Divisor(), 2) == -1);
    CHECK(chi(2 * 3 - 2, 3) == 3 - 1);
    CHECK(chi(5, 5) == 1);
    CHECK(canonical_degree(0) == -2);
    CHECK(canonical_degree(1) == 0);
    CHECK(canonical_degree(3) == 4);
}

TEST_CASE("divisor of z on the elliptic lambda curve") {
    Curve c = testing::elliptic_lambda(2.0);
    Divisor d = principal_divisor(c, fn_z_minus(0.0));
    CHECK(d.degree() == 0);
    CHECK(coeff_at(d, CurvePoint::branch(0.0)) == 2);
    CHECK(coeff_at(d, CurvePoint::infinity(0)) == -2);
    CHECK(d.terms().size() == 2);
}

TEST_CASE("divisor of w on the elliptic lambda curve") {
    Curve c = testing::elliptic_lambda(2.0);
    Divisor d = principal_divisor(c, fn_w());
    CHECK(d.degree() == 0);
    CHECK(coeff_at(d, CurvePoint::branch(0.0)) == 1);
    CHECK(coeff_at(d, CurvePoint::branch(1.0)) == 1);
    CHECK(coeff_at(d, CurvePoint::branch(2.0)) == 1);
    CHECK(coeff_at(d, CurvePoint::infinity(0)) == -3);
}

TEST_CASE("divisor of a constant is empty") {
    Curve c = testing::elliptic_lambda(2.0);
    CHECK(principal_divisor(c, fn_const(5.0)).empty());
    CHECK_THROWS_AS(principal_divisor(c, CurveFunction{}), domain_error);
}

TEST_CASE("principal divisors have degree zero and respect products") {
    Curve c = testing::hyper_z5();
    std::vector<CurveFunction> family = {fn_z_minus(0.5), fn_z_minus(cplx(0.3, 0.7)), fn_w()};
    for (const auto& f : family) CHECK(principal_divisor(c, f).degree() == 0);

    CurveFunction fg = fn_mul(c, family[0], family[2]);
    Divisor d_fg = principal_divisor(c, fg);
    Divisor d_sum = principal_divisor(c, family[0]) + principal_divisor(c, family[2]);
    CHECK(d_fg.degree() == 0);
    CHECK((d_fg - d_sum).empty());

    Divisor d_inv = principal_divisor(c, fn_inv(c, family[0]));
    CHECK((d_inv + principal_divisor(c, family[0])).empty());
}

TEST_CASE("dim I(-D) on the genus-2 curve w^2 = z^5 - 1") {
    Curve c = testing::hyper_z5();
    CHECK(curve_genus(c) == 2);
    CHECK(dim_I_minus(c, Divisor()) == 2);
    CHECK(dim_I_minus(c, inf_divisor(2)) == 1);

    // generic regular point: dim I(-p) = g - 1
    cplx z0(1.3, 0.4);
    cplx w0 = std::sqrt(c.hyper_p().eval(z0));
    Divisor dp;
    dp.add(CurvePoint::regular(z0, 1, w0), 1);
    CHECK(dim_I_minus(c, dp) == 1);
}

TEST_CASE("dim L on the genus-2 curve") {
    Curve c = testing::hyper_z5();
    CHECK(dim_L(c, Divisor()) == 1);
    CHECK(dim_L(c, inf_divisor(1)) == 1); // Weierstrass gap at infinity
    CHECK(dim_L(c, inf_divisor(2)) == 2); // span {1, z}
    CHECK(dim_L(c, inf_divisor(5)) == 4); // span {1, z, z^2, w}
    Divisor neg;
    neg.add(CurvePoint::infinity(0), -1);
    CHECK_THROWS_AS(dim_L(c, neg), domain_error);
}

TEST_CASE("rank route matches the exact monomial count") {
    Curve c = testing::hyper_z5();
    const auto& bps = c.finite_branch_points();
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<int> pick(0, 5), coeff(0, 3);
    for (int trial = 0; trial < 40; ++trial) {
        Divisor d;
        for (int j = 0; j < 3; ++j) {
            int which = pick(rng);
            int n = coeff(rng);
            if (which == 5)
                d.add(CurvePoint::infinity(0), n);
            else
                d.add(CurvePoint::branch(bps[which].z), n);
        }
        if (d.degree() == 0) continue;
        CHECK(dim_L(c, d) == testing::dim_L_exact(c, d));
    }
}

TEST_CASE("appending a point drops dim I(-D) by zero or one") {
    Curve c = testing::hyper_z5();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    Divisor d;
    int prev = dim_I_minus(c, d);
    for (int j = 0; j < 4; ++j) {
        cplx z0(u(rng), u(rng));
        if (c.dist_to_branch(z0) < 4.0 * c.margin()) continue;
        cplx w0 = std::sqrt(c.hyper_p().eval(z0));
        d.add(CurvePoint::regular(z0, 1, w0), 1);
        int cur = dim_I_minus(c, d);
        CHECK((prev - cur == 0 || prev - cur == 1));
        prev = cur;
    }
}

TEST_CASE("divisor of dz/w has degree 2g-2 by order counting") {
    auto density = [](cplx, cplx w) { return 1.0 / w; };
    for (int deg : {5, 6, 7, 8}) {
        std::mt19937_64 rng(1000 + deg);
        Curve c = hyperelliptic_curve(testing::separated_poly(rng, deg));
        int g = curve_genus(c);
        int total = 0;
        for (const auto& b : c.finite_branch_points()) {
            double r = std::sqrt(0.25 * c.min_branch_distance());
            total += differential_order(c, CurvePoint::branch(b.z), density, r);
        }
        double rmax = 1.0;
        for (const auto& b : c.finite_branch_points()) rmax = std::max(rmax, std::abs(b.z));
        double t_r = (deg % 2 == 1) ? 1.0 / std::sqrt(8.0 * rmax) : 1.0 / (8.0 * rmax);
        for (const auto& ip : detail::infinity_points(c))
            total += differential_order(c, ip, density, t_r);
        CHECK(total == canonical_degree(g));
    }
}

TEST_CASE("dim L(K - D) equals dim I(-D) via the dz/w canonical divisor") {
    Curve c = testing::hyper_z5(); // K = (dz/w) = (2g-2) * infinity = 2 * infinity
    for (int nd : {0, 1, 2}) {
        Divisor K = inf_divisor(2);
        Divisor D = inf_divisor(nd);
        CHECK(dim_L(c, K - D) == dim_I_minus(c, D));
    }
}

TEST_CASE("dim L of a shifted divisor uses linear equivalence") {
    Curve c = testing::hyper_z5();
    // D = -2 (branch at 1) + 4 inf is equivalent to 2 inf via f = z - 1
    CurveFunction f;
    f.R.num = UniPoly({-1.0, 1.0});
    Divisor d;
    cplx e1 = 1.0;
    for (const auto& b : c.finite_branch_points())
        if (std::abs(b.z - cplx(1.0)) < 1e-7) e1 = b.z;
    d.add(CurvePoint::branch(e1), -2);
    d.add(CurvePoint::infinity(0), 4);
    CHECK(dim_L(c, d, f) == dim_L(c, inf_divisor(2)));
    CHECK_THROWS_AS(dim_L(c, d), domain_error);

    Divisor hopeless;
    hopeless.add(CurvePoint::branch(e1), -5);
    CHECK_THROWS_AS(dim_L(c, hopeless, f), domain_error);
}

TEST_CASE("Weierstrass points of w^2 = z^5 - 1 are the six branch points") {
    Curve c = testing::hyper_z5();
    auto pts = weierstrass_points(c);
    REQUIRE(pts.size() == 6);
    int inf_count = 0, branch_count = 0;
    for (const auto& q : pts) {
        if (q.kind == PointKind::infinity_pt) ++inf_count;
        if (q.kind == PointKind::branch) ++branch_count;
    }
    CHECK(inf_count == 1);
    CHECK(branch_count == 5);
}

TEST_CASE("Weierstrass points of an even-degree genus-2 curve are the finite branch points") {
    std::mt19937_64 rng(55);
    Curve c = hyperelliptic_curve(testing::separated_poly(rng, 6));
    auto pts = weierstrass_points(c);
    REQUIRE(pts.size() == 6);
    for (const auto& q : pts) CHECK(q.kind == PointKind::branch);
}

TEST_CASE("generic regular points are not Weierstrass points") {
    Curve c = testing::hyper_z5();
    auto pts = weierstrass_points(c);
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int t = 0; t < 5; ++t) {
        cplx z0(u(rng), u(rng));
        if (c.dist_to_branch(z0) < 4.0 * c.margin()) continue;
        for (const auto& q : pts)
            if (q.kind == PointKind::regular)
                CHECK(std::abs(q.z - z0) > 1e-3);
    }
}
