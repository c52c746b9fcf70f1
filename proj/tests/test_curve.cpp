#include <catch2/catch_amalgamated.hpp>

#include "rsurf/curve.hpp"
#include "support/corpus.hpp"

using namespace rsurf;

namespace {
bool contains_branch(const Curve& c, cplx z, double tol = 1e-7) {
    for (const auto& q : c.finite_branch_points())
        if (std::abs(q.z - z) < tol) return true;
    return false;
}
} // namespace

TEST_CASE("finite branch points of the elliptic lambda curve") {
    Curve c = testing::elliptic_lambda(2.0);
    REQUIRE(c.finite_branch_points().size() == 3);
    CHECK(contains_branch(c, 0.0));
    CHECK(contains_branch(c, 1.0));
    CHECK(contains_branch(c, 2.0));
    CHECK(c.kind() == CurveKind::elliptic);
}

TEST_CASE("finite branch points of w^2 - z") {
    Curve c = hyperelliptic_curve(UniPoly({0.0, 1.0}));
    REQUIRE(c.finite_branch_points().size() == 1);
    CHECK(contains_branch(c, 0.0));
}

TEST_CASE("finite branch points of w^4 = z^4 - 1") {
    Curve c = testing::quartic_z4();
    REQUIRE(c.finite_branch_points().size() == 4);
    CHECK(contains_branch(c, 1.0));
    CHECK(contains_branch(c, -1.0));
    CHECK(contains_branch(c, cplx(0, 1)));
    CHECK(contains_branch(c, cplx(0, -1)));
    CHECK(c.kind() == CurveKind::general);
}

TEST_CASE("hyperelliptic branch points are exactly the roots of p") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        UniPoly p = testing::separated_poly(rng, 5 + trial);
        Curve c = hyperelliptic_curve(p);
        auto rts = roots(p);
        REQUIRE(c.finite_branch_points().size() == rts.size());
        for (const auto& r : rts) CHECK(contains_branch(c, r.center, 1e-6));
    }
}

TEST_CASE("fiber of w^2 - z at z = 1") {
    Curve c = hyperelliptic_curve(UniPoly({0.0, 1.0}));
    Fiber f = c.fiber(1.0);
    REQUIRE(f.size() == 2);
    CHECK(std::abs(f[0] - cplx(-1.0)) < 1e-10);
    CHECK(std::abs(f[1] - cplx(1.0)) < 1e-10);
}

TEST_CASE("fiber of the lambda curve at z = 3") {
    Curve c = testing::elliptic_lambda(2.0);
    Fiber f = c.fiber(3.0);
    REQUIRE(f.size() == 2);
    double s6 = std::sqrt(6.0);
    CHECK(std::abs(f[0] - cplx(-s6)) < 1e-9);
    CHECK(std::abs(f[1] - cplx(s6)) < 1e-9);
}

TEST_CASE("fiber size and Vieta symmetry at random points") {
    Curve c = testing::fermat(4);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 20; ++t) {
        cplx z(u(rng), u(rng));
        if (c.dist_to_branch(z) <= 2.0 * c.margin()) continue;
        Fiber f = c.fiber(z);
        REQUIRE(f.size() == 4);
        cplx sum = 0.0;
        for (cplx w : f) sum += w;
        cplx expect = -c.F().p(1).eval(z) / c.F().p(0).eval(z);
        CHECK(std::abs(sum - expect) < 1e-8 * std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("fiber refuses points inside the branch margin") {
    Curve c = testing::elliptic_lambda(2.0);
    CHECK_THROWS_AS(c.fiber(1.0), numeric_error);
    CHECK_THROWS_AS(c.fiber(cplx(1.0 + 0.2 * c.margin(), 0.0)), numeric_error);
}

TEST_CASE("curves that are not squarefree in w are rejected") {
    // (w - z)^2 = w^2 - 2zw + z^2
    std::vector<std::tuple<int, int, cplx>> mono;
    mono.emplace_back(0, 2, 1.0);
    mono.emplace_back(1, 1, -2.0);
    mono.emplace_back(2, 0, 1.0);
    CHECK_THROWS_AS(Curve(BivariatePoly::from_monomials(mono)), domain_error);
}

TEST_CASE("kind classification") {
    CHECK(testing::elliptic_lambda(2.0).kind() == CurveKind::elliptic);
    CHECK(testing::hyper_z5().kind() == CurveKind::hyperelliptic);
    CHECK(testing::fermat(3).kind() == CurveKind::general);
    // w^2 - p with p having a double root stays general
    UniPoly p = UniPoly::from_roots({1.0, 1.0, -1.0});
    CHECK(hyperelliptic_curve(p).kind() == CurveKind::general);
}

TEST_CASE("base point stays clear of the branch locus") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 8; ++t) {
        Curve c = testing::random_hyperelliptic(rng, 2);
        CHECK(c.dist_to_branch(c.base_point()) > c.margin());
        CHECK(c.base_fiber().size() == 2);
    }
}

TEST_CASE("base point override must respect the margin") {
    CurveOptions opt;
    opt.base_point = cplx(0.0, 0.0);
    UniPoly p = UniPoly::from_roots({0.0, 1.0, 2.0});
    CHECK_THROWS_AS(hyperelliptic_curve(p, opt), domain_error);
}
