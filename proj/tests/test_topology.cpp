#include <catch2/catch_amalgamated.hpp>

#include "rsurf/topology.hpp"
#include "support/corpus.hpp"

using namespace rsurf;

TEST_CASE("ramification of w^2 - z: V = 2") {
    Curve c = hyperelliptic_curve(UniPoly({0.0, 1.0}));
    RamificationProfile rp = ramification_profile(monodromy(c));
    CHECK(rp.V == 2);
    CHECK(rp.sheets == 2);
}

TEST_CASE("ramification of w^2 = z^5 - 1: V = 6") {
    RamificationProfile rp = ramification_profile(monodromy(testing::hyper_z5()));
    CHECK(rp.V == 6);
}

TEST_CASE("ramification of the n=4 Fermat-type quartic: V = 12") {
    RamificationProfile rp = ramification_profile(monodromy(testing::quartic_z4()));
    CHECK(rp.V == 12);
    for (const auto& e : rp.per_point)
        if (e.at_infinity) CHECK(e.index_sum == 0);
}

TEST_CASE("genus golden values") {
    CHECK(genus(testing::elliptic_lambda(2.0)) == 1);
    CHECK(genus(testing::hyper_z5()) == 2);
    CHECK(genus(testing::quartic_z4()) == 3);
    CHECK(genus(testing::fermat(3)) == 1);
    CHECK(genus(testing::fermat(4)) == 3);
    CHECK(genus(testing::fermat(5)) == 6);
}

TEST_CASE("generic trigonal curve has genus 4 with V = 12") {
    Curve c = testing::trigonal();
    MonodromyData md = monodromy(c);
    RamificationProfile rp = ramification_profile(md);
    CHECK(rp.V == 12);
    CHECK(genus(c, md) == 4);
}

TEST_CASE("Riemann-Hurwitz matches the hyperelliptic closed form") {
    std::mt19937_64 rng(71);
    for (int deg = 3; deg <= 10; ++deg) {
        Curve c = hyperelliptic_curve(testing::separated_poly(rng, deg));
        MonodromyData md = monodromy(c);
        CHECK(genus(c, md) == hyperelliptic_genus(deg));
        RamificationProfile rp = ramification_profile(md);
        CHECK(2 * genus(c, md) - 2 == -2 * rp.sheets + rp.V);
    }
}

TEST_CASE("connectivity by orbit of the monodromy group") {
    CHECK(is_connected(monodromy(hyperelliptic_curve(UniPoly({0.0, 1.0})))));
    CHECK(is_connected(monodromy(testing::quartic_z4())));

    // (w-1)(w+1): two disjoint sheets, no branch points
    std::vector<std::tuple<int, int, cplx>> mono;
    mono.emplace_back(0, 2, 1.0);
    mono.emplace_back(0, 0, -1.0);
    Curve split(BivariatePoly::from_monomials(mono));
    CHECK_FALSE(is_connected(monodromy(split)));
}

TEST_CASE("connectivity is invariant under sheet relabeling") {
    Curve c = testing::quartic_z4();
    MonodromyData md = monodromy(c);
    std::vector<int> sigma = {2, 0, 3, 1};
    MonodromyData re = md;
    for (auto& pi : re.perms) {
        std::vector<int> q(md.n);
        for (int k = 0; k < md.n; ++k) q[sigma[k]] = sigma[pi[k]];
        pi = q;
    }
    CHECK(is_connected(md) == is_connected(re));
}

TEST_CASE("hyperelliptic genus helper") {
    CHECK(hyperelliptic_genus(3) == 1);
    CHECK(hyperelliptic_genus(5) == 2);
    CHECK(hyperelliptic_genus(6) == 2);
    CHECK_THROWS_AS(hyperelliptic_genus(0), domain_error);
}
