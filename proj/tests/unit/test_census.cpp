#include <doctest.h>

#include "hofbauer/census.hpp"
#include "oracles.hpp"

using namespace hofbauer;

TEST_CASE("dendrite census: Fibonacci survivors and the survivor bounds") {
    const TowerGraph g = build_tower(RayChoice{2, {Angle(1, 6)}}, 2, 20);
    const auto start = domains_of_level(g, 2);
    REQUIRE(start.size() == 1);
    const CensusTable tbl = cutpoint_census(g, 2, start[0], 20);
    mpz_class a = 1, b = 1;
    for (int t = 0; t <= 20; ++t) {
        CHECK(tbl.s[static_cast<std::size_t>(t)] == a);
        const mpz_class c = a + b;
        a = b;
        b = c;
    }
    CHECK(tbl.s[20] == 10946);
    const SurvivorBoundReport rep = verify_survivor_bounds(tbl, 2);
    CHECK_MESSAGE(rep.ok, rep.first_violation);
    CHECK(rep.C == mpq_class(23, 7));
    CHECK(rep.checks_lookback > 0);
    CHECK(rep.checks_s_bound > 0);
}

TEST_CASE("chebyshev census has a single survivor") {
    const TowerGraph g = build_tower(RayChoice{2, {Angle(1, 2)}}, 3, 15);
    const CensusTable tbl = cutpoint_census(g, 3, 3, 15);
    for (const auto& s : tbl.s) CHECK(s == 1);
    CHECK(verify_survivor_bounds(tbl, 2).ok);
    CHECK(surviving_paths(g, 3, 3, 10) == 1);
}

TEST_CASE("dynamic programme equals brute-force enumeration") {
    for (const RayChoice& rc : {RayChoice{2, {Angle(1, 6)}}, RayChoice{2, {Angle(1, 2)}},
                                RayChoice{2, {Angle(5, 12), Angle(7, 12)}}}) {
        for (int R : {2, 3}) {
            const TowerGraph g = build_tower(rc, R, 9);
            const int N = static_cast<int>(g.partition().size());
            for (int D : domains_of_level(g, R)) {
                const CensusTable tbl = cutpoint_census(g, R, D, 8);
                const auto brute = oracle::brute_census(g.domain(D), g.partition(), R, 8);
                for (int t = 0; t <= 8; ++t) {
                    CHECK(tbl.s[static_cast<std::size_t>(t)] == brute.s[static_cast<std::size_t>(t)]);
                    for (std::size_t m = 0; m < tbl.L[0].size(); ++m) {
                        const auto& bm = brute.L[static_cast<std::size_t>(t)];
                        const mpz_class want = bm.count(static_cast<int>(m)) ? bm.at(static_cast<int>(m)) : mpz_class(0);
                        CHECK(tbl.L[static_cast<std::size_t>(t)][m] == want);
                    }
                }
                CHECK(verify_survivor_bounds(tbl, N).ok);
            }
        }
    }
}

TEST_CASE("census refuses to run past the expanded tower") {
    const TowerGraph g = build_tower(RayChoice{2, {Angle(1, 6)}}, 2, 3);
    CHECK_THROWS_AS(cutpoint_census(g, 2, domains_of_level(g, 2)[0], 10), InsufficientDepth);
    CHECK_THROWS_AS(cutpoint_census(g, 2, 0, 3), std::invalid_argument);
}

TEST_CASE("a forged table trips the checks") {
    const TowerGraph g = build_tower(RayChoice{2, {Angle(1, 6)}}, 2, 10);
    CensusTable tbl = cutpoint_census(g, 2, domains_of_level(g, 2)[0], 10);
    tbl.L[5][4] += 1000;
    const SurvivorBoundReport rep = verify_survivor_bounds(tbl, 2);
    CHECK_FALSE(rep.ok);
    CHECK_FALSE(rep.first_violation.empty());
}

TEST_CASE("binomial subset bound") {
    CHECK(subset_count_bound(0.5, 10).count == 638);
    for (int n : {20, 40, 60})
        for (double eps : {0.05, 0.1, 0.2, 0.3}) {
            const SubsetBound b = subset_count_bound(eps, n);
            CHECK(b.holds);
            CHECK(b.log_count <= b.log_bound);
        }
    CHECK(subset_count_bound(0.05, 10).count == 1);
    CHECK(subset_count_bound(0.05, 10).below_regime);
    CHECK(s_bound_constant(2, 2) == mpq_class(23, 7));
}
