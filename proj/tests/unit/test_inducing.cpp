#include <doctest.h>

#include <cmath>

#include "hofbauer/inducing.hpp"

using namespace hofbauer;

TEST_CASE("witness region keeps away from cutpoints") {
    const TowerGraph g = build_tower(RayChoice{2, {Angle(1, 2)}}, 6);
    const WitnessRegion W = choose_W(g, 2, mpq_class(1, 64));
    CHECK(W.domain == 2);
    CHECK_FALSE(W.arcs.contains(Angle(1, 2)));
    CHECK_FALSE(W.arcs.contains(Angle(0, 1)));
    CHECK_FALSE(W.arcs.contains(Angle(1, 128)));
    CHECK(W.arcs.contains(Angle(1, 4)));
    CHECK(W.arcs.total_length() == mpq_class(15, 16));
    CHECK_THROWS(choose_W(g, 2, mpq_class(1, 2)));
    CHECK_THROWS(choose_W(g, 2, mpq_class(1, 4))); // notches of width 1/2 around 0 and 1/2 cover the circle
}

TEST_CASE("first returns satisfy Kac and Abramov for uniform angles") {
    const RayChoice rc{2, {Angle(1, 2)}};
    const TowerGraph g = build_tower(rc, 8);
    const PolynomialModel m(2, {-2, 0});
    const LandingSolver s(m);
    const SampleMeasure mu = brolin_samples(g.partition(), 400, 12, 1400);
    const WitnessRegion W = choose_W(g, 2, mpq_class(1, 64));
    const InducedSystem ind = first_return(mu, g, W, 1000);
    CHECK(ind.returns.size() > 1000);
    CHECK(ind.censored_fraction() < 0.05);
    const KacResult k = kac_check(ind);
    CHECK(k.conclusive);
    CHECK(k.rel_error < 0.05);
    const ExpansionReport ex = expansion_and_abramov(ind, mu, s, std::log(2.0));
    CHECK_FALSE(ex.degenerate);
    CHECK(ex.abramov_rel_error < 0.05);
    CHECK(ex.h_product == doctest::Approx(std::log(2.0)).epsilon(0.05));

    const auto hist = return_histogram(ind, 16);
    std::size_t total = 0;
    for (std::size_t c : hist) total += c;
    CHECK(hist.size() == 17); // indexed by tau, last bin open
    CHECK(hist[0] == 0);
    CHECK(total == ind.returns.size());
    CHECK_FALSE(ind.branch_words.empty());
}

TEST_CASE("heavy censoring makes Kac inconclusive") {
    const TowerGraph g = build_tower(RayChoice{2, {Angle(1, 2)}}, 8);
    const SampleMeasure mu = brolin_samples(g.partition(), 100, 1, 20);
    const InducedSystem ind = first_return(mu, g, choose_W(g, 6, mpq_class(1, 64)), 10);
    CHECK_FALSE(kac_check(ind).conclusive);
}
