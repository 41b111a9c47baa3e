#include <doctest.h>

#include <cmath>

#include "hofbauer/lifting.hpp"

using namespace hofbauer;

namespace {
const RayChoice kCheb{2, {Angle(1, 2)}};
const RayChoice kDendrite{2, {Angle(1, 6)}};
} // namespace

TEST_CASE("samplers") {
    const PartitionP1 p(kCheb);
    const SampleMeasure mu = brolin_samples(p, 200, 7, 100);
    CHECK(mu.samples.size() == 200);
    CHECK(mu.total_weight() == doctest::Approx(1.0).epsilon(1e-12));
    for (const Sample& s : mu.samples) CHECK_FALSE(hits_boundary(s.angle, p, 100));
    const SampleMeasure again = brolin_samples(p, 200, 7, 100);
    for (std::size_t i = 0; i < 200; ++i) CHECK(again.samples[i].angle == mu.samples[i].angle);
    CHECK_FALSE(brolin_samples(p, 200, 8, 100).samples[0].angle == mu.samples[0].angle);

    CHECK_THROWS(dirac_sample(p, Angle(1, 4)));   // on the boundary
    CHECK_THROWS(dirac_sample(p, Angle(1, 8)));   // precritical
    CHECK(dirac_sample(p, Angle(1, 3)).samples.size() == 1);
    CHECK(orbit_samples(p, Angle(1, 5), 4).samples.size() == 4);
    CHECK(custom_samples({{Angle(1, 3), 2.0}, {Angle(2, 3), 2.0}}).samples[0].weight == doctest::Approx(0.5));
}

TEST_CASE("cesaro lift conserves mass and is nearly invariant") {
    const TowerGraph g = build_tower(kDendrite, 8);
    const SampleMeasure mu = brolin_samples(g.partition(), 500, 1, 1000);
    for (std::size_t n : {100, 1000}) {
        const TowerMass tm = lift_cesaro(mu, g, n, 8);
        CHECK(std::fabs(tm.retained() + tm.escaped - 1.0) <= 1e-12);
        std::vector<int> ids;
        for (const Domain& d : g.domains()) ids.push_back(d.id);
        const DefectReport dr = invariance_defect(mu, g, n, ids);
        CHECK(dr.defect <= dr.bound);
        CHECK(dr.bound == doctest::Approx(2.0 / static_cast<double>(n)));
    }
    const auto curves = lift_curves(mu, g, {100, 1000}, {2, 4, 6, 8});
    for (std::size_t i = 1; i < curves.size(); ++i)
        if (curves[i].n == curves[i - 1].n) CHECK(curves[i].retained >= curves[i - 1].retained);
    CHECK_THROWS(lift_curves(mu, g, {100}, {9}));
}

TEST_CASE("thread count does not change results") {
    const TowerGraph g = build_tower(kCheb, 6);
    const SampleMeasure mu = brolin_samples(g.partition(), 700, 3, 300);
    const TowerMass a = lift_cesaro(mu, g, 300, 6, 1);
    const TowerMass b = lift_cesaro(mu, g, 300, 6, 4);
    CHECK(a.mass == b.mass);
    CHECK(a.escaped == b.escaped);
}

TEST_CASE("verdict logic on synthetic curves") {
    const std::vector<std::size_t> n{100, 1000};
    const std::vector<int> R{2, 4};
    std::vector<CurvePoint> up{{100, 2, 0.3, 0.7}, {100, 4, 0.6, 0.4}, {1000, 2, 0.3, 0.7}, {1000, 4, 0.6, 0.4}};
    CHECK(liftability_verdict(up, n, R).verdict == Verdict::liftable);
    CHECK(liftability_verdict(up, n, R).witness_R == 2);
    std::vector<CurvePoint> down{{100, 2, 0.2, 0.8}, {100, 4, 0.3, 0.7}, {1000, 2, 0.01, 0.99}, {1000, 4, 0.02, 0.98}};
    CHECK(liftability_verdict(down, n, R).verdict == Verdict::not_liftable);
    CHECK(liftability_verdict(up, {100}, R).verdict == Verdict::inconclusive);
    CHECK(to_string(Verdict::not_liftable) == "not-liftable");
}

TEST_CASE("point masses at fixed points") {
    const TowerGraph g = build_tower(kCheb, 8);
    // beta has itinerary 111..., and the level 1 domain maps to itself over symbol 1.
    const SampleMeasure beta = dirac_sample(g.partition(), Angle(0, 1));
    const TowerMass tb = lift_cesaro(beta, g, 100, 8);
    CHECK(tb.mass[1] == doctest::Approx(0.99));
    CHECK(tb.mass[0] == doctest::Approx(0.01));
    // alpha has itinerary 000... and settles in the level 2 domain.
    const SampleMeasure alpha = dirac_sample(g.partition(), Angle(1, 3));
    const TowerMass ta = lift_cesaro(alpha, g, 100, 8);
    CHECK(ta.mass[2] == doctest::Approx(0.98));
    const auto curves = lift_curves(alpha, g, {100, 1000}, {4, 8});
    CHECK(liftability_verdict(curves, {100, 1000}, {4, 8}).verdict == Verdict::liftable);
}

TEST_CASE("lyapunov on the base and on the tower") {
    const PolynomialModel m(2, {-2, 0});
    const LandingSolver s(m);
    const TowerGraph g = build_tower(kCheb, 8);
    const SampleMeasure mu = brolin_samples(g.partition(), 400, 2, 700);
    const LyapunovPair lp = lyapunov_consistency(mu, s, g, 500, 8);
    CHECK(lp.tower_defined);
    CHECK(lp.lambda_f == doctest::Approx(std::log(2.0)).epsilon(0.03));
    CHECK(lp.lambda_tower == doctest::Approx(lp.lambda_f).epsilon(0.05));
}

TEST_CASE("block entropy of uniform angles") {
    const PartitionP1 p(kCheb);
    const SampleMeasure mu = brolin_samples(p, 4000, 4, 64);
    const EntropyReport er = entropy_estimate(mu, p, {2, 4, 6, 8});
    CHECK(er.sufficient);
    CHECK(er.h == doctest::Approx(std::log(2.0)).epsilon(0.05));
}

TEST_CASE("projection against arc length") {
    const TowerGraph g = build_tower(kCheb, 8);
    const SampleMeasure mu = brolin_samples(g.partition(), 2000, 5, 300);
    const auto words = admissible_words(g.partition(), 3);
    const auto ref = arc_length_reference(g.partition(), words);
    double total = 0;
    for (double r : ref) total += r;
    CHECK(total == doctest::Approx(1.0));
    const auto dens = project_and_density(mu, g, 300, 8, words, ref);
    double proj = 0;
    for (const DensityEntry& d : dens) {
        proj += d.projected;
        CHECK(d.ratio > 0.5);
        CHECK(d.ratio < 2.0);
    }
    CHECK(proj == doctest::Approx(1.0).epsilon(1e-9));
}
