#include <doctest.h>

#include <cmath>
#include <numeric>

#include "hofbauer/conformal.hpp"

using namespace hofbauer;

TEST_CASE("cylinder model for the chebyshev map") {
    const PartitionP1 p(RayChoice{2, {Angle(1, 2)}});
    const PolynomialModel m(2, {-2, 0});
    const LandingSolver s(m);
    const CylinderModel cm = build_cylinder_model(p, s, 4);
    CHECK(cm.words.size() == 16);
    for (std::size_t i = 0; i < cm.words.size(); ++i) {
        CHECK(cm.cylinders[i].contains(cm.rep_angles[i]));
        CHECK(std::abs(cm.reps[i].imag()) < 1e-9);
        CHECK(cm.succ[i].size() == 2); // every cylinder maps over both extensions of its tail
    }
    CHECK_THROWS(build_cylinder_model(p, s, 0));
}

TEST_CASE("leading eigenvector and the delta solve") {
    const PartitionP1 p(RayChoice{2, {Angle(1, 2)}});
    const PolynomialModel m(2, {-2, 0});
    const LandingSolver s(m);
    const CylinderModel cm = build_cylinder_model(p, s, 6);

    // At delta = 0 the operator is the adjacency matrix with spectral radius e^h = 2.
    const EigenResult e0 = leading_eigen(build_operator(cm, 0.0));
    CHECK(e0.converged);
    CHECK(e0.irreducible);
    CHECK(e0.rho == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::accumulate(e0.v.begin(), e0.v.end(), 0.0) == doctest::Approx(1.0));

    const DeltaSolve ds = solve_delta(cm);
    CHECK(ds.delta == doctest::Approx(1.0).epsilon(0.01));
    CHECK(ds.strictly_decreasing);
    CHECK(ds.curve.size() == 21);
    CHECK(ds.fixed_point_residual <= 1e-8);
    for (double w : ds.weights) CHECK(w > 0);

    const TransferOperator op = build_operator(cm, ds.delta);
    const auto Lv = op.apply(ds.weights);
    double worst = 0;
    for (std::size_t i = 0; i < Lv.size(); ++i) worst = std::max(worst, std::fabs(Lv[i] - ds.weights[i]));
    CHECK(worst <= 1e-6);

    CHECK(conformality_residual(p, s, 0, ds.delta) == 0.0);
    CHECK(conformality_residual(p, s, 4, ds.delta) <= 1e-3);
}

TEST_CASE("the dendrite has dimension above one") {
    const PartitionP1 p(RayChoice{2, {Angle(1, 6)}});
    const PolynomialModel m(2, {0, 1});
    const LandingSolver s(m);
    const DeltaSolve ds = solve_delta(build_cylinder_model(p, s, 6));
    CHECK(ds.delta > 1.0);
    CHECK(ds.delta < 2.0);
    CHECK(ds.strictly_decreasing);
}

TEST_CASE("equivalence experiment on a small chebyshev run") {
    const RayChoice rc{2, {Angle(1, 2)}};
    const PartitionP1 p(rc);
    const PolynomialModel m(2, {-2, 0});
    const LandingSolver s(m);
    const CylinderModel cm = build_cylinder_model(p, s, 6);
    const DeltaSolve ds = solve_delta(cm);
    const TowerGraph g = build_tower(rc, 8);
    EquivalenceParams prm;
    prm.samples = 300;
    prm.n_grid = {100, 200};
    prm.density_depth = 3;
    const EquivalenceReport r = equivalence_experiment(cm, ds.weights, s, g, prm);
    CHECK(r.positive_lyapunov_mass > 0.9);
    CHECK(r.lift.verdict == Verdict::liftable);
    CHECK(r.consistent);
    CHECK(r.densities_positive);
    CHECK(r.null_set_mass == 0.0);
    // lambda0 above sup log|Df| = log 4 leaves nothing
    prm.lambda0_grid = {5.0};
    const EquivalenceReport big = equivalence_experiment(cm, ds.weights, s, g, prm);
    CHECK(big.positive_lyapunov_mass == 0.0);
    CHECK(big.visit_frequency.front().mass == doctest::Approx(r.visit_frequency.front().mass));
}
