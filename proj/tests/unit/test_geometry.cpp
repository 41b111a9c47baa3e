#include <doctest.h>

#include <cmath>

#include "hofbauer/geometry.hpp"

using namespace hofbauer;

TEST_CASE("critical orbit shapes") {
    const PolynomialModel cheb(2, {-2, 0});
    CHECK(cheb.preperiod() == 2);
    CHECK(cheb.period() == 1);
    const PolynomialModel den(2, {0, 1});
    CHECK(den.preperiod() == 2);
    CHECK(den.period() == 2);
    const PolynomialModel real(2, {-1.5436890126920764, 0});
    CHECK(real.preperiod() == 3);
    CHECK(real.period() == 1);
    CHECK_THROWS_AS(PolynomialModel(2, {0, 0}), std::invalid_argument);    // periodic critical point
    CHECK_THROWS_AS(PolynomialModel(2, {0.5, 0}), std::invalid_argument);  // escapes
    CHECK(cheb.postcritical().size() == 2);
}

TEST_CASE("landing points of known rays") {
    const PolynomialModel cheb(2, {-2, 0});
    const LandingSolver s(cheb);
    CHECK(std::abs(s.land(Angle(0, 1)) - cplx(2, 0)) < 1e-10);
    CHECK(std::abs(s.land(Angle(1, 2)) - cplx(-2, 0)) < 1e-10);
    CHECK(std::abs(s.land(Angle(1, 3)) - cplx(-1, 0)) < 1e-10);
    // x = 2 cos(2 pi theta) conjugates doubling to x^2 - 2.
    CHECK(std::abs(s.land(Angle(1, 5)) - cplx(2 * std::cos(2 * M_PI / 5), 0)) < 1e-9);

    const PolynomialModel den(2, {0, 1});
    const LandingSolver t(den);
    CHECK(std::abs(t.land(Angle(1, 6)) - cplx(0, 1)) < 1e-10);

    const PolynomialModel real(2, {-1.5436890126920764, 0});
    const LandingSolver u(real);
    CHECK(std::abs(u.land(Angle(5, 12)) - real.c()) < 1e-8);
    CHECK(std::abs(u.land(Angle(7, 12)) - real.c()) < 1e-8);
    const double alpha = 0.5 - std::sqrt(0.25 - real.c().real());
    CHECK(std::abs(u.land(Angle(1, 3)) - cplx(alpha, 0)) < 1e-10);
}

TEST_CASE("landing commutes with the dynamics") {
    const PolynomialModel den(2, {0, 1});
    const LandingSolver s(den);
    for (long p : {1L, 5L, 11L, 17L}) {
        const Angle a(p, 37);
        CHECK(std::abs(den.f(s.land(a)) - s.land(a.times(2))) < 1e-9);
        CHECK(green(den, s.land(a), 60) < 1e-6);
    }
    const auto orb = s.orbit(Angle(3, 37), 40);
    Angle x(3, 37);
    for (const cplx& z : orb) {
        CHECK(std::abs(z - s.land(x)) < 1e-9);
        x = x.times(2);
    }
}

TEST_CASE("lyapunov exponents at periodic points") {
    const PolynomialModel cheb(2, {-2, 0});
    const LandingSolver s(cheb);
    CHECK(birkhoff_lyapunov(s, Angle(0, 1), 50) == doctest::Approx(std::log(4.0)).epsilon(1e-9));
    // The orbit of 1/5 lands on the 2-cycle {x1, x2} = {2 cos(2 pi/5), 2 cos(4 pi/5)}, multiplier 4 x1 x2.
    const double mult = std::log(std::abs(4 * (2 * std::cos(2 * M_PI / 5)) * (2 * std::cos(4 * M_PI / 5))));
    CHECK(birkhoff_lyapunov(s, Angle(1, 5), 200) == doctest::Approx(mult / 2).epsilon(1e-6));
    CHECK_THROWS(birkhoff_lyapunov(s, Angle(1, 4), 5)); // 1/4 lands on the critical point
    CHECK_THROWS(log_deriv(cheb, 0.0));
}

TEST_CASE("koebe constant and sampled distortion") {
    CHECK(koebe_constant(1.0) == doctest::Approx(std::pow((1 + std::exp(-2 * M_PI)) / (1 - std::exp(-2 * M_PI)), 4)));
    CHECK(koebe_constant(0.5) > koebe_constant(1.0));
    const PolynomialModel den(2, {0, 1});
    const LandingSolver s(den);
    const DistortionSample d = sample_distortion(s, Angle(5, 37), 6, 1.0);
    CHECK(d.ratio >= 1.0);
    CHECK(d.ratio <= d.bound);
}
