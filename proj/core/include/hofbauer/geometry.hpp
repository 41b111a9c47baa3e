#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "hofbauer/tower.hpp"

namespace hofbauer {

using cplx = std::complex<double>;

class LandingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// z -> z^d + c with a strictly preperiodic critical orbit.
class PolynomialModel {
public:
    PolynomialModel(unsigned degree, cplx c, double tol_orbit = 1e-9);

    unsigned degree() const { return d_; }
    cplx c() const { return c_; }
    cplx f(cplx z) const;
    /// Orbit 0, c, f(c), ... up to and including the first repeat.
    const std::vector<cplx>& critical_orbit() const { return orbit_; }
    int preperiod() const { return P_; }
    int period() const { return Q_; }
    /// Critical values f^k(0), k >= 1, without repeats.
    std::vector<cplx> postcritical() const;

private:
    unsigned d_;
    cplx c_;
    std::vector<cplx> orbit_;
    int P_ = 0;
    int Q_ = 0;
};

/// log|Df(z)| = log|d z^(d-1)|. Throws std::domain_error at the critical point.
double log_deriv(const PolynomialModel& m, cplx z);

/// Truncated Green function estimate; 0 on the filled Julia set.
double green(const PolynomialModel& m, cplx z, int n);

struct LandingParams {
    int depth = 200;        // pullback depth K
    double tol = 1e-12;     // Cauchy tolerance
    int cauchy_gap = 20;    // compare depth K with K - gap
    int grid_level = 12;    // table of d^L angles
};

/// Landing points of rational external angles by backward iteration.
///
/// A coarse table of landing points on the angle grid j/d^L is built once by
/// tracing rays down in potential and then polishing along the grid's
/// backward orbits. Branches of the inverse map are chosen by proximity to
/// the interpolated table value.
class LandingSolver {
public:
    explicit LandingSolver(const PolynomialModel& m, LandingParams p = {});

    const PolynomialModel& model() const { return *m_; }
    const LandingParams& params() const { return p_; }

    /// Table interpolation; accurate to the grid spacing only.
    cplx approx_land(double theta) const;

    /// Landing point to tol; throws LandingError when the Cauchy check fails.
    cplx land(const Angle& a) const;

    /// Preimage of w nearest to the hint.
    cplx pullback(cplx w, cplx hint) const;

    /// Orbit points land(d^k a), k < n, by a single backward sweep from depth n + K.
    std::vector<cplx> orbit(const Angle& a, std::size_t n) const;

private:
    const PolynomialModel* m_;
    LandingParams p_;
    std::size_t grid_ = 0;
    std::vector<cplx> table_;
};

/// Mean of log|Df| along the first n orbit points; throws on n = 0 or a critical hit.
double birkhoff_lyapunov(const LandingSolver& s, const Angle& a, std::size_t n);

struct LargeScaleParams {
    double delta = 0.05; // Euclidean radius
    double M = 1.0;      // modulus threshold
};

/// Koebe distortion bound for a ring of modulus M: ((1 + r) / (1 - r))^4, r = exp(-2 pi M).
double koebe_constant(double M);

struct DistortionSample {
    double ratio = 1.0; // max |D(f^n)| / min |D(f^n)| on the inner disk
    double bound = 1.0; // koebe_constant(M)
    int time = 0;
};

/// Pulls the inner disk around f^n(land(a)) back along the orbit branch and
/// measures the distortion of f^n on it. The outer disk avoids the
/// postcritical set, so the branch is univalent there.
DistortionSample sample_distortion(const LandingSolver& s, const Angle& a, std::size_t n,
                                   double M, int probes = 16);

/// Witness region: part of one tower domain kept away from its cutpoints.
struct WitnessRegion {
    int domain = -1;
    ArcSet arcs;
};

/// Times j <= n at which the lift of a lies in the witness region.
std::vector<std::size_t> large_scale_events(const Angle& a, const TowerGraph& g,
                                            const WitnessRegion& w, std::size_t n);

} // namespace hofbauer
