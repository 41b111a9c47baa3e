#pragma once

#include <string>
#include <vector>

#include "hofbauer/geometry.hpp"
#include "hofbauer/lifting.hpp"

namespace hofbauer {

/// Admissible depth-m cylinders with landed representatives and the
/// symbolic shift between them.
struct CylinderModel {
    std::size_t m = 0;
    std::vector<Word> words;
    std::vector<ArcSet> cylinders;
    std::vector<Angle> rep_angles;
    std::vector<cplx> reps;
    std::vector<double> log_df;          // log|Df(rep)|
    std::vector<std::vector<int>> succ;  // depth-m cylinders meeting f(Z)
};

/// Throws LandingError when a representative does not converge.
CylinderModel build_cylinder_model(const PartitionP1& p, const LandingSolver& s, std::size_t m);

/// (L v)[Z] = |Df(rep Z)|^(-delta) * sum over Z' in succ(Z) of v[Z'].
struct TransferOperator {
    const CylinderModel* model = nullptr;
    double delta = 0;
    std::vector<double> weight;

    std::vector<double> apply(const std::vector<double>& v) const;
};

TransferOperator build_operator(const CylinderModel& cm, double delta);

struct EigenResult {
    double rho = 0;
    std::vector<double> v;   // nonnegative, sums to 1
    int iterations = 0;
    bool converged = false;
    bool irreducible = true; // false: solved on the largest strongly connected component
    double residual = 0;     // max |L v - rho v|
};

EigenResult leading_eigen(const TransferOperator& op, double tol = 1e-12, int max_iter = 200000,
                          const std::vector<double>* warm = nullptr);

struct DeltaSolve {
    double delta = 0;
    std::vector<std::pair<double, double>> curve; // (delta, rho) on the reporting grid
    bool strictly_decreasing = false;
    std::vector<double> weights;   // approximate conformal measure of each cylinder
    double fixed_point_residual = 0;
    bool irreducible = true;
};

/// Bisection for rho(delta) = 1 on [0, 2]. Throws when the bracket fails.
DeltaSolve solve_delta(const CylinderModel& cm, double tol = 1e-6, double grid_step = 0.1,
                       double eigen_tol = 1e-13);

/// Richardson-style residual of the conformality relation on depth-m
/// cylinders, computed with the depth m+2 eigenvector at the same delta.
double conformality_residual(const PartitionP1& p, const LandingSolver& s, std::size_t m,
                             double delta);

struct LyapunovMassPoint {
    double lambda0;
    std::size_t n;
    double mass; // mu_delta{ |Df^n| > lambda0^n }
};

struct VisitFrequencyPoint {
    double eps;
    std::size_t n;
    double mass; // mu_delta{ (1/n) #{j < n : level <= R} > eps }
};

struct EquivalenceParams {
    std::vector<double> lambda0_grid{1.05, 1.2, 1.5};
    std::vector<std::size_t> n_grid{250, 500, 1000, 2000};
    std::vector<int> R_grid{4, 6, 8};
    std::vector<double> eps_grid{0.05, 0.1, 0.2};
    int R = 8;
    std::size_t samples = 2000;
    std::uint64_t seed = 1;
    double floor = 0.05;
    std::size_t density_depth = 6;
    int witness_domain = -1; // -1: most massive domain of level >= 1
    mpq_class margin{1, 64};
    int threads = 1;
};

struct EquivalenceReport {
    std::vector<LyapunovMassPoint> lyapunov_mass;
    double positive_lyapunov_mass = 0; // smallest lambda0, largest n
    LiftReport lift;
    std::vector<VisitFrequencyPoint> visit_frequency;
    double conical_frequency = 0;
    std::vector<DensityEntry> density;
    double min_density = 0;
    bool densities_positive = false;
    double null_set_mass = 0; // projected mass on cylinders of zero conformal weight
    bool consistent = false;
    std::string summary;
};

/// Runs both sides of the positive-Lyapunov / liftability equivalence on
/// samples of the approximate conformal measure.
EquivalenceReport equivalence_experiment(const CylinderModel& cm, const std::vector<double>& weights,
                                         const LandingSolver& s, const TowerGraph& g,
                                         const EquivalenceParams& prm);

} // namespace hofbauer
