#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hofbauer/geometry.hpp"
#include "hofbauer/tower.hpp"

namespace hofbauer {

struct Sample {
    Angle angle;
    double weight = 0;
};

/// Weighted angle samples standing in for a measure on the Julia set.
struct SampleMeasure {
    std::vector<Sample> samples;
    std::string tag; // brolin | dirac-periodic | orbit-empirical | conformal | custom
    std::uint64_t seed = 0;

    double total_weight() const;
};

/// Uniform random angles (the measure of maximal entropy). Samples whose
/// orbit meets a partition boundary within `horizon` steps are redrawn.
SampleMeasure brolin_samples(const PartitionP1& p, std::size_t count, std::uint64_t seed,
                             std::size_t horizon);

/// Point mass at an angle; rejects angles whose orbit meets a partition boundary.
SampleMeasure dirac_sample(const PartitionP1& p, const Angle& a);

/// Equal weights on a, d a, ..., d^(n-1) a.
SampleMeasure orbit_samples(const PartitionP1& p, const Angle& a, std::size_t n);

/// Arbitrary angles and weights, normalized, without the boundary check.
SampleMeasure custom_samples(std::vector<Sample> samples);

/// Cylinder chosen with the given weights, then a uniform angle inside it.
SampleMeasure cylinder_samples(const PartitionP1& p, const std::vector<ArcSet>& cylinders,
                               const std::vector<double>& weights, std::size_t count,
                               std::uint64_t seed, std::size_t horizon);

/// Cesàro average of the lifted samples, restricted to levels <= R.
struct TowerMass {
    std::vector<double> mass; // indexed by domain id, zero above level R
    double escaped = 0;
    std::size_t n = 0;
    int R = 0;

    double retained() const;
};

TowerMass lift_cesaro(const SampleMeasure& mu, const TowerGraph& g, std::size_t n, int R,
                      int threads = 1);

struct CurvePoint {
    std::size_t n;
    int R;
    double retained;
    double escaped;
};

/// r(n, R) for every pair of the grids from one pass over the traces.
/// The graph must be expanded to at least the largest R.
std::vector<CurvePoint> lift_curves(const SampleMeasure& mu, const TowerGraph& g,
                                    const std::vector<std::size_t>& n_grid,
                                    const std::vector<int>& R_grid, int threads = 1);

enum class Verdict { liftable, not_liftable, inconclusive };
std::string to_string(Verdict v);

struct LiftReport {
    std::vector<CurvePoint> curves;
    Verdict verdict = Verdict::inconclusive;
    int witness_R = -1;  // R whose curve stays above the floor
    double floor = 0.05;
    std::string note;
};

/// Empirical stand-in for the vague-limit definition of liftability.
LiftReport liftability_verdict(const std::vector<CurvePoint>& curves,
                               const std::vector<std::size_t>& n_grid,
                               const std::vector<int>& R_grid, double floor = 0.05);

struct DefectReport {
    double defect = 0; // max over tests of |nu_n(phi o F) - nu_n(phi)|
    double bound = 0;  // 2 sup|phi| / n
    int worst_test = -1;
};

/// Cesàro invariance defect on indicators of the given domains.
DefectReport invariance_defect(const SampleMeasure& mu, const TowerGraph& g, std::size_t n,
                               const std::vector<int>& test_ids, int threads = 1);

struct DensityEntry {
    Word word;
    double projected = 0; // normalized projected tower mass
    double reference = 0; // mu(Z)
    double ratio = 0;
    bool skipped = false;
};

/// Projection of the lift onto depth-m cylinders, divided by the reference
/// mass of each cylinder. The projected masses are normalized by the retained mass.
std::vector<DensityEntry> project_and_density(const SampleMeasure& mu, const TowerGraph& g,
                                              std::size_t n, int R, const std::vector<Word>& words,
                                              const std::vector<double>& reference,
                                              int threads = 1);

/// Exact arc length of each cylinder (the reference for uniform angles).
std::vector<double> arc_length_reference(const PartitionP1& p, const std::vector<Word>& words);

/// Cesàro mass in domain D within angular distance `margin` of a cutpoint angle of D.
double cutpoint_margin_mass(const SampleMeasure& mu, const TowerGraph& g, std::size_t n, int D,
                            double margin, int threads = 1);

struct LyapunovPair {
    double lambda_f = 0;
    double lambda_tower = 0; // over lifted mass in levels <= R, normalized
    bool tower_defined = false;
    std::size_t excluded = 0; // samples whose orbit hit the critical point
};

LyapunovPair lyapunov_consistency(const SampleMeasure& mu, const LandingSolver& s,
                                  const TowerGraph& g, std::size_t n, int R, int threads = 1);

struct EntropyPoint {
    std::size_t m;
    double H;          // Miller-Madow corrected block entropy
    std::size_t occupied;
    bool sufficient;
};

struct EntropyReport {
    std::vector<EntropyPoint> points;
    double h = 0;        // least-squares slope of H_m over sufficient m
    double h_ratio = 0;  // H_m / m at the largest sufficient m
    bool sufficient = false;
    std::string warning;
};

EntropyReport entropy_estimate(const SampleMeasure& mu, const PartitionP1& p,
                               const std::vector<std::size_t>& m_grid, double min_per_cell = 5.0);

struct WanderingProbe {
    double mass = 0;
    double bound = 0; // 1/h + (h-1)/(2n)
    bool disjoint = true;
};

/// Cesàro mass of a set of domains whose first h preimages look disjoint on the traces.
WanderingProbe wandering_probe(const SampleMeasure& mu, const TowerGraph& g, std::size_t n,
                               const std::vector<int>& ids, std::size_t h, int threads = 1);

struct MergeStats {
    std::size_t merged = 0;
    std::size_t climbed = 0;
    std::size_t open = 0;
    double mean_time = 0;
};

/// Pairs of lifts of each sample started in two domains.
MergeStats merge_statistics(const SampleMeasure& mu, const TowerGraph& g, int d1, int d2,
                            std::size_t horizon);

} // namespace hofbauer
