#pragma once

#include <cstdint>
#include <vector>

#include "hofbauer/geometry.hpp"
#include "hofbauer/lifting.hpp"

namespace hofbauer {

/// Arc set of domain D with notches of angular radius `margin` cut out
/// around its cutpoint angles. Throws when the result is empty or margin >= 1/2.
WitnessRegion choose_W(const TowerGraph& g, int D, const mpq_class& margin);

/// One excursion between consecutive visits to the witness region.
struct ReturnBlock {
    std::uint32_t sample = 0;
    std::uint32_t start = 0; // visit time
    std::uint32_t tau = 0;   // time to the next visit
};

struct InducedSystem {
    WitnessRegion W;
    std::size_t horizon = 0;
    std::vector<ReturnBlock> returns; // grouped by sample, in time order
    std::vector<Word> branch_words;   // itineraries of the first returns, for export
    std::size_t censored = 0;      // open excursions cut by the horizon
    std::size_t never_entered = 0; // samples without any visit
    double visit_frequency = 0;    // weighted fraction of times spent in W
    double weighted_returns = 0;   // sum of sample weights over returns
    double weighted_tau = 0;       // sum of sample weight times tau

    double censored_fraction() const;
};

/// First-return bookkeeping on the traces of all samples up to `horizon`.
InducedSystem first_return(const SampleMeasure& mu, const TowerGraph& g, const WitnessRegion& W,
                           std::size_t horizon, int threads = 1, std::size_t max_words = 2000);

struct KacResult {
    double mean_tau = 0;
    double inv_mass = 0; // 1 / mu_hat(W)
    double rel_error = 0;
    bool conclusive = false;
    std::string note;
};

KacResult kac_check(const InducedSystem& ind, double censor_threshold = 0.05);

struct ExpansionReport {
    bool degenerate = true;
    double min_log_expansion = 0;   // min over branches of log|DF|
    int iterate_for_two = -1;       // smallest N <= 10 with min log|DF^N| >= log 2, or -1
    std::vector<double> min_log_by_N; // index N - 1
    double lambda_f = 0;
    double lambda_F = 0;            // mean log|DF| per return
    double abramov_rhs = 0;         // mu_hat(W) * lambda_F
    double abramov_rel_error = 0;
    double h_F = 0;                 // mean log-Jacobian per return (reported only)
    double h_product = 0;           // mu_hat(W) * h_F
};

/// Expansion of the induced branches and the Abramov relation for Lyapunov
/// exponents. `log_jacobian` is the per-step log-Jacobian of the sampled
/// measure (log d for uniform angles) and feeds the entropy report.
ExpansionReport expansion_and_abramov(const InducedSystem& ind, const SampleMeasure& mu,
                                      const LandingSolver& s, double log_jacobian,
                                      int threads = 1);

/// Histogram of return times, bins of width 1 up to max_tau, last bin open.
std::vector<std::size_t> return_histogram(const InducedSystem& ind, std::size_t max_tau);

} // namespace hofbauer
