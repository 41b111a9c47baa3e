#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hofbauer/tower.hpp"

namespace hofbauer {

/// A surviving path reached a domain that the tower did not expand.
class InsufficientDepth : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Surviving path and cutpoint counts from one level-R domain.
///
/// Paths are counted by symbol sequence; a cutpoint is counted once per
/// surviving path ending in a domain that carries it.
struct CensusTable {
    int R = 0;
    int origin = 0;
    int T = 0;
    std::vector<mpz_class> s;              // s[t], t = 0..T
    std::vector<std::vector<mpz_class>> L; // L[t][m], m = 0..T+R+1
};

mpz_class surviving_paths(const TowerGraph& g, int R, int D, int t);
CensusTable cutpoint_census(const TowerGraph& g, int R, int D, int T);

/// Ids of all graph domains of the given level.
std::vector<int> domains_of_level(const TowerGraph& g, int level);

struct SurvivorBoundReport {
    bool ok = true;
    std::string first_violation;
    long checks_lookback = 0;
    long checks_one_cutpoints = 0;
    long checks_table = 0;
    long checks_s_bound = 0;
    mpq_class C; // constant in s_R(nR+j) <= C (2RN)^(n+1)
};

/// Exact check of the lookback rule, the 1-cutpoint rule, the L_t table
/// bounds and the s_R growth bound.
SurvivorBoundReport verify_survivor_bounds(const CensusTable& tbl, int N);

/// Closed form of the constant in the s_R growth bound.
mpq_class s_bound_constant(int R, int N);

struct SubsetBound {
    mpz_class count;   // sum_{k <= eps n} C(n, k)
    double log_count = 0;
    double log_bound = 0; // n (eps + l(eps))
    bool holds = false;
    bool below_regime = false; // eps n < 1
};

SubsetBound subset_count_bound(double eps, int n);

} // namespace hofbauer
