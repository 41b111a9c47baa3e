#pragma once

#include <map>
#include <tuple>
#include <vector>

#include <gmpxx.h>

#include "hofbauer/tower.hpp"

namespace oracle {

/// Hofbauer tower of x -> x^2 + c on a real interval, built from intervals
/// and marked critical-orbit points instead of angles. Domains of level > R
/// are dropped. Symbol 0 is the lap x <= 0, symbol 1 the lap x >= 0.
struct IntervalTower {
    struct Mark {
        int age;
        double x;
        auto operator<=>(const Mark&) const = default;
    };
    struct Dom {
        double a, b;
        std::vector<Mark> marks;
        int level() const;
        auto operator<=>(const Dom&) const = default;
    };
    std::vector<Dom> domains;
    std::vector<std::tuple<int, int, int>> edges; // from, symbol, to
};

IntervalTower interval_tower(double c, int R);

/// Census by enumerating every symbol sequence with hofbauer::step, no graph.
struct BruteCensus {
    std::vector<mpz_class> s;              // s[t]
    std::vector<std::map<int, mpz_class>> L; // L[t][age]
};

BruteCensus brute_census(const hofbauer::Domain& start, const hofbauer::PartitionP1& p, int R, int T);

} // namespace oracle
