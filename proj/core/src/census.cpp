#include "hofbauer/census.hpp"

#include <cmath>
#include <map>

namespace hofbauer {
namespace {

using Counts = std::map<int, mpz_class>;

Counts advance(const TowerGraph& g, int R, const Counts& cur, int t) {
    Counts nxt;
    const auto N = static_cast<Symbol>(g.partition().size());
    for (const auto& [id, c] : cur) {
        for (Symbol s = 0; s < N; ++s) {
            const int to = g.successor(id, s);
            if (to == TowerGraph::kEmpty) continue;
            if (to == TowerGraph::kFrontier)
                throw InsufficientDepth("surviving path leaves the expanded tower at step " +
                                        std::to_string(t) + " from domain " + std::to_string(id) +
                                        "; raise extra_levels");
            if (g.domain(to).level > R) nxt[to] += c;
        }
    }
    return nxt;
}

void check_start(const TowerGraph& g, int R, int D) {
    if (D < 0 || D >= static_cast<int>(g.domains().size()))
        throw std::invalid_argument("unknown domain id " + std::to_string(D));
    if (g.domain(D).level != R)
        throw std::invalid_argument("census start domain must have level R=" + std::to_string(R));
}

} // namespace

std::vector<int> domains_of_level(const TowerGraph& g, int level) {
    std::vector<int> ids;
    for (const Domain& d : g.domains())
        if (d.level == level) ids.push_back(d.id);
    return ids;
}

mpz_class surviving_paths(const TowerGraph& g, int R, int D, int t) {
    check_start(g, R, D);
    Counts cur{{D, mpz_class(1)}};
    for (int k = 1; k <= t; ++k) cur = advance(g, R, cur, k);
    mpz_class total = 0;
    for (const auto& [id, c] : cur) total += c;
    return total;
}

CensusTable cutpoint_census(const TowerGraph& g, int R, int D, int T) {
    check_start(g, R, D);
    if (T < 0) throw std::invalid_argument("census horizon must be >= 0");
    CensusTable tbl;
    tbl.R = R;
    tbl.origin = D;
    tbl.T = T;
    const std::size_t width = static_cast<std::size_t>(T + R + 2);
    Counts cur{{D, mpz_class(1)}};
    for (int t = 0; t <= T; ++t) {
        if (t > 0) cur = advance(g, R, cur, t);
        mpz_class total = 0;
        std::vector<mpz_class> row(width, 0);
        for (const auto& [id, c] : cur) {
            total += c;
            for (const CutPoint& cp : g.domain(id).cutpoints) {
                if (static_cast<std::size_t>(cp.age) >= width)
                    throw std::logic_error("cutpoint age beyond census width");
                row[static_cast<std::size_t>(cp.age)] += c;
            }
        }
        tbl.s.push_back(total);
        tbl.L.push_back(std::move(row));
    }
    return tbl;
}

mpq_class s_bound_constant(int R, int N) {
    // sup over n of (R N^2 + R sum_{d=1..n} x^(d+1)) / x^(n+1), x = 2RN
    const mpq_class x(2 * R * N);
    mpq_class c = mpq_class(N, 2) + R * x / (x - 1);
    c.canonicalize();
    return c;
}

SurvivorBoundReport verify_survivor_bounds(const CensusTable& tbl, int N) {
    SurvivorBoundReport rep;
    const int R = tbl.R;
    const int T = tbl.T;
    const int width = static_cast<int>(tbl.L.empty() ? 0 : tbl.L[0].size());
    auto L = [&](int t, int m) -> const mpz_class& { return tbl.L[static_cast<std::size_t>(t)][static_cast<std::size_t>(m)]; };
    auto fail = [&](const std::string& msg) {
        if (rep.ok) rep.first_violation = msg;
        rep.ok = false;
    };
    if (R < 1) {
        fail("R must be >= 1 for the growth bounds");
        return rep;
    }

    // Lookback: a cutpoint of age m at time t comes from one of age m-l at time t-l.
    for (int t = 1; t <= T; ++t)
        for (int m = 2; m <= t && m < width; ++m)
            for (int l = 1; l < m; ++l) {
                ++rep.checks_lookback;
                if (L(t, m) > L(t - l, m - l))
                    fail("lookback: L_" + std::to_string(t) + "(" + std::to_string(m) + ")=" +
                         L(t, m).get_str() + " > L_" + std::to_string(t - l) + "(" +
                         std::to_string(m - l) + ")=" + L(t - l, m - l).get_str());
            }

    for (int t = 1; t <= T; ++t) {
        ++rep.checks_one_cutpoints;
        mpz_class rhs;
        if (t == 1) {
            rhs = N; // N times the single surviving 0-path
        } else {
            rhs = 0;
            for (int l = R + 1; l <= R + t - 1 && l < width; ++l) rhs += L(t - 1, l);
            rhs *= N;
        }
        if (L(t, 1) > rhs)
            fail("1-cutpoints: L_" + std::to_string(t) + "(1)=" + L(t, 1).get_str() + " > " +
                 rhs.get_str());
    }

    for (int t = 0; t <= T; ++t) {
        const int n = t == 0 ? 0 : (t + R - 1) / R;
        mpz_class big;
        mpz_ui_pow_ui(big.get_mpz_t(), static_cast<unsigned long>(2 * R), static_cast<unsigned long>(n));
        mpz_class nn;
        mpz_ui_pow_ui(nn.get_mpz_t(), static_cast<unsigned long>(N), static_cast<unsigned long>(n + 1));
        big *= nn;
        for (int j = 1; j < width; ++j) {
            ++rep.checks_table;
            mpz_class bound;
            if (j <= t) bound = big;
            else if (j <= t + R) bound = N;
            else bound = 0;
            if (L(t, j) > bound)
                fail("L-table: L_" + std::to_string(t) + "(" + std::to_string(j) + ")=" +
                     L(t, j).get_str() + " > " + bound.get_str());
        }
    }

    rep.C = s_bound_constant(R, N);
    for (int t = 0; t <= T; ++t) {
        const int n = t == 0 ? 0 : (t - 1) / R; // t = nR + j with 1 <= j <= R
        mpz_class xp;
        mpz_ui_pow_ui(xp.get_mpz_t(), static_cast<unsigned long>(2 * R * N), static_cast<unsigned long>(n + 1));
        const mpq_class bound = rep.C * mpq_class(xp);
        ++rep.checks_s_bound;
        if (mpq_class(tbl.s[static_cast<std::size_t>(t)]) > bound)
            fail("s-bound: s_R(" + std::to_string(t) + ")=" + tbl.s[static_cast<std::size_t>(t)].get_str() +
                 " > C(2RN)^" + std::to_string(n + 1));
    }
    return rep;
}

SubsetBound subset_count_bound(double eps, int n) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    SubsetBound out;
    const long kmax = static_cast<long>(std::floor(eps * n + 1e-9));
    out.below_regime = kmax < 1;
    mpz_class sum = 0;
    for (long k = 0; k <= kmax && k <= n; ++k) {
        mpz_class c;
        mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
        sum += c;
    }
    out.count = sum;
    long e = 0;
    const double m = mpz_get_d_2exp(&e, sum.get_mpz_t());
    out.log_count = std::log(m) + static_cast<double>(e) * std::log(2.0);
    const double l = -eps * std::log(eps) - (1 - eps) * std::log(1 - eps);
    out.log_bound = n * (eps + l);
    out.holds = out.log_count <= out.log_bound;
    return out;
}

} // namespace hofbauer
