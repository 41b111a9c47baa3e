#include "hofbauer/inducing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace hofbauer {

WitnessRegion choose_W(const TowerGraph& g, int D, const mpq_class& margin) {
    if (margin < 0) throw std::invalid_argument("margin must be >= 0");
    if (margin >= mpq_class(1, 2)) throw std::invalid_argument("margin must be below 1/2");
    const Domain& dom = g.domain(D);
    ArcSet region = dom.arcset;
    if (margin > 0) {
        for (const CutPoint& c : dom.cutpoints)
            for (const Angle& a : c.angles)
                region = region.minus(ArcSet::from_arcs({Arc{a.shifted(-margin), 2 * margin}}));
    }
    if (region.empty())
        throw std::invalid_argument("witness region of domain " + std::to_string(D) +
                                    " is empty for margin " + margin.get_str());
    return {D, std::move(region)};
}

double InducedSystem::censored_fraction() const {
    const double tot = static_cast<double>(returns.size() + censored);
    return tot > 0 ? static_cast<double>(censored) / tot : 1.0;
}

InducedSystem first_return(const SampleMeasure& mu, const TowerGraph& g, const WitnessRegion& W,
                           std::size_t horizon, int threads, std::size_t max_words) {
    if (W.arcs.empty()) throw std::invalid_argument("empty witness region");
    if (horizon > std::numeric_limits<std::uint32_t>::max())
        throw std::invalid_argument("horizon too large");
    const PartitionP1& p = g.partition();
    struct Acc {
        std::vector<ReturnBlock> returns;
        std::vector<Word> words;
        std::size_t censored = 0, never = 0;
        double freq = 0, wret = 0, wtau = 0;
    };
    Acc acc = detail::block_reduce<Acc>(
        mu.samples.size(), threads, [] { return Acc{}; },
        [&](Acc& a, std::size_t b, std::size_t e) {
            Tracer tr(g);
            std::vector<Symbol> syms(horizon);
            for (std::size_t s = b; s < e; ++s) {
                const double w = mu.samples[s].weight;
                AngleCursor cur(mu.samples[s].angle, p.degree());
                int node = 0;
                long last = -1;
                std::size_t visits = 0;
                for (std::size_t k = 0; k < horizon; ++k) {
                    syms[k] = p.symbol(cur);
                    if (node == W.domain && W.arcs.contains(cur)) {
                        ++visits;
                        if (last >= 0) {
                            const auto st = static_cast<std::size_t>(last);
                            a.returns.push_back({static_cast<std::uint32_t>(s),
                                                 static_cast<std::uint32_t>(st),
                                                 static_cast<std::uint32_t>(k - st)});
                            a.wret += w;
                            a.wtau += w * static_cast<double>(k - st);
                            if (a.words.size() < max_words)
                                a.words.emplace_back(syms.begin() + static_cast<std::ptrdiff_t>(st),
                                                     syms.begin() + static_cast<std::ptrdiff_t>(k));
                        }
                        last = static_cast<long>(k);
                    }
                    node = tr.next(node, syms[k]);
                    cur.advance();
                }
                if (last < 0) ++a.never;
                else ++a.censored;
                a.freq += w * static_cast<double>(visits) / static_cast<double>(horizon);
            }
        },
        [max_words](Acc& t, const Acc& q) {
            t.returns.insert(t.returns.end(), q.returns.begin(), q.returns.end());
            for (const Word& w : q.words)
                if (t.words.size() < max_words) t.words.push_back(w);
            t.censored += q.censored;
            t.never += q.never;
            t.freq += q.freq;
            t.wret += q.wret;
            t.wtau += q.wtau;
        });
    InducedSystem ind;
    ind.W = W;
    ind.horizon = horizon;
    ind.returns = std::move(acc.returns);
    ind.branch_words = std::move(acc.words);
    ind.censored = acc.censored;
    ind.never_entered = acc.never;
    ind.visit_frequency = acc.freq;
    ind.weighted_returns = acc.wret;
    ind.weighted_tau = acc.wtau;
    return ind;
}

KacResult kac_check(const InducedSystem& ind, double censor_threshold) {
    KacResult r;
    if (ind.returns.empty() || ind.visit_frequency <= 0) {
        r.note = "no returns recorded";
        return r;
    }
    r.mean_tau = ind.weighted_tau / ind.weighted_returns;
    r.inv_mass = 1.0 / ind.visit_frequency;
    r.rel_error = std::fabs(r.mean_tau - r.inv_mass) / r.inv_mass;
    const double cf = ind.censored_fraction();
    r.conclusive = cf < censor_threshold;
    r.note = r.conclusive ? "ok" : "censored fraction " + std::to_string(cf) + " exceeds threshold";
    return r;
}

ExpansionReport expansion_and_abramov(const InducedSystem& ind, const SampleMeasure& mu,
                                      const LandingSolver& sol, double log_jacobian, int threads) {
    ExpansionReport rep;
    if (ind.returns.empty()) return rep;
    rep.degenerate = false;
    constexpr int maxN = 10;

    // Samples with at least one return, and the range of their returns.
    std::vector<std::pair<std::size_t, std::size_t>> ranges; // [begin, end) into returns
    for (std::size_t i = 0; i < ind.returns.size();) {
        std::size_t j = i;
        while (j < ind.returns.size() && ind.returns[j].sample == ind.returns[i].sample) ++j;
        ranges.emplace_back(i, j);
        i = j;
    }
    struct Acc {
        std::vector<double> minN = std::vector<double>(maxN, std::numeric_limits<double>::infinity());
        double wf = 0, sf = 0, wF = 0, sF = 0, sJ = 0;
    };
    const std::size_t H = ind.horizon;
    Acc acc = detail::block_reduce<Acc>(
        ranges.size(), threads, [] { return Acc{}; },
        [&](Acc& a, std::size_t b, std::size_t e) {
            std::vector<double> blocks;
            for (std::size_t r = b; r < e; ++r) {
                const auto [lo, hi] = ranges[r];
                const std::size_t s = ind.returns[lo].sample;
                const double w = mu.samples[s].weight;
                const auto pts = sol.orbit(mu.samples[s].angle, H);
                std::vector<double> prefix(H + 1, 0.0);
                for (std::size_t k = 0; k < H; ++k) prefix[k + 1] = prefix[k] + log_deriv(sol.model(), pts[k]);
                a.wf += w;
                a.sf += w * prefix[H] / static_cast<double>(H);
                blocks.clear();
                for (std::size_t i = lo; i < hi; ++i) {
                    const ReturnBlock& rb = ind.returns[i];
                    const double v = prefix[rb.start + rb.tau] - prefix[rb.start];
                    blocks.push_back(v);
                    a.wF += w;
                    a.sF += w * v;
                    a.sJ += w * log_jacobian * static_cast<double>(rb.tau);
                }
                for (int N = 1; N <= maxN; ++N) {
                    double run = 0;
                    for (std::size_t i = 0; i < blocks.size(); ++i) {
                        run += blocks[i];
                        if (i >= static_cast<std::size_t>(N)) run -= blocks[i - static_cast<std::size_t>(N)];
                        if (i + 1 >= static_cast<std::size_t>(N))
                            a.minN[static_cast<std::size_t>(N - 1)] = std::min(a.minN[static_cast<std::size_t>(N - 1)], run);
                    }
                }
            }
        },
        [](Acc& t, const Acc& q) {
            for (std::size_t i = 0; i < t.minN.size(); ++i) t.minN[i] = std::min(t.minN[i], q.minN[i]);
            t.wf += q.wf;
            t.sf += q.sf;
            t.wF += q.wF;
            t.sF += q.sF;
            t.sJ += q.sJ;
        });
    rep.min_log_by_N = acc.minN;
    rep.min_log_expansion = acc.minN[0];
    for (int N = 1; N <= maxN; ++N)
        if (acc.minN[static_cast<std::size_t>(N - 1)] >= std::log(2.0)) {
            rep.iterate_for_two = N;
            break;
        }
    rep.lambda_f = acc.sf / acc.wf;
    rep.lambda_F = acc.sF / acc.wF;
    rep.abramov_rhs = ind.visit_frequency * rep.lambda_F;
    rep.abramov_rel_error = std::fabs(rep.lambda_f - rep.abramov_rhs) / std::fabs(rep.lambda_f);
    rep.h_F = acc.sJ / acc.wF;
    rep.h_product = ind.visit_frequency * rep.h_F;
    return rep;
}

std::vector<std::size_t> return_histogram(const InducedSystem& ind, std::size_t max_tau) {
    std::vector<std::size_t> h(max_tau + 1, 0);
    for (const ReturnBlock& r : ind.returns) ++h[std::min<std::size_t>(r.tau, max_tau)];
    return h;
}

} // namespace hofbauer
