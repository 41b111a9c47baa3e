#include "hofbauer/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "hofbauer/random.hpp"
#include "parallel.hpp"

namespace hofbauer {
namespace {

// Calls f(k, node, level, symbol, cursor) for k = 0..steps along the lift of a from the base.
template <class F>
void walk(Tracer& tr, const Angle& a, std::size_t steps, F&& f) {
    const PartitionP1& p = tr.graph().partition();
    AngleCursor cur(a, p.degree());
    int node = 0;
    for (std::size_t k = 0;; ++k) {
        const Symbol s = p.symbol(cur);
        f(k, node, tr.level(node), s, cur);
        if (k == steps) break;
        node = tr.next(node, s);
        cur.advance();
    }
}

void add_into(std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
}

bool orbit_meets_boundary(const PartitionP1& p, const Angle& a) {
    const OrbitShape sh = orbit_shape(a, p.degree());
    Angle x = a;
    for (std::size_t k = 0; k < sh.preperiod + sh.period; ++k) {
        if (p.is_boundary(x)) return true;
        x = x.times(p.degree());
    }
    return false;
}

SampleMeasure normalized(std::vector<Sample> s, std::string tag, std::uint64_t seed) {
    double tot = 0;
    for (const Sample& x : s) {
        if (!(x.weight > 0)) throw std::invalid_argument("sample weights must be positive");
        tot += x.weight;
    }
    if (s.empty()) throw std::invalid_argument("empty sample measure");
    for (Sample& x : s) x.weight /= tot;
    return {std::move(s), std::move(tag), seed};
}

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

double SampleMeasure::total_weight() const {
    double t = 0;
    for (const Sample& s : samples) t += s.weight;
    return t;
}

SampleMeasure brolin_samples(const PartitionP1& p, std::size_t count, std::uint64_t seed,
                             std::size_t horizon) {
    auto rng = make_stream(seed, Stream::brolin);
    const unsigned long digits = static_cast<unsigned long>(horizon) + 64;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), p.degree(), digits);
    std::vector<Sample> out;
    out.reserve(count);
    while (out.size() < count) {
        mpz_class num = 0;
        if (p.degree() == 2) {
            num = random_bits(rng, digits);
        } else {
            for (unsigned long i = 0; i < digits; ++i) {
                num *= p.degree();
                num += static_cast<unsigned long>(rng() % p.degree());
            }
        }
        Angle a(mpq_class(num, den));
        if (hits_boundary(a, p, horizon)) continue;
        out.push_back({std::move(a), 1.0});
    }
    return normalized(std::move(out), "brolin", seed);
}

SampleMeasure dirac_sample(const PartitionP1& p, const Angle& a) {
    if (orbit_meets_boundary(p, a))
        throw std::invalid_argument("angle " + a.to_string() +
                                    " is precritical: its orbit meets a partition boundary");
    return normalized({{a, 1.0}}, "dirac-periodic", 0);
}

SampleMeasure orbit_samples(const PartitionP1& p, const Angle& a, std::size_t n) {
    if (n == 0) throw std::invalid_argument("orbit sample of length 0");
    if (orbit_meets_boundary(p, a))
        throw std::invalid_argument("angle " + a.to_string() + " is precritical");
    std::vector<Sample> out;
    Angle x = a;
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back({x, 1.0});
        x = x.times(p.degree());
    }
    return normalized(std::move(out), "orbit-empirical", 0);
}

SampleMeasure custom_samples(std::vector<Sample> samples) {
    return normalized(std::move(samples), "custom", 0);
}

SampleMeasure cylinder_samples(const PartitionP1& p, const std::vector<ArcSet>& cylinders,
                               const std::vector<double>& weights, std::size_t count,
                               std::uint64_t seed, std::size_t horizon) {
    if (cylinders.size() != weights.size() || cylinders.empty())
        throw std::invalid_argument("cylinder and weight lists differ in size");
    std::vector<double> cdf(weights.size());
    std::partial_sum(weights.begin(), weights.end(), cdf.begin());
    const double total = cdf.back();
    if (!(total > 0)) throw std::invalid_argument("cylinder weights sum to zero");
    auto rng = make_stream(seed, Stream::conformal);
    const unsigned long bits = static_cast<unsigned long>(horizon) + 64;
    mpz_class den = 1;
    den <<= static_cast<mp_bitcnt_t>(bits);
    std::vector<Sample> out;
    out.reserve(count);
    while (out.size() < count) {
        const double u = unit_uniform(rng) * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()),
                                                      cdf.size() - 1);
        const ArcSet& cyl = cylinders[idx];
        if (cyl.empty()) continue;
        // pick a component by length, then a uniform point in it
        const mpq_class len = cyl.total_length();
        const mpq_class pick = len * mpq_class(random_bits(rng, bits), den);
        mpq_class acc = 0;
        const Arc* comp = &cyl.components().back();
        for (const Arc& c : cyl.components()) {
            if (pick < acc + c.length) {
                comp = &c;
                break;
            }
            acc += c.length;
        }
        const mpq_class off = comp->length * mpq_class(random_bits(rng, bits), den);
        Angle a = comp->start.shifted(off);
        if (hits_boundary(a, p, horizon)) continue;
        out.push_back({std::move(a), 1.0});
    }
    return normalized(std::move(out), "conformal", seed);
}

double TowerMass::retained() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

TowerMass lift_cesaro(const SampleMeasure& mu, const TowerGraph& g, std::size_t n, int R,
                      int threads) {
    if (n == 0) throw std::invalid_argument("Cesàro horizon must be >= 1");
    if (R > g.expand_limit()) throw std::invalid_argument("tower not expanded to level R");
    struct Acc {
        std::vector<double> mass;
        double escaped = 0;
    };
    const std::size_t D = g.domains().size();
    const double inv_n = 1.0 / static_cast<double>(n);
    Acc acc = detail::block_reduce<Acc>(
        mu.samples.size(), threads, [D] { return Acc{std::vector<double>(D, 0.0), 0.0}; },
        [&](Acc& a, std::size_t b, std::size_t e) {
            Tracer tr(g);
            // Integer visit counts per sample keep the rounding to one add per node.
            std::vector<std::size_t> cnt(D, 0);
            for (std::size_t i = b; i < e; ++i) {
                std::size_t esc = 0;
                walk(tr, mu.samples[i].angle, n - 1, [&](std::size_t, int node, int lvl, Symbol, const AngleCursor&) {
                    if (lvl <= R) ++cnt[static_cast<std::size_t>(node)];
                    else ++esc;
                });
                const double w = mu.samples[i].weight * inv_n;
                for (std::size_t k = 0; k < D; ++k) {
                    if (cnt[k] == 0) continue;
                    a.mass[k] += w * static_cast<double>(cnt[k]);
                    cnt[k] = 0;
                }
                a.escaped += w * static_cast<double>(esc);
            }
        },
        [](Acc& t, const Acc& p) {
            add_into(t.mass, p.mass);
            t.escaped += p.escaped;
        });
    return TowerMass{std::move(acc.mass), acc.escaped, n, R};
}

std::vector<CurvePoint> lift_curves(const SampleMeasure& mu, const TowerGraph& g,
                                    const std::vector<std::size_t>& n_grid,
                                    const std::vector<int>& R_grid, int threads) {
    if (n_grid.empty() || R_grid.empty()) return {};
    const std::size_t nmax = *std::max_element(n_grid.begin(), n_grid.end());
    const int Rmax = *std::max_element(R_grid.begin(), R_grid.end());
    if (Rmax > g.expand_limit()) throw std::invalid_argument("tower not expanded to the largest R");
    if (*std::min_element(n_grid.begin(), n_grid.end()) == 0)
        throw std::invalid_argument("Cesàro horizon must be >= 1");
    const std::size_t nn = n_grid.size(), nr = R_grid.size();
    using Acc = std::vector<double>; // [i * nr + j] = weighted retained fraction
    Acc acc = detail::block_reduce<Acc>(
        mu.samples.size(), threads, [&] { return Acc(nn * nr, 0.0); },
        [&](Acc& a, std::size_t b, std::size_t e) {
            Tracer tr(g);
            std::vector<std::size_t> cnt(nr);
            for (std::size_t s = b; s < e; ++s) {
                std::fill(cnt.begin(), cnt.end(), 0);
                const double w = mu.samples[s].weight;
                walk(tr, mu.samples[s].angle, nmax - 1,
                     [&](std::size_t k, int, int lvl, Symbol, const AngleCursor&) {
                         for (std::size_t j = 0; j < nr; ++j)
                             if (lvl <= R_grid[j]) ++cnt[j];
                         for (std::size_t i = 0; i < nn; ++i)
                             if (k + 1 == n_grid[i])
                                 for (std::size_t j = 0; j < nr; ++j)
                                     a[i * nr + j] += w * static_cast<double>(cnt[j]) /
                                                      static_cast<double>(n_grid[i]);
                     });
            }
        },
        [](Acc& t, const Acc& p) { add_into(t, p); });
    const double tot = mu.total_weight();
    std::vector<CurvePoint> out;
    for (std::size_t i = 0; i < nn; ++i)
        for (std::size_t j = 0; j < nr; ++j)
            out.push_back({n_grid[i], R_grid[j], acc[i * nr + j], tot - acc[i * nr + j]});
    return out;
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::liftable: return "liftable";
    case Verdict::not_liftable: return "not-liftable";
    default: return "inconclusive";
    }
}

LiftReport liftability_verdict(const std::vector<CurvePoint>& curves,
                               const std::vector<std::size_t>& n_grid,
                               const std::vector<int>& R_grid, double floor) {
    LiftReport rep;
    rep.curves = curves;
    rep.floor = floor;
    if (n_grid.size() < 2 || R_grid.size() < 2) {
        rep.note = "grid too small: need at least two n and two R values";
        return rep;
    }
    auto value = [&](std::size_t n, int R) {
        for (const CurvePoint& c : curves)
            if (c.n == n && c.R == R) return c.retained;
        throw std::invalid_argument("curve point missing for n=" + std::to_string(n) +
                                    " R=" + std::to_string(R));
    };
    const std::size_t nlast = *std::max_element(n_grid.begin(), n_grid.end());
    bool all_below = true;
    for (int R : R_grid) {
        bool stable = true;
        for (std::size_t n : n_grid) stable = stable && value(n, R) >= floor;
        if (stable && rep.verdict != Verdict::liftable) {
            rep.verdict = Verdict::liftable;
            rep.witness_R = R;
        }
        all_below = all_below && value(nlast, R) < floor;
    }
    if (rep.verdict != Verdict::liftable && all_below) rep.verdict = Verdict::not_liftable;
    rep.note = "empirical surrogate: retained mass floor over finite n and R grids";
    return rep;
}

DefectReport invariance_defect(const SampleMeasure& mu, const TowerGraph& g, std::size_t n,
                               const std::vector<int>& test_ids, int threads) {
    if (n == 0) throw std::invalid_argument("Cesàro horizon must be >= 1");
    const std::size_t T = test_ids.size();
    using Acc = std::vector<double>; // [2t] = nu_n(phi), [2t+1] = nu_n(phi o F)
    const double inv_n = 1.0 / static_cast<double>(n);
    Acc acc = detail::block_reduce<Acc>(
        mu.samples.size(), threads, [&] { return Acc(2 * T, 0.0); },
        [&](Acc& a, std::size_t b, std::size_t e) {
            Tracer tr(g);
            for (std::size_t s = b; s < e; ++s) {
                const double w = mu.samples[s].weight * inv_n;
                walk(tr, mu.samples[s].angle, n, [&](std::size_t k, int node, int, Symbol, const AngleCursor&) {
                    for (std::size_t t = 0; t < T; ++t) {
                        if (node != test_ids[t]) continue;
                        if (k < n) a[2 * t] += w;      // x_k in D, k = 0..n-1
                        if (k >= 1) a[2 * t + 1] += w; // F(x_{k-1}) in D
                    }
                });
            }
        },
        [](Acc& t, const Acc& p) { add_into(t, p); });
    DefectReport rep;
    rep.bound = 2.0 / static_cast<double>(n);
    for (std::size_t t = 0; t < T; ++t) {
        const double d = std::fabs(acc[2 * t + 1] - acc[2 * t]);
        if (d > rep.defect || rep.worst_test < 0) {
            rep.defect = std::max(rep.defect, d);
            rep.worst_test = test_ids[t];
        }
    }
    return rep;
}

std::vector<double> arc_length_reference(const PartitionP1& p, const std::vector<Word>& words) {
    std::vector<double> out;
    out.reserve(words.size());
    for (const Word& w : words) out.push_back(cylinder_arcset(w, p).total_length().get_d());
    return out;
}

std::vector<DensityEntry> project_and_density(const SampleMeasure& mu, const TowerGraph& g,
                                              std::size_t n, int R, const std::vector<Word>& words,
                                              const std::vector<double>& reference, int threads) {
    if (words.size() != reference.size()) throw std::invalid_argument("reference size mismatch");
    if (words.empty()) return {};
    const std::size_t m = words.front().size();
    const std::uint64_t N = g.partition().size();
    std::unordered_map<std::uint64_t, std::size_t> index;
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::uint64_t code = 0;
        for (Symbol s : words[i]) code = code * N + static_cast<std::uint64_t>(s);
        index.emplace(code, i);
    }
    std::uint64_t top = 1;
    for (std::size_t i = 0; i < m; ++i) top *= N;
    const double inv_n = 1.0 / static_cast<double>(n);
    using Acc = std::vector<double>; // [i] projected mass, back() retained total
    Acc acc = detail::block_reduce<Acc>(
        mu.samples.size(), threads, [&] { return Acc(words.size() + 1, 0.0); },
        [&](Acc& a, std::size_t b, std::size_t e) {
            Tracer tr(g);
            std::vector<int> levels(n);
            std::vector<Symbol> syms(n + m);
            for (std::size_t s = b; s < e; ++s) {
                const double w = mu.samples[s].weight * inv_n;
                walk(tr, mu.samples[s].angle, n + m - 1,
                     [&](std::size_t k, int, int lvl, Symbol sy, const AngleCursor&) {
                         if (k < n) levels[k] = lvl;
                         syms[k] = sy;
                     });
                std::uint64_t code = 0;
                for (std::size_t k = 0; k + 1 < m; ++k) code = code * N + static_cast<std::uint64_t>(syms[k]);
                for (std::size_t k = 0; k < n; ++k) {
                    code = (code * N + static_cast<std::uint64_t>(syms[k + m - 1])) % top;
                    if (levels[k] > R) continue;
                    a.back() += w;
                    auto it = index.find(code);
                    if (it != index.end()) a[it->second] += w;
                }
            }
        },
        [](Acc& t, const Acc& p) { add_into(t, p); });
    std::vector<DensityEntry> out;
    const double kept = acc.back();
    for (std::size_t i = 0; i < words.size(); ++i) {
        DensityEntry e;
        e.word = words[i];
        e.projected = kept > 0 ? acc[i] / kept : 0.0;
        e.reference = reference[i];
        e.skipped = !(reference[i] > 0);
        e.ratio = e.skipped ? 0.0 : e.projected / reference[i];
        out.push_back(std::move(e));
    }
    return out;
}

double cutpoint_margin_mass(const SampleMeasure& mu, const TowerGraph& g, std::size_t n, int D,
                            double margin, int threads) {
    const Domain& dom = g.domain(D);
    std::vector<double> cut;
    for (const CutPoint& c : dom.cutpoints)
        for (const Angle& a : c.angles) cut.push_back(a.to_double());
    if (cut.empty() || n == 0) return 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    return detail::block_reduce<double>(
        mu.samples.size(), threads, [] { return 0.0; },
        [&](double& a, std::size_t b, std::size_t e) {
            Tracer tr(g);
            for (std::size_t s = b; s < e; ++s) {
                const double w = mu.samples[s].weight * inv_n;
                walk(tr, mu.samples[s].angle, n - 1,
                     [&](std::size_t, int node, int, Symbol, const AngleCursor& cur) {
                         if (node != D) return;
                         const double x = cur.approx();
                         for (double c : cut) {
                             double gap = std::fabs(x - c);
                             gap = std::min(gap, 1.0 - gap);
                             if (gap < margin) {
                                 a += w;
                                 return;
                             }
                         }
                     });
            }
        },
        [](double& t, const double& p) { t += p; });
}

LyapunovPair lyapunov_consistency(const SampleMeasure& mu, const LandingSolver& sol,
                                  const TowerGraph& g, std::size_t n, int R, int threads) {
    if (n == 0) throw std::invalid_argument("Birkhoff average over zero steps");
    struct Acc {
        double wf = 0, sf = 0;   // weight and weighted mean of log|Df|
        double wt = 0, st = 0;   // lifted weight and weighted sum inside levels <= R
        std::size_t excluded = 0;
    };
    Acc acc = detail::block_reduce<Acc>(
        mu.samples.size(), threads, [] { return Acc{}; },
        [&](Acc& a, std::size_t b, std::size_t e) {
            Tracer tr(g);
            std::vector<int> levels(n);
            for (std::size_t s = b; s < e; ++s) {
                const Sample& smp = mu.samples[s];
                const auto pts = sol.orbit(smp.angle, n);
                bool bad = false;
                for (const cplx& z : pts) bad = bad || std::abs(z) < 1e-12;
                if (bad) {
                    ++a.excluded;
                    continue;
                }
                walk(tr, smp.angle, n - 1, [&](std::size_t k, int, int lvl, Symbol, const AngleCursor&) {
                    levels[k] = lvl;
                });
                double sum = 0, in_sum = 0;
                std::size_t in_cnt = 0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double v = log_deriv(sol.model(), pts[k]);
                    sum += v;
                    if (levels[k] <= R) {
                        in_sum += v;
                        ++in_cnt;
                    }
                }
                a.wf += smp.weight;
                a.sf += smp.weight * sum / static_cast<double>(n);
                a.wt += smp.weight * static_cast<double>(in_cnt) / static_cast<double>(n);
                a.st += smp.weight * in_sum / static_cast<double>(n);
            }
        },
        [](Acc& t, const Acc& p) {
            t.wf += p.wf;
            t.sf += p.sf;
            t.wt += p.wt;
            t.st += p.st;
            t.excluded += p.excluded;
        });
    LyapunovPair out;
    out.excluded = acc.excluded;
    out.lambda_f = acc.wf > 0 ? acc.sf / acc.wf : 0.0;
    out.tower_defined = acc.wt > 1e-9;
    out.lambda_tower = out.tower_defined ? acc.st / acc.wt : 0.0;
    return out;
}

EntropyReport entropy_estimate(const SampleMeasure& mu, const PartitionP1& p,
                               const std::vector<std::size_t>& m_grid, double min_per_cell) {
    EntropyReport rep;
    if (m_grid.empty()) {
        rep.warning = "empty m grid";
        return rep;
    }
    double w2 = 0;
    for (const Sample& s : mu.samples) w2 += s.weight * s.weight;
    const double n_eff = 1.0 / w2;
    const std::size_t mmax = *std::max_element(m_grid.begin(), m_grid.end());
    std::vector<Word> words;
    words.reserve(mu.samples.size());
    for (const Sample& s : mu.samples) {
        Word w;
        w.reserve(mmax);
        AngleCursor cur(s.angle, p.degree());
        for (std::size_t k = 0; k < mmax; ++k) {
            w.push_back(p.symbol(cur));
            cur.advance();
        }
        words.push_back(std::move(w));
    }
    for (std::size_t m : m_grid) {
        std::map<Word, double> freq;
        for (std::size_t i = 0; i < words.size(); ++i)
            freq[Word(words[i].begin(), words[i].begin() + static_cast<std::ptrdiff_t>(m))] +=
                mu.samples[i].weight;
        double H = 0;
        for (const auto& [w, q] : freq)
            if (q > 0) H -= q * std::log(q);
        H += (static_cast<double>(freq.size()) - 1.0) / (2.0 * n_eff);
        const bool ok = n_eff >= min_per_cell * static_cast<double>(freq.size());
        rep.points.push_back({m, H, freq.size(), ok});
    }
    std::vector<const EntropyPoint*> good;
    for (const auto& pt : rep.points)
        if (pt.sufficient && pt.m > 0) good.push_back(&pt);
    if (good.empty()) {
        rep.warning = "cylinder counts below threshold for every m";
        return rep;
    }
    rep.h_ratio = good.back()->H / static_cast<double>(good.back()->m);
    if (good.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto* pt : good) {
            const double x = static_cast<double>(pt->m);
            sx += x;
            sy += pt->H;
            sxx += x * x;
            sxy += x * pt->H;
        }
        const double k = static_cast<double>(good.size());
        rep.h = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    } else {
        rep.h = rep.h_ratio;
    }
    rep.sufficient = true;
    if (good.size() < rep.points.size())
        rep.warning = "some m skipped: fewer than " + std::to_string(min_per_cell) +
                      " samples per occupied cylinder";
    return rep;
}

WanderingProbe wandering_probe(const SampleMeasure& mu, const TowerGraph& g, std::size_t n,
                               const std::vector<int>& ids, std::size_t h, int threads) {
    if (h == 0 || n == 0) throw std::invalid_argument("wandering probe needs h, n >= 1");
    struct Acc {
        double mass = 0;
        bool disjoint = true;
    };
    const double inv_n = 1.0 / static_cast<double>(n);
    Acc acc = detail::block_reduce<Acc>(
        mu.samples.size(), threads, [] { return Acc{}; },
        [&](Acc& a, std::size_t b, std::size_t e) {
            Tracer tr(g);
            for (std::size_t s = b; s < e; ++s) {
                const double w = mu.samples[s].weight * inv_n;
                long last = -1;
                walk(tr, mu.samples[s].angle, n + h - 1, [&](std::size_t k, int node, int, Symbol, const AngleCursor&) {
                    if (std::find(ids.begin(), ids.end(), node) == ids.end()) return;
                    if (k < n) a.mass += w;
                    if (last >= 0 && k - static_cast<std::size_t>(last) < h) a.disjoint = false;
                    last = static_cast<long>(k);
                });
            }
        },
        [](Acc& t, const Acc& p) {
            t.mass += p.mass;
            t.disjoint = t.disjoint && p.disjoint;
        });
    WanderingProbe out;
    out.mass = acc.mass;
    out.disjoint = acc.disjoint;
    out.bound = 1.0 / static_cast<double>(h) +
                static_cast<double>(h - 1) / (2.0 * static_cast<double>(n));
    return out;
}

MergeStats merge_statistics(const SampleMeasure& mu, const TowerGraph& g, int d1, int d2,
                            std::size_t horizon) {
    MergeStats st;
    double tsum = 0;
    for (const Sample& s : mu.samples) {
        if (!g.domain(d1).arcset.contains(s.angle) || !g.domain(d2).arcset.contains(s.angle)) continue;
        const MergeResult r = fiber_merge(s.angle, g, d1, d2, horizon);
        if (r.merged) {
            ++st.merged;
            tsum += r.time;
        } else if (r.climbed) {
            ++st.climbed;
        } else {
            ++st.open;
        }
    }
    st.mean_time = st.merged ? tsum / static_cast<double>(st.merged) : 0.0;
    return st;
}

} // namespace hofbauer
