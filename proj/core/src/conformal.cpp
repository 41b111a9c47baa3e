#include "hofbauer/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include "hofbauer/inducing.hpp"
#include "parallel.hpp"

namespace hofbauer {
namespace {

// Strongly connected components (iterative Tarjan); returns component id per vertex.
std::vector<int> scc(const std::vector<std::vector<int>>& adj, int& ncomp) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
    std::vector<char> on(n, 0);
    int counter = 0;
    ncomp = 0;
    std::vector<std::pair<int, std::size_t>> call;
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& [v, i] = call.back();
            if (i == 0) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on[v] = 1;
            }
            if (i < adj[v].size()) {
                const int w = adj[v][i++];
                if (index[w] < 0) {
                    call.push_back({w, 0});
                } else if (on[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                for (;;) {
                    const int w = stack.back();
                    stack.pop_back();
                    on[w] = 0;
                    comp[w] = ncomp;
                    if (w == v) break;
                }
                ++ncomp;
            }
            const int done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    return comp;
}

} // namespace

CylinderModel build_cylinder_model(const PartitionP1& p, const LandingSolver& s, std::size_t m) {
    if (m == 0) throw std::invalid_argument("cylinder depth must be >= 1");
    CylinderModel cm;
    cm.m = m;
    cm.words = admissible_words(p, m);
    std::map<Word, int> index;
    for (std::size_t i = 0; i < cm.words.size(); ++i) {
        index.emplace(cm.words[i], static_cast<int>(i));
        cm.cylinders.push_back(cylinder_arcset(cm.words[i], p));
        const Angle a = cm.cylinders.back().longest_component_midpoint();
        cm.rep_angles.push_back(a);
        const cplx z = s.land(a);
        cm.reps.push_back(z);
        cm.log_df.push_back(log_deriv(s.model(), z));
    }
    cm.succ.resize(cm.words.size());
    for (std::size_t i = 0; i < cm.words.size(); ++i) {
        const ArcSet img = cm.cylinders[i].times(p.degree());
        Word tail(cm.words[i].begin() + 1, cm.words[i].end());
        tail.push_back(0);
        for (Symbol z = 0; z < static_cast<Symbol>(p.size()); ++z) {
            tail.back() = z;
            auto it = index.find(tail);
            if (it == index.end()) continue;
            if (!img.intersect(cm.cylinders[static_cast<std::size_t>(it->second)]).empty())
                cm.succ[i].push_back(it->second);
        }
    }
    return cm;
}

std::vector<double> TransferOperator::apply(const std::vector<double>& v) const {
    std::vector<double> out(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        double acc = 0;
        for (int j : model->succ[i]) acc += v[static_cast<std::size_t>(j)];
        out[i] = weight[i] * acc;
    }
    return out;
}

TransferOperator build_operator(const CylinderModel& cm, double delta) {
    TransferOperator op;
    op.model = &cm;
    op.delta = delta;
    op.weight.reserve(cm.log_df.size());
    for (double l : cm.log_df) op.weight.push_back(std::exp(-delta * l));
    return op;
}

EigenResult leading_eigen(const TransferOperator& op, double tol, int max_iter,
                          const std::vector<double>* warm) {
    const CylinderModel& cm = *op.model;
    const std::size_t n = cm.words.size();
    EigenResult res;
    int ncomp = 0;
    const std::vector<int> comp = scc(cm.succ, ncomp);
    std::vector<char> keep(n, 1);
    if (ncomp > 1) {
        res.irreducible = false;
        std::vector<std::size_t> size(static_cast<std::size_t>(ncomp), 0);
        for (int c : comp) ++size[static_cast<std::size_t>(c)];
        const int big = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
        for (std::size_t i = 0; i < n; ++i) keep[i] = comp[i] == big;
    }
    std::vector<double> v(n, 0.0);
    if (warm && warm->size() == n) v = *warm;
    for (std::size_t i = 0; i < n; ++i) {
        if (!keep[i]) v[i] = 0;
        else if (!(v[i] > 0)) v[i] = 1.0;
    }
    auto normalize = [](std::vector<double>& x) {
        const double s = std::accumulate(x.begin(), x.end(), 0.0);
        for (double& t : x) t /= s;
    };
    normalize(v);
    auto apply_kept = [&](const std::vector<double>& x) {
        std::vector<double> y = op.apply(x);
        for (std::size_t i = 0; i < n; ++i)
            if (!keep[i]) y[i] = 0;
        return y;
    };
    std::vector<double> y;
    for (res.iterations = 1; res.iterations <= max_iter; ++res.iterations) {
        y = apply_kept(v);
        for (std::size_t i = 0; i < n; ++i) y[i] += v[i]; // shift keeps the iteration aperiodic
        normalize(y);
        double diff = 0;
        for (std::size_t i = 0; i < n; ++i) diff += std::fabs(y[i] - v[i]);
        v.swap(y);
        if (diff < tol) {
            res.converged = true;
            break;
        }
    }
    const std::vector<double> Lv = apply_kept(v);
    res.rho = std::accumulate(Lv.begin(), Lv.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) res.residual = std::max(res.residual, std::fabs(Lv[i] - res.rho * v[i]));
    res.v = std::move(v);
    if (!res.converged) throw std::runtime_error("power iteration did not converge");
    return res;
}

DeltaSolve solve_delta(const CylinderModel& cm, double tol, double grid_step, double eigen_tol) {
    DeltaSolve out;
    std::vector<double> warm;
    auto rho_at = [&](double d) {
        EigenResult e = leading_eigen(build_operator(cm, d), eigen_tol, 200000, warm.empty() ? nullptr : &warm);
        warm = e.v;
        out.irreducible = out.irreducible && e.irreducible;
        return e;
    };
    const int steps = static_cast<int>(std::lround(2.0 / grid_step));
    for (int k = 0; k <= steps; ++k) {
        const double d = 2.0 * k / steps;
        out.curve.emplace_back(d, rho_at(d).rho);
    }
    out.strictly_decreasing = true;
    for (std::size_t k = 1; k < out.curve.size(); ++k)
        out.strictly_decreasing = out.strictly_decreasing && out.curve[k].second < out.curve[k - 1].second;
    if (!(out.curve.front().second > 1.0 && out.curve.back().second < 1.0))
        throw std::runtime_error("rho(delta) = 1 is not bracketed on [0, 2]");
    double lo = 0.0, hi = 2.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (rho_at(mid).rho > 1.0) lo = mid;
        else hi = mid;
    }
    out.delta = 0.5 * (lo + hi);
    EigenResult e = rho_at(out.delta);
    out.weights = e.v;
    out.fixed_point_residual = e.residual;
    return out;
}

double conformality_residual(const PartitionP1& p, const LandingSolver& s, std::size_t m, double delta) {
    if (m == 0) return 0.0;
    const CylinderModel coarse = build_cylinder_model(p, s, m);
    const CylinderModel fine = build_cylinder_model(p, s, m + 2);
    const EigenResult e = leading_eigen(build_operator(fine, delta), 1e-13);
    std::map<Word, std::size_t> idx;
    for (std::size_t i = 0; i < coarse.words.size(); ++i) idx.emplace(coarse.words[i], i);
    std::vector<double> mass(coarse.words.size(), 0.0), image(coarse.words.size(), 0.0);
    for (std::size_t i = 0; i < fine.words.size(); ++i) {
        const Word pre(fine.words[i].begin(), fine.words[i].begin() + static_cast<std::ptrdiff_t>(m));
        const std::size_t z = idx.at(pre);
        mass[z] += e.v[i];
        for (int j : fine.succ[i]) image[z] += e.v[static_cast<std::size_t>(j)];
    }
    double worst = 0;
    for (std::size_t z = 0; z < coarse.words.size(); ++z)
        worst = std::max(worst, std::fabs(image[z] - std::exp(delta * coarse.log_df[z]) * mass[z]));
    return worst;
}

EquivalenceReport equivalence_experiment(const CylinderModel& cm, const std::vector<double>& weights,
                                         const LandingSolver& s, const TowerGraph& g,
                                         const EquivalenceParams& prm) {
    EquivalenceReport rep;
    const PartitionP1& p = g.partition();
    const std::size_t nmax = *std::max_element(prm.n_grid.begin(), prm.n_grid.end());
    const SampleMeasure mu = cylinder_samples(p, cm.cylinders, weights, prm.samples, prm.seed,
                                              nmax + static_cast<std::size_t>(s.params().depth));

    // Lyapunov side: fraction with |Df^n| > lambda0^n.
    const std::size_t nl = prm.lambda0_grid.size(), nn = prm.n_grid.size();
    using Acc = std::vector<double>;
    Acc lm = detail::block_reduce<Acc>(
        mu.samples.size(), prm.threads, [&] { return Acc(nl * nn, 0.0); },
        [&](Acc& a, std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                const auto pts = s.orbit(mu.samples[i].angle, nmax);
                double sum = 0;
                std::size_t k = 0;
                for (std::size_t j = 0; j < nn; ++j) {
                    for (; k < prm.n_grid[j]; ++k) sum += log_deriv(s.model(), pts[k]);
                    for (std::size_t l = 0; l < nl; ++l)
                        if (sum > static_cast<double>(prm.n_grid[j]) * std::log(prm.lambda0_grid[l]))
                            a[l * nn + j] += mu.samples[i].weight;
                }
            }
        },
        [](Acc& t, const Acc& q) {
            for (std::size_t i = 0; i < t.size(); ++i) t[i] += q[i];
        });
    // n_grid is processed in the order given; it must be increasing
    for (std::size_t l = 0; l < nl; ++l)
        for (std::size_t j = 0; j < nn; ++j)
            rep.lyapunov_mass.push_back({prm.lambda0_grid[l], prm.n_grid[j], lm[l * nn + j]});
    const std::size_t lmin = static_cast<std::size_t>(
        std::min_element(prm.lambda0_grid.begin(), prm.lambda0_grid.end()) - prm.lambda0_grid.begin());
    rep.positive_lyapunov_mass = lm[lmin * nn + (nn - 1)];

    // Liftability side.
    const auto curves = lift_curves(mu, g, prm.n_grid, prm.R_grid, prm.threads);
    rep.lift = liftability_verdict(curves, prm.n_grid, prm.R_grid, prm.floor);

    // Witness region for the conical frequency.
    int wd = prm.witness_domain;
    if (wd < 0) {
        const TowerMass tm = lift_cesaro(mu, g, nmax, prm.R, prm.threads);
        double best = -1;
        for (const Domain& d : g.domains())
            if (d.level >= 1 && d.level <= prm.R && tm.mass[static_cast<std::size_t>(d.id)] > best) {
                best = tm.mass[static_cast<std::size_t>(d.id)];
                wd = d.id;
            }
    }
    const WitnessRegion W = choose_W(g, wd, prm.margin);

    const std::size_t ne = prm.eps_grid.size();
    Acc vf = detail::block_reduce<Acc>(
        mu.samples.size(), prm.threads, [&] { return Acc(ne * nn + 1, 0.0); },
        [&](Acc& a, std::size_t b, std::size_t e) {
            Tracer tr(g);
            for (std::size_t i = b; i < e; ++i) {
                AngleCursor cur(mu.samples[i].angle, p.degree());
                int node = 0;
                std::size_t inside = 0, j = 0;
                bool late_visit = false;
                for (std::size_t k = 0; k < nmax; ++k) {
                    if (tr.level(node) <= prm.R) ++inside;
                    if (k >= nmax / 2 && node == W.domain && W.arcs.contains(cur)) late_visit = true;
                    while (j < nn && k + 1 == prm.n_grid[j]) {
                        for (std::size_t q = 0; q < ne; ++q)
                            if (static_cast<double>(inside) > prm.eps_grid[q] * static_cast<double>(prm.n_grid[j]))
                                a[q * nn + j] += mu.samples[i].weight;
                        ++j;
                    }
                    node = tr.next(node, p.symbol(cur));
                    cur.advance();
                }
                if (late_visit) a.back() += mu.samples[i].weight;
            }
        },
        [](Acc& t, const Acc& q) {
            for (std::size_t i = 0; i < t.size(); ++i) t[i] += q[i];
        });
    for (std::size_t q = 0; q < ne; ++q)
        for (std::size_t j = 0; j < nn; ++j)
            rep.visit_frequency.push_back({prm.eps_grid[q], prm.n_grid[j], vf[q * nn + j]});
    rep.conical_frequency = vf.back();

    // Density of the projected lift against the conformal weights.
    const std::size_t md = std::min(prm.density_depth, cm.m);
    std::map<Word, double> agg;
    for (std::size_t i = 0; i < cm.words.size(); ++i)
        agg[Word(cm.words[i].begin(), cm.words[i].begin() + static_cast<std::ptrdiff_t>(md))] += weights[i];
    std::vector<Word> dwords;
    std::vector<double> dref;
    for (const auto& [w, x] : agg) {
        dwords.push_back(w);
        dref.push_back(x);
    }
    rep.density = project_and_density(mu, g, nmax, prm.R, dwords, dref, prm.threads);
    rep.min_density = std::numeric_limits<double>::infinity();
    for (const DensityEntry& d : rep.density) {
        if (d.reference <= 1e-15) rep.null_set_mass += d.projected;
        if (!d.skipped) rep.min_density = std::min(rep.min_density, d.ratio);
    }
    rep.densities_positive = rep.min_density > 0 && std::isfinite(rep.min_density);

    const bool lyap_side = rep.positive_lyapunov_mass >= prm.floor;
    const bool lift_side = rep.lift.verdict == Verdict::liftable;
    rep.consistent = rep.lift.verdict != Verdict::inconclusive && lyap_side == lift_side;
    rep.summary = std::string("positive-Lyapunov mass ") + std::to_string(rep.positive_lyapunov_mass) +
                  ", lift verdict " + to_string(rep.lift.verdict) +
                  (rep.consistent ? ": sides agree" : ": sides do not agree or are undetermined");
    return rep;
}

} // namespace hofbauer
