// Runs the twelve acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "commands.hpp"
#include "hofbauer/census.hpp"
#include "hofbauer/conformal.hpp"
#include "hofbauer/inducing.hpp"
#include "oracles.hpp"

using namespace hofbauer;
namespace fs = std::filesystem;

namespace {

const RayChoice kCheb{2, {Angle(1, 2)}};
const RayChoice kDendrite{2, {Angle(1, 6)}};
const RayChoice kTwoRays{2, {Angle(5, 12), Angle(7, 12)}};
const char* kConfigs[] = {"chebyshev", "dendrite_i", "misiurewicz_k2"};

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double rel(double x, double ref) { return std::fabs(x - ref) / std::fabs(ref); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

cli::RunContext context(const std::string& name, const fs::path& out) {
    return cli::make_context(cli::load_config(std::string(HOFBAUER_CONFIG_DIR) + "/" + name + ".ini"), out.string(), 1);
}

Outcome tower_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const TowerGraph g = build_tower(kCheb, 6);
    const StructuralReport rep = structural_checks(g);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = g.domains().size() == 7 && rep.ok();
    for (const Domain& d : g.domains()) {
        if (d.level < 2) continue;
        std::set<int> ages;
        for (const CutPoint& c : d.cutpoints) ages.insert(c.age);
        ok = ok && ages == std::set<int>{1, d.level};
    }
    const oracle::IntervalTower t = oracle::interval_tower(-2.0, 6);
    ok = ok && t.domains.size() == g.domains().size();
    std::set<std::tuple<int, int, int>> eg, et(t.edges.begin(), t.edges.end());
    for (const Edge& e : g.edges()) eg.emplace(e.from, e.symbol, e.to);
    ok = ok && eg == et;
    for (std::size_t i = 0; ok && i < t.domains.size(); ++i) ok = t.domains[i].level() == g.domains()[i].level;
    ok = ok && secs < 1.0;
    return {ok, std::to_string(g.domains().size()) + " domains, interval oracle " + (eg == et ? "matches" : "differs") +
                    ", " + fmt("%.3f s", secs)};
}

Outcome level_bound() {
    int worst = 0;
    std::size_t violations = 0;
    bool ok = true;
    for (const RayChoice& rc : {kCheb, kDendrite, kTwoRays})
        for (int R = 1; R <= 12; ++R) {
            const StructuralReport rep = structural_checks(build_tower(rc, R));
            violations += rep.violations.size();
            for (std::size_t l = 1; l < rep.level_counts.size(); ++l) {
                ok = ok && rep.level_counts[l] <= static_cast<int>(rc.kappa());
                if (rc.kappa() == 1) worst = std::max(worst, rep.level_counts[l]);
            }
        }
    return {ok && violations == 0, "max per-level count " + std::to_string(worst) + " for kappa=1, " +
                                       std::to_string(violations) + " violations"};
}

Outcome markov_exactness() {
    std::size_t edges = 0, bad = 0;
    for (const RayChoice& rc : {kCheb, kDendrite, kTwoRays})
        for (int R = 1; R <= 12; ++R) {
            const TowerGraph g = build_tower(rc, R);
            const PartitionP1& p = g.partition();
            for (const Edge& e : g.edges()) {
                ++edges;
                if (!(g.domain(e.from).arcset.intersect(p.arc(e.symbol)).times(p.degree()) == g.domain(e.to).arcset)) ++bad;
            }
            for (const FrontierEdge& f : g.frontier_edges()) {
                ++edges;
                if (!(g.domain(f.from).arcset.intersect(p.arc(f.symbol)).times(p.degree()) == f.marker.arcset)) ++bad;
            }
        }
    return {bad == 0, std::to_string(edges) + " edges, " + std::to_string(bad) + " inexact"};
}

Outcome survivor_census() {
    const auto t0 = std::chrono::steady_clock::now();
    const TowerGraph g = build_tower(kDendrite, 2, 20);
    bool ok = true;
    long checks = 0;
    std::string first;
    for (int D : domains_of_level(g, 2)) {
        const CensusTable tbl = cutpoint_census(g, 2, D, 20);
        const SurvivorBoundReport rep = verify_survivor_bounds(tbl, static_cast<int>(g.partition().size()));
        if (!rep.ok && first.empty()) first = rep.first_violation;
        // Every family must actually have been exercised.
        ok = ok && rep.ok && rep.checks_lookback > 0 && rep.checks_one_cutpoints > 0 && rep.checks_table > 0 &&
             rep.checks_s_bound > 0;
        checks += rep.checks_lookback + rep.checks_one_cutpoints + rep.checks_table + rep.checks_s_bound;
        const auto brute = oracle::brute_census(g.domain(D), g.partition(), 2, 8);
        for (int t = 0; t <= 8; ++t) {
            ok = ok && tbl.s[static_cast<std::size_t>(t)] == brute.s[static_cast<std::size_t>(t)];
            for (std::size_t m = 0; m < tbl.L[0].size(); ++m) {
                const auto& bm = brute.L[static_cast<std::size_t>(t)];
                const mpz_class want = bm.count(static_cast<int>(m)) ? bm.at(static_cast<int>(m)) : mpz_class(0);
                ok = ok && tbl.L[static_cast<std::size_t>(t)][m] == want;
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && secs < 30.0;
    return {ok, (first.empty() ? std::to_string(checks) + " exact checks hold" : first) + ", DP = brute force for t <= 8, " +
                    fmt("%.2f s", secs)};
}

Outcome subset_bound() {
    int held = 0;
    for (int n : {20, 40, 60})
        for (double eps : {0.05, 0.1, 0.2, 0.3}) held += subset_count_bound(eps, n).holds ? 1 : 0;
    return {held == 12, std::to_string(held) + "/12 pairs"};
}

Outcome lifting_sanity() {
    double cons = 0, worst_ratio = 0;
    bool monotone = true;
    for (const RayChoice& rc : {kCheb, kDendrite, kTwoRays}) {
        const TowerGraph g = build_tower(rc, 8);
        const SampleMeasure mu = brolin_samples(g.partition(), 2000, 31, 1000);
        std::vector<int> ids;
        for (const Domain& d : g.domains()) ids.push_back(d.id);
        for (std::size_t n : {100, 1000}) {
            for (int R = 0; R <= 8; ++R) {
                const TowerMass tm = lift_cesaro(mu, g, n, R);
                cons = std::max(cons, std::fabs(tm.retained() + tm.escaped - 1.0));
            }
            const DefectReport dr = invariance_defect(mu, g, n, ids);
            worst_ratio = std::max(worst_ratio, dr.defect / dr.bound);
        }
        const auto curves = lift_curves(mu, g, {100, 1000}, {0, 1, 2, 3, 4, 5, 6, 7, 8});
        for (std::size_t i = 1; i < curves.size(); ++i)
            if (curves[i].n == curves[i - 1].n && curves[i].retained < curves[i - 1].retained) monotone = false;
    }
    return {cons <= 1e-12 && worst_ratio <= 1.0 && monotone,
            "conservation error " + fmt("%.1e", cons) + ", defect/bound " + fmt("%.3f", worst_ratio) +
                ", retained monotone in R: " + (monotone ? "yes" : "no")};
}

Outcome brolin_liftable() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (const RayChoice& rc : {kCheb, kDendrite}) {
        const TowerGraph g = build_tower(rc, 8);
        const SampleMeasure mu = brolin_samples(g.partition(), 10000, 2024, 1000);
        const auto curves = lift_curves(mu, g, {250, 500, 1000}, {4, 6, 8});
        const LiftReport lr = liftability_verdict(curves, {250, 500, 1000}, {4, 6, 8});
        double r = 0;
        for (const CurvePoint& c : curves)
            if (c.n == 1000 && c.R == 8) r = c.retained;
        ok = ok && lr.verdict == Verdict::liftable && r >= 0.5;
        detail += rc.angles[0].to_string() + ": " + to_string(lr.verdict) + " r=" + fmt("%.3f", r) + "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && secs < 120.0;
    return {ok, detail + fmt("%.1f s", secs)};
}

Outcome lyapunov_identities() {
    const PolynomialModel m(2, {-2, 0});
    const LandingSolver s(m);
    const TowerGraph g = build_tower(kCheb, 8);
    const SampleMeasure mu = brolin_samples(g.partition(), 4000, 77, 1200);
    const LyapunovPair lp = lyapunov_consistency(mu, s, g, 1000, 8);
    const double beta = birkhoff_lyapunov(s, dirac_sample(g.partition(), Angle(0, 1)).samples[0].angle, 1000);
    const EntropyReport er = entropy_estimate(mu, g.partition(), {4, 6, 8, 10});
    const double l2 = std::log(2.0);
    const bool ok = rel(lp.lambda_f, l2) <= 0.02 && rel(beta, 2 * l2) <= 0.01 && lp.tower_defined &&
                    rel(lp.lambda_tower, lp.lambda_f) <= 0.05 && er.sufficient && rel(er.h, l2) <= 0.05;
    return {ok, "lambda " + fmt("%.5f", lp.lambda_f) + ", beta " + fmt("%.5f", beta) + ", tower " +
                    fmt("%.5f", lp.lambda_tower) + ", entropy " + fmt("%.4f", er.h) + " (log 2 = 0.69315)"};
}

Outcome kac_abramov() {
    const PolynomialModel m(2, {-2, 0});
    const LandingSolver s(m);
    const TowerGraph g = build_tower(kCheb, 8);
    const SampleMeasure mu = brolin_samples(g.partition(), 2000, 91, 2300);
    // Witness on the most massive domain of level >= 1.
    const TowerMass tm = lift_cesaro(mu, g, 2000, 8);
    int wd = 1;
    for (const Domain& d : g.domains())
        if (d.level >= 1 && tm.mass[static_cast<std::size_t>(d.id)] > tm.mass[static_cast<std::size_t>(wd)]) wd = d.id;
    const InducedSystem ind = first_return(mu, g, choose_W(g, wd, mpq_class(1, 64)), 2000);
    const KacResult k = kac_check(ind);
    const ExpansionReport ex = expansion_and_abramov(ind, mu, s, std::log(2.0));
    const bool ok = k.conclusive && k.rel_error <= 0.05 && ind.censored_fraction() < 0.05 && ex.abramov_rel_error <= 0.05;
    return {ok, "W on D" + std::to_string(wd) + ", Kac error " + fmt("%.4f", k.rel_error) + ", censored " +
                    fmt("%.4f", ind.censored_fraction()) + ", Abramov error " + fmt("%.4f", ex.abramov_rel_error)};
}

Outcome conformal_solve() {
    const auto t0 = std::chrono::steady_clock::now();
    const PartitionP1 p(kCheb);
    const PolynomialModel m(2, {-2, 0});
    const LandingSolver s(m);
    const DeltaSolve ds = solve_delta(build_cylinder_model(p, s, 10));
    const double res = conformality_residual(p, s, 8, ds.delta);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = ds.delta >= 0.98 && ds.delta <= 1.02 && res <= 1e-3 && ds.fixed_point_residual <= 1e-8 &&
                    ds.strictly_decreasing && secs < 60.0;
    return {ok, "delta " + fmt("%.6f", ds.delta) + ", conformality residual " + fmt("%.2e", res) +
                    ", eigen residual " + fmt("%.1e", ds.fixed_point_residual) + ", " + fmt("%.1f s", secs)};
}

Outcome equivalence(const fs::path& work) {
    bool ok = true;
    std::string detail;
    for (const char* name : kConfigs) {
        const cli::RunContext ctx = context(name, work / name);
        cli::run_command("tower-build", ctx);
        cli::run_command("conformal", ctx);
        const auto j = nlohmann::json::parse(slurp(work / name / "conformal.json"))["experiment"];
        const bool consistent = j["consistent"].get<bool>();
        ok = ok && consistent;
        if (std::string(name) == "chebyshev") {
            const double pos = j["positive_lyapunov_mass"].get<double>();
            const bool lift = j["lift_verdict"] == "liftable";
            const bool dens = j["densities_positive"].get<bool>();
            ok = ok && pos > 0.9 && lift && dens;
            detail += "c=-2: mass " + fmt("%.3f", pos) + ", " + j["lift_verdict"].get<std::string>() +
                      ", min density " + fmt("%.3f", j["min_density"].get<double>()) + "; ";
        }
        detail += std::string(name) + (consistent ? " agrees; " : " DISAGREES; ");
    }
    return {ok, detail};
}

Outcome reproducibility(const fs::path& work) {
    std::size_t files = 0, differ = 0;
    for (const char* run : {"first", "second"}) {
        const cli::RunContext ctx = context("chebyshev", work / run);
        for (const std::string& cmd : cli::command_names()) cli::run_command(cmd, ctx);
    }
    for (const auto& e : fs::directory_iterator(work / "first")) {
        const std::string name = e.path().filename().string();
        if (name.rfind("manifest_", 0) == 0) continue; // carry wall time
        ++files;
        if (slurp(e.path()) != slurp(work / "second" / name)) ++differ;
    }
    return {files > 0 && differ == 0,
            std::to_string(files) + " output files compared, " + std::to_string(differ) + " differ (manifests excluded)"};
}

} // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / "hofbauer_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"tower oracle", tower_oracle},
        {"per-level domain bound", level_bound},
        {"Markov exactness", markov_exactness},
        {"survivor census", survivor_census},
        {"subset bound", subset_bound},
        {"lifting sanity", lifting_sanity},
        {"Brolin liftability", brolin_liftable},
        {"Lyapunov identities", lyapunov_identities},
        {"Kac and Abramov", kac_abramov},
        {"conformal solve", conformal_solve},
        {"positive Lyapunov vs liftable", [&] { return equivalence(work / "equivalence"); }},
        {"reproducibility", [&] { return reproducibility(work / "repro"); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    fs::remove_all(work);
    return failed;
}
