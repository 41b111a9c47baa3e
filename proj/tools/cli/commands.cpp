#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "hofbauer/census.hpp"
#include "hofbauer/conformal.hpp"
#include "hofbauer/export.hpp"
#include "hofbauer/inducing.hpp"

namespace hofbauer::cli {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string sha1_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha1(), nullptr) != 1)
        throw std::runtime_error("sha1 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string git_blob_sha1(const std::string& data) {
    std::string blob = "blob " + std::to_string(data.size());
    blob.push_back('\0');
    return sha1_hex(blob + data);
}

RunContext make_context(RunConfig cfg, const std::string& out_override, int threads) {
    RunContext ctx;
    ctx.cfg = std::move(cfg);
    ctx.config_json = ctx.cfg.canonical_json();
    ctx.config_hash = sha1_hex(ctx.config_json);
    const std::string dir = out_override.empty() ? ctx.cfg.out_dir : out_override;
    if (dir.empty()) throw ConfigError("no output directory: pass --out or set output.dir");
    ctx.out = dir;
    ctx.threads = std::max(1, threads);
    return ctx;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"tower-build", "tower-export", "census", "lift",
                                                "lyapunov",    "induce",       "conformal", "report"};
    return names;
}

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Collects the files of one command so the manifest can hash them.
class Outputs {
public:
    explicit Outputs(const RunContext& ctx) : ctx_(ctx) {}

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(ctx_.out / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (ctx_.out / name).string());
        out << content;
        files_.emplace_back(name, git_blob_sha1(content));
    }
    void json(const std::string& name, ordered_json j) {
        ordered_json wrapped;
        wrapped["config_hash"] = ctx_.config_hash;
        for (auto& [k, v] : j.items()) wrapped[k] = v;
        write(name, wrapped.dump(2) + "\n");
    }
    // CSV with the config hash as a leading comment line.
    void csv(const std::string& name, const std::string& header, const std::string& body) {
        write(name, "# config_hash=" + ctx_.config_hash + "\n" + header + "\n" + body);
    }
    const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

private:
    const RunContext& ctx_;
    std::vector<std::pair<std::string, std::string>> files_;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Every command after tower-build needs a tower.json of the same config.
void require_tower(const RunContext& ctx) {
    const fs::path p = ctx.out / "tower.json";
    if (!fs::exists(p)) throw DependencyError(p.string() + " not found; run tower-build first");
    ordered_json j;
    try {
        j = ordered_json::parse(read_file(p));
    } catch (const std::exception&) {
        throw DependencyError(p.string() + " is not valid JSON; rerun tower-build");
    }
    const std::string h = j.value("config_hash", "");
    if (h != ctx.config_hash)
        throw DependencyError(p.string() + " was built from another config (hash " + h + ", expected " +
                              ctx.config_hash + "); rerun tower-build");
}

ordered_json config_object(const RunContext& ctx) { return ordered_json::parse(ctx.config_json); }

int max_R(const RunConfig& c) {
    return std::max(c.lift_R, *std::max_element(c.R_grid.begin(), c.R_grid.end()));
}

// Tower expanded far enough for every sampled truncation level.
TowerGraph sampling_tower(const RunConfig& c) {
    return build_tower(c.ray_choice(), c.R, std::max(c.extra_levels, max_R(c) - c.R));
}

struct Geometry {
    PolynomialModel model;
    LandingSolver solver;

    Geometry(const PolynomialModel& m, const LandingParams& lp) : model(m), solver(model, lp) {}
};

// The critical value angle must land at c, or the config describes another map.
std::unique_ptr<Geometry> make_geometry(const RunConfig& c) {
    std::unique_ptr<Geometry> g;
    LandingParams lp;
    lp.tol = c.tol_land;
    try {
        g = std::make_unique<Geometry>(PolynomialModel(c.degree, cplx(c.c_re, c.c_im), c.tol_orbit), lp);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("map: ") + e.what());
    }
    for (const auto& a : c.angles) {
        const cplx z = g->solver.land(Angle::parse(a));
        if (std::abs(z - g->model.c()) > 1e-6)
            throw ConfigError("map.angles: ray " + a + " lands at " + num(z.real()) + " + " + num(z.imag()) +
                              "i, not at c");
    }
    return g;
}

ordered_json edge_json(const Edge& e) { return {{"from", e.from}, {"symbol", e.symbol}, {"to", e.to}}; }

int cmd_tower_build(const RunContext& ctx, Outputs& out) {
    const TowerGraph g = build_tower(ctx.cfg.ray_choice(), ctx.cfg.R, ctx.cfg.extra_levels);
    const StructuralReport rep = structural_checks(g);
    out.write("tower.json", tower_to_json(g, ctx.config_json, ctx.config_hash));
    ordered_json sideways = ordered_json::array();
    for (const Edge& e : rep.sideways) sideways.push_back(edge_json(e));
    out.json("structural.json", {{"domains", g.domains().size()},
                                 {"edges", g.edges().size()},
                                 {"frontier", g.frontier_ids().size()},
                                 {"level_counts", rep.level_counts},
                                 {"level_bound", rep.level_bound},
                                 {"sideways", sideways},
                                 {"base_in_edges", rep.base_in_edges},
                                 {"violations", rep.violations},
                                 {"ok", rep.ok()}});
    return rep.ok() ? kOk : kCheckFailure;
}

int cmd_tower_export(const RunContext& ctx, Outputs& out) {
    require_tower(ctx);
    const TowerGraph g = build_tower(ctx.cfg.ray_choice(), ctx.cfg.R, ctx.cfg.extra_levels);
    out.write("tower.dot", tower_to_dot(g, ctx.config_hash));
    return kOk;
}

int cmd_census(const RunContext& ctx, Outputs& out) {
    require_tower(ctx);
    const RunConfig& c = ctx.cfg;
    const TowerGraph g = build_tower(c.ray_choice(), c.census_R, c.census_T);
    const int N = static_cast<int>(g.partition().size());
    bool ok = true;
    std::ostringstream s_csv, l_csv;
    ordered_json tables = ordered_json::array();
    for (int D : domains_of_level(g, c.census_R)) {
        const CensusTable tbl = cutpoint_census(g, c.census_R, D, c.census_T);
        const SurvivorBoundReport rep = verify_survivor_bounds(tbl, N);
        ok = ok && rep.ok;
        for (int t = 0; t <= tbl.T; ++t) {
            s_csv << D << "," << t << "," << tbl.s[static_cast<std::size_t>(t)].get_str() << "\n";
            const auto& row = tbl.L[static_cast<std::size_t>(t)];
            for (std::size_t m = 0; m < row.size(); ++m) l_csv << D << "," << t << "," << m << "," << row[m].get_str() << "\n";
        }
        tables.push_back({{"origin", D},
                          {"ok", rep.ok},
                          {"first_violation", rep.first_violation},
                          {"checks_lookback", rep.checks_lookback},
                          {"checks_one_cutpoints", rep.checks_one_cutpoints},
                          {"checks_table", rep.checks_table},
                          {"checks_s_bound", rep.checks_s_bound},
                          {"C", rep.C.get_str()}});
    }
    if (tables.empty()) throw ConfigError("census.R: the tower has no domain of level " + std::to_string(c.census_R));
    ordered_json subsets = ordered_json::array();
    for (int n : {20, 40, 60})
        for (double eps : {0.05, 0.1, 0.2, 0.3}) {
            const SubsetBound b = subset_count_bound(eps, n);
            ok = ok && b.holds;
            subsets.push_back({{"n", n},
                               {"eps", eps},
                               {"count", b.count.get_str()},
                               {"log_count", b.log_count},
                               {"log_bound", b.log_bound},
                               {"holds", b.holds},
                               {"below_regime", b.below_regime}});
        }
    out.csv("census_s.csv", "origin,t,s", s_csv.str());
    out.csv("census_L.csv", "origin,t,m,L", l_csv.str());
    out.json("census_report.json", {{"R", c.census_R},
                                    {"T", c.census_T},
                                    {"N", N},
                                    {"tables", tables},
                                    {"subset_bounds", subsets},
                                    {"ok", ok}});
    return ok ? kOk : kCheckFailure;
}

int cmd_lift(const RunContext& ctx, Outputs& out) {
    require_tower(ctx);
    const RunConfig& c = ctx.cfg;
    const TowerGraph g = sampling_tower(c);
    const SampleMeasure mu = brolin_samples(g.partition(), c.samples, c.seed, c.max_n());
    const auto curves = lift_curves(mu, g, c.n_grid, c.R_grid, ctx.threads);
    const LiftReport lr = liftability_verdict(curves, c.n_grid, c.R_grid, c.floor);
    std::ostringstream cc;
    for (const CurvePoint& p : curves) cc << p.n << "," << p.R << "," << num(p.retained) << "," << num(p.escaped) << "\n";
    out.csv("lift_curves.csv", "n,R,retained,escaped", cc.str());

    const TowerMass tm = lift_cesaro(mu, g, c.max_n(), c.lift_R, ctx.threads);
    const double conservation = std::fabs(tm.retained() + tm.escaped - 1.0);
    std::ostringstream mc;
    std::vector<int> ids;
    for (const Domain& d : g.domains()) {
        if (d.level > c.lift_R) continue;
        ids.push_back(d.id);
        mc << d.id << "," << d.level << "," << num(tm.mass[static_cast<std::size_t>(d.id)]) << "\n";
    }
    out.csv("tower_mass.csv", "domain,level,mass", mc.str());

    bool ok = conservation <= 1e-12;
    ordered_json defects = ordered_json::array();
    for (std::size_t n : c.n_grid) {
        const DefectReport dr = invariance_defect(mu, g, n, ids, ctx.threads);
        ok = ok && dr.defect <= dr.bound + 1e-12;
        defects.push_back({{"n", n}, {"defect", dr.defect}, {"bound", dr.bound}, {"worst_domain", dr.worst_test}});
    }
    bool monotone = true;
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (std::size_t j = 0; j < curves.size(); ++j)
            if (curves[i].n == curves[j].n && curves[i].R < curves[j].R && curves[i].retained > curves[j].retained + 1e-12)
                monotone = false;
    ok = ok && monotone;
    out.json("lift_report.json", {{"measure", mu.tag},
                                  {"samples", mu.samples.size()},
                                  {"verdict", to_string(lr.verdict)},
                                  {"witness_R", lr.witness_R},
                                  {"floor", lr.floor},
                                  {"note", lr.note},
                                  {"n", c.max_n()},
                                  {"R", c.lift_R},
                                  {"retained", tm.retained()},
                                  {"escaped", tm.escaped},
                                  {"mass_conservation_error", conservation},
                                  {"invariance_defects", defects},
                                  {"retained_monotone_in_R", monotone},
                                  {"ok", ok}});
    return ok ? kOk : kCheckFailure;
}

int cmd_lyapunov(const RunContext& ctx, Outputs& out) {
    require_tower(ctx);
    const RunConfig& c = ctx.cfg;
    const auto geo = make_geometry(c);
    const TowerGraph g = sampling_tower(c);
    const PartitionP1& p = g.partition();
    const std::size_t n = c.max_n();
    const SampleMeasure mu = brolin_samples(p, c.samples, c.seed, n + static_cast<std::size_t>(geo->solver.params().depth));

    std::ostringstream rows;
    double sum = 0, sumsq = 0, wsum = 0;
    for (const Sample& s : mu.samples) {
        const cplx z = geo->solver.land(s.angle);
        const double l = birkhoff_lyapunov(geo->solver, s.angle, n);
        rows << num(s.angle.to_double()) << "," << num(z.real()) << "," << num(z.imag()) << "," << num(l) << "\n";
        sum += s.weight * l;
        sumsq += s.weight * l * l;
        wsum += s.weight;
    }
    out.csv("lyapunov.csv", "angle,re,im,lyapunov", rows.str());
    const double mean = sum / wsum;
    const double sd = std::sqrt(std::max(0.0, sumsq / wsum - mean * mean));

    const LyapunovPair lp = lyapunov_consistency(mu, geo->solver, g, n, c.lift_R, ctx.threads);
    const EntropyReport er = entropy_estimate(mu, p, {4, 6, 8, 10, 12});
    ordered_json ent = ordered_json::array();
    for (const EntropyPoint& e : er.points)
        ent.push_back({{"m", e.m}, {"H", e.H}, {"occupied", e.occupied}, {"sufficient", e.sufficient}});

    // The beta fixed point: angle 0 is fixed by multiplication by d.
    const SampleMeasure dirac = dirac_sample(p, Angle(0, 1));
    const double beta_l = birkhoff_lyapunov(geo->solver, dirac.samples.front().angle, n);
    const cplx beta = geo->solver.land(Angle(0, 1));
    out.json("lyapunov.json", {{"measure", mu.tag},
                               {"samples", mu.samples.size()},
                               {"n", n},
                               {"lambda_mean", mean},
                               {"lambda_stderr", sd / std::sqrt(static_cast<double>(mu.samples.size()))},
                               {"lambda_f", lp.lambda_f},
                               {"lambda_tower", lp.lambda_tower},
                               {"tower_defined", lp.tower_defined},
                               {"excluded", lp.excluded},
                               {"log_degree", std::log(static_cast<double>(c.degree))},
                               {"entropy", {{"h", er.h}, {"h_ratio", er.h_ratio}, {"sufficient", er.sufficient},
                                            {"warning", er.warning}, {"points", ent}}},
                               {"dirac_beta", {{"angle", "0/1"}, {"re", beta.real()}, {"im", beta.imag()},
                                               {"lambda", beta_l}}}});
    return kOk;
}

int pick_witness(const RunContext& ctx, const TowerGraph& g, const SampleMeasure& mu, std::size_t n) {
    if (ctx.cfg.witness_domain >= 0) {
        if (ctx.cfg.witness_domain >= static_cast<int>(g.domains().size()))
            throw ConfigError("inducing.witness_domain: no domain with id " + std::to_string(ctx.cfg.witness_domain));
        return ctx.cfg.witness_domain;
    }
    const TowerMass tm = lift_cesaro(mu, g, n, ctx.cfg.lift_R, ctx.threads);
    int best = -1;
    for (const Domain& d : g.domains())
        if (d.level >= 1 && d.level <= ctx.cfg.lift_R &&
            (best < 0 || tm.mass[static_cast<std::size_t>(d.id)] > tm.mass[static_cast<std::size_t>(best)]))
            best = d.id;
    if (best < 0) throw ConfigError("tower has no domain of level >= 1 to induce on");
    return best;
}

int cmd_induce(const RunContext& ctx, Outputs& out) {
    require_tower(ctx);
    const RunConfig& c = ctx.cfg;
    const auto geo = make_geometry(c);
    const TowerGraph g = sampling_tower(c);
    const std::size_t H = c.induce_horizon;
    const SampleMeasure mu =
        brolin_samples(g.partition(), c.induce_samples, c.seed, H + static_cast<std::size_t>(geo->solver.params().depth));
    const int wd = pick_witness(ctx, g, mu, H);
    const WitnessRegion W = choose_W(g, wd, mpq_class(c.cutpoint_margin));
    const InducedSystem ind = first_return(mu, g, W, H, ctx.threads);
    const KacResult kac = kac_check(ind);
    const ExpansionReport ex = expansion_and_abramov(ind, mu, geo->solver, std::log(static_cast<double>(c.degree)), ctx.threads);

    const std::size_t max_tau = 64;
    const auto hist = return_histogram(ind, max_tau);
    std::ostringstream hc;
    for (std::size_t t = 0; t < hist.size(); ++t)
        hc << (t + 1 == hist.size() ? ">=" : "") << t + 1 << "," << hist[t] << "\n";
    out.csv("return_histogram.csv", "tau,count", hc.str());
    std::ostringstream wc;
    for (const Word& w : ind.branch_words) wc << word_string(w) << "\n";
    out.write("branch_words.txt", "# config_hash=" + ctx.config_hash + "\n" + wc.str());

    ordered_json arcs = ordered_json::array();
    for (const Arc& a : W.arcs.components())
        arcs.push_back({a.start.to_string(), Angle(frac(a.start.value() + a.length)).to_string()});
    out.json("induce.json", {{"measure", mu.tag},
                             {"samples", mu.samples.size()},
                             {"horizon", H},
                             {"witness_domain", wd},
                             {"witness_level", g.domain(wd).level},
                             {"witness_arcs", arcs},
                             {"returns", ind.returns.size()},
                             {"censored", ind.censored},
                             {"censored_fraction", ind.censored_fraction()},
                             {"never_entered", ind.never_entered},
                             {"visit_frequency", ind.visit_frequency},
                             {"kac", {{"mean_tau", kac.mean_tau}, {"inv_mass", kac.inv_mass},
                                      {"rel_error", kac.rel_error}, {"conclusive", kac.conclusive},
                                      {"note", kac.note}}},
                             {"expansion", {{"degenerate", ex.degenerate}, {"min_log_expansion", ex.min_log_expansion},
                                            {"iterate_for_two", ex.iterate_for_two},
                                            {"min_log_by_N", ex.min_log_by_N}}},
                             {"abramov", {{"lambda_f", ex.lambda_f}, {"lambda_F", ex.lambda_F},
                                          {"rhs", ex.abramov_rhs}, {"rel_error", ex.abramov_rel_error},
                                          {"h_F", ex.h_F}, {"h_product", ex.h_product}}}});
    return kOk;
}

int cmd_conformal(const RunContext& ctx, Outputs& out) {
    require_tower(ctx);
    const RunConfig& c = ctx.cfg;
    const auto geo = make_geometry(c);
    const TowerGraph g = sampling_tower(c);
    const PartitionP1& p = g.partition();
    const CylinderModel cm = build_cylinder_model(p, geo->solver, c.conformal_depth);
    const DeltaSolve ds = solve_delta(cm, c.bisection_tol, 0.1, c.eigen_tol);
    const double residual = conformality_residual(p, geo->solver, c.residual_depth, ds.delta);

    std::ostringstream dc, wc;
    for (const auto& [d, rho] : ds.curve) dc << num(d) << "," << num(rho) << "\n";
    out.csv("delta_curve.csv", "delta,rho", dc.str());
    for (std::size_t i = 0; i < cm.words.size(); ++i)
        wc << word_string(cm.words[i]) << "," << num(ds.weights[i]) << "," << cm.rep_angles[i].to_string() << ","
           << num(cm.reps[i].real()) << "," << num(cm.reps[i].imag()) << "\n";
    out.csv("conformal_weights.csv", "word,weight,rep_angle,rep_re,rep_im", wc.str());

    EquivalenceParams prm;
    prm.lambda0_grid = c.lambda0_grid;
    prm.n_grid = c.n_grid;
    prm.R_grid = c.R_grid;
    prm.eps_grid = c.eps_grid;
    prm.R = c.lift_R;
    prm.samples = c.t65_samples;
    prm.seed = c.seed;
    prm.floor = c.floor;
    prm.density_depth = c.density_depth;
    prm.witness_domain = c.witness_domain;
    prm.margin = mpq_class(c.cutpoint_margin);
    prm.threads = ctx.threads;
    const EquivalenceReport r = equivalence_experiment(cm, ds.weights, geo->solver, g, prm);

    ordered_json lm = ordered_json::array(), vf = ordered_json::array(), dens = ordered_json::array();
    for (const auto& x : r.lyapunov_mass) lm.push_back({{"lambda0", x.lambda0}, {"n", x.n}, {"mass", x.mass}});
    for (const auto& x : r.visit_frequency) vf.push_back({{"eps", x.eps}, {"n", x.n}, {"mass", x.mass}});
    for (const auto& d : r.density)
        dens.push_back({{"word", word_string(d.word)}, {"projected", d.projected}, {"reference", d.reference},
                        {"ratio", d.ratio}, {"skipped", d.skipped}});
    ordered_json curves = ordered_json::array();
    for (const CurvePoint& p : r.lift.curves)
        curves.push_back({{"n", p.n}, {"R", p.R}, {"retained", p.retained}, {"escaped", p.escaped}});
    out.json("conformal.json",
             {{"depth", c.conformal_depth},
              {"cylinders", cm.words.size()},
              {"delta", ds.delta},
              {"strictly_decreasing", ds.strictly_decreasing},
              {"irreducible", ds.irreducible},
              {"fixed_point_residual", ds.fixed_point_residual},
              {"residual_depth", c.residual_depth},
              {"conformality_residual", residual},
              {"experiment",
               {{"lyapunov_mass", lm},
                {"positive_lyapunov_mass", r.positive_lyapunov_mass},
                {"lift_verdict", to_string(r.lift.verdict)},
                {"lift_witness_R", r.lift.witness_R},
                {"lift_curves", curves},
                {"visit_frequency", vf},
                {"conical_frequency", r.conical_frequency},
                {"min_density", r.min_density},
                {"densities_positive", r.densities_positive},
                {"null_set_mass", r.null_set_mass},
                {"density", dens},
                {"consistent", r.consistent},
                {"summary", r.summary}}}});
    return kOk;
}

// One line per headline figure of whatever earlier commands left in the directory.
int cmd_report(const RunContext& ctx, Outputs& out) {
    require_tower(ctx);
    ordered_json results, manifests, skipped = ordered_json::array();
    for (const std::string name : {"structural.json", "census_report.json", "lift_report.json", "lyapunov.json",
                                    "induce.json", "conformal.json"}) {
        const fs::path p = ctx.out / name;
        if (!fs::exists(p)) continue;
        ordered_json j = ordered_json::parse(read_file(p));
        if (j.value("config_hash", "") != ctx.config_hash) {
            skipped.push_back(name);
            continue;
        }
        results[name] = j;
    }
    for (const std::string& cmd : command_names()) {
        const fs::path p = ctx.out / ("manifest_" + cmd + ".json");
        if (cmd == "report" || !fs::exists(p)) continue;
        // Wall time and thread count do not belong to the reproducible record.
        ordered_json m = ordered_json::parse(read_file(p));
        m.erase("wall_time_s");
        m.erase("threads");
        manifests[cmd] = m;
    }

    std::vector<std::pair<std::string, std::string>> table;
    auto row = [&](const std::string& file, const std::string& label, const std::vector<std::string>& path) {
        if (!results.contains(file)) return;
        const ordered_json* x = &results[file];
        for (const auto& k : path) {
            if (!x->contains(k)) return;
            x = &(*x)[k];
        }
        table.emplace_back(label, x->is_string() ? x->get<std::string>() : x->dump());
    };
    row("structural.json", "tower domains", {"domains"});
    row("structural.json", "tower structural checks ok", {"ok"});
    row("census_report.json", "census checks ok", {"ok"});
    row("lift_report.json", "lift verdict", {"verdict"});
    row("lift_report.json", "retained mass", {"retained"});
    row("lift_report.json", "lift checks ok", {"ok"});
    row("lyapunov.json", "lyapunov exponent", {"lambda_f"});
    row("lyapunov.json", "lyapunov on the tower", {"lambda_tower"});
    row("lyapunov.json", "entropy estimate", {"entropy", "h"});
    row("lyapunov.json", "lyapunov at beta", {"dirac_beta", "lambda"});
    row("induce.json", "kac relative error", {"kac", "rel_error"});
    row("induce.json", "abramov relative error", {"abramov", "rel_error"});
    row("conformal.json", "conformal delta", {"delta"});
    row("conformal.json", "conformality residual", {"conformality_residual"});
    row("conformal.json", "positive lyapunov mass", {"experiment", "positive_lyapunov_mass"});
    row("conformal.json", "conformal lift verdict", {"experiment", "lift_verdict"});
    row("conformal.json", "equivalence sides agree", {"experiment", "consistent"});

    std::size_t w = 0;
    for (const auto& [k, v] : table) w = std::max(w, k.size());
    std::ostringstream txt;
    txt << "config_hash " << ctx.config_hash << "\n";
    for (const auto& [k, v] : table) txt << k << std::string(w - k.size() + 2, ' ') << v << "\n";
    for (const auto& s : skipped) txt << "skipped " << s.get<std::string>() << " (other config)\n";

    ordered_json summary = ordered_json::object();
    for (const auto& [k, v] : table) summary[k] = v;
    out.json("report.json", {{"config", config_object(ctx)},
                             {"summary", summary},
                             {"results", results},
                             {"manifests", manifests},
                             {"skipped", skipped}});
    out.write("summary.txt", txt.str());
    return kOk;
}

} // namespace

int run_command(const std::string& command, const RunContext& ctx) {
    static const std::map<std::string, std::function<int(const RunContext&, Outputs&)>> table{
        {"tower-build", cmd_tower_build}, {"tower-export", cmd_tower_export}, {"census", cmd_census},
        {"lift", cmd_lift},               {"lyapunov", cmd_lyapunov},         {"induce", cmd_induce},
        {"conformal", cmd_conformal},     {"report", cmd_report}};
    auto it = table.find(command);
    if (it == table.end()) throw ConfigError("unknown command '" + command + "'");
    fs::create_directories(ctx.out);
    const auto t0 = std::chrono::steady_clock::now();
    Outputs out(ctx);
    const int code = it->second(ctx, out);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    ordered_json files = ordered_json::object();
    for (const auto& [name, h] : out.files()) files[name] = h;
    ordered_json m;
    m["command"] = command;
    m["config"] = config_object(ctx);
    m["config_hash"] = ctx.config_hash;
    m["seed"] = ctx.cfg.seed;
    m["threads"] = ctx.threads;
    m["outputs"] = files;
    m["status"] = code == kOk ? "ok" : "check_failure";
    m["wall_time_s"] = wall;
    std::ofstream mf(ctx.out / ("manifest_" + command + ".json"), std::ios::binary);
    mf << m.dump(2) << "\n";
    return code;
}

} // namespace hofbauer::cli
