#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hofbauer::cli {
namespace {

struct Entry {
    std::string value;
    int line = 0;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T>
T parse_int(const std::string& v) {
    T x{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size()) throw std::invalid_argument("not an integer: '" + v + "'");
    return x;
}

double parse_double(const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
        throw std::invalid_argument("not a finite number: '" + v + "'");
    return x;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"map.degree", [](RunConfig& c, const std::string& v) { c.degree = parse_int<unsigned>(v); }},
        {"map.c_re", [](RunConfig& c, const std::string& v) { c.c_re = parse_double(v); }},
        {"map.c_im", [](RunConfig& c, const std::string& v) { c.c_im = parse_double(v); }},
        {"map.angles",
         [](RunConfig& c, const std::string& v) {
             c.angles.clear();
             for (const auto& a : split_list(v)) c.angles.push_back(Angle::parse(a).to_string());
         }},
        {"map.kappa", [](RunConfig& c, const std::string& v) { c.kappa = parse_int<int>(v); }},
        {"tower.R", [](RunConfig& c, const std::string& v) { c.R = parse_int<int>(v); }},
        {"tower.extra_levels", [](RunConfig& c, const std::string& v) { c.extra_levels = parse_int<int>(v); }},
        {"census.R", [](RunConfig& c, const std::string& v) { c.census_R = parse_int<int>(v); }},
        {"census.T", [](RunConfig& c, const std::string& v) { c.census_T = parse_int<int>(v); }},
        {"sampling.seed",
         [](RunConfig& c, const std::string& v) {
             c.seed = parse_int<std::uint64_t>(v);
             c.has_seed = true;
         }},
        {"sampling.samples", [](RunConfig& c, const std::string& v) { c.samples = parse_int<std::size_t>(v); }},
        {"sampling.n_grid",
         [](RunConfig& c, const std::string& v) {
             c.n_grid.clear();
             for (const auto& x : split_list(v)) c.n_grid.push_back(parse_int<std::size_t>(x));
         }},
        {"sampling.R_grid",
         [](RunConfig& c, const std::string& v) {
             c.R_grid.clear();
             for (const auto& x : split_list(v)) c.R_grid.push_back(parse_int<int>(x));
         }},
        {"sampling.lift_R", [](RunConfig& c, const std::string& v) { c.lift_R = parse_int<int>(v); }},
        {"sampling.floor", [](RunConfig& c, const std::string& v) { c.floor = parse_double(v); }},
        {"tolerances.tol_land", [](RunConfig& c, const std::string& v) { c.tol_land = parse_double(v); }},
        {"tolerances.tol_orbit", [](RunConfig& c, const std::string& v) { c.tol_orbit = parse_double(v); }},
        {"tolerances.eigen_tol", [](RunConfig& c, const std::string& v) { c.eigen_tol = parse_double(v); }},
        {"tolerances.bisection_tol", [](RunConfig& c, const std::string& v) { c.bisection_tol = parse_double(v); }},
        {"margins.cutpoint",
         [](RunConfig& c, const std::string& v) {
             mpq_class q(v);
             q.canonicalize();
             c.cutpoint_margin = q.get_str();
         }},
        {"inducing.samples", [](RunConfig& c, const std::string& v) { c.induce_samples = parse_int<std::size_t>(v); }},
        {"inducing.horizon", [](RunConfig& c, const std::string& v) { c.induce_horizon = parse_int<std::size_t>(v); }},
        {"inducing.witness_domain", [](RunConfig& c, const std::string& v) { c.witness_domain = parse_int<int>(v); }},
        {"conformal.depth", [](RunConfig& c, const std::string& v) { c.conformal_depth = parse_int<std::size_t>(v); }},
        {"conformal.residual_depth",
         [](RunConfig& c, const std::string& v) { c.residual_depth = parse_int<std::size_t>(v); }},
        {"conformal.samples", [](RunConfig& c, const std::string& v) { c.t65_samples = parse_int<std::size_t>(v); }},
        {"conformal.density_depth",
         [](RunConfig& c, const std::string& v) { c.density_depth = parse_int<std::size_t>(v); }},
        {"conformal.lambda0_grid",
         [](RunConfig& c, const std::string& v) {
             c.lambda0_grid.clear();
             for (const auto& x : split_list(v)) c.lambda0_grid.push_back(parse_double(x));
         }},
        {"conformal.eps_grid",
         [](RunConfig& c, const std::string& v) {
             c.eps_grid.clear();
             for (const auto& x : split_list(v)) c.eps_grid.push_back(parse_double(x));
         }},
        {"output.dir", [](RunConfig& c, const std::string& v) { c.out_dir = v; }},
    };
    return table;
}

std::string where(const std::string& origin, int line) {
    return line > 0 ? origin + ":" + std::to_string(line) + ": " : origin + ": ";
}

std::map<std::string, Entry> read_ini(const std::string& text, const std::string& origin) {
    std::map<std::string, Entry> out;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find_first_of("#;");
        if (hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(where(origin, line) + "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) throw ConfigError(where(origin, line) + "empty section name");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(where(origin, line) + "expected 'key = value'");
        if (section.empty()) throw ConfigError(where(origin, line) + "key outside of any [section]");
        const std::string key = section + "." + trim(s.substr(0, eq));
        if (out.count(key))
            throw ConfigError(where(origin, line) + "duplicate key '" + key + "' (first on line " +
                              std::to_string(out[key].line) + ")");
        out[key] = Entry{trim(s.substr(eq + 1)), line};
    }
    return out;
}

int line_of(const std::string& text, std::size_t byte) {
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size())), '\n'));
}

std::map<std::string, Entry> read_json(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(where(origin, line_of(text, e.byte)) + "invalid JSON");
    }
    if (!j.is_object()) throw ConfigError(where(origin, 1) + "top level must be an object of sections");
    std::map<std::string, Entry> out;
    for (const auto& [section, body] : j.items()) {
        const int sline = line_of(text, text.find("\"" + section + "\""));
        if (!body.is_object()) throw ConfigError(where(origin, sline) + "section '" + section + "' must be an object");
        for (const auto& [key, v] : body.items()) {
            const std::size_t pos = text.find("\"" + key + "\"", text.find("\"" + section + "\""));
            Entry e{"", line_of(text, pos)};
            auto scalar = [](const nlohmann::json& x) {
                if (x.is_string()) return x.get<std::string>();
                if (x.is_number_unsigned()) return std::to_string(x.get<std::uint64_t>());
                if (x.is_number_integer()) return std::to_string(x.get<std::int64_t>());
                if (x.is_number_float()) {
                    std::ostringstream os;
                    os.precision(17);
                    os << x.get<double>();
                    return os.str();
                }
                throw std::invalid_argument("unsupported value type");
            };
            try {
                if (v.is_array()) {
                    for (std::size_t i = 0; i < v.size(); ++i) e.value += (i ? "," : "") + scalar(v[i]);
                } else {
                    e.value = scalar(v);
                }
            } catch (const std::exception& ex) {
                throw ConfigError(where(origin, e.line) + section + "." + key + ": " + ex.what());
            }
            out[section + "." + key] = e;
        }
    }
    return out;
}

} // namespace

RayChoice RunConfig::ray_choice() const {
    RayChoice rc;
    rc.degree = degree;
    for (const auto& a : angles) rc.angles.push_back(Angle::parse(a));
    return rc;
}

std::size_t RunConfig::max_n() const { return *std::max_element(n_grid.begin(), n_grid.end()); }

std::string RunConfig::canonical_json() const {
    nlohmann::ordered_json j;
    j["map"] = {{"degree", degree}, {"c_re", c_re}, {"c_im", c_im}, {"angles", angles}, {"kappa", angles.size()}};
    j["tower"] = {{"R", R}, {"extra_levels", extra_levels}};
    j["census"] = {{"R", census_R}, {"T", census_T}};
    j["sampling"] = {{"seed", seed},     {"samples", samples}, {"n_grid", n_grid},
                     {"R_grid", R_grid}, {"lift_R", lift_R},   {"floor", floor}};
    j["tolerances"] = {{"tol_land", tol_land},
                       {"tol_orbit", tol_orbit},
                       {"eigen_tol", eigen_tol},
                       {"bisection_tol", bisection_tol}};
    j["margins"] = {{"cutpoint", cutpoint_margin}};
    j["inducing"] = {{"samples", induce_samples}, {"horizon", induce_horizon}, {"witness_domain", witness_domain}};
    j["conformal"] = {{"depth", conformal_depth},         {"residual_depth", residual_depth},
                      {"samples", t65_samples},           {"density_depth", density_depth},
                      {"lambda0_grid", lambda0_grid},     {"eps_grid", eps_grid}};
    return j.dump();
}

void validate(const RunConfig& c, const std::string& origin) {
    auto fail = [&](const std::string& msg) { throw ConfigError(origin + ": " + msg); };
    if (!c.has_seed) fail("sampling.seed is mandatory");
    if (c.angles.empty()) fail("map.angles is mandatory");
    try {
        c.ray_choice().validate();
    } catch (const std::invalid_argument& e) {
        fail(std::string("map.angles: ") + e.what());
    }
    if (c.kappa != 0 && static_cast<std::size_t>(c.kappa) != c.angles.size())
        fail("map.kappa = " + std::to_string(c.kappa) + " but " + std::to_string(c.angles.size()) + " angle(s) given");
    for (double t : {c.tol_land, c.tol_orbit, c.eigen_tol, c.bisection_tol})
        if (!(t > 0)) fail("all tolerances must be > 0");
    if (c.R < 0 || c.extra_levels < 0) fail("tower.R and tower.extra_levels must be >= 0");
    if (c.census_R < 1 || c.census_T < 0) fail("census.R must be >= 1 and census.T >= 0");
    if (c.samples == 0 || c.induce_samples == 0 || c.t65_samples == 0) fail("sample counts must be positive");
    if (c.n_grid.empty() || c.R_grid.empty()) fail("sampling.n_grid and sampling.R_grid must be non-empty");
    if (!std::is_sorted(c.n_grid.begin(), c.n_grid.end()) || c.n_grid.front() == 0)
        fail("sampling.n_grid must be increasing and positive");
    if (std::set<std::size_t>(c.n_grid.begin(), c.n_grid.end()).size() != c.n_grid.size())
        fail("sampling.n_grid has repeated values");
    for (int r : c.R_grid)
        if (r < 0) fail("sampling.R_grid entries must be >= 0");
    if (c.lift_R < 0) fail("sampling.lift_R must be >= 0");
    if (!(c.floor > 0 && c.floor < 1)) fail("sampling.floor must lie in (0, 1)");
    const mpq_class m(c.cutpoint_margin);
    if (!(m > 0 && m < mpq_class(1, 2))) fail("margins.cutpoint must lie in (0, 1/2)");
    if (c.induce_horizon == 0) fail("inducing.horizon must be positive");
    if (c.conformal_depth == 0 || c.density_depth == 0) fail("conformal depths must be positive");
    for (double l : c.lambda0_grid)
        if (!(l > 1)) fail("conformal.lambda0_grid entries must be > 1");
    for (double e : c.eps_grid)
        if (!(e > 0 && e < 1)) fail("conformal.eps_grid entries must lie in (0, 1)");
}

RunConfig parse_config(const std::string& text, const std::string& origin,
                       std::optional<std::uint64_t> seed) {
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool json = first != std::string::npos && text[first] == '{';
    const auto entries = json ? read_json(text, origin) : read_ini(text, origin);
    RunConfig cfg;
    for (const auto& [key, e] : entries) {
        auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError(where(origin, e.line) + "unknown key '" + key + "'");
        try {
            it->second(cfg, e.value);
        } catch (const std::exception& ex) {
            throw ConfigError(where(origin, e.line) + key + ": " + ex.what());
        }
    }
    if (seed) {
        cfg.seed = *seed;
        cfg.has_seed = true;
    }
    validate(cfg, origin);
    return cfg;
}

RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path, seed);
}

} // namespace hofbauer::cli
