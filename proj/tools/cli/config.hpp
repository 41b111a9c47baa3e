#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hofbauer/symbolic.hpp"

namespace hofbauer::cli {

/// Invalid configuration; the message already names file and line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // [map]
    unsigned degree = 2;
    double c_re = 0;
    double c_im = 0;
    std::vector<std::string> angles; // "p/q"
    int kappa = 0;                   // 0: not given

    // [tower]
    int R = 6;
    int extra_levels = 0;

    // [census]
    int census_R = 2;
    int census_T = 20;

    // [sampling]
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::size_t samples = 10000;
    std::vector<std::size_t> n_grid{250, 500, 1000};
    std::vector<int> R_grid{4, 6, 8};
    int lift_R = 8;
    double floor = 0.05;

    // [tolerances]
    double tol_land = 1e-12;
    double tol_orbit = 1e-9;
    double eigen_tol = 1e-12;
    double bisection_tol = 1e-6;

    // [margins]
    std::string cutpoint_margin = "1/64";

    // [inducing]
    std::size_t induce_samples = 2000;
    std::size_t induce_horizon = 2000;
    int witness_domain = -1;

    // [conformal]
    std::size_t conformal_depth = 10;
    std::size_t residual_depth = 8;
    std::size_t t65_samples = 2000;
    std::size_t density_depth = 6;
    std::vector<double> lambda0_grid{1.05, 1.2, 1.5};
    std::vector<double> eps_grid{0.05, 0.1, 0.2};

    // [output]
    std::string out_dir;

    RayChoice ray_choice() const;
    std::size_t max_n() const;

    /// Canonical JSON text; the config hash is the sha1 of this string.
    std::string canonical_json() const;
};

/// Reads INI (key = value under [section]) or, when the first non-blank
/// character is '{', JSON with the same sections. A seed override replaces
/// sampling.seed before validation.
RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed = std::nullopt);
RunConfig parse_config(const std::string& text, const std::string& origin,
                       std::optional<std::uint64_t> seed = std::nullopt);

/// Checks invariants that need no file positions (seed, tolerances, angles).
void validate(const RunConfig& cfg, const std::string& origin);

} // namespace hofbauer::cli
