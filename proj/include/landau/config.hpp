#ifndef LANDAU_CONFIG_HPP
#define LANDAU_CONFIG_HPP

#include <map>
#include <optional>
#include <string>

#include "landau/disorder.hpp"

namespace landau {

// Configuration/usage problems map to exit code 2 at the CLI.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Section/key -> raw string values of a TOML-style key = value file.
using RawConfig = std::map<std::string, std::map<std::string, std::string>>;
RawConfig parse_raw_config(const std::string& path);

struct RunConfig {
    // [lattice]
    double b = 2.0 * M_PI;
    double a = 1.0;
    int n = 1;
    double pts_per_lb = 4.0;

    // [disorder] — kappa is required, everything else has defaults
    double kappa = 0.0;
    uint64_t seed = 1;

    // [potential]
    std::string family = "powerlaw";
    double amp = 1.0;
    double varkappa = 4.0;
    double beta = 2.0;
    double x0x = 0.0, x0y = 0.0;
    double eps = 0.5;
    double target_m = 0.0;  // >0: rescale amp so that sup|V| = target_m

    // [run]
    int q = 0;
    double e_min_rel = 1e-3;  // E / 2b
    double e_max_rel = 1e-1;
    int e_count = 25;
    int theta_per_side = 2;
    int samples = 1000;
    int q_max = 3;
    int threads = 0;  // 0: hardware
    std::string out_dir = "out";

    // [band]
    int flux_p = 1, flux_r = 2;
    int band_theta = 12;
    int band_q_max = 5;
    std::string w_family = "bump";  // zero | constant | bump
    double w_amp = 0.3;
    double w_sigma = 0.25;

    std::string source_path;
};

RunConfig load_run_config(const std::string& path);
RunConfig run_config_from_raw(const RawConfig& raw, const std::string& path);

// Canonical serialization with all defaults materialized, and its FNV-1a
// hash; both go into every output file.
std::string canonical_config(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);
std::string config_schema();

// Assembled domain objects.
OneSitePotential potential_from_config(const RunConfig& cfg);
MagneticLattice lattice_from_config(const RunConfig& cfg);
Eigen::VectorXd e_grid_from_config(const RunConfig& cfg);

} // namespace landau

#endif
