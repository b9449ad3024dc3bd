#include "landau/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace landau {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

class Reader {
public:
    Reader(const RawConfig& raw, std::string path) : raw_(raw), path_(std::move(path)) {}

    std::optional<std::string> find(const std::string& sec, const std::string& key) const {
        auto s = raw_.find(sec);
        if (s == raw_.end()) return std::nullopt;
        auto k = s->second.find(key);
        if (k == s->second.end()) return std::nullopt;
        return k->second;
    }

    double num(const std::string& sec, const std::string& key, double dflt) const {
        auto v = find(sec, key);
        return v ? parse_num(sec, key, *v) : dflt;
    }
    double required_num(const std::string& sec, const std::string& key) const {
        auto v = find(sec, key);
        if (!v)
            throw ConfigError("config schema error: missing required field '" + sec + "." + key +
                              "' in " + path_);
        return parse_num(sec, key, *v);
    }
    int integer(const std::string& sec, const std::string& key, int dflt) const {
        double d = num(sec, key, dflt);
        if (d != std::floor(d))
            throw ConfigError("config schema error: field '" + sec + "." + key +
                              "' must be an integer");
        return static_cast<int>(d);
    }
    uint64_t u64(const std::string& sec, const std::string& key, uint64_t dflt) const {
        auto v = find(sec, key);
        if (!v) return dflt;
        uint64_t out = 0;
        auto sv = *v;
        auto res = std::from_chars(sv.data(), sv.data() + sv.size(), out);
        if (res.ec != std::errc() || res.ptr != sv.data() + sv.size())
            throw ConfigError("config schema error: field '" + sec + "." + key +
                              "' must be a non-negative integer");
        return out;
    }
    std::string str(const std::string& sec, const std::string& key, const std::string& dflt) const {
        auto v = find(sec, key);
        return v ? *v : dflt;
    }

private:
    double parse_num(const std::string& sec, const std::string& key, const std::string& v) const {
        try {
            size_t pos = 0;
            double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ConfigError("config schema error: field '" + sec + "." + key +
                              "' is not a number: '" + v + "'");
        }
    }
    const RawConfig& raw_;
    std::string path_;
};

void append_kv(std::ostringstream& os, const char* k, const std::string& v) {
    os << k << " = " << v << "\n";
}

std::string fmt(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

} // namespace

RawConfig parse_raw_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RawConfig raw;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config parse error at " + path + ":" + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config parse error (expected key = value) at " + path + ":" +
                              std::to_string(lineno));
        std::string key = trim(line.substr(0, eq));
        std::string val = unquote(trim(line.substr(eq + 1)));
        if (key.empty())
            throw ConfigError("config parse error (empty key) at " + path + ":" +
                              std::to_string(lineno));
        raw[section][key] = val;
    }
    return raw;
}

RunConfig run_config_from_raw(const RawConfig& raw, const std::string& path) {
    Reader rd(raw, path);
    RunConfig c;
    c.source_path = path;
    c.b = rd.num("lattice", "b", c.b);
    c.a = rd.num("lattice", "a", c.a);
    c.n = rd.integer("lattice", "n", c.n);
    c.pts_per_lb = rd.num("lattice", "pts_per_lb", c.pts_per_lb);

    c.kappa = rd.required_num("disorder", "kappa");
    c.seed = rd.u64("disorder", "seed", c.seed);

    c.family = rd.str("potential", "family", c.family);
    c.amp = rd.num("potential", "amp", c.amp);
    c.varkappa = rd.num("potential", "varkappa", c.varkappa);
    c.beta = rd.num("potential", "beta", c.beta);
    c.x0x = rd.num("potential", "x0x", c.x0x);
    c.x0y = rd.num("potential", "x0y", c.x0y);
    c.eps = rd.num("potential", "eps", c.eps);
    c.target_m = rd.num("potential", "target_m", c.target_m);

    c.q = rd.integer("run", "q", c.q);
    c.e_min_rel = rd.num("run", "e_min_rel", c.e_min_rel);
    c.e_max_rel = rd.num("run", "e_max_rel", c.e_max_rel);
    c.e_count = rd.integer("run", "e_count", c.e_count);
    c.theta_per_side = rd.integer("run", "theta_per_side", c.theta_per_side);
    c.samples = rd.integer("run", "samples", c.samples);
    c.q_max = rd.integer("run", "q_max", c.q_max);
    c.threads = rd.integer("run", "threads", c.threads);
    c.out_dir = rd.str("run", "out_dir", c.out_dir);

    c.flux_p = rd.integer("band", "flux_p", c.flux_p);
    c.flux_r = rd.integer("band", "flux_r", c.flux_r);
    c.band_theta = rd.integer("band", "theta_per_side", c.band_theta);
    c.band_q_max = rd.integer("band", "q_max", c.band_q_max);
    c.w_family = rd.str("band", "w_family", c.w_family);
    c.w_amp = rd.num("band", "w_amp", c.w_amp);
    c.w_sigma = rd.num("band", "w_sigma", c.w_sigma);

    // validation (H1-style parameter sanity; H4 is checked against the built field)
    if (!(c.kappa > 0)) throw ConfigError("config invalid: disorder.kappa must be > 0");
    if (!(c.b > 0)) throw ConfigError("config invalid: lattice.b must be > 0");
    if (!(c.a > 0)) throw ConfigError("config invalid: lattice.a must be > 0");
    if (c.n < 1) throw ConfigError("config invalid: lattice.n must be >= 1");
    if (c.q < 0) throw ConfigError("config invalid: run.q must be >= 0");
    if (c.samples < 1) throw ConfigError("config invalid: run.samples must be >= 1");
    if (c.e_count < 1) throw ConfigError("config invalid: run.e_count must be >= 1");
    if (!(c.e_min_rel > 0) || !(c.e_max_rel > c.e_min_rel))
        throw ConfigError("config invalid: need 0 < e_min_rel < e_max_rel");
    if (c.family != "powerlaw" && c.family != "exponential" && c.family != "supergaussian" &&
        c.family != "indicator")
        throw ConfigError("config invalid: potential.family must be one of powerlaw, "
                          "exponential, supergaussian, indicator");
    return c;
}

RunConfig load_run_config(const std::string& path) {
    return run_config_from_raw(parse_raw_config(path), path);
}

std::string canonical_config(const RunConfig& c) {
    std::ostringstream os;
    os << "[lattice]\n";
    append_kv(os, "b", fmt(c.b));
    append_kv(os, "a", fmt(c.a));
    append_kv(os, "n", std::to_string(c.n));
    append_kv(os, "pts_per_lb", fmt(c.pts_per_lb));
    os << "[disorder]\n";
    append_kv(os, "kappa", fmt(c.kappa));
    append_kv(os, "seed", std::to_string(c.seed));
    os << "[potential]\n";
    append_kv(os, "family", c.family);
    append_kv(os, "amp", fmt(c.amp));
    append_kv(os, "varkappa", fmt(c.varkappa));
    append_kv(os, "beta", fmt(c.beta));
    append_kv(os, "x0x", fmt(c.x0x));
    append_kv(os, "x0y", fmt(c.x0y));
    append_kv(os, "eps", fmt(c.eps));
    append_kv(os, "target_m", fmt(c.target_m));
    os << "[run]\n";
    append_kv(os, "q", std::to_string(c.q));
    append_kv(os, "e_min_rel", fmt(c.e_min_rel));
    append_kv(os, "e_max_rel", fmt(c.e_max_rel));
    append_kv(os, "e_count", std::to_string(c.e_count));
    append_kv(os, "theta_per_side", std::to_string(c.theta_per_side));
    append_kv(os, "samples", std::to_string(c.samples));
    append_kv(os, "q_max", std::to_string(c.q_max));
    os << "[band]\n";
    append_kv(os, "flux_p", std::to_string(c.flux_p));
    append_kv(os, "flux_r", std::to_string(c.flux_r));
    append_kv(os, "theta_per_side", std::to_string(c.band_theta));
    append_kv(os, "q_max", std::to_string(c.band_q_max));
    append_kv(os, "w_family", c.w_family);
    append_kv(os, "w_amp", fmt(c.w_amp));
    append_kv(os, "w_sigma", fmt(c.w_sigma));
    return os.str();
}

std::string config_hash(const RunConfig& cfg) {
    std::string s = canonical_config(cfg);
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string config_schema() {
    return R"(# run configuration schema (TOML-style sections, key = value)
[lattice]
b = 6.283185307179586   # magnetic field; b a^2/(2 pi) must be a positive integer
a = 1.0                 # base cell side
n = 1                   # half period; cell side is (2n+1) a
pts_per_lb = 4.0        # grid points per magnetic length

[disorder]
kappa = 1.0             # REQUIRED; coupling law P(omega <= E) = E^kappa
seed = 1                # 64-bit reproducibility seed

[potential]
family = "powerlaw"     # powerlaw | exponential | supergaussian | indicator
amp = 1.0               # amplitude C
varkappa = 4.0          # power-law decay exponent (> 2)
beta = 2.0              # exponential decay exponent in (0, 2]
x0x = 0.0               # bump center (supergaussian / indicator)
x0y = 0.0
eps = 0.5               # bump radius
target_m = 0.0          # if > 0, rescale amp so that sup |V| = target_m

[run]
q = 0                   # Landau level index
e_min_rel = 1e-3        # E grid, relative to 2b (log spaced)
e_max_rel = 1e-1
e_count = 25
theta_per_side = 2      # dual-cell quadrature nodes per side
samples = 1000          # disorder samples
q_max = 3               # level cutoff for the fiber Hamiltonian
threads = 0             # 0 = hardware concurrency
out_dir = "out"

[band]
flux_p = 1              # rational flux b/(2 pi) = p/r, irreducible
flux_r = 2
theta_per_side = 12
q_max = 5
w_family = "bump"       # zero | constant | bump
w_amp = 0.3
w_sigma = 0.25
)";
}

OneSitePotential potential_from_config(const RunConfig& cfg) {
    PotentialFamily fam;
    if (cfg.family == "powerlaw") fam = PotentialFamily::PowerLaw;
    else if (cfg.family == "exponential") fam = PotentialFamily::Exponential;
    else if (cfg.family == "supergaussian") fam = PotentialFamily::SuperGaussian;
    else fam = PotentialFamily::Indicator;
    return make_potential(fam, cfg.amp, cfg.varkappa, cfg.beta, Vec2(cfg.x0x, cfg.x0y), cfg.eps);
}

MagneticLattice lattice_from_config(const RunConfig& cfg) {
    try {
        return make_lattice(cfg.b, cfg.a, cfg.n);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config invalid: ") + e.what());
    }
}

Eigen::VectorXd e_grid_from_config(const RunConfig& cfg) {
    Eigen::VectorXd grid(cfg.e_count);
    const double gap = 2.0 * cfg.b;
    if (cfg.e_count == 1) {
        grid[0] = cfg.e_min_rel * gap;
        return grid;
    }
    double l0 = std::log(cfg.e_min_rel), l1 = std::log(cfg.e_max_rel);
    for (int i = 0; i < cfg.e_count; ++i)
        grid[i] = gap * std::exp(l0 + (l1 - l0) * i / (cfg.e_count - 1.0));
    return grid;
}

} // namespace landau
