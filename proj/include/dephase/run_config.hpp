// run_config.hpp — Run configuration for the CLI: flat key = value text
// format plus flag overrides (flags win). parse(render(config)) == config.

#pragma once

#include "dephase/core.hpp"
#include "dephase/continuum_dynamics.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace dephase {

enum class Command { surface, trace, tpd, verify, sweep };

enum class EngineKind { discrete, continuum };

enum class SweepMode { split, window };

struct RunConfig {
    Command command{Command::surface};
    ModelKind model{ModelKind::X};
    EngineKind engine{EngineKind::continuum};

    // spectral density: power_law | heaviside
    std::string density{"power_law"};
    double amplitude{1.0};  // A_q
    double q{1.0};
    double cutoff{1.0};     // w_c
    double h0{1.0};         // Heaviside height
    double w0{0.0};         // Heaviside window edges
    double w1{1.0};

    // couplings
    double lambda{1.0};
    double Omega{1.0};
    double V{0.0};
    double mu{0.0};
    double g_offset{0.0};  // g(w) = g_offset + g_scale w^g_power
    double g_scale{1.0};
    double g_power{1.0};
    double f_scale{0.0};  // f(w) = f_scale w^f_power
    double f_power{0.0};

    // closed-form surface parameters
    double eps{0.1};       // X: 4 lambda^2 A_q wc^{2q+1}; D: SD prefactor
    double mu_param{1.0};  // D closed form
    double k_power{1.0};   // D closed form

    // dimer state
    double p{0.5};

    // discrete mode set (comma lists, parallel)
    std::vector<double> mode_omegas;
    std::vector<double> mode_gs;
    std::vector<double> mode_fs;
    std::vector<double> mode_alphas_re;
    std::vector<double> mode_alphas_im;

    // analysis window [j_lo, j_hi)
    double j_lo{0.0};
    double j_hi{std::numeric_limits<double>::infinity()};

    // grids
    double p_min{0.0}, p_max{1.0};
    int p_steps{101};
    double tau_min{0.01}, tau_max{1000.0};
    int tau_steps{101};
    bool tau_log{true};

    // sweep
    SweepMode sweep_mode{SweepMode::split};
    std::vector<double> sweep_values{0.1, 1.0, 2.0, 5.0};  // z0 or nu0 ladder
    double delta{0.1};                                     // window width (nu1 - nu0)

    // tolerances and run control
    double tol{1e-8};
    double tol_rank{1e-10};
    double tol_quad{1e-7};
    std::string out{};
    unsigned long seed{12345};
    int threads{0};  // 0 = auto; DEPHASE_EE_THREADS caps this

    bool operator==(const RunConfig&) const = default;
};

// ------------------------------ enum names ------------------------------------

inline std::string to_string(Command c) {
    switch (c) {
        case Command::surface: return "surface";
        case Command::trace: return "trace";
        case Command::tpd: return "tpd";
        case Command::verify: return "verify";
        case Command::sweep: return "sweep";
    }
    return "?";
}

inline Command command_from_string(const std::string& s) {
    if (s == "surface") return Command::surface;
    if (s == "trace") return Command::trace;
    if (s == "tpd") return Command::tpd;
    if (s == "verify") return Command::verify;
    if (s == "sweep") return Command::sweep;
    throw ConfigError("unknown command '" + s + "'");
}

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_list(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ',';
        s += format_double(xs[i]);
    }
    return s;
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a number");
    }
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    if (v.empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
    return out;
}

inline int parse_int(const std::string& key, const std::string& v) {
    const double x = parse_double(key, v);
    return static_cast<int>(x);
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

}  // namespace detail

// ------------------------------ set / render -----------------------------------

inline void config_set(RunConfig& c, const std::string& key, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    using detail::parse_list;
    if (key == "command") c.command = command_from_string(value);
    else if (key == "model") {
        if (value == "X" || value == "x") c.model = ModelKind::X;
        else if (value == "D" || value == "d") c.model = ModelKind::D;
        else throw ConfigError("key 'model': expected X or D");
    } else if (key == "engine") {
        if (value == "discrete") c.engine = EngineKind::discrete;
        else if (value == "continuum") c.engine = EngineKind::continuum;
        else throw ConfigError("key 'engine': expected discrete or continuum");
    } else if (key == "density") {
        if (value != "power_law" && value != "heaviside") {
            throw ConfigError("key 'density': expected power_law or heaviside");
        }
        c.density = value;
    } else if (key == "amplitude") c.amplitude = parse_double(key, value);
    else if (key == "q") c.q = parse_double(key, value);
    else if (key == "cutoff") c.cutoff = parse_double(key, value);
    else if (key == "h0") c.h0 = parse_double(key, value);
    else if (key == "w0") c.w0 = parse_double(key, value);
    else if (key == "w1") c.w1 = parse_double(key, value);
    else if (key == "lambda") c.lambda = parse_double(key, value);
    else if (key == "Omega") c.Omega = parse_double(key, value);
    else if (key == "V") c.V = parse_double(key, value);
    else if (key == "mu") c.mu = parse_double(key, value);
    else if (key == "g_offset") c.g_offset = parse_double(key, value);
    else if (key == "g_scale") c.g_scale = parse_double(key, value);
    else if (key == "g_power") c.g_power = parse_double(key, value);
    else if (key == "f_scale") c.f_scale = parse_double(key, value);
    else if (key == "f_power") c.f_power = parse_double(key, value);
    else if (key == "eps") c.eps = parse_double(key, value);
    else if (key == "mu_param") c.mu_param = parse_double(key, value);
    else if (key == "k_power") c.k_power = parse_double(key, value);
    else if (key == "p") c.p = parse_double(key, value);
    else if (key == "mode_omegas") c.mode_omegas = parse_list(key, value);
    else if (key == "mode_gs") c.mode_gs = parse_list(key, value);
    else if (key == "mode_fs") c.mode_fs = parse_list(key, value);
    else if (key == "mode_alphas_re") c.mode_alphas_re = parse_list(key, value);
    else if (key == "mode_alphas_im") c.mode_alphas_im = parse_list(key, value);
    else if (key == "j_lo") c.j_lo = parse_double(key, value);
    else if (key == "j_hi") c.j_hi = parse_double(key, value);
    else if (key == "p_min") c.p_min = parse_double(key, value);
    else if (key == "p_max") c.p_max = parse_double(key, value);
    else if (key == "p_steps") c.p_steps = parse_int(key, value);
    else if (key == "tau_min") c.tau_min = parse_double(key, value);
    else if (key == "tau_max") c.tau_max = parse_double(key, value);
    else if (key == "tau_steps") c.tau_steps = parse_int(key, value);
    else if (key == "tau_log") c.tau_log = parse_bool(key, value);
    else if (key == "sweep_mode") {
        if (value == "split") c.sweep_mode = SweepMode::split;
        else if (value == "window") c.sweep_mode = SweepMode::window;
        else throw ConfigError("key 'sweep_mode': expected split or window");
    } else if (key == "sweep_values") c.sweep_values = parse_list(key, value);
    else if (key == "delta") c.delta = parse_double(key, value);
    else if (key == "tol") c.tol = parse_double(key, value);
    else if (key == "tol_rank") c.tol_rank = parse_double(key, value);
    else if (key == "tol_quad") c.tol_quad = parse_double(key, value);
    else if (key == "out") c.out = value;
    else if (key == "seed") c.seed = static_cast<unsigned long>(parse_double(key, value));
    else if (key == "threads") c.threads = parse_int(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

inline std::string render_config(const RunConfig& c) {
    using detail::format_double;
    using detail::format_list;
    std::string s;
    auto kv = [&s](const std::string& k, const std::string& v) {
        s += k;
        s += " = ";
        s += v;
        s += '\n';
    };
    kv("command", to_string(c.command));
    kv("model", c.model == ModelKind::X ? "X" : "D");
    kv("engine", c.engine == EngineKind::discrete ? "discrete" : "continuum");
    kv("density", c.density);
    kv("amplitude", format_double(c.amplitude));
    kv("q", format_double(c.q));
    kv("cutoff", format_double(c.cutoff));
    kv("h0", format_double(c.h0));
    kv("w0", format_double(c.w0));
    kv("w1", format_double(c.w1));
    kv("lambda", format_double(c.lambda));
    kv("Omega", format_double(c.Omega));
    kv("V", format_double(c.V));
    kv("mu", format_double(c.mu));
    kv("g_offset", format_double(c.g_offset));
    kv("g_scale", format_double(c.g_scale));
    kv("g_power", format_double(c.g_power));
    kv("f_scale", format_double(c.f_scale));
    kv("f_power", format_double(c.f_power));
    kv("eps", format_double(c.eps));
    kv("mu_param", format_double(c.mu_param));
    kv("k_power", format_double(c.k_power));
    kv("p", format_double(c.p));
    kv("mode_omegas", format_list(c.mode_omegas));
    kv("mode_gs", format_list(c.mode_gs));
    kv("mode_fs", format_list(c.mode_fs));
    kv("mode_alphas_re", format_list(c.mode_alphas_re));
    kv("mode_alphas_im", format_list(c.mode_alphas_im));
    kv("j_lo", format_double(c.j_lo));
    kv("j_hi", format_double(c.j_hi));
    kv("p_min", format_double(c.p_min));
    kv("p_max", format_double(c.p_max));
    kv("p_steps", std::to_string(c.p_steps));
    kv("tau_min", format_double(c.tau_min));
    kv("tau_max", format_double(c.tau_max));
    kv("tau_steps", std::to_string(c.tau_steps));
    kv("tau_log", c.tau_log ? "true" : "false");
    kv("sweep_mode", c.sweep_mode == SweepMode::split ? "split" : "window");
    kv("sweep_values", format_list(c.sweep_values));
    kv("delta", format_double(c.delta));
    kv("tol", format_double(c.tol));
    kv("tol_rank", format_double(c.tol_rank));
    kv("tol_quad", format_double(c.tol_quad));
    kv("out", c.out);
    kv("seed", std::to_string(c.seed));
    kv("threads", std::to_string(c.threads));
    return s;
}

// Parses "key = value" lines; '#' starts a comment, blank lines are skipped.
inline RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            s = (b == std::string::npos) ? std::string{} : s.substr(b, e - b + 1);
        };
        strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        strip(key);
        strip(value);
        config_set(c, key, value);
    }
    return c;
}

inline RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// ------------------------- derived model accessors -----------------------------

inline SpectralModel spectral_model_from(const RunConfig& c) {
    SpectralModel m;
    if (c.density == "power_law") {
        m.density = PowerLawCutoff{c.amplitude, c.q, c.cutoff};
    } else {
        m.density = HeavisideWindow{c.h0, c.w0, c.w1};
    }
    m.g_coupling = CouplingLaw{c.g_offset, c.g_scale, c.g_power};
    m.f_coupling = CouplingLaw{0.0, c.f_scale, c.f_power};
    return m;
}

inline DiscreteModeSet mode_set_from(const RunConfig& c) {
    const std::size_t n = c.mode_omegas.size();
    if (n == 0) throw ConfigError("discrete engine requires mode_omegas");
    if (c.mode_gs.size() != n) throw ConfigError("mode_gs length mismatch");
    std::vector<Mode> modes(n);
    for (std::size_t j = 0; j < n; ++j) {
        modes[j].omega = c.mode_omegas[j];
        modes[j].g = c.mode_gs[j];
        modes[j].f = j < c.mode_fs.size() ? c.mode_fs[j] : 0.0;
        const double re = j < c.mode_alphas_re.size() ? c.mode_alphas_re[j] : 0.0;
        const double im = j < c.mode_alphas_im.size() ? c.mode_alphas_im[j] : 0.0;
        modes[j].alpha = cdouble(re, im);
    }
    return make_mode_set(std::move(modes), c.lambda, c.mu, c.Omega, c.V);
}

inline FrequencyWindow window_from(const RunConfig& c) {
    return make_window(c.j_lo, c.j_hi);
}

inline void validate(const RunConfig& c) {
    if (c.p_steps < 2 || c.tau_steps < 2) throw ConfigError("grid steps must be >= 2");
    if (c.tau_min < 0.0) throw ConfigError("tau_min must be >= 0");
    if (!(c.tol > 0.0) || !(c.tol_rank > 0.0) || !(c.tol_quad > 0.0)) {
        throw ConfigError("tolerances must be positive");
    }
}

}  // namespace dephase
