// commands.hpp — CLI front-end operations: figure-surface grids, decoherence
// traces, partial-decoherence reports, oracle verification, window sweeps.
// All output is deterministic: identical config produces byte-identical CSV.

#pragma once

#include "dephase/continuum_dynamics.hpp"
#include "dephase/discrete_dynamics.hpp"
#include "dephase/run_config.hpp"
#include "dephase/verify_battery.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace dephase {

// ------------------------------ csv plumbing -----------------------------------

namespace detail {

inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// '#'-prefixed provenance block carrying the full config.
inline std::string csv_preamble(const RunConfig& c) {
    std::string out;
    std::stringstream ss(render_config(c));
    std::string line;
    while (std::getline(ss, line)) {
        out += "# ";
        out += line;
        out += '\n';
    }
    return out;
}

inline int resolve_threads(int requested) {
    int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("DEPHASE_EE_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0 && cap < n) n = cap;
    }
    return n;
}

// Evaluates fn(i) for i in [0, n) across workers; results are merged in index
// order, so the output is independent of the worker count.
inline std::vector<std::string> parallel_rows(std::size_t n, int threads,
                                              const std::function<std::string(std::size_t)>& fn) {
    std::vector<std::string> rows(n);
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) rows[i] = fn(i);
        return rows;
    }
    std::vector<std::thread> pool;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += workers) rows[i] = fn(i);
        });
    }
    for (auto& th : pool) th.join();
    return rows;
}

inline std::vector<double> grid_points(double lo, double hi, int steps, bool log_spaced) {
    std::vector<double> xs(static_cast<std::size_t>(steps));
    if (log_spaced) {
        const double a = std::log(std::max(lo, 1e-300));
        const double b = std::log(hi);
        for (int i = 0; i < steps; ++i) {
            xs[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (steps - 1));
        }
    } else {
        for (int i = 0; i < steps; ++i) {
            xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
        }
    }
    return xs;
}

inline void write_output(const RunConfig& c, const std::string& text) {
    if (c.out.empty()) return;
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw IoError("cannot open output file '" + c.out + "'");
    f << text;
}

}  // namespace detail

// X-model |s(tau)| from the configured Q2 branch; D-model from the
// incomplete-gamma closed form.
inline double surface_s_abs(const RunConfig& c, double tau) {
    if (c.model == ModelKind::X) {
        return std::exp(-c.eps * q2_closed_form(c.q, tau));
    }
    return sd_closed_form(c.eps, c.mu_param, c.k_power, tau);
}

// -------------------------------- surface --------------------------------------

// CSV rows (tau, p, S_E) over the configured grid.
inline std::string cmd_surface(const RunConfig& c) {
    validate(c);
    const auto taus = detail::grid_points(c.tau_min, c.tau_max, c.tau_steps, c.tau_log);
    const auto ps = detail::grid_points(c.p_min, c.p_max, c.p_steps, false);
    std::string text = detail::csv_preamble(c) + "tau,p,S_E\n";
    const auto rows = detail::parallel_rows(
        taus.size(), detail::resolve_threads(c.threads), [&](std::size_t i) {
            const double tau = taus[i];
            const double s = surface_s_abs(c, tau);
            std::string block;
            for (double p : ps) {
                const double se = entanglement_spectrum(p, s).entropy;
                block += detail::csv_number(tau);
                block += ',';
                block += detail::csv_number(p);
                block += ',';
                block += detail::csv_number(se);
                block += '\n';
            }
            return block;
        });
    for (const auto& r : rows) text += r;
    detail::write_output(c, text);
    return text;
}

// --------------------------------- trace ---------------------------------------

// CSV rows (t, |s_J|, r_J, S_J, |rho12|) on the time grid, discrete or
// continuum engine per config.
inline std::string cmd_trace(const RunConfig& c) {
    validate(c);
    const auto ts = detail::grid_points(c.tau_min, c.tau_max, c.tau_steps, c.tau_log);
    const auto J = window_from(c);
    const auto all = FrequencyWindow::all();
    const double p = c.p;
    const double c0_abs = std::sqrt(std::max(0.0, p * (1.0 - p)));
    SpectralModel model;
    DiscreteModeSet ms;
    if (c.engine == EngineKind::continuum) {
        model = spectral_model_from(c);
    } else {
        ms = mode_set_from(c);
    }
    auto s_abs_at = [&](double t, const FrequencyWindow& w) {
        if (c.engine == EngineKind::continuum) {
            return c.model == ModelKind::X ? s_continuum_x(model, w, c.lambda, t)
                                           : std::abs(s_continuum_d(model, w, c.lambda, t));
        }
        return c.model == ModelKind::X ? s_discrete_x(ms, w, t)
                                       : std::abs(s_discrete_d(ms, w, t));
    };
    std::string text = detail::csv_preamble(c) + "t,s_abs,r_J,S_J,rho12_abs\n";
    const auto rows = detail::parallel_rows(
        ts.size(), detail::resolve_threads(c.threads), [&](std::size_t i) {
            const double t = ts[i];
            const double sj = s_abs_at(t, J);
            const auto spec = entanglement_spectrum(p, sj);
            const double rj = spec.eigenvalues[0] - spec.eigenvalues[1];
            const double rho12 = c0_abs * s_abs_at(t, all);
            std::string row;
            for (double v : {t, sj, rj, spec.entropy, rho12}) {
                if (!row.empty()) row += ',';
                row += detail::csv_number(v);
            }
            row += '\n';
            return row;
        });
    for (const auto& r : rows) text += r;
    detail::write_output(c, text);
    return text;
}

// ---------------------------------- tpd ----------------------------------------

// Text report: xi, t_pd, plateau, eta, B1 and the regime validity flags.
inline std::string cmd_tpd(const RunConfig& c) {
    validate(c);
    const auto model = spectral_model_from(c);
    const double xi = xi_coefficient(model);
    const double tpd = partial_decoherence_time(xi, c.lambda);
    const double plateau = d_plateau(model, FrequencyWindow::all());
    const double support = spectral_support_upper(model.density);
    // continuum eta: sup f / inf g taken over the density support
    const double inf_g = model.g_coupling(0.0);
    const double sup_f = std::max(model.f_coupling(0.0), model.f_coupling(support));
    double eta;
    if (c.mu == 0.0 && c.V == 0.0) {
        eta = 0.0;
    } else if (!(c.lambda * inf_g > 0.0)) {
        throw DomainError("cmd_tpd: eta requires lambda * inf g > 0");
    } else if (c.mu * c.Omega * sup_f >= c.lambda * c.V * inf_g) {
        eta = c.mu * sup_f / (c.lambda * inf_g);
    } else {
        eta = (c.V + 2.0 * c.mu * sup_f) / (c.Omega + 2.0 * c.lambda * inf_g);
    }
    const double ca = c_alpha(model);
    const auto b1 = b1_budget(c.V, c.Omega, c.lambda, c.mu, eta, xi, ca, sup_f, inf_g);
    std::string text;
    auto line = [&text](const std::string& k, const std::string& v) {
        text += k;
        text += " = ";
        text += v;
        text += '\n';
    };
    line("xi", detail::csv_number(xi));
    line("t_pd", detail::csv_number(tpd));
    line("plateau", detail::csv_number(plateau));
    line("eta", detail::csv_number(eta));
    line("C_alpha", detail::csv_number(ca));
    line("B1", detail::csv_number(b1.b1));
    line("valid_regime", b1.valid ? "true" : "false");
    detail::write_output(c, text);
    return text;
}

// --------------------------------- verify --------------------------------------

struct VerifyOutcome {
    std::string report;
    int exit_code{0};
};

// Full oracle comparison battery; exit code 0 iff every residual is within
// tolerance.
inline VerifyOutcome cmd_verify(const RunConfig& c) {
    validate(c);
    const auto checks = run_verify_battery(c.tol, c.tol_rank);
    VerifyOutcome out;
    for (const auto& chk : checks) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-32s residual=%-13.6g tol=%-10.4g %s\n",
                      chk.name.c_str(), chk.residual, chk.tolerance,
                      chk.pass ? "PASS" : "FAIL");
        out.report += buf;
        if (!chk.pass) out.exit_code = 1;
    }
    out.report += out.exit_code == 0 ? "verify: all checks passed\n"
                                     : "verify: at least one check failed\n";
    detail::write_output(c, out.report);
    return out;
}

// ---------------------------------- sweep --------------------------------------

// split mode: rows (z0, tau, p, S_E_low, S_E_high) from the Q2 split at z0.
// window mode: rows (nu0, tau, p, S_E) for windows [nu0, nu0 + delta).
inline std::string cmd_sweep(const RunConfig& c) {
    validate(c);
    if (c.sweep_values.empty()) throw ConfigError("cmd_sweep: sweep_values is empty");
    const auto taus = detail::grid_points(c.tau_min, c.tau_max, c.tau_steps, c.tau_log);
    const auto ps = detail::grid_points(c.p_min, c.p_max, c.p_steps, false);
    const bool split = c.sweep_mode == SweepMode::split;
    std::string text = detail::csv_preamble(c);
    text += split ? "z0,tau,p,S_E_low,S_E_high\n" : "nu0,tau,p,S_E\n";
    const std::size_t n = c.sweep_values.size() * taus.size();
    const auto rows = detail::parallel_rows(
        n, detail::resolve_threads(c.threads), [&](std::size_t i) {
            const double sv = c.sweep_values[i / taus.size()];
            const double tau = taus[i % taus.size()];
            std::string block;
            if (split) {
                const auto [lo, hi] = q2_split(c.q, tau, sv);
                const double s_low = std::exp(-c.eps * lo);
                const double s_high = std::exp(-c.eps * hi);
                for (double p : ps) {
                    block += detail::csv_number(sv);
                    block += ',';
                    block += detail::csv_number(tau);
                    block += ',';
                    block += detail::csv_number(p);
                    block += ',';
                    block += detail::csv_number(entanglement_spectrum(p, s_low).entropy);
                    block += ',';
                    block += detail::csv_number(entanglement_spectrum(p, s_high).entropy);
                    block += '\n';
                }
            } else {
                const double s = std::exp(-q2_window(sv, sv + c.delta, tau));
                for (double p : ps) {
                    block += detail::csv_number(sv);
                    block += ',';
                    block += detail::csv_number(tau);
                    block += ',';
                    block += detail::csv_number(p);
                    block += ',';
                    block += detail::csv_number(entanglement_spectrum(p, s).entropy);
                    block += '\n';
                }
            }
            return block;
        });
    for (const auto& r : rows) text += r;
    detail::write_output(c, text);
    return text;
}

}  // namespace dephase
