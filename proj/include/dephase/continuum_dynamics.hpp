// continuum_dynamics.hpp — Continuous-mode-limit quantities: quadrature and
// closed forms for the decoherence factor, decay rates, window bounds, the
// partial-decoherence time, and perturbed eigenvalue spectra.

#pragma once

#include "dephase/core.hpp"
#include "dephase/discrete_dynamics.hpp"
#include "dephase/quadrature.hpp"
#include "dephase/special_functions.hpp"

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

namespace dephase {

// --------------------------- decoherence factors ------------------------------

// |s_J(t)| = exp(-4 lambda^2 int_J h_X(w) (1-cos wt)/w^2 dw).
inline double s_continuum_x(const SpectralModel& model, const FrequencyWindow& J,
                            double lambda, double t) {
    if (t < 0.0) throw DomainError("s_continuum_x: t must be >= 0");
    if (t == 0.0 || lambda == 0.0 || J.empty()) return 1.0;
    const double support = spectral_support_upper(model.density);
    double total = 0.0;
    for (const auto& iv : J.intervals()) {
        const double hi = std::min(iv.hi, support);
        if (hi <= iv.lo) continue;
        auto f = [&model, t](double w) {
            return spectral_value(model, w) * one_minus_cos_over_x_sq(w * t) * t * t;
        };
        auto phase = [t](double w) { return w * t; };
        total += integrate_oscillatory(f, iv.lo, hi, phase);
    }
    return std::exp(-4.0 * lambda * lambda * total);
}

// s_J(t) = exp(-int_J h_D(w) [1 - e^{2 i lambda g(w) t}] dw).
inline cdouble s_continuum_d(const SpectralModel& model, const FrequencyWindow& J,
                             double lambda, double t) {
    if (t < 0.0) throw DomainError("s_continuum_d: t must be >= 0");
    if (t == 0.0 || J.empty()) return 1.0;
    const double support = spectral_support_upper(model.density);
    cdouble total = 0.0;
    const auto& g = model.g_coupling;
    for (const auto& iv : J.intervals()) {
        const double hi = std::min(iv.hi, support);
        if (hi <= iv.lo) continue;
        auto f = [&model, &g, lambda, t](double w) {
            return spectral_value(model, w) *
                   (1.0 - std::exp(cdouble(0.0, 2.0 * lambda * g(w) * t)));
        };
        auto phase = [&g, lambda, t](double w) { return 2.0 * lambda * g(w) * t; };
        total += integrate_oscillatory(f, iv.lo, hi, phase);
    }
    return std::exp(-total);
}

// ------------------------------ Q2 family --------------------------------------

// Q2(tau) = int_0^inf z^{2q} e^{-z} (1 - cos tau z) dz.
//   q > -1/2 : Gamma(2q+1) Re(1 - (1 + i tau)^{-(2q+1)})  (principal branch;
//              tau >= 0 keeps the argument inside (0, pi/2))
//   q = -1   : tau arctan tau - (1/2) ln(1 + tau^2)
inline double q2_closed_form(double q, double tau) {
    if (tau < 0.0) throw DomainError("q2_closed_form: tau must be >= 0");
    if (std::abs(q + 1.0) < 1e-12) {
        return tau * std::atan(tau) - 0.5 * std::log1p(tau * tau);
    }
    if (q > -0.5) {
        const double a = 2.0 * q + 1.0;
        const cdouble w = std::pow(cdouble(1.0, tau), -a);
        return gamma_fn(a) * (1.0 - w.real());
    }
    throw UnsupportedExponent("q2_closed_form: q must be > -1/2 or exactly -1");
}

namespace detail {

// z^{2q} e^{-z} (1 - cos tau z), with the z -> 0 singularity written through
// the removable kernel (valid for q >= -1).
inline double q2_integrand(double q, double tau, double z) {
    if (z <= 0.0) return 0.0;
    return std::pow(z, 2.0 * q + 2.0) * std::exp(-z) * one_minus_cos_over_x_sq(tau * z) *
           tau * tau;
}

inline double q2_support(double q) {
    double z = 50.0 + 10.0 * std::max(0.0, 2.0 * q + 2.0);
    return z;
}

}  // namespace detail

// Splits Q2 at z0: (int_0^z0, int_z0^inf); low + high equals the full Q2.
inline std::pair<double, double> q2_split(double q, double tau, double z0) {
    if (!(z0 > 0.0)) throw DomainError("q2_split: z0 must be positive");
    if (tau < 0.0) throw DomainError("q2_split: tau must be >= 0");
    auto f = [q, tau](double z) { return detail::q2_integrand(q, tau, z); };
    auto phase = [tau](double z) { return tau * z; };
    const double zmax = detail::q2_support(q);
    const double low = integrate_oscillatory(f, 0.0, std::min(z0, zmax), phase);
    const double high = z0 >= zmax ? 0.0 : integrate_oscillatory(f, z0, zmax, phase);
    return {low, high};
}

// Q2 over a Heaviside window in the scaled variables:
// (2 tau/pi)(Si(nu1 tau) - Si(nu0 tau)) + (4/pi)(sin^2(nu0 tau/2)/nu0 -
// sin^2(nu1 tau/2)/nu1); equals (2/pi) int_{nu0}^{nu1} (1-cos tau z)/z^2 dz.
inline double q2_window(double nu0, double nu1, double tau) {
    if (!(nu0 > 0.0) || !(nu1 > nu0)) {
        throw DomainError("q2_window: requires 0 < nu0 < nu1");
    }
    const double s0 = std::sin(0.5 * nu0 * tau);
    const double s1 = std::sin(0.5 * nu1 * tau);
    return (2.0 * tau / kPi) * (sine_integral(nu1 * tau) - sine_integral(nu0 * tau)) +
           (4.0 / kPi) * (s0 * s0 / nu0 - s1 * s1 / nu1);
}

// ------------------------------ D closed form ----------------------------------

// |s(tau)| for the Heaviside density with g(w) = g0 w^k:
// exp{-eps mu^k [1 - Re(e^{-i pi/(2k)} gamma(1/k, i mu tau)) / (k (mu tau)^{1/k})]}.
inline double sd_closed_form(double eps, double mu, double k, double tau) {
    if (!(k > 0.0)) throw DomainError("sd_closed_form: k must be positive");
    if (tau < 0.0) throw DomainError("sd_closed_form: tau must be >= 0");
    if (tau == 0.0 || eps == 0.0) return 1.0;
    const double x = mu * tau;
    const double a = 1.0 / k;
    cdouble g;
    try {
        g = lower_incomplete_gamma(a, cdouble(0.0, x));
    } catch (const ConvergenceFailure& e) {
        throw SpecialFunctionFailure(std::string("sd_closed_form: ") + e.what());
    }
    const cdouble rot = std::exp(cdouble(0.0, -kPi / (2.0 * k)));
    const double bracket = 1.0 - (rot * g).real() / (k * std::pow(x, a));
    return std::exp(-eps * std::pow(mu, k) * bracket);
}

// Large-(mu tau) asymptote of the bracket in sd_closed_form, from
// Gamma(a, ix) ~ (ix)^{a-1} e^{-ix} (1 + (a-1)/(ix)):
//   1 - Gamma(1/k) cos(pi/(2k)) / (k (mu tau)^{1/k}) - sin(mu tau)/(k mu tau)
//     - (1/k - 1) cos(mu tau) / (k (mu tau)^2),
// accurate to O((mu tau)^{-2}) relative to the remaining terms.
inline double sd_asymptotic(double eps, double mu, double k, double tau) {
    if (!(k > 0.0)) throw DomainError("sd_asymptotic: k must be positive");
    const double x = mu * tau;
    const double a = 1.0 / k;
    const double bracket = 1.0 - gamma_fn(a) * std::cos(kPi / (2.0 * k)) / (k * std::pow(x, a)) -
                           std::sin(x) / (k * x) - (a - 1.0) * std::cos(x) / (k * x * x);
    return std::exp(-eps * std::pow(mu, k) * bracket);
}

// ------------------------------ X decay rate -----------------------------------

// Full-decoherence rate 2 pi lambda^2 h_X(0) (h_X continuous at 0).
inline double x_decay_rate(const SpectralModel& model, double lambda) {
    const double h0 = spectral_value(model, 0.0);
    if (!std::isfinite(h0)) {
        throw DomainError("x_decay_rate: h_X diverges at omega = 0");
    }
    return 2.0 * kPi * lambda * lambda * h0;
}

// ------------------------------ window bounds ----------------------------------

namespace detail {

// inf/sup of the density on [w0, w1]: exact endpoint+critical-point evaluation
// for the analytic families, 4096-point grid for tabulated data.
inline std::pair<double, double> density_range(const SpectralDensity& d, double w0,
                                               double w1) {
    std::vector<double> probes{w0, w1};
    if (const auto* p = std::get_if<PowerLawCutoff>(&d)) {
        const double wstar = (2.0 * p->q + 2.0) * p->cutoff;
        if (wstar > w0 && wstar < w1) probes.push_back(wstar);
    } else if (const auto* hv = std::get_if<HeavisideWindow>(&d)) {
        for (double b : {hv->lo, hv->hi}) {
            if (b > w0 && b < w1) {
                probes.push_back(std::nextafter(b, w0));
                probes.push_back(b);
            }
        }
        // half-open window: value at hi is already 0
    } else {
        for (int i = 0; i <= 4096; ++i) {
            probes.push_back(w0 + (w1 - w0) * static_cast<double>(i) / 4096.0);
        }
        const auto& tab = std::get<Tabulated>(d);
        for (double w : tab.omega) {
            if (w > w0 && w < w1) probes.push_back(w);
        }
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double w : probes) {
        const double h = spectral_density_value(d, w);
        lo = std::min(lo, h);
        hi = std::max(hi, h);
    }
    return {lo, hi};
}

}  // namespace detail

// Two-sided exponential bounds on |s_J(t)| for J = [w0, w1]:
//   exp(-4 lambda^2 M_J (w1 - w0 + 2/t)/w0^2) <= |s_J| <=
//   exp(-4 lambda^2 m_J (w1 - w0 - 2/t)/w1^2),
// clamped to [0,1] (they may cross 1 for t <= 2/(w1-w0)).
inline std::pair<double, double> window_bounds_x(const SpectralModel& model, double w0,
                                                 double w1, double lambda, double t) {
    if (!(w0 > 0.0) || !(w1 > w0)) {
        throw DomainError("window_bounds_x: requires 0 < w0 < w1");
    }
    if (!(t > 0.0)) throw DomainError("window_bounds_x: t must be positive");
    const auto [mJ, MJ] = detail::density_range(model.density, w0, w1);
    const double c = 4.0 * lambda * lambda;
    double lower = std::exp(-c * MJ * (w1 - w0 + 2.0 / t) / (w0 * w0));
    double upper = std::exp(-c * mJ * (w1 - w0 - 2.0 / t) / (w1 * w1));
    lower = std::clamp(lower, 0.0, 1.0);
    upper = std::clamp(upper, 0.0, 1.0);
    return {lower, upper};
}

// ----------------------------- xi and t_pd --------------------------------------

namespace detail {

// One-sided d/dw of the density at 0 (analytic families; interpolant slope
// for tabulated data).
inline double density_derivative_at_zero(const SpectralDensity& d) {
    if (const auto* p = std::get_if<PowerLawCutoff>(&d)) {
        const double e = 2.0 * p->q + 2.0;
        if (std::abs(e - 1.0) < 1e-12) return p->amplitude;
        if (e > 1.0) return 0.0;
        if (e == 0.0) return -p->amplitude / p->cutoff;
        throw DomainError("xi_coefficient: h'(0) diverges for this exponent");
    }
    if (std::get_if<HeavisideWindow>(&d)) return 0.0;
    const auto& tab = std::get<Tabulated>(d);
    if (tab.omega.size() < 2 || tab.omega.front() > 0.0) return 0.0;
    return (tab.h[1] - tab.h[0]) / (tab.omega[1] - tab.omega[0]);
}

}  // namespace detail

// xi = d/dw [ h_D(g^{-1}(w)) / g'(g^{-1}(w)) ] at w = g(0).
// Closed forms for the linear (power = 1) and square-root (power = 1/2,
// h'(0) = 0) coupling laws; otherwise one-sided second-order differences with
// one Richardson step (the stencil cannot cross w = g(0), the domain edge).
inline double xi_coefficient(const SpectralModel& model) {
    const auto& g = model.g_coupling;
    if (!(g.scale > 0.0) || !(g.power > 0.0)) {
        throw NonInvertibleCoupling("xi_coefficient: coupling law must be strictly increasing");
    }
    if (std::abs(g.power - 1.0) < 1e-12) {
        return detail::density_derivative_at_zero(model.density) / (g.scale * g.scale);
    }
    if (std::abs(g.power - 0.5) < 1e-12 &&
        detail::density_derivative_at_zero(model.density) == 0.0) {
        return 2.0 * spectral_value(model, 0.0) / (g.scale * g.scale);
    }
    if (g.power > 1.0) {
        throw NonInvertibleCoupling("xi_coefficient: g'(0) vanishes for power > 1");
    }
    auto phi = [&](double y) {
        const double w = g.inverse(y);
        return spectral_value(model, w) / g.derivative(w);
    };
    const double y0 = g.offset;  // g(0)
    auto forward_diff = [&phi, y0](double h) {
        // second-order one-sided: (-3 f0 + 4 f1 - f2) / (2h)
        return (-3.0 * phi(y0) + 4.0 * phi(y0 + h) - phi(y0 + 2.0 * h)) / (2.0 * h);
    };
    const double h = 1e-5 * std::max(1.0, std::abs(y0));
    const double d1 = forward_diff(h);
    const double d2 = forward_diff(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;  // one Richardson step
}

// t_pd = sqrt(|xi|) / lambda.
inline double partial_decoherence_time(double xi, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("partial_decoherence_time: lambda must be > 0");
    return std::sqrt(std::abs(xi)) / lambda;
}

// ------------------------------ D plateau --------------------------------------

// exp(-int_J h_D dw); the large-t limit of |s_J|. Depends on J only through
// the integral (for constant h_D, only through |J|).
inline double d_plateau(const SpectralModel& model, const FrequencyWindow& J) {
    if (J.empty()) return 1.0;
    const double support = spectral_support_upper(model.density);
    double total = 0.0;
    for (const auto& iv : J.intervals()) {
        const double hi = std::min(iv.hi, support);
        if (hi <= iv.lo) continue;
        total += integrate([&model](double w) { return spectral_value(model, w); },
                           iv.lo, hi);
    }
    return std::exp(-total);
}

// ---------------------- perturbed entanglement spectrum -------------------------

// r^1_J(t) = 2 (1 - 2p) e^{-int_0^inf h_D} / r_J * Re[c0 (1 - e^{-i t Omega})(1 - conj(s_J))].
inline double r1_continuum(const DimerInitialState& state, const SpectralModel& model,
                           cdouble sJ, double rJ, double Omega, double t) {
    if (rJ < 1e-12) throw SingularDenominator("r1_continuum: r_J vanishes");
    const double damp = d_plateau(model, FrequencyWindow::all());
    const cdouble c0 = state.coherence();
    const cdouble u = 1.0 - std::exp(cdouble(0.0, -Omega * t));
    return 2.0 * (1.0 - 2.0 * state.population()) * damp / rJ *
           (c0 * u * (1.0 - std::conj(sJ))).real();
}

// Eigenvalues {1/2 +- 1/2 [r_J - (V/Omega) r^1_J]} (plus 0 for the oscillator
// 3x3 case) and their entropy.
inline EntanglementSpectrum perturbed_spectrum(double rJ, double r1, double V,
                                               double Omega, bool include_zero = false) {
    if (!(Omega > 0.0) || V / Omega >= 1.0) {
        throw DomainError("perturbed_spectrum: requires V/Omega < 1");
    }
    double rc = rJ - (V / Omega) * r1;
    if (rc < -1e-9 || rc > 1.0 + 1e-9) {
        throw DomainError("perturbed_spectrum: corrected r outside [0,1]");
    }
    rc = std::clamp(rc, 0.0, 1.0);
    std::vector<double> ev{0.5 + 0.5 * rc, 0.5 - 0.5 * rc};
    if (include_zero) ev.push_back(0.0);
    return make_entanglement_spectrum(std::move(ev));
}

// --------------------- D-model oscillatory-tail expansion -----------------------

// Two-term asymptotics of int_0^inf h(w) e^{2 i lambda t g(w)} dw by
// integration by parts:
//   e^{2 i lambda t g(0)} [ i h(0) / (2 t lambda g'(0)) - xi / (4 t^2 lambda^2) ]
// with remainder O((t lambda)^{-3}). Requires t > 3 t_pd.
inline cdouble d_asymptotic_expansion(const SpectralModel& model, double lambda, double t) {
    const double xi = xi_coefficient(model);
    const double tpd = partial_decoherence_time(xi, lambda);
    if (!(t > 3.0 * tpd)) {
        throw RegimeError("d_asymptotic_expansion: requires t > 3 t_pd");
    }
    const auto& g = model.g_coupling;
    const double h0 = spectral_value(model, 0.0);
    cdouble leading = 0.0;
    if (std::abs(g.power - 1.0) < 1e-12) {
        leading = cdouble(0.0, h0 / (2.0 * t * lambda * g.scale));
    } else if (g.power > 1.0) {
        throw NonInvertibleCoupling("d_asymptotic_expansion: g'(0) vanishes");
    }
    // power < 1: g'(0) = inf, the boundary term vanishes
    const cdouble second = -xi / (4.0 * t * t * lambda * lambda);
    return std::exp(cdouble(0.0, 2.0 * lambda * t * g.offset)) * (leading + second);
}

// ------------------------------ decay report ------------------------------------

enum class ModelKind { X, D };

// Summary of the decoherence behaviour at one time point.
struct DecayReport {
    double s_abs{1.0};           // |s_J(t)|
    double asymptotic_rate{0.0}; // X-model: 2 pi lambda^2 h_X(0)
    double plateau{1.0};         // D-model: exp(-int_J h_D)
    double t_pd{0.0};
    double xi{0.0};
};

inline DecayReport make_decay_report(ModelKind kind, const SpectralModel& model,
                                     const FrequencyWindow& J, double lambda, double t) {
    DecayReport rep;
    if (kind == ModelKind::X) {
        rep.s_abs = s_continuum_x(model, J, lambda, t);
        rep.asymptotic_rate = x_decay_rate(model, lambda);
        rep.plateau = 0.0;
    } else {
        rep.s_abs = std::abs(s_continuum_d(model, J, lambda, t));
        rep.plateau = d_plateau(model, J);
        rep.xi = xi_coefficient(model);
        rep.t_pd = partial_decoherence_time(rep.xi, lambda);
    }
    return rep;
}

}  // namespace dephase
