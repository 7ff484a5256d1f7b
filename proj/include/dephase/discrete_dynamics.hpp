// discrete_dynamics.hpp — Exact analytic dynamics for a finite mode set:
// decoherence factors, reduced dimer and reservoir states, entanglement
// spectra, and the first-order V/Omega corrections. All functions are pure.

#pragma once

#include "dephase/core.hpp"
#include "dephase/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace dephase {

// --------------------------- decoherence factors ------------------------------

// |s_J(t)| = exp[-4 lambda^2 sum_{w_j in J} |g_j|^2 (1-cos w_j t)/w_j^2];
// independent of all alpha_j.
inline double s_discrete_x(const DiscreteModeSet& ms, const FrequencyWindow& J, double t) {
    if (t < 0.0) throw DomainError("s_discrete_x: t must be >= 0");
    double e = 0.0;
    for (const auto& m : ms.modes) {
        if (!J.contains(m.omega)) continue;
        e += std::norm(m.g) * one_minus_cos_over_x_sq(m.omega * t) * t * t;
    }
    return std::exp(-4.0 * ms.lambda * ms.lambda * e);
}

// s_J(t) = exp[-sum_{w_j in J} |alpha_j|^2 (1 - e^{2 i lambda g_j t})].
inline cdouble s_discrete_d(const DiscreteModeSet& ms, const FrequencyWindow& J, double t) {
    if (t < 0.0) throw DomainError("s_discrete_d: t must be >= 0");
    cdouble e = 0.0;
    for (const auto& m : ms.modes) {
        if (!J.contains(m.omega)) continue;
        e += std::norm(m.alpha) *
             (1.0 - std::exp(cdouble(0.0, 2.0 * ms.lambda * m.g.real() * t)));
    }
    return std::exp(-e);
}

// ----------------------------- reduced dimer states ---------------------------

// Coherent-state phase of the X-model off-diagonal:
// exp{4 i lambda Im sum_j conj(alpha_j) g_j (1 - e^{i w_j t}) / w_j}.
inline cdouble x_coherent_phase(const DiscreteModeSet& ms, double t) {
    double im = 0.0;
    for (const auto& m : ms.modes) {
        const cdouble z = std::conj(m.alpha) * m.g *
                          (1.0 - std::exp(cdouble(0.0, m.omega * t))) / m.omega;
        im += z.imag();
    }
    return std::exp(cdouble(0.0, 4.0 * ms.lambda * im));
}

// X-interaction: constant diagonal (p, 1-p); off-diagonal
// e^{-i Omega t} s_[0,inf)(t) * coherent phase * c0.
inline QubitDensityMatrix dimer_state_x(const DimerInitialState& state,
                                        const DiscreteModeSet& ms, double t) {
    const double p = state.population();
    const cdouble off = std::exp(cdouble(0.0, -ms.Omega * t)) *
                        s_discrete_x(ms, FrequencyWindow::all(), t) *
                        x_coherent_phase(ms, t) * state.coherence();
    Eigen::Matrix2cd m;
    m << p, off, std::conj(off), 1.0 - p;
    return QubitDensityMatrix::from(m);
}

// Energy-conserving D-interaction (V = mu = 0): off-diagonal
// e^{-i Omega t} conj(s_[0,inf)(t)) c0.
inline QubitDensityMatrix dimer_state_d0(const DimerInitialState& state,
                                         const DiscreteModeSet& ms, double t) {
    check_d_model(ms);
    const double p = state.population();
    const cdouble off = std::exp(cdouble(0.0, -ms.Omega * t)) *
                        std::conj(s_discrete_d(ms, FrequencyWindow::all(), t)) *
                        state.coherence();
    Eigen::Matrix2cd m;
    m << p, off, std::conj(off), 1.0 - p;
    return QubitDensityMatrix::from(m);
}

// --------------------------- rank-2 reservoir state ---------------------------

// Reduced reservoir state in the ordered Gram-Schmidt basis {Psi+_J, eta_J}:
//   [[ p + (1-p)|s|^2,        (1-p) s sqrt(1-|s|^2) ],
//    [ (1-p) conj(s) sqrt(1-|s|^2), (1-p)(1-|s|^2)  ]]
// For |s| = 1 the basis degenerates and the rank-1 limit diag(1,0) is returned.
inline ReservoirReducedState reservoir_state_rank2(const DimerInitialState& state,
                                                   cdouble sJ) {
    const double m = std::abs(sJ);
    if (m > 1.0 + 1e-12) {
        throw DomainError("reservoir_state_rank2: |s_J| exceeds 1");
    }
    const double p = state.population();
    Eigen::MatrixXcd r(2, 2);
    if (m >= 1.0) {
        r << 1.0, 0.0, 0.0, 0.0;
    } else {
        const double q = 1.0 - p;
        const double root = std::sqrt(1.0 - m * m);
        r << p + q * m * m, q * sJ * root, q * std::conj(sJ) * root, q * (1.0 - m * m);
    }
    return ReservoirReducedState::from(r, "gram-schmidt{Psi+,eta}");
}

// --------------------------- entanglement spectrum -----------------------------

// Eigenvalues {1/2 +- 1/2 r}, r = sqrt(1 - 4 p (1-p) (1 - s^2)), with the
// entropy in nats (0 ln 0 = 0).
inline EntanglementSpectrum entanglement_spectrum(double p, double sJ_abs) {
    if (p < -1e-12 || p > 1.0 + 1e-12) {
        throw DomainError("entanglement_spectrum: p outside [0,1]");
    }
    if (sJ_abs < -1e-12 || sJ_abs > 1.0 + 1e-12) {
        throw DomainError("entanglement_spectrum: |s_J| outside [0,1]");
    }
    p = std::clamp(p, 0.0, 1.0);
    sJ_abs = std::clamp(sJ_abs, 0.0, 1.0);
    const double arg = 1.0 - 4.0 * p * (1.0 - p) * (1.0 - sJ_abs * sJ_abs);
    const double r = std::sqrt(std::max(0.0, arg));
    return make_entanglement_spectrum({0.5 + 0.5 * r, 0.5 - 0.5 * r});
}

// ------------------------- first-order V/Omega pieces --------------------------

// rho^1_S(t): diagonal +-Re[(1 - e^{-i Omega t}) c0], off-diagonal
// (p - 1/2)(1 - e^{-+ i Omega t}); traceless Hermitian.
inline Eigen::Matrix2cd dimer_first_order(const DimerInitialState& state, double Omega,
                                          double t) {
    if (t < 0.0) throw DomainError("dimer_first_order: t must be >= 0");
    const cdouble c0 = state.coherence();
    const double p = state.population();
    const cdouble u = 1.0 - std::exp(cdouble(0.0, -Omega * t));
    const double d = (u * c0).real();
    const cdouble w = (p - 0.5) * u;
    Eigen::Matrix2cd m;
    m << d, w, std::conj(w), -d;
    return m;
}

// Refined correction using the dressed frequency sqrt(Omega^2 + V^2); reduces
// to dimer_first_order at V = 0.
inline Eigen::Matrix2cd dimer_first_order_refined(const DimerInitialState& state,
                                                  double Omega, double V, double t) {
    if (t < 0.0) throw DomainError("dimer_first_order_refined: t must be >= 0");
    if (V < 0.0) throw DomainError("dimer_first_order_refined: V must be >= 0");
    const double w_dressed = std::sqrt(Omega * Omega + V * V);
    const cdouble c0 = state.coherence();
    const double p = state.population();
    const cdouble ev = std::exp(cdouble(0.0, -w_dressed * t));
    const cdouble e0 = std::exp(cdouble(0.0, -Omega * t));
    const double d = ((1.0 - ev) * c0).real();
    const cdouble w = (ev - e0) * c0 + (p - 0.5) * (1.0 - ev);
    Eigen::Matrix2cd m;
    m << d, w, std::conj(w), -d;
    return m;
}

// rho^1_J(t): Hermitian traceless 3x3 correction to the reservoir state in the
// Gram-Schmidt basis {e+, eta, chi}, with
//   delta_J = e^{-sum_{j in J} |alpha_j|^2}
//   v_J     = (1/2)(1 - e^{-i Omega t}) c0 e^{-sum_{j not in J} |alpha_j|^2}
//   N_J     = sqrt(1 - 2 delta_J (1 - Re s_J)/(1 - |s_J|^2))
// Entry (3,3) vanishes identically.
inline Eigen::Matrix3cd reservoir_first_order(const DimerInitialState& state,
                                              const DiscreteModeSet& ms,
                                              const FrequencyWindow& J, double t) {
    check_d_model(ms);
    if (t < 0.0) throw DomainError("reservoir_first_order: t must be >= 0");
    double a_in = 0.0, a_out = 0.0;
    for (const auto& m : ms.modes) {
        (J.contains(m.omega) ? a_in : a_out) += std::norm(m.alpha);
    }
    const cdouble c0 = state.coherence();
    const cdouble vJ = 0.5 * (1.0 - std::exp(cdouble(0.0, -ms.Omega * t))) * c0 *
                       std::exp(-a_out);
    if (std::abs(vJ) == 0.0) {
        return Eigen::Matrix3cd::Zero();  // no initial coherence or t = 0 mod 2pi/Omega
    }
    const cdouble s = s_discrete_d(ms, J, t);
    const double m = std::abs(s);
    if (m >= 1.0 - 1e-12) {
        throw DegenerateBasis("reservoir_first_order: |s_J| = 1, basis degenerates");
    }
    const double delta = std::exp(-a_in);
    const double one_minus_m2 = 1.0 - m * m;
    const double root = std::sqrt(one_minus_m2);
    const double nj_sq = 1.0 - 2.0 * delta * (1.0 - s.real()) / one_minus_m2;
    if (nj_sq < 0.0) {
        throw DegenerateBasis("reservoir_first_order: Gram-Schmidt norm is negative");
    }
    const double nj = std::sqrt(nj_sq);
    const double inv_sqrt_delta = 1.0 / std::sqrt(delta);
    const double r11 = 2.0 * (std::conj(vJ) * (1.0 - s)).real();
    const cdouble r12 = (vJ - std::conj(vJ) * s) * (1.0 - s) / root - vJ * root;
    const cdouble r13 = inv_sqrt_delta * nj * (vJ - s * std::conj(vJ));
    const cdouble r23 = -root * std::conj(vJ) * inv_sqrt_delta * nj;
    Eigen::Matrix3cd out;
    out << r11, r12, r13, std::conj(r12), -r11, r23, std::conj(r13), std::conj(r23), 0.0;
    return out;
}

// rho0 + (V/Omega) e^{-sum_j |alpha_j|^2} rho1 (rho1 traceless Hermitian).
inline QubitDensityMatrix assemble_perturbed_dimer(const QubitDensityMatrix& rho0,
                                                   const Eigen::Matrix2cd& rho1, double V,
                                                   double Omega,
                                                   const DiscreteModeSet& ms) {
    if (!(Omega > 0.0) || V / Omega >= 1.0) {
        throw DomainError("assemble_perturbed_dimer: requires V/Omega < 1");
    }
    const double coeff = (V / Omega) * std::exp(-ms.alpha_norm_sq_total());
    return QubitDensityMatrix::from(rho0.matrix() + coeff * rho1);
}

// Reservoir counterpart: rho00 (2x2 of (17.1) padded to 3x3) plus
// (V/Omega) delta_J rho1_J, in the same Gram-Schmidt basis.
inline Eigen::Matrix3cd assemble_perturbed_reservoir(const DimerInitialState& state,
                                                     const DiscreteModeSet& ms,
                                                     const FrequencyWindow& J, double t,
                                                     double V) {
    const cdouble s = s_discrete_d(ms, J, t);
    Eigen::Matrix3cd out = Eigen::Matrix3cd::Zero();
    out.topLeftCorner<2, 2>() = reservoir_state_rank2(state, s).matrix();
    double a_in = 0.0;
    for (const auto& m : ms.modes) {
        if (J.contains(m.omega)) a_in += std::norm(m.alpha);
    }
    out += (V / ms.Omega) * std::exp(-a_in) * reservoir_first_order(state, ms, J, t);
    return out;
}

// ------------------------- energy-exchange smallness ---------------------------

// Discrete eta of the two-branch formula:
//   mu max f / (lambda min g)                     if mu Omega max f >= lambda V min g
//   (V + 2 mu max f) / (Omega + 2 lambda min g)   otherwise
inline double eta_parameter(const DiscreteModeSet& ms) {
    check_d_model(ms);
    if (ms.mu == 0.0 && ms.V == 0.0) return 0.0;
    double min_g = std::numeric_limits<double>::infinity();
    double max_f = 0.0;
    for (const auto& m : ms.modes) {
        min_g = std::min(min_g, m.g.real());
        max_f = std::max(max_f, m.f);
    }
    if (!(ms.lambda * min_g > 0.0)) {
        throw DomainError("eta_parameter: requires lambda * min g > 0");
    }
    if (ms.mu * ms.Omega * max_f >= ms.lambda * ms.V * min_g) {
        return ms.mu * max_f / (ms.lambda * min_g);
    }
    return (ms.V + 2.0 * ms.mu * max_f) / (ms.Omega + 2.0 * ms.lambda * min_g);
}

// C_alpha = int_0^inf h_D(w) f(w) dw.
inline double c_alpha(const SpectralModel& model) {
    const double upper = spectral_support_upper(model.density);
    if (upper <= 0.0) return 0.0;
    auto f = [&model](double w) {
        return spectral_value(model, w) * model.f_coupling(w);
    };
    QuadratureOptions opts;
    opts.abs_tol = 1e-11;
    opts.rel_tol = 1e-11;
    return integrate(f, 0.0, upper, opts);
}

// ----------------------------- validity budget ---------------------------------

struct B1Result {
    double b1{0.0};
    bool valid{false};  // the three regime conditions, "<<" as ratio < threshold
};

// B1 = V^2/Omega^2 + eta + sqrt|xi| eta V / lambda + sqrt|xi| eta mu C_alpha / lambda.
// Regime flags: V << Omega, sqrt|xi| V^2 << lambda Omega,
// mu Omega sup f << lambda V inf g. A vanishing left side counts as satisfied.
inline B1Result b1_budget(double V, double Omega, double lambda, double mu, double eta,
                          double xi, double c_alpha_value, double sup_f, double inf_g,
                          double ratio_threshold = 0.1) {
    if (!(lambda > 0.0)) throw DomainError("b1_budget: requires lambda > 0");
    const double root_xi = std::sqrt(std::abs(xi));
    B1Result out;
    out.b1 = V * V / (Omega * Omega) + eta + root_xi * eta * V / lambda +
             root_xi * eta * mu * c_alpha_value / lambda;
    auto much_less = [ratio_threshold](double lhs, double rhs) {
        return lhs == 0.0 || lhs < ratio_threshold * rhs;
    };
    out.valid = much_less(V, Omega) && much_less(root_xi * V * V, lambda * Omega) &&
                much_less(mu * Omega * sup_f, lambda * V * inf_g);
    return out;
}

inline B1Result b1_budget(const DiscreteModeSet& ms, double eta, double xi,
                          double c_alpha_value, double ratio_threshold = 0.1) {
    double min_g = std::numeric_limits<double>::infinity();
    double max_f = 0.0;
    for (const auto& m : ms.modes) {
        min_g = std::min(min_g, std::abs(m.g));
        max_f = std::max(max_f, m.f);
    }
    return b1_budget(ms.V, ms.Omega, ms.lambda, ms.mu, eta, xi, c_alpha_value, max_f,
                     min_g, ratio_threshold);
}

}  // namespace dephase
