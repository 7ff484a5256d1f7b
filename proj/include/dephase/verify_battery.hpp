// verify_battery.hpp — The oracle comparison battery: brute-force Fock
// propagation vs the analytic engines on fixed small instances. Drives the
// `verify` CLI command and the acceptance suite.

#pragma once

#include "dephase/core.hpp"
#include "dephase/discrete_dynamics.hpp"
#include "dephase/fock_oracle.hpp"

#include <cstdio>
#include <string>
#include <vector>

namespace dephase {

struct CheckResult {
    std::string name;
    double residual{0.0};
    double tolerance{0.0};
    bool pass{false};
};

inline CheckResult make_check(std::string name, double residual, double tolerance) {
    CheckResult c;
    c.name = std::move(name);
    c.residual = residual;
    c.tolerance = tolerance;
    c.pass = residual <= tolerance;
    return c;
}

namespace battery {

// Canonical N=2 instance for the X equivalence checks.
inline DiscreteModeSet x_instance(double lambda = 0.3) {
    std::vector<Mode> modes(2);
    modes[0] = {1.0, cdouble(1.0), 0.0, cdouble(0.8, 0.0)};
    modes[1] = {1.7, cdouble(0.6), 0.0, cdouble(0.0, 0.5)};
    return make_mode_set(std::move(modes), lambda, 0.0, 1.0, 0.0);
}

// Same mode set with g > 0 for the energy-conserving D checks.
inline DiscreteModeSet d_instance(double lambda = 0.3) {
    std::vector<Mode> modes(2);
    modes[0] = {1.0, cdouble(1.0), 0.0, cdouble(0.8, 0.0)};
    modes[1] = {1.7, cdouble(0.6), 0.0, cdouble(0.0, 0.5)};
    return make_mode_set(std::move(modes), lambda, 0.0, 1.0, 0.0);
}

// Strong-coupling instance for the perturbative V-ladder (t_pd = 1/lambda).
inline DiscreteModeSet ladder_instance(double V, double lambda = 5.0) {
    std::vector<Mode> modes(2);
    modes[0] = {1.0, cdouble(1.0), 0.0, cdouble(1.0, 0.0)};
    modes[1] = {1.7, cdouble(2.0), 0.0, cdouble(1.0, 0.0)};
    return make_mode_set(std::move(modes), lambda, 0.0, 1.0, V);
}

inline DimerInitialState p03_state() {
    return make_dimer_state(std::sqrt(0.3), std::sqrt(0.7));
}

// Gram-Schmidt basis {e+, eta, chi} of the D-model reservoir span, built in
// the J-restricted oscillator number basis (column convention matches
// reduce_window).
inline Eigen::VectorXcd kron_vec(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    Eigen::VectorXcd out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

inline Eigen::MatrixXcd d_reservoir_basis(const DiscreteModeSet& ms,
                                          const FrequencyWindow& J,
                                          const std::vector<int>& dims, double t) {
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < ms.size(); ++j) {
        if (J.contains(ms.modes[j].omega)) keep.push_back(j);
    }
    std::size_t dk = 1;
    for (std::size_t j : keep) dk *= static_cast<std::size_t>(dims[j]);
    Eigen::VectorXcd eplus = Eigen::VectorXcd::Ones(1);
    Eigen::VectorXcd eminus = Eigen::VectorXcd::Ones(1);
    for (std::size_t j : keep) {
        const auto& m = ms.modes[j];
        const auto table = coherent_amplitude_table(m.alpha, static_cast<std::size_t>(dims[j]));
        Eigen::VectorXcd up(dims[j]), dn(dims[j]);
        for (int n = 0; n < dims[j]; ++n) {
            const double wp = (m.omega + ms.lambda * m.g.real()) * n;
            const double wm = (m.omega - ms.lambda * m.g.real()) * n;
            up(n) = table[static_cast<std::size_t>(n)] * std::exp(cdouble(0.0, -wp * t));
            dn(n) = table[static_cast<std::size_t>(n)] * std::exp(cdouble(0.0, -wm * t));
        }
        eplus = kron_vec(eplus, up);
        eminus = kron_vec(eminus, dn);
    }
    const cdouble s = eplus.dot(eminus);  // <e+|e->
    Eigen::VectorXcd eta = (eminus - s * eplus) / std::sqrt(1.0 - std::norm(s));
    Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dk));
    vac(0) = 1.0;
    Eigen::VectorXcd chi = vac - eplus.dot(vac) * eplus - eta.dot(vac) * eta;
    chi /= chi.norm();
    Eigen::MatrixXcd B(dk, 3);
    B.col(0) = eplus;
    B.col(1) = eta;
    B.col(2) = chi;
    return B;
}

}  // namespace battery

// Criterion-3 battery: X-model off-diagonal (phase-exact) and window spectrum.
inline std::vector<CheckResult> battery_x_oracle(double tol, double lambda = 0.3) {
    std::vector<CheckResult> out;
    const auto ms = battery::x_instance(lambda);
    const auto state = battery::p03_state();
    auto dims = choose_truncation_x(ms);
    for (auto& d : dims) d = std::max(d, 25);
    const auto space = TruncatedSpace::create(dims);
    const auto prop = Propagator::diagonalize(build_hamiltonian_x(ms, space));
    const auto psi0 = coherent_product_state(state, ms, space);
    const auto J = make_window(0.5, 1.5);  // mode 1 only
    const double p = state.population();
    for (double t : {0.5, 1.0, 3.0, 10.0}) {
        const auto psit = prop.evolve(psi0, t);
        const auto rho_s = reduce_dimer(psit);
        const auto predicted = dimer_state_x(state, ms, t);
        const double doff = std::abs(rho_s.off_diagonal() - predicted.off_diagonal());
        char name[64];
        std::snprintf(name, sizeof name, "x_offdiag_t%g", t);
        out.push_back(make_check(name, doff, tol));

        const auto rho_j = reduce_window(psit, J, ms);
        const auto spec = oracle_entanglement_spectrum(rho_j);
        const double sj = s_discrete_x(ms, J, t);
        const auto pred = entanglement_spectrum(p, sj);
        double dspec = 0.0;
        for (std::size_t i = 0; i < 2; ++i) {
            const double o = i < spec.eigenvalues.size() ? spec.eigenvalues[i] : 0.0;
            dspec = std::max(dspec, std::abs(o - pred.eigenvalues[i]));
        }
        std::snprintf(name, sizeof name, "x_window_spectrum_t%g", t);
        out.push_back(make_check(name, dspec, tol));
    }
    return out;
}

// Criterion-4 battery: energy-conserving D-model off-diagonal, window
// spectrum, and the rank-2 claim (third eigenvalue below tol_rank).
inline std::vector<CheckResult> battery_d_oracle(double tol, double tol_rank,
                                                 double lambda = 0.3) {
    std::vector<CheckResult> out;
    const auto ms = battery::d_instance(lambda);
    const auto state = battery::p03_state();
    const auto space = TruncatedSpace::create(choose_truncation_d(ms));
    const auto prop = Propagator::diagonalize(build_hamiltonian_d(ms, space));
    const auto psi0 = coherent_product_state(state, ms, space);
    const auto J = make_window(0.5, 1.5);
    const double p = state.population();
    for (double t : {0.5, 1.0, 3.0, 10.0}) {
        const auto psit = prop.evolve(psi0, t);
        const auto rho_s = reduce_dimer(psit);
        const auto predicted = dimer_state_d0(state, ms, t);
        const double doff = std::abs(rho_s.off_diagonal() - predicted.off_diagonal());
        char name[64];
        std::snprintf(name, sizeof name, "d_offdiag_t%g", t);
        out.push_back(make_check(name, doff, tol));

        const auto rho_j = reduce_window(psit, J, ms);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_j, Eigen::EigenvaluesOnly);
        Eigen::VectorXd ev = es.eigenvalues().reverse();
        const double sj = std::abs(s_discrete_d(ms, J, t));
        const auto pred = entanglement_spectrum(p, sj);
        const double dspec = std::max(std::abs(ev(0) - pred.eigenvalues[0]),
                                      std::abs(ev(1) - pred.eigenvalues[1]));
        std::snprintf(name, sizeof name, "d_window_spectrum_t%g", t);
        out.push_back(make_check(name, dspec, tol));
        std::snprintf(name, sizeof name, "d_window_rank2_t%g", t);
        out.push_back(make_check(name, std::abs(ev(2)), tol_rank));
    }
    return out;
}

// Criterion-5 battery: first-order V/Omega prediction; the trace-norm
// residual divided by V/Omega must decrease strictly along the V-ladder, for
// the dimer against rho^1_S and for the J-reservoir against rho^1_J.
inline std::vector<CheckResult> battery_perturbative(double lambda = 5.0) {
    std::vector<CheckResult> out;
    const auto state = battery::p03_state();
    const double t = 0.5 / lambda;  // t_pd / 2 with xi = 1
    const auto J = make_window(0.5, 1.5);
    std::vector<double> ratio_s, ratio_j;
    for (double V : {0.04, 0.02, 0.01}) {
        auto ms = battery::ladder_instance(V, lambda);
        const auto dims = choose_truncation_d(ms);
        const auto space = TruncatedSpace::create(dims);
        const auto prop = Propagator::diagonalize(build_hamiltonian_d(ms, space));
        const auto psit = prop.evolve(coherent_product_state(state, ms, space), t);

        auto ms0 = ms;
        ms0.V = 0.0;
        const auto rho0 = dimer_state_d0(state, ms0, t);
        const auto rho1 = dimer_first_order(state, ms.Omega, t);
        const auto pred_s = assemble_perturbed_dimer(rho0, rho1, V, ms.Omega, ms);
        const auto rep_s = residual_report(pred_s.matrix(), reduce_dimer(psit).matrix());
        ratio_s.push_back(rep_s.trace_distance / (V / ms.Omega));

        const auto rho_j = reduce_window(psit, J, ms);
        const auto basis = battery::d_reservoir_basis(ms0, J, dims, t);
        const Eigen::Matrix3cd pred3 = assemble_perturbed_reservoir(state, ms0, J, t, V);
        const Eigen::MatrixXcd lifted = basis * pred3 * basis.adjoint();
        const auto rep_j = residual_report(lifted, rho_j);
        ratio_j.push_back(rep_j.trace_distance / (V / ms.Omega));
    }
    auto ladder_check = [&out](const std::string& name, const std::vector<double>& r) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < r.size(); ++i) {
            worst = std::max(worst, r[i + 1] - r[i]);
        }
        // strictly decreasing <=> every consecutive difference negative
        CheckResult c;
        c.name = name;
        c.residual = worst;
        c.tolerance = 0.0;
        c.pass = worst < 0.0;
        out.push_back(c);
    };
    ladder_check("perturbative_ladder_dimer", ratio_s);
    ladder_check("perturbative_ladder_reservoir", ratio_j);
    return out;
}

inline std::vector<CheckResult> run_verify_battery(double tol, double tol_rank) {
    std::vector<CheckResult> all;
    for (auto& c : battery_x_oracle(tol)) all.push_back(std::move(c));
    for (auto& c : battery_d_oracle(tol, tol_rank)) all.push_back(std::move(c));
    for (auto& c : battery_perturbative()) all.push_back(std::move(c));
    return all;
}

}  // namespace dephase
