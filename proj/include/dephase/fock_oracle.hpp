// fock_oracle.hpp — Independent brute-force truth: exact unitary evolution of
// dimer (x) N truncated oscillators for both Hamiltonians (any V, mu), partial
// traces, entanglement spectra. Dense Hermitian eigendecomposition (LAPACK
// zheevd) serves all evolution times.

#pragma once

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "dephase/core.hpp"
#include "dephase/special_functions.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace dephase {

// ------------------------------ truncated space -------------------------------

// Product basis (dimer level, n_1, ..., n_N) <-> flat index; dimer index is
// the slowest axis, oscillator N the fastest.
class TruncatedSpace {
  public:
    static constexpr std::size_t kDefaultCap = std::size_t{1} << 16;

    static TruncatedSpace create(std::vector<int> dims, std::size_t cap = kDefaultCap) {
        if (dims.empty()) throw DomainError("TruncatedSpace: need at least one oscillator");
        std::size_t osc = 1;
        for (int d : dims) {
            if (d < 1) throw DomainError("TruncatedSpace: dimensions must be >= 1");
            osc *= static_cast<std::size_t>(d);
            if (2 * osc > cap) {
                throw CapExceeded("TruncatedSpace: dimension exceeds cap " +
                                  std::to_string(cap));
            }
        }
        return TruncatedSpace(std::move(dims), 2 * osc);
    }

    const std::vector<int>& dims() const { return dims_; }
    std::size_t total() const { return total_; }
    std::size_t oscillator_total() const { return total_ / 2; }

    std::size_t flatten(int dimer, const std::vector<int>& ns) const {
        std::size_t idx = static_cast<std::size_t>(dimer);
        for (std::size_t j = 0; j < dims_.size(); ++j) {
            idx = idx * static_cast<std::size_t>(dims_[j]) + static_cast<std::size_t>(ns[j]);
        }
        return idx;
    }

    void unflatten(std::size_t idx, int& dimer, std::vector<int>& ns) const {
        ns.resize(dims_.size());
        for (std::size_t j = dims_.size(); j-- > 0;) {
            ns[j] = static_cast<int>(idx % static_cast<std::size_t>(dims_[j]));
            idx /= static_cast<std::size_t>(dims_[j]);
        }
        dimer = static_cast<int>(idx);
    }

  private:
    TruncatedSpace(std::vector<int> dims, std::size_t total)
        : dims_(std::move(dims)), total_(total) {}
    std::vector<int> dims_;
    std::size_t total_;
};

// Truncation choice: Poisson tail <= tail for the initial coherent state, and
// for the X-model additional headroom for the polaron displacement
// 2 lambda |g_j| / w_j (number growth is not conserved there).
inline std::vector<int> choose_truncation_d(const DiscreteModeSet& ms, double tail = 1e-14) {
    std::vector<int> dims;
    for (const auto& m : ms.modes) {
        dims.push_back(static_cast<int>(coherent_amplitudes(m.alpha, tail).dim));
    }
    return dims;
}

inline std::vector<int> choose_truncation_x(const DiscreteModeSet& ms, double tail = 1e-14) {
    std::vector<int> dims;
    for (const auto& m : ms.modes) {
        const double a = std::abs(m.alpha);
        const double shift = ms.lambda * std::abs(m.g) / m.omega;
        const double floor_d = a * a + 10.0 * a + 20.0 + 4.0 * shift * shift;
        const int poisson = static_cast<int>(coherent_amplitudes(m.alpha, tail).dim);
        dims.push_back(std::max(poisson, static_cast<int>(std::ceil(floor_d))));
    }
    return dims;
}

// ------------------------------ state vectors ---------------------------------

struct FullStateVector {
    Eigen::VectorXcd amplitudes;
    TruncatedSpace space;
    double tail_budget{0.0};  // accumulated coherent-state truncation tails
};

// |psi_S> (x) |alpha_1> ... |alpha_N>, truncated per space.dims().
inline FullStateVector coherent_product_state(const DimerInitialState& state,
                                              const DiscreteModeSet& ms,
                                              const TruncatedSpace& space) {
    if (ms.size() != space.dims().size()) {
        throw DimensionMismatch("coherent_product_state: mode/space size mismatch");
    }
    std::vector<std::vector<cdouble>> tables;
    double tail = 0.0;
    for (std::size_t j = 0; j < ms.size(); ++j) {
        tables.push_back(coherent_amplitude_table(ms.modes[j].alpha,
                                                  static_cast<std::size_t>(space.dims()[j])));
        tail += detail::poisson_tail(std::norm(ms.modes[j].alpha),
                                     static_cast<std::size_t>(space.dims()[j]));
    }
    Eigen::VectorXcd psi(space.total());
    std::vector<int> ns;
    int dimer = 0;
    for (std::size_t idx = 0; idx < space.total(); ++idx) {
        space.unflatten(idx, dimer, ns);
        cdouble amp = dimer == 0 ? state.a() : state.b();
        for (std::size_t j = 0; j < ns.size(); ++j) {
            amp *= tables[j][static_cast<std::size_t>(ns[j])];
        }
        psi(static_cast<Eigen::Index>(idx)) = amp;
    }
    return FullStateVector{std::move(psi), space, tail};
}

// ----------------------------- Hamiltonian build -------------------------------

// H_X = (Omega/2) sigma_z + sum_j w_j n_j + lambda sigma_z (x) sum_j (g_j a_j^+ + conj(g_j) a_j),
// with a^+ truncated (top row dropped).
inline Eigen::MatrixXcd build_hamiltonian_x(const DiscreteModeSet& ms,
                                            const TruncatedSpace& space) {
    const std::size_t D = space.total();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(D),
                                                static_cast<Eigen::Index>(D));
    std::vector<int> ns;
    int dimer = 0;
    for (std::size_t idx = 0; idx < D; ++idx) {
        space.unflatten(idx, dimer, ns);
        const double sz = dimer == 0 ? 1.0 : -1.0;
        double diag = 0.5 * ms.Omega * sz;
        for (std::size_t j = 0; j < ns.size(); ++j) {
            diag += ms.modes[j].omega * ns[j];
        }
        H(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) = diag;
        for (std::size_t j = 0; j < ns.size(); ++j) {
            if (ns[j] + 1 < space.dims()[j]) {  // a^+ : n -> n+1
                std::vector<int> up = ns;
                ++up[j];
                const std::size_t tgt = space.flatten(dimer, up);
                const cdouble amp =
                    ms.lambda * sz * ms.modes[j].g * std::sqrt(static_cast<double>(ns[j] + 1));
                H(static_cast<Eigen::Index>(tgt), static_cast<Eigen::Index>(idx)) += amp;
                H(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(tgt)) +=
                    std::conj(amp);
            }
        }
    }
    return H;
}

// H_D = (Omega/2) sigma_z + (V/2) sigma_x + sum_j w_j n_j
//       + lambda sigma_z (x) sum_j g_j n_j + mu sigma_x (x) sum_j f_j n_j.
inline Eigen::MatrixXcd build_hamiltonian_d(const DiscreteModeSet& ms,
                                            const TruncatedSpace& space) {
    const std::size_t D = space.total();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(D),
                                                static_cast<Eigen::Index>(D));
    std::vector<int> ns;
    int dimer = 0;
    for (std::size_t idx = 0; idx < D; ++idx) {
        space.unflatten(idx, dimer, ns);
        const double sz = dimer == 0 ? 1.0 : -1.0;
        double nsum_g = 0.0, nsum_f = 0.0, nsum_w = 0.0;
        for (std::size_t j = 0; j < ns.size(); ++j) {
            nsum_w += ms.modes[j].omega * ns[j];
            nsum_g += ms.modes[j].g.real() * ns[j];
            nsum_f += ms.modes[j].f * ns[j];
        }
        H(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)) =
            0.5 * ms.Omega * sz + nsum_w + ms.lambda * sz * nsum_g;
        const std::size_t flip = space.flatten(1 - dimer, ns);
        H(static_cast<Eigen::Index>(flip), static_cast<Eigen::Index>(idx)) +=
            0.5 * ms.V + ms.mu * nsum_f;
    }
    return H;
}

// ------------------------------ eigendecomposition -----------------------------

struct HermitianEigensystem {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXcd eigenvectors;  // columns
};

// LAPACK zheevd; the dense factorization is reused across all evolution times.
inline HermitianEigensystem hermitian_eigensystem(Eigen::MatrixXcd H) {
    const auto n = static_cast<lapack_int>(H.rows());
    if (H.rows() != H.cols()) {
        throw DimensionMismatch("hermitian_eigensystem: matrix must be square");
    }
    HermitianEigensystem out;
    out.eigenvalues.resize(n);
    const lapack_int info =
        LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, H.data(), n, out.eigenvalues.data());
    if (info != 0) {
        throw EigenFailure("hermitian_eigensystem: zheevd failed with info " +
                           std::to_string(info));
    }
    out.eigenvectors = std::move(H);
    return out;
}

class Propagator {
  public:
    static Propagator diagonalize(const Eigen::MatrixXcd& H) {
        if (hermiticity_defect(H) > 1e-12 * std::max(1.0, H.cwiseAbs().maxCoeff())) {
            throw DomainError("Propagator: Hamiltonian is not Hermitian");
        }
        return Propagator(hermitian_eigensystem(H));
    }

    FullStateVector evolve(const FullStateVector& psi0, double t) const {
        const Eigen::VectorXcd coeffs = eig_.eigenvectors.adjoint() * psi0.amplitudes;
        Eigen::VectorXcd phased(coeffs.size());
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
            phased(i) = coeffs(i) * std::exp(cdouble(0.0, -eig_.eigenvalues(i) * t));
        }
        FullStateVector out{eig_.eigenvectors * phased, psi0.space, psi0.tail_budget};
        return out;
    }

    const HermitianEigensystem& eigensystem() const { return eig_; }

  private:
    explicit Propagator(HermitianEigensystem eig) : eig_(std::move(eig)) {}
    HermitianEigensystem eig_;
};

// One-shot e^{-i t H} psi0 (prefer Propagator when sweeping t).
inline FullStateVector evolve(const Eigen::MatrixXcd& H, const FullStateVector& psi0,
                              double t) {
    return Propagator::diagonalize(H).evolve(psi0, t);
}

// ------------------------------ partial traces ---------------------------------

// Trace over all oscillators.
inline QubitDensityMatrix reduce_dimer(const FullStateVector& psi) {
    const auto osc = static_cast<Eigen::Index>(psi.space.oscillator_total());
    Eigen::Map<const Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        M(psi.amplitudes.data(), 2, osc);
    Eigen::Matrix2cd rho = M * M.adjoint();
    rho = 0.5 * (rho + rho.adjoint().eval());  // kill roundoff asymmetry
    return QubitDensityMatrix::from(rho);
}

// Trace over the dimer and all oscillators with frequencies outside J; keeps
// the J-oscillators in their product number basis. J = empty gives the scalar 1.
inline Eigen::MatrixXcd reduce_window(const FullStateVector& psi, const FrequencyWindow& J,
                                      const DiscreteModeSet& ms) {
    const auto& dims = psi.space.dims();
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < dims.size(); ++j) {
        if (J.contains(ms.modes[j].omega)) keep.push_back(j);
    }
    std::size_t dk = 1;
    for (std::size_t j : keep) dk *= static_cast<std::size_t>(dims[j]);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk),
                                                  static_cast<Eigen::Index>(dk));
    // group amplitudes by kept-mode multi-index
    Eigen::MatrixXcd M(psi.space.total() / dk, dk);
    std::vector<int> ns;
    int dimer = 0;
    std::vector<std::size_t> col_of(psi.space.total());
    for (std::size_t idx = 0; idx < psi.space.total(); ++idx) {
        psi.space.unflatten(idx, dimer, ns);
        std::size_t col = 0;
        for (std::size_t j : keep) {
            col = col * static_cast<std::size_t>(dims[j]) + static_cast<std::size_t>(ns[j]);
        }
        col_of[idx] = col;
    }
    // rows enumerate (dimer, non-kept modes) in first-seen order per column;
    // the ordering is identical across columns because the codec is a product
    std::vector<std::size_t> next_row(dk, 0);
    for (std::size_t idx = 0; idx < psi.space.total(); ++idx) {
        const std::size_t col = col_of[idx];
        M(static_cast<Eigen::Index>(next_row[col]++), static_cast<Eigen::Index>(col)) =
            psi.amplitudes(static_cast<Eigen::Index>(idx));
    }
    rho = (M.adjoint() * M).conjugate();
    rho = 0.5 * (rho + rho.adjoint().eval());
    return rho;
}

// --------------------------- spectra and residuals -----------------------------

// Eigenvalues >= threshold in descending order; the entropy uses the full
// clipped spectrum so it is not biased by the reporting threshold.
inline EntanglementSpectrum oracle_entanglement_spectrum(const Eigen::MatrixXcd& rho,
                                                         double threshold = 1e-12) {
    if (rho.rows() != rho.cols()) {
        throw DimensionMismatch("oracle_entanglement_spectrum: matrix must be square");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    if (es.info() != Eigen::Success) {
        throw EigenFailure("oracle_entanglement_spectrum: eigensolver failed");
    }
    EntanglementSpectrum out;
    for (Eigen::Index i = es.eigenvalues().size(); i-- > 0;) {
        double x = es.eigenvalues()(i);
        if (x < 0.0) {
            if (x < -1e-10) {
                throw DomainError("oracle_entanglement_spectrum: eigenvalue below -1e-10");
            }
            x = 0.0;
        }
        out.entropy += entropy_term(x);
        if (x >= threshold) out.eigenvalues.push_back(x);
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<double>());
    return out;
}

struct ResidualReport {
    double trace_distance{0.0};     // (1/2) ||analytic - oracle||_1
    double spectrum_distance{0.0};  // max gap between sorted eigenvalues
};

inline ResidualReport residual_report(const Eigen::MatrixXcd& analytic,
                                      const Eigen::MatrixXcd& oracle) {
    if (analytic.rows() != oracle.rows() || analytic.cols() != oracle.cols()) {
        throw DimensionMismatch("residual_report: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> diff(analytic - oracle,
                                                         Eigen::EigenvaluesOnly);
    ResidualReport rep;
    rep.trace_distance = 0.5 * diff.eigenvalues().cwiseAbs().sum();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(analytic, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eo(oracle, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < ea.eigenvalues().size(); ++i) {
        rep.spectrum_distance = std::max(
            rep.spectrum_distance, std::abs(ea.eigenvalues()(i) - eo.eigenvalues()(i)));
    }
    return rep;
}

}  // namespace dephase
