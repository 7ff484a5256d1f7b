// core.hpp — Domain types shared by every engine: initial states, mode sets,
// spectral models, frequency windows, density matrices, entanglement spectra.
// All types are immutable value objects after construction.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dephase {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// ------------------------------- errors -------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define DEPHASE_ERROR_TYPE(Name)                                              \
    struct Name : Error {                                                     \
        explicit Name(const std::string& msg) : Error(msg) {}                 \
    }

DEPHASE_ERROR_TYPE(ZeroVector);
DEPHASE_ERROR_TYPE(NotNormalized);
DEPHASE_ERROR_TYPE(DomainError);
DEPHASE_ERROR_TYPE(QuadratureFailure);
DEPHASE_ERROR_TYPE(UnsupportedExponent);
DEPHASE_ERROR_TYPE(SpecialFunctionFailure);
DEPHASE_ERROR_TYPE(ConvergenceFailure);
DEPHASE_ERROR_TYPE(NonInvertibleCoupling);
DEPHASE_ERROR_TYPE(SingularDenominator);
DEPHASE_ERROR_TYPE(RegimeError);
DEPHASE_ERROR_TYPE(DegenerateBasis);
DEPHASE_ERROR_TYPE(CapExceeded);
DEPHASE_ERROR_TYPE(EigenFailure);
DEPHASE_ERROR_TYPE(DimensionMismatch);
DEPHASE_ERROR_TYPE(ConfigError);
DEPHASE_ERROR_TYPE(IoError);

#undef DEPHASE_ERROR_TYPE

// --------------------------- dimer initial state ----------------------------

// Pure two-level state a|up> + b|down>; population p = |a|^2, initial
// coherence c0 = a * conj(b).
class DimerInitialState {
  public:
    DimerInitialState(cdouble a, cdouble b) : a_(a), b_(b) {}

    cdouble a() const { return a_; }
    cdouble b() const { return b_; }
    double population() const { return std::norm(a_); }
    cdouble coherence() const { return a_ * std::conj(b_); }

  private:
    cdouble a_;
    cdouble b_;
};

// Validates |a|^2+|b|^2 = 1 within 1e-9 and renormalizes exactly.
inline DimerInitialState make_dimer_state(cdouble a, cdouble b) {
    const double n2 = std::norm(a) + std::norm(b);
    if (n2 < 1e-12) {
        throw ZeroVector("make_dimer_state: amplitudes have vanishing norm");
    }
    if (std::abs(n2 - 1.0) > 1e-9) {
        throw NotNormalized("make_dimer_state: |a|^2+|b|^2 = " +
                            std::to_string(n2) + " differs from 1 beyond 1e-9");
    }
    const double n = std::sqrt(n2);
    return DimerInitialState(a / n, b / n);
}

// ------------------------------ mode sets ------------------------------------

struct Mode {
    double omega{1.0};   // frequency, > 0
    cdouble g{0.0};      // coupling (real > 0 for the D-model)
    double f{0.0};       // exchange coupling (D-model), >= 0
    cdouble alpha{0.0};  // coherent amplitude of the initial oscillator state
};

struct DiscreteModeSet {
    std::vector<Mode> modes;
    double lambda{0.0};  // coupling strength
    double mu{0.0};      // exchange coupling strength, >= 0
    double Omega{1.0};   // dimer frequency, > 0
    double V{0.0};       // tunneling, >= 0

    std::size_t size() const { return modes.size(); }

    double alpha_norm_sq_total() const {
        double s = 0.0;
        for (const auto& m : modes) s += std::norm(m.alpha);
        return s;
    }
};

inline DiscreteModeSet make_mode_set(std::vector<Mode> modes, double lambda,
                                     double mu, double Omega, double V) {
    if (modes.empty()) throw DomainError("make_mode_set: need at least one mode");
    for (const auto& m : modes) {
        if (!(m.omega > 0.0))
            throw DomainError("make_mode_set: mode frequencies must be positive");
        if (m.f < 0.0) throw DomainError("make_mode_set: f couplings must be >= 0");
    }
    if (!(Omega > 0.0)) throw DomainError("make_mode_set: Omega must be positive");
    if (mu < 0.0) throw DomainError("make_mode_set: mu must be >= 0");
    if (V < 0.0) throw DomainError("make_mode_set: V must be >= 0");
    if (!std::isfinite(lambda)) throw DomainError("make_mode_set: lambda not finite");
    DiscreteModeSet ms;
    ms.modes = std::move(modes);
    ms.lambda = lambda;
    ms.mu = mu;
    ms.Omega = Omega;
    ms.V = V;
    return ms;
}

// D-model restriction: real g_j > 0, f_j >= 0.
inline void check_d_model(const DiscreteModeSet& ms) {
    for (const auto& m : ms.modes) {
        if (m.g.imag() != 0.0 || !(m.g.real() > 0.0)) {
            throw DomainError("check_d_model: D-model requires real g_j > 0");
        }
    }
}

// --------------------------- frequency windows -------------------------------

// Disjoint union of half-open intervals [lo, hi), lo >= 0; hi may be +inf.
class FrequencyWindow {
  public:
    struct Interval {
        double lo;
        double hi;
    };

    FrequencyWindow() = default;  // empty window

    static FrequencyWindow all() {
        return FrequencyWindow({{0.0, std::numeric_limits<double>::infinity()}});
    }

    explicit FrequencyWindow(std::vector<Interval> intervals) {
        std::sort(intervals.begin(), intervals.end(),
                  [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            const auto& iv = intervals[i];
            if (!(iv.lo >= 0.0) || !(iv.hi > iv.lo)) {
                throw DomainError("FrequencyWindow: intervals must satisfy 0 <= lo < hi");
            }
            if (i > 0 && intervals[i - 1].hi > iv.lo) {
                throw DomainError("FrequencyWindow: intervals overlap");
            }
        }
        intervals_ = std::move(intervals);
    }

    const std::vector<Interval>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }

    bool contains(double omega) const {
        for (const auto& iv : intervals_) {
            if (omega >= iv.lo && omega < iv.hi) return true;
        }
        return false;
    }

  private:
    std::vector<Interval> intervals_;
};

inline FrequencyWindow make_window(double lo, double hi) {
    return FrequencyWindow({{lo, hi}});
}

// Indices j with omega_j in J, in input order.
inline std::vector<std::size_t> window_mode_indices(const DiscreteModeSet& modes,
                                                    const FrequencyWindow& J) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < modes.size(); ++j) {
        if (J.contains(modes.modes[j].omega)) idx.push_back(j);
    }
    return idx;
}

// ----------------------------- spectral models -------------------------------

// h(w) = amplitude * w^{2q+2} * exp(-w / cutoff)
struct PowerLawCutoff {
    double amplitude{1.0};
    double q{1.0};
    double cutoff{1.0};
};

// h(w) = height on [lo, hi), 0 elsewhere
struct HeavisideWindow {
    double height{1.0};
    double lo{0.0};
    double hi{1.0};
};

// Piecewise-linear samples; 0 outside the tabulated range.
struct Tabulated {
    std::vector<double> omega;  // strictly increasing
    std::vector<double> h;
};

using SpectralDensity = std::variant<PowerLawCutoff, HeavisideWindow, Tabulated>;

// Coupling law g(w) = offset + scale * w^power (covers g0*w^k and eps + w^delta).
struct CouplingLaw {
    double offset{0.0};
    double scale{1.0};
    double power{1.0};

    double operator()(double w) const {
        return offset + scale * std::pow(w, power);
    }
    double derivative(double w) const {
        return scale * power * std::pow(w, power - 1.0);
    }
    // Inverse on [0, inf); requires scale > 0, power > 0.
    double inverse(double y) const {
        return std::pow((y - offset) / scale, 1.0 / power);
    }
};

struct SpectralModel {
    SpectralDensity density;
    CouplingLaw g_coupling{};            // D-model g(w)
    CouplingLaw f_coupling{0.0, 0.0, 0.0};  // D-model f(w); zero by default
};

inline double spectral_density_value(const SpectralDensity& d, double w) {
    if (w < 0.0) return 0.0;
    return std::visit(
        [w](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PowerLawCutoff>) {
                const double e = 2.0 * m.q + 2.0;
                if (w == 0.0) return e == 0.0 ? m.amplitude : (e > 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
                return m.amplitude * std::pow(w, e) * std::exp(-w / m.cutoff);
            } else if constexpr (std::is_same_v<T, HeavisideWindow>) {
                return (w >= m.lo && w < m.hi) ? m.height : 0.0;
            } else {
                if (m.omega.empty() || w < m.omega.front() || w > m.omega.back()) return 0.0;
                auto it = std::upper_bound(m.omega.begin(), m.omega.end(), w);
                if (it == m.omega.begin()) return m.h.front();
                if (it == m.omega.end()) return m.h.back();
                const std::size_t i = static_cast<std::size_t>(it - m.omega.begin());
                const double t = (w - m.omega[i - 1]) / (m.omega[i] - m.omega[i - 1]);
                return m.h[i - 1] + t * (m.h[i] - m.h[i - 1]);
            }
        },
        d);
}

inline double spectral_value(const SpectralModel& m, double w) {
    return spectral_density_value(m.density, w);
}

// Frequency beyond which the density is negligible (
// < 1e-14 of its maximum); used to truncate semi-infinite integrals.
inline double spectral_support_upper(const SpectralDensity& d) {
    return std::visit(
        [](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PowerLawCutoff>) {
                const double e = std::max(0.0, 2.0 * m.q + 2.0);
                // peak of w^e exp(-w/wc) is at w = e*wc; walk out until 1e-14 falloff
                const double wpeak = std::max(e * m.cutoff, m.cutoff * 1e-8);
                const double hpeak = m.amplitude * std::pow(wpeak, 2.0 * m.q + 2.0) *
                                     std::exp(-wpeak / m.cutoff);
                double w = wpeak + 40.0 * m.cutoff;
                while (m.amplitude * std::pow(w, 2.0 * m.q + 2.0) * std::exp(-w / m.cutoff) >
                       1e-14 * hpeak) {
                    w += 10.0 * m.cutoff;
                }
                return w;
            } else if constexpr (std::is_same_v<T, HeavisideWindow>) {
                return m.hi;
            } else {
                return m.omega.empty() ? 0.0 : m.omega.back();
            }
        },
        d);
}

// ------------------------- density matrix wrappers ---------------------------

inline double hermiticity_defect(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// 2x2 Hermitian, unit-trace, positive semidefinite (within tolerances).
class QubitDensityMatrix {
  public:
    static QubitDensityMatrix from(const Eigen::Matrix2cd& m) {
        if (hermiticity_defect(m) > 1e-12) {
            throw DomainError("QubitDensityMatrix: not Hermitian within 1e-12");
        }
        if (std::abs(m.trace().real() - 1.0) > 1e-10 || std::abs(m.trace().imag()) > 1e-10) {
            throw DomainError("QubitDensityMatrix: trace differs from 1 beyond 1e-10");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10) {
            throw DomainError("QubitDensityMatrix: negative eigenvalue beyond -1e-10");
        }
        return QubitDensityMatrix(m);
    }

    const Eigen::Matrix2cd& matrix() const { return m_; }
    cdouble off_diagonal() const { return m_(0, 1); }
    double population() const { return m_(0, 0).real(); }

  private:
    explicit QubitDensityMatrix(const Eigen::Matrix2cd& m) : m_(m) {}
    Eigen::Matrix2cd m_;
};

// Reduced reservoir state in a Gram-Schmidt basis (2x2 exact, 3x3 perturbed).
class ReservoirReducedState {
  public:
    static ReservoirReducedState from(const Eigen::MatrixXcd& m, std::string basis_note,
                                      double trace_tol = 1e-10) {
        if (m.rows() != m.cols()) {
            throw DimensionMismatch("ReservoirReducedState: matrix must be square");
        }
        if (hermiticity_defect(m) > 1e-12) {
            throw DomainError("ReservoirReducedState: not Hermitian within 1e-12");
        }
        if (std::abs(m.trace().real() - 1.0) > trace_tol) {
            throw DomainError("ReservoirReducedState: trace differs from 1 beyond tolerance");
        }
        return ReservoirReducedState(m, std::move(basis_note));
    }

    const Eigen::MatrixXcd& matrix() const { return m_; }
    const std::string& basis_note() const { return basis_note_; }

  private:
    ReservoirReducedState(Eigen::MatrixXcd m, std::string note)
        : m_(std::move(m)), basis_note_(std::move(note)) {}
    Eigen::MatrixXcd m_;
    std::string basis_note_;
};

// --------------------------- entanglement spectra ----------------------------

// 0*ln 0 = 0 convention.
inline double entropy_term(double x) {
    return x > 0.0 ? -x * std::log(x) : 0.0;
}

struct EntanglementSpectrum {
    std::vector<double> eigenvalues;  // descending, in [0,1]
    double entropy{0.0};              // nats
};

// Clamps eigenvalues in [-1e-10, 0) to 0; larger negatives are an error.
inline EntanglementSpectrum make_entanglement_spectrum(std::vector<double> eigenvalues) {
    double s = 0.0;
    for (double& x : eigenvalues) {
        if (x < 0.0) {
            if (x < -1e-10) {
                throw DomainError("make_entanglement_spectrum: eigenvalue " +
                                  std::to_string(x) + " below -1e-10");
            }
            x = 0.0;
        }
        if (x > 1.0 + 1e-10) {
            throw DomainError("make_entanglement_spectrum: eigenvalue above 1");
        }
        x = std::min(x, 1.0);
        s += x;
    }
    std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<double>());
    if (!eigenvalues.empty() && std::abs(s - 1.0) > 1e-9) {
        throw DomainError("make_entanglement_spectrum: eigenvalues sum to " +
                          std::to_string(s) + ", not 1");
    }
    EntanglementSpectrum out;
    out.eigenvalues = std::move(eigenvalues);
    for (double x : out.eigenvalues) out.entropy += entropy_term(x);
    return out;
}

}  // namespace dephase
