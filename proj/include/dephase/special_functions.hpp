// special_functions.hpp — Self-contained special-function kernel: Gamma,
// complex lower incomplete gamma, sine integral, coherent-state amplitudes.
// Each function carries a dual-regime implementation with documented switch
// points; no external special-function dependency.

#pragma once

#include "dephase/core.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace dephase {

// ------------------------------- Gamma ---------------------------------------

// Gamma(u) for u > 0, Lanczos approximation (g = 7, 9 terms), ~1e-14 relative.
inline double gamma_fn(double u) {
    if (!(u > 0.0)) throw DomainError("gamma_fn: requires u > 0");
    static constexpr std::array<double, 9> coeff = {
        0.99999999999980993,  676.5203681218851,   -1259.1392167224028,
        771.32342877765313,   -176.61502916214059, 12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (u < 0.5) {
        // reflection keeps the series argument >= 0.5
        return kPi / (std::sin(kPi * u) * gamma_fn(1.0 - u));
    }
    const double x = u - 1.0;
    double a = coeff[0];
    const double t = x + 7.5;
    for (std::size_t i = 1; i < coeff.size(); ++i) a += coeff[i] / (x + static_cast<double>(i));
    return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

// ---------------------- complex lower incomplete gamma -----------------------

namespace detail {

// gamma(a,z) = z^a e^{-z} sum_n z^n / (a (a+1) ... (a+n)); good for |z| < 8.
inline cdouble lower_gamma_series(double a, cdouble z) {
    cdouble term = 1.0 / a;
    cdouble sum = term;
    for (int n = 1; n <= 400; ++n) {
        term *= z / (a + static_cast<double>(n));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) {
            return std::pow(z, a) * std::exp(-z) * sum;
        }
    }
    throw ConvergenceFailure("lower_incomplete_gamma: series did not converge");
}

// Gamma(a,z) by modified Lentz continued fraction; reliable for |z| >= ~4,
// |arg z| < pi.
inline cdouble upper_gamma_cf(double a, cdouble z) {
    constexpr double tiny = 1e-300;
    cdouble b = z + 1.0 - a;
    cdouble c = 1.0 / tiny;
    cdouble d = (std::abs(b) > tiny) ? 1.0 / b : cdouble(1.0 / tiny);
    cdouble h = d;
    for (int i = 1; i <= 20000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const cdouble delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) {
            return std::exp(-z) * std::pow(z, a) * h;
        }
    }
    throw ConvergenceFailure("lower_incomplete_gamma: continued fraction did not converge");
}

}  // namespace detail

// gamma(a, z) = int_0^z e^{-v} v^{a-1} dv, principal branch, a > 0,
// |arg z| < pi. Series for |z| < 8, Gamma(a) - Gamma(a,z) via continued
// fraction for |z| >= 8 (switch point chosen where both branches agree to
// better than 1e-13 in double precision).
inline cdouble lower_incomplete_gamma(double a, cdouble z) {
    if (!(a > 0.0)) throw DomainError("lower_incomplete_gamma: requires a > 0");
    if (z == cdouble(0.0)) return 0.0;
    if (z.real() < 0.0 && z.imag() == 0.0) {
        throw DomainError("lower_incomplete_gamma: negative real axis not supported");
    }
    if (std::abs(z) < 8.0) {
        return detail::lower_gamma_series(a, z);
    }
    return gamma_fn(a) - detail::upper_gamma_cf(a, z);
}

// ----------------------------- sine integral ----------------------------------

namespace detail {

// Taylor: sum (-1)^n x^{2n+1} / ((2n+1)(2n+1)!), for |x| <= 4.
inline double si_taylor(double x) {
    const double xx = x * x;
    double term = x;
    double sum = 0.0;
    for (int n = 0; n < 60; ++n) {
        sum += term / (2.0 * n + 1.0);
        term *= -xx / ((2.0 * n + 2.0) * (2.0 * n + 3.0));
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

// E1(z) by modified Lentz continued fraction, |z| > ~2.
inline cdouble e1_cf(cdouble z) {
    constexpr double tiny = 1e-300;
    cdouble b = z + 1.0;
    cdouble c = 1.0 / tiny;
    cdouble d = 1.0 / b;
    cdouble h = d;
    for (int i = 1; i <= 200000; ++i) {
        const double an = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const cdouble delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) return std::exp(-z) * h;
    }
    throw ConvergenceFailure("sine_integral: continued fraction did not converge");
}

}  // namespace detail

// Si(x) = int_0^x sin(u)/u du; odd; Si(inf) = pi/2. Taylor for |x| <= 4,
// E1(i|x|) continued fraction above (Si(x) = pi/2 + Im E1(ix)).
inline double sine_integral(double x) {
    const double ax = std::abs(x);
    double v;
    if (ax <= 4.0) {
        v = detail::si_taylor(ax);
    } else {
        v = kPi / 2.0 + detail::e1_cf(cdouble(0.0, ax)).imag();
    }
    return x < 0.0 ? -v : v;
}

// ------------------------- coherent-state amplitudes -------------------------

struct CoherentAmplitudes {
    cdouble alpha;
    std::size_t dim{1};
    std::vector<cdouble> amplitudes;  // c_n = e^{-|a|^2/2} a^n / sqrt(n!)
    double tail_bound{0.0};           // exact Poisson tail sum_{n>=dim}
};

namespace detail {

// P(N >= dim) for N ~ Poisson(mean), summed upward so small tails keep full
// precision. Multiplicative pmf recurrence; no factorials are formed.
inline double poisson_tail(double mean, std::size_t dim) {
    if (mean <= 0.0) return dim == 0 ? 1.0 : 0.0;
    // pmf(dim) = e^-m m^dim / dim!
    double logp = -mean + static_cast<double>(dim) * std::log(mean) -
                  std::lgamma(static_cast<double>(dim) + 1.0);
    double p = std::exp(logp);
    double tail = 0.0;
    for (std::size_t n = dim; n < dim + 100000; ++n) {
        tail += p;
        p *= mean / (static_cast<double>(n) + 1.0);
        if (p < 1e-30 * (tail + 1e-300)) break;
    }
    return tail;
}

}  // namespace detail

// Smallest truncation dim whose Poisson tail is <= target_tail, plus the
// amplitude table.
inline CoherentAmplitudes coherent_amplitudes(cdouble alpha, double target_tail) {
    if (!(target_tail > 0.0) || !(target_tail < 1.0)) {
        throw DomainError("coherent_amplitudes: target tail must be in (0,1)");
    }
    const double mean = std::norm(alpha);
    std::size_t dim = 1;
    while (detail::poisson_tail(mean, dim) > target_tail) {
        ++dim;
        if (dim > 100000) throw ConvergenceFailure("coherent_amplitudes: dim too large");
    }
    CoherentAmplitudes out;
    out.alpha = alpha;
    out.dim = dim;
    out.tail_bound = detail::poisson_tail(mean, dim);
    out.amplitudes.resize(dim);
    out.amplitudes[0] = std::exp(-mean / 2.0);
    for (std::size_t n = 1; n < dim; ++n) {
        out.amplitudes[n] = out.amplitudes[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    }
    return out;
}

// Amplitude table at a fixed dimension (for externally chosen truncations).
inline std::vector<cdouble> coherent_amplitude_table(cdouble alpha, std::size_t dim) {
    std::vector<cdouble> c(dim);
    const double mean = std::norm(alpha);
    c[0] = std::exp(-mean / 2.0);
    for (std::size_t n = 1; n < dim; ++n) {
        c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
    }
    return c;
}

}  // namespace dephase
