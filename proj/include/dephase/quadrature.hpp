// quadrature.hpp — Adaptive Gauss-Kronrod (7/15) panel integration with
// phase-aware pre-subdivision for smooth-times-oscillatory integrands.
// Works for real and complex integrands. Semi-infinite tails are handled by
// the caller truncating where the envelope falls below 1e-14 of its maximum
// (see spectral_support_upper).

#pragma once

#include "dephase/core.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <type_traits>
#include <vector>

namespace dephase {

struct QuadratureOptions {
    double abs_tol{1e-10};
    double rel_tol{1e-10};
    int max_depth{48};
    std::size_t max_panels{4000000};
};

namespace detail {

// 15-point Kronrod abscissae/weights with embedded 7-point Gauss (QUADPACK dqk15).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct GkResult {
    T value{};
    double error{};
};

template <typename F, typename T = std::invoke_result_t<F, double>>
GkResult<T> gauss_kronrod_15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T resg = kWg[3] * fc;
    T resk = kWgk[7] * fc;
    for (int j = 0; j < 3; ++j) {
        const double x = h * kXgk[2 * j + 1];
        const T f1 = f(c - x);
        const T f2 = f(c + x);
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[2 * j + 1] * (f1 + f2);
    }
    for (int j = 0; j < 4; ++j) {
        const double x = h * kXgk[2 * j];
        resk += kWgk[2 * j] * (f(c - x) + f(c + x));
    }
    GkResult<T> out;
    out.value = resk * h;
    out.error = std::abs(resk - resg) * std::abs(h);
    return out;
}

}  // namespace detail

// Adaptive integral of f over [a, b].
template <typename F, typename T = std::invoke_result_t<F, double>>
T integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
    if (a == b) return T{};
    struct Panel {
        double a, b;
        int depth;
    };
    std::vector<Panel> stack{{a, b, 0}};
    T total{};
    double err_total = 0.0;
    std::size_t panels = 0;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        if (++panels > opts.max_panels) {
            throw QuadratureFailure("integrate: panel budget exhausted");
        }
        const auto r = detail::gauss_kronrod_15(f, p.a, p.b);
        const double scale = std::max(opts.abs_tol, opts.rel_tol * std::abs(r.value));
        // local budget proportional to panel width
        const double budget = scale * std::max(1e-3, (p.b - p.a) / (b - a));
        if (r.error <= budget || p.depth >= opts.max_depth) {
            if (p.depth >= opts.max_depth && r.error > 1e3 * scale) {
                throw QuadratureFailure("integrate: refinement stalled at depth limit");
            }
            total += r.value;
            err_total += r.error;
        } else {
            const double m = 0.5 * (p.a + p.b);
            stack.push_back({p.a, m, p.depth + 1});
            stack.push_back({m, p.b, p.depth + 1});
        }
    }
    (void)err_total;
    return total;
}

// Adaptive integral of f over [a, b] where f oscillates with monotone phase
// phi; the interval is pre-split so each panel spans at most pi/4 of phase.
template <typename F, typename Phase, typename T = std::invoke_result_t<F, double>>
T integrate_oscillatory(F&& f, double a, double b, Phase&& phi,
                        const QuadratureOptions& opts = {}) {
    if (a == b) return T{};
    constexpr double kMaxPhasePerPanel = kPi / 4.0;
    std::vector<double> cuts{a, b};
    // recursive phase bisection; phi monotone makes this terminate
    std::vector<std::pair<double, double>> work{{a, b}};
    std::size_t guard = 0;
    while (!work.empty()) {
        auto [lo, hi] = work.back();
        work.pop_back();
        if (++guard > opts.max_panels) {
            throw QuadratureFailure("integrate_oscillatory: phase split budget exhausted");
        }
        if (std::abs(phi(hi) - phi(lo)) > kMaxPhasePerPanel && (hi - lo) > 1e-14 * (b - a)) {
            const double m = 0.5 * (lo + hi);
            cuts.push_back(m);
            work.push_back({lo, m});
            work.push_back({m, hi});
        }
    }
    std::sort(cuts.begin(), cuts.end());
    T total{};
    QuadratureOptions panel_opts = opts;
    panel_opts.abs_tol = opts.abs_tol / static_cast<double>(cuts.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        total += integrate(f, cuts[i], cuts[i + 1], panel_opts);
    }
    return total;
}

// (1 - cos x) / x^2 with the removable singularity handled by series for
// |x| < 1e-4 (catastrophic cancellation otherwise).
inline double one_minus_cos_over_x_sq(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 0.5 - x2 / 24.0 + x2 * x2 / 720.0;
    }
    return (1.0 - std::cos(x)) / (x * x);
}

}  // namespace dephase
