#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dephase/core.hpp"

#include <random>

using namespace dephase;

TEST_CASE("make_dimer_state basic examples") {
    auto s1 = make_dimer_state(1.0, 0.0);
    CHECK(s1.population() == doctest::Approx(1.0));
    CHECK(std::abs(s1.coherence()) == doctest::Approx(0.0));

    const double r = 1.0 / std::sqrt(2.0);
    auto s2 = make_dimer_state(r, r);
    CHECK(s2.population() == doctest::Approx(0.5));
    CHECK(s2.coherence().real() == doctest::Approx(0.5));

    auto s3 = make_dimer_state(std::sqrt(0.3), std::sqrt(0.7));
    CHECK(s3.population() == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(s3.coherence().real() == doctest::Approx(std::sqrt(0.21)).epsilon(1e-12));
}

TEST_CASE("make_dimer_state errors and renormalization") {
    CHECK_THROWS_AS(make_dimer_state(0.0, 0.0), ZeroVector);
    CHECK_THROWS_AS(make_dimer_state(1.0, 0.5), NotNormalized);
    // tiny norm defect inside tolerance is renormalized exactly
    auto s = make_dimer_state(1.0 + 2e-10, 0.0);
    CHECK(std::norm(s.a()) + std::norm(s.b()) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("mode set validation") {
    CHECK_THROWS_AS(make_mode_set({}, 1.0, 0.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(make_mode_set({Mode{-1.0, 1.0, 0.0, 0.0}}, 1.0, 0.0, 1.0, 0.0),
                    DomainError);
    auto ms = make_mode_set({Mode{1.0, cdouble(0.0, 1.0), 0.0, 0.0}}, 1.0, 0.0, 1.0, 0.0);
    CHECK_THROWS_AS(check_d_model(ms), DomainError);  // complex g is X-only
}

TEST_CASE("window membership examples") {
    auto ms = make_mode_set({Mode{0.5, 1.0, 0.0, 0.0}, Mode{1.5, 1.0, 0.0, 0.0},
                             Mode{2.5, 1.0, 0.0, 0.0}},
                            1.0, 0.0, 1.0, 0.0);
    CHECK(window_mode_indices(ms, make_window(1.0, 2.0)) == std::vector<std::size_t>{1});
    CHECK(window_mode_indices(ms, FrequencyWindow::all()) ==
          std::vector<std::size_t>{0, 1, 2});
    CHECK(window_mode_indices(ms, make_window(3.0, 4.0)).empty());
    CHECK(window_mode_indices(ms, FrequencyWindow{}).empty());
}

TEST_CASE("window union property over disjoint windows") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uw(0.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Mode> modes;
        const int n = 1 + static_cast<int>(rng() % 6);
        for (int j = 0; j < n; ++j) modes.push_back({uw(rng) + 1e-3, 1.0, 0.0, 0.0});
        auto ms = make_mode_set(std::move(modes), 1.0, 0.0, 1.0, 0.0);
        const double a = uw(rng), b = a + uw(rng) + 1e-3;
        const double c = b + uw(rng), d = c + uw(rng) + 1e-3;
        const auto j1 = make_window(a, b);
        const auto j2 = make_window(c, d);
        const FrequencyWindow ju({{a, b}, {c, d}});
        auto u = window_mode_indices(ms, j1);
        for (auto i : window_mode_indices(ms, j2)) u.push_back(i);
        std::sort(u.begin(), u.end());
        CHECK(window_mode_indices(ms, ju) == u);
    }
}

TEST_CASE("window construction rejects overlap") {
    CHECK_THROWS_AS(FrequencyWindow({{0.0, 2.0}, {1.0, 3.0}}), DomainError);
    CHECK_THROWS_AS(make_window(2.0, 1.0), DomainError);
    CHECK_THROWS_AS(make_window(-1.0, 1.0), DomainError);
}

TEST_CASE("half-open interval membership") {
    auto w = make_window(1.0, 2.0);
    CHECK(w.contains(1.0));
    CHECK_FALSE(w.contains(2.0));
}

TEST_CASE("qubit density matrix validation") {
    Eigen::Matrix2cd ok;
    ok << 0.5, cdouble(0.1, 0.2), cdouble(0.1, -0.2), 0.5;
    CHECK_NOTHROW(QubitDensityMatrix::from(ok));

    Eigen::Matrix2cd bad_tr = ok * 1.5;
    CHECK_THROWS_AS(QubitDensityMatrix::from(bad_tr), DomainError);

    Eigen::Matrix2cd bad_herm = ok;
    bad_herm(0, 1) = cdouble(0.1, 0.3);
    CHECK_THROWS_AS(QubitDensityMatrix::from(bad_herm), DomainError);

    Eigen::Matrix2cd bad_pos;
    bad_pos << 1.2, 0.0, 0.0, -0.2;
    CHECK_THROWS_AS(QubitDensityMatrix::from(bad_pos), DomainError);
}

TEST_CASE("reservoir reduced state validation") {
    Eigen::MatrixXcd m(2, 2);
    m << 0.7, 0.1, 0.1, 0.3;
    auto r = ReservoirReducedState::from(m, "gs");
    CHECK(r.basis_note() == "gs");
    m(1, 1) = 0.2;
    CHECK_THROWS_AS(ReservoirReducedState::from(m, "gs"), DomainError);
    // relaxed trace tolerance for the perturbed case
    CHECK_NOTHROW(ReservoirReducedState::from(m, "gs", 0.2));
}

TEST_CASE("entanglement spectrum clamps roundoff negatives only") {
    auto s = make_entanglement_spectrum({1.0 + 2e-11, -2e-11});
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(s.eigenvalues[1] == 0.0);
    CHECK(s.entropy == doctest::Approx(0.0));
    CHECK_THROWS_AS(make_entanglement_spectrum({1.0 + 1e-3, -1e-3}), DomainError);
}

TEST_CASE("entropy convention 0 ln 0 = 0") {
    CHECK(entropy_term(0.0) == 0.0);
    CHECK(entropy_term(1.0) == 0.0);
    CHECK(entropy_term(0.5) == doctest::Approx(0.5 * std::log(2.0)));
}

TEST_CASE("spectral density evaluators") {
    SpectralModel plc{PowerLawCutoff{2.0, 1.0, 1.5}, {}, {}};
    CHECK(spectral_value(plc, 0.0) == 0.0);
    CHECK(spectral_value(plc, 1.0) == doctest::Approx(2.0 * std::exp(-1.0 / 1.5)));

    SpectralModel hv{HeavisideWindow{3.0, 0.5, 1.5}, {}, {}};
    CHECK(spectral_value(hv, 0.4) == 0.0);
    CHECK(spectral_value(hv, 0.5) == 3.0);
    CHECK(spectral_value(hv, 1.5) == 0.0);  // half-open

    SpectralModel tab{Tabulated{{0.0, 1.0, 2.0}, {0.0, 2.0, 0.0}}, {}, {}};
    CHECK(spectral_value(tab, 0.5) == doctest::Approx(1.0));
    CHECK(spectral_value(tab, 3.0) == 0.0);
}

TEST_CASE("power-law support bound covers the density") {
    PowerLawCutoff p{1.0, 1.0, 2.0};
    const double up = spectral_support_upper(SpectralDensity{p});
    const double peak = 4.0 * 2.0;
    const double hpeak = spectral_density_value(SpectralDensity{p}, peak);
    CHECK(spectral_density_value(SpectralDensity{p}, up) <= 1e-13 * hpeak);
}
