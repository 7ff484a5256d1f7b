#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dephase/special_functions.hpp"
#include "support/reference.hpp"

#include <random>

using namespace dephase;

TEST_CASE("gamma_fn known values") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gamma_fn(3.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
    CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
    CHECK_THROWS_AS(gamma_fn(-1.5), DomainError);
}

TEST_CASE("gamma_fn against quadrature of the defining integral") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ua(0.6, 6.0);
    for (int i = 0; i < 12; ++i) {
        const double u = ua(rng);
        auto f = [u](double z) { return std::exp(-z) * std::pow(z, u - 1.0); };
        const double ref = refq::simpson(f, 1e-12, 80.0, 1e-13, 60);
        CHECK(gamma_fn(u) == doctest::Approx(ref).epsilon(1e-11));
    }
}

TEST_CASE("lower incomplete gamma closed forms") {
    // gamma(1, z) = 1 - e^{-z}
    for (cdouble z : {cdouble(0.5, 0.0), cdouble(0.0, 2.0), cdouble(1.0, 12.0)}) {
        const cdouble got = lower_incomplete_gamma(1.0, z);
        const cdouble want = 1.0 - std::exp(-z);
        CHECK(std::abs(got - want) <= 1e-12);
    }
    CHECK(lower_incomplete_gamma(2.5, 0.0) == cdouble(0.0));
}

TEST_CASE("lower incomplete gamma recurrence") {
    // gamma(a+1, z) = a gamma(a, z) - z^a e^{-z}
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> ua(0.3, 3.0);
    std::uniform_real_distribution<double> ux(0.2, 60.0);
    for (int i = 0; i < 25; ++i) {
        const double a = ua(rng);
        const cdouble z(0.0, ux(rng));
        const cdouble lhs = lower_incomplete_gamma(a + 1.0, z);
        const cdouble rhs = a * lower_incomplete_gamma(a, z) - std::pow(z, a) * std::exp(-z);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("gamma(1/2, 2i) against path quadrature") {
    const cdouble got = lower_incomplete_gamma(0.5, cdouble(0.0, 2.0));
    const cdouble ref = refq::incomplete_gamma_path(0.5, cdouble(0.0, 2.0));
    CHECK(std::abs(got - ref) <= 1e-10);
    // frozen: 2.3328174076197579 + 0.33756998496891532 i
    CHECK(got.real() == doctest::Approx(2.3328174076197579).epsilon(1e-12));
    CHECK(got.imag() == doctest::Approx(0.33756998496891532).epsilon(1e-12));
}

TEST_CASE("incomplete gamma branch seam agrees across the switch point") {
    // |z| = 8 is the series/continued-fraction switch; both must agree nearby
    for (double a : {1.0 / 3.0, 0.5, 1.0, 2.0}) {
        for (double x : {7.0, 7.9, 8.0, 8.1, 9.0}) {
            const cdouble via_lib = lower_incomplete_gamma(a, cdouble(0.0, x));
            const cdouble ref = refq::incomplete_gamma_path(a, cdouble(0.0, x));
            CHECK(std::abs(via_lib - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("gamma(a, x) increases to Gamma(a) on the real axis") {
    const double a = 1.7;
    double prev = 0.0;
    for (double x : {0.5, 1.0, 2.0, 4.0, 9.0, 20.0, 40.0}) {
        const double v = lower_incomplete_gamma(a, cdouble(x, 0.0)).real();
        CHECK(v > prev);
        prev = v;
    }
    CHECK(prev == doctest::Approx(gamma_fn(a)).epsilon(1e-10));
}

TEST_CASE("sine integral values and symmetry") {
    CHECK(sine_integral(0.0) == 0.0);
    for (double x : {0.3, 1.0, 3.9, 4.1, 7.7, 42.0}) {
        CHECK(sine_integral(-x) == doctest::Approx(-sine_integral(x)).epsilon(1e-15));
    }
    // Si(100) frozen and near pi/2; the 3-term asymptote matches to 1e-5
    const double s100 = sine_integral(100.0);
    CHECK(s100 == doctest::Approx(1.5622254668890563).epsilon(1e-13));
    CHECK(std::abs(s100 - kPi / 2.0) < 0.011);
    const double asym = kPi / 2.0 - std::cos(100.0) / 100.0 - std::sin(100.0) / 1e4;
    CHECK(std::abs(s100 - asym) < 1e-5);
}

TEST_CASE("sine integral against quadrature") {
    for (double x : {0.7, 2.0, 4.0, 6.0, 15.0, 31.4}) {
        auto f = [](double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; };
        const double ref = refq::simpson(f, 0.0, x, 1e-14, 60);
        CHECK(sine_integral(x) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("sine integral monotone on [0, pi] with maximum at pi") {
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
        const double x = kPi * i / 40.0;
        const double v = sine_integral(x);
        CHECK(v >= prev);
        prev = v;
    }
    // global max at x = pi
    CHECK(sine_integral(kPi) > sine_integral(kPi - 0.05));
    CHECK(sine_integral(kPi) > sine_integral(kPi + 0.05));
    CHECK(sine_integral(kPi) > sine_integral(2.0 * kPi));
}

TEST_CASE("coherent amplitudes vacuum") {
    const auto c = coherent_amplitudes(0.0, 1e-12);
    CHECK(c.dim == 1);
    CHECK(c.amplitudes.size() == 1);
    CHECK(c.amplitudes[0].real() == doctest::Approx(1.0));
    CHECK(c.tail_bound == 0.0);
}

TEST_CASE("coherent amplitudes dimension from the Poisson tail") {
    // |alpha| = 1, tail 1e-12: dim = 15 (tail(15) = 3.0e-13, tail(14) = 4.5e-12)
    const auto c = coherent_amplitudes(cdouble(1.0, 0.0), 1e-12);
    CHECK(c.dim == 15);
    CHECK(c.tail_bound <= 1e-12);
    CHECK(dephase::detail::poisson_tail(1.0, c.dim - 1) > 1e-12);
}

TEST_CASE("coherent amplitude norm defect equals the computed tail") {
    for (cdouble alpha : {cdouble(0.6, 0.0), cdouble(1.0, 0.0), cdouble(0.4, -1.1)}) {
        const auto c = coherent_amplitudes(alpha, 1e-10);
        double norm2 = 0.0;
        for (auto a : c.amplitudes) norm2 += std::norm(a);
        CHECK(std::abs((1.0 - norm2) - c.tail_bound) <= 1e-14);
        CHECK(norm2 >= 1.0 - c.tail_bound - 1e-14);
        CHECK(norm2 <= 1.0 + 1e-14);
    }
}

TEST_CASE("coherent amplitudes large alpha stays finite") {
    const auto c = coherent_amplitudes(cdouble(12.0, 5.0), 1e-12);
    CHECK(c.dim > 169);  // mean 169, tail pushes well past it
    for (auto a : c.amplitudes) CHECK(std::isfinite(std::abs(a)));
    double norm2 = 0.0;
    for (auto a : c.amplitudes) norm2 += std::norm(a);
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("coherent amplitudes rejects bad tail targets") {
    CHECK_THROWS_AS(coherent_amplitudes(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(coherent_amplitudes(1.0, 1.0), DomainError);
}
