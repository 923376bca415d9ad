#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "udw/errors.hpp"
#include "udw/quadrature.hpp"

using namespace udw;
using std::numbers::pi;

TEST_CASE("1d: constant and Gaussian") {
    QuadratureSpec q;
    auto c = integrate_1d([](double) { return Complex(2.0, 0.0); }, 0.0, 3.0, q);
    CHECK(c.converged);
    CHECK(std::abs(c.value - Complex(6.0, 0.0)) < 1e-13);

    const double inf = std::numeric_limits<double>::infinity();
    auto g = integrate_1d([](double x) { return Complex(std::exp(-x * x), 0.0); }, -inf, inf, q);
    CHECK(std::abs(g.value.real() - std::sqrt(pi)) < 1e-11);
    CHECK(g.error_bound < 1e-8);

    auto flipped = integrate_1d([](double) { return Complex(1.0, 0.0); }, 2.0, 0.0, q);
    CHECK(flipped.value.real() == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("1d: Fourier transform of a Gaussian") {
    QuadratureSpec q;
    const double sigma = 0.7, omega = 6.0;
    q.oscillation_hint = omega;
    auto r = integrate_1d(
        [&](double x) { return std::exp(-x * x / (2 * sigma * sigma)) * std::exp(Complex(0.0, -omega * x)); }, -12.0,
        12.0, q);
    const double exact = sigma * std::sqrt(2 * pi) * std::exp(-sigma * sigma * omega * omega / 2);
    CHECK(std::abs(r.value - Complex(exact, 0.0)) < 1e-12);
}

TEST_CASE("1d: linearity, additivity, conjugation") {
    QuadratureSpec q;
    auto f = [](double x) { return Complex(std::cos(3 * x), std::sin(x) * x); };
    auto g = [](double x) { return Complex(1.0 / (1 + x * x), 0.5); };
    const Complex a(1.5, -0.25);
    auto lhs = integrate_1d([&](double x) { return a * f(x) + g(x); }, -1.0, 2.0, q).value;
    auto rhs = a * integrate_1d(f, -1.0, 2.0, q).value + integrate_1d(g, -1.0, 2.0, q).value;
    CHECK(std::abs(lhs - rhs) < 1e-12);

    auto whole = integrate_1d(f, -1.0, 2.0, q).value;
    auto split = integrate_1d(f, -1.0, 0.3, q).value + integrate_1d(f, 0.3, 2.0, q).value;
    CHECK(std::abs(whole - split) < 1e-12);

    auto conj = integrate_1d([&](double x) { return std::conj(f(x)); }, -1.0, 2.0, q).value;
    CHECK(std::abs(conj - std::conj(whole)) < 1e-13);
}

TEST_CASE("1d: non-finite integrand is a domain error") {
    QuadratureSpec q;
    CHECK_THROWS_AS(integrate_1d([](double x) { return Complex(1.0 / (x - 0.5) * 0.0 / 0.0, 0.0); }, 0.0, 1.0, q),
                    DomainError);
}

TEST_CASE("semi-infinite oscillatory") {
    QuadratureSpec q;
    auto r = integrate_semi_infinite_oscillatory([](double s) { return Complex(std::exp(-s), 0.0); }, 1.0, q);
    CHECK(std::abs(r.value - Complex(0.5, -0.5)) < 1e-12);

    OscillatoryTail bad;
    bad.g_inf = 1.0;
    CHECK_THROWS_AS(integrate_semi_infinite_oscillatory([](double) { return Complex(1.0, 0.0); }, 0.0, q, bad),
                    ContractViolation);
}

TEST_CASE("2d: unit square and separable Gaussian") {
    QuadratureSpec q;
    auto sq = integrate_2d([](double x, double y) { return Complex(x * y, 0.0); }, 0, 1, 0, 1, q);
    CHECK(std::abs(sq.value - Complex(0.25, 0.0)) < 1e-13);

    auto gg = integrate_2d([](double x, double y) { return Complex(std::exp(-x * x - y * y), 0.0); }, -9, 9, -9, 9, q);
    CHECK(std::abs(gg.value.real() - pi) < 1e-9);
}

TEST_CASE("extrapolation recovers polynomials exactly") {
    std::vector<EpsilonSample> s;
    for (double e : {0.08, 0.04, 0.02, 0.01}) s.push_back({e, Complex(1.0 + 2 * e - 3 * e * e, e)});
    auto r = epsilon_extrapolate(s, 2);
    CHECK(std::abs(r.value - Complex(1.0, 0.0)) < 1e-13);
    CHECK(r.order == 2);

    CHECK_THROWS_AS(epsilon_extrapolate(s, 0), ArityError);
    CHECK_THROWS_AS(epsilon_extrapolate(std::span(s).first(2), 2), ArityError);
    std::vector<EpsilonSample> dup = {{0.1, 1.0}, {0.1, 2.0}, {0.05, 3.0}};
    CHECK_THROWS_AS(epsilon_extrapolate(dup, 2), ArityError);
}

TEST_CASE("regularized pole: extrapolation beats the finest regulator") {
    // ∫_{-1}^{2} dx / (x - iε) -> ln 2 + iπ
    QuadratureSpec q;
    EpsilonSchedule e;
    e.eps0 = 0.04;
    e.steps = 6;
    e.extrapolation_order = 3;
    std::vector<EpsilonSample> s;
    for (double eps : e.ladder()) {
        const PoleHint hint{0.0, eps};
        auto r = integrate_1d([&](double x) { return 1.0 / Complex(x, -eps); }, -1.0, 2.0, q, std::span(&hint, 1));
        s.push_back({eps, r.value});
    }
    const Complex exact(std::log(2.0), pi);
    auto x = epsilon_extrapolate(s, e.extrapolation_order);
    CHECK(std::abs(x.value - exact) < 1e-7);
    CHECK(std::abs(x.value - exact) < std::abs(s.back().value - exact));
    for (std::size_t k = 1; k < s.size(); ++k) CHECK(std::abs(s[k].value - exact) < std::abs(s[k - 1].value - exact));
}

TEST_CASE("spec validation collects violations") {
    QuadratureSpec q;
    q.abs_tol = -1;
    q.rel_tol = 0;
    try {
        q.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
        CHECK(err.violations().size() >= 1);
    }
    EpsilonSchedule e;
    e.ratio = 1.5;
    CHECK_THROWS_AS(e.validate(), ConfigError);
    e = {};
    auto l = e.ladder();
    REQUIRE(l.size() == 4);
    CHECK(l[3] == doctest::Approx(e.eps0 / 8));
}
