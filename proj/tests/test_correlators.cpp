#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "udw/correlators.hpp"
#include "udw/errors.hpp"

using namespace udw;
using std::numbers::pi;

namespace {

Scenario make(ScenarioKind kind, double kappa, double L) {
    Scenario s;
    s.kind = kind;
    s.kappa = kappa;
    s.separations = SeparationMatrix(2);
    s.separations.set_pair(0, 1, L);
    return s;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Thermal Wightman function at spatial distance L as a sum over imaginary
// time images, Σ_n 1/(4π²(L² - (t - iε - inβ)²)), with the n^-2 tail
// added in closed form.
Complex image_sum(double t, double L, double beta, double eps, int nmax) {
    Complex sum = 0.0;
    for (int n = -nmax; n <= nmax; ++n) {
        const Complex u(t, -eps - n * beta);
        sum += 1.0 / (4 * pi * pi * (L * L - u * u));
    }
    // Σ_{|n|>nmax} 1/(4π² n² β²)
    sum += 2.0 / (4 * pi * pi * beta * beta * nmax);
    return sum;
}

}  // namespace

TEST_CASE("local kernel: flat limit and κ scaling") {
    const double s = 0.7, eps = 1e-3;
    const Complex flat = -1.0 / (4 * pi * pi * std::pow(Complex(s, -2 * eps), 2));
    CHECK(rel(eval_local(s, 1e-4, eps), flat) < 1e-6);

    const double k = 2.5;
    CHECK(rel(eval_local(s, k, eps), k * k * eval_local(k * s, 1.0, k * eps)) < 1e-13);
}

TEST_CASE("thermal kernels match the imaginary-time image sum") {
    const double kappa = 1.3, beta = 2 * pi / kappa, L = 0.8, eps = 0.05;
    for (double t : {-2.0, -0.3, 0.4, 1.7, 5.0}) {
        const Complex sum = image_sum(t, L, beta, eps, 200000);
        CHECK(rel(eval_thermal_nonlocal(t, kappa, L, eps), sum) < 1e-5);
        // the local kernel's regulator is 2ε in this normalization
        const Complex loc = image_sum(t, 1e-7, beta, 2 * eps, 200000);
        CHECK(rel(eval_local(t, kappa, eps), loc) < 1e-5);
    }
    CHECK_THROWS_AS(eval_thermal_nonlocal(0.1, 1.0, 0.0, 1e-2), DomainError);
}

TEST_CASE("nonlocal kernels reduce to Minkowski as κ -> 0") {
    const double k = 1e-4, L = 1.2, eps = 1e-3;
    for (double s : {-0.5, 0.3, 2.0}) {
        const Complex m2 = 1.0 / (4 * pi * pi * (L * L - std::pow(Complex(s, -2 * eps), 2)));
        const Complex m1 = 1.0 / (4 * pi * pi * (L * L - std::pow(Complex(s, -eps), 2)));
        CHECK(rel(eval_desitter_nonlocal(0.0, s, k, L, eps), m2) < 1e-5);
        CHECK(rel(eval_parallel_nonlocal(0.0, s, k, L, eps), m2) < 1e-5);
        CHECK(rel(eval_thermal_nonlocal(s, k, L, eps), m1) < 1e-5);
    }
}

TEST_CASE("zero separation reduces to the local kernel") {
    const double kappa = 0.9, eps = 1e-2;
    for (double s : {-1.0, 0.5, 3.0}) {
        // the thermal coth arguments carry ε where the local kernel has 2ε
        CHECK(rel(eval_thermal_nonlocal(s, kappa, 1e-6, eps), eval_local(s, kappa, eps / 2)) < 1e-6);
        CHECK(rel(eval_desitter_nonlocal(0.4, s, kappa, 0.0, eps), eval_local(s, kappa, eps)) < 1e-12);
    }
    const CorrelatorKernel w(make(ScenarioKind::DeSitterComoving, kappa, 0.0), 0, 1, eps);
    CHECK(w.is_local());
}

TEST_CASE("Hermiticity of ordered pairs") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (auto kind : {ScenarioKind::ThermalMinkowski, ScenarioKind::DeSitterComoving, ScenarioKind::ParallelAccelerated}) {
        const Scenario sc = make(kind, 1.0, 0.7);
        const CorrelatorKernel w12(sc, 0, 1, 1e-2), w21(sc, 1, 0, 1e-2), w11(sc, 0, 0, 1e-2);
        for (int k = 0; k < 20; ++k) {
            const double t = u(rng), tp = u(rng);
            CHECK(std::abs(w21(t, tp) - std::conj(w12(tp, t))) <= 1e-14 * std::abs(w12(tp, t)));
            CHECK(std::abs(w11(t, tp) - std::conj(w11(tp, t))) <= 1e-12 * std::abs(w11(t, tp)));
        }
    }
    // de Sitter and thermal nonlocal kernels are Hermitian as printed
    for (auto kind : {ScenarioKind::ThermalMinkowski, ScenarioKind::DeSitterComoving}) {
        const CorrelatorKernel w(make(kind, 1.0, 0.7), 0, 1, 1e-2);
        CHECK(std::abs(w(0.3, -1.1) - std::conj(w(-1.1, 0.3))) < 1e-12 * std::abs(w(0.3, -1.1)));
    }
}

TEST_CASE("pole hints sit on the near-singularities") {
    for (auto kind : {ScenarioKind::ThermalMinkowski, ScenarioKind::DeSitterComoving, ScenarioKind::ParallelAccelerated}) {
        for (auto [i, j] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 0}}) {
            const CorrelatorKernel w(make(kind, 1.0, 0.9), i, j, 1e-3);
            for (double tau : {-1.0, 0.5}) {
                const auto hints = w.singular_tau_prime(tau);
                REQUIRE(!hints.empty());
                for (const PoleHint& h : hints) {
                    CAPTURE(to_string(kind));
                    CHECK(h.width > 0);
                    CHECK(std::abs(w(tau, h.location)) > 20 * std::abs(w(tau, h.location + 100 * h.width)));
                }
            }
        }
    }
}

TEST_CASE("KMS periodicity of stationary kernels") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.5, 5.0);
    std::vector<double> s;
    while (s.size() < 20) {
        const double v = u(rng);
        if (std::abs(v - 1.0) > 0.3) s.push_back(rng() % 2 ? v : -v);
    }
    const Scenario sc = make(ScenarioKind::ThermalMinkowski, 1.0, 1.0);
    CHECK(kms_periodicity_residual(CorrelatorKernel(sc, 0, 0, 1e-3), s, 1.0) < 1e-8);
    CHECK(kms_periodicity_residual(CorrelatorKernel(sc, 0, 1, 1e-3), s, 1.0) < 1e-8);

    const Scenario ds = make(ScenarioKind::DeSitterComoving, 1.0, 1.0);
    CHECK_THROWS_AS(kms_periodicity_residual(CorrelatorKernel(ds, 0, 1, 1e-3), s, 1.0), ContractViolation);
    const CorrelatorKernel wds(ds, 0, 1, 1e-3);
    double mag = 0.0;
    for (double v : s) mag = std::max(mag, std::abs(wds.at_lag(0.0, v)));
    CHECK(kms_reference_residual(wds, s, 0.0) > 1e-3 * mag);
    // the local de Sitter kernel is still thermal
    CHECK(kms_reference_residual(CorrelatorKernel(ds, 0, 0, 1e-3), s, 0.0) < 1e-8);
}

TEST_CASE("separation matrix and scenario validation") {
    SeparationMatrix m(3);
    m.set(0, 1, 1.0);
    m.set(1, 0, 2.0);
    m.set_pair(0, 2, -1.0);
    const auto v = m.violations();
    bool asym = false, neg = false;
    for (const auto& s : v) {
        asym = asym || s.find("not symmetric") != std::string::npos;
        neg = neg || s.find("L_1,3") != std::string::npos;
    }
    CHECK(asym);
    CHECK(neg);

    Scenario sc = make(ScenarioKind::ThermalMinkowski, -1.0, 1.0);
    CHECK_THROWS_AS(sc.validate(), ConfigError);

    for (auto kind : {ScenarioKind::ThermalMinkowski, ScenarioKind::DeSitterComoving, ScenarioKind::ParallelAccelerated})
        CHECK(scenario_kind_from_string(to_string(kind)) == kind);
    CHECK_THROWS_AS(scenario_kind_from_string("rindler"), ContractViolation);
}
