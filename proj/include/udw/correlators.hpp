#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "udw/quadrature.hpp"

namespace udw {

enum class ScenarioKind { ThermalMinkowski, DeSitterComoving, ParallelAccelerated };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(std::string_view name);

// Symmetric matrix of pairwise separations (physical length units).
class SeparationMatrix {
public:
    SeparationMatrix() = default;
    explicit SeparationMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return data_.at(i * n_ + j); }
    // Writes a single entry; set_pair writes both (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, double value) { data_.at(i * n_ + j) = value; }
    void set_pair(std::size_t i, std::size_t j, double value) {
        set(i, j, value);
        set(j, i, value);
    }
    std::vector<std::string> violations() const;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

struct Scenario {
    ScenarioKind kind = ScenarioKind::ThermalMinkowski;
    double kappa = 1.0;
    SeparationMatrix separations;

    std::vector<std::string> violations() const;
    void validate() const;
};

// Closed-form kernels in physical units.
Complex eval_local(double s, double kappa, double epsilon);
Complex eval_thermal_nonlocal(double s, double kappa, double L, double epsilon);
Complex eval_desitter_nonlocal(double p, double s, double kappa, double L, double epsilon);
Complex eval_parallel_nonlocal(double p, double s, double kappa, double L, double epsilon);

// Analytic continuations used by the imaginary-time diagnostics.
Complex eval_local_complex(Complex s, double kappa, double epsilon);
Complex eval_thermal_nonlocal_complex(Complex s, double kappa, double L, double epsilon);
Complex eval_desitter_nonlocal_complex(Complex p, Complex s, double kappa, double L, double epsilon);

// W^{ij}(τ, τ') for one ordered pair of branches. For i > j the kernel is
// defined as conj(W^{ji}(τ', τ)), so the pair (i,j),(j,i) is Hermitian by
// construction. Coincident branches, or distinct branches at zero
// separation, evaluate W_D.
class CorrelatorKernel {
public:
    CorrelatorKernel(const Scenario& scenario, std::size_t i, std::size_t j, double epsilon);

    Complex operator()(double tau, double tau_prime) const;
    Complex at_lag(double tau, double s) const { return (*this)(tau, tau - s); }

    bool is_local() const { return local_; }
    bool stationary() const;
    ScenarioKind kind() const { return kind_; }
    double kappa() const { return kappa_; }
    double separation() const { return L_; }
    double epsilon() const { return eps_; }
    std::size_t first() const { return i_; }
    std::size_t second() const { return j_; }
    CorrelatorKernel with_epsilon(double epsilon) const;

    // Real parts and widths of the near-axis singularities of
    // τ' -> W(τ, τ'), and the same singularities in the lag s = τ - τ'.
    std::vector<PoleHint> singular_tau_prime(double tau) const;
    std::vector<PoleHint> singular_lags(double tau) const;

private:
    Complex base(double x, double xp) const;

    ScenarioKind kind_;
    double kappa_;
    double L_;
    double eps_;
    std::size_t i_, j_;
    bool local_;
    bool swapped_;
};

// max_s |W(s - 2πi/κ) - W(-s)| after ε-extrapolation. Only defined for
// stationary kernels.
double kms_periodicity_residual(const CorrelatorKernel& kernel, std::span<const double> s_samples,
                                double kappa, const EpsilonSchedule& eps = {1e-3, 0.5, 4, 3});

// Same diagnostic for the lag function g(s) = W(τ_ref, τ_ref - s), which is
// defined for every kernel. For p-dependent kernels it measures the
// breaking of stationarity at the reference time.
double kms_reference_residual(const CorrelatorKernel& kernel, std::span<const double> s_samples,
                              double tau_ref, const EpsilonSchedule& eps = {1e-3, 0.5, 4, 3});

}  // namespace udw
