#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "udw/quadrature.hpp"
#include "udw/response.hpp"

namespace udw {

// Fixed-grid trapezoid evaluation of the probability double integrals. It
// shares only the kernel and window closed forms with the adaptive engine:
// no adaptive partition, no pole hints, no ε extrapolation.
struct RiemannTerm {
    Complex value{0.0, 0.0};
    // |S_n - S_{n/2}|, the change when every other node is dropped.
    double error = 0.0;
};

// resolution intervals per axis over the same supports the engine uses.
// resolution must be even and >= 4.
RiemannTerm riemann_probability_term(const SuperpositionConfig& config, std::size_t i, std::size_t j,
                                     double epsilon, int resolution);

// Regularization used by oracle_check: at least eps_floor and at least
// eight grid spacings, so every pole sits well off the grid in units of h.
double oracle_epsilon(const SuperpositionConfig& config, int resolution, double eps_floor);

enum class OracleStatus { Agree, Disagree, Inconclusive };

std::string to_string(OracleStatus status);

struct OracleTermReport {
    std::size_t i = 0, j = 0;
    Complex oracle{0.0, 0.0}, engine{0.0, 0.0};
    double oracle_error = 0.0, engine_error = 0.0;
    double deviation = 0.0;
};

struct OracleReport {
    double epsilon = 0.0;
    int resolution = 0;
    std::vector<OracleTermReport> terms;
    double oracle_total = 0.0, engine_total = 0.0;
    double deviation = 0.0, relative_deviation = 0.0;
    double combined_bound = 0.0;
    OracleStatus status = OracleStatus::Inconclusive;
    std::string note;
};

// Useful up to a few thousand intervals per axis: the cost is
// N²·(resolution+1)² kernel evaluations.
OracleReport oracle_check(const SuperpositionConfig& config, int resolution, const QuadratureSpec& quad,
                          double eps_floor);

}  // namespace udw
