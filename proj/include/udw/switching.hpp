#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "udw/correlators.hpp"

namespace udw {

enum class ProfileKind { Gaussian, CosineSquared };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(std::string_view name);

struct SwitchingProfile {
    ProfileKind kind = ProfileKind::Gaussian;
    double sigma = 1.0;
    double center = 0.0;

    std::vector<std::string> violations() const;
    // Interval the probability integrals run over: exact support for cos²,
    // center ± gaussian_k·σ for the Gaussian.
    std::pair<double, double> support(double gaussian_k = 8.0) const;
};

double eval_eta(const SwitchingProfile& profile, double tau);
Complex eval_chi(const SwitchingProfile& profile, double tau, double omega);

enum class CausalValue { Timelike, LightlikeOverlap, Spacelike };

std::string to_string(CausalValue value);

struct CausalRelation {
    CausalValue value = CausalValue::Spacelike;
    // Distance from the light cone at the middle of the separation range;
    // positive on the spacelike side.
    double margin = 0.0;
    // Half of the separation range spanned by the two regions. The relation
    // is LightlikeOverlap exactly when |margin| <= half_width.
    double half_width = 0.0;
};

// Gaussian regions are cut at center ± gaussian_k·σ.
CausalRelation classify_causal(const Scenario& scenario, const SwitchingProfile& profile_i,
                               const SwitchingProfile& profile_j, std::size_t i, std::size_t j,
                               double gaussian_k = 3.0);

}  // namespace udw
