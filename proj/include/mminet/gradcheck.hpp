#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mminet/types.hpp"

namespace mminet {

// Central finite-difference validation of every analytic gradient path:
// dense/ELU backprop, the KDE log-density gradient, the instantaneous loss
// gradient in y, and end-to-end parameter gradients with a frozen context.
struct GradCheckResult {
    std::string name;
    int instances = 0;
    double max_rel_error = 0.0;
    bool passed = false;
};

inline constexpr double kGradCheckStep = 1e-5;
inline constexpr double kGradCheckRtol = 1e-4;
inline constexpr double kGradCheckAtol = 1e-7;

GradCheckResult gradcheck_network(std::uint64_t seed, int instances = 24);
GradCheckResult gradcheck_density(std::uint64_t seed, int instances = 24);
GradCheckResult gradcheck_loss(std::uint64_t seed, int instances = 60);
GradCheckResult gradcheck_smig_params(std::uint64_t seed, int instances = 24);

std::vector<GradCheckResult> run_all_gradchecks(std::uint64_t seed);

}  // namespace mminet
