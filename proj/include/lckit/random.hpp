#ifndef LCKIT_RANDOM_HPP
#define LCKIT_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "lckit/behavior.hpp"
#include "lckit/conspiracy.hpp"
#include "lckit/local_causality.hpp"
#include "lckit/quantum.hpp"

// Random instances for property checks. All generators are deterministic
// functions of the engine state.

namespace lckit::random {

using Engine = std::mt19937_64;

/// Seed from LCKIT_SEED if set and parseable, else `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback = 20240611);

/// Point on the probability simplex of dimension n (normalized
/// exponentials). Sums to 1 up to rounding.
Eigen::VectorXd simplex_point(Engine& rng, int n);

/// Haar-random two-qubit pure state.
quantum::QubitPairState<double> state(Engine& rng);

std::vector<double> angles(Engine& rng, int count);

CommonCauseModel common_cause_model(Engine& rng, const Scenario& s, int lambdas);

/// Responses are random; with probability `dependence` each setting
/// pair gets its own P(lambda|a,b), otherwise one shared P(lambda).
SettingDependentModel setting_dependent_model(Engine& rng, const Scenario& s,
                                              int lambdas, double dependence = 0.5);

/// Convex mixture of a random local behavior and one of the eight PR
/// boxes with weight in [0, max_pr_weight]. Always no-signaling.
Behavior chsh_test_behavior(Engine& rng, double max_pr_weight = 0.5);

/// PR box variant: P(A,B|a,b) = 1/2 iff A*B = (-1)^(a*b + x*a + y*b + z).
Behavior pr_box(int x, int y, int z);

}  // namespace lckit::random

#endif  // LCKIT_RANDOM_HPP
