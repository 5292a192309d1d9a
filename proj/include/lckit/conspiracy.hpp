#ifndef LCKIT_CONSPIRACY_HPP
#define LCKIT_CONSPIRACY_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lckit/behavior.hpp"
#include "lckit/local_causality.hpp"

namespace lckit {

inline constexpr double kIndependenceTolerance = 1e-12;

/// Common-cause model whose lambda distribution may depend on the
/// settings: P(lambda|a,b) instead of P(lambda).
class SettingDependentModel {
 public:
  /// `conditional_weights` has one row per lambda and one column per
  /// setting pair (column a * settings_b + b); each column must be a
  /// probability distribution.
  SettingDependentModel(Scenario scenario, std::vector<LambdaValue> lambdas,
                        Eigen::MatrixXd conditional_weights,
                        ResponseTable responses_a, ResponseTable responses_b,
                        std::optional<SettingAngles> angles = std::nullopt,
                        double tolerance = kModelTolerance);

  const Scenario& scenario() const noexcept { return scenario_; }
  const std::vector<LambdaValue>& lambdas() const noexcept { return lambdas_; }
  int lambda_count() const noexcept { return static_cast<int>(lambdas_.size()); }
  const Eigen::MatrixXd& conditional_weights() const noexcept { return weights_; }
  double weight(int lambda, int a, int b) const {
    return weights_(lambda, a * scenario_.settings_b() + b);
  }
  const ResponseTable& responses(Wing w) const noexcept {
    return w == Wing::Alice ? responses_a_ : responses_b_;
  }
  const std::optional<SettingAngles>& angles() const noexcept { return angles_; }

 private:
  Scenario scenario_;
  std::vector<LambdaValue> lambdas_;
  Eigen::MatrixXd weights_;
  ResponseTable responses_a_;
  ResponseTable responses_b_;
  std::optional<SettingAngles> angles_;
};

/// Copies P(lambda) into every setting pair.
SettingDependentModel lift(const CommonCauseModel& m);

/// Uses setting pair (0,0)'s weights as P(lambda). Throws InvalidModel
/// unless si_check passes at `tolerance`.
CommonCauseModel to_common_cause(const SettingDependentModel& m,
                                 double tolerance = kIndependenceTolerance);

/// sum over lambda of P(lambda|a,b) P(A|a,lambda) P(B|b,lambda).
Behavior model_behavior(const SettingDependentModel& m);

struct SIReport {
  /// max over (lambda, a, b, a', b') of |P(lambda|a,b) - P(lambda|a',b')|.
  double max_residual = 0.0;
  int worst_lambda = -1;
  double tolerance = kIndependenceTolerance;
  bool passes = true;
};

SIReport si_check(const SettingDependentModel& m,
                  double tolerance = kIndependenceTolerance);

struct BayesEquivalenceReport {
  /// max |P(lambda|a,b) - P(lambda)|, P(lambda) marginalized from the joint.
  double lambda_given_settings_residual = 0.0;
  /// max |P(a,b|lambda) - P(a,b)| over lambda with P(lambda) > 0.
  double settings_given_lambda_residual = 0.0;
  double tolerance = kIndependenceTolerance;
  bool lambda_independent = true;
  bool settings_independent = true;

  bool agree() const noexcept { return lambda_independent == settings_independent; }
};

/// Builds P(lambda,a,b) = P(lambda|a,b) P(a,b) and checks both directions
/// of statistical independence through it. `setting_prior` is indexed like
/// the model's columns. Throws ZeroProbabilitySetting if a prior entry is
/// not strictly positive, InvalidArgument if it does not sum to 1.
BayesEquivalenceReport bayes_equivalence_check(
    const SettingDependentModel& m, const Eigen::VectorXd& setting_prior,
    double tolerance = kIndependenceTolerance);

/// Uniform prior over the model's setting pairs.
BayesEquivalenceReport bayes_equivalence_check(
    const SettingDependentModel& m, double tolerance = kIndependenceTolerance);

/// Exact reproduction of any behavior by a setting-dependent model: one
/// lambda per outcome pair (A,B) with deterministic constant responses
/// A and B, and P(lambda=(A,B)|a,b) = P(A,B|a,b).
SettingDependentModel superdeterministic_reproduction(const Behavior& target);

}  // namespace lckit

#endif  // LCKIT_CONSPIRACY_HPP
