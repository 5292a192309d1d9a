#include "lckit/conspiracy.hpp"

#include <cmath>

namespace lckit {

SettingDependentModel::SettingDependentModel(
    Scenario scenario, std::vector<LambdaValue> lambdas,
    Eigen::MatrixXd conditional_weights, ResponseTable responses_a,
    ResponseTable responses_b, std::optional<SettingAngles> angles,
    double tolerance)
    : scenario_(scenario),
      lambdas_(std::move(lambdas)),
      weights_(std::move(conditional_weights)),
      responses_a_(std::move(responses_a)),
      responses_b_(std::move(responses_b)),
      angles_(std::move(angles)) {
  check_lambda_structure(scenario_, lambdas_, responses_a_, responses_b_,
                         angles_, tolerance);
  if (weights_.rows() != lambda_count() ||
      weights_.cols() != scenario_.setting_pairs())
    throw Error(ErrorKind::InvalidModel,
                "conditional weights need one row per lambda and one column per setting pair");
  for (Eigen::Index k = 0; k < weights_.cols(); ++k) {
    if (!(weights_.col(k).array() >= 0.0).all() ||
        !(std::abs(weights_.col(k).sum() - 1.0) <= tolerance))
      throw Error(ErrorKind::InvalidModel,
                  "P(lambda|a,b) for setting pair column " + std::to_string(k) +
                      " is not a probability distribution");
  }
}

SettingDependentModel lift(const CommonCauseModel& m) {
  Eigen::MatrixXd w = m.weights().replicate(1, m.scenario().setting_pairs());
  return SettingDependentModel(m.scenario(), m.lambdas(), std::move(w),
                               m.responses(Wing::Alice), m.responses(Wing::Bob),
                               m.angles());
}

CommonCauseModel to_common_cause(const SettingDependentModel& m, double tolerance) {
  const SIReport si = si_check(m, tolerance);
  if (!si.passes)
    throw Error(ErrorKind::InvalidModel,
                "model violates statistical independence (residual " +
                    std::to_string(si.max_residual) + ")");
  return CommonCauseModel(m.scenario(), m.lambdas(), m.conditional_weights().col(0),
                          m.responses(Wing::Alice), m.responses(Wing::Bob),
                          m.angles());
}

Behavior model_behavior(const SettingDependentModel& m) {
  const ResponseTable& ra = m.responses(Wing::Alice);
  const ResponseTable& rb = m.responses(Wing::Bob);
  return Behavior::tabulate(m.scenario(), [&](int a, int b, Outcome A, Outcome B) {
    double p = 0.0;
    for (int l = 0; l < m.lambda_count(); ++l)
      p += m.weight(l, a, b) * ra(l, a, A) * rb(l, b, B);
    return p;
  });
}

SIReport si_check(const SettingDependentModel& m, double tolerance) {
  SIReport r;
  r.tolerance = tolerance;
  const Eigen::MatrixXd& w = m.conditional_weights();
  for (Eigen::Index l = 0; l < w.rows(); ++l) {
    const double spread = w.row(l).maxCoeff() - w.row(l).minCoeff();
    if (r.worst_lambda < 0 || spread > r.max_residual) {
      r.max_residual = spread;
      r.worst_lambda = static_cast<int>(l);
    }
  }
  r.passes = r.max_residual <= tolerance;
  return r;
}

BayesEquivalenceReport bayes_equivalence_check(const SettingDependentModel& m,
                                               const Eigen::VectorXd& setting_prior,
                                               double tolerance) {
  const int pairs = m.scenario().setting_pairs();
  if (setting_prior.size() != pairs)
    throw Error(ErrorKind::ShapeMismatch, "setting prior needs one entry per setting pair");
  for (Eigen::Index k = 0; k < pairs; ++k)
    if (!(setting_prior(k) > 0.0))
      throw Error(ErrorKind::ZeroProbabilitySetting,
                  "setting pair " + std::to_string(k) +
                      " has zero prior probability; P(lambda|a,b) is undefined there");
  if (!(std::abs(setting_prior.sum() - 1.0) <= kModelTolerance))
    throw Error(ErrorKind::InvalidArgument, "setting prior must sum to 1");

  // joint(lambda, k) = P(lambda, a, b)
  const Eigen::MatrixXd joint =
      m.conditional_weights() * setting_prior.asDiagonal();
  const Eigen::VectorXd p_lambda = joint.rowwise().sum();

  BayesEquivalenceReport r;
  r.tolerance = tolerance;
  for (Eigen::Index l = 0; l < joint.rows(); ++l) {
    for (Eigen::Index k = 0; k < pairs; ++k) {
      const double given_settings = joint(l, k) / setting_prior(k);
      r.lambda_given_settings_residual = std::max(
          r.lambda_given_settings_residual, std::abs(given_settings - p_lambda(l)));
      if (p_lambda(l) > 0.0) {
        const double given_lambda = joint(l, k) / p_lambda(l);
        r.settings_given_lambda_residual = std::max(
            r.settings_given_lambda_residual,
            std::abs(given_lambda - setting_prior(k)));
      }
    }
  }
  r.lambda_independent = r.lambda_given_settings_residual <= tolerance;
  r.settings_independent = r.settings_given_lambda_residual <= tolerance;
  return r;
}

BayesEquivalenceReport bayes_equivalence_check(const SettingDependentModel& m,
                                               double tolerance) {
  const int pairs = m.scenario().setting_pairs();
  return bayes_equivalence_check(m, Eigen::VectorXd::Constant(pairs, 1.0 / pairs),
                                 tolerance);
}

SettingDependentModel superdeterministic_reproduction(const Behavior& target) {
  require_valid(target);
  const Scenario& s = target.scenario();
  std::vector<LambdaValue> lambdas;
  ResponseTable ra(4, s.settings_a());
  ResponseTable rb(4, s.settings_b());
  Eigen::MatrixXd w(4, s.setting_pairs());
  int l = 0;
  for (Outcome A : kOutcomes) {
    for (Outcome B : kOutcomes) {
      const std::string label = std::string("A") + to_string(A) + "B" + to_string(B);
      lambdas.push_back({label, DiscreteToken{label}});
      for (int a = 0; a < s.settings_a(); ++a) ra.set_deterministic(l, a, A);
      for (int b = 0; b < s.settings_b(); ++b) rb.set_deterministic(l, b, B);
      for (int a = 0; a < s.settings_a(); ++a)
        for (int b = 0; b < s.settings_b(); ++b)
          w(l, a * s.settings_b() + b) = target(a, b, A, B);
      ++l;
    }
  }
  return SettingDependentModel(s, std::move(lambdas), std::move(w), std::move(ra),
                               std::move(rb));
}

}  // namespace lckit
