#include "lckit/local_causality.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lckit {

ResponseTable::ResponseTable(int lambdas, int settings)
    : p_(Eigen::MatrixXd::Zero(lambdas, 2 * settings)), settings_(settings) {}

ResponseTable::ResponseTable(Eigen::MatrixXd probabilities, int settings)
    : p_(std::move(probabilities)), settings_(settings) {
  if (p_.cols() != 2 * settings)
    throw Error(ErrorKind::ShapeMismatch,
                "response table needs two columns per setting");
}

void check_lambda_structure(const Scenario& s,
                            const std::vector<LambdaValue>& lambdas,
                            const ResponseTable& responses_a,
                            const ResponseTable& responses_b,
                            const std::optional<SettingAngles>& angles,
                            double tolerance) {
  const int n = static_cast<int>(lambdas.size());
  if (n == 0) throw Error(ErrorKind::InvalidModel, "model has no lambda values");

  std::set<std::string> labels;
  bool any_quantum = false;
  for (const LambdaValue& l : lambdas) {
    if (!labels.insert(l.label).second)
      throw Error(ErrorKind::InvalidModel, "duplicate lambda label '" + l.label + "'");
    any_quantum = any_quantum || l.is_quantum();
  }

  for (Wing w : {Wing::Alice, Wing::Bob}) {
    const ResponseTable& r = w == Wing::Alice ? responses_a : responses_b;
    const char* who = w == Wing::Alice ? "Alice" : "Bob";
    if (r.lambdas() != n || r.settings() != s.settings(w))
      throw Error(ErrorKind::InvalidModel,
                  std::string(who) + " response table shape does not match the model");
    for (int l = 0; l < n; ++l) {
      for (int k = 0; k < r.settings(); ++k) {
        const double plus = r(l, k, Outcome::Plus);
        const double minus = r(l, k, Outcome::Minus);
        if (!(plus >= 0.0 && plus <= 1.0 && minus >= 0.0 && minus <= 1.0) ||
            !(std::abs(plus + minus - 1.0) <= tolerance))
          throw Error(ErrorKind::InvalidModel,
                      std::string(who) + " response for lambda '" +
                          lambdas[static_cast<std::size_t>(l)].label +
                          "' at setting " + std::to_string(k) +
                          " is not a probability distribution");
      }
    }
  }

  if (any_quantum) {
    if (!angles)
      throw Error(ErrorKind::InvalidModel,
                  "quantum lambda values need setting angles");
    if (static_cast<int>(angles->alice.size()) != s.settings_a() ||
        static_cast<int>(angles->bob.size()) != s.settings_b())
      throw Error(ErrorKind::InvalidModel,
                  "setting angle lists do not match the scenario");
  }
}

CommonCauseModel::CommonCauseModel(Scenario scenario,
                                   std::vector<LambdaValue> lambdas,
                                   Eigen::VectorXd weights,
                                   ResponseTable responses_a,
                                   ResponseTable responses_b,
                                   std::optional<SettingAngles> angles,
                                   double tolerance)
    : scenario_(scenario),
      lambdas_(std::move(lambdas)),
      weights_(std::move(weights)),
      responses_a_(std::move(responses_a)),
      responses_b_(std::move(responses_b)),
      angles_(std::move(angles)) {
  check_lambda_structure(scenario_, lambdas_, responses_a_, responses_b_,
                         angles_, tolerance);
  if (weights_.size() != lambda_count())
    throw Error(ErrorKind::InvalidModel, "one weight per lambda required");
  if (!(weights_.array() >= 0.0).all())
    throw Error(ErrorKind::InvalidModel, "lambda weights must be nonnegative");
  if (!(std::abs(weights_.sum() - 1.0) <= tolerance))
    throw Error(ErrorKind::InvalidModel, "lambda weights must sum to 1");
}

bool CommonCauseModel::is_deterministic() const {
  auto binary = [](const Eigen::MatrixXd& m) {
    return ((m.array() == 0.0) || (m.array() == 1.0)).all();
  };
  return binary(responses_a_.matrix()) && binary(responses_b_.matrix());
}

ConditionalJoint::ConditionalJoint(Scenario scenario,
                                   std::vector<Behavior> per_lambda,
                                   double tolerance)
    : scenario_(scenario), tables_(std::move(per_lambda)) {
  for (std::size_t l = 0; l < tables_.size(); ++l) {
    if (!(tables_[l].scenario() == scenario_))
      throw Error(ErrorKind::ShapeMismatch,
                  "conditional joint for lambda " + std::to_string(l) +
                      " has a different scenario");
    const ValidationResult v = validate(tables_[l], tolerance);
    if (!v.valid())
      throw Error(ErrorKind::InvalidBehavior,
                  "conditional joint for lambda " + std::to_string(l) + ": " +
                      v.describe());
  }
}

ConditionalJoint induced_joint(const CommonCauseModel& m) {
  const Scenario& s = m.scenario();
  std::vector<Behavior> tables;
  tables.reserve(static_cast<std::size_t>(m.lambda_count()));
  for (int l = 0; l < m.lambda_count(); ++l) {
    const LambdaValue& lv = m.lambdas()[static_cast<std::size_t>(l)];
    if (lv.is_quantum()) {
      const auto& state = std::get<quantum::QubitPairState<double>>(lv.payload);
      tables.push_back(quantum::behavior_from_angles<double>(
          state, m.angles()->alice, m.angles()->bob));
    } else {
      const ResponseTable& ra = m.responses(Wing::Alice);
      const ResponseTable& rb = m.responses(Wing::Bob);
      tables.push_back(Behavior::tabulate(
          s, [&](int a, int b, Outcome A, Outcome B) {
            return ra(l, a, A) * rb(l, b, B);
          }));
    }
  }
  return ConditionalJoint(s, std::move(tables));
}

ScreeningReport screening_off_check(const ConditionalJoint& joint,
                                    const CommonCauseModel& m,
                                    double tolerance) {
  const Scenario& s = m.scenario();
  if (!(joint.scenario() == s) || joint.lambda_count() != m.lambda_count())
    throw Error(ErrorKind::ShapeMismatch,
                "conditional joint does not match the model's scenario or lambda count");

  ScreeningReport r;
  r.tolerance = tolerance;
  r.residuals.resize(static_cast<Eigen::Index>(m.lambda_count()) * s.cell_count());
  const ResponseTable& ra = m.responses(Wing::Alice);
  const ResponseTable& rb = m.responses(Wing::Bob);
  for (int l = 0; l < m.lambda_count(); ++l) {
    for (int a = 0; a < s.settings_a(); ++a)
      for (int b = 0; b < s.settings_b(); ++b)
        for (Outcome A : kOutcomes)
          for (Outcome B : kOutcomes) {
            const int cell = static_cast<int>(s.cell_index(a, b, A, B));
            const double res =
                std::abs(joint[l](a, b, A, B) - ra(l, a, A) * rb(l, b, B));
            r.residuals(static_cast<Eigen::Index>(l) * s.cell_count() + cell) = res;
            if (r.worst_lambda < 0 || res > r.max_residual) {
              r.max_residual = res;
              r.worst_lambda = l;
              r.worst_cell = cell;
            }
          }
  }
  r.passes = r.max_residual <= tolerance;
  return r;
}

Behavior model_behavior(const CommonCauseModel& m) {
  const ResponseTable& ra = m.responses(Wing::Alice);
  const ResponseTable& rb = m.responses(Wing::Bob);
  return Behavior::tabulate(m.scenario(), [&](int a, int b, Outcome A, Outcome B) {
    double p = 0.0;
    for (int l = 0; l < m.lambda_count(); ++l)
      p += m.weights()(l) * ra(l, a, A) * rb(l, b, B);
    return p;
  });
}

CommonCauseModel quantum_common_cause(const quantum::QubitPairState<double>& state,
                                      const SettingAngles& angles,
                                      std::string label) {
  const Scenario s(static_cast<int>(angles.alice.size()),
                   static_cast<int>(angles.bob.size()));
  ResponseTable ra(1, s.settings_a());
  ResponseTable rb(1, s.settings_b());
  for (Outcome o : kOutcomes) {
    for (int a = 0; a < s.settings_a(); ++a)
      ra.set(0, a, o,
             quantum::single_wing_probability(
                 state, Wing::Alice,
                 quantum::PlanarSetting<double>(angles.alice[static_cast<std::size_t>(a)]), o));
    for (int b = 0; b < s.settings_b(); ++b)
      rb.set(0, b, o,
             quantum::single_wing_probability(
                 state, Wing::Bob,
                 quantum::PlanarSetting<double>(angles.bob[static_cast<std::size_t>(b)]), o));
  }
  std::vector<LambdaValue> lambdas{LambdaValue{std::move(label), state}};
  return CommonCauseModel(s, std::move(lambdas), Eigen::VectorXd::Ones(1),
                          std::move(ra), std::move(rb), angles);
}

ViolationWitness quantum_screening_violation(
    const quantum::PlanarSetting<double>& a,
    const quantum::PlanarSetting<double>& b) {
  const auto psi = quantum::singlet<double>();
  ViolationWitness w;
  w.joint = quantum::joint_probability(psi, a, b, Outcome::Plus, Outcome::Minus);
  w.alice_marginal =
      quantum::single_wing_probability(psi, Wing::Alice, a, Outcome::Plus);
  w.bob_marginal =
      quantum::single_wing_probability(psi, Wing::Bob, b, Outcome::Minus);
  w.product = w.alice_marginal * w.bob_marginal;
  w.residual = std::abs(w.joint - w.product);
  return w;
}

Behavior rb_game_behavior() {
  const Scenario s(1, 1);
  Eigen::VectorXd cells(4);
  cells(static_cast<Eigen::Index>(s.cell_index(0, 0, Outcome::Plus, Outcome::Plus))) = 0.0;
  cells(static_cast<Eigen::Index>(s.cell_index(0, 0, Outcome::Plus, Outcome::Minus))) = 0.5;
  cells(static_cast<Eigen::Index>(s.cell_index(0, 0, Outcome::Minus, Outcome::Plus))) = 0.5;
  cells(static_cast<Eigen::Index>(s.cell_index(0, 0, Outcome::Minus, Outcome::Minus))) = 0.0;
  return Behavior(s, std::move(cells));
}

CommonCauseModel rb_game_model() {
  const Scenario s(1, 1);
  std::vector<LambdaValue> lambdas{{"RB", DiscreteToken{"(R,B)"}},
                                   {"BR", DiscreteToken{"(B,R)"}}};
  ResponseTable ra(2, 1);
  ResponseTable rb(2, 1);
  ra.set_deterministic(0, 0, Outcome::Plus);
  rb.set_deterministic(0, 0, Outcome::Minus);
  ra.set_deterministic(1, 0, Outcome::Minus);
  rb.set_deterministic(1, 0, Outcome::Plus);
  Eigen::VectorXd w(2);
  w << 0.5, 0.5;
  return CommonCauseModel(s, std::move(lambdas), std::move(w), std::move(ra),
                          std::move(rb));
}

ConditionalJoint rb_game_conditional_joint() {
  const Scenario s(1, 1);
  auto point_mass = [&](Outcome A, Outcome B) {
    Eigen::VectorXd cells = Eigen::VectorXd::Zero(4);
    cells(static_cast<Eigen::Index>(s.cell_index(0, 0, A, B))) = 1.0;
    return Behavior(s, std::move(cells));
  };
  return ConditionalJoint(s, {point_mass(Outcome::Plus, Outcome::Minus),
                              point_mass(Outcome::Minus, Outcome::Plus)});
}

RbGameResolution rb_game_resolution() {
  CommonCauseModel model = rb_game_model();
  ScreeningReport report = screening_off_check(rb_game_conditional_joint(), model);
  return RbGameResolution{std::move(model), std::move(report),
                          unconditioned_residual(rb_game_behavior())};
}

}  // namespace lckit
