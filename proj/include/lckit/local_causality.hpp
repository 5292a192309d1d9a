#ifndef LCKIT_LOCAL_CAUSALITY_HPP
#define LCKIT_LOCAL_CAUSALITY_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lckit/behavior.hpp"
#include "lckit/quantum.hpp"

namespace lckit {

inline constexpr double kModelTolerance = 1e-12;
inline constexpr double kScreeningTolerance = 1e-10;

struct DiscreteToken {
  std::string text;
};

/// What a common cause carries: an opaque classical token, or a quantum
/// state whose per-lambda joints come from the quantum module.
using LambdaPayload = std::variant<DiscreteToken, quantum::QubitPairState<double>>;

struct LambdaValue {
  std::string label;
  LambdaPayload payload;

  bool is_quantum() const noexcept {
    return std::holds_alternative<quantum::QubitPairState<double>>(payload);
  }
};

/// P(outcome | setting, lambda) for one wing. Row per lambda, column
/// 2 * setting + outcome_index(outcome).
class ResponseTable {
 public:
  ResponseTable(int lambdas, int settings);
  ResponseTable(Eigen::MatrixXd probabilities, int settings);

  int lambdas() const noexcept { return static_cast<int>(p_.rows()); }
  int settings() const noexcept { return settings_; }
  const Eigen::MatrixXd& matrix() const noexcept { return p_; }

  double operator()(int lambda, int setting, Outcome o) const {
    return p_(lambda, 2 * setting + outcome_index(o));
  }
  void set(int lambda, int setting, Outcome o, double p) {
    p_(lambda, 2 * setting + outcome_index(o)) = p;
  }
  /// Deterministic response: probability 1 on `o`.
  void set_deterministic(int lambda, int setting, Outcome o) {
    set(lambda, setting, o, 1.0);
    set(lambda, setting, flip(o), 0.0);
  }

 private:
  Eigen::MatrixXd p_;
  int settings_;
};

/// Physical angles of each setting index, needed to evaluate quantum
/// lambdas.
struct SettingAngles {
  std::vector<double> alice;
  std::vector<double> bob;
};

/// Throws InvalidModel if labels repeat, a response distribution is off,
/// or quantum lambdas lack matching setting angles.
void check_lambda_structure(const Scenario& s,
                            const std::vector<LambdaValue>& lambdas,
                            const ResponseTable& responses_a,
                            const ResponseTable& responses_b,
                            const std::optional<SettingAngles>& angles,
                            double tolerance);

/// Finite common-cause model: weights P(lambda) and per-wing responses.
class CommonCauseModel {
 public:
  CommonCauseModel(Scenario scenario, std::vector<LambdaValue> lambdas,
                   Eigen::VectorXd weights, ResponseTable responses_a,
                   ResponseTable responses_b,
                   std::optional<SettingAngles> angles = std::nullopt,
                   double tolerance = kModelTolerance);

  const Scenario& scenario() const noexcept { return scenario_; }
  const std::vector<LambdaValue>& lambdas() const noexcept { return lambdas_; }
  int lambda_count() const noexcept { return static_cast<int>(lambdas_.size()); }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  const ResponseTable& responses(Wing w) const noexcept {
    return w == Wing::Alice ? responses_a_ : responses_b_;
  }
  const std::optional<SettingAngles>& angles() const noexcept {
    return angles_;
  }
  /// All response probabilities are exactly 0 or 1.
  bool is_deterministic() const;

 private:
  Scenario scenario_;
  std::vector<LambdaValue> lambdas_;
  Eigen::VectorXd weights_;
  ResponseTable responses_a_;
  ResponseTable responses_b_;
  std::optional<SettingAngles> angles_;
};

/// P(A,B|a,b,lambda), one table per lambda.
class ConditionalJoint {
 public:
  /// Every table must share the scenario and be a valid behavior.
  ConditionalJoint(Scenario scenario, std::vector<Behavior> per_lambda,
                   double tolerance = kNormalizationTolerance);

  const Scenario& scenario() const noexcept { return scenario_; }
  int lambda_count() const noexcept {
    return static_cast<int>(tables_.size());
  }
  const Behavior& operator[](int lambda) const {
    return tables_.at(static_cast<std::size_t>(lambda));
  }

 private:
  Scenario scenario_;
  std::vector<Behavior> tables_;
};

/// Per-lambda joints implied by the model's payloads: quantum lambdas are
/// evaluated with the quantum module at the model's setting angles,
/// discrete lambdas use the product of their responses.
ConditionalJoint induced_joint(const CommonCauseModel& m);

struct ScreeningReport {
  /// |P(A,B|a,b,lambda) - P(A|a,lambda) P(B|b,lambda)|, lambda major,
  /// then Scenario::cell_index.
  Eigen::VectorXd residuals;
  double max_residual = 0.0;
  int worst_lambda = -1;
  int worst_cell = -1;
  double tolerance = kScreeningTolerance;
  bool passes = true;

  /// Every residual is exactly zero.
  bool exact() const noexcept { return max_residual == 0.0; }
};

ScreeningReport screening_off_check(const ConditionalJoint& joint,
                                    const CommonCauseModel& m,
                                    double tolerance = kScreeningTolerance);

/// sum over lambda of P(lambda) P(A|a,lambda) P(B|b,lambda).
Behavior model_behavior(const CommonCauseModel& m);

/// Single-lambda model with lambda = |psi> and responses given by the
/// single-wing quantum probabilities.
CommonCauseModel quantum_common_cause(const quantum::QubitPairState<double>& state,
                                      const SettingAngles& angles,
                                      std::string label = "psi");

struct ViolationWitness {
  double joint = 0.0;           // P(+1,-1|a,b,psi)
  double alice_marginal = 0.0;  // P(+1|a,psi)
  double bob_marginal = 0.0;    // P(-1|b,psi)
  double product = 0.0;
  double residual = 0.0;
};

/// Screening-off test of the singlet as its own common cause.
ViolationWitness quantum_screening_violation(
    const quantum::PlanarSetting<double>& a,
    const quantum::PlanarSetting<double>& b);

// Red/blue particle game: one setting per wing (laboratories L1, L2),
// red is outcome +1 and blue is -1.

Behavior rb_game_behavior();
/// lambda in {(R,B), (B,R)} with weight 1/2 each, deterministic colors.
CommonCauseModel rb_game_model();
/// The per-lambda joint tables, written out cell by cell.
ConditionalJoint rb_game_conditional_joint();

struct RbGameResolution {
  CommonCauseModel model;
  ScreeningReport report;
  /// Screening residual of the game behavior when lambda is ignored.
  double unconditioned_residual = 0.0;
};

RbGameResolution rb_game_resolution();

}  // namespace lckit

#endif  // LCKIT_LOCAL_CAUSALITY_HPP
