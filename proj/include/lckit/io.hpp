#ifndef LCKIT_IO_HPP
#define LCKIT_IO_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lckit/behavior.hpp"
#include "lckit/conspiracy.hpp"
#include "lckit/local_causality.hpp"

// Text formats read and written by the command-line tool.
//
// Behavior file:
//
//     lckit-behavior 1
//     scenario <settings_a> <settings_b>
//     cell <a> <b> <A> <B> <probability>
//     ...
//
// Outcomes are written +1 / -1. Every cell appears exactly once. Blank
// lines and lines starting with '#' are ignored. The canonical form, which
// serialize_behavior() writes, has the cells in (a, b, A, B) order with +1
// before -1, single spaces, '\n' line ends and each probability in the
// shortest decimal form that reads back to the same double; parsing and
// re-serializing a canonical file reproduces it byte for byte.
//
// Model file:
//
//     lckit-model 1
//     scenario <settings_a> <settings_b>
//     angles-a <radians>...                      (needed by quantum lambdas)
//     angles-b <radians>...
//     lambda <label> token <text>
//     lambda <label> state <re0> <im0> <re1> <im1> <re2> <im2> <re3> <im3>
//     weight <label> <p>                         P(lambda)
//     weight <label> <a> <b> <p>                 P(lambda|a,b)
//     response-a <label> <a> <p(+1)> <p(-1)>
//     response-b <label> <b> <p(+1)> <p(-1)>
//     joint <label> <a> <b> <A> <B> <p>          P(A,B|a,b,lambda)
//
// A file uses one weight form throughout. Quantum lambdas may omit their
// responses (they default to the single-wing quantum probabilities) and
// their joints (computed from the state). Joint lines are optional; a
// lambda either lists all its joint cells or none.

namespace lckit::io {

Behavior parse_behavior(std::string_view text);
std::string serialize_behavior(const Behavior& b);

Behavior read_behavior_file(const std::string& path);
void write_behavior_file(const std::string& path, const Behavior& b);

struct ModelDocument {
  Scenario scenario{1, 1};
  std::vector<LambdaValue> lambdas;
  /// Exactly one of these is set.
  std::optional<Eigen::VectorXd> weights;
  std::optional<Eigen::MatrixXd> conditional_weights;
  ResponseTable responses_a{0, 1};
  ResponseTable responses_b{0, 1};
  std::optional<SettingAngles> angles;
  /// Explicit per-lambda joints, keyed by lambda index.
  std::map<int, Behavior> joints;

  /// Throws InvalidModel if the file uses conditional weights.
  CommonCauseModel common_cause_model() const;
  /// Lifts P(lambda) when the file uses unconditional weights.
  SettingDependentModel setting_dependent_model() const;
  /// Explicit joints where given, otherwise induced_joint's choice.
  ConditionalJoint conditional_joint() const;
};

ModelDocument parse_model(std::string_view text);
ModelDocument read_model_file(const std::string& path);

std::string serialize_model(const CommonCauseModel& m);
std::string serialize_model(const SettingDependentModel& m);

/// Shortest round-trip decimal form of a double.
std::string format_exact(double x);
/// 12 significant digits, as used in reports.
std::string format_report(double x);

std::string read_text_file(const std::string& path);

}  // namespace lckit::io

#endif  // LCKIT_IO_HPP
