#include "lckit/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lckit {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::IndexOutOfRange: return "index-out-of-range";
    case ErrorKind::ScenarioTooSmall: return "scenario-too-small";
    case ErrorKind::ScenarioTooLarge: return "scenario-too-large";
    case ErrorKind::ShapeMismatch: return "shape-mismatch";
    case ErrorKind::InvalidScenario: return "invalid-scenario";
    case ErrorKind::InvalidBehavior: return "invalid-behavior";
    case ErrorKind::InvalidModel: return "invalid-model";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NonNormalizedState: return "non-normalized-state";
    case ErrorKind::SignalingInput: return "signaling-input";
    case ErrorKind::LpTooLarge: return "lp-too-large";
    case ErrorKind::ZeroProbabilitySetting: return "zero-probability-setting";
    case ErrorKind::Parse: return "parse-error";
  }
  return "unknown";
}

const char* to_string(Outcome o) noexcept {
  return o == Outcome::Plus ? "+1" : "-1";
}

Scenario::Scenario(int settings_a, int settings_b)
    : settings_a_(settings_a), settings_b_(settings_b) {
  if (settings_a < 1 || settings_b < 1)
    throw Error(ErrorKind::InvalidScenario,
                "scenario needs at least one setting per wing, got " +
                    std::to_string(settings_a) + "x" +
                    std::to_string(settings_b));
}

void Scenario::check_setting(Wing w, int index) const {
  if (index < 0 || index >= settings(w))
    throw Error(ErrorKind::IndexOutOfRange,
                std::string(w == Wing::Alice ? "Alice" : "Bob") +
                    " setting index " + std::to_string(index) +
                    " out of range [0," + std::to_string(settings(w)) + ")");
}

std::size_t Scenario::cell_index(int a, int b, Outcome A, Outcome B) const {
  check_setting(Wing::Alice, a);
  check_setting(Wing::Bob, b);
  return static_cast<std::size_t>(((a * settings_b_ + b) * 2 +
                                   outcome_index(A)) * 2 + outcome_index(B));
}

Behavior::Behavior(Scenario scenario, Eigen::VectorXd cells)
    : scenario_(scenario), cells_(std::move(cells)) {
  if (cells_.size() != scenario_.cell_count())
    throw Error(ErrorKind::ShapeMismatch,
                "behavior table has " + std::to_string(cells_.size()) +
                    " cells, scenario needs " +
                    std::to_string(scenario_.cell_count()));
}

std::string ValidationResult::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (violation) {
    case Violation::None:
      return "valid";
    case Violation::OutOfRange:
      os << "cell (" << setting_a << "," << setting_b << ","
         << to_string(*outcome_a) << "," << to_string(*outcome_b)
         << ") = " << value << " outside [0,1]";
      break;
    case Violation::Normalization:
      os << "setting pair (" << setting_a << "," << setting_b
         << ") sums to " << value << ", expected 1";
      break;
  }
  return os.str();
}

ValidationResult validate(const Behavior& b, double tolerance) {
  const Scenario& s = b.scenario();
  ValidationResult r;
  for (int a = 0; a < s.settings_a(); ++a) {
    for (int bb = 0; bb < s.settings_b(); ++bb) {
      double sum = 0.0;
      for (Outcome A : kOutcomes) {
        for (Outcome B : kOutcomes) {
          const double p = b(a, bb, A, B);
          if (!(p >= 0.0 && p <= 1.0)) {
            r.violation = ValidationResult::Violation::OutOfRange;
            r.setting_a = a;
            r.setting_b = bb;
            r.outcome_a = A;
            r.outcome_b = B;
            r.value = p;
            return r;
          }
          sum += p;
        }
      }
      if (!(std::abs(sum - 1.0) <= tolerance)) {
        r.violation = ValidationResult::Violation::Normalization;
        r.setting_a = a;
        r.setting_b = bb;
        r.value = sum;
        return r;
      }
    }
  }
  return r;
}

void require_valid(const Behavior& b, double tolerance) {
  const ValidationResult r = validate(b, tolerance);
  if (!r.valid()) throw Error(ErrorKind::InvalidBehavior, r.describe());
}

double marginal(const Behavior& b, Wing wing, Outcome outcome, int own_setting,
                int other_setting) {
  double p = 0.0;
  for (Outcome other : kOutcomes) {
    p += wing == Wing::Alice ? b(own_setting, other_setting, outcome, other)
                             : b(other_setting, own_setting, other, outcome);
  }
  return p;
}

double correlator(const Behavior& b, int setting_a, int setting_b) {
  double e = 0.0;
  for (Outcome A : kOutcomes)
    for (Outcome B : kOutcomes)
      e += sign(A) * sign(B) * b(setting_a, setting_b, A, B);
  return e;
}

namespace {

void check_chsh_settings(const Behavior& b, const ChshSettings& s) {
  const Scenario& sc = b.scenario();
  if (sc.settings_a() < 2 || sc.settings_b() < 2)
    throw Error(ErrorKind::ScenarioTooSmall,
                "CHSH needs at least two settings per wing");
  sc.check_setting(Wing::Alice, s.a0);
  sc.check_setting(Wing::Alice, s.a1);
  sc.check_setting(Wing::Bob, s.b0);
  sc.check_setting(Wing::Bob, s.b1);
}

}  // namespace

double chsh_form_value(const Behavior& b, const ChshSettings& s,
                       ChshForm form) {
  check_chsh_settings(b, s);
  const std::array<double, 4> e{correlator(b, s.a0, s.b0),
                                correlator(b, s.a0, s.b1),
                                correlator(b, s.a1, s.b0),
                                correlator(b, s.a1, s.b1)};
  double total = 0.0;
  for (int i = 0; i < 4; ++i) total += i == form.negated ? -e[i] : e[i];
  return form.sign * total;
}

double chsh_value(const Behavior& b, const ChshSettings& settings) {
  return chsh_form_value(b, settings, ChshForm{3, 1});
}

ChshWitness max_symmetrized_chsh(const Behavior& b,
                                 const ChshSettings& settings) {
  ChshWitness best;
  bool first = true;
  for (int sgn : {1, -1}) {
    for (int neg = 0; neg < 4; ++neg) {
      const ChshForm form{neg, sgn};
      const double v = chsh_form_value(b, settings, form);
      if (first || v > best.value) {
        best = ChshWitness{v, settings, form};
        first = false;
      }
    }
  }
  return best;
}

ChshWitness best_chsh(const Behavior& b) {
  const Scenario& s = b.scenario();
  if (s.settings_a() < 2 || s.settings_b() < 2)
    throw Error(ErrorKind::ScenarioTooSmall,
                "CHSH needs at least two settings per wing");
  ChshWitness best;
  bool first = true;
  for (int a0 = 0; a0 < s.settings_a(); ++a0)
    for (int a1 = a0 + 1; a1 < s.settings_a(); ++a1)
      for (int b0 = 0; b0 < s.settings_b(); ++b0)
        for (int b1 = b0 + 1; b1 < s.settings_b(); ++b1) {
          const ChshWitness w = max_symmetrized_chsh(b, {a0, a1, b0, b1});
          if (first || w.value > best.value) {
            best = w;
            first = false;
          }
        }
  return best;
}

NoSignalingReport no_signaling_check(const Behavior& b, double tolerance) {
  const Scenario& s = b.scenario();
  NoSignalingReport r;
  r.tolerance = tolerance;
  for (Outcome o : kOutcomes) {
    for (int a = 0; a < s.settings_a(); ++a) {
      for (int b0 = 0; b0 < s.settings_b(); ++b0)
        for (int b1 = b0 + 1; b1 < s.settings_b(); ++b1)
          r.max_residual_a = std::max(
              r.max_residual_a, std::abs(marginal(b, Wing::Alice, o, a, b0) -
                                         marginal(b, Wing::Alice, o, a, b1)));
    }
    for (int bb = 0; bb < s.settings_b(); ++bb) {
      for (int a0 = 0; a0 < s.settings_a(); ++a0)
        for (int a1 = a0 + 1; a1 < s.settings_a(); ++a1)
          r.max_residual_b = std::max(
              r.max_residual_b, std::abs(marginal(b, Wing::Bob, o, bb, a0) -
                                         marginal(b, Wing::Bob, o, bb, a1)));
    }
  }
  r.passes = r.max_residual_a <= tolerance && r.max_residual_b <= tolerance;
  return r;
}

double unconditioned_residual(const Behavior& b) {
  const Scenario& s = b.scenario();
  double worst = 0.0;
  for (int a = 0; a < s.settings_a(); ++a)
    for (int bb = 0; bb < s.settings_b(); ++bb)
      for (Outcome A : kOutcomes)
        for (Outcome B : kOutcomes) {
          const double product = marginal(b, Wing::Alice, A, a, bb) *
                                 marginal(b, Wing::Bob, B, bb, a);
          worst = std::max(worst, std::abs(b(a, bb, A, B) - product));
        }
  return worst;
}

Behavior flip_outcomes(const Behavior& b, Wing wing) {
  return Behavior::tabulate(
      b.scenario(), [&](int a, int bb, Outcome A, Outcome B) {
        return wing == Wing::Alice ? b(a, bb, flip(A), B)
                                   : b(a, bb, A, flip(B));
      });
}

Behavior uniform_behavior(const Scenario& s) {
  return Behavior(s, Eigen::VectorXd::Constant(s.cell_count(), 0.25));
}

}  // namespace lckit
