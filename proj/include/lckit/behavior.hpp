#ifndef LCKIT_BEHAVIOR_HPP
#define LCKIT_BEHAVIOR_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "lckit/error.hpp"

namespace lckit {

inline constexpr double kNormalizationTolerance = 1e-12;
inline constexpr double kNoSignalingTolerance = 1e-10;

/// Measurement outcome. Both wings use the labels +1 and -1.
enum class Outcome : int { Plus = 1, Minus = -1 };

inline constexpr std::array<Outcome, 2> kOutcomes{Outcome::Plus,
                                                  Outcome::Minus};

constexpr int sign(Outcome o) noexcept { return static_cast<int>(o); }
constexpr int outcome_index(Outcome o) noexcept {
  return o == Outcome::Plus ? 0 : 1;
}
constexpr Outcome flip(Outcome o) noexcept {
  return o == Outcome::Plus ? Outcome::Minus : Outcome::Plus;
}
const char* to_string(Outcome o) noexcept;

enum class Wing { Alice, Bob };

/// Number of measurement settings on each wing.
class Scenario {
 public:
  Scenario(int settings_a, int settings_b);

  int settings_a() const noexcept { return settings_a_; }
  int settings_b() const noexcept { return settings_b_; }
  int settings(Wing w) const noexcept {
    return w == Wing::Alice ? settings_a_ : settings_b_;
  }
  int setting_pairs() const noexcept { return settings_a_ * settings_b_; }
  int cell_count() const noexcept { return 4 * setting_pairs(); }

  /// Flat index of cell (a, b, A, B): setting pair major, then A, then B.
  /// Throws IndexOutOfRange.
  std::size_t cell_index(int a, int b, Outcome A, Outcome B) const;
  void check_setting(Wing w, int index) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;

 private:
  int settings_a_;
  int settings_b_;
};

/// Joint outcome table P(A,B|a,b). Construction only checks the shape;
/// validate() decides whether the numbers form a behavior.
class Behavior {
 public:
  Behavior(Scenario scenario, Eigen::VectorXd cells);

  /// Builds a behavior by evaluating f(a, b, A, B) on every cell.
  template <typename F>
  static Behavior tabulate(const Scenario& s, F&& f) {
    Eigen::VectorXd cells(s.cell_count());
    for (int a = 0; a < s.settings_a(); ++a)
      for (int b = 0; b < s.settings_b(); ++b)
        for (Outcome A : kOutcomes)
          for (Outcome B : kOutcomes)
            cells(static_cast<Eigen::Index>(s.cell_index(a, b, A, B))) =
                f(a, b, A, B);
    return Behavior(s, std::move(cells));
  }

  const Scenario& scenario() const noexcept { return scenario_; }
  const Eigen::VectorXd& cells() const noexcept { return cells_; }

  double operator()(int a, int b, Outcome A, Outcome B) const {
    return cells_(static_cast<Eigen::Index>(scenario_.cell_index(a, b, A, B)));
  }

 private:
  Scenario scenario_;
  Eigen::VectorXd cells_;
};

struct ValidationResult {
  enum class Violation { None, OutOfRange, Normalization };

  Violation violation = Violation::None;
  int setting_a = -1;
  int setting_b = -1;
  std::optional<Outcome> outcome_a;
  std::optional<Outcome> outcome_b;
  /// Offending cell value or setting-pair sum.
  double value = 0.0;

  bool valid() const noexcept { return violation == Violation::None; }
  std::string describe() const;
};

/// Checks cell ranges and per-setting-pair normalization, reporting the
/// first violation in cell order.
ValidationResult validate(const Behavior& b,
                          double tolerance = kNormalizationTolerance);

/// Throws InvalidBehavior with the validation message if b is invalid.
void require_valid(const Behavior& b,
                   double tolerance = kNormalizationTolerance);

double marginal(const Behavior& b, Wing wing, Outcome outcome, int own_setting,
                int other_setting);

/// E(a,b) = sum over A,B of A*B*P(A,B|a,b).
double correlator(const Behavior& b, int setting_a, int setting_b);

struct ChshSettings {
  int a0 = 0;
  int a1 = 1;
  int b0 = 0;
  int b1 = 1;
};

/// S = E(a0,b0) + E(a0,b1) + E(a1,b0) - E(a1,b1).
double chsh_value(const Behavior& b, const ChshSettings& settings = {});

/// One member of the CHSH family: the four correlators summed with the
/// term `negated` (0..3 for (a0b0, a0b1, a1b0, a1b1)) subtracted, times
/// an overall sign.
struct ChshForm {
  int negated = 3;
  int sign = 1;
};

double chsh_form_value(const Behavior& b, const ChshSettings& settings,
                       ChshForm form);

struct ChshWitness {
  double value = 0.0;
  ChshSettings settings;
  ChshForm form;
};

/// Max over the 8 symmetrized CHSH functionals for fixed settings.
ChshWitness max_symmetrized_chsh(const Behavior& b,
                                 const ChshSettings& settings = {});

/// Max over every choice of distinct setting pairs and all 8 forms.
ChshWitness best_chsh(const Behavior& b);

struct NoSignalingReport {
  double max_residual_a = 0.0;
  double max_residual_b = 0.0;
  double tolerance = kNoSignalingTolerance;
  bool passes = true;
};

NoSignalingReport no_signaling_check(const Behavior& b,
                                     double tolerance = kNoSignalingTolerance);

/// max over cells of |P(A,B|a,b) - P(A|a,b) P(B|a,b)|: the screening
/// residual of a behavior with no common cause conditioned on.
double unconditioned_residual(const Behavior& b);

/// Relabels outcomes A -> -A on the given wing.
Behavior flip_outcomes(const Behavior& b, Wing wing);

Behavior uniform_behavior(const Scenario& s);

}  // namespace lckit

#endif  // LCKIT_BEHAVIOR_HPP
