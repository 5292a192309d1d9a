#include "lckit/repro.hpp"

#include <algorithm>
#include <cmath>

#include "lckit/conspiracy.hpp"
#include "lckit/local_causality.hpp"
#include "lckit/local_polytope.hpp"
#include "lckit/quantum.hpp"

namespace lckit {

double ReproEntry::residual() const noexcept {
  if (check == Check::AtLeast) return std::max(0.0, expected - computed);
  return std::abs(computed - expected);
}

bool ReproReport::passes() const noexcept {
  return std::all_of(entries.begin(), entries.end(),
                     [](const ReproEntry& e) { return e.passes(); });
}

const std::vector<std::string>& repro_cases() {
  static const std::vector<std::string> cases{"eq5", "eq30", "rbgame", "chsh", "superdet"};
  return cases;
}

namespace {

using Check = ReproEntry::Check;

ReproReport repro_eq5() {
  const quantum::PlanarSetting<double> a(0.0);
  const ViolationWitness w = quantum_screening_violation(a, a);
  return {"eq5",
          {{"joint", w.joint, 0.5, 1e-12, Check::Within},
           {"alice_marginal", w.alice_marginal, 0.5, 1e-12, Check::Within},
           {"bob_marginal", w.bob_marginal, 0.5, 1e-12, Check::Within},
           {"product", w.product, 0.25, 1e-12, Check::Within},
           {"screening_residual", w.residual, 0.25, 1e-12, Check::Within}}};
}

ReproReport repro_eq30() {
  const auto psi = quantum::singlet<double>();
  const int n = 100;
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = 2.0 * EIGEN_PI * i / n;
      const double b = 2.0 * EIGEN_PI * j / n;
      const double c = std::cos((a - b) / 2.0);
      const double p = quantum::joint_probability(
          psi, quantum::PlanarSetting<double>(a), quantum::PlanarSetting<double>(b),
          Outcome::Plus, Outcome::Minus);
      worst = std::max(worst, std::abs(p - 0.5 * c * c));
    }
  return {"eq30", {{"max_closed_form_deviation", worst, 0.0, 1e-12, Check::Within}}};
}

ReproReport repro_rbgame() {
  const RbGameResolution r = rb_game_resolution();
  return {"rbgame",
          {{"conditioned_screening_residual", r.report.max_residual, 0.0, 0.0, Check::Within},
           {"unconditioned_residual", r.unconditioned_residual, 0.25, 0.0, Check::Within},
           {"model_behavior_deviation",
            (model_behavior(r.model).cells() - rb_game_behavior().cells()).cwiseAbs().maxCoeff(),
            0.0, 0.0, Check::Within}}};
}

ReproReport repro_chsh() {
  const QuantumViolationReport q = quantum_violation_demo();
  return {"chsh",
          {{"local_bound", q.local_bound, 2.0, 0.0, Check::Within},
           {"quantum_chsh", q.chsh, 2.0 * std::sqrt(2.0), 1e-9, Check::Within},
           {"nonlocal", q.verdict.status == Locality::NonLocal ? 1.0 : 0.0, 1.0, 0.0,
            Check::Within},
           {"single_pair_local", q.single_pair_verdict.status == Locality::Local ? 1.0 : 0.0,
            1.0, 0.0, Check::Within}}};
}

ReproReport repro_superdet() {
  const Behavior target = quantum::chsh_optimal_singlet_behavior();
  const SettingDependentModel m = superdeterministic_reproduction(target);
  const double dev = (model_behavior(m).cells() - target.cells()).cwiseAbs().maxCoeff();
  return {"superdet",
          {{"reproduction_deviation", dev, 0.0, 1e-12, Check::Within},
           {"si_residual", si_check(m).max_residual, 0.25, 0.0, Check::AtLeast},
           {"target_nonlocal", membership(target).status == Locality::NonLocal ? 1.0 : 0.0,
            1.0, 0.0, Check::Within}}};
}

}  // namespace

std::optional<ReproReport> run_repro(std::string_view case_id) {
  if (case_id == "eq5") return repro_eq5();
  if (case_id == "eq30") return repro_eq30();
  if (case_id == "rbgame") return repro_rbgame();
  if (case_id == "chsh") return repro_chsh();
  if (case_id == "superdet") return repro_superdet();
  return std::nullopt;
}

}  // namespace lckit
