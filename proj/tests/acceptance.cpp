// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "lckit/conspiracy.hpp"
#include "lckit/local_causality.hpp"
#include "lckit/local_polytope.hpp"
#include "lckit/quantum.hpp"
#include "lckit/random.hpp"
#include "oracles.hpp"

using namespace lckit;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Verdict& o) {
  std::printf("criterion %d %s: %s  [%s]\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
  if (!o.pass) ++failures;
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

quantum::PlanarSetting<double> at(double x) { return quantum::PlanarSetting<double>(x); }

std::vector<double> grid() {
  std::vector<double> g(100);
  for (int i = 0; i < 100; ++i) g[static_cast<std::size_t>(i)] = -2 * oracle::kPi + 4 * oracle::kPi * i / 99.0;
  return g;
}

Verdict equal_angle_pair() {
  const auto t0 = Clock::now();
  const auto psi = quantum::singlet<double>();
  double worst_joint = 0.0, worst_product = 0.0;
  for (double a : {0.0, 0.9, 2.2, 4.0}) {
    const double joint = quantum::joint_probability(psi, at(a), at(a), Outcome::Plus, Outcome::Minus);
    const double product = quantum::single_wing_probability(psi, Wing::Alice, at(a), Outcome::Plus) *
                           quantum::single_wing_probability(psi, Wing::Bob, at(a), Outcome::Minus);
    worst_joint = std::max(worst_joint, std::abs(joint - 0.5));
    worst_product = std::max(worst_product, std::abs(product - 0.25));
  }
  const double ms = ms_since(t0);
  Verdict o;
  o.pass = worst_joint <= 1e-12 && worst_product <= 1e-12 && ms < 1.0;
  o.detail = "joint dev " + fmt("%.2e", worst_joint) + ", product dev " + fmt("%.2e", worst_product) + ", " +
             fmt("%.3f", ms) + " ms";
  return o;
}

Verdict closed_form_grid() {
  const auto t0 = Clock::now();
  const auto psi = quantum::singlet<double>();
  const auto g = grid();
  double worst = 0.0;
  for (double a : g)
    for (double b : g) {
      const double p = quantum::joint_probability(psi, at(a), at(b), Outcome::Plus, Outcome::Minus);
      worst = std::max(worst, std::abs(p - oracle::singlet_joint(a, b, 1, -1)));
    }
  const double ms = ms_since(t0);
  return {worst <= 1e-12 && ms < 1000.0, "max dev " + fmt("%.2e", worst) + " over 100x100, " + fmt("%.1f", ms) + " ms"};
}

Verdict single_wing_grid() {
  const auto psi = quantum::singlet<double>();
  double worst = 0.0;
  for (double a : grid())
    for (Wing w : {Wing::Alice, Wing::Bob})
      for (Outcome o : kOutcomes)
        worst = std::max(worst, std::abs(quantum::single_wing_probability(psi, w, at(a), o) - 0.5));
  return {worst <= 1e-12, "max dev " + fmt("%.2e", worst)};
}

Verdict red_blue() {
  const RbGameResolution r = rb_game_resolution();
  bool all_zero = r.report.residuals.size() == 8;
  for (Eigen::Index i = 0; i < r.report.residuals.size(); ++i) all_zero = all_zero && r.report.residuals(i) == 0.0;
  return {all_zero && r.unconditioned_residual == 0.25,
          "conditioned max " + fmt("%g", r.report.max_residual) + " over " +
              std::to_string(r.report.residuals.size()) + " cells, unconditioned " +
              fmt("%g", r.unconditioned_residual)};
}

Verdict local_bound() {
  const Scenario s(2, 2);
  const auto vertices = enumerate_vertices(s);
  double best = -10.0;
  for (const auto& d : vertices) best = std::max(best, chsh_value(strategy_behavior(d, s)));
  const double hi = oracle::deterministic_chsh_range().second;
  return {vertices.size() == 16 && best == 2.0 && hi == 2.0,
          std::to_string(vertices.size()) + " vertices, max " + fmt("%g", best)};
}

Verdict quantum_violation() {
  const auto t0 = Clock::now();
  const double pi = oracle::kPi;
  const std::vector<double> aa{0.0, pi / 2}, bb{pi / 4, 3 * pi / 4};
  const Behavior q = quantum::behavior_from_angles<double>(quantum::singlet<double>(), aa, bb);
  const double chsh = best_chsh(q).value;
  const Locality full = membership(q).status;
  const std::vector<double> zero{0.0};
  const Locality single = membership(quantum::behavior_from_angles<double>(quantum::singlet<double>(), zero, zero)).status;
  const double ms = ms_since(t0);
  const double dev = std::abs(chsh - 2 * std::sqrt(2.0));
  return {dev <= 1e-9 && full == Locality::NonLocal && single == Locality::Local && ms < 1000.0,
          "CHSH " + fmt("%.12f", chsh) + ", " + to_string(full) + " / single pair " + to_string(single) + ", " +
              fmt("%.2f", ms) + " ms"};
}

Verdict property_suite() {
  random::Engine rng(random::seed_from_env());
  std::uniform_int_distribution<int> dim(1, 3), nl(1, 6);
  int bad_models = 0, bad_quantum = 0, bad_bayes = 0;
  double worst_residual = 0.0;
  const int n = 600;
  for (int i = 0; i < n; ++i) {
    const CommonCauseModel m = random::common_cause_model(rng, Scenario(dim(rng), dim(rng)), nl(rng));
    const Behavior b = model_behavior(m);
    const MembershipVerdict v = membership(b);
    worst_residual = std::max(worst_residual, v.max_cell_residual);
    if (!no_signaling_check(b).passes || v.status != Locality::Local || v.max_cell_residual > 1e-9) ++bad_models;
  }
  for (int i = 0; i < n; ++i) {
    const Behavior b = quantum::behavior_from_angles<double>(random::state(rng), random::angles(rng, dim(rng)),
                                                             random::angles(rng, dim(rng)));
    const NoSignalingReport r = no_signaling_check(b, 1e-10);
    if (!r.passes) ++bad_quantum;
  }
  for (int i = 0; i < n; ++i) {
    const SettingDependentModel m = random::setting_dependent_model(rng, Scenario(dim(rng), dim(rng)), nl(rng));
    if (!bayes_equivalence_check(m).agree()) ++bad_bayes;
  }
  return {bad_models == 0 && bad_quantum == 0 && bad_bayes == 0,
          std::to_string(n) + " models (" + std::to_string(bad_models) + " bad, worst residual " +
              fmt("%.1e", worst_residual) + "), " + std::to_string(n) + " quantum (" + std::to_string(bad_quantum) +
              " bad), " + std::to_string(n) + " Bayes (" + std::to_string(bad_bayes) + " disagree)"};
}

Verdict superdeterminism() {
  const Behavior q = quantum::chsh_optimal_singlet_behavior();
  const SettingDependentModel m = superdeterministic_reproduction(q);
  const double dev = (model_behavior(m).cells() - q.cells()).cwiseAbs().maxCoeff();
  const SIReport si = si_check(m);
  return {dev <= 1e-12 && !si.passes && si.max_residual >= 0.25,
          "reproduction dev " + fmt("%.2e", dev) + ", SI residual " + fmt("%.6f", si.max_residual)};
}

Verdict oracle_equivalence() {
  random::Engine rng(random::seed_from_env() ^ 0x9e3779b97f4a7c15ULL);
  int compared = 0, skipped = 0, disagree = 0, nonlocal = 0;
  for (int i = 0; i < 1500; ++i) {
    const Behavior b = random::chsh_test_behavior(rng);
    const std::array<double, 4> e{correlator(b, 0, 0), correlator(b, 0, 1), correlator(b, 1, 0), correlator(b, 1, 1)};
    const double margin = oracle::max_symmetrized(e) - 2.0;
    if (std::abs(margin) <= 1e-7) {
      ++skipped;
      continue;
    }
    ++compared;
    const bool lp_local = membership(b).status == Locality::Local;
    if (lp_local != (margin < 0)) ++disagree;
    if (margin > 0) ++nonlocal;
  }
  return {compared >= 1000 && disagree == 0,
          std::to_string(compared) + " compared (" + std::to_string(nonlocal) + " nonlocal), " +
              std::to_string(skipped) + " within margin, " + std::to_string(disagree) + " disagreements"};
}

}  // namespace

int main() {
  report(1, "equal-angle joint 1/2 vs product 1/4", equal_angle_pair());
  report(2, "singlet joint closed form on grid", closed_form_grid());
  report(3, "single-wing singlet probabilities 1/2", single_wing_grid());
  report(4, "red/blue game screening resolution", red_blue());
  report(5, "deterministic CHSH bound 2", local_bound());
  report(6, "quantum CHSH 2*sqrt(2) and NonLocal", quantum_violation());
  report(7, "random model property suite", property_suite());
  report(8, "superdeterministic reproduction breaks SI", superdeterminism());
  report(9, "LP verdict vs symmetrized CHSH oracle", oracle_equivalence());
  std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
