#include "lckit/random.hpp"

#include <cstdlib>
#include <string>

#include "lckit/local_polytope.hpp"

namespace lckit::random {

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("LCKIT_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    return fallback;
  }
}

Eigen::VectorXd simplex_point(Engine& rng, int n) {
  std::exponential_distribution<double> exp(1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = exp(rng);
  return v / v.sum();
}

quantum::QubitPairState<double> state(Engine& rng) {
  std::normal_distribution<double> g;
  quantum::PairAmplitudes<double> amps;
  for (int k = 0; k < 4; ++k) amps(k) = {g(rng), g(rng)};
  return quantum::QubitPairState<double>(amps / amps.norm());
}

std::vector<double> angles(Engine& rng, int count) {
  std::uniform_real_distribution<double> u(-4.0 * EIGEN_PI, 4.0 * EIGEN_PI);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (double& x : out) x = u(rng);
  return out;
}

namespace {

/// Random response table; some entries are snapped to deterministic
/// values so that vertices of the polytope are exercised too.
ResponseTable responses(Engine& rng, int lambdas, int settings) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ResponseTable r(lambdas, settings);
  for (int l = 0; l < lambdas; ++l)
    for (int k = 0; k < settings; ++k) {
      double p = u(rng);
      const double snap = u(rng);
      if (snap < 0.15) p = 0.0;
      else if (snap < 0.3) p = 1.0;
      r.set(l, k, Outcome::Plus, p);
      r.set(l, k, Outcome::Minus, 1.0 - p);
    }
  return r;
}

std::vector<LambdaValue> labels(int n) {
  std::vector<LambdaValue> out;
  for (int l = 0; l < n; ++l)
    out.push_back({"l" + std::to_string(l), DiscreteToken{"t" + std::to_string(l)}});
  return out;
}

}  // namespace

CommonCauseModel common_cause_model(Engine& rng, const Scenario& s, int lambdas) {
  return CommonCauseModel(s, labels(lambdas), simplex_point(rng, lambdas),
                          responses(rng, lambdas, s.settings_a()),
                          responses(rng, lambdas, s.settings_b()));
}

SettingDependentModel setting_dependent_model(Engine& rng, const Scenario& s,
                                              int lambdas, double dependence) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd w(lambdas, s.setting_pairs());
  if (u(rng) < dependence) {
    for (int k = 0; k < s.setting_pairs(); ++k) w.col(k) = simplex_point(rng, lambdas);
  } else {
    w = simplex_point(rng, lambdas).replicate(1, s.setting_pairs());
  }
  return SettingDependentModel(s, labels(lambdas), std::move(w),
                               responses(rng, lambdas, s.settings_a()),
                               responses(rng, lambdas, s.settings_b()));
}

Behavior pr_box(int x, int y, int z) {
  return Behavior::tabulate(Scenario(2, 2), [&](int a, int b, Outcome A, Outcome B) {
    const int parity = (a * b + x * a + y * b + z) % 2;
    const int want = parity == 0 ? 1 : -1;
    return sign(A) * sign(B) == want ? 0.5 : 0.0;
  });
}

Behavior chsh_test_behavior(Engine& rng, double max_pr_weight) {
  const Scenario s(2, 2);
  const auto vertices = enumerate_vertices(s);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> bit(0, 1);
  // sparse local part: a few vertices only, so behaviors reach the facets
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vertices.size()));
  std::uniform_int_distribution<int> pick(0, static_cast<int>(vertices.size()) - 1);
  std::uniform_int_distribution<int> support(1, 6);
  const int k = support(rng);
  const Eigen::VectorXd mix = simplex_point(rng, k);
  for (int i = 0; i < k; ++i) w(pick(rng)) += mix(i);
  const Behavior local = mixture_behavior(s, vertices, w);
  const Behavior box = pr_box(bit(rng), bit(rng), bit(rng));
  const double q = max_pr_weight * u(rng);
  return Behavior(s, (1.0 - q) * local.cells() + q * box.cells());
}

}  // namespace lckit::random
