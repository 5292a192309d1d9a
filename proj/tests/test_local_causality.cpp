#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lckit/local_causality.hpp"
#include "lckit/local_polytope.hpp"
#include "lckit/random.hpp"
#include "oracles.hpp"

using namespace lckit;

namespace {

quantum::PlanarSetting<double> at(double x) { return quantum::PlanarSetting<double>(x); }

}  // namespace

TEST_CASE("model validation") {
  const Scenario s(1, 1);
  ResponseTable r(1, 1);
  r.set_deterministic(0, 0, Outcome::Plus);
  std::vector<LambdaValue> one{{"x", DiscreteToken{"x"}}};

  CHECK_NOTHROW(CommonCauseModel(s, one, Eigen::VectorXd::Ones(1), r, r));
  CHECK_THROWS_AS(CommonCauseModel(s, one, Eigen::VectorXd::Constant(1, 0.9), r, r), Error);
  CHECK_THROWS_AS(CommonCauseModel(s, one, Eigen::VectorXd::Constant(1, -1.0), r, r), Error);

  std::vector<LambdaValue> dup{{"x", DiscreteToken{"a"}}, {"x", DiscreteToken{"b"}}};
  ResponseTable r2(2, 1);
  r2.set_deterministic(0, 0, Outcome::Plus);
  r2.set_deterministic(1, 0, Outcome::Plus);
  CHECK_THROWS_AS(CommonCauseModel(s, dup, Eigen::VectorXd::Constant(2, 0.5), r2, r2), Error);

  ResponseTable bad(1, 1);
  bad.set(0, 0, Outcome::Plus, 0.7);
  bad.set(0, 0, Outcome::Minus, 0.7);
  CHECK_THROWS_AS(CommonCauseModel(s, one, Eigen::VectorXd::Ones(1), bad, r), Error);

  // quantum lambda without angles
  std::vector<LambdaValue> q{{"psi", quantum::singlet<double>()}};
  CHECK_THROWS_AS(CommonCauseModel(s, q, Eigen::VectorXd::Ones(1), r, r), Error);
}

TEST_CASE("red/blue game") {
  const Behavior b = rb_game_behavior();
  CHECK(b(0, 0, Outcome::Plus, Outcome::Minus) == 0.5);
  CHECK(b(0, 0, Outcome::Minus, Outcome::Plus) == 0.5);
  CHECK(b(0, 0, Outcome::Plus, Outcome::Plus) == 0.0);
  CHECK(b(0, 0, Outcome::Minus, Outcome::Minus) == 0.0);
  CHECK(marginal(b, Wing::Alice, Outcome::Plus, 0, 0) == 0.5);
  CHECK(marginal(b, Wing::Bob, Outcome::Minus, 0, 0) == 0.5);

  const RbGameResolution res = rb_game_resolution();
  CHECK(res.model.weights()(0) == 0.5);
  CHECK(res.model.weights()(1) == 0.5);
  CHECK(res.report.passes);
  CHECK(res.report.exact());
  CHECK(res.report.residuals.size() == 8);
  CHECK(res.unconditioned_residual == 0.25);
  CHECK((model_behavior(res.model).cells() - b.cells()).cwiseAbs().maxCoeff() == 0.0);

  // the two displayed factorizations for lambda = (R,B)
  const ConditionalJoint j = rb_game_conditional_joint();
  const ResponseTable& ra = res.model.responses(Wing::Alice);
  const ResponseTable& rb = res.model.responses(Wing::Bob);
  CHECK(j[0](0, 0, Outcome::Plus, Outcome::Minus) == 1.0);
  CHECK(ra(0, 0, Outcome::Plus) * rb(0, 0, Outcome::Minus) == 1.0);
  CHECK(j[0](0, 0, Outcome::Minus, Outcome::Plus) == 0.0);
  CHECK(ra(0, 0, Outcome::Minus) * rb(0, 0, Outcome::Plus) == 0.0);
}

TEST_CASE("single uniform lambda gives the uniform behavior") {
  const Scenario s(2, 3);
  ResponseTable ra(1, 2), rb(1, 3);
  for (int k = 0; k < 2; ++k) { ra.set(0, k, Outcome::Plus, 0.5); ra.set(0, k, Outcome::Minus, 0.5); }
  for (int k = 0; k < 3; ++k) { rb.set(0, k, Outcome::Plus, 0.5); rb.set(0, k, Outcome::Minus, 0.5); }
  const CommonCauseModel m(s, {{"u", DiscreteToken{"u"}}}, Eigen::VectorXd::Ones(1), ra, rb);
  CHECK((model_behavior(m).cells().array() == 0.25).all());
}

TEST_CASE("singlet as its own common cause fails screening-off") {
  const SettingAngles eq{{0.0}, {0.0}};
  const CommonCauseModel m = quantum_common_cause(quantum::singlet<double>(), eq);
  const ScreeningReport r = screening_off_check(induced_joint(m), m);
  CHECK_FALSE(r.passes);
  CHECK(r.max_residual == doctest::Approx(0.25).epsilon(1e-12));
  const std::size_t cell = m.scenario().cell_index(0, 0, Outcome::Plus, Outcome::Minus);
  CHECK(r.residuals(static_cast<Eigen::Index>(cell)) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("screening check rejects mismatched shapes") {
  const CommonCauseModel m = rb_game_model();
  const ConditionalJoint wrong(Scenario(1, 1), {rb_game_behavior()});
  CHECK_THROWS_AS(screening_off_check(wrong, m), Error);
  CHECK_THROWS_AS(ConditionalJoint(Scenario(1, 1), {uniform_behavior(Scenario(2, 1))}), Error);
  CHECK_THROWS_AS(ConditionalJoint(Scenario(1, 1), {Behavior(Scenario(1, 1), Eigen::VectorXd::Zero(4))}), Error);
}

TEST_CASE("quantum screening violation") {
  const double pi = oracle::kPi;
  const ViolationWitness eq = quantum_screening_violation(at(0), at(0));
  CHECK(eq.joint == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eq.alice_marginal == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eq.bob_marginal == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eq.residual == doctest::Approx(0.25).epsilon(1e-12));

  const ViolationWitness opp = quantum_screening_violation(at(0), at(pi));
  CHECK(std::abs(opp.joint) <= 1e-12);
  CHECK(opp.product == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(opp.residual == doctest::Approx(0.25).epsilon(1e-12));

  const ViolationWitness quarter = quantum_screening_violation(at(0), at(pi / 2));
  CHECK(quarter.joint == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::abs(quarter.residual) <= 1e-12);

  for (int i = 0; i < 100; ++i) {
    const double a = 0.07 * i, b = 2.3 - 0.05 * i;
    const double expected = std::abs(oracle::singlet_joint(a, b, 1, -1) - 0.25);
    CHECK(std::abs(quantum_screening_violation(at(a), at(b)).residual - expected) <= 1e-12);
  }
}

TEST_CASE("property: common-cause models are no-signaling") {
  random::Engine rng(101);
  std::uniform_int_distribution<int> dim(1, 3), nl(1, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    const CommonCauseModel m = random::common_cause_model(rng, Scenario(dim(rng), dim(rng)), nl(rng));
    const Behavior b = model_behavior(m);
    REQUIRE(validate(b).valid());
    CHECK(no_signaling_check(b).passes);
  }
}

TEST_CASE("property: deterministic models screen off exactly against strategy joints") {
  random::Engine rng(202);
  std::uniform_int_distribution<int> dim(1, 3), nl(1, 4);
  int deterministic = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Scenario s(dim(rng), dim(rng));
    const int n = nl(rng);
    const auto vertices = enumerate_vertices(s);
    std::uniform_int_distribution<std::size_t> pick(0, vertices.size() - 1);
    ResponseTable ra(n, s.settings_a()), rb(n, s.settings_b());
    std::vector<LambdaValue> lambdas;
    std::vector<Behavior> joints;
    for (int l = 0; l < n; ++l) {
      const DeterministicStrategy& d = vertices[pick(rng)];
      for (int a = 0; a < s.settings_a(); ++a) ra.set_deterministic(l, a, d.assign_a[static_cast<std::size_t>(a)]);
      for (int b = 0; b < s.settings_b(); ++b) rb.set_deterministic(l, b, d.assign_b[static_cast<std::size_t>(b)]);
      lambdas.push_back({"d" + std::to_string(l), DiscreteToken{"d"}});
      joints.push_back(strategy_behavior(d, s));
    }
    const CommonCauseModel m(s, lambdas, random::simplex_point(rng, n), ra, rb);
    REQUIRE(m.is_deterministic());
    const ScreeningReport r = screening_off_check(ConditionalJoint(s, joints), m);
    CHECK(r.exact());
    ++deterministic;
  }
  CHECK(deterministic == 400);
}
