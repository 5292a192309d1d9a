#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lckit/quantum.hpp"
#include "lckit/random.hpp"
#include "oracles.hpp"

using namespace lckit;
using namespace lckit::quantum;

namespace {

PlanarSetting<double> at(double x) { return PlanarSetting<double>(x); }

}  // namespace

TEST_CASE("singlet amplitudes") {
  const auto psi = singlet<double>();
  const auto& v = psi.amplitudes();
  CHECK(v(0) == std::complex<double>(0.0));
  CHECK(std::abs(v(1) - std::sqrt(0.5)) <= 1e-15);
  CHECK(std::abs(v(2) + std::sqrt(0.5)) <= 1e-15);
  CHECK(v(3) == std::complex<double>(0.0));
  CHECK(v.squaredNorm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((psi.swapped().amplitudes() + v).norm() == 0.0);
}

TEST_CASE("non-normalized amplitudes are rejected") {
  PairAmplitudes<double> amps;
  amps << 1.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(QubitPairState<double>{amps}, Error);
  try {
    QubitPairState<double>{amps};
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonNormalizedState);
  }
}

TEST_CASE("planar settings are reduced mod 2 pi") {
  CHECK(at(-0.5).angle() == doctest::Approx(2 * oracle::kPi - 0.5).epsilon(1e-15));
  CHECK(at(4 * oracle::kPi + 1.0).angle() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(at(-1e-300).angle() >= 0.0);
  CHECK(at(-1e-300).angle() < 2 * oracle::kPi);
  CHECK_THROWS_AS(at(std::nan("")), Error);
  CHECK_THROWS_AS(at(INFINITY), Error);
}

TEST_CASE("spin eigenstates follow the half-angle formulas") {
  for (double a : {0.0, 0.3, 1.7, 3.1, 5.9}) {
    const auto plus = spin_eigenstate(at(a), Outcome::Plus).amplitudes;
    const auto minus = spin_eigenstate(at(a), Outcome::Minus).amplitudes;
    CHECK(std::abs(plus(0) - std::cos(a / 2)) <= 1e-14);
    CHECK(std::abs(plus(1) - std::sin(a / 2)) <= 1e-14);
    CHECK(std::abs(minus(0) + std::sin(a / 2)) <= 1e-14);
    CHECK(std::abs(minus(1) - std::cos(a / 2)) <= 1e-14);
    CHECK(std::abs(plus.dot(minus)) <= 1e-15);
  }
}

TEST_CASE("singlet joint probabilities") {
  const auto psi = singlet<double>();
  for (double a : {0.0, 0.4, 2.0, 4.5}) {
    CHECK(joint_probability(psi, at(a), at(a), Outcome::Plus, Outcome::Minus) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(joint_probability(psi, at(a), at(a), Outcome::Plus, Outcome::Plus)) <= 1e-12);
  }
  // angles beyond 2 pi: reduction flips the eigenvector sign only
  CHECK(joint_probability(psi, at(0.3 + 2 * oracle::kPi), at(1.1), Outcome::Plus, Outcome::Minus) ==
        doctest::Approx(oracle::singlet_joint(0.3, 1.1, 1, -1)).epsilon(1e-12));
}

TEST_CASE("closed form on a 100-point grid") {
  const auto psi = singlet<double>();
  for (int i = 0; i < 100; ++i) {
    const double a = -3.0 + 0.0613 * i;
    const double b = 1.7 - 0.0419 * i;
    for (Outcome A : kOutcomes)
      for (Outcome B : kOutcomes)
        CHECK(std::abs(joint_probability(psi, at(a), at(b), A, B) -
                       oracle::singlet_joint(a, b, sign(A), sign(B))) <= 1e-12);
  }
}

TEST_CASE("rotational invariance: singlet probabilities depend on a - b only") {
  const auto psi = singlet<double>();
  for (double d : {0.0, 0.5, 1.9, 3.3})
    for (double shift : {0.2, 1.4, 2.8, 6.0})
      for (Outcome A : kOutcomes)
        for (Outcome B : kOutcomes)
          CHECK(std::abs(joint_probability(psi, at(shift + d), at(shift), A, B) -
                         joint_probability(psi, at(d), at(0.0), A, B)) <= 1e-12);
}

TEST_CASE("single-wing probabilities") {
  const auto psi = singlet<double>();
  for (double a : {0.0, 1.0, 2.5, 6.1}) {
    CHECK(single_wing_probability(psi, Wing::Alice, at(a), Outcome::Plus) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(single_wing_probability(psi, Wing::Bob, at(a), Outcome::Minus) == doctest::Approx(0.5).epsilon(1e-12));
  }
  Spinor<double> up, down;
  up << 1.0, 0.0;
  down << 0.0, 1.0;
  const auto product = QubitPairState<double>::product(up, down);
  CHECK(single_wing_probability(product, Wing::Alice, at(0.0), Outcome::Plus) == 1.0);
  CHECK(single_wing_probability(product, Wing::Bob, at(0.0), Outcome::Minus) == 1.0);
}

TEST_CASE("property: normalization and marginal consistency over random states") {
  random::Engine rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const auto psi = random::state(rng);
    const auto angles = random::angles(rng, 3);
    const auto a = at(angles[0]);
    const auto b0 = at(angles[1]);
    const auto b1 = at(angles[2]);
    double total = 0.0;
    for (Outcome A : kOutcomes) {
      double sum0 = 0.0, sum1 = 0.0;
      for (Outcome B : kOutcomes) {
        const double p = joint_probability(psi, a, b0, A, B);
        CHECK(p >= 0.0);
        total += p;
        sum0 += p;
        sum1 += joint_probability(psi, a, b1, A, B);
      }
      const double single = single_wing_probability(psi, Wing::Alice, a, A);
      CHECK(std::abs(sum0 - single) <= 1e-12);
      CHECK(std::abs(sum1 - single) <= 1e-12);
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("behavior_from_state") {
  const std::vector<double> zero{0.0};
  const Behavior eq = behavior_from_angles<double>(singlet<double>(), zero, zero);
  CHECK(std::abs(eq(0, 0, Outcome::Plus, Outcome::Plus)) <= 1e-15);
  CHECK(eq(0, 0, Outcome::Plus, Outcome::Minus) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eq(0, 0, Outcome::Minus, Outcome::Plus) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(eq(0, 0, Outcome::Minus, Outcome::Minus)) <= 1e-15);
  CHECK(validate(eq).valid());

  const std::vector<double> none;
  CHECK_THROWS_AS(behavior_from_angles<double>(singlet<double>(), none, zero), Error);

  // product states factorize cell by cell
  random::Engine rng(5);
  Spinor<double> sa, sb;
  sa << std::complex<double>(0.6, 0.0), std::complex<double>(0.0, 0.8);
  sb << std::complex<double>(std::sqrt(0.5), 0.0), std::complex<double>(-0.5, 0.5);
  const auto prod = QubitPairState<double>::product(sa, sb);
  const auto aa = random::angles(rng, 2);
  const auto bb = random::angles(rng, 2);
  const Behavior pb = behavior_from_angles<double>(prod, aa, bb);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (Outcome A : kOutcomes)
        for (Outcome B : kOutcomes)
          CHECK(std::abs(pb(i, j, A, B) -
                         single_wing_probability(prod, Wing::Alice, at(aa[static_cast<std::size_t>(i)]), A) *
                             single_wing_probability(prod, Wing::Bob, at(bb[static_cast<std::size_t>(j)]), B)) <=
                1e-12);
}

TEST_CASE("long double instantiation agrees with the closed form") {
  const auto psi = singlet<long double>();
  const PlanarSetting<long double> a(0.25L), b(1.5L);
  const long double p = joint_probability(psi, a, b, Outcome::Plus, Outcome::Minus);
  const long double c = std::cos((0.25L - 1.5L) / 2);
  CHECK(std::abs(p - 0.5L * c * c) <= 1e-17L);
}
