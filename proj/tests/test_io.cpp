#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <cstring>
#include <limits>

#include "lckit/io.hpp"
#include "lckit/quantum.hpp"
#include "lckit/random.hpp"

using namespace lckit;

namespace {

template <typename F>
ParseError parse_failure(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError(0, 0, "");
}

bool bit_equal(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return x.size() == y.size() &&
         std::memcmp(x.data(), y.data(), sizeof(double) * static_cast<std::size_t>(x.size())) == 0;
}

}  // namespace

TEST_CASE("format_exact round-trips") {
  for (double x : {0.0, 1.0, 0.1, 1.0 / 3.0, 0.07322330470336309, 5e-324,
                   std::numeric_limits<double>::max(), 0.5 + 1e-16}) {
    CHECK(std::strtod(io::format_exact(x).c_str(), nullptr) == x);
  }
  CHECK(io::format_exact(0.5) == "0.5");
  CHECK(io::format_report(2.0 * std::sqrt(2.0)) == "2.82842712475");
}

TEST_CASE("parse a behavior file") {
  const Behavior b = io::parse_behavior(
      "lckit-behavior 1\n"
      "# comment\n"
      "\n"
      "scenario 1 1\n"
      "cell 0 0 -1 -1 0\n"
      "cell 0 0 +1 +1 0\n"
      "cell 0 0 +1 -1 0.5\n"
      "cell 0 0 -1 +1 0.5\n");
  CHECK((b.cells() - rb_game_behavior().cells()).norm() == 0.0);
  CHECK(io::serialize_behavior(b) ==
        "lckit-behavior 1\nscenario 1 1\n"
        "cell 0 0 +1 +1 0\ncell 0 0 +1 -1 0.5\ncell 0 0 -1 +1 0.5\ncell 0 0 -1 -1 0\n");
}

TEST_CASE("behavior parse errors carry positions") {
  SUBCASE("bad header") {
    const ParseError e = parse_failure([] { io::parse_behavior("lckit-behaviour 1\n"); });
    CHECK(e.line() == 1);
    CHECK(e.column() == 1);
  }
  SUBCASE("bad number") {
    const ParseError e = parse_failure([] {
      io::parse_behavior("lckit-behavior 1\nscenario 1 1\ncell 0 0 +1 +1 x\n");
    });
    CHECK(e.line() == 3);
    CHECK(e.column() == 16);
  }
  SUBCASE("outcome label") {
    const ParseError e = parse_failure([] {
      io::parse_behavior("lckit-behavior 1\nscenario 1 1\ncell 0 0 0 +1 0\n");
    });
    CHECK(e.line() == 3);
    CHECK(e.column() == 10);
  }
  SUBCASE("setting out of range") {
    const ParseError e = parse_failure([] {
      io::parse_behavior("lckit-behavior 1\nscenario 1 1\ncell 0 3 +1 +1 0\n");
    });
    CHECK(e.line() == 3);
  }
  SUBCASE("duplicate and missing cells") {
    CHECK_THROWS_AS(io::parse_behavior("lckit-behavior 1\nscenario 1 1\ncell 0 0 +1 +1 0\ncell 0 0 +1 +1 0\n"),
                    ParseError);
    CHECK_THROWS_AS(io::parse_behavior("lckit-behavior 1\nscenario 1 1\ncell 0 0 +1 +1 1\n"), ParseError);
  }
  SUBCASE("cell before scenario") {
    CHECK_THROWS_AS(io::parse_behavior("lckit-behavior 1\ncell 0 0 +1 +1 1\n"), ParseError);
  }
  SUBCASE("empty input") { CHECK_THROWS_AS(io::parse_behavior(""), ParseError); }
}

TEST_CASE("parsing does not validate probabilities") {
  // validation is a separate, reportable step
  const Behavior b = io::parse_behavior(
      "lckit-behavior 1\nscenario 1 1\ncell 0 0 +1 +1 0.6\ncell 0 0 +1 -1 0.6\n"
      "cell 0 0 -1 +1 0\ncell 0 0 -1 -1 0\n");
  CHECK_FALSE(validate(b).valid());
}

TEST_CASE("property: serialize/parse is bit-exact") {
  random::Engine rng(808);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int trial = 0; trial < 300; ++trial) {
    const Behavior b = quantum::behavior_from_angles<double>(random::state(rng), random::angles(rng, dim(rng)),
                                                             random::angles(rng, dim(rng)));
    const std::string text = io::serialize_behavior(b);
    const Behavior back = io::parse_behavior(text);
    CHECK(back.scenario() == b.scenario());
    CHECK(bit_equal(back.cells(), b.cells()));
    CHECK(io::serialize_behavior(back) == text);
  }
}

TEST_CASE("model files") {
  SUBCASE("common-cause model with joints") {
    const io::ModelDocument d = io::parse_model(
        "lckit-model 1\n"
        "scenario 1 1\n"
        "lambda RB token (R,B)\n"
        "lambda BR token (B,R)\n"
        "weight RB 0.5\n"
        "weight BR 0.5\n"
        "response-a RB 0 1 0\n"
        "response-b RB 0 0 1\n"
        "response-a BR 0 0 1\n"
        "response-b BR 0 1 0\n");
    const CommonCauseModel m = d.common_cause_model();
    CHECK(m.lambda_count() == 2);
    CHECK(m.is_deterministic());
    CHECK((model_behavior(m).cells() - rb_game_behavior().cells()).norm() == 0.0);
    CHECK(screening_off_check(d.conditional_joint(), m).exact());
  }

  SUBCASE("quantum lambda defaults its responses") {
    const io::ModelDocument d = io::parse_model(
        "lckit-model 1\nscenario 1 1\nangles-a 0\nangles-b 0\n"
        "lambda psi state 0 0 0.7071067811865476 0 -0.7071067811865476 0 0 0\n"
        "weight psi 1\n");
    const CommonCauseModel m = d.common_cause_model();
    CHECK(m.lambdas()[0].is_quantum());
    CHECK(m.responses(Wing::Alice)(0, 0, Outcome::Plus) == doctest::Approx(0.5).epsilon(1e-12));
    const ScreeningReport r = screening_off_check(d.conditional_joint(), m);
    CHECK(r.max_residual == doctest::Approx(0.25).epsilon(1e-12));
  }

  SUBCASE("conditional weights") {
    const io::ModelDocument d = io::parse_model(
        "lckit-model 1\nscenario 1 2\n"
        "lambda p token p\nlambda m token m\n"
        "weight p 0 0 1\nweight m 0 0 0\nweight p 0 1 0\nweight m 0 1 1\n"
        "response-a p 0 1 0\nresponse-b p 0 1 0\nresponse-b p 1 1 0\n"
        "response-a m 0 0 1\nresponse-b m 0 0 1\nresponse-b m 1 0 1\n");
    CHECK(d.conditional_weights);
    CHECK_THROWS_AS(d.common_cause_model(), Error);
    const SettingDependentModel m = d.setting_dependent_model();
    CHECK(si_check(m).max_residual == 1.0);
  }

  SUBCASE("mixed weight forms are rejected") {
    const ParseError e = parse_failure([] {
      io::parse_model("lckit-model 1\nscenario 1 1\nlambda x token x\nweight x 1\nweight x 0 0 1\n");
    });
    CHECK(e.line() == 5);
  }

  SUBCASE("unknown lambda label") {
    const ParseError e = parse_failure([] {
      io::parse_model("lckit-model 1\nscenario 1 1\nlambda x token x\nweight y 1\n");
    });
    CHECK(e.line() == 4);
    CHECK(e.column() == 8);
  }

  SUBCASE("unknown directive") {
    CHECK_THROWS_AS(io::parse_model("lckit-model 1\nscenario 1 1\nfoo\n"), ParseError);
  }
}

TEST_CASE("model serialization round-trips") {
  random::Engine rng(909);
  for (int trial = 0; trial < 100; ++trial) {
    const Scenario s(1 + trial % 3, 1 + (trial / 3) % 3);
    const SettingDependentModel m = random::setting_dependent_model(rng, s, 1 + trial % 4, 0.5);
    const std::string text = io::serialize_model(m);
    const SettingDependentModel back = io::parse_model(text).setting_dependent_model();
    CHECK(bit_equal(model_behavior(back).cells(), model_behavior(m).cells()));
    CHECK(io::serialize_model(back) == text);
  }
  const std::string rb = io::serialize_model(rb_game_model());
  const CommonCauseModel back = io::parse_model(rb).common_cause_model();
  CHECK(io::serialize_model(back) == rb);

  // quantum lambdas keep their state
  const CommonCauseModel q = quantum_common_cause(quantum::singlet<double>(), SettingAngles{{0.0, 1.0}, {0.5}});
  const CommonCauseModel qb = io::parse_model(io::serialize_model(q)).common_cause_model();
  CHECK(qb.lambdas()[0].is_quantum());
  CHECK(bit_equal(model_behavior(qb).cells(), model_behavior(q).cells()));
}
