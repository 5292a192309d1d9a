// lckit: command-line front end for behaviors, common-cause models and
// local-polytope membership.
//
// Machine output goes to stdout, one key=value per line (or one JSON object
// per line with --format jsonl). Numbers carry 12 significant digits.
//
// Exit codes: 0 pass / Local, 1 check failed, 2 invalid input or usage,
// 3 NonLocal (membership only).

#include <chrono>
#include <ctime>
#include <iostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lckit/behavior.hpp"
#include "lckit/conspiracy.hpp"
#include "lckit/io.hpp"
#include "lckit/local_causality.hpp"
#include "lckit/local_polytope.hpp"
#include "lckit/quantum.hpp"
#include "lckit/random.hpp"
#include "lckit/repro.hpp"

namespace {

using namespace lckit;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNonLocal = 3;

enum class Format { Kv, Jsonl };

struct GlobalOptions {
  std::optional<double> tolerance;
  Format format = Format::Kv;
  bool verbose = false;

  double tol(double fallback) const { return tolerance.value_or(fallback); }
};

/// Ordered key/value record printed in the selected format.
class Record {
 public:
  using Value = std::variant<std::string, double, long, bool>;

  Record& add(std::string key, Value v) {
    fields_.emplace_back(std::move(key), std::move(v));
    return *this;
  }

  void print(Format f, std::ostream& os) const {
    if (f == Format::Kv) {
      for (const auto& [k, v] : fields_) os << k << "=" << text(v) << "\n";
      return;
    }
    nlohmann::ordered_json j;
    for (const auto& [k, v] : fields_) {
      if (const auto* s = std::get_if<std::string>(&v)) j[k] = *s;
      else if (const auto* d = std::get_if<double>(&v)) j[k] = std::stod(io::format_report(*d));
      else if (const auto* n = std::get_if<long>(&v)) j[k] = *n;
      else j[k] = std::get<bool>(v);
    }
    os << j.dump() << "\n";
  }

 private:
  static std::string text(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    if (const auto* d = std::get_if<double>(&v)) return io::format_report(*d);
    if (const auto* n = std::get_if<long>(&v)) return std::to_string(*n);
    return std::get<bool>(v) ? "true" : "false";
  }

  std::vector<std::pair<std::string, Value>> fields_;
};

void verbose_note(const GlobalOptions& g, const std::string& command) {
  if (!g.verbose) return;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%S", std::localtime(&now));
  std::cerr << "[" << stamp << "] lckit " << command << "\n";
}

std::string cell_name(const Scenario& s, int cell) {
  const int pair = cell / 4;
  return std::to_string(pair / s.settings_b()) + "," + std::to_string(pair % s.settings_b()) +
         "," + ((cell / 2) % 2 == 0 ? "+1" : "-1") + "," + (cell % 2 == 0 ? "+1" : "-1");
}

std::string form_name(const ChshForm& f) {
  // e.g. "-(E00-E01+E10+E11)"
  static const char* terms[] = {"E00", "E01", "E10", "E11"};
  std::string out = f.sign > 0 ? "+(" : "-(";
  for (int k = 0; k < 4; ++k) {
    if (k > 0 || k == f.negated) out += k == f.negated ? "-" : "+";
    out += terms[k];
  }
  return out + ")";
}

int cmd_validate(const GlobalOptions& g, const std::string& path) {
  const Behavior b = io::read_behavior_file(path);
  const double tol = g.tol(kNormalizationTolerance);
  const ValidationResult v = validate(b, tol);
  Record r;
  r.add("command", std::string("validate"))
      .add("settings_a", long{b.scenario().settings_a()})
      .add("settings_b", long{b.scenario().settings_b()})
      .add("valid", v.valid())
      .add("tolerance", tol);
  if (!v.valid()) r.add("violation", v.describe());
  r.print(g.format, std::cout);
  return v.valid() ? kExitPass : kExitFail;
}

Behavior load_valid_behavior(const std::string& path) {
  Behavior b = io::read_behavior_file(path);
  require_valid(b);
  return b;
}

int cmd_no_signaling(const GlobalOptions& g, const std::string& path) {
  const Behavior b = load_valid_behavior(path);
  const NoSignalingReport ns = no_signaling_check(b, g.tol(kNoSignalingTolerance));
  Record()
      .add("command", std::string("no-signaling"))
      .add("max_residual_a", ns.max_residual_a)
      .add("max_residual_b", ns.max_residual_b)
      .add("tolerance", ns.tolerance)
      .add("passes", ns.passes)
      .print(g.format, std::cout);
  return ns.passes ? kExitPass : kExitFail;
}

int cmd_check_lc(const GlobalOptions& g, const std::string& path) {
  const io::ModelDocument doc = io::read_model_file(path);
  const CommonCauseModel m = doc.common_cause_model();
  const ScreeningReport rep = screening_off_check(doc.conditional_joint(), m,
                                                  g.tol(kScreeningTolerance));
  Record r;
  r.add("command", std::string("check-lc"))
      .add("lambdas", long{m.lambda_count()})
      .add("max_residual", rep.max_residual);
  if (rep.worst_lambda >= 0)
    r.add("worst_lambda", m.lambdas()[static_cast<std::size_t>(rep.worst_lambda)].label)
        .add("worst_cell", cell_name(m.scenario(), rep.worst_cell));
  r.add("exact", rep.exact())
      .add("unconditioned_residual", unconditioned_residual(model_behavior(m)))
      .add("tolerance", rep.tolerance)
      .add("passes", rep.passes)
      .print(g.format, std::cout);
  return rep.passes ? kExitPass : kExitFail;
}

int cmd_membership(const GlobalOptions& g, const std::string& path) {
  const Behavior b = io::read_behavior_file(path);
  const MembershipVerdict v = membership(b, g.tol(kMembershipTolerance));
  Record r;
  r.add("command", std::string("membership"))
      .add("status", std::string(to_string(v.status)))
      .add("residual", v.max_cell_residual)
      .add("infeasibility", v.infeasibility);
  if (v.certificate) {
    const Certificate& c = *v.certificate;
    r.add("certificate_kind", std::string(c.kind == Certificate::Kind::Chsh ? "chsh" : "farkas"))
        .add("certificate_value", c.value)
        .add("local_bound", c.local_bound);
    if (c.chsh) r.add("chsh_form", form_name(c.chsh->form));
  } else {
    r.add("certificate_value", 0.0);
  }
  r.add("tolerance", v.tolerance).print(g.format, std::cout);
  return v.status == Locality::Local ? kExitPass : kExitNonLocal;
}

int cmd_chsh(const GlobalOptions& g, const std::string& path, const std::vector<int>& settings) {
  const Behavior b = load_valid_behavior(path);
  ChshSettings s;
  if (!settings.empty()) {
    if (settings.size() != 4)
      throw Error(ErrorKind::InvalidArgument, "--settings takes four indices a0 a1 b0 b1");
    s = {settings[0], settings[1], settings[2], settings[3]};
  }
  const double value = chsh_value(b, s);
  const ChshWitness best = best_chsh(b);
  Record()
      .add("command", std::string("chsh"))
      .add("chsh", value)
      .add("best_chsh", best.value)
      .add("best_settings", std::to_string(best.settings.a0) + "," + std::to_string(best.settings.a1) +
                                "," + std::to_string(best.settings.b0) + "," +
                                std::to_string(best.settings.b1))
      .add("best_form", form_name(best.form))
      .add("local_bound", local_bound_chsh(Scenario(2, 2)).value)
      .add("violates", best.value - 2.0 > g.tol(kMembershipTolerance))
      .print(g.format, std::cout);
  return kExitPass;
}

int cmd_si_check(const GlobalOptions& g, const std::string& path) {
  const io::ModelDocument doc = io::read_model_file(path);
  const SettingDependentModel m = doc.setting_dependent_model();
  const double tol = g.tol(kIndependenceTolerance);
  const SIReport si = si_check(m, tol);
  const BayesEquivalenceReport bayes = bayes_equivalence_check(m, tol);
  Record r;
  r.add("command", std::string("si-check")).add("max_residual", si.max_residual);
  if (si.worst_lambda >= 0)
    r.add("worst_lambda", m.lambdas()[static_cast<std::size_t>(si.worst_lambda)].label);
  r.add("bayes_lambda_given_settings", bayes.lambda_given_settings_residual)
      .add("bayes_settings_given_lambda", bayes.settings_given_lambda_residual)
      .add("bayes_agree", bayes.agree())
      .add("tolerance", tol)
      .add("passes", si.passes)
      .print(g.format, std::cout);
  return si.passes ? kExitPass : kExitFail;
}

int cmd_superdet(const GlobalOptions& g, const std::string& path, const std::string& out) {
  const Behavior b = load_valid_behavior(path);
  const SettingDependentModel m = superdeterministic_reproduction(b);
  const double dev = (model_behavior(m).cells() - b.cells()).cwiseAbs().maxCoeff();
  const SIReport si = si_check(m, g.tol(kIndependenceTolerance));
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + out + "'");
    f << io::serialize_model(m);
  }
  Record()
      .add("command", std::string("superdet"))
      .add("lambdas", long{m.lambda_count()})
      .add("reproduction_residual", dev)
      .add("si_residual", si.max_residual)
      .add("si_passes", si.passes)
      .add("tolerance", si.tolerance)
      .print(g.format, std::cout);
  return dev <= kNormalizationTolerance ? kExitPass : kExitFail;
}

int cmd_quantum_behavior(const GlobalOptions& g, const std::vector<double>& angles_a,
                         const std::vector<double>& angles_b, const std::vector<double>& state,
                         const std::string& out) {
  if (angles_a.empty() || angles_b.empty())
    throw Error(ErrorKind::InvalidArgument, "angle lists must be nonempty");
  quantum::QubitPairState<double> psi = quantum::singlet<double>();
  if (!state.empty()) {
    if (state.size() != 8)
      throw Error(ErrorKind::InvalidArgument, "--state takes 8 numbers (re,im of 4 amplitudes)");
    quantum::PairAmplitudes<double> amps;
    for (int k = 0; k < 4; ++k) amps(k) = {state[2 * static_cast<std::size_t>(k)],
                                           state[2 * static_cast<std::size_t>(k) + 1]};
    psi = quantum::QubitPairState<double>(amps);
  }
  const Behavior b = quantum::behavior_from_angles<double>(psi, angles_a, angles_b);
  if (out.empty()) {
    std::cout << io::serialize_behavior(b);
    return kExitPass;
  }
  io::write_behavior_file(out, b);
  Record()
      .add("command", std::string("quantum-behavior"))
      .add("settings_a", long{b.scenario().settings_a()})
      .add("settings_b", long{b.scenario().settings_b()})
      .add("output", out)
      .print(g.format, std::cout);
  return kExitPass;
}

int cmd_repro(const GlobalOptions& g, const std::string& id) {
  const auto report = run_repro(id);
  if (!report) {
    std::string known;
    for (const auto& c : repro_cases()) known += (known.empty() ? "" : ", ") + c;
    std::cerr << "error: unknown repro case '" << id << "' (known: " << known << ")\n";
    return kExitInvalid;
  }
  Record r;
  r.add("command", std::string("repro")).add("case", report->case_id);
  for (const ReproEntry& e : report->entries) {
    r.add(e.name + ".computed", e.computed)
        .add(e.name + ".expected", e.expected)
        .add(e.name + ".residual", e.residual())
        .add(e.name + ".tolerance", e.tolerance)
        .add(e.name + ".pass", e.passes());
  }
  r.add("pass", report->passes()).print(g.format, std::cout);
  return report->passes() ? kExitPass : kExitFail;
}

/// Randomized property checks over the library, seeded by LCKIT_SEED.
int cmd_selftest(const GlobalOptions& g, int count) {
  const std::uint64_t seed = random::seed_from_env();
  random::Engine rng(seed);
  long failures = 0;
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_int_distribution<int> nl(1, 5);

  long models = 0;
  for (int i = 0; i < count; ++i) {
    const Scenario s(dim(rng), dim(rng));
    const CommonCauseModel m = random::common_cause_model(rng, s, nl(rng));
    const Behavior b = model_behavior(m);
    const MembershipVerdict v = membership(b);
    if (!no_signaling_check(b).passes || v.status != Locality::Local ||
        v.max_cell_residual > kMembershipTolerance)
      ++failures;
    ++models;
  }
  long states = 0;
  for (int i = 0; i < count; ++i) {
    const auto psi = random::state(rng);
    const Behavior b = quantum::behavior_from_angles<double>(
        psi, random::angles(rng, dim(rng)), random::angles(rng, dim(rng)));
    if (!no_signaling_check(b).passes) ++failures;
    ++states;
  }
  long oracle = 0;
  for (int i = 0; i < count; ++i) {
    const Behavior b = random::chsh_test_behavior(rng);
    const double margin = max_symmetrized_chsh(b).value - 2.0;
    if (std::abs(margin) <= 1e-7) continue;
    const bool lp_local = membership(b).status == Locality::Local;
    if (lp_local != (margin < 0)) ++failures;
    ++oracle;
  }
  Record()
      .add("command", std::string("selftest"))
      .add("seed", static_cast<long>(seed))
      .add("models", models)
      .add("quantum_behaviors", states)
      .add("oracle_cases", oracle)
      .add("failures", failures)
      .add("passes", failures == 0)
      .print(g.format, std::cout);
  return failures == 0 ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lckit: local causality, screening-off and local-polytope membership"};
  app.require_subcommand(1);
  GlobalOptions g;
  std::string format = "kv";
  app.add_option("--tolerance", g.tolerance, "Override the command's default tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"kv", "jsonl"}));
  app.add_flag("--verbose", g.verbose, "Log a timestamped note to stderr");

  std::string file;
  std::string out;
  std::string case_id;
  std::vector<int> settings;
  std::vector<double> angles_a;
  std::vector<double> angles_b;
  std::vector<double> state;
  int count = 500;

  auto* validate_cmd = app.add_subcommand("validate", "Check a behavior file's probabilities");
  validate_cmd->add_option("file", file, "Behavior file")->required();
  auto* ns_cmd = app.add_subcommand("no-signaling", "Check marginal independence of the distant setting");
  ns_cmd->add_option("file", file, "Behavior file")->required();
  auto* lc_cmd = app.add_subcommand("check-lc", "Screening-off check of a common-cause model");
  lc_cmd->add_option("file", file, "Model file")->required();
  auto* mem_cmd = app.add_subcommand("membership", "Local polytope membership via LP");
  mem_cmd->add_option("file", file, "Behavior file")->required();
  auto* chsh_cmd = app.add_subcommand("chsh", "CHSH value of a behavior");
  chsh_cmd->add_option("file", file, "Behavior file")->required();
  chsh_cmd->add_option("--settings", settings, "Setting indices a0 a1 b0 b1")->expected(4);
  auto* si_cmd = app.add_subcommand("si-check", "Statistical independence of a model's lambda weights");
  si_cmd->add_option("file", file, "Model file")->required();
  auto* sd_cmd = app.add_subcommand("superdet", "Setting-dependent reproduction of a behavior");
  sd_cmd->add_option("file", file, "Behavior file")->required();
  sd_cmd->add_option("-o,--output", out, "Write the model file here");
  auto* qb_cmd = app.add_subcommand("quantum-behavior", "Tabulate a two-qubit behavior over angle grids");
  // CLI11 would read an empty element as 0
  const CLI::Validator non_empty(
      [](std::string& v) { return v.empty() ? std::string("empty angle") : std::string(); }, "");
  qb_cmd->add_option("--angles-a", angles_a, "Alice's angles in radians")
      ->delimiter(',')->required()->check(non_empty);
  qb_cmd->add_option("--angles-b", angles_b, "Bob's angles in radians")
      ->delimiter(',')->required()->check(non_empty);
  qb_cmd->add_option("--state", state, "Amplitudes re0,im0,...,re3,im3 (default singlet)")->delimiter(',');
  qb_cmd->add_option("-o,--output", out, "Output behavior file (stdout if omitted)");
  auto* repro_cmd = app.add_subcommand("repro", "Run a reproduction case");
  repro_cmd->add_option("case", case_id, "eq5, eq30, rbgame, chsh or superdet")->required();
  auto* self_cmd = app.add_subcommand("selftest", "");
  self_cmd->group("");
  self_cmd->add_option("--count", count, "Instances per property")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }
  g.format = format == "jsonl" ? Format::Jsonl : Format::Kv;

  CLI::App* cmd = app.get_subcommands().front();
  verbose_note(g, cmd->get_name());
  try {
    if (cmd == validate_cmd) return cmd_validate(g, file);
    if (cmd == ns_cmd) return cmd_no_signaling(g, file);
    if (cmd == lc_cmd) return cmd_check_lc(g, file);
    if (cmd == mem_cmd) return cmd_membership(g, file);
    if (cmd == chsh_cmd) return cmd_chsh(g, file, settings);
    if (cmd == si_cmd) return cmd_si_check(g, file);
    if (cmd == sd_cmd) return cmd_superdet(g, file, out);
    if (cmd == qb_cmd) return cmd_quantum_behavior(g, angles_a, angles_b, state, out);
    if (cmd == repro_cmd) return cmd_repro(g, case_id);
    if (cmd == self_cmd) return cmd_selftest(g, count);
  } catch (const ParseError& e) {
    std::cerr << "error: " << file << ":" << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}
