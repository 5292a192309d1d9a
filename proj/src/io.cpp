#include "lckit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace lckit::io {

namespace {

struct Token {
  std::string_view text;
  int column;
};

struct Line {
  int number;
  std::vector<Token> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++number;
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) ++i;
      if (i >= raw.size()) break;
      if (line.tokens.empty() && raw[i] == '#') break;
      const std::size_t start = i;
      while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t') ++i;
      line.tokens.push_back({raw.substr(start, i - start), static_cast<int>(start) + 1});
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] void fail(const Line& line, const Token& tok, const std::string& msg) {
  throw ParseError(line.number, tok.column, msg);
}

[[noreturn]] void fail_at(int line, int column, const std::string& msg) {
  throw ParseError(line, column, msg);
}

void expect_arity(const Line& line, std::size_t n) {
  if (line.tokens.size() != n) {
    const Token& where = line.tokens.size() > n ? line.tokens[n] : line.tokens.back();
    fail(line, where,
         "'" + std::string(line.tokens[0].text) + "' expects " + std::to_string(n - 1) +
             " fields, found " + std::to_string(line.tokens.size() - 1));
  }
}

int parse_int(const Line& line, const Token& tok) {
  int v = 0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    fail(line, tok, "expected an integer, found '" + std::string(tok.text) + "'");
  return v;
}

double parse_double(const Line& line, const Token& tok) {
  double v = 0.0;
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    fail(line, tok, "expected a finite number, found '" + std::string(tok.text) + "'");
  return v;
}

Outcome parse_outcome(const Line& line, const Token& tok) {
  if (tok.text == "+1" || tok.text == "1") return Outcome::Plus;
  if (tok.text == "-1") return Outcome::Minus;
  fail(line, tok, "expected outcome +1 or -1, found '" + std::string(tok.text) + "'");
}

int parse_setting(const Line& line, const Token& tok, int count) {
  const int v = parse_int(line, tok);
  if (v < 0 || v >= count)
    fail(line, tok,
         "setting index " + std::to_string(v) + " out of range [0," +
             std::to_string(count) + ")");
  return v;
}

void expect_header(const std::vector<Line>& lines, std::string_view magic) {
  if (lines.empty()) fail_at(1, 1, "empty document, expected '" + std::string(magic) + " 1'");
  const Line& h = lines[0];
  if (h.tokens[0].text != magic)
    fail(h, h.tokens[0], "expected header '" + std::string(magic) + " 1'");
  expect_arity(h, 2);
  if (h.tokens[1].text != "1")
    fail(h, h.tokens[1], "unsupported format version '" + std::string(h.tokens[1].text) + "'");
}

Scenario parse_scenario_line(const std::vector<Line>& lines) {
  if (lines.size() < 2)
    fail_at(lines.back().number + 1, 1, "missing 'scenario' line");
  const Line& l = lines[1];
  if (l.tokens[0].text != "scenario") fail(l, l.tokens[0], "expected 'scenario' line");
  expect_arity(l, 3);
  const int sa = parse_int(l, l.tokens[1]);
  const int sb = parse_int(l, l.tokens[2]);
  if (sa < 1) fail(l, l.tokens[1], "settings_a must be at least 1");
  if (sb < 1) fail(l, l.tokens[2], "settings_b must be at least 1");
  return Scenario(sa, sb);
}

struct CellTable {
  Eigen::VectorXd cells;
  std::vector<bool> seen;

  explicit CellTable(const Scenario& s)
      : cells(Eigen::VectorXd::Zero(s.cell_count())),
        seen(static_cast<std::size_t>(s.cell_count()), false) {}
};

/// Reads fields a b A B p starting at token `first` into the table.
void read_cell(const Line& line, std::size_t first, const Scenario& s, CellTable& t) {
  const int a = parse_setting(line, line.tokens[first], s.settings_a());
  const int b = parse_setting(line, line.tokens[first + 1], s.settings_b());
  const Outcome A = parse_outcome(line, line.tokens[first + 2]);
  const Outcome B = parse_outcome(line, line.tokens[first + 3]);
  const double p = parse_double(line, line.tokens[first + 4]);
  const std::size_t idx = s.cell_index(a, b, A, B);
  if (t.seen[idx]) fail(line, line.tokens[first], "duplicate cell");
  t.seen[idx] = true;
  t.cells(static_cast<Eigen::Index>(idx)) = p;
}

std::string describe_cell(const Scenario& s, std::size_t idx) {
  const int pair = static_cast<int>(idx / 4);
  const int A = static_cast<int>(idx / 2) % 2;
  const int B = static_cast<int>(idx) % 2;
  return "(" + std::to_string(pair / s.settings_b()) + "," +
         std::to_string(pair % s.settings_b()) + "," + (A == 0 ? "+1" : "-1") + "," +
         (B == 0 ? "+1" : "-1") + ")";
}

}  // namespace

std::string format_exact(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string format_report(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Behavior parse_behavior(std::string_view text) {
  const std::vector<Line> lines = tokenize(text);
  expect_header(lines, "lckit-behavior");
  const Scenario s = parse_scenario_line(lines);
  CellTable table(s);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens[0].text != "cell")
      fail(l, l.tokens[0], "unknown record '" + std::string(l.tokens[0].text) + "'");
    expect_arity(l, 6);
    read_cell(l, 1, s, table);
  }
  for (std::size_t idx = 0; idx < table.seen.size(); ++idx)
    if (!table.seen[idx])
      fail_at(lines.back().number + 1, 1, "missing cell " + describe_cell(s, idx));
  return Behavior(s, std::move(table.cells));
}

std::string serialize_behavior(const Behavior& b) {
  const Scenario& s = b.scenario();
  std::string out = "lckit-behavior 1\nscenario " + std::to_string(s.settings_a()) +
                    " " + std::to_string(s.settings_b()) + "\n";
  for (int a = 0; a < s.settings_a(); ++a)
    for (int bb = 0; bb < s.settings_b(); ++bb)
      for (Outcome A : kOutcomes)
        for (Outcome B : kOutcomes) {
          out += "cell " + std::to_string(a) + " " + std::to_string(bb) + " " +
                 to_string(A) + " " + to_string(B) + " " +
                 format_exact(b(a, bb, A, B)) + "\n";
        }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Behavior read_behavior_file(const std::string& path) {
  return parse_behavior(read_text_file(path));
}

void write_behavior_file(const std::string& path, const Behavior& b) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << serialize_behavior(b);
}

// ---------------------------------------------------------------------------
// Model documents

namespace {

struct LambdaEntry {
  int declared_line = 0;
  std::vector<bool> response_a_seen;
  std::vector<bool> response_b_seen;
  std::optional<CellTable> joint;
};

}  // namespace

ModelDocument parse_model(std::string_view text) {
  const std::vector<Line> lines = tokenize(text);
  expect_header(lines, "lckit-model");
  ModelDocument doc;
  doc.scenario = parse_scenario_line(lines);
  const Scenario& s = doc.scenario;

  std::vector<LambdaEntry> entries;
  std::map<std::string, int, std::less<>> index;
  std::vector<std::optional<double>> weight_single;
  std::vector<std::vector<std::optional<double>>> weight_cond;
  enum class WeightForm { Unknown, Single, Conditional } form = WeightForm::Unknown;
  int form_line = 0;
  std::vector<double> angles_a;
  std::vector<double> angles_b;
  bool have_angles_a = false;
  bool have_angles_b = false;
  std::vector<Eigen::VectorXd> resp_a;
  std::vector<Eigen::VectorXd> resp_b;

  auto lookup = [&](const Line& l, const Token& tok) {
    const auto it = index.find(tok.text);
    if (it == index.end())
      fail(l, tok, "undeclared lambda '" + std::string(tok.text) + "'");
    return it->second;
  };

  for (std::size_t i = 2; i < lines.size(); ++i) {
    const Line& l = lines[i];
    const std::string_view kind = l.tokens[0].text;
    if (kind == "angles-a" || kind == "angles-b") {
      const bool alice = kind == "angles-a";
      bool& have = alice ? have_angles_a : have_angles_b;
      std::vector<double>& dst = alice ? angles_a : angles_b;
      if (have) fail(l, l.tokens[0], "duplicate '" + std::string(kind) + "' line");
      expect_arity(l, 1 + static_cast<std::size_t>(alice ? s.settings_a() : s.settings_b()));
      for (std::size_t k = 1; k < l.tokens.size(); ++k) dst.push_back(parse_double(l, l.tokens[k]));
      have = true;
    } else if (kind == "lambda") {
      if (l.tokens.size() < 3) expect_arity(l, 4);
      const std::string label(l.tokens[1].text);
      if (index.count(label)) fail(l, l.tokens[1], "duplicate lambda label '" + label + "'");
      const std::string_view type = l.tokens[2].text;
      if (type == "token") {
        expect_arity(l, 4);
        doc.lambdas.push_back({label, DiscreteToken{std::string(l.tokens[3].text)}});
      } else if (type == "state") {
        expect_arity(l, 11);
        quantum::PairAmplitudes<double> amps;
        for (int k = 0; k < 4; ++k)
          amps(k) = {parse_double(l, l.tokens[3 + 2 * k]), parse_double(l, l.tokens[4 + 2 * k])};
        try {
          doc.lambdas.push_back({label, quantum::QubitPairState<double>(amps)});
        } catch (const Error& e) {
          fail(l, l.tokens[3], e.what());
        }
      } else {
        fail(l, l.tokens[2], "lambda payload must be 'token' or 'state'");
      }
      index.emplace(label, static_cast<int>(entries.size()));
      LambdaEntry e;
      e.declared_line = l.number;
      e.response_a_seen.assign(static_cast<std::size_t>(s.settings_a()), false);
      e.response_b_seen.assign(static_cast<std::size_t>(s.settings_b()), false);
      entries.push_back(std::move(e));
      weight_single.emplace_back();
      weight_cond.emplace_back(static_cast<std::size_t>(s.setting_pairs()));
      resp_a.push_back(Eigen::VectorXd::Zero(2 * s.settings_a()));
      resp_b.push_back(Eigen::VectorXd::Zero(2 * s.settings_b()));
    } else if (kind == "weight") {
      if (l.tokens.size() != 3 && l.tokens.size() != 5) expect_arity(l, 3);
      const WeightForm this_form = l.tokens.size() == 3 ? WeightForm::Single : WeightForm::Conditional;
      if (form == WeightForm::Unknown) {
        form = this_form;
        form_line = l.number;
      } else if (form != this_form) {
        fail(l, l.tokens[0],
             "weight form differs from line " + std::to_string(form_line) +
                 "; use either P(lambda) or P(lambda|a,b) throughout");
      }
      const int lam = lookup(l, l.tokens[1]);
      if (this_form == WeightForm::Single) {
        auto& slot = weight_single[static_cast<std::size_t>(lam)];
        if (slot) fail(l, l.tokens[1], "duplicate weight");
        slot = parse_double(l, l.tokens[2]);
      } else {
        const int a = parse_setting(l, l.tokens[2], s.settings_a());
        const int b = parse_setting(l, l.tokens[3], s.settings_b());
        auto& slot = weight_cond[static_cast<std::size_t>(lam)]
                                [static_cast<std::size_t>(a * s.settings_b() + b)];
        if (slot) fail(l, l.tokens[1], "duplicate weight");
        slot = parse_double(l, l.tokens[4]);
      }
    } else if (kind == "response-a" || kind == "response-b") {
      expect_arity(l, 5);
      const bool alice = kind == "response-a";
      const int lam = lookup(l, l.tokens[1]);
      const int k = parse_setting(l, l.tokens[2], alice ? s.settings_a() : s.settings_b());
      LambdaEntry& e = entries[static_cast<std::size_t>(lam)];
      auto& seen = alice ? e.response_a_seen : e.response_b_seen;
      if (seen[static_cast<std::size_t>(k)]) fail(l, l.tokens[2], "duplicate response");
      seen[static_cast<std::size_t>(k)] = true;
      Eigen::VectorXd& r = (alice ? resp_a : resp_b)[static_cast<std::size_t>(lam)];
      r(2 * k) = parse_double(l, l.tokens[3]);
      r(2 * k + 1) = parse_double(l, l.tokens[4]);
    } else if (kind == "joint") {
      expect_arity(l, 7);
      const int lam = lookup(l, l.tokens[1]);
      LambdaEntry& e = entries[static_cast<std::size_t>(lam)];
      if (!e.joint) e.joint.emplace(s);
      read_cell(l, 2, s, *e.joint);
    } else if (kind == "scenario") {
      fail(l, l.tokens[0], "duplicate 'scenario' line");
    } else {
      fail(l, l.tokens[0], "unknown record '" + std::string(kind) + "'");
    }
  }

  const int end_line = lines.back().number + 1;
  if (entries.empty()) fail_at(end_line, 1, "model declares no lambda values");
  if (have_angles_a != have_angles_b)
    fail_at(end_line, 1, "give both 'angles-a' and 'angles-b' or neither");
  if (have_angles_a) doc.angles = SettingAngles{angles_a, angles_b};
  if (form == WeightForm::Unknown) fail_at(end_line, 1, "model has no weight lines");

  const int n = static_cast<int>(entries.size());
  if (form == WeightForm::Single) {
    Eigen::VectorXd w(n);
    for (int lam = 0; lam < n; ++lam) {
      const auto& slot = weight_single[static_cast<std::size_t>(lam)];
      if (!slot)
        fail_at(entries[static_cast<std::size_t>(lam)].declared_line, 1,
                "lambda '" + doc.lambdas[static_cast<std::size_t>(lam)].label + "' has no weight");
      w(lam) = *slot;
    }
    doc.weights = std::move(w);
  } else {
    Eigen::MatrixXd w(n, s.setting_pairs());
    for (int lam = 0; lam < n; ++lam)
      for (int k = 0; k < s.setting_pairs(); ++k) {
        const auto& slot = weight_cond[static_cast<std::size_t>(lam)][static_cast<std::size_t>(k)];
        if (!slot)
          fail_at(entries[static_cast<std::size_t>(lam)].declared_line, 1,
                  "lambda '" + doc.lambdas[static_cast<std::size_t>(lam)].label +
                      "' lacks a weight for setting pair (" + std::to_string(k / s.settings_b()) +
                      "," + std::to_string(k % s.settings_b()) + ")");
        w(lam, k) = *slot;
      }
    doc.conditional_weights = std::move(w);
  }

  doc.responses_a = ResponseTable(n, s.settings_a());
  doc.responses_b = ResponseTable(n, s.settings_b());
  for (int lam = 0; lam < n; ++lam) {
    const LambdaEntry& e = entries[static_cast<std::size_t>(lam)];
    const LambdaValue& lv = doc.lambdas[static_cast<std::size_t>(lam)];
    for (Wing w : {Wing::Alice, Wing::Bob}) {
      const auto& seen = w == Wing::Alice ? e.response_a_seen : e.response_b_seen;
      const std::size_t count = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));
      ResponseTable& dst = w == Wing::Alice ? doc.responses_a : doc.responses_b;
      const char* wing = w == Wing::Alice ? "response-a" : "response-b";
      if (count == seen.size()) {
        const Eigen::VectorXd& r = (w == Wing::Alice ? resp_a : resp_b)[static_cast<std::size_t>(lam)];
        for (int k = 0; k < s.settings(w); ++k) {
          dst.set(lam, k, Outcome::Plus, r(2 * k));
          dst.set(lam, k, Outcome::Minus, r(2 * k + 1));
        }
      } else if (count == 0 && lv.is_quantum()) {
        if (!doc.angles)
          fail_at(e.declared_line, 1,
                  "quantum lambda '" + lv.label + "' needs angles-a/angles-b lines");
        const auto& state = std::get<quantum::QubitPairState<double>>(lv.payload);
        const std::vector<double>& ang = w == Wing::Alice ? doc.angles->alice : doc.angles->bob;
        for (int k = 0; k < s.settings(w); ++k)
          for (Outcome o : kOutcomes)
            dst.set(lam, k, o,
                    quantum::single_wing_probability(
                        state, w, quantum::PlanarSetting<double>(ang[static_cast<std::size_t>(k)]), o));
      } else {
        fail_at(e.declared_line, 1,
                "lambda '" + lv.label + "' needs a " + wing + " line for every setting");
      }
    }
    if (e.joint) {
      for (std::size_t idx = 0; idx < e.joint->seen.size(); ++idx)
        if (!e.joint->seen[idx])
          fail_at(e.declared_line, 1,
                  "lambda '" + lv.label + "' joint table is missing cell " + describe_cell(s, idx));
      doc.joints.emplace(lam, Behavior(s, e.joint->cells));
    }
  }
  return doc;
}

ModelDocument read_model_file(const std::string& path) {
  return parse_model(read_text_file(path));
}

CommonCauseModel ModelDocument::common_cause_model() const {
  if (!weights)
    throw Error(ErrorKind::InvalidModel,
                "model uses setting-dependent weights P(lambda|a,b); a common-cause model needs P(lambda)");
  return CommonCauseModel(scenario, lambdas, *weights, responses_a, responses_b, angles);
}

SettingDependentModel ModelDocument::setting_dependent_model() const {
  if (weights) return lift(common_cause_model());
  return SettingDependentModel(scenario, lambdas, *conditional_weights, responses_a,
                               responses_b, angles);
}

ConditionalJoint ModelDocument::conditional_joint() const {
  const CommonCauseModel m = common_cause_model();
  const ConditionalJoint induced = induced_joint(m);
  std::vector<Behavior> tables;
  for (int lam = 0; lam < m.lambda_count(); ++lam) {
    const auto it = joints.find(lam);
    tables.push_back(it != joints.end() ? it->second : induced[lam]);
  }
  return ConditionalJoint(scenario, std::move(tables));
}

namespace {

void check_token(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_of(" \t\r\n") != std::string::npos || s[0] == '#')
    throw Error(ErrorKind::InvalidArgument,
                std::string(what) + " '" + s + "' cannot be written as a single token");
}

std::string model_preamble(const Scenario& s, const std::vector<LambdaValue>& lambdas,
                           const std::optional<SettingAngles>& angles) {
  std::string out = "lckit-model 1\nscenario " + std::to_string(s.settings_a()) + " " +
                    std::to_string(s.settings_b()) + "\n";
  if (angles) {
    out += "angles-a";
    for (double x : angles->alice) out += " " + format_exact(x);
    out += "\nangles-b";
    for (double x : angles->bob) out += " " + format_exact(x);
    out += "\n";
  }
  for (const LambdaValue& l : lambdas) {
    check_token(l.label, "lambda label");
    out += "lambda " + l.label;
    if (const auto* tok = std::get_if<DiscreteToken>(&l.payload)) {
      check_token(tok->text, "lambda token");
      out += " token " + tok->text + "\n";
    } else {
      const auto& amps = std::get<quantum::QubitPairState<double>>(l.payload).amplitudes();
      out += " state";
      for (int k = 0; k < 4; ++k)
        out += " " + format_exact(amps(k).real()) + " " + format_exact(amps(k).imag());
      out += "\n";
    }
  }
  return out;
}

std::string model_responses(const std::vector<LambdaValue>& lambdas, const ResponseTable& ra,
                            const ResponseTable& rb) {
  std::string out;
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    const int li = static_cast<int>(l);
    for (int a = 0; a < ra.settings(); ++a)
      out += "response-a " + lambdas[l].label + " " + std::to_string(a) + " " +
             format_exact(ra(li, a, Outcome::Plus)) + " " + format_exact(ra(li, a, Outcome::Minus)) + "\n";
    for (int b = 0; b < rb.settings(); ++b)
      out += "response-b " + lambdas[l].label + " " + std::to_string(b) + " " +
             format_exact(rb(li, b, Outcome::Plus)) + " " + format_exact(rb(li, b, Outcome::Minus)) + "\n";
  }
  return out;
}

}  // namespace

std::string serialize_model(const CommonCauseModel& m) {
  std::string out = model_preamble(m.scenario(), m.lambdas(), m.angles());
  for (int l = 0; l < m.lambda_count(); ++l)
    out += "weight " + m.lambdas()[static_cast<std::size_t>(l)].label + " " +
           format_exact(m.weights()(l)) + "\n";
  out += model_responses(m.lambdas(), m.responses(Wing::Alice), m.responses(Wing::Bob));
  return out;
}

std::string serialize_model(const SettingDependentModel& m) {
  const Scenario& s = m.scenario();
  std::string out = model_preamble(s, m.lambdas(), m.angles());
  for (int l = 0; l < m.lambda_count(); ++l)
    for (int a = 0; a < s.settings_a(); ++a)
      for (int b = 0; b < s.settings_b(); ++b)
        out += "weight " + m.lambdas()[static_cast<std::size_t>(l)].label + " " +
               std::to_string(a) + " " + std::to_string(b) + " " +
               format_exact(m.weight(l, a, b)) + "\n";
  out += model_responses(m.lambdas(), m.responses(Wing::Alice), m.responses(Wing::Bob));
  return out;
}

}  // namespace lckit::io
