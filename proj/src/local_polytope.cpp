#include "lckit/local_polytope.hpp"

#include <algorithm>
#include <cmath>

#include "lckit/quantum.hpp"
#include "lckit/simplex.hpp"

namespace lckit {

const char* to_string(Locality l) noexcept {
  return l == Locality::Local ? "Local" : "NonLocal";
}

namespace {

std::vector<Outcome> decode(std::uint64_t bits, int width) {
  std::vector<Outcome> out(static_cast<std::size_t>(width));
  for (int k = 0; k < width; ++k) {
    const bool minus = (bits >> (width - 1 - k)) & 1U;
    out[static_cast<std::size_t>(k)] = minus ? Outcome::Minus : Outcome::Plus;
  }
  return out;
}

}  // namespace

std::vector<DeterministicStrategy> enumerate_vertices(const Scenario& s) {
  const int bits = s.settings_a() + s.settings_b();
  if (bits > kMaxVertexBits)
    throw Error(ErrorKind::ScenarioTooLarge,
                "local polytope of a " + std::to_string(s.settings_a()) + "x" +
                    std::to_string(s.settings_b()) +
                    " scenario has more than 2^20 vertices");
  const std::uint64_t na = std::uint64_t{1} << s.settings_a();
  const std::uint64_t nb = std::uint64_t{1} << s.settings_b();
  std::vector<DeterministicStrategy> out;
  out.reserve(static_cast<std::size_t>(na * nb));
  for (std::uint64_t ia = 0; ia < na; ++ia)
    for (std::uint64_t ib = 0; ib < nb; ++ib)
      out.push_back({decode(ia, s.settings_a()), decode(ib, s.settings_b())});
  return out;
}

Behavior strategy_behavior(const DeterministicStrategy& d, const Scenario& s) {
  if (static_cast<int>(d.assign_a.size()) != s.settings_a() ||
      static_cast<int>(d.assign_b.size()) != s.settings_b())
    throw Error(ErrorKind::ShapeMismatch,
                "strategy does not assign every setting of the scenario");
  return Behavior::tabulate(s, [&](int a, int b, Outcome A, Outcome B) {
    return A == d.assign_a[static_cast<std::size_t>(a)] &&
                   B == d.assign_b[static_cast<std::size_t>(b)]
               ? 1.0
               : 0.0;
  });
}

Behavior mixture_behavior(const Scenario& s,
                          const std::vector<DeterministicStrategy>& vertices,
                          const Eigen::VectorXd& weights) {
  if (weights.size() != static_cast<Eigen::Index>(vertices.size()))
    throw Error(ErrorKind::ShapeMismatch, "one weight per vertex required");
  Eigen::VectorXd cells = Eigen::VectorXd::Zero(s.cell_count());
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const double w = weights(static_cast<Eigen::Index>(v));
    if (w == 0.0) continue;
    for (int a = 0; a < s.settings_a(); ++a)
      for (int b = 0; b < s.settings_b(); ++b)
        cells(static_cast<Eigen::Index>(s.cell_index(
            a, b, vertices[v].assign_a[static_cast<std::size_t>(a)],
            vertices[v].assign_b[static_cast<std::size_t>(b)]))) += w;
  }
  return Behavior(s, std::move(cells));
}

MembershipVerdict membership(const Behavior& b, double tolerance) {
  require_valid(b);
  const NoSignalingReport ns = no_signaling_check(b);
  if (!ns.passes)
    throw Error(ErrorKind::SignalingInput,
                "behavior signals (residuals " + std::to_string(ns.max_residual_a) +
                    ", " + std::to_string(ns.max_residual_b) +
                    "); membership is only defined for no-signaling input");

  const Scenario& s = b.scenario();
  const std::vector<DeterministicStrategy> vertices = enumerate_vertices(s);
  const auto rows = static_cast<std::int64_t>(s.cell_count());
  const auto cols = static_cast<std::int64_t>(vertices.size());
  if (rows * (rows + cols + 1) > kMaxTableauEntries)
    throw Error(ErrorKind::LpTooLarge, "membership LP exceeds the tableau size guard");

  // One equality row per cell; the explicit normalization row sum_v w_v = 1
  // is omitted because every setting pair's cells already sum to it.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, cols);
  for (Eigen::Index v = 0; v < cols; ++v)
    A.col(v) = strategy_behavior(vertices[static_cast<std::size_t>(v)], s).cells();

  lp::Options<double> opts;
  opts.feasibility_tolerance = tolerance;
  const lp::Result<double> res = lp::find_feasible<double>(A, b.cells(), opts);
  if (res.status != lp::Status::Optimal && res.status != lp::Status::Infeasible)
    throw Error(ErrorKind::LpTooLarge,
                std::string("membership LP stopped: ") + lp::to_string(res.status));

  MembershipVerdict out;
  out.tolerance = tolerance;
  out.infeasibility = res.infeasibility;
  if (res.status == lp::Status::Optimal) {
    out.status = Locality::Local;
    out.weights = res.x;
    const Behavior rec = mixture_behavior(s, vertices, res.x);
    out.max_cell_residual = (rec.cells() - b.cells()).cwiseAbs().maxCoeff();
    return out;
  }

  out.status = Locality::NonLocal;
  Certificate cert;
  if (s.settings_a() == 2 && s.settings_b() == 2) {
    const ChshWitness w = max_symmetrized_chsh(b);
    cert.kind = Certificate::Kind::Chsh;
    cert.value = w.value;
    cert.local_bound = local_bound_chsh(s, w.form).value;
    cert.chsh = w;
  }
  if (!cert.chsh || cert.margin() <= tolerance) {
    // Raw dual ray: y.D_v <= 0 on every vertex while y.P > 0.
    cert = Certificate{};
    cert.kind = Certificate::Kind::Farkas;
    cert.coefficients = res.dual;
    cert.value = res.dual.dot(b.cells());
    cert.local_bound = (A.transpose() * res.dual).maxCoeff();
  }
  out.certificate = std::move(cert);
  return out;
}

namespace {

LocalBound extreme_chsh(const Scenario& s, ChshForm form, bool maximize) {
  if (s.settings_a() != 2 || s.settings_b() != 2)
    throw Error(ErrorKind::ShapeMismatch, "CHSH local bound needs a 2x2 scenario");
  LocalBound best;
  bool first = true;
  for (const DeterministicStrategy& d : enumerate_vertices(s)) {
    const double v = chsh_form_value(strategy_behavior(d, s), ChshSettings{}, form);
    if (first || (maximize ? v > best.value : v < best.value)) {
      best = LocalBound{v, d};
      first = false;
    }
  }
  return best;
}

}  // namespace

LocalBound local_bound_chsh(const Scenario& s, ChshForm form) {
  return extreme_chsh(s, form, true);
}

LocalBound local_minimum_chsh(const Scenario& s, ChshForm form) {
  return extreme_chsh(s, form, false);
}

QuantumViolationReport quantum_violation_demo() {
  QuantumViolationReport r;
  const Behavior chsh_behavior = quantum::chsh_optimal_singlet_behavior();
  r.chsh = best_chsh(chsh_behavior).value;
  r.local_bound = local_bound_chsh(chsh_behavior.scenario()).value;
  r.verdict = membership(chsh_behavior);

  const std::vector<double> zero{0.0};
  r.single_pair_verdict = membership(
      quantum::behavior_from_angles<double>(quantum::singlet<double>(), zero, zero));
  return r;
}

}  // namespace lckit
