#ifndef LCKIT_LOCAL_POLYTOPE_HPP
#define LCKIT_LOCAL_POLYTOPE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lckit/behavior.hpp"

namespace lckit {

inline constexpr double kMembershipTolerance = 1e-9;
/// enumerate_vertices refuses scenarios with more than 2^20 vertices.
inline constexpr int kMaxVertexBits = 20;
/// membership refuses LPs whose dense tableau exceeds this many entries.
inline constexpr std::int64_t kMaxTableauEntries = std::int64_t{1} << 26;

/// One outcome per setting on each wing.
struct DeterministicStrategy {
  std::vector<Outcome> assign_a;
  std::vector<Outcome> assign_b;

  friend bool operator==(const DeterministicStrategy&,
                         const DeterministicStrategy&) = default;
};

/// All 2^settings_a * 2^settings_b strategies, ordered lexicographically
/// by (assign_a, assign_b) with +1 before -1 and setting 0 most
/// significant. Throws ScenarioTooLarge past 2^20 vertices.
std::vector<DeterministicStrategy> enumerate_vertices(const Scenario& s);

/// Point-mass behavior: P(A,B|a,b) = 1 iff A = assign_a[a], B = assign_b[b].
Behavior strategy_behavior(const DeterministicStrategy& d, const Scenario& s);

enum class Locality { Local, NonLocal };

const char* to_string(Locality l) noexcept;

struct Certificate {
  enum class Kind { Chsh, Farkas };

  Kind kind = Kind::Chsh;
  /// Value of the functional on the behavior.
  double value = 0.0;
  /// Its maximum over the local polytope.
  double local_bound = 0.0;
  /// Chsh: the maximizing CHSH member.
  std::optional<ChshWitness> chsh;
  /// Farkas: one coefficient per behavior cell (Scenario::cell_index).
  Eigen::VectorXd coefficients;

  double margin() const noexcept { return value - local_bound; }
};

struct MembershipVerdict {
  Locality status = Locality::Local;
  /// Per-vertex weights in enumerate_vertices order; set iff Local.
  std::optional<Eigen::VectorXd> weights;
  /// max over cells of |sum_v w_v D_v - P|; 0 when NonLocal.
  double max_cell_residual = 0.0;
  /// LP phase-1 optimum (total unexplained probability mass).
  double infeasibility = 0.0;
  /// Set iff NonLocal.
  std::optional<Certificate> certificate;
  double tolerance = kMembershipTolerance;
};

/// Decides whether b is a convex mixture of deterministic strategies.
/// Throws InvalidBehavior, SignalingInput, ScenarioTooLarge or LpTooLarge.
MembershipVerdict membership(const Behavior& b,
                             double tolerance = kMembershipTolerance);

/// sum_v w_v D_v.
Behavior mixture_behavior(const Scenario& s,
                          const std::vector<DeterministicStrategy>& vertices,
                          const Eigen::VectorXd& weights);

struct LocalBound {
  double value = 0.0;
  DeterministicStrategy witness;
};

/// Max of the CHSH form over all 16 deterministic 2x2 strategies.
LocalBound local_bound_chsh(const Scenario& s, ChshForm form = {});
/// Min of the CHSH form over the same vertices.
LocalBound local_minimum_chsh(const Scenario& s, ChshForm form = {});

struct QuantumViolationReport {
  double chsh = 0.0;
  double local_bound = 0.0;
  MembershipVerdict verdict;
  /// Same state, single equal-angle setting pair.
  MembershipVerdict single_pair_verdict;
};

/// Singlet at a in {0, pi/2}, b in {pi/4, 3pi/4}, plus the 1x1 a = b = 0
/// restriction.
QuantumViolationReport quantum_violation_demo();

}  // namespace lckit

#endif  // LCKIT_LOCAL_POLYTOPE_HPP
