#ifndef LCKIT_QUANTUM_HPP
#define LCKIT_QUANTUM_HPP

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lckit/behavior.hpp"
#include "lckit/error.hpp"

// Two spin-1/2 particles measured along directions in the xz plane.
//
// Single-particle basis: index 0 is |+> (spin up along z), index 1 is |->.
// Two-particle amplitudes are ordered |++>, |+->, |-+>, |-->, i.e. the
// flat index is 2 * alice + bob.

namespace lckit::quantum {

template <typename Scalar>
using Spinor = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

template <typename Scalar>
using PairAmplitudes = Eigen::Matrix<std::complex<Scalar>, 4, 1>;

template <typename Scalar>
inline constexpr Scalar kStateNormTolerance = Scalar(1e-12);

/// Measurement direction, as an angle from the z axis in the xz plane.
/// Stored reduced to [0, 2pi).
template <typename Scalar = double>
class PlanarSetting {
 public:
  explicit PlanarSetting(Scalar angle) : angle_(reduce(angle)) {}

  Scalar angle() const noexcept { return angle_; }

 private:
  static Scalar reduce(Scalar angle) {
    using std::fmod;
    using std::isfinite;
    if (!isfinite(angle))
      throw Error(ErrorKind::InvalidArgument, "setting angle must be finite");
    const Scalar two_pi = Scalar(2) * Scalar(EIGEN_PI);
    Scalar r = fmod(angle, two_pi);
    if (r < Scalar(0)) r += two_pi;
    // fmod of a tiny negative angle can round up to exactly 2pi
    if (r >= two_pi) r = Scalar(0);
    return r;
  }

  Scalar angle_;
};

template <typename Scalar = double>
class QubitPairState {
 public:
  /// Throws NonNormalizedState unless sum |amplitude|^2 is 1 within
  /// `tolerance`.
  explicit QubitPairState(const PairAmplitudes<Scalar>& amplitudes,
                          Scalar tolerance = kStateNormTolerance<Scalar>)
      : amplitudes_(amplitudes) {
    using std::abs;
    const Scalar norm2 = amplitudes_.squaredNorm();
    if (!(abs(norm2 - Scalar(1)) <= tolerance))
      throw Error(ErrorKind::NonNormalizedState,
                  "two-qubit state has squared norm " +
                      std::to_string(static_cast<double>(norm2)));
  }

  static QubitPairState product(const Spinor<Scalar>& alice,
                                const Spinor<Scalar>& bob) {
    PairAmplitudes<Scalar> amps;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) amps(2 * i + j) = alice(i) * bob(j);
    return QubitPairState(amps);
  }

  const PairAmplitudes<Scalar>& amplitudes() const noexcept {
    return amplitudes_;
  }

  /// The same state with the particles exchanged.
  QubitPairState swapped() const {
    PairAmplitudes<Scalar> amps;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) amps(2 * j + i) = amplitudes_(2 * i + j);
    return QubitPairState(amps);
  }

 private:
  PairAmplitudes<Scalar> amplitudes_;
};

/// (|+-> - |-+>) / sqrt(2).
template <typename Scalar = double>
QubitPairState<Scalar> singlet() {
  using std::sqrt;
  const Scalar h = Scalar(1) / sqrt(Scalar(2));
  PairAmplitudes<Scalar> amps;
  amps << Scalar(0), h, -h, Scalar(0);
  return QubitPairState<Scalar>(amps);
}

template <typename Scalar = double>
struct SpinEigenstate {
  PlanarSetting<Scalar> setting;
  Outcome sign;
  Spinor<Scalar> amplitudes;
};

/// |a,+> = cos(a/2)|+> + sin(a/2)|->,  |a,-> = -sin(a/2)|+> + cos(a/2)|->.
template <typename Scalar>
SpinEigenstate<Scalar> spin_eigenstate(const PlanarSetting<Scalar>& setting,
                                       Outcome outcome) {
  using std::cos;
  using std::sin;
  const Scalar half = setting.angle() / Scalar(2);
  Spinor<Scalar> v;
  if (outcome == Outcome::Plus)
    v << cos(half), sin(half);
  else
    v << -sin(half), cos(half);
  return {setting, outcome, v};
}

/// |(<a,A| (x) <b,B|) psi|^2.
template <typename Scalar>
Scalar joint_probability(const QubitPairState<Scalar>& state,
                         const PlanarSetting<Scalar>& a,
                         const PlanarSetting<Scalar>& b, Outcome A,
                         Outcome B) {
  const Spinor<Scalar> ea = spin_eigenstate(a, A).amplitudes;
  const Spinor<Scalar> eb = spin_eigenstate(b, B).amplitudes;
  PairAmplitudes<Scalar> bra;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) bra(2 * i + j) = ea(i) * eb(j);
  // dot() conjugates its left operand
  return std::norm(bra.dot(state.amplitudes()));
}

/// <psi| (P (x) I) |psi> for Alice or <psi| (I (x) P) |psi> for Bob, with P
/// the projector on the measured eigenstate. The identity is resolved in
/// the z basis, independently of the other wing's setting.
template <typename Scalar>
Scalar single_wing_probability(const QubitPairState<Scalar>& state, Wing wing,
                               const PlanarSetting<Scalar>& setting,
                               Outcome outcome) {
  const Spinor<Scalar> e = spin_eigenstate(setting, outcome).amplitudes;
  const PairAmplitudes<Scalar>& psi = state.amplitudes();
  Scalar p(0);
  for (int k = 0; k < 2; ++k) {
    std::complex<Scalar> amp(0);
    for (int i = 0; i < 2; ++i) {
      const int idx = wing == Wing::Alice ? 2 * i + k : 2 * k + i;
      amp += std::conj(e(i)) * psi(idx);
    }
    p += std::norm(amp);
  }
  return p;
}

/// Tabulates joint_probability over the two setting lists into a Behavior
/// whose setting indices follow the list order.
template <typename Scalar>
Behavior behavior_from_state(const QubitPairState<Scalar>& state,
                             std::span<const PlanarSetting<Scalar>> alice,
                             std::span<const PlanarSetting<Scalar>> bob) {
  if (alice.empty() || bob.empty())
    throw Error(ErrorKind::InvalidArgument,
                "behavior_from_state needs at least one setting per wing");
  const Scenario s(static_cast<int>(alice.size()),
                   static_cast<int>(bob.size()));
  return Behavior::tabulate(s, [&](int i, int j, Outcome A, Outcome B) {
    return static_cast<double>(
        joint_probability(state, alice[static_cast<std::size_t>(i)],
                          bob[static_cast<std::size_t>(j)], A, B));
  });
}

/// Convenience overload taking raw angles in radians.
template <typename Scalar = double>
Behavior behavior_from_angles(const QubitPairState<Scalar>& state,
                              std::span<const Scalar> alice_angles,
                              std::span<const Scalar> bob_angles) {
  std::vector<PlanarSetting<Scalar>> a;
  std::vector<PlanarSetting<Scalar>> b;
  for (Scalar x : alice_angles) a.emplace_back(x);
  for (Scalar x : bob_angles) b.emplace_back(x);
  return behavior_from_state<Scalar>(state, a, b);
}

/// Singlet at a in {0, pi/2}, b in {pi/4, 3pi/4}.
inline Behavior chsh_optimal_singlet_behavior() {
  const double pi = EIGEN_PI;
  const std::vector<double> a{0.0, pi / 2};
  const std::vector<double> b{pi / 4, 3 * pi / 4};
  return behavior_from_angles<double>(singlet<double>(), a, b);
}

}  // namespace lckit::quantum

#endif  // LCKIT_QUANTUM_HPP
