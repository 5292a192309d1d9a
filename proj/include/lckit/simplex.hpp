#ifndef LCKIT_SIMPLEX_HPP
#define LCKIT_SIMPLEX_HPP

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "lckit/error.hpp"

// Dense two-phase primal simplex for
//
//     minimize c^T x  subject to  A x = b,  x >= 0.
//
// Pivoting follows Bland's rule (lowest-index entering column, ties in the
// ratio test broken by lowest basic index), so the method terminates on
// degenerate problems. Phase 1 adds one artificial per row; those columns
// are kept in the tableau for the whole solve, which makes B^-1 (and hence
// the dual vector) directly readable from them.

namespace lckit::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

inline const char* to_string(Status s) noexcept {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

template <typename Scalar>
struct Options {
  Scalar pivot_tolerance = Scalar(1e-12);
  Scalar optimality_tolerance = Scalar(1e-12);
  /// Phase-1 optimum above this declares the system infeasible.
  Scalar feasibility_tolerance = Scalar(1e-9);
  long max_iterations = 1'000'000;
};

template <typename Scalar>
struct Result {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Status status = Status::IterationLimit;
  Vector x;
  Scalar objective = Scalar(0);
  /// Optimal: the dual y with A^T y <= c and b^T y = objective.
  /// Infeasible: a Farkas ray with A^T y <= 0 and b^T y = infeasibility > 0.
  Vector dual;
  /// Phase-1 optimum, the total artificial mass left in the basis.
  Scalar infeasibility = Scalar(0);
  long iterations = 0;
};

namespace detail {

template <typename Scalar>
class Tableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Tableau(const Matrix& A, const Vector& b, const Options<Scalar>& opts)
      : m_(A.rows()),
        n_(A.cols()),
        opts_(opts),
        t_(Matrix::Zero(A.rows(), A.cols() + A.rows() + 1)),
        row_sign_(Vector::Ones(A.rows())),
        basis_(static_cast<std::size_t>(A.rows())) {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (b(i) < Scalar(0)) row_sign_(i) = Scalar(-1);
      t_.row(i).head(n_) = row_sign_(i) * A.row(i);
      t_(i, n_ + i) = Scalar(1);
      t_(i, rhs()) = row_sign_(i) * b(i);
      basis_[static_cast<std::size_t>(i)] = n_ + i;
    }
  }

  Eigen::Index rhs() const { return n_ + m_; }
  bool is_artificial(Eigen::Index j) const { return j >= n_ && j < n_ + m_; }

  /// Reduced costs of every column for the cost vector `cost` (length
  /// n + m), plus the current objective value.
  Vector reduced_costs(const Vector& cost, Scalar& objective) const {
    Vector cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i)
      cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
    Vector r = cost - (cb.transpose() * t_.leftCols(n_ + m_)).transpose();
    objective = cb.dot(t_.col(rhs()));
    return r;
  }

  /// Runs simplex iterations for `cost`; artificial columns may enter only
  /// when `allow_artificial`. Returns Optimal, Unbounded or IterationLimit.
  Status optimize(const Vector& cost, bool allow_artificial, long& iterations) {
    Scalar objective;
    Vector r = reduced_costs(cost, objective);
    while (true) {
      if (iterations >= opts_.max_iterations) return Status::IterationLimit;
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < n_ + m_; ++j) {
        if (!allow_artificial && is_artificial(j)) continue;
        if (r(j) < -opts_.optimality_tolerance) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Status::Optimal;

      Eigen::Index leave = -1;
      Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const Scalar pivot = t_(i, enter);
        if (pivot <= opts_.pivot_tolerance) continue;
        const Scalar ratio = t_(i, rhs()) / pivot;
        if (ratio < best_ratio ||
            (leave >= 0 && ratio == best_ratio &&
             basis_[static_cast<std::size_t>(i)] <
                 basis_[static_cast<std::size_t>(leave)])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return Status::Unbounded;

      pivot(leave, enter);
      ++iterations;
      r = reduced_costs(cost, objective);
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (i == row) continue;
      const Scalar f = t_(i, col);
      if (f != Scalar(0)) t_.row(i) -= f * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  /// Pivots zero-level artificials out of the basis where some structural
  /// column has a usable entry in their row. Rows left with an artificial
  /// are linearly dependent on the others and stay inert.
  void expel_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[static_cast<std::size_t>(i)])) continue;
      Eigen::Index best = -1;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > opts_.pivot_tolerance &&
            (best < 0 || std::abs(t_(i, j)) > std::abs(t_(i, best))))
          best = j;
      }
      if (best >= 0) pivot(i, best);
    }
  }

  Vector primal() const {
    Vector x = Vector::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const Eigen::Index j = basis_[static_cast<std::size_t>(i)];
      if (j < n_) x(j) = std::max(Scalar(0), t_(i, rhs()));
    }
    return x;
  }

  /// y = c_B^T B^-1 mapped back through the row sign flips, read from the
  /// artificial columns' reduced costs r_art = cost_art - y.
  Vector dual(const Vector& cost) const {
    Scalar objective;
    const Vector r = reduced_costs(cost, objective);
    Vector y(m_);
    for (Eigen::Index i = 0; i < m_; ++i)
      y(i) = row_sign_(i) * (cost(n_ + i) - r(n_ + i));
    return y;
  }

  Scalar objective(const Vector& cost) const {
    Scalar value;
    reduced_costs(cost, value);
    return value;
  }

 private:
  Eigen::Index m_;
  Eigen::Index n_;
  Options<Scalar> opts_;
  Matrix t_;
  Vector row_sign_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace detail

template <typename Scalar>
Result<Scalar> solve(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c,
    const Options<Scalar>& opts = {}) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (b.size() != A.rows() || c.size() != A.cols())
    throw Error(ErrorKind::ShapeMismatch, "LP dimensions do not agree");

  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  detail::Tableau<Scalar> tab(A, b, opts);
  Result<Scalar> res;

  Vector phase1 = Vector::Zero(n + m);
  phase1.tail(m).setOnes();
  Status s = tab.optimize(phase1, true, res.iterations);
  if (s != Status::Optimal) {
    res.status = s;
    return res;
  }
  res.infeasibility = tab.objective(phase1);
  if (res.infeasibility > opts.feasibility_tolerance) {
    res.status = Status::Infeasible;
    res.dual = tab.dual(phase1);
    res.x = tab.primal();
    return res;
  }

  tab.expel_artificials();
  Vector phase2 = Vector::Zero(n + m);
  phase2.head(n) = c;
  s = tab.optimize(phase2, false, res.iterations);
  res.status = s;
  res.x = tab.primal();
  res.objective = c.dot(res.x);
  if (s == Status::Optimal) res.dual = tab.dual(phase2);
  return res;
}

/// Phase 1 only: finds x >= 0 with A x = b or a Farkas certificate.
template <typename Scalar>
Result<Scalar> find_feasible(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& A,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
    const Options<Scalar>& opts = {}) {
  return solve<Scalar>(A, b, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(A.cols()),
                       opts);
}

}  // namespace lckit::lp

#endif  // LCKIT_SIMPLEX_HPP
