#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "qgeom/algebra.hpp"
#include "qgeom/rng.hpp"

namespace qgeom {

inline constexpr double kEigZeroRelTol = 1e-12;   // lambda below this * lambda_max counts as zero
inline constexpr double kEigClampFloor = -1e-9;   // inputs below this are rejected outright

/// Positive semidefinite, unit-trace matrix together with its spectral data.
/// Eigenvalues are stored descending; eigenvector phases are fixed so that the
/// first component above threshold is positive real, and exact ties are broken
/// lexicographically. This makes the stored frame reproducible.
class DensityState {
 public:
  /// Validates, clamps round-off negatives, normalizes the trace and
  /// eigendecomposes. Throws NotHermitian, NegativeEigenvalue or ZeroTrace.
  static DensityState make(const CMat& m, double herm_tol = 1e-12);

  const CMat& matrix() const { return matrix_; }
  const RVec& eigenvalues() const { return eigenvalues_; }
  const CMat& eigenvectors() const { return eigenvectors_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  int rank() const { return rank_; }
  bool is_pure() const { return rank_ == 1; }
  double purity() const { return (matrix_ * matrix_).trace().real(); }

  /// Support projector: sum of eigenprojectors with nonzero weight.
  CMat support_projector() const {
    const CMat u = eigenvectors_.leftCols(rank_);
    return u * u.adjoint();
  }

  /// Functional value Tr(rho a).
  cplx evaluate(const CMat& a) const {
    ensure_same_dim(matrix_, a, "DensityState::evaluate");
    return (matrix_ * a).trace();
  }

 private:
  CMat matrix_;
  RVec eigenvalues_;
  CMat eigenvectors_;
  int rank_ = 0;
};

namespace detail {

inline void fix_eigenvector_phase(Eigen::Ref<CVec> v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double a = std::abs(v(k));
    if (a > 1e-9) {
      v *= std::conj(v(k)) / a;
      return;
    }
  }
}

inline bool lex_less(const CVec& a, const CVec& b) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a(k).real() != b(k).real()) return a(k).real() < b(k).real();
    if (a(k).imag() != b(k).imag()) return a(k).imag() < b(k).imag();
  }
  return false;
}

}  // namespace detail

inline DensityState DensityState::make(const CMat& m, double herm_tol) {
  ensure_square(m, "DensityState");
  ensure_finite(m, "DensityState");
  if (hermiticity_defect(m) > herm_tol)
    throw NotHermitian("density matrix, defect " + std::to_string(hermiticity_defect(m)));
  const CMat h = 0.5 * (m + m.adjoint());

  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  RVec vals = es.eigenvalues();
  CMat vecs = es.eigenvectors();

  const double vmax = vals.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < kEigClampFloor * std::max(1.0, vmax))
      throw NegativeEigenvalue(std::to_string(vals(i)));
    if (vals(i) < 0.0) vals(i) = 0.0;
  }
  const double tr = vals.sum();
  if (tr <= 1e-12) throw ZeroTrace("trace " + std::to_string(tr));
  vals /= tr;

  // Descending order with deterministic frame.
  std::vector<Eigen::Index> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  for (Eigen::Index i = 0; i < vecs.cols(); ++i) detail::fix_eigenvector_phase(vecs.col(i));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (vals(a) != vals(b)) return vals(a) > vals(b);
    return detail::lex_less(vecs.col(a), vecs.col(b));
  });

  DensityState out;
  out.eigenvalues_ = RVec(vals.size());
  out.eigenvectors_ = CMat(vecs.rows(), vecs.cols());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    out.eigenvalues_(i) = vals(order[i]);
    out.eigenvectors_.col(i) = vecs.col(order[i]);
  }

  const double zero_cut = kEigZeroRelTol * out.eigenvalues_(0);
  out.rank_ = 0;
  for (Eigen::Index i = 0; i < out.eigenvalues_.size(); ++i) {
    if (out.eigenvalues_(i) >= zero_cut) ++out.rank_;
    else out.eigenvalues_(i) = 0.0;
  }
  const double tr2 = out.eigenvalues_.sum();
  out.eigenvalues_ /= tr2;
  out.matrix_ = out.eigenvectors_ * out.eigenvalues_.asDiagonal() * out.eigenvectors_.adjoint();
  out.matrix_ = 0.5 * (out.matrix_ + out.matrix_.adjoint());
  return out;
}

struct StateRank {
  int rank;
  CMat support_projector;
};

inline StateRank state_rank(const DensityState& s) {
  return StateRank{s.rank(), s.support_projector()};
}

inline DensityState make_state(const CMat& m) { return DensityState::make(m); }

inline cplx evaluate(const DensityState& s, const CMat& a) { return s.evaluate(a); }

inline bool is_pure(const DensityState& s) { return s.is_pure(); }

/// Convex combination sum_i w_i s_i. Weights must be positive and sum to one.
inline DensityState convex_combine(const std::vector<double>& weights,
                                   const std::vector<DensityState>& states) {
  if (weights.empty() || weights.size() != states.size())
    throw DimensionMismatch("convex_combine: weights vs states");
  double sum = 0.0;
  for (double w : weights) {
    if (w <= 0.0) throw std::invalid_argument("convex_combine: non-positive weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("convex_combine: weights sum to " + std::to_string(sum));
  const Eigen::Index n = states[0].dim();
  CMat acc = CMat::Zero(n, n);
  for (std::size_t i = 0; i < states.size(); ++i) {
    ensure_same_dim(states[0].matrix(), states[i].matrix(), "convex_combine");
    acc += weights[i] * states[i].matrix();
  }
  return DensityState::make(acc);
}

/// Pure state |v><v| / <v|v>.
inline DensityState pure_state(const CVec& v) {
  const double n2 = v.squaredNorm();
  if (n2 < 1e-24) throw NullVector("pure_state");
  return DensityState::make(CMat(v * v.adjoint() / n2));
}

inline DensityState random_density_state(Rng& rng, Eigen::Index n, int rank) {
  const CMat u = random_unitary(rng, n);
  RVec p = RVec::Zero(n);
  double sum = 0.0;
  for (int i = 0; i < rank; ++i) {
    p(i) = rng.uniform(0.1, 1.0);
    sum += p(i);
  }
  p /= sum;
  return DensityState::make(CMat(u.leftCols(rank) * p.head(rank).asDiagonal() *
                                 u.leftCols(rank).adjoint()));
}

}  // namespace qgeom
