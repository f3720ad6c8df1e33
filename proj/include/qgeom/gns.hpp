#pragma once

#include <vector>

#include "qgeom/algebra.hpp"
#include "qgeom/states.hpp"

namespace qgeom {

/// State-induced pairing <a|b> = omega(a* b) = Tr(b omega a*). Sesquilinear,
/// positive semidefinite; degenerate exactly on the left ideal of the state.
inline cplx gns_pairing(const DensityState& omega, const CMat& a, const CMat& b) {
  ensure_same_dim(omega.matrix(), a, "gns_pairing");
  ensure_same_dim(a, b, "gns_pairing");
  return (b * omega.matrix() * a.adjoint()).trace();
}

/// Basis of the left ideal {X : X P_supp = 0}: in the eigenframe of the state
/// these are the matrices supported on the null columns. Dimension n(n-m).
inline std::vector<CMat> gelfand_ideal_basis(const DensityState& omega) {
  const Eigen::Index n = omega.dim();
  const int m = omega.rank();
  const CMat& u = omega.eigenvectors();
  std::vector<CMat> basis;
  basis.reserve(static_cast<std::size_t>(n * (n - m)));
  for (Eigen::Index j = m; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      CMat e = CMat::Zero(n, n);
      e(k, j) = 1.0;
      basis.push_back(u * e * u.adjoint());
    }
  }
  return basis;
}

/// Hilbert-space realization built from a state: orthonormal quotient basis,
/// represented operators, cyclic vector and the unitary that exhibits the
/// block structure I_m (x) a.
class GnsRealization {
 public:
  explicit GnsRealization(const DensityState& omega) : state_(omega) {
    const Eigen::Index n = omega.dim();
    const int m = omega.rank();
    algebra_dim_ = static_cast<int>(n);
    rank_ = m;
    hilbert_dim_ = static_cast<int>(n) * m;
    ideal_dim_ = static_cast<int>(n) * (static_cast<int>(n) - m);
    const CMat& u = omega.eigenvectors();

    // Candidate representatives: eigenframe elementary matrices on the
    // support columns, column-major. Modified Gram-Schmidt under the state
    // pairing; on this family it reduces to a normalization.
    quotient_basis_.reserve(hilbert_dim_);
    for (int j = 0; j < m; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        CMat e = CMat::Zero(n, n);
        e(k, j) = 1.0;
        CMat cand = u * e * u.adjoint();
        for (const CMat& prev : quotient_basis_)
          cand -= gns_pairing(omega, prev, cand) * prev;
        const double norm = std::sqrt(std::abs(gns_pairing(omega, cand, cand)));
        if (norm < 1e-12)
          throw std::runtime_error("GnsRealization: degenerate quotient candidate");
        quotient_basis_.push_back(cand / norm);
      }
    }

    // Coordinates of the class of the identity; enforce unit norm instead of
    // assuming it survived the orthonormalization round-off.
    const CMat id = identity(n);
    cyclic_vector_ = CVec(hilbert_dim_);
    for (int i = 0; i < hilbert_dim_; ++i)
      cyclic_vector_(i) = gns_pairing(omega, quotient_basis_[i], id);
    cyclic_norm_defect_ = std::abs(cyclic_vector_.norm() - 1.0);
    cyclic_vector_ /= cyclic_vector_.norm();

    intertwiner_ = kron(identity(m), u);
  }

  const DensityState& state() const { return state_; }
  int algebra_dim() const { return algebra_dim_; }
  int rank() const { return rank_; }
  int hilbert_dim() const { return hilbert_dim_; }
  int ideal_dim() const { return ideal_dim_; }
  const std::vector<CMat>& quotient_basis() const { return quotient_basis_; }
  const CVec& cyclic_vector() const { return cyclic_vector_; }
  double cyclic_norm_defect() const { return cyclic_norm_defect_; }

  /// Unitary V with V pi(a) V* = I_m (x) a.
  const CMat& intertwiner() const { return intertwiner_; }

  /// Matrix of pi(a) in the quotient basis: pi(a)_{IJ} = <B_I | a B_J>.
  CMat represent(const CMat& a) const {
    ensure_same_dim(state_.matrix(), a, "GnsRealization::represent");
    CMat out(hilbert_dim_, hilbert_dim_);
    std::vector<CMat> ab(quotient_basis_.size());
    for (std::size_t j = 0; j < quotient_basis_.size(); ++j) ab[j] = a * quotient_basis_[j];
    for (int i = 0; i < hilbert_dim_; ++i)
      for (int j = 0; j < hilbert_dim_; ++j)
        out(i, j) = gns_pairing(state_, quotient_basis_[i], ab[j]);
    return out;
  }

 private:
  DensityState state_;
  int algebra_dim_;
  int rank_;
  int hilbert_dim_;
  int ideal_dim_;
  std::vector<CMat> quotient_basis_;
  CVec cyclic_vector_;
  double cyclic_norm_defect_ = 0.0;
  CMat intertwiner_;
};

inline GnsRealization build_gns(const DensityState& omega) { return GnsRealization(omega); }

/// Max over the samples of |omega(a) - <Omega| pi(a) Omega>|.
inline double verify_cyclic(const GnsRealization& g, const std::vector<CMat>& samples) {
  double worst = 0.0;
  const CVec& om = g.cyclic_vector();
  for (const CMat& a : samples) {
    const cplx lhs = g.state().evaluate(a);
    const cplx rhs = om.dot(g.represent(a) * om);  // dot conjugates the left argument
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

/// Defect of the vector-state identity <Psi|pi(a)Psi> = omega(b*ab)/omega(b*b)
/// for Psi = pi(b) Omega, sampled over random observables.
inline double vector_state_defect(const GnsRealization& g, const CMat& b, Rng& rng,
                                  int samples = 100) {
  const CVec psi_raw = g.represent(b) * g.cyclic_vector();
  const double norm = psi_raw.norm();
  if (norm < 1e-6) throw NullVector("vector_state: |pi(b) Omega| = " + std::to_string(norm));
  const CVec psi = psi_raw / norm;
  const double denom = gns_pairing(g.state(), b, b).real();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const CMat a = random_hermitian(rng, g.algebra_dim());
    const cplx lhs = psi.dot(g.represent(a) * psi);
    const cplx rhs = g.state().evaluate(b.adjoint() * a * b) / denom;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

struct IrreducibilityReport {
  int commutant_dim;
  bool is_irreducible;
  int block_count;
};

/// Commutant dimension as the kernel of the stacked system T pi(a_i) - pi(a_i) T
/// over the elementary-matrix basis of the algebra.
inline IrreducibilityReport irreducibility(const GnsRealization& g) {
  const int n = g.algebra_dim();
  const int N = g.hilbert_dim();
  const CMat id = identity(N);
  CMat stacked(static_cast<Eigen::Index>(n) * n * N * N, static_cast<Eigen::Index>(N) * N);
  Eigen::Index row = 0;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      CMat e = CMat::Zero(n, n);
      e(r, c) = 1.0;
      const CMat pi = g.represent(e);
      // vec(T pi - pi T) = (pi^T (x) I - I (x) pi) vec(T)
      stacked.block(row, 0, N * N, N * N) = kron(pi.transpose(), id) - kron(id, pi);
      row += static_cast<Eigen::Index>(N) * N;
    }
  }
  const CMat kernel = null_space(stacked, 1e-9);
  const int cdim = static_cast<int>(kernel.cols());
  return IrreducibilityReport{cdim, cdim == 1, g.rank()};
}

struct MixedComponent {
  double weight;
  DensityState pure;
  GnsRealization block;
};

/// Splits the realization of a mixed state into its irreducible blocks. The
/// weights are the nonzero eigenvalues in stored (descending) order and each
/// component state is the matching eigenprojector.
inline std::vector<MixedComponent> decompose_mixed(const GnsRealization& g) {
  std::vector<MixedComponent> out;
  const DensityState& s = g.state();
  out.reserve(g.rank());
  for (int alpha = 0; alpha < g.rank(); ++alpha) {
    const CVec v = s.eigenvectors().col(alpha);
    DensityState pure = pure_state(v);
    out.push_back(MixedComponent{s.eigenvalues()(alpha), pure, GnsRealization(pure)});
  }
  return out;
}

}  // namespace qgeom
