#pragma once

#include <vector>

#include "qgeom/algebra.hpp"
#include "qgeom/rng.hpp"

namespace qgeom {

/// Positive matrix K with its inverse, defining the inner product z . K w and
/// the associative operator product A K B with unit K^{-1}.
class DeformedAlgebra {
 public:
  explicit DeformedAlgebra(const CMat& k, double herm_tol = 1e-10) {
    ensure_square(k, "DeformedAlgebra");
    ensure_finite(k, "DeformedAlgebra");
    if (hermiticity_defect(k) > herm_tol)
      throw NotHermitian("K, defect " + std::to_string(hermiticity_defect(k)));
    k_ = 0.5 * (k + k.adjoint());
    Eigen::SelfAdjointEigenSolver<CMat> es(k_);
    const RVec ev = es.eigenvalues();
    const double emax = ev.cwiseAbs().maxCoeff();
    if (ev.minCoeff() < 1e-10 * emax)
      throw NegativeEigenvalue("K not positive definite, min eigenvalue " +
                               std::to_string(ev.minCoeff()));
    RVec inv = ev.cwiseInverse();
    k_inv_ = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
  }

  const CMat& K() const { return k_; }
  const CMat& K_inv() const { return k_inv_; }
  Eigen::Index dim() const { return k_.rows(); }

 private:
  CMat k_;
  CMat k_inv_;
};

inline cplx deformed_inner(const DeformedAlgebra& d, const CVec& z, const CVec& w) {
  if (z.size() != d.dim() || w.size() != d.dim()) throw DimensionMismatch("deformed_inner");
  return z.dot(d.K() * w);
}

inline CMat deformed_product(const DeformedAlgebra& d, const CMat& a, const CMat& b) {
  ensure_same_dim(a, b, "deformed_product");
  if (a.rows() != d.dim()) throw DimensionMismatch("deformed_product vs K");
  return a * d.K() * b;
}

inline double commutation_defect(const CMat& h, const CMat& k) {
  return operator_norm(commutator(h, k));
}

/// K^{-1} H, defined only when H and K commute; outside that regime the two
/// evolution pictures are not equivalent and construction fails loudly.
inline CMat deformed_hamiltonian(const DeformedAlgebra& d, const CMat& h,
                                 double gate = 1e-10) {
  ensure_same_dim(h, d.K(), "deformed_hamiltonian");
  const double defect = commutation_defect(h, d.K());
  const double scale = operator_norm(h) * operator_norm(d.K());
  if (defect > gate * std::max(scale, 1e-300))
    throw NonCommuting("|[H,K]| = " + std::to_string(defect));
  return d.K_inv() * h;
}

/// |[A,H] - [A,H_K]_K| in max norm, both brackets taken in the plain
/// associative convention of the respective product.
inline double bracket_identity_defect(const DeformedAlgebra& d, const CMat& h,
                                      const CMat& h_k, const CMat& a) {
  const CMat lhs = a * h - h * a;
  const CMat rhs = deformed_product(d, a, h_k) - deformed_product(d, h_k, a);
  return max_norm(CMat(lhs - rhs));
}

struct EvolutionRun {
  CMat H;
  CMat A0;
  std::vector<double> t_grid;
  std::vector<CMat> trajectory_std;  // exp(iHt) A0 exp(-iHt)
  std::vector<CMat> trajectory_def;  // RK4 on dA/dt = i(H_K .K A - A .K H_K)
  std::vector<double> divergence;    // max-norm gap per grid point
  double max_divergence = 0.0;
  double richardson_defect = 0.0;    // gap to the halved-step integration
};

/// Integrates the same observable through the standard picture (closed form
/// by eigendecomposition of H) and the deformed picture (RK4 with the K
/// product). dA/dt = i(HA - AH) in the standard picture; the deformed right
/// hand side uses H_K and the K product, which coincides when [H,K] = 0.
/// A halved-step re-integration bounds the integrator error independently of
/// the closed form.
inline EvolutionRun evolve_pair(const DeformedAlgebra& d, const CMat& h, const CMat& a0,
                                double t0, double t1, int steps) {
  if (steps < 1) throw std::invalid_argument("evolve_pair: steps < 1");
  const double dt = (t1 - t0) / steps;
  if (!(std::abs(dt) > 0.0) && t1 != t0)
    throw std::underflow_error("evolve_pair: step size underflow");
  if (hermiticity_defect(h) > 1e-10) throw NotHermitian("evolve_pair: H");
  const CMat h_k = deformed_hamiltonian(d, h);

  Eigen::SelfAdjointEigenSolver<CMat> es(CMat(0.5 * (h + h.adjoint())));
  const CMat q = es.eigenvectors();
  const RVec e = es.eigenvalues();

  auto propagate_std = [&](double t) {
    CVec phase(e.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) phase(i) = std::exp(cplx(0.0, e(i) * t));
    const CMat u = q * phase.asDiagonal() * q.adjoint();
    return CMat(u * a0 * u.adjoint());
  };
  auto rhs = [&](const CMat& a) {
    return CMat(cplx(0.0, 1.0) * (deformed_product(d, h_k, a) - deformed_product(d, a, h_k)));
  };
  auto rk4_step = [&](const CMat& a, double step) {
    const CMat k1 = rhs(a);
    const CMat k2 = rhs(a + 0.5 * step * k1);
    const CMat k3 = rhs(a + 0.5 * step * k2);
    const CMat k4 = rhs(a + step * k3);
    return CMat(a + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  };

  EvolutionRun run;
  run.H = h;
  run.A0 = a0;
  CMat a = a0;
  CMat a_half = a0;  // same trajectory at half the step size
  for (int s = 0; s <= steps; ++s) {
    const double t = t0 + s * dt;
    run.t_grid.push_back(t);
    run.trajectory_std.push_back(propagate_std(t));
    run.trajectory_def.push_back(a);
    const double gap = max_norm(CMat(run.trajectory_std.back() - a));
    run.divergence.push_back(gap);
    run.max_divergence = std::max(run.max_divergence, gap);
    run.richardson_defect = std::max(run.richardson_defect, max_norm(CMat(a - a_half)));
    if (s == steps) break;
    a = rk4_step(a, dt);
    a_half = rk4_step(rk4_step(a_half, 0.5 * dt), 0.5 * dt);
  }
  return run;
}

struct CommutingPair {
  CMat H;
  CMat K;
};

/// H and K conjugated from the same eigenframe, so [H,K] = 0 to round-off.
inline CommutingPair make_commuting_pair(const CMat& u, const RVec& h_spec, const RVec& k_spec) {
  CMat h = u * h_spec.asDiagonal() * u.adjoint();
  CMat k = u * k_spec.asDiagonal() * u.adjoint();
  h = 0.5 * (h + h.adjoint());
  k = 0.5 * (k + k.adjoint());
  return CommutingPair{h, k};
}

inline CommutingPair commuting_pair_generator(Eigen::Index n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("commuting_pair_generator: n >= 2");
  Rng rng(seed);
  const CMat u = random_unitary(rng, n);
  RVec h(n), k(n);
  for (Eigen::Index i = 0; i < n; ++i) h(i) = rng.uniform(-1.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) k(i) = rng.uniform(0.5, 2.0);
  return make_commuting_pair(u, h, k);
}

}  // namespace qgeom
