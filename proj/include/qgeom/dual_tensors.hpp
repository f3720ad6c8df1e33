#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qgeom/algebra.hpp"
#include "qgeom/polynomial.hpp"

namespace qgeom {

/// Finite-dimensional real vector space with a bilinear product held as
/// structure constants: product(e_i, e_j) = sum_k c[i][j](k) e_k.
struct FiniteAlgebra {
  enum class Flavor { lie, jordan, generic };

  int dim = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<RVec>> structure;  // structure[i][j] = coords of B(e_i, e_j)
  Flavor flavor = Flavor::generic;

  RVec product(const RVec& u, const RVec& v) const {
    if (u.size() != dim || v.size() != dim) throw DimensionMismatch("FiniteAlgebra::product");
    RVec out = RVec::Zero(dim);
    for (int i = 0; i < dim; ++i) {
      if (u(i) == 0.0) continue;
      for (int j = 0; j < dim; ++j) {
        if (v(j) == 0.0) continue;
        out += u(i) * v(j) * structure[i][j];
      }
    }
    return out;
  }

  /// Defect of the flavor axioms on all basis triples. Lie checks antisymmetry
  /// plus Jacobi; Jordan checks symmetry.
  double flavor_defect() const {
    double worst = 0.0;
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        const RVec bij = structure[i][j];
        const RVec bji = structure[j][i];
        if (flavor == Flavor::lie)
          worst = std::max(worst, (bij + bji).cwiseAbs().maxCoeff());
        else if (flavor == Flavor::jordan)
          worst = std::max(worst, (bij - bji).cwiseAbs().maxCoeff());
      }
    }
    if (flavor == Flavor::lie) {
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          for (int k = 0; k < dim; ++k) {
            const RVec jac = product(basis(i), product(basis(j), basis(k))) +
                             product(basis(j), product(basis(k), basis(i))) +
                             product(basis(k), product(basis(i), basis(j)));
            worst = std::max(worst, jac.cwiseAbs().maxCoeff());
          }
    }
    return worst;
  }

  RVec basis(int i) const {
    RVec e = RVec::Zero(dim);
    e(i) = 1.0;
    return e;
  }
};

using DualPoint = RVec;

/// Pairing of an algebra vector with a dual point.
inline double hat(const RVec& v, const DualPoint& alpha) {
  if (v.size() != alpha.size()) throw DimensionMismatch("hat");
  return v.dot(alpha);
}

/// Contravariant 2-tensor on the dual induced by the bilinear product:
/// T(d v1^, d v2^)(alpha) = alpha(B(v1, v2)). Linear in the point.
struct TensorField {
  enum class Kind { poisson, riemann, generic };

  FiniteAlgebra algebra;
  Kind kind = Kind::generic;

  double eval(const RVec& v1, const RVec& v2, const DualPoint& alpha) const {
    if (alpha.size() != algebra.dim) throw DimensionMismatch("TensorField::eval");
    return hat(algebra.product(v1, v2), alpha);
  }

  /// Component table T^{ij}(alpha).
  RMat components(const DualPoint& alpha) const {
    RMat t(algebra.dim, algebra.dim);
    for (int i = 0; i < algebra.dim; ++i)
      for (int j = 0; j < algebra.dim; ++j) t(i, j) = hat(algebra.structure[i][j], alpha);
    return t;
  }
};

inline double tau_eval(const TensorField& t, const RVec& v1, const RVec& v2,
                       const DualPoint& alpha) {
  return t.eval(v1, v2, alpha);
}

/// Bidifferential extension to polynomials, kept polynomial-valued so brackets
/// can be nested: {f,g} = sum_{ij} df/dx_i dg/dx_j T^{ij}, with T^{ij} linear.
inline Polynomial bracket_poly(const TensorField& t, const Polynomial& f, const Polynomial& g) {
  const int d = t.algebra.dim;
  Polynomial out(d);
  for (int i = 0; i < d; ++i) {
    const Polynomial fi = f.derivative(i);
    if (fi.terms().empty()) continue;
    for (int j = 0; j < d; ++j) {
      const Polynomial gj = g.derivative(j);
      if (gj.terms().empty()) continue;
      Polynomial tij(d);
      for (int m = 0; m < d; ++m) {
        const double c = t.algebra.structure[i][j](m);
        if (c != 0.0) tij += Polynomial::coordinate(d, m) * c;
      }
      out += fi * gj * tij;
    }
  }
  return out;
}

inline double poisson_bracket(const TensorField& t, const Polynomial& f, const Polynomial& g,
                              const DualPoint& alpha) {
  return bracket_poly(t, f, g).eval(alpha);
}

/// |T(dv^, d(fg)) - T(dv^, df) g - f T(dv^, dg)| at alpha. Zero for any
/// bidifferential extension; kept as an explicit check.
inline double leibniz_defect(const TensorField& t, const RVec& v, const Polynomial& f,
                             const Polynomial& g, const DualPoint& alpha) {
  const int d = t.algebra.dim;
  Polynomial vhat(d);
  for (int i = 0; i < d; ++i)
    if (v(i) != 0.0) vhat += Polynomial::coordinate(d, i) * v(i);
  const double lhs = poisson_bracket(t, vhat, f * g, alpha);
  const double rhs = poisson_bracket(t, vhat, f, alpha) * g.eval(alpha) +
                     f.eval(alpha) * poisson_bracket(t, vhat, g, alpha);
  return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Built-in algebras

/// Three-dimensional family B(v1,v2)=a3 v3, B(v2,v3)=a1 v1, B(v3,v1)=a2 v2.
/// Jacobi holds for every choice of (a1, a2, a3).
inline FiniteAlgebra threedim_algebra(double a1, double a2, double a3) {
  FiniteAlgebra alg;
  alg.dim = 3;
  alg.labels = {"v1", "v2", "v3"};
  alg.flavor = FiniteAlgebra::Flavor::lie;
  alg.structure.assign(3, std::vector<RVec>(3, RVec::Zero(3)));
  auto set = [&](int i, int j, int k, double a) {
    RVec v = RVec::Zero(3);
    v(k) = a;
    alg.structure[i][j] = v;
    alg.structure[j][i] = -v;
  };
  set(0, 1, 2, a3);
  set(1, 2, 0, a1);
  set(2, 0, 1, a2);
  return alg;
}

/// Quadratic invariant C = (a1 x1^2 + a2 x2^2 + a3 x3^2) / 2 of the family.
inline Polynomial threedim_casimir(double a1, double a2, double a3) {
  Polynomial c(3);
  const double a[3] = {a1, a2, a3};
  for (int i = 0; i < 3; ++i) {
    const Polynomial xi = Polynomial::coordinate(3, i);
    c += xi * xi * (0.5 * a[i]);
  }
  return c;
}

namespace detail {

/// Expansion coefficients of a Hermitian 2x2 matrix in the sigma basis,
/// c_m = Tr(sigma_m M) / 2.
inline RVec pauli_coords(const CMat& m) {
  RVec c(4);
  for (int k = 0; k < 4; ++k) c(k) = 0.5 * (pauli(k) * m).trace().real();
  return c;
}

inline FiniteAlgebra pauli_structure(FiniteAlgebra::Flavor flavor) {
  FiniteAlgebra alg;
  alg.dim = 4;
  alg.labels = {"y0", "y1", "y2", "y3"};
  alg.flavor = flavor;
  alg.structure.assign(4, std::vector<RVec>(4, RVec::Zero(4)));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const CMat prod = flavor == FiniteAlgebra::Flavor::lie
                            ? lie_product(pauli(i), pauli(j))
                            : jordan_product(pauli(i), pauli(j));
      alg.structure[i][j] = pauli_coords(prod);
    }
  }
  return alg;
}

}  // namespace detail

/// Poisson and Riemann tensors of the 2x2 Hermitian algebra in the coordinates
/// y_a(A) = Tr(sigma_a A) / 2. Structure constants are taken from the matrix
/// products themselves, so the sigma_k sigma_l = delta_kl sigma_0 + i eps_klm
/// sigma_m identity enters with its trace part included.
inline std::pair<TensorField, TensorField> u2_tensors() {
  TensorField lambda{detail::pauli_structure(FiniteAlgebra::Flavor::lie),
                     TensorField::Kind::poisson};
  TensorField riemann{detail::pauli_structure(FiniteAlgebra::Flavor::jordan),
                      TensorField::Kind::riemann};
  return {lambda, riemann};
}

/// Vector field of the k-th coordinate under a Poisson tensor: component j is
/// T^{kj}(alpha).
inline RVec hamiltonian_field(const TensorField& t, int k, const DualPoint& alpha) {
  return t.components(alpha).row(k).transpose();
}

/// Same contraction for a symmetric tensor.
inline RVec gradient_field(const TensorField& t, int k, const DualPoint& alpha) {
  return t.components(alpha).row(k).transpose();
}

// ---------------------------------------------------------------------------
// Vector-field utilities

using VectorField = std::function<RVec(const DualPoint&)>;

namespace detail {

inline RVec fd_lie_bracket_step(const VectorField& x, const VectorField& y,
                                const DualPoint& alpha, double h) {
  const int d = static_cast<int>(alpha.size());
  const RVec xa = x(alpha);
  const RVec ya = y(alpha);
  RVec out = RVec::Zero(d);
  for (int m = 0; m < d; ++m) {
    DualPoint ap = alpha, am = alpha;
    ap(m) += h;
    am(m) -= h;
    const RVec dy = (y(ap) - y(am)) / (2.0 * h);
    const RVec dx = (x(ap) - x(am)) / (2.0 * h);
    out += xa(m) * dy - ya(m) * dx;
  }
  return out;
}

}  // namespace detail

/// Central-difference Lie bracket [X,Y]^j = X^m d_m Y^j - Y^m d_m X^j at step
/// h, falling back to a Richardson combination with the 10h stencil when the
/// two stencils disagree beyond round-off.
inline RVec fd_lie_bracket(const VectorField& x, const VectorField& y, const DualPoint& alpha,
                           double h = 1e-5) {
  const RVec fine = detail::fd_lie_bracket_step(x, y, alpha, h);
  const RVec coarse = detail::fd_lie_bracket_step(x, y, alpha, 10.0 * h);
  if ((fine - coarse).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, fine.cwiseAbs().maxCoeff()))
    return fine;
  return (100.0 * fine - coarse) / 99.0;
}

/// Central-difference Lie derivative of a 2-tensor along a field:
/// (L_X T)^{ij} = X^m d_m T^{ij} - T^{mj} d_m X^i - T^{im} d_m X^j.
inline RMat fd_lie_derivative_tensor(const VectorField& x,
                                     const std::function<RMat(const DualPoint&)>& tensor,
                                     const DualPoint& alpha, double h = 1e-5) {
  const int d = static_cast<int>(alpha.size());
  const RVec xa = x(alpha);
  const RMat ta = tensor(alpha);
  RMat out = RMat::Zero(d, d);
  std::vector<RMat> dt(d);
  std::vector<RVec> dx(d);
  for (int m = 0; m < d; ++m) {
    DualPoint ap = alpha, am = alpha;
    ap(m) += h;
    am(m) -= h;
    dt[m] = (tensor(ap) - tensor(am)) / (2.0 * h);
    dx[m] = (x(ap) - x(am)) / (2.0 * h);
  }
  for (int m = 0; m < d; ++m) out += xa(m) * dt[m];
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int m = 0; m < d; ++m) out(i, j) -= ta(m, j) * dx[m](i) + ta(i, m) * dx[m](j);
  return out;
}

/// Fixed-step RK4 flow of a vector field.
inline RVec rk4_flow(const VectorField& f, RVec y, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  for (int s = 0; s < steps; ++s) {
    const RVec k1 = f(y);
    const RVec k2 = f(y + 0.5 * h * k1);
    const RVec k3 = f(y + 0.5 * h * k2);
    const RVec k4 = f(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace qgeom
