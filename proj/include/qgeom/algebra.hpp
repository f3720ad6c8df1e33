#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace qgeom {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kDefaultRelTol = 1e-10;
inline constexpr double kHermTol = 1e-12;

// ---------------------------------------------------------------------------
// Errors

struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const std::string& what)
      : std::invalid_argument("dimension mismatch: " + what) {}
};

struct NotHermitian : std::invalid_argument {
  explicit NotHermitian(const std::string& what)
      : std::invalid_argument("not Hermitian: " + what) {}
};

struct NegativeEigenvalue : std::invalid_argument {
  explicit NegativeEigenvalue(const std::string& what)
      : std::invalid_argument("negative eigenvalue: " + what) {}
};

struct ZeroTrace : std::invalid_argument {
  explicit ZeroTrace(const std::string& what)
      : std::invalid_argument("zero trace: " + what) {}
};

struct NullVector : std::invalid_argument {
  explicit NullVector(const std::string& what)
      : std::invalid_argument("null vector: " + what) {}
};

struct NonCommuting : std::invalid_argument {
  explicit NonCommuting(const std::string& what)
      : std::invalid_argument("non-commuting pair: " + what) {}
};

struct ChartUndefined : std::runtime_error {
  explicit ChartUndefined(const std::string& what)
      : std::runtime_error("chart undefined: " + what) {}
};

// ---------------------------------------------------------------------------
// Norms and comparisons

inline double max_norm(const CMat& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double max_norm(const CVec& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// Max-norm defect of a against b, relative to the larger of the two scales.
inline double rel_defect(const CMat& a, const CMat& b) {
  const double scale = std::max(max_norm(a), max_norm(b));
  if (scale == 0.0) return 0.0;
  return max_norm(CMat(a - b)) / scale;
}

inline bool approx_equal(const CMat& a, const CMat& b, double rtol = kDefaultRelTol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return rel_defect(a, b) <= rtol;
}

inline bool all_finite(const CMat& a) {
  return a.allFinite();
}

inline void ensure_square(const CMat& a, const char* who) {
  if (a.rows() != a.cols()) throw DimensionMismatch(std::string(who) + ": matrix not square");
}

inline void ensure_same_dim(const CMat& a, const CMat& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch(std::string(who) + ": " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
}

inline void ensure_finite(const CMat& a, const char* who) {
  if (!all_finite(a)) throw std::invalid_argument(std::string(who) + ": non-finite entries");
}

inline double hermiticity_defect(const CMat& a) {
  const double scale = max_norm(a);
  if (scale == 0.0) return 0.0;
  return max_norm(CMat(a - a.adjoint())) / scale;
}

inline bool is_hermitian(const CMat& a, double tol = kHermTol) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tol;
}

/// Validated Hermitian wrapper. Holds the exactly symmetrized matrix.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const CMat& m, double tol = kHermTol) {
    ensure_square(m, "HermitianMatrix");
    ensure_finite(m, "HermitianMatrix");
    if (hermiticity_defect(m) > tol)
      throw NotHermitian("defect " + std::to_string(hermiticity_defect(m)));
    m_ = 0.5 * (m + m.adjoint());
  }
  const CMat& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  CMat m_;
};

// ---------------------------------------------------------------------------
// Products on the matrix algebra. Real (Hermitian) elements close under the
// symmetric product and the i/2-scaled antisymmetric product; together they
// recover the associative product as ab = a∘b - i[a,b].

template <typename A>
CMat adjoint(const Eigen::MatrixBase<A>& a) {
  return a.adjoint();
}

template <typename A, typename B>
CMat jordan_product(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("jordan_product");
  return 0.5 * (a * b + b * a);
}

template <typename A, typename B>
CMat lie_product(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("lie_product");
  return cplx(0.0, 0.5) * (a * b - b * a);
}

template <typename A, typename B>
CMat recover_product(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return jordan_product(a, b) - cplx(0.0, 1.0) * lie_product(a, b);
}

/// Plain commutator ab - ba.
template <typename A, typename B>
CMat commutator(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("commutator");
  return a * b - b * a;
}

/// Largest singular value.
inline double operator_norm(const CMat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues()(0);
}

/// Frobenius pairing Tr(a† b).
inline cplx frobenius_inner(const CMat& a, const CMat& b) {
  return (a.adjoint() * b).trace();
}

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// ---------------------------------------------------------------------------
// Pauli basis of the 2x2 algebra

inline CMat pauli(int k) {
  CMat s(2, 2);
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: index out of range");
  }
  return s;
}

inline CMat identity(Eigen::Index n) { return CMat::Identity(n, n); }

/// Null space of a (possibly tall) matrix via SVD. Columns span the kernel;
/// singular values below rel_threshold * sigma_max count as zero.
inline CMat null_space(const CMat& m, double rel_threshold = 1e-9) {
  Eigen::JacobiSVD<CMat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = sv.size() == 0 ? 0.0 : sv(0) * rel_threshold;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  const Eigen::Index n = m.cols();
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace qgeom
