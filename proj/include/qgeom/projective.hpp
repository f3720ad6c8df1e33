#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qgeom/algebra.hpp"
#include "qgeom/rng.hpp"

namespace qgeom {

// ---------------------------------------------------------------------------
// Rays and charts

/// Point of projective space: a unit representative plus affine chart data.
/// The chart pivots on the largest-modulus coordinate, which keeps every chart
/// coordinate bounded by one.
struct RayPoint {
  CVec representative;  // unit norm
  int chart_index = 0;
  CVec chart_coords;  // z_k / z_pivot for k != pivot, increasing k

  static RayPoint from_vector(const CVec& v) {
    const double norm = v.norm();
    if (norm < 1e-150) throw NullVector("RayPoint");
    RayPoint p;
    p.representative = v / norm;
    Eigen::Index pivot = 0;
    p.representative.cwiseAbs().maxCoeff(&pivot);
    p.chart_index = static_cast<int>(pivot);
    p.chart_coords = CVec(v.size() - 1);
    Eigen::Index at = 0;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (k == pivot) continue;
      p.chart_coords(at++) = p.representative(k) / p.representative(pivot);
    }
    return p;
  }

  Eigen::Index ambient_dim() const { return representative.size(); }

  double pivot_modulus() const { return std::abs(representative(chart_index)); }

  bool chart_valid() const {
    return pivot_modulus() >= 1.0 / std::sqrt(static_cast<double>(ambient_dim()));
  }
};

/// Ambient vector with 1 at the pivot slot and the chart coordinates elsewhere.
inline CVec chart_embed(const CVec& w, int pivot) {
  CVec v(w.size() + 1);
  Eigen::Index at = 0;
  for (Eigen::Index k = 0; k < v.size(); ++k)
    v(k) = (k == pivot) ? cplx(1.0, 0.0) : w(at++);
  return v;
}

inline RayPoint random_ray(Rng& rng, Eigen::Index ambient_dim) {
  return RayPoint::from_vector(random_unit_vector(rng, ambient_dim));
}

// ---------------------------------------------------------------------------
// Expectation-value functions

inline cplx expectation(const CMat& a, const CVec& psi) {
  if (a.rows() != psi.size()) throw DimensionMismatch("expectation");
  return psi.dot(a * psi) / psi.squaredNorm();
}

/// Scalar field on projective space, either backed by a Hermitian operator or
/// an arbitrary sampled callable.
struct KahlerFunction {
  enum class Kind { expectation, sampled };

  Kind kind;
  CMat op;  // Hermitian when kind == expectation
  std::function<double(const RayPoint&)> sampled;

  static KahlerFunction from_operator(const CMat& a) {
    if (hermiticity_defect(a) > 1e-10) throw NotHermitian("KahlerFunction");
    return KahlerFunction{Kind::expectation, 0.5 * (a + a.adjoint()), {}};
  }

  static KahlerFunction from_callable(std::function<double(const RayPoint&)> f) {
    return KahlerFunction{Kind::sampled, {}, std::move(f)};
  }

  double eval(const RayPoint& p) const {
    if (kind == Kind::expectation) return expectation(op, p.representative).real();
    return sampled(p);
  }

  double eval_vector(const CVec& psi) const {
    if (kind == Kind::expectation) return expectation(op, psi).real();
    return sampled(RayPoint::from_vector(psi));
  }
};

// ---------------------------------------------------------------------------
// Ambient structures on the Hilbert space seen as a real manifold

/// Dilation and phase generators at psi: the pair (psi, i psi).
inline std::pair<CVec, CVec> ambient_fields(const CVec& psi) {
  return {psi, CVec(cplx(0.0, 1.0) * psi)};
}

/// Covariant Hermitian tensor on constant tangent fields, <u|v>.
inline cplx ambient_hermitian_form(const CVec& u, const CVec& v) {
  if (u.size() != v.size()) throw DimensionMismatch("ambient_hermitian_form");
  return u.dot(v);
}

inline CVec complex_structure(const CVec& u) { return cplx(0.0, 1.0) * u; }

/// Differential of a real function on the punctured Hilbert space, stored as
/// the complex gradient with components df/dq_j + i df/dp_j, so that
/// df[u] = Re <grad|u>.
struct AmbientDifferential {
  double value;
  CVec grad;
};

/// Analytic differential of the expectation function of a Hermitian operator.
inline AmbientDifferential expectation_differential(const CMat& a, const CVec& psi) {
  const double s = psi.squaredNorm();
  const double val = expectation(a, psi).real();
  AmbientDifferential d;
  d.value = val;
  d.grad = (2.0 / s) * (a * psi - val * psi);
  return d;
}

/// Central-difference differential of a sampled ray function.
inline AmbientDifferential sampled_differential(const KahlerFunction& f, const CVec& psi,
                                                double h = 1e-5) {
  AmbientDifferential d;
  d.value = f.eval_vector(psi);
  d.grad = CVec(psi.size());
  for (Eigen::Index j = 0; j < psi.size(); ++j) {
    CVec pq = psi, mq = psi, pp = psi, mp = psi;
    pq(j) += h;
    mq(j) -= h;
    pp(j) += cplx(0.0, h);
    mp(j) -= cplx(0.0, h);
    const double dq = (f.eval_vector(pq) - f.eval_vector(mq)) / (2.0 * h);
    const double dp = (f.eval_vector(pp) - f.eval_vector(mp)) / (2.0 * h);
    d.grad(j) = cplx(dq, dp);
  }
  return d;
}

inline AmbientDifferential differential(const KahlerFunction& f, const CVec& psi) {
  if (f.kind == KahlerFunction::Kind::expectation)
    return expectation_differential(f.op, psi);
  return sampled_differential(f, psi);
}

struct ProjectedPair {
  double gtilde;   // symmetric part
  double ltilde;   // antisymmetric part
};

/// Projected contravariant tensors evaluated on two differentials:
///   G~ = e^sigma G - Delta (x) Delta - Gamma (x) Gamma
///   L~ = e^sigma L - (Delta (x) Gamma - Gamma (x) Delta)
/// with e^sigma = <psi|psi>. The ambient contravariant pair is normalized as
/// G + iL = <grad f|grad g> / 2, which makes the projected Hermitian tensor
/// the exact inverse of the affine-chart metric. Both outputs are invariant
/// under rescaling of the representative.
inline ProjectedPair projected_tensor_pair(const CVec& psi, const AmbientDifferential& df,
                                           const AmbientDifferential& dg) {
  const double s = psi.squaredNorm();
  if (s < 1e-300) throw NullVector("projected_tensor_pair");
  const cplx inner = df.grad.dot(dg.grad);
  const double g_amb = 0.5 * inner.real();
  const double l_amb = 0.5 * inner.imag();
  const cplx fpsi = df.grad.dot(psi);
  const cplx gpsi = dg.grad.dot(psi);
  const double delta_f = fpsi.real();
  const double delta_g = gpsi.real();
  const double gamma_f = -fpsi.imag();
  const double gamma_g = -gpsi.imag();
  return ProjectedPair{s * g_amb - delta_f * delta_g - gamma_f * gamma_g,
                       s * l_amb - (delta_f * gamma_g - gamma_f * delta_g)};
}

inline ProjectedPair projectable_tensors(const CVec& psi, const KahlerFunction& f,
                                         const KahlerFunction& g) {
  return projected_tensor_pair(psi, differential(f, psi), differential(g, psi));
}

// ---------------------------------------------------------------------------
// Star product

struct StarResult {
  cplx value;                // f_A f_B + (G~ + iL~)(df_A, df_B) / 2
  cplx product_expectation;  // expectation of the operator product AB
  double defect;
};

/// Nonlocal product of two operator-backed functions, evaluated through the
/// projected tensors and extended complex-bilinearly over Hermitian parts.
/// The result must reproduce the expectation of AB.
inline StarResult star_product(const CMat& a, const CMat& b, const RayPoint& p) {
  ensure_same_dim(a, b, "star_product");
  const CVec& psi = p.representative;
  const CMat ah = 0.5 * (a + a.adjoint());
  const CMat aa = cplx(0.0, -0.5) * (a - a.adjoint());
  const CMat bh = 0.5 * (b + b.adjoint());
  const CMat ba = cplx(0.0, -0.5) * (b - b.adjoint());

  const AmbientDifferential dah = expectation_differential(ah, psi);
  const AmbientDifferential daa = expectation_differential(aa, psi);
  const AmbientDifferential dbh = expectation_differential(bh, psi);
  const AmbientDifferential dba = expectation_differential(ba, psi);

  auto k = [&](const AmbientDifferential& x, const AmbientDifferential& y) {
    const ProjectedPair t = projected_tensor_pair(psi, x, y);
    return cplx(t.gtilde, t.ltilde);
  };
  const cplx kbilin =
      k(dah, dbh) - k(daa, dba) + cplx(0.0, 1.0) * (k(dah, dba) + k(daa, dbh));

  const cplx fa = expectation(a, psi);
  const cplx fb = expectation(b, psi);
  StarResult r;
  r.value = fa * fb + 0.5 * kbilin;
  r.product_expectation = expectation(a * b, psi);
  r.defect = std::abs(r.value - r.product_expectation);
  return r;
}

// ---------------------------------------------------------------------------
// Momentum maps

/// Rank-one assignment psi -> |psi><psi|; trace equals <psi|psi>.
inline CMat momentum_map(const CVec& psi) { return psi * psi.adjoint(); }

inline CMat momentum_map_normalized(const CVec& psi) {
  const double s = psi.squaredNorm();
  if (s < 1e-300) throw NullVector("momentum_map_normalized");
  return momentum_map(psi) / s;
}

// ---------------------------------------------------------------------------
// Affine-chart metric and Laplacian

/// Chart Hermitian matrix h_ij = [(1+|w|^2) d_ij - conj(w_i) w_j] / (1+|w|^2)^2.
inline CMat fs_chart_matrix(const CVec& w) {
  const Eigen::Index n = w.size();
  const double s = 1.0 + w.squaredNorm();
  CMat h(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      h(i, j) = ((i == j ? s : 0.0) - std::conj(w(i)) * w(j)) / (s * s);
  return h;
}

/// Hermitian chart form contracted with two chart tangent vectors, conjugating
/// the second slot.
inline cplx fubini_study_form(const RayPoint& p, const CVec& u, const CVec& v) {
  if (!p.chart_valid())
    throw ChartUndefined("pivot modulus " + std::to_string(p.pivot_modulus()));
  if (u.size() != p.chart_coords.size() || v.size() != p.chart_coords.size())
    throw DimensionMismatch("fubini_study_form");
  const CMat h = fs_chart_matrix(p.chart_coords);
  cplx acc = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    for (Eigen::Index j = 0; j < v.size(); ++j) acc += h(i, j) * u(i) * std::conj(v(j));
  return acc;
}

/// Real chart metric in coordinates (x_1..x_n, y_1..y_n), w_k = x_k + i y_k.
/// Scaled by 4 relative to the Hermitian chart form; with this normalization
/// the first nonzero Laplacian eigenvalue on dimension-n projective space is
/// -(n+1), and the n = 1 case is the unit round sphere.
inline RMat fs_real_metric(const CVec& w) {
  const Eigen::Index n = w.size();
  const CMat h = fs_chart_matrix(w);
  const RMat a = h.real();
  const RMat b = h.imag();
  RMat g(2 * n, 2 * n);
  g.topLeftCorner(n, n) = a;
  g.topRightCorner(n, n) = b;
  g.bottomLeftCorner(n, n) = -b;
  g.bottomRightCorner(n, n) = a;
  return 4.0 * g;
}

inline CVec chart_from_real(const RVec& xy) {
  const Eigen::Index n = xy.size() / 2;
  CVec w(n);
  for (Eigen::Index k = 0; k < n; ++k) w(k) = cplx(xy(k), xy(n + k));
  return w;
}

inline RVec chart_to_real(const CVec& w) {
  const Eigen::Index n = w.size();
  RVec xy(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    xy(k) = w(k).real();
    xy(n + k) = w(k).imag();
  }
  return xy;
}

/// Laplace-Beltrami value of f at the chart point of p, by nested central
/// differences of the divergence form (1/sqrt(det g)) d_a (sqrt(det g) g^ab d_b f).
inline double fs_laplacian(const KahlerFunction& f, const RayPoint& p, double h = 1e-3) {
  if (!p.chart_valid())
    throw ChartUndefined("pivot modulus " + std::to_string(p.pivot_modulus()));
  const int pivot = p.chart_index;
  const RVec xy0 = chart_to_real(p.chart_coords);
  const Eigen::Index d = xy0.size();

  auto feval = [&](const RVec& xy) {
    return f.eval(RayPoint::from_vector(chart_embed(chart_from_real(xy), pivot)));
  };
  auto flux = [&](const RVec& xy, Eigen::Index a) {
    const RMat g = fs_real_metric(chart_from_real(xy));
    const RMat ginv = g.inverse();
    const double sq = std::sqrt(g.determinant());
    double acc = 0.0;
    for (Eigen::Index b = 0; b < d; ++b) {
      RVec plus = xy, minus = xy;
      plus(b) += h;
      minus(b) -= h;
      acc += ginv(a, b) * (feval(plus) - feval(minus)) / (2.0 * h);
    }
    return sq * acc;
  };

  const double sq0 = std::sqrt(fs_real_metric(p.chart_coords).determinant());
  double div = 0.0;
  for (Eigen::Index a = 0; a < d; ++a) {
    RVec plus = xy0, minus = xy0;
    plus(a) += h;
    minus(a) -= h;
    div += (flux(plus, a) - flux(minus, a)) / (2.0 * h);
  }
  return div / sq0;
}

// ---------------------------------------------------------------------------
// Eigenfunction classification

enum class KahlerClass { harmonic, first_eigenspace, not_kahlerian, inconclusive };

inline const char* to_string(KahlerClass c) {
  switch (c) {
    case KahlerClass::harmonic: return "harmonic";
    case KahlerClass::first_eigenspace: return "first-eigenspace";
    case KahlerClass::not_kahlerian: return "not-kahlerian";
    default: return "inconclusive";
  }
}

struct KahlerTestResult {
  KahlerClass classification;
  double fitted_eigenvalue;  // least-squares lambda in Lap f = lambda f
  double harmonic_defect;    // max |Lap f| / scale
  double first_defect;       // max |Lap f - lambda_1 f| / scale
  double scale;              // max |f| over the samples
  int samples;
};

/// Applies the numerical Laplacian at random rays and classifies f as a zero
/// mode, a first-eigenspace function (eigenvalue -(n+1)) or neither. Defects
/// that land between the acceptance threshold and ten times it are reported
/// as inconclusive rather than silently classified.
inline KahlerTestResult kahler_test(const KahlerFunction& f, int n, Rng& rng,
                                    int samples = 100, double tol = 1e-3, double h = 1e-3) {
  const double lambda1 = -(n + 1.0);
  double scale = 0.0, worst_h = 0.0, worst_1 = 0.0;
  double num = 0.0, den = 0.0;
  for (int s = 0; s < samples; ++s) {
    const RayPoint p = random_ray(rng, n + 1);
    const double val = f.eval(p);
    const double lap = fs_laplacian(f, p, h);
    scale = std::max(scale, std::abs(val));
    worst_h = std::max(worst_h, std::abs(lap));
    worst_1 = std::max(worst_1, std::abs(lap - lambda1 * val));
    num += lap * val;
    den += val * val;
  }
  KahlerTestResult r;
  r.samples = samples;
  r.scale = scale;
  if (scale < 1e-12) {
    r.classification = KahlerClass::harmonic;
    r.fitted_eigenvalue = 0.0;
    r.harmonic_defect = worst_h;
    r.first_defect = worst_1;
    return r;
  }
  r.fitted_eigenvalue = den > 0.0 ? num / den : 0.0;
  r.harmonic_defect = worst_h / scale;
  r.first_defect = worst_1 / scale;
  if (r.harmonic_defect <= tol) r.classification = KahlerClass::harmonic;
  else if (r.first_defect <= tol) r.classification = KahlerClass::first_eigenspace;
  else if (std::min(r.harmonic_defect, r.first_defect) > 10.0 * tol)
    r.classification = KahlerClass::not_kahlerian;
  else r.classification = KahlerClass::inconclusive;
  return r;
}

// ---------------------------------------------------------------------------
// Laplacian spectrum table

struct SpectrumEntry {
  int n;
  int l;
  long long eigenvalue;              // -l (n + l)
  unsigned long long multiplicity;   // n (n + 2l) ((n+l-1)! / (n! l!))^2
};

namespace detail {

inline __int128 checked_mul128(__int128 a, __int128 b) {
  constexpr __int128 kMax = static_cast<__int128>((~static_cast<unsigned __int128>(0)) >> 1);
  if (a != 0 && b > kMax / a) throw std::overflow_error("laplacian_spectrum: overflow");
  return a * b;
}

/// Binomial coefficient by the multiplicative formula; every intermediate
/// division is exact.
inline __int128 binomial128(int m, int l) {
  if (l < 0 || l > m) return 0;
  l = std::min(l, m - l);
  __int128 c = 1;
  for (int i = 1; i <= l; ++i) {
    c = checked_mul128(c, m - l + i);
    c /= i;
  }
  return c;
}

}  // namespace detail

/// Exact integer spectrum rows for l = 0..l_max. The factorial ratio in the
/// multiplicity reduces to (n + 2l) C(n+l-1, l)^2 / n, evaluated in checked
/// 128-bit arithmetic; values outside the 64-bit result range are rejected.
inline std::vector<SpectrumEntry> laplacian_spectrum(int n, int l_max) {
  if (n < 1 || l_max < 0) throw std::invalid_argument("laplacian_spectrum: n >= 1, l_max >= 0");
  std::vector<SpectrumEntry> out;
  out.reserve(l_max + 1);
  for (int l = 0; l <= l_max; ++l) {
    SpectrumEntry e;
    e.n = n;
    e.l = l;
    e.eigenvalue = -static_cast<long long>(l) * (n + l);
    const __int128 c = detail::binomial128(n + l - 1, l);
    const __int128 num = detail::checked_mul128(detail::checked_mul128(n + 2 * l, c), c);
    if (num % n != 0) throw std::logic_error("laplacian_spectrum: non-integer multiplicity");
    const __int128 mult = num / n;
    if (mult > static_cast<__int128>(~0ULL))
      throw std::overflow_error("laplacian_spectrum: multiplicity overflow");
    e.multiplicity = static_cast<unsigned long long>(mult);
    out.push_back(e);
  }
  return out;
}

}  // namespace qgeom
