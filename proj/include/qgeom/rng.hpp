#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "qgeom/algebra.hpp"

namespace qgeom {

/// xoshiro256** with splitmix64 seeding. Self-contained so that streams are
/// bit-identical across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  cplx cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return cplx(re, im) * M_SQRT1_2;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> state_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline CVec random_complex_vector(Rng& rng, Eigen::Index n) {
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.cgaussian();
  return v;
}

/// Unit vector with unitary-invariant distribution.
inline CVec random_unit_vector(Rng& rng, Eigen::Index n) {
  CVec v = random_complex_vector(rng, n);
  double norm = v.norm();
  while (norm < 1e-12) {
    v = random_complex_vector(rng, n);
    norm = v.norm();
  }
  return v / norm;
}

inline CMat random_complex_matrix(Rng& rng, Eigen::Index n) {
  CMat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rng.cgaussian();
  return m;
}

inline CMat random_hermitian(Rng& rng, Eigen::Index n) {
  const CMat m = random_complex_matrix(rng, n);
  return 0.5 * (m + m.adjoint());
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of the R diagonal absorbed into Q.
inline CMat random_unitary(Rng& rng, Eigen::Index n) {
  const CMat m = random_complex_matrix(rng, n);
  Eigen::HouseholderQR<CMat> qr(m);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx d = r(i, i);
    const double a = std::abs(d);
    q.col(i) *= (a > 0.0) ? d / a : cplx(1.0, 0.0);
  }
  return q;
}

}  // namespace qgeom
