#pragma once

#include <map>
#include <vector>

#include "qgeom/algebra.hpp"

namespace qgeom {

/// Sparse real polynomial in d variables, keyed by exponent vectors.
class Polynomial {
 public:
  using Key = std::vector<unsigned>;

  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, double c) {
    Polynomial p(nvars);
    if (c != 0.0) p.terms_[Key(nvars, 0)] = c;
    return p;
  }

  /// The coordinate function x_i.
  static Polynomial coordinate(int nvars, int i) {
    Polynomial p(nvars);
    Key k(nvars, 0);
    k[i] = 1;
    p.terms_[k] = 1.0;
    return p;
  }

  int nvars() const { return nvars_; }
  const std::map<Key, double>& terms() const { return terms_; }

  double eval(const RVec& x) const {
    double acc = 0.0;
    for (const auto& [key, coeff] : terms_) {
      double mono = coeff;
      for (int i = 0; i < nvars_; ++i)
        for (unsigned e = 0; e < key[i]; ++e) mono *= x(i);
      acc += mono;
    }
    return acc;
  }

  Polynomial derivative(int i) const {
    Polynomial out(nvars_);
    for (const auto& [key, coeff] : terms_) {
      if (key[i] == 0) continue;
      Key k = key;
      k[i] -= 1;
      out.add_term(k, coeff * static_cast<double>(key[i]));
    }
    return out;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [key, coeff] : o.terms_) add_term(key, coeff);
    return *this;
  }

  Polynomial operator+(const Polynomial& o) const {
    Polynomial out = *this;
    out += o;
    return out;
  }

  Polynomial operator-(const Polynomial& o) const { return *this + (o * -1.0); }

  Polynomial operator*(double c) const {
    Polynomial out(nvars_);
    if (c == 0.0) return out;
    for (const auto& [key, coeff] : terms_) out.terms_[key] = coeff * c;
    return out;
  }

  Polynomial operator*(const Polynomial& o) const {
    Polynomial out(nvars_);
    for (const auto& [ka, ca] : terms_) {
      for (const auto& [kb, cb] : o.terms_) {
        Key k(nvars_);
        for (int i = 0; i < nvars_; ++i) k[i] = ka[i] + kb[i];
        out.add_term(k, ca * cb);
      }
    }
    return out;
  }

  void add_term(const Key& key, double coeff) {
    auto [it, inserted] = terms_.try_emplace(key, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

 private:
  int nvars_;
  std::map<Key, double> terms_;
};

}  // namespace qgeom
