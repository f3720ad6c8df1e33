#include <doctest.h>

#include "qgeom/dual_tensors.hpp"
#include "qgeom/rng.hpp"
#include "test_support.hpp"

using namespace qgeom;

namespace {

RVec rvec3(double a, double b, double c) {
  RVec v(3);
  v << a, b, c;
  return v;
}

RVec rvec4(double a, double b, double c, double d) {
  RVec v(4);
  v << a, b, c, d;
  return v;
}

RVec random_point(Rng& rng, int d, double lo = -2.0, double hi = 2.0) {
  RVec v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.uniform(lo, hi);
  return v;
}

/// Structure constants of the 2x2 Hermitian basis under the i/2 bracket,
/// recomputed here with the naive multiplication oracle.
RVec pauli_lie_coords_oracle(int a, int b) {
  const CMat prod1 = oracle::mul(pauli(a), pauli(b));
  const CMat prod2 = oracle::mul(pauli(b), pauli(a));
  const CMat bracket = cplx(0, 0.5) * (prod1 - prod2);
  RVec out(4);
  for (int m = 0; m < 4; ++m)
    out(m) = 0.5 * oracle::trace_of_product(pauli(m), bracket).real();
  return out;
}

}  // namespace

TEST_CASE("hat pairing") {
  const RVec alpha = rvec3(4, 5, 6);
  for (int i = 0; i < 3; ++i) {
    RVec e = RVec::Zero(3);
    e(i) = 1.0;
    CHECK(hat(e, alpha) == alpha(i));
  }
  CHECK(hat(RVec::Zero(3), alpha) == 0.0);
  CHECK(hat(rvec3(1, 2, 3), alpha) == 32.0);
  CHECK_THROWS_AS(hat(RVec::Zero(2), alpha), DimensionMismatch);
}

TEST_CASE("three dimensional family: structure and tensor evaluation") {
  const FiniteAlgebra alg = threedim_algebra(1, 1, 1);
  CHECK(alg.flavor_defect() == 0.0);
  const TensorField t{alg, TensorField::Kind::poisson};

  CHECK(tau_eval(t, alg.basis(0), alg.basis(1), rvec3(0, 0, 1)) == 1.0);

  Rng rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const RVec v = random_point(rng, 3);
    const RVec alpha = random_point(rng, 3);
    CHECK(std::abs(tau_eval(t, v, v, alpha)) < 1e-14);
  }

  // Jacobi holds for every parameter choice in this family.
  for (int trial = 0; trial < 10; ++trial) {
    const FiniteAlgebra a = threedim_algebra(rng.uniform(-2, 2), rng.uniform(-2, 2),
                                             rng.uniform(-2, 2));
    CHECK(a.flavor_defect() < 1e-12);
  }
}

TEST_CASE("coordinate brackets match the structure constants") {
  Rng rng(52);
  const double a1 = 1.3, a2 = -0.7, a3 = 2.1;
  const TensorField t{threedim_algebra(a1, a2, a3), TensorField::Kind::poisson};
  const Polynomial x1 = Polynomial::coordinate(3, 0);
  const Polynomial x2 = Polynomial::coordinate(3, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const RVec alpha = random_point(rng, 3);
    CHECK(poisson_bracket(t, x1, x2, alpha) == doctest::Approx(a3 * alpha(2)).epsilon(1e-13));
    CHECK(poisson_bracket(t, x1, x1, alpha) == 0.0);
  }
}

TEST_CASE("the quadratic invariant annihilates every coordinate") {
  Rng rng(53);
  for (int draw = 0; draw < 10; ++draw) {
    const double a1 = rng.uniform(-2, 2), a2 = rng.uniform(-2, 2), a3 = rng.uniform(-2, 2);
    const TensorField t{threedim_algebra(a1, a2, a3), TensorField::Kind::poisson};
    const Polynomial cas = threedim_casimir(a1, a2, a3);
    for (int k = 0; k < 3; ++k) {
      const Polynomial xk = Polynomial::coordinate(3, k);
      for (int pt = 0; pt < 50; ++pt)
        CHECK(std::abs(poisson_bracket(t, cas, xk, random_point(rng, 3))) < 1e-12);
    }
  }
}

TEST_CASE("derivation of the pointwise product") {
  Rng rng(54);
  const TensorField t{threedim_algebra(1, 1, 1), TensorField::Kind::poisson};
  const Polynomial x1 = Polynomial::coordinate(3, 0);
  const Polynomial x2 = Polynomial::coordinate(3, 1);

  // Linear arguments.
  for (int trial = 0; trial < 10; ++trial)
    CHECK(leibniz_defect(t, random_point(rng, 3), x1, x2, random_point(rng, 3)) < 1e-14);

  // f = x1^2, g = x2 against the hand-expanded partial derivatives.
  const Polynomial f = x1 * x1;
  for (int trial = 0; trial < 20; ++trial) {
    const RVec al = random_point(rng, 3);
    CHECK(leibniz_defect(t, rvec3(0, 0, 1), f, x2, al) < 1e-12);
    // Hand expansion of tau(dv3, d(x1^2 x2)): the partials of x1^2 x2 are
    // (2 x1 x2, x1^2, 0) and T^{31} = x2, T^{32} = -x1 for unit parameters.
    const double expanded = 2 * al(0) * al(1) * al(1) - al(0) * al(0) * al(0);
    const Polynomial fg = f * x2;
    Polynomial v3hat = Polynomial::coordinate(3, 2);
    CHECK(poisson_bracket(t, v3hat, fg, al) == doctest::Approx(expanded).epsilon(1e-13));
  }

  // A symmetric tensor is just as much a derivation of the pointwise product.
  auto [lambda, riemann] = u2_tensors();
  const Polynomial y1 = Polynomial::coordinate(4, 1);
  const Polynomial y2 = Polynomial::coordinate(4, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const RVec al = random_point(rng, 4);
    CHECK(leibniz_defect(riemann, rvec4(0, 1, 0, 0), y1 * y1, y2, al) < 1e-12);
  }
}

TEST_CASE("tensor components of the 2x2 Hermitian algebra") {
  auto [lambda, riemann] = u2_tensors();
  CHECK(lambda.algebra.flavor_defect() < 1e-14);
  CHECK(riemann.algebra.flavor_defect() == 0.0);

  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const RVec al = random_point(rng, 4);
    const RMat l = lambda.components(al);
    const RMat r = riemann.components(al);

    // Row and column zero of the antisymmetric tensor vanish identically.
    for (int j = 0; j < 4; ++j) {
      CHECK(l(0, j) == 0.0);
      CHECK(l(j, 0) == 0.0);
    }
    CHECK((l + l.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((r - r.transpose()).cwiseAbs().maxCoeff() < 1e-14);

    // Symmetric part: R^00 = y0, R^0k = R^k0 = y_k, R^kk = y0 (the trace term
    // of the product of two equal sigmas), off-diagonal spatial entries zero.
    CHECK(r(0, 0) == doctest::Approx(al(0)).epsilon(1e-14));
    for (int k = 1; k < 4; ++k) {
      CHECK(r(0, k) == doctest::Approx(al(k)).epsilon(1e-14));
      CHECK(r(k, 0) == doctest::Approx(al(k)).epsilon(1e-14));
      CHECK(r(k, k) == doctest::Approx(al(0)).epsilon(1e-14));
      for (int m = 1; m < 4; ++m)
        if (m != k) CHECK(std::abs(r(k, m)) < 1e-14);
    }

    // Antisymmetric part against the bracket oracle.
    for (int k = 1; k < 4; ++k)
      for (int m = 1; m < 4; ++m)
        CHECK(l(k, m) == doctest::Approx(pauli_lie_coords_oracle(k, m).dot(al)).epsilon(1e-13));
  }

  // Frozen sign at a concrete point: the bracket of the first two sigmas is
  // minus the third, so Lambda^{12} at alpha = (0,0,0,1) evaluates to -1.
  const RVec oracle_12 = pauli_lie_coords_oracle(1, 2);
  CHECK(oracle_12(3) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(tau_eval(lambda, lambda.algebra.basis(1), lambda.algebra.basis(2), rvec4(0, 0, 0, 1)) ==
        doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("bracket Jacobi identity at random points") {
  Rng rng(56);
  auto [lambda, riemann] = u2_tensors();
  const TensorField three{threedim_algebra(0.8, -1.2, 1.7), TensorField::Kind::poisson};
  for (const TensorField& t : {lambda, three}) {
    const int d = t.algebra.dim;
    for (int pt = 0; pt < 100; ++pt) {
      const RVec al = random_point(rng, d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k) {
            const Polynomial xi = Polynomial::coordinate(d, i);
            const Polynomial xj = Polynomial::coordinate(d, j);
            const Polynomial xk = Polynomial::coordinate(d, k);
            const double sum = poisson_bracket(t, xi, bracket_poly(t, xj, xk), al) +
                               poisson_bracket(t, xj, bracket_poly(t, xk, xi), al) +
                               poisson_bracket(t, xk, bracket_poly(t, xi, xj), al);
            CHECK(std::abs(sum) < 1e-10);
          }
    }
  }
}

TEST_CASE("coordinate vector fields of the 2x2 algebra") {
  auto [lambda, riemann] = u2_tensors();
  Rng rng(57);

  for (int trial = 0; trial < 100; ++trial) {
    const RVec al = random_point(rng, 4);

    // The identity coordinate generates nothing.
    CHECK(hamiltonian_field(lambda, 0, al).cwiseAbs().maxCoeff() == 0.0);

    // Spatial fields follow the bracket structure constants exactly.
    for (int k = 1; k < 4; ++k) {
      const RVec h = hamiltonian_field(lambda, k, al);
      CHECK(std::abs(h(0)) == 0.0);
      for (int j = 1; j < 4; ++j)
        CHECK(h(j) == doctest::Approx(pauli_lie_coords_oracle(k, j).dot(al)).epsilon(1e-12));
    }

    // Gradient fields: X_0 is the dilation field, X_k = y_k d_0 + y_0 d_k.
    const RVec x0 = gradient_field(riemann, 0, al);
    CHECK((x0 - al).cwiseAbs().maxCoeff() < 1e-12);
    for (int k = 1; k < 4; ++k) {
      const RVec xk = gradient_field(riemann, k, al);
      RVec expected = RVec::Zero(4);
      expected(0) = al(k);
      expected(k) = al(0);
      CHECK((xk - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  const RVec x1 = gradient_field(riemann, 1, rvec4(1, 0, 0, 0));
  CHECK((x1 - rvec4(0, 1, 0, 0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("flow of a spatial field preserves the quadratic invariant") {
  const TensorField t{threedim_algebra(1, 1, 1), TensorField::Kind::poisson};
  const Polynomial cas = threedim_casimir(1, 1, 1);
  const VectorField h3 = [&](const DualPoint& al) { return hamiltonian_field(t, 2, al); };
  Rng rng(58);
  for (int trial = 0; trial < 5; ++trial) {
    const RVec start = random_point(rng, 3);
    const double c0 = cas.eval(start);
    const RVec end = rk4_flow(h3, start, 0.0, 1.0, 100);
    CHECK(std::abs(cas.eval(end) - c0) < 1e-8);
  }
}

TEST_CASE("finite-difference commutators of the gradient fields") {
  auto [lambda, riemann] = u2_tensors();
  Rng rng(59);
  auto xfield = [&](int k) {
    return VectorField([&riemann, k](const DualPoint& al) { return gradient_field(riemann, k, al); });
  };
  for (int trial = 0; trial < 20; ++trial) {
    const RVec al = random_point(rng, 4);
    for (int a = 1; a < 4; ++a) {
      for (int b = 1; b < 4; ++b) {
        const RVec br = fd_lie_bracket(xfield(a), xfield(b), al);
        RVec expected = RVec::Zero(4);
        expected(b) += al(a);
        expected(a) -= al(b);
        CHECK((br - expected).cwiseAbs().maxCoeff() < 1e-8);
      }
      // The dilation field commutes with every linear field.
      const RVec br0 = fd_lie_bracket(xfield(0), xfield(a), al);
      CHECK(br0.cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("spatial fields leave the symmetric tensor invariant") {
  auto [lambda, riemann] = u2_tensors();
  auto tensor = [&](const DualPoint& al) { return riemann.components(al); };
  Rng rng(60);
  for (int k = 1; k < 4; ++k) {
    const VectorField hk = [&lambda, k](const DualPoint& al) {
      return hamiltonian_field(lambda, k, al);
    };
    for (int trial = 0; trial < 10; ++trial) {
      const RMat ld = fd_lie_derivative_tensor(hk, tensor, random_point(rng, 4));
      CHECK(ld.cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("the six spatial fields close on a six dimensional algebra") {
  auto [lambda, riemann] = u2_tensors();
  std::vector<VectorField> fields;
  for (int k = 1; k < 4; ++k)
    fields.push_back([&lambda, k](const DualPoint& al) { return hamiltonian_field(lambda, k, al); });
  for (int k = 1; k < 4; ++k)
    fields.push_back([&riemann, k](const DualPoint& al) { return gradient_field(riemann, k, al); });

  // All fields are linear, so each is determined by its matrix of values on
  // the coordinate directions.
  auto field_matrix = [](const VectorField& f) {
    RMat m(4, 4);
    for (int a = 0; a < 4; ++a) {
      RVec e = RVec::Zero(4);
      e(a) = 1.0;
      m.col(a) = f(e);
    }
    return m;
  };
  std::vector<RMat> basis_mats;
  for (const auto& f : fields) basis_mats.push_back(field_matrix(f));

  // Least-squares expansion of every pairwise bracket in the span.
  RMat design(16, 6);
  for (int b = 0; b < 6; ++b)
    design.col(b) = Eigen::Map<const RVec>(basis_mats[b].data(), 16);
  double worst = 0.0;
  RMat structure(15, 6);
  int row = 0;
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      const VectorField br = [&, a, b](const DualPoint& al) {
        return fd_lie_bracket(fields[a], fields[b], al);
      };
      const RMat bm = field_matrix(br);
      const RVec target = Eigen::Map<const RVec>(bm.data(), 16);
      const RVec coeff = design.colPivHouseholderQr().solve(target);
      worst = std::max(worst, (design * coeff - target).cwiseAbs().maxCoeff());
      structure.row(row++) = coeff.transpose();
    }
  }
  CHECK(worst < 1e-8);
  // The isomorphism class is reported, not asserted.
  MESSAGE("closure structure constants (rows = bracket pairs):\n" << structure);
}

TEST_CASE("the symmetric field is not a derivation of its own product") {
  // D = R(dy1, .) acts on basis vectors as v -> sigma_1 o v. Applied to the
  // product of sigma_1 and sigma_3 the Leibniz expansion picks up the trace
  // term (sigma_1 o sigma_1) o sigma_3 = sigma_3 while the direct image
  // vanishes, so the defect is order one.
  auto [lambda, riemann] = u2_tensors();
  const FiniteAlgebra& jord = riemann.algebra;
  const RVec s1 = jord.basis(1), s3 = jord.basis(3);
  const RVec direct = jord.product(s1, jord.product(s1, s3));
  const RVec expand = jord.product(jord.product(s1, s1), s3) + jord.product(s1, jord.product(s1, s3));
  const RVec alpha = rvec4(0, 0, 0, 1);
  const double defect = std::abs(hat(direct, alpha) - hat(expand, alpha));
  CHECK(defect > 0.9);

  // The antisymmetric field is a derivation of the symmetric product; same
  // contraction with the bracket action stays at zero.
  const FiniteAlgebra& lie = lambda.algebra;
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        const RVec lhs = lie.product(lie.basis(a), jord.product(lie.basis(b), lie.basis(c)));
        const RVec rhs = jord.product(lie.product(lie.basis(a), lie.basis(b)), lie.basis(c)) +
                         jord.product(lie.basis(b), lie.product(lie.basis(a), lie.basis(c)));
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
      }
  CHECK(worst < 1e-14);
}
