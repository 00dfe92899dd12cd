#include <doctest.h>

#include <cmath>

#include "test_util.hpp"

using namespace specrange;
using testutil::mat;

TEST_CASE("matrix product and adjoint against hand values") {
  const ComplexMatrix a = mat(2, 2, {Complex(1, 1), Complex(0, 2), Complex(3, 0), Complex(1, -1)});
  const ComplexMatrix b = mat(2, 2, {Complex(2, 0), Complex(0, 0), Complex(1, 0), Complex(0, 1)});
  const ComplexMatrix c = a.multiply(b);
  CHECK(std::abs(c(0, 0) - Complex(2, 4)) < 1e-15);
  CHECK(std::abs(c(0, 1) - Complex(-2, 0)) < 1e-15);
  CHECK(std::abs(c(1, 0) - Complex(7, -1)) < 1e-15);
  CHECK(std::abs(c(1, 1) - Complex(1, 1)) < 1e-15);

  const ComplexMatrix ah = a.adjoint();
  CHECK(ah(0, 1) == std::conj(a(1, 0)));
  CHECK_THROWS_AS((void)a.multiply(ComplexMatrix(3, 2)), InputError);
}

TEST_CASE("inner product convention: linear in the first argument") {
  const std::vector<Complex> u{Complex(1, 2), Complex(0, -1)};
  const std::vector<Complex> v{Complex(2, 0), Complex(1, 1)};
  const Complex uv = vec_inner(u, v);
  CHECK(std::abs(uv - (u[0] * std::conj(v[0]) + u[1] * std::conj(v[1]))) < 1e-15);
  CHECK(std::abs(vec_inner(v, u) - std::conj(uv)) < 1e-15);
  std::vector<Complex> u2 = u;
  const Complex alpha(0.5, -1.5);
  for (Complex& x : u2) x *= alpha;
  CHECK(std::abs(vec_inner(u2, v) - alpha * uv) < 1e-14);
}

TEST_CASE("hermitian constructor symmetrizes and bounds the defect") {
  ComplexMatrix near(2, 2);
  near(0, 0) = 1.0;
  near(1, 1) = 2.0;
  near(0, 1) = Complex(0.5, 0.25);
  near(1, 0) = std::conj(Complex(0.5, 0.25)) + Complex(1e-14, 0);
  const HermitianMatrix h = HermitianMatrix::from_matrix(near);
  CHECK(h.symmetrization_defect() <= 1e-13);
  CHECK(h.matrix()(0, 1) == std::conj(h.matrix()(1, 0)));

  ComplexMatrix far = near;
  far(1, 0) += Complex(1e-3, 0);
  CHECK_THROWS_AS((void)HermitianMatrix::from_matrix(far), InputError);

  ComplexMatrix unmirrored = near;  // off by 1e-14, not exact
  CHECK_THROWS_AS((void)HermitianMatrix::from_exact(std::move(unmirrored)), InputError);
}

TEST_CASE("eigensolver on a known 2x2 and ordering") {
  const HermitianMatrix h =
      HermitianMatrix::from_exact(mat(2, 2, {Complex(0), Complex(1), Complex(1), Complex(0)}));
  const EigenDecomposition e = hermitian_eig(h);
  CHECK(e.values[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<Complex> x = e.vectors.column(0);
  CHECK(std::abs(vec_norm(x) - 1.0) < 1e-12);
}

TEST_CASE("values-only path agrees with the full decomposition") {
  Rng rng(42);
  const HermitianMatrix h = testutil::random_hermitian(6, rng);
  const EigenDecomposition full = hermitian_eig(h);
  const std::vector<double> vals = hermitian_eigenvalues(h);
  REQUIRE(vals.size() == 6);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(vals[i] == doctest::Approx(full.values[i]).epsilon(1e-12));
}

TEST_CASE("compression onto coordinate columns picks the submatrix") {
  Rng rng(7);
  const HermitianMatrix h = testutil::random_hermitian(4, rng);
  ComplexMatrix basis(4, 2);
  basis(1, 0) = 1.0;
  basis(3, 1) = 1.0;
  const HermitianMatrix c = compress_hermitian(h, basis);
  CHECK(std::abs(c.matrix()(0, 0) - h.matrix()(1, 1)) < 1e-15);
  CHECK(std::abs(c.matrix()(0, 1) - h.matrix()(1, 3)) < 1e-15);
  CHECK(std::abs(c.matrix()(1, 1) - h.matrix()(3, 3)) < 1e-15);

  ComplexMatrix skew(4, 2);  // not orthonormal
  skew(0, 0) = 1.0;
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS((void)compress(h.matrix(), skew), InputError);
}

TEST_CASE("orthonormalize drops dependent columns") {
  ComplexMatrix cols(3, 3);
  cols(0, 0) = 1.0;
  cols(0, 1) = 2.0;  // dependent on column 0
  cols(1, 2) = Complex(0, 3);
  const ComplexMatrix q = orthonormalize(cols, 1e-12);
  REQUIRE(q.cols() == 2);
  CHECK(std::abs(vec_inner(q.column(0), q.column(1))) < 1e-12);
  CHECK(std::abs(vec_norm(q.column(0)) - 1.0) < 1e-12);
}

TEST_CASE("quadratic form basics") {
  const HermitianMatrix h =
      HermitianMatrix::from_exact(mat(2, 2, {Complex(2), Complex(0, 1), Complex(0, -1), Complex(5)}));
  CHECK(quad_form_real(h, {Complex(1), Complex(0)}) == doctest::Approx(2.0));
  // scale invariance of the normalized form
  CHECK(quad_form_real(h, {Complex(3), Complex(0)}) == doctest::Approx(2.0));
  CHECK_THROWS_AS((void)quad_form(h.matrix(), {Complex(0), Complex(0)}), InputError);
}
