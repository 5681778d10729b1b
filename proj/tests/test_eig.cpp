#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pencil/eig.hpp"
#include "pencil/rng.hpp"

using namespace pencil;

namespace {

HermitianMatrix random_hermitian(Rng& rng, std::size_t n) {
  std::vector<cplx> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i * n + i] = rng.gaussian();
    for (std::size_t j = i + 1; j < n; ++j) {
      cplx v(rng.gaussian(), rng.gaussian());
      d[i * n + j] = v;
      d[j * n + i] = std::conj(v);
    }
  }
  return HermitianMatrix(n, std::move(d));
}

double reconstruction_error(const HermitianMatrix& m, const EigenDecomposition& ed) {
  const std::size_t n = m.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx sum = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        sum += ed.values[k] * ed.vectors[k][i] * std::conj(ed.vectors[k][j]);
      worst = std::max(worst, std::abs(sum - m(i, j)));
    }
  return worst;
}

double orthonormality_error(const EigenDecomposition& ed) {
  double worst = 0.0;
  for (std::size_t a = 0; a < ed.vectors.size(); ++a)
    for (std::size_t b = 0; b < ed.vectors.size(); ++b) {
      cplx ip = inner(ed.vectors[a], ed.vectors[b]);
      worst = std::max(worst, std::abs(ip - (a == b ? cplx(1.0) : cplx(0.0))));
    }
  return worst;
}

}  // namespace

TEST_CASE("frozen spectra") {
  // diag(1,-1) + swap block: eigenvalues -1,-1,1,1
  HermitianMatrix b1(4, {1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0});
  auto ed = eig(b1);
  REQUIRE(ed.values.size() == 4);
  CHECK(ed.values[0] == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(ed.values[1] == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(ed.values[2] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ed.values[3] == doctest::Approx(1.0).epsilon(1e-13));

  // [[2, i], [-i, 2]] has eigenvalues 1 and 3
  HermitianMatrix c(2, {2.0, cplx(0, 1), cplx(0, -1), 2.0});
  auto edc = eig(c);
  CHECK(edc.values[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(edc.values[1] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(min_eig(c) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(max_eig(c) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(spectral_norm(c) == doctest::Approx(3.0).epsilon(1e-13));

  auto d = HermitianMatrix::diag({3.0, -5.0, 0.25});
  auto edd = eig(d);
  CHECK(edd.values[0] == doctest::Approx(-5.0));
  CHECK(edd.values[1] == doctest::Approx(0.25));
  CHECK(edd.values[2] == doctest::Approx(3.0));
  CHECK(spectral_norm(d) == doctest::Approx(5.0));
}

TEST_CASE("round trip and orthonormality across sizes") {
  Rng rng(42);
  for (std::size_t n : {1, 2, 3, 5, 8, 13, 21}) {
    HermitianMatrix m = random_hermitian(rng, n);
    auto ed = eig(m);
    double scale = std::max(1.0, m.frobenius_norm());
    CHECK(reconstruction_error(m, ed) <= 1e-12 * scale);
    CHECK(orthonormality_error(ed) <= 1e-12);
    for (std::size_t k = 1; k < n; ++k) CHECK(ed.values[k - 1] <= ed.values[k]);
  }
}

TEST_CASE("determinism: identical input bits give identical output bits") {
  Rng rng(7);
  HermitianMatrix m = random_hermitian(rng, 9);
  auto e1 = eig(m);
  auto e2 = eig(m);
  REQUIRE(e1.values.size() == e2.values.size());
  for (std::size_t k = 0; k < e1.values.size(); ++k) {
    CHECK(e1.values[k] == e2.values[k]);
    for (std::size_t i = 0; i < m.dim(); ++i) CHECK(e1.vectors[k][i] == e2.vectors[k][i]);
  }
}

TEST_CASE("classification") {
  CHECK(classify(HermitianMatrix::identity(3)).kind == DefinitenessKind::POSITIVE_DEFINITE);
  CHECK(classify(HermitianMatrix::zero(3)).kind == DefinitenessKind::ZERO);
  CHECK(classify(HermitianMatrix::diag({1, 0})).kind == DefinitenessKind::POSITIVE_SEMIDEFINITE);
  CHECK(classify(HermitianMatrix::diag({-1, 0})).kind == DefinitenessKind::NEGATIVE_SEMIDEFINITE);
  CHECK(classify(HermitianMatrix::diag({-2, -1})).kind == DefinitenessKind::NEGATIVE_DEFINITE);
  CHECK(classify(HermitianMatrix::diag({1, -1})).kind == DefinitenessKind::INDEFINITE);
  // an eigenvalue far below relative tolerance reads as zero
  CHECK(classify(HermitianMatrix::diag({1, 1e-15})).kind ==
        DefinitenessKind::POSITIVE_SEMIDEFINITE);
  // explicit coarse tolerance flattens small negatives
  CHECK(classify(HermitianMatrix::diag({1, -1e-4}), 1e-3).kind ==
        DefinitenessKind::POSITIVE_SEMIDEFINITE);
}

TEST_CASE("constructor guards") {
  CHECK_THROWS_AS(HermitianMatrix(2, {1, 2, 3}), PencilError);
  try {
    HermitianMatrix(2, {1, 2, 3});
  } catch (const PencilError& e) {
    CHECK(e.code() == ErrorCode::DIM_MISMATCH);
  }
  try {
    HermitianMatrix(2, {0, 1, 2, 0});  // fails conjugate-symmetry
    CHECK(false);
  } catch (const PencilError& e) {
    CHECK(e.code() == ErrorCode::NOT_HERMITIAN);
  }
  try {
    HermitianMatrix(2, {cplx(0, 1), 0, 0, 0});  // imaginary diagonal
    CHECK(false);
  } catch (const PencilError& e) {
    CHECK(e.code() == ErrorCode::NOT_HERMITIAN);
  }
}

TEST_CASE("unitary conjugation preserves the spectrum") {
  Rng rng(11);
  HermitianMatrix m = random_hermitian(rng, 6);
  ColumnMatrix u = random_unitary(rng, 6);
  double worst = 0.0;
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b)
      worst = std::max(worst, std::abs(inner(u[a], u[b]) - (a == b ? cplx(1.0) : cplx(0.0))));
  CHECK(worst <= 1e-12);

  HermitianMatrix mc = conjugate_by(m, u);
  auto e1 = eig(m);
  auto e2 = eig(mc);
  for (std::size_t k = 0; k < 6; ++k)
    CHECK(e2.values[k] == doctest::Approx(e1.values[k]).epsilon(1e-11));
}

TEST_CASE("matrix helpers") {
  HermitianMatrix a = HermitianMatrix::diag({1, 2});
  HermitianMatrix b(2, {0, cplx(0, 1), cplx(0, -1), 0});
  HermitianMatrix s = a.plus(b, 2.0);
  CHECK(s(0, 1) == cplx(0, 2));
  CHECK(s(1, 0) == cplx(0, -2));
  CHECK(s(0, 0) == cplx(1, 0));
  CHECK(a.times(-3.0)(1, 1) == cplx(-6, 0));
  CVec x = {cplx(1, 0), cplx(0, 1)};
  CVec bx = b.apply(x);
  CHECK(std::abs(bx[0] - cplx(-1, 0)) <= 1e-15);
  CHECK(std::abs(bx[1] - cplx(0, -1)) <= 1e-15);
  CHECK(a.max_abs_entry() == 2.0);
  CHECK(b.frobenius_norm() == doctest::Approx(std::sqrt(2.0)));
}
