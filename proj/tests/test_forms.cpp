#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "pencil/forms.hpp"
#include "pencil/instance.hpp"
#include "pencil/rng.hpp"

using namespace pencil;

namespace {
constexpr double kPi = std::numbers::pi;

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
}  // namespace

TEST_CASE("quadratic form values on the reference witnesses") {
  InstanceFile ex = gen_reference_family();
  auto hints = witness_hints(ex);
  REQUIRE(hints.size() == 8);
  const double s2 = std::sqrt(2.0);
  // first witness: member 1, negative side, x = (1-s2, -1, 1-s2, 1)
  CHECK(hints[0].member == 0);
  CHECK(hints[0].sign == -1);
  double q = quadratic_form(ex.b[0], hints[0].x);
  CHECK(q == doctest::Approx(4.0 - 4.0 * s2).epsilon(1e-13));
  CHECK(q < 0.0);
  // every hint is neutral for the other members and signed for its own
  for (const auto& h : hints) {
    double nx2 = norm2(h.x);
    for (std::size_t i = 0; i < ex.b.size(); ++i) {
      double qi = quadratic_form(ex.b[i], h.x);
      double rel = qi / (spectral_norm(ex.b[i]) * nx2);
      if (i == h.member) {
        CHECK(h.sign * rel >= 1e-3);
      } else {
        CHECK(std::abs(rel) <= 1e-12);
      }
    }
  }
}

TEST_CASE("form values are real and sesquilinear cross terms are Hermitian") {
  Rng rng(3);
  HermitianMatrix b = random_hermitian(rng, 5);
  CVec y = random_unit_vector(rng, 5);
  CVec z = random_unit_vector(rng, 5);
  cplx cyz = cross_term(b, y, z);
  cplx czy = cross_term(b, z, y);
  CHECK(std::abs(cyz - std::conj(czy)) <= 1e-13);
  // q(y) equals the diagonal cross term and is real by construction
  CHECK(quadratic_form(b, y) == doctest::Approx(cross_term(b, y, y).real()).epsilon(1e-13));
  // linear in the first slot, conjugate-linear in the second
  cplx alpha(0.3, -1.2);
  CHECK(std::abs(cross_term(b, scaled(y, alpha), z) - alpha * cyz) <= 1e-12);
  CHECK(std::abs(cross_term(b, y, scaled(z, alpha)) - std::conj(alpha) * cyz) <= 1e-12);
}

TEST_CASE("neutral direction") {
  HermitianMatrix b = HermitianMatrix::diag({2, -3, 1});
  CVec x = neutral_direction(b);
  CHECK(vnorm(x) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(quadratic_form(b, x)) <= 1e-12);
  CHECK(vnorm(b.apply(x)) >= 0.1);
  CHECK_THROWS_AS(neutral_direction(HermitianMatrix::identity(2)), PencilError);
  try {
    neutral_direction(HermitianMatrix::diag({1, 0}));
    CHECK(false);
  } catch (const PencilError& e) {
    CHECK(e.code() == ErrorCode::NOT_INDEFINITE);
  }
}

TEST_CASE("phase choice kills the real cross term") {
  HermitianMatrix id2 = HermitianMatrix::identity(2);
  CVec e0 = {1.0, 0.0};
  // <y, z> = i  ->  theta = 0
  CHECK(choose_theta(id2, e0, CVec{cplx(0, -1), 0.0}) == doctest::Approx(0.0).epsilon(1e-13));
  // <y, z> = 1  ->  theta = pi/2
  CHECK(choose_theta(id2, e0, e0) == doctest::Approx(kPi / 2).epsilon(1e-13));
  // <y, z> = 1 + i  ->  theta = 3 pi / 4
  CHECK(choose_theta(id2, e0, CVec{cplx(1, -1), 0.0}) ==
        doctest::Approx(3 * kPi / 4).epsilon(1e-13));
  // negligible cross term -> 0 by convention
  CHECK(choose_theta(id2, e0, CVec{0.0, 1.0}) == 0.0);

  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    HermitianMatrix b = random_hermitian(rng, 4);
    CVec y = random_unit_vector(rng, 4);
    CVec z = random_unit_vector(rng, 4);
    double theta = choose_theta(b, y, z);
    CHECK(theta >= 0.0);
    CHECK(theta < kPi);
    cplx rotated = cross_term(b, y, scaled(z, std::polar(1.0, theta)));
    CHECK(std::abs(rotated.real()) <= 1e-12 * b.frobenius_norm());
  }
}

TEST_CASE("segment neutral root: frozen rational cases") {
  CVec e0 = {1.0, 0.0};
  CVec e1 = {0.0, 1.0};
  CHECK(segment_neutral_root(HermitianMatrix::diag({-1, 1}), e0, e1) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(segment_neutral_root(HermitianMatrix::diag({-4, 1}), e0, e1) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(segment_neutral_root(HermitianMatrix::diag({-1, 4}), e0, e1) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  try {
    segment_neutral_root(HermitianMatrix::diag({1, -1}), e0, e1);
    CHECK(false);
  } catch (const PencilError& e) {
    CHECK(e.code() == ErrorCode::BAD_SIGNS);
  }
}

TEST_CASE("segment neutral root is a root, for random sign-valid segments") {
  Rng rng(23);
  int found = 0;
  while (found < 40) {
    HermitianMatrix b = random_hermitian(rng, 4);
    CVec y = random_unit_vector(rng, 4);
    CVec z = random_unit_vector(rng, 4);
    double p = quadratic_form(b, y);
    double q = quadratic_form(b, z);
    if (!(p < 0.0 && q > 0.0)) continue;
    ++found;
    double t = segment_neutral_root(b, y, z);
    CHECK(t > 0.0);
    CHECK(t < 1.0);
    CVec g = scaled(y, t);
    axpy(g, 1.0 - t, z);
    CHECK(std::abs(quadratic_form(b, g)) <= 1e-10 * b.frobenius_norm());
  }
}

TEST_CASE("root is invariant under perturbations vanishing on the segment span") {
  // B' = w c* + c w* with w orthogonal to span{y, z} contributes nothing to
  // q_{B+B'} along the segment, so the root must not move.
  Rng rng(29);
  HermitianMatrix b(4, {-2, 0, 0, 0, 0, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  CVec y = {1.0, 0.0, 0.0, 0.0};
  CVec z = {0.0, 1.0, 0.0, 0.0};
  double t_base = segment_neutral_root(b, y, z);
  for (int trial = 0; trial < 20; ++trial) {
    cplx c0(rng.gaussian(), rng.gaussian());
    cplx c1(rng.gaussian(), rng.gaussian());
    // w = e2; c has support everywhere (its overlap with span{y,z} multiplies
    // the zero overlap of w along the segment, so the form still vanishes)
    std::vector<cplx> d(16, 0.0);
    d[0 * 4 + 2] = std::conj(c0);
    d[2 * 4 + 0] = c0;
    d[1 * 4 + 2] = std::conj(c1);
    d[2 * 4 + 1] = c1;
    HermitianMatrix perturbed = b.plus(HermitianMatrix(4, std::move(d)), rng.uniform(-2.0, 2.0));
    CHECK(segment_neutral_root(perturbed, y, z) == doctest::Approx(t_base).epsilon(1e-12));
  }
}

TEST_CASE("cone witness residual") {
  HermitianMatrix b = HermitianMatrix::diag({-1, 1, 5});
  CVec y = {1.0, 0.0, 0.0};
  CVec z = {0.0, 1.0, 0.0};
  ConeWitness w;
  w.x_minus = y;
  w.x_plus = z;
  w.theta = choose_theta(b, y, z);
  w.t0 = segment_neutral_root(b, y, scaled(z, std::polar(1.0, w.theta)));
  CHECK(cone_witness_residual(b, w) <= 1e-12);

  ConeWitness bad = w;
  bad.t0 = 0.9;  // not a root
  CHECK(cone_witness_residual(b, bad) > 1e-3);
  ConeWitness flipped = w;
  std::swap(flipped.x_minus, flipped.x_plus);  // endpoint signs wrong
  CHECK(cone_witness_residual(b, flipped) >= 1.0);
}
