#pragma once

#include <optional>

#include "pencil/eig.hpp"

namespace pencil {

// q_B(x) = <Bx, x> for Hermitian B; always real (imaginary part discarded).
double quadratic_form(const HermitianMatrix& b, const CVec& x);

// Sesquilinear cross term <By, z>.
cplx cross_term(const HermitianMatrix& b, const CVec& y, const CVec& z);

// For indefinite B returns a unit x with q_B(x) = 0 and ||Bx|| >= 0.1 * min(
// |lambda_min|, lambda_max), built from extreme eigenvectors.  Throws
// NOT_INDEFINITE otherwise.
CVec neutral_direction(const HermitianMatrix& b, double tol = -1.0);

// Phase theta in [0, pi) with Re<By, e^{i theta} z> = 0; returns 0 when the
// cross term is negligible (|<By,z>| <= 1e-14 * scale, scale = frobenius(B) *
// ||y|| * ||z||).
double choose_theta(const HermitianMatrix& b, const CVec& y, const CVec& z);

// Root t in (0, 1) of q_B(t y + (1-t) z) with p = q_B(y) < 0 < q = q_B(z);
// BAD_SIGNS if the endpoint signs are wrong, NO_ROOT if no root is found in
// the open interval (cannot happen for exact arithmetic with valid signs).
double segment_neutral_root(const HermitianMatrix& b, const CVec& y, const CVec& z);

// A recomputable certificate that a quadratic form changes sign along an
// explicit segment: x_minus/x_plus carry the endpoint data, theta the phase
// alignment used, t0 the neutral root on the phased segment.
struct ConeWitness {
  CVec x_minus;       // q_B(x_minus) < 0
  CVec x_plus;        // q_B(x_plus) > 0
  double theta = 0.0; // phase applied to x_plus in the segment construction
  double t0 = 0.0;    // segment_neutral_root(B, x_minus, e^{i theta} x_plus)
};

// Recomputes the witness data against B and returns the worst relative
// discrepancy (0 = perfectly reproducible).
double cone_witness_residual(const HermitianMatrix& b, const ConeWitness& w);

}  // namespace pencil
