#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "pencil/forms.hpp"

namespace pencil {

// Real symmetric 2x2 form [[a, b], [b, c]].
struct Sym2 {
  double a = 0.0, b = 0.0, c = 0.0;
  double eval(double s, double t) const { return a * s * s + 2.0 * b * s * t + c * t * t; }
  double trace() const { return a + c; }
  double det() const { return a * c - b * b; }
  double fro() const { return std::sqrt(a * a + 2.0 * b * b + c * c); }
  Sym2 times(double k) const { return Sym2{a * k, b * k, c * k}; }
};

inline Sym2 sym2_combine(double l1, const Sym2& m1, double l2, const Sym2& m2, double l3,
                         const Sym2& m3) {
  return Sym2{l1 * m1.a + l2 * m2.a + l3 * m3.a, l1 * m1.b + l2 * m2.b + l3 * m3.b,
              l1 * m1.c + l2 * m2.c + l3 * m3.c};
}

// A real two-dimensional section span_R{u, v} of the sphere in C^n, with
// ||u|| = ||v|| = 1 and Re<v, u> = 0.  (iu is a legitimate second real
// direction: real-orthogonality is the right notion here.)
class PlaneSection {
 public:
  // Returns nullopt when v has no real-orthogonal component against u (the
  // proposed pair does not span a real 2-plane).
  static std::optional<PlaneSection> make(const CVec& u_raw, const CVec& v_raw);

  const CVec& u() const { return u_; }
  const CVec& v() const { return v_; }

  // Matrix of q_B restricted to the section in the (u, v) basis:
  // q_B(s u + t v) = [s t] R [s t]^T with R = [[q(u), Re<Bu,v>], [., q(v)]].
  Sym2 restrict_form(const HermitianMatrix& b) const;

 private:
  PlaneSection(CVec u, CVec v) : u_(std::move(u)), v_(std::move(v)) {}
  CVec u_, v_;
};

// Searches the unit sphere of coefficients (l1, l2, l3) for a combination
// l1 M1 + l2 M2 + l3 M3 that is positive semidefinite and nonzero.  Signed
// axis candidates are scanned first (so pure-member solutions are reported
// exactly), then a Fibonacci sphere of `sphere_grid` points, then a local
// simplex polish of the best candidate.  Accepts iff trace >= 0, det >=
// -1e-12 * fro^2 and fro > 1e-10 * max member fro.
std::optional<std::array<double, 3>> psd_in_span_2x2(const Sym2& m1, const Sym2& m2,
                                                     const Sym2& m3, int sphere_grid);

}  // namespace pencil
