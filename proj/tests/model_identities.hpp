#pragma once

// Scalar fusion-category identities (pentagon, hexagon) evaluated from the
// model constants alone, independently of the path-basis machinery.  Used
// by the algebraic consistency tests.

#include <complex>

#include "fibdistill/anyon.hpp"

namespace model_identities {

using fibdistill::Label;
using cplx = std::complex<double>;

inline bool admissible(Label a, Label b, Label c) {
  return fibdistill::fusion_allowed(a, b, c);
}

// F-symbol [F^{abc}_d]_{ef}: change of bracketing ((ab)_e c)_d ->
// (a (bc)_f)_d.  Zero when either side is inadmissible; the nontrivial
// 2x2 block appears only for a = b = c = d = tau.
inline double fsym(Label a, Label b, Label c, Label d, Label e, Label f) {
  if (!admissible(a, b, e) || !admissible(e, c, d)) return 0.0;
  if (!admissible(b, c, f) || !admissible(a, f, d)) return 0.0;
  if (a == Label::tau && b == Label::tau && c == Label::tau &&
      d == Label::tau) {
    const auto& F = fibdistill::model_constants().fMatrix;
    return F(static_cast<int>(e), static_cast<int>(f));
  }
  return 1.0;
}

// R-symbol for exchanging a and b in channel c.
inline cplx rsym(Label a, Label b, Label c, bool inverse) {
  if (a == Label::trivial || b == Label::trivial) return 1.0;
  cplx v = c == Label::trivial ? fibdistill::model_constants().rPhaseCharge1
                               : fibdistill::model_constants().rPhaseChargeTau;
  return inverse ? std::conj(v) : v;
}

// Worst deviation between the two re-bracketing paths from ((ab)c)d to
// (a(b(cd))) over all external labels.
inline double pentagon_residual() {
  const Label L[2] = {Label::trivial, Label::tau};
  double worst = 0.0;
  for (Label a : L)
    for (Label b : L)
      for (Label c : L)
        for (Label d : L)
          for (Label t : L)
            for (Label e : L)
              for (Label g : L)
                for (Label f : L)
                  for (Label h : L) {
                    if (!admissible(a, b, e) || !admissible(e, c, g) ||
                        !admissible(g, d, t))
                      continue;
                    if (!admissible(c, d, h) || !admissible(b, h, f) ||
                        !admissible(a, f, t))
                      continue;
                    double lhs = fsym(e, c, d, t, g, h) * fsym(a, b, h, t, e, f);
                    double rhs = 0.0;
                    for (Label m : L)
                      rhs += fsym(a, b, c, g, e, m) * fsym(a, m, d, t, g, f) *
                             fsym(b, c, d, f, m, h);
                    worst = std::max(worst, std::abs(lhs - rhs));
                  }
  return worst;
}

// Worst deviation in the braiding compatibility identity
//   R^{ca}_e [F^{acb}_d]_{ef} R^{cb}_f =
//     sum_g [F^{cab}_d]_{eg} R^{cg}_d [F^{abc}_d]_{gf}
// for the given chirality.
inline double hexagon_residual(bool inverse) {
  const Label L[2] = {Label::trivial, Label::tau};
  double worst = 0.0;
  for (Label a : L)
    for (Label b : L)
      for (Label c : L)
        for (Label d : L)
          for (Label e : L)
            for (Label f : L) {
              cplx lhs = rsym(c, a, e, inverse) * fsym(a, c, b, d, e, f) *
                         rsym(c, b, f, inverse);
              cplx rhs = 0.0;
              for (Label g : L)
                rhs += fsym(c, a, b, d, e, g) * rsym(c, g, d, inverse) *
                       fsym(a, b, c, d, g, f);
              worst = std::max(worst, std::abs(lhs - rhs));
            }
  return worst;
}

}  // namespace model_identities
