#pragma once

// The trilinear form
//   Psi(y1, y2, y3) = \int ((y1 . grad) curl^{-1} y2) . y3 dx
// and the normalized functional Phi(w) = Psi(w, w, w) / ||w||_0^2.

#include "npe/spectral_field.hpp"

namespace npe {

/// Value of Psi together with \int |integrand| dx, the scale against which
/// roundoff in the value is judged.
struct PsiValue {
  double value = 0.0;
  double magnitude = 0.0;
};

double psi3(const SpectralField& y1, const SpectralField& y2, const SpectralField& y3);

/// Psi(y, y, y) through the symmetric strain of curl^{-1} y (fewer transforms
/// than psi3).
PsiValue psi_detailed(const SpectralField& y);
inline double psi(const SpectralField& y) { return psi_detailed(y).value; }

/// Psi(w) / ||w||_0^2, and 0 for the zero field.
double phi(const SpectralField& omega);

/// Split of the vorticity nonlinearity B(w) = (v.grad)w - (w.grad)v,
/// v = curl^{-1} w, into its component along w and the remainder.
struct NonlinearTerm {
  SpectralField b;
  SpectralField normal;
  SpectralField tangential;
};

/// normal = -Phi(w) w, so that (normal, w) = (B, w) = -Psi(w).
NonlinearTerm nonlinear_term(const SpectralField& omega);

}  // namespace npe
