#pragma once

// Reference values from tests/oracles (NumPy/SciPy grid quadrature for the
// p = 1 control, mpmath for the horizon root).

namespace npe::reference {

// Control with amplitudes (-1, -1, 0) on the full torus, ||u||_0 = 1.
inline constexpr double kPsiU = 1.2671380127594963e-3;
inline constexpr double kPsiHeatU01 = 3.2482978285348793e-4;  // Psi(S(0.1; u))
// Amplitudes (1, 2, 3).
inline constexpr double kPsiU123 = 4.92018503418086e-4;
// \int_0^30 Phi(S(tau; u)) dtau; the trace increases monotonically.
inline constexpr double kGInf = 2.8819858434482804e-4;
// Root of \int_0^t Phi(S(tau; u)) dtau = kGInf / 2 (blow-up of (2 / kGInf) u).
inline constexpr double kBlowupTime = 0.14829487154048854;

// beta x^16 + 32 c1 x - beta = 0.
inline constexpr double kRootUnit = 0.87716686944696374968;  // beta = 32 c1
inline constexpr double kHorizonUnit = 0.13105803167996584542;
inline constexpr double kRootSmall = 3.125e-6;  // beta = 1e-4, c1 = 1
inline constexpr double kHorizonSmall = 12.676076274775909283;

inline constexpr double kT0Unit = 0.045984930146430290199;  // 1 / (8e)
inline constexpr double kAAtT0Unit = 1.2451695747827213652;

}  // namespace npe::reference
