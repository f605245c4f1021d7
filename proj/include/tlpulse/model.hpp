#pragma once

#include "tlpulse/types.hpp"

namespace tlpulse {

// Right-hand side of the full lab-frame master equation, no rotating-wave
// approximation. The coherent part uses H(t) = -(omega/2) sigma_z
// - mu E(t) sigma_x with the convention sigma_z = |g><g| - |e><e| (ground
// state at energy -omega/2), sigma_+ = |e><g|.
//
// Dissipators: pure dephasing (gamma/2)(sigma_z rho sigma_z - rho) and the
// thermal pair Gamma*[nbar (2 s+ rho s- - {s- s+, rho})
//                     + (nbar+1)(2 s- rho s+ - {s+ s-, rho})].
// These take the same form in the lab frame and in the rotating frame: the
// frame change is a sigma_z rotation, which commutes with the dephasing
// dissipator and leaves each thermal product term invariant (the phases on
// sigma+- cancel pairwise).
StateDerivative lab_frame_rhs(const TwoLevelState& state, double field,
                              const SystemParams& sys, const NoiseParams& noise);

// Right-hand side in the interaction picture with respect to the free
// evolution, under the RWA. `envelope` is eps(t) of the field decomposition
// E(t) = eps(t) e^{-i omega_p t} + c.c.; the counter-rotating terms
// e^{+-2i omega (t-t0)} are dropped. The stored coherence is the rotating
// frame one: rho_ge_rot = rho_ge_lab * e^{-i omega (t-t0)}.
//
//   d rho_gg = 2 mu Im[rho_ge W] + 2 Gamma [(nbar+1) rho_ee - nbar rho_gg]
//   d rho_ge = -(gamma + (2 nbar+1) Gamma) rho_ge - i mu (2 rho_gg - 1) conj(W)
//
// with W = eps(t) e^{-i(Delta t + omega t0)} and Delta = omega_p - omega.
StateDerivative rwa_rhs(const TwoLevelState& state, cplx envelope,
                        const SystemParams& sys, const NoiseParams& noise,
                        double t, double t0);

}  // namespace tlpulse
