#include "tlpulse/model.hpp"

namespace tlpulse {

StateDerivative lab_frame_rhs(const TwoLevelState& state, double field,
                              const SystemParams& sys, const NoiseParams& noise)
{
    const double rho_gg = state.rho_gg;
    const cplx rho_ge = state.rho_ge;

    // Coherent part from the full H(t); the drive couples through sigma_x,
    // so both rotating and counter-rotating contributions are present.
    const double coupling = sys.mu * field;
    double d_gg = 2.0 * coupling * rho_ge.imag();
    cplx d_ge = cplx(0.0, sys.omega) * rho_ge
              - cplx(0.0, coupling) * (2.0 * rho_gg - 1.0);

    // Thermal dissipator: relaxation toward rho_gg = (nbar+1)/(2 nbar+1).
    d_gg += 2.0 * noise.Gamma
          * ((noise.nbar + 1.0) * (1.0 - rho_gg) - noise.nbar * rho_gg);

    // Dephasing and thermal decay of the coherence combine into the total
    // rate gamma + (2 nbar + 1) Gamma.
    d_ge -= noise.total_rate() * rho_ge;

    return {d_gg, d_ge};
}

StateDerivative rwa_rhs(const TwoLevelState& state, cplx envelope,
                        const SystemParams& sys, const NoiseParams& noise,
                        double t, double t0)
{
    const double rho_gg = state.rho_gg;
    const cplx rho_ge = state.rho_ge;

    const double phase = -(sys.detuning() * t + sys.omega * t0);
    const cplx w = envelope * std::polar(1.0, phase);

    double d_gg = 2.0 * sys.mu * (rho_ge * w).imag()
                + 2.0 * noise.Gamma
                * ((noise.nbar + 1.0) * (1.0 - rho_gg) - noise.nbar * rho_gg);

    cplx d_ge = -noise.total_rate() * rho_ge
              - cplx(0.0, sys.mu) * (2.0 * rho_gg - 1.0) * std::conj(w);

    return {d_gg, d_ge};
}

}  // namespace tlpulse
