#pragma once

#include <string>
#include <vector>

#include "wqed/emitter.hpp"
#include "wqed/wave_packet.hpp"

namespace wqed {

// etd_recursive: exponential-time-differencing recursion, exact for
// piecewise-linear envelopes and O(n); the production method.
// trapezoid: direct trapezoid-rule convolution with the kernel, O(n^2);
// kept as an independent cross-check of the recursion.
enum class ScatterMethod { etd_recursive, trapezoid };

struct ScatterResult {
    WavePacket transmitted;  // envelope A + B, same direction as the input
    WavePacket reflected;    // envelope B, direction flipped
    cplx f = 0.0;            // reflection fidelity, -<A|B> / ||A||^2
    double transmittance = 0.0;
    double reflectance = 0.0;
    double loss = 0.0;  // kappa = 1 - T - R
    std::vector<std::string> warnings;
};

// Reflected envelope B(tau) = -(Gamma_1D/2) int_t0^tau A(s) e^{(i delta - Gamma/2)(tau - s)} ds
// evaluated on the grid of `a`.  delta is the carrier detuning of the packet.
std::vector<cplx> reflected_envelope(const std::vector<cplx>& a, double dt,
                                     const EmitterParams& em, double detuning,
                                     ScatterMethod method);

// Full single-emitter scattering map.  The incident packet may be
// subnormalized; the scalar figures of merit are reported relative to its
// own squared norm.  The kernel detuning is taken from psi.carrier_detuning.
ScatterResult scatter(const WavePacket& psi, const EmitterParams& em,
                      ScatterMethod method = ScatterMethod::etd_recursive);

}  // namespace wqed
