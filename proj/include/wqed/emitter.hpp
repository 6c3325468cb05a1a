#pragma once

#include <limits>

#include "wqed/wave_packet.hpp"

namespace wqed {

// Decay rates of a single emitter coupled to the waveguide.  Gamma_1D sets
// the unit scale (default 1); gamma_prime collects every decay channel that
// leaves the waveguide.  The detuning is delta = omega_p - omega_0, i.e. the
// packet carrier relative to the transition; the numeric scattering kernel
// reads delta off the packet, this field feeds the closed-form expressions.
struct EmitterParams {
    double gamma_1d = 1.0;
    double gamma_prime = 0.0;
    double detuning = 0.0;

    EmitterParams() = default;
    EmitterParams(double g1d, double gp, double delta = 0.0)
        : gamma_1d(g1d), gamma_prime(gp), detuning(delta) {
        if (!(gamma_1d > 0.0)) throw ValidationError("EmitterParams: gamma_1d must be positive");
        if (gamma_prime < 0.0) throw ValidationError("EmitterParams: gamma_prime must be >= 0");
    }

    double gamma_total() const { return gamma_1d + gamma_prime; }

    // Purcell factor; the perfect mirror gamma_prime = 0 maps to +infinity.
    double purcell() const {
        return gamma_prime == 0.0 ? std::numeric_limits<double>::infinity()
                                  : gamma_1d / gamma_prime;
    }

    // 1/P, exactly zero for the perfect mirror.
    double inv_purcell() const { return gamma_prime / gamma_1d; }

    // Same emitter with the waveguide rate scaled; models the symmetric-mode
    // coupling enhancement inside a two-sided scattering block.
    EmitterParams boosted(double factor) const {
        if (!(factor > 0.0)) throw ValidationError("EmitterParams: boost factor must be positive");
        return EmitterParams(gamma_1d * factor, gamma_prime, detuning);
    }

    static EmitterParams from_purcell(double p, double g1d = 1.0, double delta = 0.0) {
        if (std::isinf(p)) return EmitterParams(g1d, 0.0, delta);
        if (!(p > 0.0)) throw ValidationError("EmitterParams: Purcell factor must be positive");
        return EmitterParams(g1d, g1d / p, delta);
    }
};

// f = (1 + 1/P + gamma/Gamma_1D - i 2 delta/Gamma_1D)^(-1) for a
// half-exponential input of bandwidth gamma_pulse.
inline cplx closed_form_f_half_exponential(double gamma_pulse, const EmitterParams& em) {
    if (!(gamma_pulse > 0.0))
        throw ValidationError("closed_form_f_half_exponential: gamma_pulse must be positive");
    return 1.0 / cplx{1.0 + em.inv_purcell() + gamma_pulse / em.gamma_1d,
                      -2.0 * em.detuning / em.gamma_1d};
}

// Narrowband (plane-wave) limit of the reflection fidelity.
inline cplx plane_wave_f(const EmitterParams& em) {
    return 1.0 / cplx{1.0 + em.inv_purcell(), -2.0 * em.detuning / em.gamma_1d};
}

struct TrIdentities {
    double transmittance = 0.0;
    double reflectance = 0.0;
};

// T = 1 - Re f [2 - 1/(1+1/P)],  R = Re f / (1+1/P).
inline TrIdentities tr_identities(cplx f, const EmitterParams& em) {
    const double inv_p = em.inv_purcell();
    return {1.0 - f.real() * (2.0 - 1.0 / (1.0 + inv_p)), f.real() / (1.0 + inv_p)};
}

}  // namespace wqed
