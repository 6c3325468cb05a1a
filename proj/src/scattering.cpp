#include "wqed/scattering.hpp"

#include <cmath>
#include <utility>

namespace wqed {

namespace {

// phi1 = (e^z - 1)/lambda, phi2 = (e^z - 1 - z)/lambda^2 with z = lambda*dt,
// evaluated by series when z is small enough for cancellation to matter.
struct EtdWeights {
    cplx propagator;  // e^{lambda dt}
    cplx w0;          // weight of A_n
    cplx w1;          // weight of A_{n+1}
};

EtdWeights etd_weights(cplx lambda, double dt) {
    const cplx z = lambda * dt;
    cplx phi1, phi2;
    if (std::abs(z) > 0.5) {
        const cplx ez = std::exp(z);
        phi1 = (ez - 1.0) / lambda;
        phi2 = (ez - 1.0 - z) / (lambda * lambda);
    } else {
        // phi1 = dt sum_k z^k/(k+1)!, phi2 = dt^2 sum_k z^k/(k+2)!
        cplx s1 = 0.0, s2 = 0.0, zk = 1.0;
        double fact = 1.0;  // (k+1)! running
        for (int k = 0;; ++k) {
            fact *= (k + 1);
            s1 += zk / fact;
            s2 += zk / (fact * (k + 2));
            zk *= z;
            if (std::abs(zk) / (fact * (k + 2)) < 1e-18 && k > 2) break;
        }
        phi1 = dt * s1;
        phi2 = dt * dt * s2;
    }
    return {std::exp(z), phi1 - phi2 / dt, phi2 / dt};
}

std::vector<cplx> etd_reflected(const std::vector<cplx>& a, double dt, double g1d, cplx lambda) {
    const auto [e, w0, w1] = etd_weights(lambda, dt);
    const cplx c0 = -(0.5 * g1d) * w0;
    const cplx c1 = -(0.5 * g1d) * w1;
    std::vector<cplx> b(a.size(), cplx{0.0, 0.0});
    for (std::size_t n = 0; n + 1 < a.size(); ++n)
        b[n + 1] = e * b[n] + c0 * a[n] + c1 * a[n + 1];
    return b;
}

std::vector<cplx> trapezoid_reflected(const std::vector<cplx>& a, double dt, double g1d,
                                      cplx lambda) {
    const std::size_t n = a.size();
    // kernel samples K_j = e^{lambda j dt}
    std::vector<cplx> kernel(n);
    const cplx e = std::exp(lambda * dt);
    kernel[0] = 1.0;
    for (std::size_t j = 1; j < n; ++j) kernel[j] = kernel[j - 1] * e;

    std::vector<cplx> b(n, cplx{0.0, 0.0});
    const cplx pref = -(0.5 * g1d) * dt;
    for (std::size_t m = 1; m < n; ++m) {
        cplx acc = 0.5 * (a[0] * kernel[m] + a[m]);
        for (std::size_t j = 1; j < m; ++j) acc += a[j] * kernel[m - j];
        b[m] = pref * acc;
    }
    return b;
}

// Projects (T, R, loss) onto the physical simplex when integration bias
// pushes a value marginally outside [0, 1].  The floor scales with the
// second-order error of the integrator, never below 1e-9, and the sum
// T + R + loss = 1 is preserved exactly: the correction is charged to the
// larger of T and R, which is where the envelope bias lives.
void project_probabilities(double& t, double& r, double& loss, double floor,
                           std::vector<std::string>& warnings) {
    if (loss < 0.0 && loss >= -floor) {
        warnings.push_back("loss clamped to 0 (integration bias " + std::to_string(loss) + ")");
        double& donor = (t >= r) ? t : r;
        donor += loss;
        loss = 0.0;
    }
    if (t < 0.0 && t >= -floor) {
        warnings.push_back("transmittance clamped to 0 (integration bias)");
        loss += t;
        t = 0.0;
    }
    if (r < 0.0 && r >= -floor) {
        warnings.push_back("reflectance clamped to 0 (integration bias)");
        loss += r;
        r = 0.0;
    }
}

}  // namespace

std::vector<cplx> reflected_envelope(const std::vector<cplx>& a, double dt,
                                     const EmitterParams& em, double detuning,
                                     ScatterMethod method) {
    const cplx lambda{-0.5 * em.gamma_total(), detuning};
    return method == ScatterMethod::etd_recursive
               ? etd_reflected(a, dt, em.gamma_1d, lambda)
               : trapezoid_reflected(a, dt, em.gamma_1d, lambda);
}

ScatterResult scatter(const WavePacket& psi, const EmitterParams& em, ScatterMethod method) {
    const double in_mass = psi.norm2();
    if (!(in_mass > 0.0)) throw ValidationError("scatter: incident packet has zero norm");

    ScatterResult result;
    if (psi.grid.dt * em.gamma_total() > 0.1)
        result.warnings.push_back("insufficient resolution: dt*Gamma = " +
                                  std::to_string(psi.grid.dt * em.gamma_total()) + " > 0.1");

    std::vector<cplx> b =
        reflected_envelope(psi.amplitudes, psi.grid.dt, em, psi.carrier_detuning, method);
    std::vector<cplx> t(psi.size());
    for (std::size_t k = 0; k < psi.size(); ++k) t[k] = psi.amplitudes[k] + b[k];

    result.f = -quadrature_inner(psi.amplitudes, b, psi.grid.dt) / in_mass;
    result.transmittance = quadrature_norm2(t, psi.grid.dt) / in_mass;
    result.reflectance = quadrature_norm2(b, psi.grid.dt) / in_mass;
    result.loss = 1.0 - result.transmittance - result.reflectance;
    const double dt_gamma = psi.grid.dt * em.gamma_total();
    project_probabilities(result.transmittance, result.reflectance, result.loss,
                          std::max(1e-9, dt_gamma * dt_gamma), result.warnings);
    result.transmitted =
        WavePacket(psi.grid, std::move(t), psi.carrier_detuning, psi.direction);
    result.reflected =
        WavePacket(psi.grid, std::move(b), psi.carrier_detuning, flipped(psi.direction));
    return result;
}

}  // namespace wqed
