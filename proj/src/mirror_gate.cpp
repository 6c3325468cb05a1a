#include "wqed/mirror_gate.hpp"

#include <cmath>

namespace wqed {

namespace {

void require_unit(const Vec2& v, const char* what) {
    if (std::abs(v.squaredNorm() - 1.0) > 1e-8)
        throw ValidationError(std::string(what) + " amplitudes are not normalized");
}

}  // namespace

MirrorGateResult mirror_gate_three_level(const WavePacket& psi, const EmitterParams& em,
                                         const Vec2& atom_state, const Vec2& photon_qubit) {
    require_unit(atom_state, "atom qubit");
    require_unit(photon_qubit, "photon qubit");

    const cplx a_s = atom_state(0);
    const cplx a_g = atom_state(1);

    std::vector<cplx> b = reflected_envelope(psi.amplitudes, psi.grid.dt, em,
                                             psi.carrier_detuning, ScatterMethod::etd_recursive);
    WavePacket refl(psi.grid, std::move(b), psi.carrier_detuning, psi.direction);
    WavePacket trans = psi + refl;  // A + B

    MirrorGateResult out;
    for (auto& row : out.branches)
        for (auto& p : row) p = WavePacket::zeros_like(psi);

    // Decoupled |s> branch: packet unchanged in both directions.
    // Coupled |g> branch: incident direction d keeps A+B, opposite gets B.
    for (int d = 0; d < 2; ++d) {
        const cplx c = photon_qubit(d);
        if (c == cplx{0.0, 0.0}) continue;
        out.branches[0][d] += (a_s * c) * psi;
        out.branches[1][d] += (a_g * c) * trans;
        out.branches[1][1 - d] += (a_g * c) * refl;
    }

    // Ideal action: |s> passes, |g> reflects into -A with the direction
    // swapped.  Overlap taken branch by branch.
    cplx overlap = 0.0;
    for (int d = 0; d < 2; ++d) {
        const cplx c = photon_qubit(d);
        if (c == cplx{0.0, 0.0}) continue;
        overlap += std::conj(a_s * c) * inner_product(psi, out.branches[0][d]);
        overlap += std::conj(-a_g * c) * inner_product(psi, out.branches[1][1 - d]);
    }
    const double in_mass = psi.norm2();
    overlap /= in_mass;

    double mass = 0.0;
    for (const auto& row : out.branches)
        for (const auto& p : row) mass += p.norm2();
    mass /= in_mass;

    out.fidelity = std::norm(overlap);
    out.loss = 1.0 - mass;
    return out;
}

}  // namespace wqed
