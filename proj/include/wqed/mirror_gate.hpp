#pragma once

#include <Eigen/Dense>
#include <array>

#include "wqed/scattering.hpp"

namespace wqed {

using Vec2 = Eigen::Vector2cd;

// Output of the three-level mirror gate: branch envelopes indexed by
// [atom level][direction], atom level 0 = |s> (decoupled), 1 = |g>
// (coupled), direction 0 = rightward, 1 = leftward.
struct MirrorGateResult {
    std::array<std::array<WavePacket, 2>, 2> branches;
    double fidelity = 0.0;  // |<ideal|out>|^2 against the perfect-mirror gate
    double loss = 0.0;      // 1 - total branch mass
};

// Mirror gate on a three-level emitter: the |s> branch propagates freely,
// the |g> branch scatters each direction component (reflection swaps the
// direction with envelope B, transmission keeps it with envelope A + B).
// The ideal limit maps |mu>_a |phi>_p -> (-X_p)^mu |mu>_a |phi>_p.  Nothing
// is heralded here; this is the contrast case for the polarization-swap
// schemes, whose imperfections become infidelity rather than loss.
MirrorGateResult mirror_gate_three_level(const WavePacket& psi, const EmitterParams& em,
                                         const Vec2& atom_state, const Vec2& photon_qubit);

}  // namespace wqed
