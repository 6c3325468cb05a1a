#pragma once

#include <Eigen/Dense>
#include <map>

#include "wqed/scattering.hpp"

namespace wqed {

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

// Emitter qubit assignment: |0>_a = |g_->, |1>_a = |g_+>.
enum class EmitterLevel : int { g_minus = 0, g_plus = 1 };

// Circular polarizations along the waveguide quantization axis.  The linear
// components h = (s+ + s-)/sqrt(2) and v = (s+ - s-)/sqrt(2) are derived
// superpositions, never stored labels.
enum class Polarization : int { sigma_plus = 0, sigma_minus = 1 };

enum class Port : int { waveguide = 0, interferometer_arm = 1, output = 2, failure_port = 3 };

enum class LinearPol : int { h = 0, v = 1 };

struct BranchLabel {
    EmitterLevel emitter = EmitterLevel::g_minus;
    Polarization polarization = Polarization::sigma_plus;
    Port port = Port::waveguide;

    auto operator<=>(const BranchLabel&) const = default;
};

// Superposition over discrete branch labels, each carrying a spatial
// envelope, plus the accumulated photon-loss weight.  Branch packets all
// share one grid; operations return new states.
struct JointState {
    std::map<BranchLabel, WavePacket> branches;
    double loss_weight = 0.0;

    double branch_mass() const;
    double total_probability() const { return branch_mass() + loss_weight; }

    // Accumulates an amplitude into a branch, enforcing the common grid.
    void add_amplitude(const BranchLabel& label, WavePacket packet);
    const WavePacket* find(const BranchLabel& label) const;
};

// Emitter qubit (possibly subnormalized) with an h-polarized photon on the
// waveguide port.
JointState make_h_input(const Vec2& emitter_qubit, const WavePacket& psi);

// Four-level scattering block: branches whose polarization is co-rotating
// with the emitter level (g_+ with sigma_+, g_- with sigma_-) are replaced
// by the combined two-sided output with envelope A + 2B; cross-polarized
// branches pass unchanged.  coupling_boost scales Gamma_1D inside the block
// only (symmetric-mode drive convention, 1 or 2).
JointState scatter_four_level(const JointState& state, const EmitterParams& em,
                              double coupling_boost = 1.0);

struct HeraldOutcome {
    JointState success_state;  // conditioned, unnormalized
    double failure_weight = 0.0;
    double loss_weight = 0.0;
    double p_success = 0.0;
};

// Projects the photon onto the kept linear polarization at the output port;
// the discarded component's mass becomes the heralded failure weight.
HeraldOutcome herald_filter(const JointState& state, LinearPol keep);

// The conditional-Z scattering arrangement: decomposes the h input over
// sigma_+/-, scatters, and heralds on the v output.  The success state is
// -Z_a |phi>_a with envelope B (the reflected component) on every emitter
// branch; p_success equals the reflectance of the underlying scatter.
HeraldOutcome z_block(const JointState& h_input, const EmitterParams& em,
                      double coupling_boost = 1.0);

// Applies a 2x2 unitary to the emitter labels, mixing branch envelopes
// pairwise across g_-/g_+ with everything else fixed.
JointState emitter_unitary(const JointState& state, const Mat2& u);

}  // namespace wqed
