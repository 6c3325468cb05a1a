#include "wqed/joint_state.hpp"

#include <cmath>
#include <utility>

namespace wqed {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

bool co_polarized(const BranchLabel& label) {
    return (label.emitter == EmitterLevel::g_plus &&
            label.polarization == Polarization::sigma_plus) ||
           (label.emitter == EmitterLevel::g_minus &&
            label.polarization == Polarization::sigma_minus);
}

}  // namespace

double JointState::branch_mass() const {
    double mass = 0.0;
    for (const auto& [label, packet] : branches) mass += packet.norm2();
    return mass;
}

void JointState::add_amplitude(const BranchLabel& label, WavePacket packet) {
    auto it = branches.find(label);
    if (it == branches.end()) {
        if (!branches.empty()) require_same_frame(branches.begin()->second, packet);
        branches.emplace(label, std::move(packet));
    } else {
        it->second += packet;
    }
}

const WavePacket* JointState::find(const BranchLabel& label) const {
    auto it = branches.find(label);
    return it == branches.end() ? nullptr : &it->second;
}

JointState make_h_input(const Vec2& emitter_qubit, const WavePacket& psi) {
    JointState state;
    for (int e = 0; e < 2; ++e) {
        const cplx c = emitter_qubit(e) * kInvSqrt2;
        if (c == cplx{0.0, 0.0}) continue;
        for (Polarization pol : {Polarization::sigma_plus, Polarization::sigma_minus})
            state.add_amplitude({static_cast<EmitterLevel>(e), pol, Port::waveguide}, c * psi);
    }
    return state;
}

JointState scatter_four_level(const JointState& state, const EmitterParams& em,
                              double coupling_boost) {
    if (coupling_boost != 1.0 && coupling_boost != 2.0)
        throw ValidationError("scatter_four_level: coupling_boost must be 1 or 2");
    const EmitterParams eff = em.boosted(coupling_boost);

    JointState out;
    out.loss_weight = state.loss_weight;
    for (const auto& [label, packet] : state.branches) {
        if (!co_polarized(label)) {
            out.add_amplitude(label, packet);
            continue;
        }
        const double mass_before = packet.norm2();
        if (mass_before == 0.0) {
            out.add_amplitude(label, packet);
            continue;
        }
        std::vector<cplx> b = reflected_envelope(packet.amplitudes, packet.grid.dt, eff,
                                                 packet.carrier_detuning,
                                                 ScatterMethod::etd_recursive);
        std::vector<cplx> combined(packet.size());
        for (std::size_t k = 0; k < packet.size(); ++k)
            combined[k] = packet.amplitudes[k] + 2.0 * b[k];
        WavePacket scattered(packet.grid, std::move(combined), packet.carrier_detuning,
                             packet.direction);
        out.loss_weight += mass_before - scattered.norm2();
        out.add_amplitude(label, std::move(scattered));
    }
    return out;
}

HeraldOutcome herald_filter(const JointState& state, LinearPol keep) {
    HeraldOutcome outcome;
    outcome.loss_weight = state.loss_weight;
    outcome.success_state.loss_weight = state.loss_weight;

    for (int e = 0; e < 2; ++e) {
        for (Port port : {Port::waveguide, Port::interferometer_arm, Port::output,
                          Port::failure_port}) {
            const auto level = static_cast<EmitterLevel>(e);
            const WavePacket* sp = state.find({level, Polarization::sigma_plus, port});
            const WavePacket* sm = state.find({level, Polarization::sigma_minus, port});
            if (!sp && !sm) continue;
            const WavePacket& ref = sp ? *sp : *sm;
            WavePacket splus = sp ? *sp : WavePacket::zeros_like(ref);
            WavePacket sminus = sm ? *sm : WavePacket::zeros_like(ref);

            WavePacket h = kInvSqrt2 * (splus + sminus);
            WavePacket v = kInvSqrt2 * (splus - sminus);
            const WavePacket& kept = (keep == LinearPol::v) ? v : h;
            const WavePacket& dropped = (keep == LinearPol::v) ? h : v;

            outcome.failure_weight += dropped.norm2();

            // Re-expand the kept linear component over the sigma labels at
            // the output port: h -> (s+ + s-)/sqrt(2), v -> (s+ - s-)/sqrt(2).
            const double sign = (keep == LinearPol::v) ? -1.0 : 1.0;
            outcome.success_state.add_amplitude({level, Polarization::sigma_plus, Port::output},
                                                kInvSqrt2 * kept);
            outcome.success_state.add_amplitude({level, Polarization::sigma_minus, Port::output},
                                                (sign * kInvSqrt2) * kept);
        }
    }
    outcome.p_success = outcome.success_state.branch_mass();
    return outcome;
}

HeraldOutcome z_block(const JointState& h_input, const EmitterParams& em, double coupling_boost) {
    // The input photon must be h-polarized: per emitter level the sigma_+
    // and sigma_- envelopes coincide.
    for (int e = 0; e < 2; ++e) {
        const auto level = static_cast<EmitterLevel>(e);
        const WavePacket* sp = h_input.find({level, Polarization::sigma_plus, Port::waveguide});
        const WavePacket* sm = h_input.find({level, Polarization::sigma_minus, Port::waveguide});
        if (!sp && !sm) continue;
        if (!sp || !sm) throw ValidationError("z_block: input is not h-polarized");
        const double scale = std::sqrt(std::max(sp->norm2(), sm->norm2()));
        if ((*sp - *sm).norm() > 1e-8 * std::max(scale, 1e-12))
            throw ValidationError("z_block: input is not h-polarized");
    }
    return herald_filter(scatter_four_level(h_input, em, coupling_boost), LinearPol::v);
}

JointState emitter_unitary(const JointState& state, const Mat2& u) {
    if ((u.adjoint() * u - Mat2::Identity()).norm() > 1e-12)
        throw ValidationError("emitter_unitary: matrix is not unitary");

    JointState out;
    out.loss_weight = state.loss_weight;
    for (const auto& [label, packet] : state.branches) {
        for (int e_out = 0; e_out < 2; ++e_out) {
            const cplx amp = u(e_out, static_cast<int>(label.emitter));
            if (amp == cplx{0.0, 0.0}) continue;
            BranchLabel target = label;
            target.emitter = static_cast<EmitterLevel>(e_out);
            out.add_amplitude(target, amp * packet);
        }
    }
    return out;
}

}  // namespace wqed
