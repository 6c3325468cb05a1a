#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wqed/joint_state.hpp"
#include "wqed/pulse_shapes.hpp"
#include "wqed/qubit_ops.hpp"

namespace wqed {

// Element in the non-scattering interferometer arm that matches its
// envelope to the scattered arm.
struct WaveformCorrector {
    enum class Kind { none, attenuator, second_scatterer };

    Kind kind = Kind::none;
    cplx attenuation = 1.0;                   // transmission k, |k| <= 1
    std::optional<EmitterParams> scatterer;   // pinned-emitter block parameters

    static WaveformCorrector none() { return {}; }
    static WaveformCorrector make_attenuator(cplx k);
    static WaveformCorrector make_second_scatterer(const EmitterParams& em);
};

// Success-branch amplitudes of one protocol run for a single joint input,
// indexed [emitter level][output photon label].  Time-bin envelopes are
// kept in bin-local frames (the bin delay is part of the label).
struct ProtocolRun {
    std::array<std::array<WavePacket, 2>, 2> envelope;
    double failure_weight = 0.0;
    double loss_weight = 0.0;

    double success_mass() const;
};

struct GateResult {
    ConditionalMap map;
    GateReport report;
    std::vector<WavePacket> modes;  // orthonormal output modes, one per Kraus op
};

enum class ProtocolKind { time_bin, polarization };
enum class MeasureBasis { x, y, z };

// Entangling gate for time-bin flying qubits: the photon scatters through
// the conditional-Z block in its bin, with a Hadamard on the emitter
// between the bins.  Success-conditioned, the map is proportional to the
// composite target for any emitter/pulse parameters; only the success
// probability degrades.
GateResult time_bin_gate(const PulseShape& pulse, double bin_separation,
                         const EmitterParams& em, double coupling_boost = 1.0);

// Entangling gate for polarization flying qubits: the h component routes
// through the conditional-Z block, the v component through the waveform
// corrector arm, and the arms are rejoined.  With a matched corrector the
// success-conditioned map is proportional to the controlled-phase target.
GateResult polarization_gate(const PulseShape& pulse, const EmitterParams& em,
                             const WaveformCorrector& wfc, double coupling_boost = 1.0);

// Same protocols driven by an explicit incident envelope instead of a shape;
// used when composing blocks in sequence.
GateResult time_bin_gate_packet(const WavePacket& bin_envelope, const EmitterParams& em,
                                double coupling_boost = 1.0);
GateResult polarization_gate_packet(const WavePacket& psi, const EmitterParams& em,
                                    const WaveformCorrector& wfc, double coupling_boost = 1.0);

// Waveform corrector realized as a second scattering block with the emitter
// pinned: maps the arm envelope A to the reflected component B without
// entangling anything.  Identical computation to the gate arm, so the two
// arm envelopes match exactly for any pulse shape and detuning.
WavePacket wfc_second_scatterer(const WavePacket& psi, const EmitterParams& em,
                                double coupling_boost = 1.0);

// Builds the Kraus operators of the success-conditioned map.  The first
// four runs must correspond to the computational-basis inputs |p e> =
// 00,01,10,11; the remaining runs are superposition probes used to verify
// linearity (reconstruction residual below 1e-8, else NonlinearityError).
// An orthonormal spatial-mode basis is built across all branch envelopes
// (Gram-Schmidt, drop tolerance 1e-10), one Kraus operator per mode.
ConditionalMap extract_conditional_map(const std::vector<Vec4>& inputs,
                                       const std::vector<ProtocolRun>& runs,
                                       std::string herald_spec,
                                       std::vector<WavePacket>* modes_out = nullptr);

struct MemoryOutcome {
    int outcome = 0;
    double probability = 0.0;  // conditional on herald success
    Mat2 rho;                  // corrected post-measurement state, unit trace
    Mat2 correction;           // unitary applied after the measurement
};

struct MemoryResult {
    std::vector<MemoryOutcome> outcomes;
    double p_success = 0.0;  // herald probability

    // Worst-case overlap <target|rho|target> over measurement outcomes.
    double fidelity(const Vec2& target) const;
    // Dominant eigenvector; throws unless the state is pure within tol.
    Vec2 as_pure(double tol = 1e-6) const;
};

// Stores a photonic qubit in the emitter: entangle via the chosen protocol
// from the fiducial emitter state |+>_a, measure the outgoing photon, apply
// the outcome correction.  Conditioned on herald success the emitter holds
// the input state.  The polarization protocol uses a matched
// second-scatterer corrector.
MemoryResult memory_store(const Vec2& photon_state, const PulseShape& pulse,
                          const EmitterParams& em, ProtocolKind protocol,
                          MeasureBasis photon_basis = MeasureBasis::x,
                          double coupling_boost = 1.0);

// Retrieval: entangle a fresh photon (fiducial |+>_p) with the emitter and
// measure the emitter; the photon carries the stored state away.
MemoryResult memory_retrieve(const Vec2& emitter_state, const PulseShape& pulse,
                             const EmitterParams& em, ProtocolKind protocol,
                             MeasureBasis emitter_basis = MeasureBasis::x,
                             double coupling_boost = 1.0);

struct RemoteEntangleResult {
    std::vector<Vec4> outcome_states;  // two-emitter states, basis |a b>
    std::vector<double> outcome_probabilities;
    double concurrence_min = 0.0;
    double p_success = 0.0;
    double p_site_a = 0.0;
    double p_site_b = 0.0;
};

// One photon interacts sequentially with gate blocks at two emitters and is
// then measured; heralded on both blocks succeeding, the emitters are left
// maximally entangled for any Purcell factors.  Measuring in the z basis
// instead (no basis rotation) leaves only classical correlations.
RemoteEntangleResult remote_entangle(const EmitterParams& site_a, const EmitterParams& site_b,
                                     const PulseShape& pulse, ProtocolKind protocol,
                                     MeasureBasis photon_basis = MeasureBasis::x,
                                     double coupling_boost = 1.0);

}  // namespace wqed
