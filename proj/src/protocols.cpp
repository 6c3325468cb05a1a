#include "wqed/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace wqed {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

const std::vector<Vec4>& standard_inputs() {
    static const std::vector<Vec4> inputs = [] {
        std::vector<Vec4> v;
        for (int j = 0; j < 4; ++j) v.push_back(Vec4::Unit(j));
        // superposition probes for the linearity check: one product, one
        // entangled
        v.push_back(Vec4::Constant(0.5));
        Vec4 probe = Vec4::Zero();
        probe(0) = 1.0 / kSqrt2;
        probe(3) = cplx{0.0, 1.0} / kSqrt2;
        v.push_back(probe);
        return v;
    }();
    return inputs;
}

Vec2 column(const Vec4& input, int p) { return Vec2(input(2 * p), input(2 * p + 1)); }

// sqrt(2) * sigma_+ component at the output port equals the linear
// v/h envelope the herald kept.
WavePacket kept_envelope(const JointState& state, int emitter_level, const WavePacket& like) {
    const WavePacket* sp = state.find({static_cast<EmitterLevel>(emitter_level),
                                       Polarization::sigma_plus, Port::output});
    if (!sp) return WavePacket::zeros_like(like);
    return kSqrt2 * (*sp);
}

ProtocolRun run_time_bin_input(const Vec4& input, const WavePacket& psi,
                               const EmitterParams& em, double boost) {
    ProtocolRun run;
    for (auto& row : run.envelope)
        for (auto& p : row) p = WavePacket::zeros_like(psi);

    for (int p = 0; p < 2; ++p) {
        const Vec2 c = column(input, p);
        if (c.squaredNorm() == 0.0) continue;
        JointState st = make_h_input(c, psi);
        if (p == 1) st = emitter_unitary(st, hadamard());  // H before the late bin
        HeraldOutcome out = z_block(st, em, boost);
        JointState success = std::move(out.success_state);
        if (p == 0) success = emitter_unitary(success, hadamard());  // H after the early bin
        run.failure_weight += out.failure_weight;
        run.loss_weight += out.loss_weight;
        for (int e = 0; e < 2; ++e) run.envelope[e][p] += kept_envelope(success, e, psi);
    }
    return run;
}

ProtocolRun run_polarization_input(const Vec4& input, const WavePacket& psi,
                                   const EmitterParams& em, const WaveformCorrector& wfc,
                                   double boost) {
    ProtocolRun run;
    for (auto& row : run.envelope)
        for (auto& p : row) p = WavePacket::zeros_like(psi);

    // |1>_p = h arm: conditional-Z block, HWP rotates the v output back to h.
    const Vec2 ch = column(input, 1);
    if (ch.squaredNorm() > 0.0) {
        HeraldOutcome out = z_block(make_h_input(ch, psi), em, boost);
        run.failure_weight += out.failure_weight;
        run.loss_weight += out.loss_weight;
        for (int e = 0; e < 2; ++e) run.envelope[e][1] += kept_envelope(out.success_state, e, psi);
    }

    // |0>_p = v arm: waveform corrector.
    const Vec2 cv = column(input, 0);
    const double arm_mass = cv.squaredNorm();
    if (arm_mass > 0.0) {
        WavePacket corrected = psi;
        switch (wfc.kind) {
            case WaveformCorrector::Kind::none:
                break;
            case WaveformCorrector::Kind::attenuator: {
                corrected = wfc.attenuation * psi;
                run.failure_weight += arm_mass * (1.0 - std::norm(wfc.attenuation));
                break;
            }
            case WaveformCorrector::Kind::second_scatterer: {
                // Pinned block output is the reflected envelope; the arm's
                // wave plates contribute a fixed -1 so the narrowband limit
                // coincides with the attenuator corrector k = f.
                WavePacket b2 = wfc_second_scatterer(psi, *wfc.scatterer, boost);
                const double p2 = b2.norm2();
                const double t2 = (psi + b2).norm2();
                const double in2 = psi.norm2();
                run.failure_weight += arm_mass * (t2 / in2);
                run.loss_weight += arm_mass * (1.0 - (t2 + p2) / in2);
                corrected = cplx{-1.0, 0.0} * b2;
                break;
            }
        }
        for (int e = 0; e < 2; ++e) run.envelope[e][0] += cv(e) * corrected;
    }
    return run;
}

GateResult finish_gate(const std::vector<Vec4>& inputs, const std::vector<ProtocolRun>& runs,
                       const Mat4& target, std::string herald_spec) {
    GateResult result;
    result.map = extract_conditional_map(inputs, runs, std::move(herald_spec), &result.modes);

    auto& rep = result.report;
    rep.process_fidelity = process_fidelity(result.map, target);
    rep.average_fidelity = average_fidelity_from_process(rep.process_fidelity);
    rep.p_success_avg = result.map.p_success_avg;
    rep.p_success_min = result.map.p_success_min;
    for (int j = 0; j < 4; ++j) {
        rep.failure_rate += runs[j].failure_weight / 4.0;
        rep.loss_rate += runs[j].loss_weight / 4.0;
    }
    const Mat4* dominant = nullptr;
    double best = -1.0;
    for (const auto& k : result.map.kraus) {
        const double w = k.squaredNorm();
        if (w > best) {
            best = w;
            dominant = &k;
        }
    }
    rep.entangling_power_witness = dominant ? entangling_witness(*dominant) : 0.0;
    return result;
}

// Effective single-qubit operator of the ideal gate after measuring one
// side: out = L psi, where psi enters on the measured side (the flying
// state being stored, or the emitter being read out), the opposite side is
// prepared in `fixed`, and the measured side's output is projected on the
// bra `w`.  measured_side 0 = photon.
Mat2 ideal_effective(const Mat4& target, int measured_side, const Vec2& fixed, const Vec2& w) {
    Mat2 l = Mat2::Zero();
    for (int p_out = 0; p_out < 2; ++p_out)
        for (int e_out = 0; e_out < 2; ++e_out)
            for (int p_in = 0; p_in < 2; ++p_in)
                for (int e_in = 0; e_in < 2; ++e_in) {
                    const cplx u = target(2 * p_out + e_out, 2 * p_in + e_in);
                    if (measured_side == 0)  // measure the photon, emitter fixed
                        l(e_out, p_in) += std::conj(w(p_out)) * u * fixed(e_in);
                    else  // measure the emitter, photon fixed
                        l(p_out, e_in) += std::conj(w(e_out)) * u * fixed(p_in);
                }
    return l;
}

std::array<Vec2, 2> basis_vectors(MeasureBasis basis) {
    const cplx i{0.0, 1.0};
    switch (basis) {
        case MeasureBasis::x:
            return {Vec2(1.0, 1.0) / kSqrt2, Vec2(1.0, -1.0) / kSqrt2};
        case MeasureBasis::y:
            return {Vec2(1.0, i) / kSqrt2, Vec2(1.0, -i) / kSqrt2};
        case MeasureBasis::z:
            return {Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
    }
    throw ValidationError("unknown measurement basis");
}

ProtocolRun run_protocol_input(const Vec4& input, const WavePacket& psi, const EmitterParams& em,
                               ProtocolKind protocol, double boost) {
    if (protocol == ProtocolKind::time_bin) return run_time_bin_input(input, psi, em, boost);
    return run_polarization_input(input, psi, em, WaveformCorrector::make_second_scatterer(em),
                                  boost);
}

MemoryResult measure_one_side(const ProtocolRun& run, const Mat4& target, int measured_side,
                              const Vec2& fixed, MeasureBasis basis) {
    MemoryResult result;
    result.p_success = run.success_mass();
    if (result.p_success <= 0.0) throw ValidationError("memory: herald probability vanished");

    const auto vectors = basis_vectors(basis);
    double total = 0.0;
    std::vector<Mat2> rhos;
    for (int m = 0; m < 2; ++m) {
        const Vec2& w = vectors[m];
        // Free-side envelopes after projecting the measured side.
        std::array<WavePacket, 2> projected;
        for (int free = 0; free < 2; ++free) {
            WavePacket acc = WavePacket::zeros_like(run.envelope[0][0]);
            for (int meas = 0; meas < 2; ++meas) {
                const auto& env =
                    (measured_side == 0) ? run.envelope[free][meas] : run.envelope[meas][free];
                acc += std::conj(w(meas)) * env;
            }
            projected[free] = std::move(acc);
        }
        Mat2 rho;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) rho(r, c) = inner_product(projected[c], projected[r]);

        Mat2 l = ideal_effective(target, measured_side, fixed, w);
        const Mat2 ll = l * l.adjoint();
        const double scale = 0.5 * ll.trace().real();
        if (scale < 1e-12 || (ll - scale * Mat2::Identity()).norm() > 1e-9 * scale)
            throw ValidationError("memory: measurement basis does not yield a correctable frame");
        const Mat2 correction = (l / std::sqrt(scale)).adjoint();

        const double p_m = rho.trace().real();
        total += p_m;
        Mat2 corrected = correction * (rho / std::max(p_m, 1e-300)) * correction.adjoint();
        result.outcomes.push_back({m, p_m, corrected, correction});
        rhos.push_back(corrected);
    }
    for (auto& o : result.outcomes) o.probability /= total;
    return result;
}

}  // namespace

WaveformCorrector WaveformCorrector::make_attenuator(cplx k) {
    if (!(std::abs(k) <= 1.0))
        throw ValidationError("WaveformCorrector: attenuation must satisfy |k| <= 1");
    WaveformCorrector w;
    w.kind = Kind::attenuator;
    w.attenuation = k;
    return w;
}

WaveformCorrector WaveformCorrector::make_second_scatterer(const EmitterParams& em) {
    WaveformCorrector w;
    w.kind = Kind::second_scatterer;
    w.scatterer = em;
    return w;
}

double ProtocolRun::success_mass() const {
    double mass = 0.0;
    for (const auto& row : envelope)
        for (const auto& p : row) mass += p.norm2();
    return mass;
}

WavePacket wfc_second_scatterer(const WavePacket& psi, const EmitterParams& em,
                                double coupling_boost) {
    const EmitterParams eff = em.boosted(coupling_boost);
    std::vector<cplx> b = reflected_envelope(psi.amplitudes, psi.grid.dt, eff,
                                             psi.carrier_detuning, ScatterMethod::etd_recursive);
    return WavePacket(psi.grid, std::move(b), psi.carrier_detuning, psi.direction);
}

ConditionalMap extract_conditional_map(const std::vector<Vec4>& inputs,
                                       const std::vector<ProtocolRun>& runs,
                                       std::string herald_spec,
                                       std::vector<WavePacket>* modes_out) {
    if (runs.size() < 4 || runs.size() != inputs.size())
        throw ValidationError("extract_conditional_map: need the four computational runs");
    for (int j = 0; j < 4; ++j)
        if ((inputs[j] - Vec4::Unit(j)).norm() > 1e-12)
            throw ValidationError(
                "extract_conditional_map: first four inputs must be the computational basis");

    // Orthonormal spatial modes across every branch envelope (Gram-Schmidt
    // with drop tolerance 1e-10, one re-orthogonalization pass).
    std::vector<WavePacket> modes;
    for (const auto& run : runs) {
        for (const auto& row : run.envelope) {
            for (const auto& env : row) {
                if (env.norm2() < 1e-24) continue;
                WavePacket residual = env;
                for (int pass = 0; pass < 2; ++pass)
                    for (const auto& m : modes)
                        residual += (-inner_product(m, residual)) * m;
                const double nn = residual.norm();
                if (nn > 1e-10) modes.push_back((1.0 / nn) * residual);
            }
        }
    }

    ConditionalMap map;
    map.herald_spec = std::move(herald_spec);
    map.kraus.assign(modes.size(), Mat4::Zero());
    for (int j = 0; j < 4; ++j)
        for (int e = 0; e < 2; ++e)
            for (int p = 0; p < 2; ++p)
                for (std::size_t k = 0; k < modes.size(); ++k)
                    map.kraus[k](2 * p + e, j) = inner_product(modes[k], runs[j].envelope[e][p]);

    // Linearity check against the probe runs.
    for (std::size_t j = 4; j < runs.size(); ++j) {
        double residual2 = 0.0;
        for (int e = 0; e < 2; ++e) {
            for (int p = 0; p < 2; ++p) {
                WavePacket rec = WavePacket::zeros_like(runs[j].envelope[e][p]);
                for (std::size_t k = 0; k < modes.size(); ++k) {
                    const cplx coeff = (map.kraus[k] * inputs[j])(2 * p + e);
                    rec += coeff * modes[k];
                }
                residual2 += (runs[j].envelope[e][p] - rec).norm2();
            }
        }
        if (std::sqrt(residual2) > 1e-8)
            throw NonlinearityError("extract_conditional_map: probe reconstruction residual " +
                                    std::to_string(std::sqrt(residual2)));
    }

    double avg = 0.0;
    double mn = 1.0;
    for (int j = 0; j < 4; ++j) {
        const double p = runs[j].success_mass();
        avg += p / 4.0;
        mn = std::min(mn, p);
    }
    map.p_success_avg = avg;
    map.p_success_min = mn;

    if (modes_out) *modes_out = std::move(modes);
    return map;
}

GateResult time_bin_gate_packet(const WavePacket& bin_envelope, const EmitterParams& em,
                                double coupling_boost) {
    const auto& inputs = standard_inputs();
    std::vector<ProtocolRun> runs;
    runs.reserve(inputs.size());
    for (const auto& in : inputs)
        runs.push_back(run_time_bin_input(in, bin_envelope, em, coupling_boost));
    return finish_gate(inputs, runs, time_bin_target(),
                       "v-polarized output photon in the matching time bin");
}

GateResult time_bin_gate(const PulseShape& pulse, double bin_separation, const EmitterParams& em,
                         double coupling_boost) {
    const double overlap = shape_shift_overlap(pulse, bin_separation);
    if (!(overlap < tail_tolerance))
        throw ValidationError("time_bin_gate: bins overlap (envelope overlap " +
                              std::to_string(overlap) + ")");
    const TimeGrid grid = default_grid(pulse, em.boosted(coupling_boost).gamma_total());
    const WavePacket psi = make_pulse(pulse, grid, em.detuning);
    return time_bin_gate_packet(psi, em, coupling_boost);
}

GateResult polarization_gate_packet(const WavePacket& psi, const EmitterParams& em,
                                    const WaveformCorrector& wfc, double coupling_boost) {
    if (wfc.kind == WaveformCorrector::Kind::attenuator && !(std::abs(wfc.attenuation) <= 1.0))
        throw ValidationError("polarization_gate: attenuator must satisfy |k| <= 1");
    if (wfc.kind == WaveformCorrector::Kind::second_scatterer && !wfc.scatterer)
        throw ValidationError("polarization_gate: second-scatterer parameters missing");
    const auto& inputs = standard_inputs();
    std::vector<ProtocolRun> runs;
    runs.reserve(inputs.size());
    for (const auto& in : inputs)
        runs.push_back(run_polarization_input(in, psi, em, wfc, coupling_boost));
    return finish_gate(inputs, runs, controlled_z_target(),
                       "photon exits the joint output port (no h-polarized detection)");
}

GateResult polarization_gate(const PulseShape& pulse, const EmitterParams& em,
                             const WaveformCorrector& wfc, double coupling_boost) {
    double gamma_max = em.boosted(coupling_boost).gamma_total();
    if (wfc.kind == WaveformCorrector::Kind::second_scatterer && wfc.scatterer)
        gamma_max = std::max(gamma_max, wfc.scatterer->boosted(coupling_boost).gamma_total());
    const TimeGrid grid = default_grid(pulse, gamma_max);
    const WavePacket psi = make_pulse(pulse, grid, em.detuning);
    return polarization_gate_packet(psi, em, wfc, coupling_boost);
}

double MemoryResult::fidelity(const Vec2& target) const {
    double worst = 1.0;
    for (const auto& o : outcomes)
        worst = std::min(worst, (target.adjoint() * o.rho * target).value().real());
    return worst;
}

Vec2 MemoryResult::as_pure(double tol) const {
    Mat2 rho = Mat2::Zero();
    for (const auto& o : outcomes) rho += o.probability * o.rho;
    Eigen::SelfAdjointEigenSolver<Mat2> es(rho);
    if (es.eigenvalues()(1) < 1.0 - tol)
        throw ValidationError("MemoryResult: state is not pure within tolerance");
    return es.eigenvectors().col(1);
}

MemoryResult memory_store(const Vec2& photon_state, const PulseShape& pulse,
                          const EmitterParams& em, ProtocolKind protocol,
                          MeasureBasis photon_basis, double coupling_boost) {
    if (std::abs(photon_state.squaredNorm() - 1.0) > 1e-8)
        throw ValidationError("memory_store: photon state is not normalized");
    const TimeGrid grid = default_grid(pulse, em.boosted(coupling_boost).gamma_total());
    const WavePacket psi = make_pulse(pulse, grid, em.detuning);

    const Vec2 plus = Vec2(1.0, 1.0) / kSqrt2;  // fiducial emitter state
    const Vec4 input = kron(photon_state, plus);
    const ProtocolRun run = run_protocol_input(input, psi, em, protocol, coupling_boost);
    const Mat4 target =
        protocol == ProtocolKind::time_bin ? time_bin_target() : controlled_z_target();
    return measure_one_side(run, target, /*measured_side=*/0, plus, photon_basis);
}

MemoryResult memory_retrieve(const Vec2& emitter_state, const PulseShape& pulse,
                             const EmitterParams& em, ProtocolKind protocol,
                             MeasureBasis emitter_basis, double coupling_boost) {
    if (std::abs(emitter_state.squaredNorm() - 1.0) > 1e-8)
        throw ValidationError("memory_retrieve: emitter state is not normalized");
    const TimeGrid grid = default_grid(pulse, em.boosted(coupling_boost).gamma_total());
    const WavePacket psi = make_pulse(pulse, grid, em.detuning);

    const Vec2 plus = Vec2(1.0, 1.0) / kSqrt2;  // fiducial photon state
    const Vec4 input = kron(plus, emitter_state);
    const ProtocolRun run = run_protocol_input(input, psi, em, protocol, coupling_boost);
    const Mat4 target =
        protocol == ProtocolKind::time_bin ? time_bin_target() : controlled_z_target();
    return measure_one_side(run, target, /*measured_side=*/1, plus, emitter_basis);
}

RemoteEntangleResult remote_entangle(const EmitterParams& site_a, const EmitterParams& site_b,
                                     const PulseShape& pulse, ProtocolKind protocol,
                                     MeasureBasis photon_basis, double coupling_boost) {
    const double gt_a = site_a.boosted(coupling_boost).gamma_total();
    const double gt_b = site_b.boosted(coupling_boost).gamma_total();

    // One grid accommodating the pulse and the ring-down at both sites.
    const auto [lo, hi] = shape_support(pulse);
    const double dt =
        std::min({1.0 / gt_a, 1.0 / gt_b, 1.0 / shape_bandwidth(pulse)}) / 50.0;
    const double span = (hi - lo) + 40.0 / gt_a + 40.0 / gt_b;
    const TimeGrid grid(lo, dt, static_cast<std::size_t>(std::ceil(span / dt)) + 1);

    const WavePacket psi = make_pulse(pulse, grid, site_a.detuning);

    auto run_block = [&](const WavePacket& in, const EmitterParams& em) {
        if (protocol == ProtocolKind::time_bin)
            return time_bin_gate_packet(in, em, coupling_boost);
        return polarization_gate_packet(in, em, WaveformCorrector::make_second_scatterer(em),
                                        coupling_boost);
    };

    GateResult block_a = run_block(psi, site_a);
    if (block_a.map.kraus.size() != 1)
        throw ValidationError("remote_entangle: site A block is not waveform-matched");

    // The photon continues with site A's success envelope; only the kernel
    // detuning changes when it reaches site B.
    WavePacket relay = block_a.modes[0];
    relay.carrier_detuning = site_b.detuning;
    GateResult block_b = run_block(relay, site_b);
    if (block_b.map.kraus.size() != 1)
        throw ValidationError("remote_entangle: site B block is not waveform-matched");

    const Mat4& ka = block_a.map.kraus[0];
    const Mat4& kb = block_b.map.kraus[0];

    // Joint amplitude over (photon, emitter A, emitter B), index 4p + 2a + b.
    std::array<cplx, 8> omega;
    const double amp = 1.0 / std::sqrt(8.0);
    omega.fill(cplx{amp, 0.0});

    std::array<cplx, 8> tmp{};
    for (int p = 0; p < 2; ++p)  // apply K_A on (photon, A)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                cplx acc = 0.0;
                for (int q = 0; q < 2; ++q)
                    for (int a2 = 0; a2 < 2; ++a2)
                        acc += ka(2 * p + a, 2 * q + a2) * omega[4 * q + 2 * a2 + b];
                tmp[4 * p + 2 * a + b] = acc;
            }
    for (int p = 0; p < 2; ++p)  // apply K_B on (photon, B)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                cplx acc = 0.0;
                for (int q = 0; q < 2; ++q)
                    for (int b2 = 0; b2 < 2; ++b2)
                        acc += kb(2 * p + b, 2 * q + b2) * tmp[4 * q + 2 * a + b2];
                omega[4 * p + 2 * a + b] = acc;
            }

    RemoteEntangleResult result;
    result.p_site_a = block_a.report.p_success_avg;
    result.p_site_b = block_b.report.p_success_avg;
    double p_total = 0.0;
    for (const auto& x : omega) p_total += std::norm(x);
    result.p_success = p_total;

    const auto vectors = basis_vectors(photon_basis);
    result.concurrence_min = 1.0;
    for (int m = 0; m < 2; ++m) {
        Vec4 state = Vec4::Zero();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int p = 0; p < 2; ++p)
                    state(2 * a + b) += std::conj(vectors[m](p)) * omega[4 * p + 2 * a + b];
        const double p_m = state.squaredNorm();
        result.outcome_probabilities.push_back(p_m / p_total);
        if (p_m / p_total < 1e-12) {
            result.outcome_states.push_back(Vec4::Zero());
            continue;
        }
        state /= std::sqrt(p_m);
        result.outcome_states.push_back(state);
        result.concurrence_min = std::min(result.concurrence_min, concurrence(state));
    }
    return result;
}

}  // namespace wqed
