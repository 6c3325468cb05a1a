#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wqed/errors.hpp"
#include "wqed/wave_packet.hpp"

namespace wqed {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Vector4cd;

// Two-qubit objects live on photon (x) emitter space with basis index
// 2*p + e, i.e. |p e> ordered 00, 01, 10, 11.

Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
Mat2 hadamard();

Mat4 kron(const Mat2& photon_op, const Mat2& emitter_op);
Vec4 kron(const Vec2& photon, const Vec2& emitter);

// Composite target of the time-bin protocol:
// |0><0|_p (x) H Z + |1><1|_p (x) Z H.
Mat4 time_bin_target();

// Controlled-phase target of the polarization protocol:
// |0><0|_p (x) 1 + |1><1|_p (x) Z.
Mat4 controlled_z_target();

// Pure-state concurrence 2|ad - bc|; requires a normalized input.
double concurrence(const Vec4& state);

// Conditional (heralded) map on the two-qubit space: one Kraus operator per
// retained spatial mode.  sum K_i^dag K_i <= 1; a single Kraus operator
// proportional to a unitary means unit conditional fidelity.
struct ConditionalMap {
    std::vector<Mat4> kraus;
    double p_success_avg = 0.0;
    double p_success_min = 0.0;
    std::string herald_spec;

    // Largest eigenvalue of sum K^dag K minus one; <= ~1e-9 for a physical map.
    double completeness_excess() const;
};

// Normalized-Choi overlap F = sum_i |tr(U^dag K_i)|^2 / (d sum_i tr(K_i^dag K_i)),
// d = 4.  Equals 1 iff the map is proportional to the target; invariant
// under a global phase of either argument.
double process_fidelity(const ConditionalMap& map, const Mat4& target);

inline double average_fidelity_from_process(double f_pro) { return (4.0 * f_pro + 1.0) / 5.0; }

// Concurrence of op |+>|+> after normalization; 1 for maximally entangling
// single-Kraus maps, 0 when the probe output is a product or vanishes.
double entangling_witness(const Mat4& op);

struct GateReport {
    double process_fidelity = 0.0;
    double average_fidelity = 0.0;
    double p_success_avg = 0.0;
    double p_success_min = 0.0;
    double failure_rate = 0.0;
    double loss_rate = 0.0;
    double entangling_power_witness = 0.0;
};

}  // namespace wqed
