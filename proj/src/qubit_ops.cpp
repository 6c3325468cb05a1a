#include "wqed/qubit_ops.hpp"

#include <cmath>

namespace wqed {

namespace {
const cplx kI{0.0, 1.0};
}

Mat2 pauli_x() {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}

Mat2 pauli_y() {
    Mat2 m;
    m << 0, -kI, kI, 0;
    return m;
}

Mat2 pauli_z() {
    Mat2 m;
    m << 1, 0, 0, -1;
    return m;
}

Mat2 hadamard() {
    Mat2 m;
    m << 1, 1, 1, -1;
    return m / std::sqrt(2.0);
}

Mat4 kron(const Mat2& photon_op, const Mat2& emitter_op) {
    Mat4 out;
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
            out.block<2, 2>(2 * p, 2 * q) = photon_op(p, q) * emitter_op;
    return out;
}

Vec4 kron(const Vec2& photon, const Vec2& emitter) {
    Vec4 out;
    for (int p = 0; p < 2; ++p)
        for (int e = 0; e < 2; ++e) out(2 * p + e) = photon(p) * emitter(e);
    return out;
}

Mat4 time_bin_target() {
    Mat4 u = Mat4::Zero();
    u.block<2, 2>(0, 0) = hadamard() * pauli_z();
    u.block<2, 2>(2, 2) = pauli_z() * hadamard();
    return u;
}

Mat4 controlled_z_target() {
    Mat4 u = Mat4::Zero();
    u.block<2, 2>(0, 0) = Mat2::Identity();
    u.block<2, 2>(2, 2) = pauli_z();
    return u;
}

double concurrence(const Vec4& state) {
    if (std::abs(state.squaredNorm() - 1.0) > 1e-8)
        throw ValidationError("concurrence: state is not normalized");
    return 2.0 * std::abs(state(0) * state(3) - state(1) * state(2));
}

double ConditionalMap::completeness_excess() const {
    Mat4 s = Mat4::Zero();
    for (const auto& k : kraus) s += k.adjoint() * k;
    Eigen::SelfAdjointEigenSolver<Mat4> es(s);
    return es.eigenvalues().maxCoeff() - 1.0;
}

double process_fidelity(const ConditionalMap& map, const Mat4& target) {
    if (map.kraus.empty()) throw ValidationError("process_fidelity: empty map");
    double num = 0.0;
    double den = 0.0;
    for (const auto& k : map.kraus) {
        num += std::norm((target.adjoint() * k).trace());
        den += (k.adjoint() * k).trace().real();
    }
    if (den < 1e-300) throw ValidationError("process_fidelity: map has zero mass");
    return num / (4.0 * den);
}

double entangling_witness(const Mat4& op) {
    const Vec2 plus = (Vec2() << 1.0, 1.0).finished() / std::sqrt(2.0);
    Vec4 probe = op * kron(plus, plus);
    const double n = probe.norm();
    if (n < 1e-12) return 0.0;
    return concurrence(probe / n);
}

}  // namespace wqed
