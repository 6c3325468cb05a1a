#include "wqed/wave_packet.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

namespace wqed {

Direction flipped(Direction d) {
    return d == Direction::rightward ? Direction::leftward : Direction::rightward;
}

WavePacket::WavePacket(TimeGrid g, std::vector<cplx> amps, double detuning, Direction dir)
    : grid(g), amplitudes(std::move(amps)), carrier_detuning(detuning), direction(dir) {
    if (amplitudes.size() != grid.n_samples)
        throw ValidationError("WavePacket: amplitude count does not match the grid");
}

WavePacket WavePacket::zeros_like(const WavePacket& other) {
    return WavePacket(other.grid, std::vector<cplx>(other.size(), cplx{0.0, 0.0}),
                      other.carrier_detuning, other.direction);
}

namespace {

// Gregory end corrections on top of the plain trapezoid rule; third order at
// the boundaries, so smooth integrands converge O(dt^4).  Short arrays fall
// back to the trapezoid weights.
constexpr double kG0 = 3.0 / 8.0;
constexpr double kG1 = 7.0 / 6.0;
constexpr double kG2 = 23.0 / 24.0;

template <typename Term>
cplx corrected_sum(std::size_t n, double dt, Term term) {
    cplx s{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) s += term(k);
    if (n >= 8) {
        s += (kG0 - 1.0) * (term(0) + term(n - 1));
        s += (kG1 - 1.0) * (term(1) + term(n - 2));
        s += (kG2 - 1.0) * (term(2) + term(n - 3));
    } else {
        s -= 0.5 * (term(0) + term(n - 1));
    }
    return s * dt;
}

}  // namespace

double quadrature_norm2(const std::vector<cplx>& a, double dt) {
    return corrected_sum(a.size(), dt, [&](std::size_t k) {
               return cplx{std::norm(a[k]), 0.0};
           })
        .real();
}

cplx quadrature_inner(const std::vector<cplx>& a, const std::vector<cplx>& b, double dt) {
    return corrected_sum(a.size(), dt,
                         [&](std::size_t k) { return std::conj(a[k]) * b[k]; });
}

double WavePacket::norm2() const { return quadrature_norm2(amplitudes, grid.dt); }

double WavePacket::norm() const { return std::sqrt(norm2()); }

void require_same_frame(const WavePacket& a, const WavePacket& b) {
    if (!(a.grid == b.grid))
        throw GridMismatchError("packets live on different time grids");
    if (a.carrier_detuning != b.carrier_detuning)
        throw GridMismatchError("packets carry different carrier detunings");
}

WavePacket& WavePacket::operator+=(const WavePacket& other) {
    require_same_frame(*this, other);
    for (std::size_t k = 0; k < amplitudes.size(); ++k) amplitudes[k] += other.amplitudes[k];
    return *this;
}

WavePacket& WavePacket::operator*=(cplx factor) {
    for (auto& a : amplitudes) a *= factor;
    return *this;
}

WavePacket operator+(WavePacket a, const WavePacket& b) {
    a += b;
    return a;
}

WavePacket operator-(WavePacket a, const WavePacket& b) {
    a += (cplx{-1.0, 0.0} * b);
    return a;
}

WavePacket operator*(cplx factor, WavePacket p) {
    p *= factor;
    return p;
}

cplx inner_product(const WavePacket& a, const WavePacket& b) {
    require_same_frame(a, b);
    return quadrature_inner(a.amplitudes, b.amplitudes, a.grid.dt);
}

WavePacket scale_shift(const WavePacket& p, cplx factor, double delay) {
    const double steps = delay / p.grid.dt;
    const long long k = std::llround(steps);
    if (std::abs(steps - static_cast<double>(k)) > 1e-9)
        throw ResolutionError("scale_shift: delay is not an integer multiple of dt");

    const long long n = static_cast<long long>(p.size());
    double dropped = 0.0;
    std::vector<cplx> shifted(p.size(), cplx{0.0, 0.0});
    for (long long j = 0; j < n; ++j) {
        const long long src = j - k;
        if (src < 0 || src >= n) continue;
        shifted[static_cast<std::size_t>(j)] = factor * p.amplitudes[static_cast<std::size_t>(src)];
    }
    for (long long src = 0; src < n; ++src) {
        const long long dst = src + k;
        if (dst < 0 || dst >= n)
            dropped += std::norm(factor * p.amplitudes[static_cast<std::size_t>(src)]) * p.grid.dt;
    }
    if (dropped > tail_tolerance)
        throw ResolutionError("scale_shift: shifted support leaves the grid (squared mass " +
                              std::to_string(dropped) + ")");
    return WavePacket(p.grid, std::move(shifted), p.carrier_detuning, p.direction);
}

}  // namespace wqed
