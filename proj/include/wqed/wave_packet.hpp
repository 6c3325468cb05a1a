#pragma once

#include <complex>
#include <vector>

#include "wqed/time_grid.hpp"

namespace wqed {

using cplx = std::complex<double>;

enum class Direction { rightward, leftward };

Direction flipped(Direction d);

// Squared-mass tolerance for pulse tails truncated by a finite grid.
// Enforced at construction time by make_pulse and by scale_shift.
inline constexpr double tail_tolerance = 1e-8;

// Single-photon envelope in the co-moving coordinate tau = t - z/c (c = 1),
// with the optical carrier exp(-i (omega_0 + delta) tau) factored out.
// Packets are plain values; operations return new packets.
struct WavePacket {
    TimeGrid grid;
    std::vector<cplx> amplitudes;   // A(tau_k)
    double carrier_detuning = 0.0;  // delta = omega_p - omega_0
    Direction direction = Direction::rightward;

    WavePacket() = default;
    WavePacket(TimeGrid g, std::vector<cplx> amps, double detuning = 0.0,
               Direction dir = Direction::rightward);

    static WavePacket zeros_like(const WavePacket& other);

    std::size_t size() const { return amplitudes.size(); }

    double norm2() const;  // integral |A|^2 dtau
    double norm() const;

    WavePacket& operator+=(const WavePacket& other);
    WavePacket& operator*=(cplx factor);
};

WavePacket operator+(WavePacket a, const WavePacket& b);
WavePacket operator-(WavePacket a, const WavePacket& b);
WavePacket operator*(cplx factor, WavePacket p);

// <a|b> = sum_k w_k conj(a_k) b_k dt.  Requires identical grids and carrier
// detunings; direction is metadata and is not checked.
cplx inner_product(const WavePacket& a, const WavePacket& b);

// Multiplies the envelope by `factor` and translates it by `delay`.  The
// delay must be an integer multiple of dt; squared mass pushed off the grid
// must stay below tail_tolerance.
WavePacket scale_shift(const WavePacket& p, cplx factor, double delay);

void require_same_frame(const WavePacket& a, const WavePacket& b);

// End-corrected trapezoid quadrature (Gregory weights) used for every norm
// and overlap in the library.  The corrections push smooth-integrand errors
// to O(dt^4), which the pulse-normalization and stability properties need.
double quadrature_norm2(const std::vector<cplx>& a, double dt);
cplx quadrature_inner(const std::vector<cplx>& a, const std::vector<cplx>& b, double dt);

}  // namespace wqed
