#pragma once

#include <utility>
#include <variant>

#include "wqed/wave_packet.hpp"

namespace wqed {

// A(tau) = sqrt(rate) * exp(-rate (tau - start) / 2) for tau >= start.
// This is the waveform of a photon spontaneously emitted at `rate` by a
// distant source.
struct HalfExponential {
    double rate = 1.0;
    double start = 0.0;
};

// Unit-norm Gaussian envelope; sigma is the rms width of the amplitude.
struct GaussianPulse {
    double sigma = 1.0;
    double center = 0.0;
};

// Flat top of duration flat_duration with raised-cosine (sin^2) ramps of
// duration edge_duration on both sides; support starts at `start`.
// Approximates a plane wave when flat_duration * Gamma >> 1.
struct PlaneWaveWindow {
    double flat_duration = 100.0;
    double edge_duration = 1.0;
    double start = 0.0;
};

// Convenience: window with the default 1:100 edge-to-flat ratio.
PlaneWaveWindow plane_wave_window(double flat_duration, double start = 0.0);

using PulseShape = std::variant<HalfExponential, GaussianPulse, PlaneWaveWindow>;

// Analytic unit-norm envelope value at tau.
double shape_amplitude(const PulseShape& shape, double tau);

// Squared mass of the analytic envelope outside [t_lo, t_hi].
double shape_mass_outside(const PulseShape& shape, double t_lo, double t_hi);

// Characteristic spectral width; sets the sampling requirement.
double shape_bandwidth(const PulseShape& shape);

// Interval carrying all but ~1e-9 of the squared mass per side.
std::pair<double, double> shape_support(const PulseShape& shape);

// Overlap <A | A shifted by separation>; used by the time-bin
// support-orthogonality precondition.  Real-valued for these families.
double shape_shift_overlap(const PulseShape& shape, double separation);

// Smallest bin separation with shift overlap below 1e-9.
double default_bin_separation(const PulseShape& shape);

// Grid rule: dt = min(1/Gamma, 1/bandwidth)/50 (unless overridden), window
// from the support start to 40/Gamma past the support end so the scattered
// tail is resolved and captured.
TimeGrid default_grid(const PulseShape& shape, double gamma_total, double dt_override = 0.0);

// Samples the analytic envelope on the grid.  The shape's squared mass
// outside the grid must be below tail_tolerance, otherwise a
// ResolutionError is thrown.  No renormalization is applied: the analytic
// formulas are unit-norm and the quadrature reproduces that to ~1e-9.
WavePacket make_pulse(const PulseShape& shape, const TimeGrid& grid, double detuning = 0.0,
                      Direction direction = Direction::rightward);

}  // namespace wqed
