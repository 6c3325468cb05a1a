#include "wqed/pulse_shapes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wqed {

namespace {

constexpr double kSupportMass = 1e-9;  // per-side squared mass left outside shape_support

void validate(const HalfExponential& s) {
    if (!(s.rate > 0.0)) throw ValidationError("HalfExponential: rate must be positive");
}

void validate(const GaussianPulse& s) {
    if (!(s.sigma > 0.0)) throw ValidationError("GaussianPulse: sigma must be positive");
}

void validate(const PlaneWaveWindow& s) {
    if (!(s.flat_duration > 0.0))
        throw ValidationError("PlaneWaveWindow: flat_duration must be positive");
    if (!(s.edge_duration > 0.0))
        throw ValidationError("PlaneWaveWindow: edge_duration must be positive");
}

// Cumulative squared mass of the window envelope up to x.
double window_cumulative(const PlaneWaveWindow& s, double x) {
    const double te = s.edge_duration;
    const double tw = s.flat_duration;
    const double c2 = 1.0 / (tw + 0.75 * te);
    const double u = x - s.start;
    // integral of sin^4(pi v / 2) dv from 0 to y, y in [0, 1]
    const auto s4 = [](double y) {
        return 3.0 * y / 8.0 - std::sin(std::numbers::pi * y) / (2.0 * std::numbers::pi) +
               std::sin(2.0 * std::numbers::pi * y) / (16.0 * std::numbers::pi);
    };
    if (u <= 0.0) return 0.0;
    if (u < te) return c2 * te * s4(u / te);
    if (u <= te + tw) return c2 * (0.375 * te + (u - te));
    if (u < 2.0 * te + tw) return 1.0 - c2 * te * s4((2.0 * te + tw - u) / te);
    return 1.0;
}

}  // namespace

PlaneWaveWindow plane_wave_window(double flat_duration, double start) {
    return PlaneWaveWindow{flat_duration, flat_duration / 100.0, start};
}

double shape_amplitude(const PulseShape& shape, double tau) {
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, HalfExponential>) {
                if (tau < s.start) return 0.0;
                return std::sqrt(s.rate) * std::exp(-0.5 * s.rate * (tau - s.start));
            } else if constexpr (std::is_same_v<S, GaussianPulse>) {
                const double c = 1.0 / std::sqrt(s.sigma * std::sqrt(std::numbers::pi));
                const double u = tau - s.center;
                return c * std::exp(-u * u / (2.0 * s.sigma * s.sigma));
            } else {
                const double c = 1.0 / std::sqrt(s.flat_duration + 0.75 * s.edge_duration);
                const double u = tau - s.start;
                const double w = 2.0 * s.edge_duration + s.flat_duration;
                if (u <= 0.0 || u >= w) return 0.0;
                if (u < s.edge_duration) {
                    const double r = std::sin(0.5 * std::numbers::pi * u / s.edge_duration);
                    return c * r * r;
                }
                if (u <= s.edge_duration + s.flat_duration) return c;
                const double r = std::sin(0.5 * std::numbers::pi * (w - u) / s.edge_duration);
                return c * r * r;
            }
        },
        shape);
}

double shape_mass_outside(const PulseShape& shape, double t_lo, double t_hi) {
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, HalfExponential>) {
                validate(s);
                const double head =
                    t_lo <= s.start ? 0.0 : 1.0 - std::exp(-s.rate * (t_lo - s.start));
                const double tail =
                    t_hi <= s.start ? 1.0 : std::exp(-s.rate * (t_hi - s.start));
                return std::min(1.0, head + tail);
            } else if constexpr (std::is_same_v<S, GaussianPulse>) {
                validate(s);
                const double head = 0.5 * std::erfc((s.center - t_lo) / s.sigma);
                const double tail = 0.5 * std::erfc((t_hi - s.center) / s.sigma);
                return std::min(1.0, head + tail);
            } else {
                validate(s);
                return window_cumulative(s, t_lo) + (1.0 - window_cumulative(s, t_hi));
            }
        },
        shape);
}

double shape_bandwidth(const PulseShape& shape) {
    return std::visit(
        [](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, HalfExponential>) return s.rate;
            else if constexpr (std::is_same_v<S, GaussianPulse>) return 1.0 / s.sigma;
            else return 1.0 / s.edge_duration;
        },
        shape);
}

std::pair<double, double> shape_support(const PulseShape& shape) {
    return std::visit(
        [](const auto& s) -> std::pair<double, double> {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, HalfExponential>) {
                validate(s);
                return {s.start, s.start - std::log(kSupportMass) / s.rate};
            } else if constexpr (std::is_same_v<S, GaussianPulse>) {
                validate(s);
                // erfc(4.5)/2 ~ 1e-10 per side
                return {s.center - 4.5 * s.sigma, s.center + 4.5 * s.sigma};
            } else {
                validate(s);
                return {s.start, s.start + 2.0 * s.edge_duration + s.flat_duration};
            }
        },
        shape);
}

double shape_shift_overlap(const PulseShape& shape, double separation) {
    const double d = std::abs(separation);
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, HalfExponential>) {
                return std::exp(-0.5 * s.rate * d);
            } else if constexpr (std::is_same_v<S, GaussianPulse>) {
                return std::exp(-d * d / (4.0 * s.sigma * s.sigma));
            } else {
                // compact support: zero beyond the width, crude bound inside
                const double w = 2.0 * s.edge_duration + s.flat_duration;
                if (d >= w) return 0.0;
                return (w - d) / (s.flat_duration + 0.75 * s.edge_duration);
            }
        },
        shape);
}

double default_bin_separation(const PulseShape& shape) {
    return std::visit(
        [](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, HalfExponential>) {
                return -2.0 * std::log(1e-9) / s.rate;
            } else if constexpr (std::is_same_v<S, GaussianPulse>) {
                return 2.0 * s.sigma * std::sqrt(-std::log(1e-9));
            } else {
                return 2.0 * s.edge_duration + s.flat_duration;
            }
        },
        shape);
}

TimeGrid default_grid(const PulseShape& shape, double gamma_total, double dt_override) {
    if (!(gamma_total > 0.0)) throw ValidationError("default_grid: gamma_total must be positive");
    const auto [lo, hi] = shape_support(shape);
    const double dt = dt_override > 0.0
                          ? dt_override
                          : std::min(1.0 / gamma_total, 1.0 / shape_bandwidth(shape)) / 50.0;
    const double span = (hi - lo) + 40.0 / gamma_total;
    const auto n = static_cast<std::size_t>(std::ceil(span / dt)) + 1;
    return TimeGrid(lo, dt, n);
}

WavePacket make_pulse(const PulseShape& shape, const TimeGrid& grid, double detuning,
                      Direction direction) {
    const double outside = shape_mass_outside(shape, grid.t_start, grid.t_end());
    if (outside > tail_tolerance)
        throw ResolutionError("make_pulse: grid too narrow, squared tail mass " +
                              std::to_string(outside) + " outside the grid");
    std::vector<cplx> amps(grid.n_samples);
    for (std::size_t k = 0; k < grid.n_samples; ++k)
        amps[k] = cplx{shape_amplitude(shape, grid.t(k)), 0.0};
    return WavePacket(grid, std::move(amps), detuning, direction);
}

}  // namespace wqed
