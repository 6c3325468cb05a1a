#pragma once

#include <cstddef>

#include "wqed/errors.hpp"

namespace wqed {

// Uniform time grid t_k = t_start + k*dt, k = 0 .. n_samples-1.
// All times in this library are expressed in units of 1/Gamma_1D.
struct TimeGrid {
    double t_start = 0.0;
    double dt = 1.0;
    std::size_t n_samples = 2;

    TimeGrid() = default;
    TimeGrid(double start, double step, std::size_t n)
        : t_start(start), dt(step), n_samples(n) {
        if (!(dt > 0.0)) throw ValidationError("TimeGrid: dt must be positive");
        if (n_samples < 2) throw ValidationError("TimeGrid: need at least two samples");
    }

    double t(std::size_t k) const { return t_start + static_cast<double>(k) * dt; }
    double t_end() const { return t(n_samples - 1); }
    double span() const { return t_end() - t_start; }

    bool operator==(const TimeGrid&) const = default;
};

}  // namespace wqed
