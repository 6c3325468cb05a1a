#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "wqed/emitter.hpp"

namespace wqed {

struct SweepAxis {
    std::string name;  // one of: P, gamma_pulse, delta, coupling_boost, wfc
    std::vector<double> values;
};

enum class SweepProtocol { scatter, time_bin, polarization };
enum class SweepMode { analytic, numeric };
enum class PulseFamily { half_exp, gaussian, window };

// Metric vocabulary: f_re, f_im, T, R, kappa, p_success_avg, p_success_min,
// process_fidelity, failure_rate.  Scatter sweeps accept the first five,
// gate sweeps the last four.
struct SweepSpec {
    std::vector<SweepAxis> axes;
    SweepProtocol protocol = SweepProtocol::scatter;
    SweepMode mode = SweepMode::analytic;
    PulseFamily pulse = PulseFamily::half_exp;
    std::vector<std::string> metrics;
    std::size_t max_points = 1000000;

    // Values used when a parameter carries no axis.  wfc codes:
    // 0 = none, 1 = attenuator (k = narrowband closed-form f),
    // 2 = second scatterer.
    double default_purcell = std::numeric_limits<double>::infinity();
    double default_gamma_pulse = 1.0;
    double default_delta = 0.0;
    double default_boost = 1.0;
    double default_wfc = 2.0;
};

struct SweepTable {
    std::vector<std::string> columns;        // axes..., mode, metrics...
    std::vector<std::vector<double>> rows;   // numeric cells (axes + metrics)
    std::vector<std::string> row_modes;      // "analytic" | "numeric" per row

    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;
};

// Evaluates the grid in lexicographic order over the axes (deterministic
// row order and byte-stable output).  Rows are independent and are computed
// concurrently; the merge is by row index.
SweepTable run_sweep(const SweepSpec& spec);

struct FeasibilityRow {
    std::string platform;
    double purcell = 0.0;
    double coupling_boost = 1.0;
    double p_success = 0.0;
    std::string target;  // success-probability range claimed for the platform
    bool meets_target = false;
};

struct FeasibilityTable {
    std::vector<FeasibilityRow> rows;

    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;
};

// Narrowband success probabilities for the two reference platforms (P = 20
// solid-state, P = 1 fiber-coupled atoms) under both coupling conventions,
// with a column stating which convention reproduces the claimed numbers.
FeasibilityTable feasibility_table();

// Fixed 12-significant-digit float formatting used for all file output.
std::string format_g12(double x);

}  // namespace wqed
