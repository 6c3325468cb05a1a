#include "wqed/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <ostream>
#include <mutex>
#include <thread>

#include "wqed/protocols.hpp"
#include "wqed/scattering.hpp"

namespace wqed {

namespace {

const std::vector<std::string> kScatterMetrics = {"f_re", "f_im", "T", "R", "kappa"};
const std::vector<std::string> kGateMetrics = {"p_success_avg", "p_success_min",
                                               "process_fidelity", "failure_rate"};
const std::vector<std::string> kAxisNames = {"P", "gamma_pulse", "delta", "coupling_boost",
                                             "wfc"};

struct PointParams {
    double purcell;
    double gamma_pulse;
    double delta;
    double boost;
    double wfc;
};

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

void validate_spec(const SweepSpec& spec) {
    std::vector<std::string> seen;
    std::size_t points = 1;
    for (const auto& axis : spec.axes) {
        if (!contains(kAxisNames, axis.name))
            throw ValidationError("run_sweep: unknown axis '" + axis.name + "'");
        if (contains(seen, axis.name))
            throw ValidationError("run_sweep: duplicate axis '" + axis.name + "'");
        if (axis.values.empty())
            throw ValidationError("run_sweep: axis '" + axis.name + "' has no values");
        seen.push_back(axis.name);
        points *= axis.values.size();
        if (points > spec.max_points)
            throw ValidationError("run_sweep: grid exceeds the point cap");
    }
    if (spec.metrics.empty()) throw ValidationError("run_sweep: no metrics requested");
    const auto& allowed =
        spec.protocol == SweepProtocol::scatter ? kScatterMetrics : kGateMetrics;
    for (const auto& m : spec.metrics)
        if (!contains(allowed, m))
            throw ValidationError("run_sweep: unknown metric '" + m +
                                  "' for the selected protocol");
    if (spec.mode == SweepMode::analytic && spec.pulse == PulseFamily::gaussian)
        throw ValidationError("run_sweep: no closed form for gaussian pulses; use numeric mode");
}

PulseShape point_pulse(const SweepSpec& spec, const PointParams& pt, double gamma_eff) {
    switch (spec.pulse) {
        case PulseFamily::half_exp:
            return HalfExponential{pt.gamma_pulse, 0.0};
        case PulseFamily::gaussian:
            return GaussianPulse{1.0 / pt.gamma_pulse, 0.0};
        case PulseFamily::window:
            return plane_wave_window(1.0e4 / gamma_eff, 0.0);
    }
    throw ValidationError("run_sweep: unknown pulse family");
}

// Reflection fidelity at the working point; `em` already carries the boost.
cplx point_f(const SweepSpec& spec, const PointParams& pt, const EmitterParams& em) {
    if (spec.pulse == PulseFamily::half_exp)
        return closed_form_f_half_exponential(pt.gamma_pulse, em);
    return plane_wave_f(em);
}

std::map<std::string, double> eval_analytic(const SweepSpec& spec, const PointParams& pt) {
    const EmitterParams em =
        EmitterParams::from_purcell(pt.purcell, 1.0, pt.delta).boosted(pt.boost);
    const cplx f = point_f(spec, pt, em);
    const auto [t, r] = tr_identities(f, em);
    const double kappa = 1.0 - t - r;

    std::map<std::string, double> out;
    if (spec.protocol == SweepProtocol::scatter) {
        out["f_re"] = f.real();
        out["f_im"] = f.imag();
        out["T"] = t;
        out["R"] = r;
        out["kappa"] = kappa;
        return out;
    }
    if (spec.protocol == SweepProtocol::time_bin) {
        out["p_success_avg"] = r;
        out["p_success_min"] = r;
        out["process_fidelity"] = 1.0;
        out["failure_rate"] = t;
        return out;
    }
    // polarization: success-conditioned map from the analytic mode pair
    // {input envelope, orthogonal remainder of the reflected envelope}.
    const double r_perp2 = std::max(0.0, r - std::norm(f));
    double p0 = 1.0, fail0 = 0.0;
    cplx k{1.0, 0.0};
    if (pt.wfc == 1.0) {
        k = plane_wave_f(em);
        p0 = std::norm(k);
        fail0 = 1.0 - p0;
    } else if (pt.wfc == 2.0) {
        p0 = r;
        fail0 = t;
    }
    double fidelity;
    if (pt.wfc == 2.0) {
        fidelity = 1.0;
    } else {
        fidelity = (std::norm(k + f) + r_perp2) /
                   (2.0 * (std::norm(k) + std::norm(f) + r_perp2));
    }
    out["p_success_avg"] = 0.5 * (p0 + r);
    out["p_success_min"] = std::min(p0, r);
    out["process_fidelity"] = fidelity;
    out["failure_rate"] = 0.5 * (fail0 + t);
    return out;
}

std::map<std::string, double> eval_numeric(const SweepSpec& spec, const PointParams& pt) {
    const EmitterParams em = EmitterParams::from_purcell(pt.purcell, 1.0, pt.delta);
    const double gamma_eff = em.boosted(pt.boost).gamma_total();
    const PulseShape pulse = point_pulse(spec, pt, gamma_eff);

    std::map<std::string, double> out;
    if (spec.protocol == SweepProtocol::scatter) {
        const WavePacket psi =
            make_pulse(pulse, default_grid(pulse, em.gamma_total()), em.detuning);
        const ScatterResult res = scatter(psi, em);
        out["f_re"] = res.f.real();
        out["f_im"] = res.f.imag();
        out["T"] = res.transmittance;
        out["R"] = res.reflectance;
        out["kappa"] = res.loss;
        return out;
    }

    GateResult gate;
    if (spec.protocol == SweepProtocol::time_bin) {
        gate = time_bin_gate(pulse, default_bin_separation(pulse), em, pt.boost);
    } else {
        WaveformCorrector wfc = WaveformCorrector::make_second_scatterer(em);
        if (pt.wfc == 0.0) wfc = WaveformCorrector::none();
        if (pt.wfc == 1.0)
            wfc = WaveformCorrector::make_attenuator(plane_wave_f(em.boosted(pt.boost)));
        gate = polarization_gate(pulse, em, wfc, pt.boost);
    }
    out["p_success_avg"] = gate.report.p_success_avg;
    out["p_success_min"] = gate.report.p_success_min;
    out["process_fidelity"] = gate.report.process_fidelity;
    out["failure_rate"] = gate.report.failure_rate;
    return out;
}

}  // namespace

std::string format_g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

SweepTable run_sweep(const SweepSpec& spec) {
    validate_spec(spec);

    std::size_t n_rows = 1;
    for (const auto& axis : spec.axes) n_rows *= axis.values.size();

    SweepTable table;
    for (const auto& axis : spec.axes) table.columns.push_back(axis.name);
    table.columns.push_back("mode");
    for (const auto& m : spec.metrics) table.columns.push_back(m);
    table.rows.resize(n_rows);
    table.row_modes.assign(n_rows, spec.mode == SweepMode::analytic ? "analytic" : "numeric");

    auto eval_row = [&](std::size_t index) {
        PointParams pt{spec.default_purcell, spec.default_gamma_pulse, spec.default_delta,
                       spec.default_boost, spec.default_wfc};
        std::vector<double> axis_values;
        std::size_t rest = index;
        // lexicographic order: the last axis varies fastest
        std::size_t divisor = n_rows;
        for (const auto& axis : spec.axes) {
            divisor /= axis.values.size();
            const double v = axis.values[(rest / divisor) % axis.values.size()];
            rest %= divisor;
            axis_values.push_back(v);
            if (axis.name == "P") pt.purcell = v;
            else if (axis.name == "gamma_pulse") pt.gamma_pulse = v;
            else if (axis.name == "delta") pt.delta = v;
            else if (axis.name == "coupling_boost") pt.boost = v;
            else pt.wfc = v;
        }
        const auto metrics = spec.mode == SweepMode::analytic ? eval_analytic(spec, pt)
                                                              : eval_numeric(spec, pt);
        std::vector<double>& row = table.rows[index];
        row = std::move(axis_values);
        for (const auto& m : spec.metrics) row.push_back(metrics.at(m));
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (n_rows < 16 || hw == 1) {
        for (std::size_t i = 0; i < n_rows; ++i) eval_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n_rows) return;
                try {
                    eval_row(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < std::min<unsigned>(hw, 8); ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }
    return table;
}

void SweepTable::write_csv(std::ostream& os) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
        os << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::size_t cell = 0;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (columns[c] == "mode") os << row_modes[r];
            else os << format_g12(rows[r][cell++]);
            os << (c + 1 < columns.size() ? "," : "\n");
        }
    }
}

void SweepTable::write_json(std::ostream& os) const {
    // hand-rolled so that infinities serialize as the same literal the CLI
    // accepts ("inf") and floats keep the fixed 12-digit form
    os << "[\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        os << "  {";
        std::size_t cell = 0;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            os << "\"" << columns[c] << "\": ";
            if (columns[c] == "mode") {
                os << "\"" << row_modes[r] << "\"";
            } else {
                const double v = rows[r][cell++];
                if (std::isfinite(v)) os << format_g12(v);
                else os << "\"" << format_g12(v) << "\"";
            }
            if (c + 1 < columns.size()) os << ", ";
        }
        os << (r + 1 < rows.size() ? "},\n" : "}\n");
    }
    os << "]\n";
}

FeasibilityTable feasibility_table() {
    FeasibilityTable table;
    const struct {
        const char* platform;
        double purcell;
        const char* target;
    } platforms[] = {
        {"solid-state emitter in a nanophotonic waveguide", 20.0, "p_success > 0.95"},
        {"atom coupled to a hollow or ultrathin fiber", 1.0, "p_success <= 0.5"},
    };
    for (const auto& p : platforms) {
        for (double boost : {1.0, 2.0}) {
            const double purcell_eff = boost * p.purcell;
            const double ps = std::pow(purcell_eff / (purcell_eff + 1.0), 2.0);
            const bool met = p.purcell > 1.0 ? ps > 0.95 : ps <= 0.5;
            table.rows.push_back({p.platform, p.purcell, boost, ps, p.target, met});
        }
    }
    return table;
}

void FeasibilityTable::write_csv(std::ostream& os) const {
    os << "platform,P,coupling_boost,p_success,target,meets_target\n";
    for (const auto& r : rows) {
        os << "\"" << r.platform << "\"," << format_g12(r.purcell) << ","
           << format_g12(r.coupling_boost) << "," << format_g12(r.p_success) << ",\""
           << r.target << "\"," << (r.meets_target ? "true" : "false") << "\n";
    }
}

void FeasibilityTable::write_json(std::ostream& os) const {
    os << "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        os << "  {\"platform\": \"" << r.platform << "\", \"P\": " << format_g12(r.purcell)
           << ", \"coupling_boost\": " << format_g12(r.coupling_boost)
           << ", \"p_success\": " << format_g12(r.p_success) << ", \"target\": \"" << r.target
           << "\", \"meets_target\": " << (r.meets_target ? "true" : "false") << "}"
           << (i + 1 < rows.size() ? ",\n" : "\n");
    }
    os << "]\n";
}

}  // namespace wqed
