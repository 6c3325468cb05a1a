// wqed: command-line front end for the waveguide scattering and heralded
// entangling-gate simulator.  Subcommands: scatter, gate, memory, remote,
// sweep.  Exit codes: 0 success, 2 configuration/validation failure,
// 3 numerical-resolution failure.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wqed/mirror_gate.hpp"
#include "wqed/protocols.hpp"
#include "wqed/scattering.hpp"
#include "wqed/sweep.hpp"

using namespace wqed;

namespace {

double parse_real(const std::string& text, const std::string& field) {
    std::string t = text;
    t.erase(0, t.find_first_not_of(" \t"));
    t.erase(t.find_last_not_of(" \t") + 1);
    if (t == "inf" || t == "+inf" || t == "infinity")
        return std::numeric_limits<double>::infinity();
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &pos);
    } catch (...) {
        throw ValidationError("field '" + field + "': cannot parse number from '" + text + "'");
    }
    if (pos != t.size())
        throw ValidationError("field '" + field + "': trailing characters in '" + text + "'");
    return v;
}

// One flat, strictly validated key = value document per subcommand.  The
// same registry backs the command-line flags, the config-file loader and
// --dump-config, so a dumped config always round-trips.
class FieldSet {
  public:
    explicit FieldSet(CLI::App* sub) : sub_(sub) {}

    void add_real(const std::string& key, double& ref, const std::string& help) {
        sub_->add_option("--" + key, ref, help);
        fields_.push_back({key, Kind::real, &ref});
    }
    void add_text(const std::string& key, std::string& ref, const std::string& help) {
        sub_->add_option("--" + key, ref, help);
        fields_.push_back({key, Kind::text, &ref});
    }
    void add_flag(const std::string& key, bool& ref, const std::string& help) {
        sub_->add_flag("--" + key, ref, help);
        fields_.push_back({key, Kind::flag, &ref});
    }

    void apply_config(const std::string& path) const {
        std::ifstream in(path);
        if (!in) throw ValidationError("config: cannot open '" + path + "'");
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": expected 'key = value'");
            std::string key = line.substr(0, eq);
            std::string value = line.substr(eq + 1);
            trim(key);
            trim(value);
            const Field* field = find(key);
            if (!field)
                throw ValidationError("config line " + std::to_string(line_no) +
                                      ": unknown key '" + key + "'");
            if (sub_->count("--" + key) > 0) continue;  // explicit flags win
            set(*field, value, line_no);
        }
    }

    std::string dump() const {
        std::ostringstream os;
        for (const auto& f : fields_) {
            os << f.key << " = ";
            switch (f.kind) {
                case Kind::real: os << format_g12(*static_cast<double*>(f.ptr)); break;
                case Kind::text: os << *static_cast<std::string*>(f.ptr); break;
                case Kind::flag: os << (*static_cast<bool*>(f.ptr) ? "true" : "false"); break;
            }
            os << "\n";
        }
        return os.str();
    }

  private:
    enum class Kind { real, text, flag };
    struct Field {
        std::string key;
        Kind kind;
        void* ptr;
    };

    static void trim(std::string& s) {
        s.erase(0, s.find_first_not_of(" \t\r"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
    }

    const Field* find(const std::string& key) const {
        for (const auto& f : fields_)
            if (f.key == key) return &f;
        return nullptr;
    }

    void set(const Field& f, const std::string& value, int line_no) const {
        switch (f.kind) {
            case Kind::real:
                *static_cast<double*>(f.ptr) =
                    parse_real(value, "line " + std::to_string(line_no) + " (" + f.key + ")");
                break;
            case Kind::text:
                *static_cast<std::string*>(f.ptr) = value;
                break;
            case Kind::flag:
                if (value == "true" || value == "1") *static_cast<bool*>(f.ptr) = true;
                else if (value == "false" || value == "0") *static_cast<bool*>(f.ptr) = false;
                else
                    throw ValidationError("config line " + std::to_string(line_no) +
                                          ": flag '" + f.key + "' must be true or false");
                break;
        }
    }

    CLI::App* sub_;
    std::vector<Field> fields_;
};

// ---------------------------------------------------------------------------
// shared option blocks

struct CommonOpts {
    std::string config;
    bool dump_config = false;
    std::string out;
    std::string format = "csv";
    bool seedless = false;  // documentation flag: every run is deterministic
};

struct EmitterOpts {
    std::string purcell = "inf";
    double gamma_1d = 1.0;
    double gamma_prime = -1.0;  // < 0: derive from the Purcell factor
    double delta = 0.0;
};

struct PulseOpts {
    std::string pulse = "half-exp";
    double gamma_pulse = 1.0;
    double sigma = 1.0;
    double t0 = 0.0;
    double window_duration = 0.0;  // 0: auto, 1e4 / Gamma
    double dt = 0.0;               // 0: default grid rule
    double t_max = 0.0;            // 0: default grid rule
};

void register_common(FieldSet& fs, CommonOpts& o) {
    fs.add_text("format", o.format, "Output file format: csv or json");
    fs.add_text("out", o.out, "Write machine-readable results to this path");
    fs.add_flag("seedless", o.seedless, "Assert the run uses no randomness (always true)");
}

void register_emitter(FieldSet& fs, EmitterOpts& o) {
    fs.add_text("P", o.purcell, "Purcell factor Gamma_1D/Gamma' (number or 'inf')");
    fs.add_real("gamma-1d", o.gamma_1d, "Waveguide decay rate Gamma_1D (unit scale)");
    fs.add_real("gamma-prime", o.gamma_prime,
                "Out-of-waveguide decay rate; overrides --P when >= 0");
    fs.add_real("delta", o.delta, "Carrier detuning delta = omega_p - omega_0");
}

void register_pulse(FieldSet& fs, PulseOpts& o) {
    fs.add_text("pulse", o.pulse, "Pulse family: half-exp, gaussian or window");
    fs.add_real("gamma-pulse", o.gamma_pulse, "Half-exponential bandwidth gamma");
    fs.add_real("sigma", o.sigma, "Gaussian rms width");
    fs.add_real("t0", o.t0, "Pulse start (half-exp, window) or center (gaussian)");
    fs.add_real("window-duration", o.window_duration,
                "Flat-top duration; 0 selects 1e4/Gamma");
    fs.add_real("dt", o.dt, "Grid step override; 0 selects the default rule");
    fs.add_real("t-max", o.t_max, "Grid end override; 0 selects the default rule");
}

EmitterParams resolve_emitter(const EmitterOpts& o) {
    if (!(o.gamma_1d > 0.0)) throw ValidationError("field '--gamma-1d' must be positive");
    if (o.gamma_prime >= 0.0) return EmitterParams(o.gamma_1d, o.gamma_prime, o.delta);
    const double p = parse_real(o.purcell, "--P");
    if (!(p > 0.0)) throw ValidationError("field '--P' must be positive or 'inf'");
    return EmitterParams::from_purcell(p, o.gamma_1d, o.delta);
}

PulseShape resolve_shape(const PulseOpts& o, double gamma_total) {
    if (o.pulse == "half-exp") {
        if (!(o.gamma_pulse > 0.0))
            throw ValidationError("field '--gamma-pulse' must be positive");
        return HalfExponential{o.gamma_pulse, o.t0};
    }
    if (o.pulse == "gaussian") {
        if (!(o.sigma > 0.0)) throw ValidationError("field '--sigma' must be positive");
        return GaussianPulse{o.sigma, o.t0};
    }
    if (o.pulse == "window") {
        const double flat =
            o.window_duration > 0.0 ? o.window_duration : 1.0e4 / gamma_total;
        return plane_wave_window(flat, o.t0);
    }
    throw ValidationError("field '--pulse' must be half-exp, gaussian or window");
}

TimeGrid resolve_grid(const PulseShape& shape, double gamma_total, const PulseOpts& o) {
    TimeGrid grid = default_grid(shape, gamma_total, o.dt);
    if (o.t_max > 0.0) {
        const auto n = static_cast<std::size_t>(std::ceil((o.t_max - grid.t_start) / grid.dt));
        if (n < 2) throw ValidationError("field '--t-max' leaves fewer than two samples");
        grid = TimeGrid(grid.t_start, grid.dt, n + 1);
    }
    return grid;
}

// ---------------------------------------------------------------------------
// result emission

using KeyValues = std::vector<std::pair<std::string, std::string>>;

void write_table(const CommonOpts& common, const KeyValues& kv) {
    if (common.out.empty()) return;
    std::ofstream out(common.out);
    if (!out) throw ValidationError("cannot open output file '" + common.out + "'");
    if (common.format == "csv") {
        for (std::size_t i = 0; i < kv.size(); ++i)
            out << kv[i].first << (i + 1 < kv.size() ? "," : "\n");
        for (std::size_t i = 0; i < kv.size(); ++i)
            out << kv[i].second << (i + 1 < kv.size() ? "," : "\n");
    } else if (common.format == "json") {
        out << "{\n";
        for (std::size_t i = 0; i < kv.size(); ++i) {
            const std::string& v = kv[i].second;
            const bool quote =
                v.empty() || v.find_first_not_of("0123456789+-.eE") != std::string::npos;
            out << "  \"" << kv[i].first << "\": " << (quote ? "\"" + v + "\"" : v)
                << (i + 1 < kv.size() ? ",\n" : "\n");
        }
        out << "}\n";
    } else {
        throw ValidationError("field '--format' must be csv or json");
    }
}

void dump_envelopes(const std::string& path, const WavePacket& psi, const WavePacket& phi_t,
                    const WavePacket& phi_r) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open envelope dump '" + path + "'");
    out << "tau,psi_re,psi_im,phi_t_re,phi_t_im,phi_r_re,phi_r_im\n";
    for (std::size_t k = 0; k < psi.size(); ++k) {
        out << format_g12(psi.grid.t(k)) << "," << format_g12(psi.amplitudes[k].real()) << ","
            << format_g12(psi.amplitudes[k].imag()) << ","
            << format_g12(phi_t.amplitudes[k].real()) << ","
            << format_g12(phi_t.amplitudes[k].imag()) << ","
            << format_g12(phi_r.amplitudes[k].real()) << ","
            << format_g12(phi_r.amplitudes[k].imag()) << "\n";
    }
}

// ---------------------------------------------------------------------------
// subcommands

struct ScatterCmd {
    CommonOpts common;
    EmitterOpts emitter;
    PulseOpts pulse;
    std::string method = "etd";
    std::string envelope_path;

    int run() const {
        const EmitterParams em = resolve_emitter(emitter);
        const PulseShape shape = resolve_shape(pulse, em.gamma_total());
        const TimeGrid grid = resolve_grid(shape, em.gamma_total(), pulse);
        const WavePacket psi = make_pulse(shape, grid, em.detuning);

        ScatterMethod m = ScatterMethod::etd_recursive;
        if (method == "trapezoid") m = ScatterMethod::trapezoid;
        else if (method != "etd")
            throw ValidationError("field '--method' must be etd or trapezoid");

        const ScatterResult res = scatter(psi, em, m);
        for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";

        std::cout << "emitter        : Gamma_1D = " << format_g12(em.gamma_1d)
                  << ", Gamma' = " << format_g12(em.gamma_prime)
                  << " (P = " << format_g12(em.purcell())
                  << "), delta = " << format_g12(em.detuning) << "\n";
        std::cout << "grid           : dt = " << format_g12(grid.dt) << ", "
                  << grid.n_samples << " samples\n";
        std::cout << "f              = " << format_g12(res.f.real()) << " + "
                  << format_g12(res.f.imag()) << " i\n";
        std::cout << "T              = " << format_g12(res.transmittance) << "\n";
        std::cout << "R              = " << format_g12(res.reflectance) << "\n";
        std::cout << "kappa          = " << format_g12(res.loss) << "\n";
        std::cout << "T+R+kappa-1    = "
                  << format_g12(res.transmittance + res.reflectance + res.loss - 1.0) << "\n";

        KeyValues kv = {{"f_re", format_g12(res.f.real())},
                        {"f_im", format_g12(res.f.imag())},
                        {"T", format_g12(res.transmittance)},
                        {"R", format_g12(res.reflectance)},
                        {"kappa", format_g12(res.loss)}};

        // closed-form oracle deltas where a closed form exists
        if (pulse.pulse == "half-exp" || pulse.pulse == "window") {
            const cplx f_ref = pulse.pulse == "half-exp"
                                   ? closed_form_f_half_exponential(pulse.gamma_pulse, em)
                                   : plane_wave_f(em);
            const auto [t_ref, r_ref] = tr_identities(f_ref, em);
            std::cout << "oracle f       = " << format_g12(f_ref.real()) << " + "
                      << format_g12(f_ref.imag()) << " i   |f - oracle| = "
                      << format_g12(std::abs(res.f - f_ref)) << "\n";
            std::cout << "oracle T, R    = " << format_g12(t_ref) << ", " << format_g12(r_ref)
                      << "   max deviation = "
                      << format_g12(std::max(std::abs(res.transmittance - t_ref),
                                             std::abs(res.reflectance - r_ref)))
                      << "\n";
            kv.emplace_back("oracle_f_re", format_g12(f_ref.real()));
            kv.emplace_back("oracle_f_im", format_g12(f_ref.imag()));
            kv.emplace_back("oracle_delta", format_g12(std::abs(res.f - f_ref)));
        }
        write_table(common, kv);
        if (!envelope_path.empty())
            dump_envelopes(envelope_path, psi, res.transmitted, res.reflected);
        return 0;
    }
};

struct GateCmd {
    CommonOpts common;
    EmitterOpts emitter;
    PulseOpts pulse;
    std::string protocol = "time-bin";
    std::string wfc = "second-scatterer";
    double k_re = std::numeric_limits<double>::quiet_NaN();
    double k_im = 0.0;
    double coupling_boost = 1.0;
    double bin_separation = 0.0;  // 0: smallest separation with orthogonal bins
    bool narrowband = false;

    int run() const {
        const EmitterParams em = resolve_emitter(emitter);
        PulseOpts p = pulse;
        if (narrowband) p.pulse = "window";
        const double gamma_eff = em.boosted(coupling_boost).gamma_total();
        const PulseShape shape = resolve_shape(p, gamma_eff);

        GateResult gate;
        if (protocol == "time-bin") {
            const double sep =
                bin_separation > 0.0 ? bin_separation : default_bin_separation(shape);
            gate = time_bin_gate(shape, sep, em, coupling_boost);
        } else if (protocol == "polarization") {
            WaveformCorrector corrector = WaveformCorrector::make_second_scatterer(em);
            if (wfc == "none") {
                corrector = WaveformCorrector::none();
            } else if (wfc == "attenuator") {
                const cplx k = std::isnan(k_re)
                                   ? plane_wave_f(em.boosted(coupling_boost))
                                   : cplx{k_re, k_im};
                corrector = WaveformCorrector::make_attenuator(k);
            } else if (wfc != "second-scatterer") {
                throw ValidationError(
                    "field '--wfc' must be none, attenuator or second-scatterer");
            }
            gate = polarization_gate(shape, em, corrector, coupling_boost);
        } else {
            throw ValidationError("field '--protocol' must be time-bin or polarization");
        }

        const GateReport& r = gate.report;
        std::cout << "protocol           : " << protocol << "\n";
        std::cout << "herald             : " << gate.map.herald_spec << "\n";
        std::cout << "process_fidelity   = " << format_g12(r.process_fidelity) << "\n";
        std::cout << "average_fidelity   = " << format_g12(r.average_fidelity) << "\n";
        std::cout << "p_success_avg      = " << format_g12(r.p_success_avg) << "\n";
        std::cout << "p_success_min      = " << format_g12(r.p_success_min) << "\n";
        std::cout << "failure_rate       = " << format_g12(r.failure_rate) << "\n";
        std::cout << "loss_rate          = " << format_g12(r.loss_rate) << "\n";
        std::cout << "entangling_witness = " << format_g12(r.entangling_power_witness) << "\n";
        std::cout << "kraus_operators    = " << gate.map.kraus.size() << "\n";

        write_table(common,
                    {{"process_fidelity", format_g12(r.process_fidelity)},
                     {"average_fidelity", format_g12(r.average_fidelity)},
                     {"p_success_avg", format_g12(r.p_success_avg)},
                     {"p_success_min", format_g12(r.p_success_min)},
                     {"failure_rate", format_g12(r.failure_rate)},
                     {"loss_rate", format_g12(r.loss_rate)},
                     {"entangling_witness", format_g12(r.entangling_power_witness)},
                     {"kraus_operators", std::to_string(gate.map.kraus.size())}});
        return 0;
    }
};

Vec2 parse_qubit_state(const std::string& name) {
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i{0.0, 1.0};
    if (name == "0") return Vec2(1.0, 0.0);
    if (name == "1") return Vec2(0.0, 1.0);
    if (name == "+") return Vec2(s, s);
    if (name == "-") return Vec2(s, -s);
    if (name == "+i") return Vec2(s, s * i);
    if (name == "-i") return Vec2(s, -s * i);
    throw ValidationError("field '--state' must be one of 0, 1, +, -, +i, -i");
}

struct MemoryCmd {
    CommonOpts common;
    EmitterOpts emitter;
    PulseOpts pulse;
    std::string protocol = "time-bin";
    std::string state = "+i";
    double coupling_boost = 1.0;

    int run() const {
        const EmitterParams em = resolve_emitter(emitter);
        const double gamma_eff = em.boosted(coupling_boost).gamma_total();
        const PulseShape shape = resolve_shape(pulse, gamma_eff);
        const ProtocolKind kind =
            protocol == "time-bin" ? ProtocolKind::time_bin : ProtocolKind::polarization;
        if (protocol != "time-bin" && protocol != "polarization")
            throw ValidationError("field '--protocol' must be time-bin or polarization");

        const Vec2 psi = parse_qubit_state(state);
        const MemoryResult stored =
            memory_store(psi, shape, em, kind, MeasureBasis::x, coupling_boost);
        const double store_fidelity = stored.fidelity(psi);
        const Vec2 held = stored.as_pure();
        const MemoryResult retrieved =
            memory_retrieve(held, shape, em, kind, MeasureBasis::x, coupling_boost);
        const double round_trip = std::norm(retrieved.as_pure().dot(psi));

        std::cout << "stored state       : |" << state << ">\n";
        std::cout << "store fidelity     = " << format_g12(store_fidelity) << "\n";
        std::cout << "store p_success    = " << format_g12(stored.p_success) << "\n";
        std::cout << "retrieve fidelity  = " << format_g12(round_trip) << "\n";
        std::cout << "retrieve p_success = " << format_g12(retrieved.p_success) << "\n";
        std::cout << "round-trip p       = "
                  << format_g12(stored.p_success * retrieved.p_success) << "\n";

        write_table(common, {{"store_fidelity", format_g12(store_fidelity)},
                             {"store_p_success", format_g12(stored.p_success)},
                             {"retrieve_fidelity", format_g12(round_trip)},
                             {"retrieve_p_success", format_g12(retrieved.p_success)}});
        return 0;
    }
};

struct RemoteCmd {
    CommonOpts common;
    PulseOpts pulse;
    std::string purcell_a = "1";
    std::string purcell_b = "20";
    double delta_a = 0.0;
    double delta_b = 0.0;
    double gamma_1d = 1.0;
    std::string protocol = "time-bin";
    std::string basis = "x";
    double coupling_boost = 1.0;

    int run() const {
        EmitterOpts ea{purcell_a, gamma_1d, -1.0, delta_a};
        EmitterOpts eb{purcell_b, gamma_1d, -1.0, delta_b};
        const EmitterParams site_a = resolve_emitter(ea);
        const EmitterParams site_b = resolve_emitter(eb);
        const double gamma_eff = std::max(site_a.boosted(coupling_boost).gamma_total(),
                                          site_b.boosted(coupling_boost).gamma_total());
        const PulseShape shape = resolve_shape(pulse, gamma_eff);
        const ProtocolKind kind =
            protocol == "time-bin" ? ProtocolKind::time_bin : ProtocolKind::polarization;
        if (protocol != "time-bin" && protocol != "polarization")
            throw ValidationError("field '--protocol' must be time-bin or polarization");
        MeasureBasis mb = MeasureBasis::x;
        if (basis == "y") mb = MeasureBasis::y;
        else if (basis == "z") mb = MeasureBasis::z;
        else if (basis != "x")
            throw ValidationError("field '--basis' must be x, y or z");

        const RemoteEntangleResult r =
            remote_entangle(site_a, site_b, shape, kind, mb, coupling_boost);
        std::cout << "concurrence (min)  = " << format_g12(r.concurrence_min) << "\n";
        std::cout << "p_success          = " << format_g12(r.p_success) << "\n";
        std::cout << "p_site_a * p_site_b= " << format_g12(r.p_site_a * r.p_site_b) << "\n";
        for (std::size_t m = 0; m < r.outcome_states.size(); ++m) {
            std::cout << "outcome " << m << " (p = " << format_g12(r.outcome_probabilities[m])
                      << "): [";
            for (int j = 0; j < 4; ++j)
                std::cout << format_g12(r.outcome_states[m](j).real()) << "+"
                          << format_g12(r.outcome_states[m](j).imag()) << "i"
                          << (j < 3 ? ", " : "]\n");
        }
        write_table(common, {{"concurrence_min", format_g12(r.concurrence_min)},
                             {"p_success", format_g12(r.p_success)},
                             {"p_site_a", format_g12(r.p_site_a)},
                             {"p_site_b", format_g12(r.p_site_b)}});
        return 0;
    }
};

struct SweepCmd {
    CommonOpts common;
    std::string spec_path;
    std::string preset;

    static SweepSpec parse_spec_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("sweep: cannot open spec file '" + path + "'");
        SweepSpec spec;
        std::string line;
        int line_no = 0;
        auto fail = [&](const std::string& msg) {
            throw ValidationError("spec line " + std::to_string(line_no) + ": " + msg);
        };
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail("expected 'key = value'");
            std::string key = line.substr(0, eq);
            std::string value = line.substr(eq + 1);
            auto trim = [](std::string& s) {
                s.erase(0, s.find_first_not_of(" \t\r"));
                s.erase(s.find_last_not_of(" \t\r") + 1);
            };
            trim(key);
            trim(value);
            auto split_list = [&](const std::string& text) {
                std::vector<std::string> items;
                std::stringstream ss(text);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    trim(item);
                    if (!item.empty()) items.push_back(item);
                }
                return items;
            };
            if (key == "protocol") {
                if (value == "scatter") spec.protocol = SweepProtocol::scatter;
                else if (value == "time-bin") spec.protocol = SweepProtocol::time_bin;
                else if (value == "polarization") spec.protocol = SweepProtocol::polarization;
                else fail("field 'protocol': unknown value '" + value + "'");
            } else if (key == "mode") {
                if (value == "analytic") spec.mode = SweepMode::analytic;
                else if (value == "numeric") spec.mode = SweepMode::numeric;
                else fail("field 'mode': unknown value '" + value + "'");
            } else if (key == "pulse") {
                if (value == "half-exp") spec.pulse = PulseFamily::half_exp;
                else if (value == "gaussian") spec.pulse = PulseFamily::gaussian;
                else if (value == "window") spec.pulse = PulseFamily::window;
                else fail("field 'pulse': unknown value '" + value + "'");
            } else if (key == "metrics") {
                spec.metrics = split_list(value);
            } else if (key == "max-points") {
                spec.max_points = static_cast<std::size_t>(parse_real(value, key));
            } else if (key.rfind("axis.", 0) == 0) {
                SweepAxis axis;
                axis.name = key.substr(5);
                for (const auto& item : split_list(value))
                    axis.values.push_back(parse_real(item, key));
                spec.axes.push_back(std::move(axis));
            } else if (key.rfind("default.", 0) == 0) {
                const std::string name = key.substr(8);
                const double v = parse_real(value, key);
                if (name == "P") spec.default_purcell = v;
                else if (name == "gamma_pulse") spec.default_gamma_pulse = v;
                else if (name == "delta") spec.default_delta = v;
                else if (name == "coupling_boost") spec.default_boost = v;
                else if (name == "wfc") spec.default_wfc = v;
                else fail("field '" + key + "': unknown default");
            } else {
                fail("unknown key '" + key + "'");
            }
        }
        return spec;
    }

    int run() const {
        std::ofstream file;
        if (!common.out.empty()) {
            file.open(common.out);
            if (!file) throw ValidationError("cannot open output file '" + common.out + "'");
        }
        std::ostream& sink = common.out.empty() ? std::cout : file;
        if (common.format != "csv" && common.format != "json")
            throw ValidationError("field '--format' must be csv or json");

        if (preset == "feasibility") {
            const FeasibilityTable table = feasibility_table();
            if (common.format == "json") table.write_json(sink);
            else table.write_csv(sink);
        } else {
            SweepSpec spec;
            if (!preset.empty()) {
                if (preset != "f-vs-gamma")
                    throw ValidationError(
                        "field '--preset' must be feasibility or f-vs-gamma");
                spec.protocol = SweepProtocol::scatter;
                spec.mode = SweepMode::analytic;
                spec.pulse = PulseFamily::half_exp;
                spec.metrics = {"f_re", "f_im", "T", "R", "kappa"};
                SweepAxis gamma{"gamma_pulse", {}};
                for (int i = 0; i <= 30; ++i)
                    gamma.values.push_back(0.01 * std::pow(10.0, i / 10.0));
                spec.axes = {gamma};
            } else if (!spec_path.empty()) {
                spec = parse_spec_file(spec_path);
            } else {
                throw ValidationError("sweep: provide --spec FILE or --preset NAME");
            }
            // rows are evaluated up front (bounded by the point cap); the
            // writers stream row by row into the sink
            const SweepTable table = run_sweep(spec);
            if (common.format == "json") table.write_json(sink);
            else table.write_csv(sink);
        }
        if (!common.out.empty()) std::cout << "wrote " << common.out << "\n";
        return 0;
    }
};

template <typename Cmd>
int dispatch(Cmd& cmd, const FieldSet& fs, const CommonOpts& common, CLI::App* sub) {
    if (!common.config.empty()) fs.apply_config(common.config);
    if (common.dump_config) {
        std::cout << "# wqed " << sub->get_name() << " configuration (canonical form)\n"
                  << fs.dump();
        return 0;
    }
    return cmd.run();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"waveguide-QED single-photon scattering and heralded-gate simulator"};
    app.require_subcommand(1);

    ScatterCmd scatter_cmd;
    GateCmd gate_cmd;
    MemoryCmd memory_cmd;
    RemoteCmd remote_cmd;
    SweepCmd sweep_cmd;

    auto* scatter_sub =
        app.add_subcommand("scatter", "Scatter one pulse off one emitter and report f, T, R, kappa");
    FieldSet scatter_fields(scatter_sub);
    register_emitter(scatter_fields, scatter_cmd.emitter);
    register_pulse(scatter_fields, scatter_cmd.pulse);
    scatter_fields.add_text("method", scatter_cmd.method, "Integrator: etd or trapezoid");
    scatter_fields.add_text("dump-envelopes", scatter_cmd.envelope_path,
                            "Write tau, Re A, Im A per packet to this CSV path");
    register_common(scatter_fields, scatter_cmd.common);
    scatter_sub->add_option("--config", scatter_cmd.common.config, "Flat key = value config file");
    scatter_sub->add_flag("--dump-config", scatter_cmd.common.dump_config,
                          "Print the effective configuration and exit");

    auto* gate_sub = app.add_subcommand("gate", "Evaluate an entangling gate protocol");
    FieldSet gate_fields(gate_sub);
    register_emitter(gate_fields, gate_cmd.emitter);
    register_pulse(gate_fields, gate_cmd.pulse);
    gate_fields.add_text("protocol", gate_cmd.protocol, "time-bin or polarization");
    gate_fields.add_text("wfc", gate_cmd.wfc,
                         "Waveform corrector: none, attenuator or second-scatterer");
    gate_fields.add_real("k-re", gate_cmd.k_re, "Attenuator transmission (real part)");
    gate_fields.add_real("k-im", gate_cmd.k_im, "Attenuator transmission (imaginary part)");
    gate_fields.add_real("coupling-boost", gate_cmd.coupling_boost,
                         "Gamma_1D multiplier inside scattering blocks (1 or 2)");
    gate_fields.add_real("bin-separation", gate_cmd.bin_separation,
                         "Time-bin separation; 0 selects the smallest orthogonal spacing");
    gate_fields.add_flag("narrowband", gate_cmd.narrowband,
                         "Use the 1e4/Gamma flat-top window pulse");
    register_common(gate_fields, gate_cmd.common);
    gate_sub->add_option("--config", gate_cmd.common.config, "Flat key = value config file");
    gate_sub->add_flag("--dump-config", gate_cmd.common.dump_config,
                       "Print the effective configuration and exit");

    auto* memory_sub =
        app.add_subcommand("memory", "Store and retrieve a photonic qubit in the emitter");
    FieldSet memory_fields(memory_sub);
    register_emitter(memory_fields, memory_cmd.emitter);
    register_pulse(memory_fields, memory_cmd.pulse);
    memory_fields.add_text("protocol", memory_cmd.protocol, "time-bin or polarization");
    memory_fields.add_text("state", memory_cmd.state, "Input qubit: 0, 1, +, -, +i or -i");
    memory_fields.add_real("coupling-boost", memory_cmd.coupling_boost,
                           "Gamma_1D multiplier inside scattering blocks");
    register_common(memory_fields, memory_cmd.common);
    memory_sub->add_option("--config", memory_cmd.common.config, "Flat key = value config file");
    memory_sub->add_flag("--dump-config", memory_cmd.common.dump_config,
                         "Print the effective configuration and exit");

    auto* remote_sub =
        app.add_subcommand("remote", "Entangle two distant emitters with one photon");
    FieldSet remote_fields(remote_sub);
    remote_fields.add_text("P-a", remote_cmd.purcell_a, "Purcell factor at site A");
    remote_fields.add_text("P-b", remote_cmd.purcell_b, "Purcell factor at site B");
    remote_fields.add_real("delta-a", remote_cmd.delta_a, "Detuning at site A");
    remote_fields.add_real("delta-b", remote_cmd.delta_b, "Detuning at site B");
    remote_fields.add_real("gamma-1d", remote_cmd.gamma_1d, "Waveguide decay rate (both sites)");
    remote_fields.add_text("protocol", remote_cmd.protocol, "time-bin or polarization");
    remote_fields.add_text("basis", remote_cmd.basis,
                           "Photon measurement basis: x (conjugate), y or z");
    remote_fields.add_real("coupling-boost", remote_cmd.coupling_boost,
                           "Gamma_1D multiplier inside scattering blocks");
    register_pulse(remote_fields, remote_cmd.pulse);
    register_common(remote_fields, remote_cmd.common);
    remote_sub->add_option("--config", remote_cmd.common.config, "Flat key = value config file");
    remote_sub->add_flag("--dump-config", remote_cmd.common.dump_config,
                         "Print the effective configuration and exit");

    auto* sweep_sub = app.add_subcommand("sweep", "Run a parameter sweep to CSV or JSON");
    FieldSet sweep_fields(sweep_sub);
    sweep_fields.add_text("spec", sweep_cmd.spec_path, "Sweep specification file");
    sweep_fields.add_text("preset", sweep_cmd.preset, "Preset: feasibility or f-vs-gamma");
    register_common(sweep_fields, sweep_cmd.common);
    sweep_sub->add_option("--config", sweep_cmd.common.config, "Flat key = value config file");
    sweep_sub->add_flag("--dump-config", sweep_cmd.common.dump_config,
                        "Print the effective configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (scatter_sub->parsed()) return dispatch(scatter_cmd, scatter_fields,
                                                   scatter_cmd.common, scatter_sub);
        if (gate_sub->parsed()) return dispatch(gate_cmd, gate_fields, gate_cmd.common, gate_sub);
        if (memory_sub->parsed())
            return dispatch(memory_cmd, memory_fields, memory_cmd.common, memory_sub);
        if (remote_sub->parsed())
            return dispatch(remote_cmd, remote_fields, remote_cmd.common, remote_sub);
        if (sweep_sub->parsed())
            return dispatch(sweep_cmd, sweep_fields, sweep_cmd.common, sweep_sub);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResolutionError& e) {
        std::cerr << "error (numerical resolution): " << e.what() << "\n";
        return 3;
    } catch (const GridMismatchError& e) {
        std::cerr << "error (grid mismatch): " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
