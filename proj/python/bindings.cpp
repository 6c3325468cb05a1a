#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wqed/mirror_gate.hpp"
#include "wqed/protocols.hpp"
#include "wqed/scattering.hpp"
#include "wqed/sweep.hpp"

namespace py = pybind11;
using namespace wqed;

namespace {

py::array_t<cplx> amplitudes_array(const WavePacket& p) {
    py::array_t<cplx> out(static_cast<py::ssize_t>(p.size()));
    std::copy(p.amplitudes.begin(), p.amplitudes.end(), out.mutable_data());
    return out;
}

py::array_t<double> times_array(const WavePacket& p) {
    py::array_t<double> out(static_cast<py::ssize_t>(p.size()));
    for (std::size_t k = 0; k < p.size(); ++k) out.mutable_data()[k] = p.grid.t(k);
    return out;
}

WavePacket packet_from_array(const TimeGrid& grid, py::array_t<cplx> amps, double detuning,
                             Direction direction) {
    const auto buf = amps.request();
    if (buf.ndim != 1 || static_cast<std::size_t>(buf.shape[0]) != grid.n_samples)
        throw ValidationError("WavePacket: amplitude array must be 1-d with n_samples entries");
    const auto* data = static_cast<const cplx*>(buf.ptr);
    return WavePacket(grid, std::vector<cplx>(data, data + grid.n_samples), detuning, direction);
}

std::string table_csv(const SweepTable& t) {
    std::ostringstream os;
    t.write_csv(os);
    return os.str();
}

std::string table_json(const SweepTable& t) {
    std::ostringstream os;
    t.write_json(os);
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Single-photon scattering off waveguide-coupled emitters and the "
              "heralded atom-photon entangling gates built on it";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ResolutionError>(m, "ResolutionError", PyExc_RuntimeError);
    py::register_exception<GridMismatchError>(m, "GridMismatchError", PyExc_RuntimeError);
    py::register_exception<NonlinearityError>(m, "NonlinearityError", PyExc_RuntimeError);

    py::enum_<Direction>(m, "Direction")
        .value("rightward", Direction::rightward)
        .value("leftward", Direction::leftward);

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, double, std::size_t>(), py::arg("t_start"), py::arg("dt"),
             py::arg("n_samples"))
        .def_readonly("t_start", &TimeGrid::t_start)
        .def_readonly("dt", &TimeGrid::dt)
        .def_readonly("n_samples", &TimeGrid::n_samples)
        .def("t_end", &TimeGrid::t_end);

    py::class_<WavePacket>(m, "WavePacket")
        .def(py::init(&packet_from_array), py::arg("grid"), py::arg("amplitudes"),
             py::arg("carrier_detuning") = 0.0, py::arg("direction") = Direction::rightward)
        .def_readonly("grid", &WavePacket::grid)
        .def_readonly("carrier_detuning", &WavePacket::carrier_detuning)
        .def_readonly("direction", &WavePacket::direction)
        .def_property_readonly("amplitudes", &amplitudes_array)
        .def_property_readonly("times", &times_array)
        .def("norm2", &WavePacket::norm2)
        .def("__len__", [](const WavePacket& p) { return p.size(); });

    py::class_<HalfExponential>(m, "HalfExponential")
        .def(py::init<double, double>(), py::arg("rate"), py::arg("start") = 0.0)
        .def_readonly("rate", &HalfExponential::rate)
        .def_readonly("start", &HalfExponential::start);
    py::class_<GaussianPulse>(m, "GaussianPulse")
        .def(py::init<double, double>(), py::arg("sigma"), py::arg("center"))
        .def_readonly("sigma", &GaussianPulse::sigma)
        .def_readonly("center", &GaussianPulse::center);
    py::class_<PlaneWaveWindow>(m, "PlaneWaveWindow")
        .def(py::init<double, double, double>(), py::arg("flat_duration"),
             py::arg("edge_duration"), py::arg("start") = 0.0)
        .def_readonly("flat_duration", &PlaneWaveWindow::flat_duration)
        .def_readonly("edge_duration", &PlaneWaveWindow::edge_duration)
        .def_readonly("start", &PlaneWaveWindow::start);
    m.def("plane_wave_window", &plane_wave_window, py::arg("flat_duration"),
          py::arg("start") = 0.0);

    m.def("shape_amplitude", &shape_amplitude);
    m.def("shape_bandwidth", &shape_bandwidth);
    m.def("shape_support", &shape_support);
    m.def("default_bin_separation", &default_bin_separation);
    m.def("default_grid", &default_grid, py::arg("shape"), py::arg("gamma_total"),
          py::arg("dt_override") = 0.0);
    m.def("make_pulse", &make_pulse, py::arg("shape"), py::arg("grid"),
          py::arg("detuning") = 0.0, py::arg("direction") = Direction::rightward);
    m.def("inner_product", &inner_product);
    m.def("scale_shift", &scale_shift, py::arg("packet"), py::arg("factor"), py::arg("delay"));

    py::class_<EmitterParams>(m, "EmitterParams")
        .def(py::init<double, double, double>(), py::arg("gamma_1d"), py::arg("gamma_prime"),
             py::arg("detuning") = 0.0)
        .def_static("from_purcell", &EmitterParams::from_purcell, py::arg("purcell"),
                    py::arg("gamma_1d") = 1.0, py::arg("detuning") = 0.0)
        .def_readonly("gamma_1d", &EmitterParams::gamma_1d)
        .def_readonly("gamma_prime", &EmitterParams::gamma_prime)
        .def_readonly("detuning", &EmitterParams::detuning)
        .def("gamma_total", &EmitterParams::gamma_total)
        .def("purcell", &EmitterParams::purcell)
        .def("boosted", &EmitterParams::boosted);

    m.def("closed_form_f_half_exponential", &closed_form_f_half_exponential,
          py::arg("gamma_pulse"), py::arg("emitter"));
    m.def("plane_wave_f", &plane_wave_f);
    m.def(
        "tr_identities",
        [](cplx f, const EmitterParams& em) {
            const auto r = tr_identities(f, em);
            return py::make_tuple(r.transmittance, r.reflectance);
        },
        py::arg("f"), py::arg("emitter"));

    py::enum_<ScatterMethod>(m, "ScatterMethod")
        .value("etd_recursive", ScatterMethod::etd_recursive)
        .value("trapezoid", ScatterMethod::trapezoid);

    py::class_<ScatterResult>(m, "ScatterResult")
        .def_readonly("transmitted", &ScatterResult::transmitted)
        .def_readonly("reflected", &ScatterResult::reflected)
        .def_readonly("f", &ScatterResult::f)
        .def_readonly("transmittance", &ScatterResult::transmittance)
        .def_readonly("reflectance", &ScatterResult::reflectance)
        .def_readonly("loss", &ScatterResult::loss)
        .def_readonly("warnings", &ScatterResult::warnings);
    m.def("scatter", &scatter, py::arg("psi"), py::arg("emitter"),
          py::arg("method") = ScatterMethod::etd_recursive);

    py::class_<MirrorGateResult>(m, "MirrorGateResult")
        .def_readonly("fidelity", &MirrorGateResult::fidelity)
        .def_readonly("loss", &MirrorGateResult::loss);
    m.def("mirror_gate_three_level", &mirror_gate_three_level, py::arg("psi"),
          py::arg("emitter"), py::arg("atom_state"), py::arg("photon_qubit"));

    m.def("concurrence", &concurrence);
    m.def("time_bin_target", &time_bin_target);
    m.def("controlled_z_target", &controlled_z_target);
    m.def("entangling_witness", &entangling_witness);
    m.def(
        "process_fidelity",
        [](const std::vector<Mat4>& kraus, const Mat4& target) {
            ConditionalMap map;
            map.kraus = kraus;
            return process_fidelity(map, target);
        },
        py::arg("kraus"), py::arg("target"));

    py::class_<ConditionalMap>(m, "ConditionalMap")
        .def_readonly("kraus", &ConditionalMap::kraus)
        .def_readonly("p_success_avg", &ConditionalMap::p_success_avg)
        .def_readonly("p_success_min", &ConditionalMap::p_success_min)
        .def_readonly("herald_spec", &ConditionalMap::herald_spec)
        .def("completeness_excess", &ConditionalMap::completeness_excess);

    py::class_<GateReport>(m, "GateReport")
        .def_readonly("process_fidelity", &GateReport::process_fidelity)
        .def_readonly("average_fidelity", &GateReport::average_fidelity)
        .def_readonly("p_success_avg", &GateReport::p_success_avg)
        .def_readonly("p_success_min", &GateReport::p_success_min)
        .def_readonly("failure_rate", &GateReport::failure_rate)
        .def_readonly("loss_rate", &GateReport::loss_rate)
        .def_readonly("entangling_power_witness", &GateReport::entangling_power_witness);

    py::class_<GateResult>(m, "GateResult")
        .def_readonly("map", &GateResult::map)
        .def_readonly("report", &GateResult::report)
        .def_readonly("modes", &GateResult::modes);

    py::class_<WaveformCorrector>(m, "WaveformCorrector")
        .def_static("none", &WaveformCorrector::none)
        .def_static("attenuator", &WaveformCorrector::make_attenuator, py::arg("k"))
        .def_static("second_scatterer", &WaveformCorrector::make_second_scatterer,
                    py::arg("emitter"));

    m.def("time_bin_gate", &time_bin_gate, py::arg("pulse"), py::arg("bin_separation"),
          py::arg("emitter"), py::arg("coupling_boost") = 1.0);
    m.def("polarization_gate", &polarization_gate, py::arg("pulse"), py::arg("emitter"),
          py::arg("wfc"), py::arg("coupling_boost") = 1.0);
    m.def("wfc_second_scatterer", &wfc_second_scatterer, py::arg("psi"), py::arg("emitter"),
          py::arg("coupling_boost") = 1.0);

    py::enum_<ProtocolKind>(m, "ProtocolKind")
        .value("time_bin", ProtocolKind::time_bin)
        .value("polarization", ProtocolKind::polarization);
    py::enum_<MeasureBasis>(m, "MeasureBasis")
        .value("x", MeasureBasis::x)
        .value("y", MeasureBasis::y)
        .value("z", MeasureBasis::z);

    py::class_<MemoryOutcome>(m, "MemoryOutcome")
        .def_readonly("outcome", &MemoryOutcome::outcome)
        .def_readonly("probability", &MemoryOutcome::probability)
        .def_readonly("rho", &MemoryOutcome::rho)
        .def_readonly("correction", &MemoryOutcome::correction);
    py::class_<MemoryResult>(m, "MemoryResult")
        .def_readonly("outcomes", &MemoryResult::outcomes)
        .def_readonly("p_success", &MemoryResult::p_success)
        .def("fidelity", &MemoryResult::fidelity)
        .def("as_pure", &MemoryResult::as_pure, py::arg("tol") = 1e-6);

    m.def("memory_store", &memory_store, py::arg("photon_state"), py::arg("pulse"),
          py::arg("emitter"), py::arg("protocol"), py::arg("photon_basis") = MeasureBasis::x,
          py::arg("coupling_boost") = 1.0);
    m.def("memory_retrieve", &memory_retrieve, py::arg("emitter_state"), py::arg("pulse"),
          py::arg("emitter"), py::arg("protocol"), py::arg("emitter_basis") = MeasureBasis::x,
          py::arg("coupling_boost") = 1.0);

    py::class_<RemoteEntangleResult>(m, "RemoteEntangleResult")
        .def_readonly("outcome_states", &RemoteEntangleResult::outcome_states)
        .def_readonly("outcome_probabilities", &RemoteEntangleResult::outcome_probabilities)
        .def_readonly("concurrence_min", &RemoteEntangleResult::concurrence_min)
        .def_readonly("p_success", &RemoteEntangleResult::p_success)
        .def_readonly("p_site_a", &RemoteEntangleResult::p_site_a)
        .def_readonly("p_site_b", &RemoteEntangleResult::p_site_b);
    m.def("remote_entangle", &remote_entangle, py::arg("site_a"), py::arg("site_b"),
          py::arg("pulse"), py::arg("protocol"), py::arg("photon_basis") = MeasureBasis::x,
          py::arg("coupling_boost") = 1.0);

    py::enum_<SweepProtocol>(m, "SweepProtocol")
        .value("scatter", SweepProtocol::scatter)
        .value("time_bin", SweepProtocol::time_bin)
        .value("polarization", SweepProtocol::polarization);
    py::enum_<SweepMode>(m, "SweepMode")
        .value("analytic", SweepMode::analytic)
        .value("numeric", SweepMode::numeric);
    py::enum_<PulseFamily>(m, "PulseFamily")
        .value("half_exp", PulseFamily::half_exp)
        .value("gaussian", PulseFamily::gaussian)
        .value("window", PulseFamily::window);

    py::class_<SweepAxis>(m, "SweepAxis")
        .def(py::init<std::string, std::vector<double>>(), py::arg("name"), py::arg("values"))
        .def_readwrite("name", &SweepAxis::name)
        .def_readwrite("values", &SweepAxis::values);

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("axes", &SweepSpec::axes)
        .def_readwrite("protocol", &SweepSpec::protocol)
        .def_readwrite("mode", &SweepSpec::mode)
        .def_readwrite("pulse", &SweepSpec::pulse)
        .def_readwrite("metrics", &SweepSpec::metrics)
        .def_readwrite("max_points", &SweepSpec::max_points)
        .def_readwrite("default_purcell", &SweepSpec::default_purcell)
        .def_readwrite("default_gamma_pulse", &SweepSpec::default_gamma_pulse)
        .def_readwrite("default_delta", &SweepSpec::default_delta)
        .def_readwrite("default_boost", &SweepSpec::default_boost)
        .def_readwrite("default_wfc", &SweepSpec::default_wfc);

    py::class_<SweepTable>(m, "SweepTable")
        .def_readonly("columns", &SweepTable::columns)
        .def_readonly("rows", &SweepTable::rows)
        .def_readonly("row_modes", &SweepTable::row_modes)
        .def("to_csv", &table_csv)
        .def("to_json", &table_json);
    m.def("run_sweep", &run_sweep);

    m.def("feasibility_table", [] {
        py::list rows;
        for (const auto& r : feasibility_table().rows) {
            py::dict d;
            d["platform"] = r.platform;
            d["P"] = r.purcell;
            d["coupling_boost"] = r.coupling_boost;
            d["p_success"] = r.p_success;
            d["target"] = r.target;
            d["meets_target"] = r.meets_target;
            rows.append(d);
        }
        return rows;
    });

    m.attr("__version__") = "0.1.0";
}
