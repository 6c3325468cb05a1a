#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "wqed/sweep.hpp"

using namespace wqed;

namespace {

SweepSpec scatter_spec() {
    SweepSpec spec;
    spec.protocol = SweepProtocol::scatter;
    spec.mode = SweepMode::analytic;
    spec.pulse = PulseFamily::half_exp;
    spec.metrics = {"f_re", "f_im", "T", "R", "kappa"};
    return spec;
}

}  // namespace

TEST_CASE("single narrowband point at P = 20") {
    SweepSpec spec = scatter_spec();
    spec.pulse = PulseFamily::window;
    spec.axes = {{"P", {20.0}}};
    const SweepTable t = run_sweep(spec);
    REQUIRE(t.rows.size() == 1);
    // columns: P, mode, f_re, f_im, T, R, kappa
    CHECK(t.rows[0][1] == doctest::Approx(20.0 / 21.0).epsilon(1e-4));
    CHECK(t.row_modes[0] == "analytic");
}

TEST_CASE("f decreases with pulse bandwidth at P = inf") {
    SweepSpec spec = scatter_spec();
    spec.axes = {{"gamma_pulse", {0.1, 1.0}}};
    const SweepTable t = run_sweep(spec);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][1] == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
    CHECK(t.rows[1][1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("numeric and analytic scatter rows agree for half-exponentials") {
    SweepSpec spec = scatter_spec();
    spec.axes = {{"P", {2.0}}, {"gamma_pulse", {0.5}}, {"delta", {0.8}}};
    const SweepTable analytic = run_sweep(spec);
    spec.mode = SweepMode::numeric;
    const SweepTable numeric = run_sweep(spec);
    for (std::size_t c = 3; c < 8; ++c)
        CHECK(std::abs(analytic.rows[0][c] - numeric.rows[0][c]) < 1e-4);
    CHECK(numeric.row_modes[0] == "numeric");
}

TEST_CASE("gate sweeps report heralded fidelity across the grid") {
    SweepSpec spec;
    spec.protocol = SweepProtocol::time_bin;
    spec.mode = SweepMode::analytic;
    spec.pulse = PulseFamily::window;
    spec.metrics = {"p_success_avg", "process_fidelity", "failure_rate"};
    spec.axes = {{"P", {0.5, 1.0, 20.0}}, {"coupling_boost", {1.0, 2.0}}};
    const SweepTable t = run_sweep(spec);
    REQUIRE(t.rows.size() == 6);
    for (const auto& row : t.rows) {
        CHECK(row[2] < 1.0);                              // p_success_avg
        CHECK(row[3] == doctest::Approx(1.0));            // process_fidelity
    }
    // lexicographic ordering: last axis fastest
    CHECK(t.rows[0][0] == 0.5);
    CHECK(t.rows[0][1] == 1.0);
    CHECK(t.rows[1][0] == 0.5);
    CHECK(t.rows[1][1] == 2.0);
    // p = (bP/(bP+1))^2
    CHECK(t.rows[5][2] == doctest::Approx(std::pow(40.0 / 41.0, 2)).epsilon(1e-12));
}

TEST_CASE("polarization sweep distinguishes corrector variants analytically") {
    SweepSpec spec;
    spec.protocol = SweepProtocol::polarization;
    spec.mode = SweepMode::analytic;
    spec.pulse = PulseFamily::window;
    spec.metrics = {"process_fidelity", "p_success_min"};
    spec.axes = {{"P", {1.0}}, {"wfc", {0.0, 1.0, 2.0}}};
    const SweepTable t = run_sweep(spec);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0][2] == doctest::Approx(0.9).epsilon(1e-12));  // none
    CHECK(t.rows[1][2] == doctest::Approx(1.0).epsilon(1e-12));  // attenuator k = f
    CHECK(t.rows[2][2] == doctest::Approx(1.0).epsilon(1e-12));  // second scatterer
}

TEST_CASE("sweep validation errors") {
    SweepSpec spec = scatter_spec();
    spec.axes = {{"P", {}}};
    CHECK_THROWS_AS(run_sweep(spec), ValidationError);

    spec = scatter_spec();
    spec.axes = {{"voltage", {1.0}}};
    CHECK_THROWS_AS(run_sweep(spec), ValidationError);

    spec = scatter_spec();
    spec.metrics = {"p_success_avg"};
    CHECK_THROWS_AS(run_sweep(spec), ValidationError);

    spec = scatter_spec();
    spec.axes = {{"gamma_pulse", std::vector<double>(2000, 1.0)},
                 {"delta", std::vector<double>(2000, 0.0)}};
    spec.max_points = 1000;
    CHECK_THROWS_AS(run_sweep(spec), ValidationError);
}

TEST_CASE("sweep output is deterministic and byte-identical") {
    SweepSpec spec = scatter_spec();
    spec.axes = {{"P", {0.5, 1.0, 5.0, 20.0, std::numeric_limits<double>::infinity()}},
                 {"gamma_pulse", {0.01, 1.0, 10.0}},
                 {"delta", {-5.0, 0.0, 5.0}}};
    std::ostringstream csv1, csv2, json1;
    run_sweep(spec).write_csv(csv1);
    run_sweep(spec).write_csv(csv2);
    run_sweep(spec).write_json(json1);
    CHECK(csv1.str() == csv2.str());
    CHECK(csv1.str().find("P,gamma_pulse,delta,mode,f_re,f_im,T,R,kappa\n") == 0);
    CHECK(csv1.str().find("inf") != std::string::npos);
    CHECK(json1.str().find("\"P\": \"inf\"") != std::string::npos);
}

TEST_CASE("axis order changes row order but not the row multiset") {
    SweepSpec spec = scatter_spec();
    spec.axes = {{"P", {1.0, 20.0}}, {"gamma_pulse", {0.1, 1.0, 3.0}}};
    SweepSpec swapped = spec;
    std::swap(swapped.axes[0], swapped.axes[1]);

    auto row_set = [](const SweepTable& t, bool p_first) {
        std::vector<std::string> keys;
        for (const auto& row : t.rows) {
            const double p = p_first ? row[0] : row[1];
            const double g = p_first ? row[1] : row[0];
            std::string key = format_g12(p) + "|" + format_g12(g);
            for (std::size_t c = 2; c < row.size(); ++c) key += "|" + format_g12(row[c]);
            keys.push_back(key);
        }
        std::sort(keys.begin(), keys.end());
        return keys;
    };
    CHECK(row_set(run_sweep(spec), true) == row_set(run_sweep(swapped), false));
}

TEST_CASE("feasibility table reports both coupling conventions") {
    const FeasibilityTable t = feasibility_table();
    REQUIRE(t.rows.size() == 4);
    // solid-state platform, P = 20
    CHECK(t.rows[0].p_success == doctest::Approx(std::pow(20.0 / 21.0, 2)).epsilon(1e-12));
    CHECK(t.rows[0].meets_target == false);  // boost 1 misses 0.95
    CHECK(t.rows[1].p_success == doctest::Approx(std::pow(40.0 / 41.0, 2)).epsilon(1e-12));
    CHECK(t.rows[1].meets_target == true);
    // fiber-coupled atoms, P = 1
    CHECK(t.rows[2].p_success == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(t.rows[2].meets_target == true);
    CHECK(t.rows[3].p_success == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
    CHECK(t.rows[3].meets_target == true);

    std::ostringstream csv;
    t.write_csv(csv);
    CHECK(csv.str().find("platform,P,coupling_boost,p_success,target,meets_target") == 0);
}
