#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wqed/joint_state.hpp"
#include "wqed/pulse_shapes.hpp"
#include "wqed/qubit_ops.hpp"

using namespace wqed;

namespace {

WavePacket narrowband_packet(const EmitterParams& em, double boost = 1.0) {
    const double gamma_eff = em.boosted(boost).gamma_total();
    const PulseShape shape = plane_wave_window(1e4 / gamma_eff);
    return make_pulse(shape, default_grid(shape, gamma_eff), em.detuning);
}

WavePacket half_exp_packet(const EmitterParams& em, double gamma_pulse, double boost = 1.0) {
    const double gamma_eff = em.boosted(boost).gamma_total();
    const PulseShape shape = HalfExponential{gamma_pulse, 0.0};
    return make_pulse(shape, default_grid(shape, gamma_eff), em.detuning);
}

}  // namespace

TEST_CASE("cross-polarized branch passes the scatterer unchanged") {
    const EmitterParams em = EmitterParams::from_purcell(2.0);
    const WavePacket psi = half_exp_packet(em, 1.0);
    JointState st;
    st.add_amplitude({EmitterLevel::g_minus, Polarization::sigma_plus, Port::waveguide}, psi);
    const JointState out = scatter_four_level(st, em);
    const WavePacket* p =
        out.find({EmitterLevel::g_minus, Polarization::sigma_plus, Port::waveguide});
    REQUIRE(p != nullptr);
    CHECK((*p - psi).norm() == doctest::Approx(0.0));
    CHECK(out.loss_weight == doctest::Approx(0.0));
}

TEST_CASE("co-polarized branch picks up the full pi-phase reflection at P = inf") {
    const EmitterParams em(1.0, 0.0);
    const WavePacket psi = narrowband_packet(em);
    JointState st;
    st.add_amplitude({EmitterLevel::g_plus, Polarization::sigma_plus, Port::waveguide}, psi);
    const JointState out = scatter_four_level(st, em);
    const WavePacket* p =
        out.find({EmitterLevel::g_plus, Polarization::sigma_plus, Port::waveguide});
    REQUIRE(p != nullptr);
    CHECK((*p + psi).norm() < 2e-2);  // combined output -> -psi
    CHECK(std::abs(inner_product(psi, *p) + 1.0) < 1e-3);
    CHECK(out.total_probability() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("scattering acts branch-linearly") {
    const EmitterParams em = EmitterParams::from_purcell(3.0);
    const WavePacket psi = half_exp_packet(em, 0.7);
    const cplx a{0.6, 0.0}, b{0.8, 0.0};
    JointState st;
    st.add_amplitude({EmitterLevel::g_plus, Polarization::sigma_plus, Port::waveguide}, a * psi);
    st.add_amplitude({EmitterLevel::g_minus, Polarization::sigma_plus, Port::waveguide}, b * psi);
    const JointState out = scatter_four_level(st, em);
    // only the co-polarized g_+ branch changed
    const WavePacket* gp =
        out.find({EmitterLevel::g_plus, Polarization::sigma_plus, Port::waveguide});
    const WavePacket* gm =
        out.find({EmitterLevel::g_minus, Polarization::sigma_plus, Port::waveguide});
    REQUIRE(gp);
    REQUIRE(gm);
    CHECK((*gm - b * psi).norm() == doctest::Approx(0.0));
    CHECK((*gp - a * psi).norm() > 0.1);
    CHECK(out.total_probability() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("z-block success state carries -Z_a with the reflected envelope") {
    const EmitterParams em(1.0, 0.0);
    const WavePacket psi = narrowband_packet(em);
    const Vec2 qubit = Vec2(0.6, 0.8);
    const HeraldOutcome out = z_block(make_h_input(qubit, psi), em);

    CHECK(out.p_success == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(out.failure_weight < 1e-3);
    CHECK(out.loss_weight < 1e-9);

    // success envelopes on g_- and g_+ differ exactly by the -Z sign
    const WavePacket* vm = out.success_state.find(
        {EmitterLevel::g_minus, Polarization::sigma_plus, Port::output});
    const WavePacket* vp = out.success_state.find(
        {EmitterLevel::g_plus, Polarization::sigma_plus, Port::output});
    REQUIRE(vm);
    REQUIRE(vp);
    double worst = 0.0;
    for (std::size_t k = 0; k < vm->size(); ++k)
        worst = std::max(worst, std::abs(vm->amplitudes[k] / qubit(0) +
                                         vp->amplitudes[k] / qubit(1)));
    CHECK(worst < 1e-10);
    // sign bookkeeping: the v component on g_- equals -B, which is +psi in
    // the perfect-mirror narrowband limit
    const std::size_t mid = psi.size() / 2;
    const cplx vminus = std::sqrt(2.0) * vm->amplitudes[mid] / qubit(0);
    CHECK(std::abs(vminus - psi.amplitudes[mid]) < 1e-3 * std::abs(psi.amplitudes[mid]));
}

TEST_CASE("z-block success probability matches the closed forms at both boosts") {
    const EmitterParams em = EmitterParams::from_purcell(20.0);
    const Vec2 plus = Vec2(1.0, 1.0) / std::sqrt(2.0);
    {
        const WavePacket psi = narrowband_packet(em, 1.0);
        const HeraldOutcome out = z_block(make_h_input(plus, psi), em, 1.0);
        CHECK(out.p_success == doctest::Approx(std::pow(20.0 / 21.0, 2)).epsilon(1e-3));
        CHECK(out.p_success + out.failure_weight + out.loss_weight ==
              doctest::Approx(1.0).epsilon(1e-8));
    }
    {
        const WavePacket psi = narrowband_packet(em, 2.0);
        const HeraldOutcome out = z_block(make_h_input(plus, psi), em, 2.0);
        CHECK(out.p_success == doctest::Approx(std::pow(40.0 / 41.0, 2)).epsilon(1e-3));
    }
}

TEST_CASE("z-block p_success equals the reflectance of the underlying scatter") {
    const EmitterParams em = EmitterParams::from_purcell(3.0, 1.0, 1.2);
    const WavePacket psi = half_exp_packet(em, 0.8);
    const HeraldOutcome out = z_block(make_h_input(Vec2(1.0, 0.0), psi), em, 1.0);
    const ScatterResult direct = scatter(psi, em);
    CHECK(std::abs(out.p_success - direct.reflectance) < 1e-6);
    CHECK(std::abs(out.failure_weight - direct.transmittance) < 1e-6);
}

TEST_CASE("z-block herald at P = 1: success 1/4, failure 1/4, loss 1/2") {
    const EmitterParams em = EmitterParams::from_purcell(1.0);
    const WavePacket psi = narrowband_packet(em);
    const Vec2 plus = Vec2(1.0, 1.0) / std::sqrt(2.0);
    const HeraldOutcome out = z_block(make_h_input(plus, psi), em, 1.0);
    CHECK(out.p_success == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(out.failure_weight == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(out.loss_weight == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("z-block rejects inputs that are not h-polarized") {
    const EmitterParams em(1.0, 0.0);
    const WavePacket psi = half_exp_packet(em, 1.0);
    JointState st;
    st.add_amplitude({EmitterLevel::g_plus, Polarization::sigma_plus, Port::waveguide}, psi);
    CHECK_THROWS_AS(z_block(st, em), ValidationError);
}

TEST_CASE("herald filter splits linear polarizations and is idempotent") {
    const EmitterParams em(1.0, 0.0);
    const WavePacket psi = half_exp_packet(em, 1.0);
    JointState st;  // pure v at the output port
    st.add_amplitude({EmitterLevel::g_minus, Polarization::sigma_plus, Port::output},
                     (1.0 / std::sqrt(2.0)) * psi);
    st.add_amplitude({EmitterLevel::g_minus, Polarization::sigma_minus, Port::output},
                     (-1.0 / std::sqrt(2.0)) * psi);

    const double mass = st.branch_mass();
    const HeraldOutcome keep_v = herald_filter(st, LinearPol::v);
    CHECK(std::abs(keep_v.p_success - mass) < 1e-12);
    CHECK(keep_v.failure_weight == doctest::Approx(0.0).epsilon(1e-12));

    const HeraldOutcome keep_h = herald_filter(st, LinearPol::h);
    CHECK(keep_h.p_success == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(keep_h.failure_weight - mass) < 1e-12);

    const HeraldOutcome twice = herald_filter(keep_v.success_state, LinearPol::v);
    CHECK(twice.p_success == doctest::Approx(keep_v.p_success).epsilon(1e-12));
    CHECK(twice.failure_weight == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("emitter unitary mixes branches and conserves probability") {
    const EmitterParams em(1.0, 0.0);
    const WavePacket psi = half_exp_packet(em, 1.0);
    JointState st = make_h_input(Vec2(1.0, 0.0), psi);

    const JointState same = emitter_unitary(st, Mat2::Identity());
    CHECK(same.branch_mass() == doctest::Approx(st.branch_mass()).epsilon(1e-12));

    const JointState rotated = emitter_unitary(st, hadamard());
    const WavePacket* up =
        rotated.find({EmitterLevel::g_plus, Polarization::sigma_plus, Port::waveguide});
    const WavePacket* down =
        rotated.find({EmitterLevel::g_minus, Polarization::sigma_plus, Port::waveguide});
    REQUIRE(up);
    REQUIRE(down);
    CHECK((*up - *down).norm() < 1e-12);
    CHECK(rotated.branch_mass() == doctest::Approx(1.0).epsilon(1e-8));

    // Z H H Z composes to the identity
    const Mat2 z = pauli_z(), h = hadamard();
    JointState round_trip = emitter_unitary(
        emitter_unitary(emitter_unitary(emitter_unitary(st, z), h), h), z);
    for (const auto& [label, packet] : st.branches) {
        const WavePacket* q = round_trip.find(label);
        REQUIRE(q);
        CHECK((*q - packet).norm() < 1e-12);
    }

    Mat2 skewed;
    skewed << 1.0, 0.5, 0.0, 1.0;
    CHECK_THROWS_AS(emitter_unitary(st, skewed), ValidationError);
}

TEST_CASE("z-block success probability is nondecreasing in the Purcell factor") {
    const PulseShape shape = HalfExponential{1.0, 0.0};
    const Vec2 plus = Vec2(1.0, 1.0) / std::sqrt(2.0);
    double previous = -1.0;
    for (int i = 0; i < 50; ++i) {
        const double purcell = 0.2 * std::pow(10.0, i / 12.0);
        const EmitterParams em = EmitterParams::from_purcell(purcell);
        const TimeGrid grid = default_grid(shape, em.gamma_total());
        const HeraldOutcome out =
            z_block(make_h_input(plus, make_pulse(shape, grid, 0.0)), em);
        CHECK(out.p_success >= previous - 1e-12);
        previous = out.p_success;
    }
}

TEST_CASE("probability is conserved through compositions of operations") {
    const EmitterParams em = EmitterParams::from_purcell(0.7, 1.0, -2.0);
    const WavePacket psi = half_exp_packet(em, 2.0);
    const Vec2 qubit(cplx{0.36, 0.48}, cplx{0.6, -0.52});
    JointState st = make_h_input(qubit / qubit.norm(), psi);
    CHECK(st.total_probability() == doctest::Approx(1.0).epsilon(1e-8));

    st = emitter_unitary(st, hadamard());
    const JointState scattered = scatter_four_level(st, em, 2.0);
    CHECK(scattered.total_probability() == doctest::Approx(1.0).epsilon(1e-8));

    const HeraldOutcome herald = herald_filter(scattered, LinearPol::v);
    CHECK(herald.p_success + herald.failure_weight + herald.loss_weight ==
          doctest::Approx(1.0).epsilon(1e-8));
}
