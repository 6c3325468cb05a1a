#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wqed/qubit_ops.hpp"

using namespace wqed;

TEST_CASE("concurrence of product and Bell states") {
    Vec4 product = Vec4::Zero();
    product(0) = 1.0;
    CHECK(concurrence(product) == doctest::Approx(0.0));

    Vec4 bell = Vec4::Zero();
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    CHECK(concurrence(bell) == doctest::Approx(1.0));

    CHECK_THROWS_AS(concurrence(2.0 * bell), ValidationError);
}

TEST_CASE("time-bin target on |+>_p |0>_a is maximally entangling") {
    const Vec2 plus = Vec2(1.0, 1.0) / std::sqrt(2.0);
    const Vec2 zero(1.0, 0.0);
    const Vec4 out = time_bin_target() * kron(plus, zero);
    // (|0>|+> + |1>|->)/sqrt(2)
    CHECK(std::abs(out(0) - 0.5) < 1e-12);
    CHECK(std::abs(out(1) - 0.5) < 1e-12);
    CHECK(std::abs(out(2) - 0.5) < 1e-12);
    CHECK(std::abs(out(3) + 0.5) < 1e-12);
    CHECK(concurrence(out) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("both composite targets have unit entangling witness") {
    CHECK(entangling_witness(time_bin_target()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(entangling_witness(controlled_z_target()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("process fidelity: exact match, phase invariance, mismatch") {
    const Mat4 cz = controlled_z_target();
    ConditionalMap map;
    map.kraus = {cz};
    CHECK(process_fidelity(map, cz) == doctest::Approx(1.0).epsilon(1e-14));

    const cplx phase = std::polar(1.0, 0.7321);
    map.kraus = {phase * cz};
    CHECK(process_fidelity(map, cz) == doctest::Approx(1.0).epsilon(1e-14));

    map.kraus = {Mat4::Identity()};
    CHECK(process_fidelity(map, cz) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("average fidelity follows the d = 4 identity") {
    CHECK(average_fidelity_from_process(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(average_fidelity_from_process(0.25) == doctest::Approx(0.4).epsilon(1e-15));
}

TEST_CASE("completeness excess of a trace-decreasing map") {
    ConditionalMap map;
    map.kraus = {0.5 * controlled_z_target()};
    CHECK(map.completeness_excess() < 1e-12);
    map.kraus = {1.5 * Mat4::Identity()};
    CHECK(map.completeness_excess() > 1.0);
}

TEST_CASE("process fidelity rejects degenerate maps") {
    ConditionalMap empty;
    CHECK_THROWS_AS(process_fidelity(empty, controlled_z_target()), ValidationError);
    ConditionalMap zero;
    zero.kraus = {Mat4::Zero()};
    CHECK_THROWS_AS(process_fidelity(zero, controlled_z_target()), ValidationError);
}

TEST_CASE("witness drops below one for partially entangling diagonal maps") {
    Mat4 weak = Mat4::Identity();
    weak(2, 2) = 0.5;
    weak(3, 3) = -0.5;
    const double w = entangling_witness(weak);
    CHECK(w > 0.0);
    CHECK(w < 1.0);
    CHECK(w == doctest::Approx(2.0 * 0.5 / (1.0 + 0.25)).epsilon(1e-12));
}
