#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chirp/classical.hpp"
#include "chirp/error.hpp"

using namespace chirp;

namespace {

PhysicalParams classical_regime() { return {1e-4, 0.0016, 0.0155, 1.9, ResonanceMode::Subharmonic2}; }

}  // namespace

TEST_SUITE("classical") {

TEST_CASE("equations of motion") {
    const PhysicalParams free{1e-4, 0.0, 0.0, 0.0, ResonanceMode::Fundamental};
    const ChirpSchedule plain(ResonanceMode::Fundamental, 1e-4, 0.0);
    const auto a = classical_rhs({1.0, 0.0, 0.0}, free, plain);
    CHECK(a.dx == 0.0);
    CHECK(a.dp == -1.0);

    const PhysicalParams driven{1e-4, 0.0, 0.0, 0.3, ResonanceMode::Fundamental};
    const auto b = classical_rhs({0.0, 0.0, 0.0}, driven, plain);
    CHECK(b.dp == doctest::Approx(-0.3));

    const PhysicalParams anh{1e-4, 0.1, 0.1, 0.0, ResonanceMode::Fundamental};
    const auto c = classical_rhs({2.0, 0.5, 0.0}, anh, plain);
    CHECK(c.dx == 0.5);
    CHECK(c.dp == doctest::Approx(-2.0 - 0.4 - 0.8));
}

TEST_CASE("energy and locked target") {
    const PhysicalParams p{1e-4, 0.1, 0.3, 0.0, ResonanceMode::Fundamental};
    CHECK(classical_energy(1.0, 1.0, p) == doctest::Approx(1.0 + 0.1 + 0.025));
    const auto f = classical_regime();
    CHECK(autoresonant_energy(-1.0, f) == 0.0);
    const double P2 = dimensionless(f).P2;
    const double I = 6.0 / P2;
    CHECK(autoresonant_energy(6.0, f) == doctest::Approx(I + anharmonicity(f.beta, f.lambda) * I * I));
}

TEST_CASE("undriven energy is conserved") {
    PhysicalParams p{1e-2, 0.02, 0.05, 0.0, ResonanceMode::Fundamental};
    ClassicalRunConfig run;
    run.tau_end = 0.0;
    run.initial = {1.5, 0.0, 0.0};
    const auto r = classical_capture(p, run);
    REQUIRE_FALSE(r.diverged);
    const double e0 = r.trace.energy.front();
    double worst = 0;
    for (double e : r.trace.energy) worst = std::max(worst, std::abs(e - e0) / e0);
    CHECK(worst < 1e-8);
}

TEST_CASE("no capture without drive or far below threshold") {
    ClassicalRunConfig run;
    run.tau_end = 10.0;
    const double P2 = 0.1;
    const auto idle = realize_params(0.0, P2, 1e-6, 0.01);
    CHECK_FALSE(classical_capture(idle, run).captured);
    const auto weak = realize_params(0.2 * theory_threshold(P2).classical, P2, 1e-6, 0.01);
    CHECK_FALSE(classical_capture(weak, run).captured);
    const auto strong = realize_params(2.0 * theory_threshold(P2).classical, P2, 1e-6, 0.01);
    CHECK(classical_capture(strong, run).captured);
}

TEST_CASE("classical-regime drive captures for most switch-on phases") {
    ClassicalRunConfig run;
    run.tau_end = 6.0;
    int captured = 0;
    constexpr int kPhases = 8;
    for (int k = 0; k < kPhases; ++k) {
        run.phase_offset = 2.0 * std::numbers::pi * k / kPhases;
        captured += classical_capture(classical_regime(), run).captured ? 1 : 0;
    }
    CHECK(captured > kPhases / 2);
}

TEST_CASE("run validation") {
    ClassicalRunConfig run;
    run.tau_end = -11.0;
    CHECK_THROWS_AS(classical_capture(classical_regime(), run), ConfigError);
    run = {};
    run.dt = 0.0;
    CHECK_THROWS_AS(classical_capture(classical_regime(), run), ConfigError);
    CHECK_THROWS_AS(classical_threshold(1.0, {}), ConfigError);
}

}  // TEST_SUITE
