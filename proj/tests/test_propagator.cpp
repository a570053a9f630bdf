#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chirp/error.hpp"
#include "chirp/propagator.hpp"

using namespace chirp;

namespace {

Problem short_problem(double epsilon, ResonanceMode mode = ResonanceMode::Fundamental, std::size_t n = 10) {
    Problem p;
    p.params = {1e-2, 0.02, 0.05, epsilon, mode};
    p.basis_size = n;
    return p;
}

double max_population_diff(const StateVector& a, const StateVector& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(std::norm(a.amps[i]) - std::norm(b.amps[i])));
    return d;
}

double max_amp_diff(const StateVector& a, const StateVector& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.amps[i] - b.amps[i]));
    return d;
}

StateVector run(const Problem& p, Picture picture, double dt, double t_end) {
    Propagator prop(p, picture);
    auto s = prop.initial_state();
    prop.advance(s, t_end, dt);
    return s;
}

}  // namespace

TEST_SUITE("propagator") {

TEST_CASE("initial state") {
    const auto a = initial_state(40, 1e-6);
    CHECK(a.t == doctest::Approx(-1e4));
    CHECK(a.amps[0] == Complex(1, 0));
    CHECK(a.norm() == 1.0);
    const auto b = initial_state(250, 1e-4);
    CHECK(b.t == doctest::Approx(-1e3));
    CHECK(b.size() == 250);
}

TEST_CASE("rhs examples") {
    const PhysicalParams params{1e-4, 0.0, 0.0, 0.3, ResonanceMode::Fundamental};
    const EnergyLadder ladder(0.0, 0.0, 6);
    const CouplingMatrix lin(6, CouplingOrder::Linear, 0, 0);
    const ChirpSchedule schedule(params.mode, params.alpha, 0.0);  // phase 0 at t = 0, cos = 1
    StateVector s{std::vector<Complex>(6), 0.0};
    s.amps[0] = 1.0;

    const auto free = rhs(s, ladder, lin, 0.0, schedule);
    CHECK(free[0] == Complex(0, -0.5));
    for (std::size_t n = 1; n < 6; ++n) CHECK(free[n] == Complex(0, 0));

    const auto driven = rhs(s, ladder, lin, 0.3, schedule);
    CHECK(driven[1].real() == doctest::Approx(0.0));
    CHECK(driven[1].imag() == doctest::Approx(-0.3 / std::sqrt(2.0)).epsilon(1e-14));

    // Hermitian generator: d(norm)/dt = 2 Re <c, dc/dt> = 0.
    const CouplingMatrix full(6, CouplingOrder::Full, 0.02, 0.05);
    const EnergyLadder l2(0.02, 0.05, 6);
    for (std::size_t n = 0; n < 6; ++n) s.amps[n] = Complex(std::cos(1.7 * n), std::sin(0.4 * n + 0.3));
    const auto d = rhs(s, l2, full, 0.7, ChirpSchedule(params.mode, params.alpha, -3.0));
    Complex inner{};
    for (std::size_t n = 0; n < 6; ++n) inner += std::conj(s.amps[n]) * d[n];
    CHECK(std::abs(inner.real()) < 1e-14);
}

TEST_CASE("free evolution is exact up to RK4 error") {
    auto p = short_problem(0.0);
    Propagator prop(p, Picture::Schrodinger);
    StateVector s = prop.initial_state();
    for (std::size_t n = 0; n < s.size(); ++n) s.amps[n] = Complex(1.0 / std::sqrt(10.0), 0.0);
    const StateVector start = s;
    const double T = 7.0;
    prop.advance(s, s.t + T, 0.001);
    double err = 0;
    for (std::size_t n = 0; n < s.size(); ++n) {
        const Complex exact = start.amps[n] * std::polar(1.0, -prop.ladder()[n] * T);
        err = std::max(err, std::abs(s.amps[n] - exact));
    }
    CHECK(err < 1e-7);

    // Interaction picture with zero drive is exact.
    Propagator ip(p, Picture::Interaction);
    StateVector s2 = start;
    ip.advance(s2, s2.t + T, 0.5);
    double err2 = 0;
    for (std::size_t n = 0; n < s2.size(); ++n) {
        err2 = std::max(err2, std::abs(s2.amps[n] - start.amps[n] * std::polar(1.0, -ip.ladder()[n] * T)));
    }
    CHECK(err2 < 1e-12);
}

TEST_CASE("fourth-order convergence") {
    const auto p = short_problem(0.3);
    const double t_end = -10.0 / std::sqrt(p.params.alpha) + 25.0;
    const auto ref = run(p, Picture::Schrodinger, 0.0025, t_end);
    const double e1 = max_amp_diff(run(p, Picture::Schrodinger, 0.02, t_end), ref);
    const double e2 = max_amp_diff(run(p, Picture::Schrodinger, 0.01, t_end), ref);
    const double ratio = e1 / e2;
    MESSAGE("error ratio for dt halving: " << ratio);
    CHECK(ratio > 12.0);
    CHECK(ratio < 20.0);
}

TEST_CASE("picture equivalence on a short run") {
    for (auto mode : {ResonanceMode::Fundamental, ResonanceMode::Subharmonic2}) {
        const auto p = short_problem(0.4, mode);
        const double t_end = -10.0 / std::sqrt(p.params.alpha) + 60.0;
        const auto a = run(p, Picture::Schrodinger, 0.005, t_end);
        const auto b = run(p, Picture::Interaction, 0.005, t_end);
        CHECK(max_population_diff(a, b) < 1e-6);
    }
}

TEST_CASE("global phase does not change populations") {
    const auto p = short_problem(0.4, ResonanceMode::Subharmonic2);
    Propagator prop(p);
    auto a = prop.initial_state();
    auto b = a;
    b.amps[0] *= std::polar(1.0, 1.234);
    const double t_end = a.t + 80.0;
    prop.advance(a, t_end, 0.05);
    prop.advance(b, t_end, 0.05);
    CHECK(max_population_diff(a, b) < 1e-13);
}

TEST_CASE("time reversibility without drive") {
    for (auto picture : {Picture::Schrodinger, Picture::Interaction}) {
        const auto p = short_problem(0.0);
        Propagator prop(p, picture);
        auto s = prop.initial_state();
        for (std::size_t n = 0; n < s.size(); ++n) s.amps[n] = std::polar(1.0 / std::sqrt(10.0), 0.3 * n);
        const auto start = s;
        // dt max(E_n) ~ 0.01: the RK4 round-trip defect (dt E)^6/72 per step stays far below 1e-8
        prop.advance(s, s.t + 50.0, 0.001);
        prop.advance(s, start.t, 0.001);
        CHECK(max_amp_diff(s, start) < 1e-8);
    }
}

TEST_CASE("stability guard") {
    const auto p = short_problem(0.1);
    Propagator prop(p, Picture::Schrodinger);
    auto s = prop.initial_state();
    CHECK_THROWS_AS(prop.step(s, 0.5 / prop.ladder()[p.basis_size - 1] * 1.01), NumericalGuardError);
    CHECK_NOTHROW(prop.step(s, prop.default_dt()));
    CHECK(prop.default_dt() * prop.ladder()[p.basis_size - 1] == doctest::Approx(0.1));
}

TEST_CASE("propagate: flat energy without drive, sampling and snapshots") {
    Problem p = short_problem(0.0);
    IntegratorConfig cfg;
    cfg.tau_end = -9.0;
    cfg.sample_interval = 0.1;
    cfg.snapshot_taus = {-9.5};
    std::size_t calls = 0;
    const auto tr = propagate(p, cfg, [&](const Sample&) { ++calls; });
    CHECK(tr.samples.size() == 11);
    CHECK(calls == 11);
    CHECK(tr.samples.back().tau == doctest::Approx(-9.0));
    for (const auto& s : tr.samples) CHECK(s.mean_energy == doctest::Approx(Propagator(p).ladder()[0]).epsilon(1e-14));
    REQUIRE(tr.snapshots.size() == 1);
    CHECK(tr.snapshots[0].tau == -9.5);
    CHECK(tr.final_state.t == doctest::Approx(-90.0));
    // Integral of a constant energy over one sample interval.
    CHECK(tr.samples[1].energy_integral == doctest::Approx(0.1 * tr.samples[1].mean_energy).epsilon(1e-10));

    cfg.snapshot_taus = {-8.0};
    CHECK_THROWS_AS(propagate(p, cfg), ConfigError);
}

TEST_CASE("propagate guards") {
    Problem p;
    p.params = {1e-6, 0.016, 0.05, 0.18, ResonanceMode::Subharmonic2};
    p.basis_size = 5;
    IntegratorConfig cfg;
    cfg.tau_end = -9.0;
    try {
        propagate(p, cfg);
        FAIL("expected truncation guard");
    } catch (const NumericalGuardError& e) {
        CHECK(e.guard() == "truncation");
    }

    Problem q = short_problem(0.5);
    IntegratorConfig loose;
    loose.tau_end = -5.0;
    loose.dt = 0.4;
    loose.norm_drift_budget = 1e-12;
    try {
        propagate(q, loose);
        FAIL("expected norm drift guard");
    } catch (const NumericalGuardError& e) {
        CHECK(e.guard() == "norm_drift");
    }
}

}  // TEST_SUITE
