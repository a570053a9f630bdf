#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chirp/error.hpp"
#include "chirp/observables.hpp"

using namespace chirp;

namespace {

std::vector<double> grid(double a, double b, double h) {
    std::vector<double> t;
    const auto n = static_cast<std::size_t>(std::llround((b - a) / h));
    for (std::size_t i = 0; i <= n; ++i) t.push_back(a + static_cast<double>(i) * h);
    return t;
}

// Smoothed energy of an ideal climber: plateaus at the ladder levels with
// short linear risers centred on the given times.
std::vector<double> staircase(const std::vector<double>& taus, const EnergyLadder& ladder,
                              const std::vector<double>& steps, double riser) {
    std::vector<double> e(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        double v = ladder[0];
        for (std::size_t k = 0; k < steps.size(); ++k) {
            const double f = std::clamp((taus[i] - steps[k]) / riser + 0.5, 0.0, 1.0);
            v += f * (ladder[k + 1] - ladder[k]);
        }
        e[i] = v;
    }
    return e;
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("smoothing a constant is the identity") {
    const auto t = grid(-1, 1, 0.01);
    const std::vector<double> v(t.size(), 3.25);
    for (double x : smooth(t, v)) CHECK(x == doctest::Approx(3.25).epsilon(1e-14));
}

TEST_CASE("boxcar suppresses a sinusoid of the window period") {
    const auto t = grid(0, 2, 0.001);
    std::vector<double> v(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) v[i] = std::sin(2 * std::numbers::pi * t[i] / 0.1);
    const auto s = smooth(t, v, 0.1);
    double worst = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] > 0.05 && t[i] < 1.95) worst = std::max(worst, std::abs(s[i]));
    }
    CHECK(worst < 0.05);
}

TEST_CASE("smoothing commutes with affine maps") {
    const auto t = grid(0, 1, 0.01);
    std::vector<double> v(t.size()), w(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        v[i] = std::cos(37 * t[i]) + t[i] * t[i];
        w[i] = -2.5 * v[i] + 4.0;
    }
    const auto sv = smooth(t, v);
    const auto sw = smooth(t, w);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(sw[i] == doctest::Approx(-2.5 * sv[i] + 4.0).epsilon(1e-12));
}

TEST_CASE("ends use one-sided windows") {
    const auto t = grid(0, 1, 0.01);
    const auto s = smooth(t, t, 0.1);  // linear data: window mean is the window midpoint
    CHECK(s.front() == doctest::Approx(0.025));
    CHECK(s[50] == doctest::Approx(0.5));
    CHECK(s.back() == doctest::Approx(0.975));
}

TEST_CASE("smoothing preconditions") {
    const auto t = grid(0, 1, 0.1);
    const std::vector<double> v(t.size(), 1.0);
    CHECK_THROWS_AS(smooth(t, v, 0.1), ConfigError);
    CHECK_NOTHROW(smooth(t, v, 0.2));
    std::vector<double> bad = {0.0, 0.1, 0.1};
    CHECK_THROWS_AS(smooth(bad, std::vector<double>(3, 1.0), 1.0), ConfigError);
}

TEST_CASE("integrated smoothing matches sample smoothing for linear data") {
    const auto t = grid(0, 2, 0.01);
    std::vector<double> v(t.size()), c(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        v[i] = 3 * t[i] + 1;
        c[i] = 1.5 * t[i] * t[i] + t[i];
    }
    const auto a = smooth(t, v);
    const auto b = smooth_integrated(t, c);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-9));
}

TEST_CASE("capture probability") {
    std::vector<double> ground(40, 0.0);
    ground[0] = 1.0;
    CHECK(capture_probability(ground, 25.0, 10.0) == 0.0);

    std::vector<double> climbed(40, 0.0);
    climbed[2] = 1.0;
    CHECK(CutoffRule{}.cutoff(25.0, 10.0) == 2);
    CHECK(capture_probability(climbed, 25.0, 10.0) == 1.0);

    CHECK(CutoffRule{}.cutoff(1.0, 10.0) == 1);  // never below level 1
    CHECK(CutoffRule{}.cutoff(6.0, 0.1) == 30);

    std::vector<double> spread(40);
    for (std::size_t n = 0; n < 40; ++n) spread[n] = std::exp(-0.2 * n);
    double total = 0;
    for (double x : spread) total += x;
    for (double& x : spread) x /= total;
    double previous = 1.0;
    for (std::size_t cut = 1; cut < 40; ++cut) {
        const double c = capture_probability(spread, 1.0, 1.0, CutoffRule::fixed(cut));
        CHECK(c <= previous);
        CHECK(c >= 0.0);
        previous = c;
    }

    CHECK_THROWS_AS(capture_probability(ground, 0.0, 10.0), ConfigError);
    CHECK_THROWS_AS(capture_probability(ground, 25.0, 10.0, CutoffRule::fixed(40)), ConfigError);
}

TEST_CASE("step times of an ideal staircase") {
    const EnergyLadder ladder(0.016, 0.05, 40);
    const auto t = grid(-10, 25, 0.01);
    const auto e = staircase(t, ladder, {10.0, 20.0}, 0.5);
    const auto steps = ladder_step_times(t, e, ladder);
    REQUIRE(steps.size() == 2);
    CHECK(steps[0] == doctest::Approx(10.0).epsilon(0.001));
    CHECK(steps[1] == doctest::Approx(20.0).epsilon(0.0005));
}

TEST_CASE("partial capture still places steps at riser midpoints") {
    const EnergyLadder ladder(0.016, 0.05, 40);
    const auto t = grid(-10, 25, 0.01);
    auto e = staircase(t, ladder, {10.0, 20.0}, 1.0);
    // Only 80% of the population climbs.
    for (double& x : e) x = ladder[0] + 0.8 * (x - ladder[0]);
    const auto steps = ladder_step_times(t, e, ladder);
    REQUIRE(steps.size() == 2);
    CHECK(std::abs(steps[0] - 10.0) < 0.02);
    CHECK(std::abs(steps[1] - 20.0) < 0.02);
}

TEST_CASE("no staircase in flat or continuously growing energy") {
    const EnergyLadder ladder(0.0016, 0.0155, 250);
    const auto t = grid(-10, 6, 0.01);
    const std::vector<double> flat(t.size(), ladder[0]);
    CHECK(ladder_step_times(t, flat, ladder).empty());

    // Locked growth I = tau/P2 with a slow superimposed oscillation.
    std::vector<double> ramp(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double action = std::max(0.0, t[i] / 0.1);
        ramp[i] = 0.5 + action + 2.0 * std::sin(2 * std::numbers::pi * t[i] / 0.12);
    }
    CHECK(ladder_step_times(t, ramp, ladder).empty());
}

}  // TEST_SUITE
