#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chirp/error.hpp"
#include "chirp/wigner.hpp"

using namespace chirp;

namespace {

constexpr double kPi = std::numbers::pi;

StateVector fock(std::size_t n, std::size_t size = 6) {
    StateVector s;
    s.amps.assign(size, Complex{});
    s.amps[n] = 1.0;
    return s;
}

StateVector random_state(std::mt19937_64& rng, std::size_t size) {
    std::normal_distribution<double> g;
    StateVector s;
    s.amps.resize(size);
    double total = 0;
    for (auto& c : s.amps) {
        c = {g(rng), g(rng)};
        total += std::norm(c);
    }
    for (auto& c : s.amps) c /= std::sqrt(total);
    return s;
}

PhaseSpaceGrid square(double half, std::size_t points) {
    return {-half, half, -half, half, points, points};
}

}  // namespace

TEST_SUITE("wigner") {

TEST_CASE("ground state is a Gaussian") {
    const auto s = fock(0);
    for (double x : {-1.3, 0.0, 0.4, 2.1}) {
        for (double p : {-0.7, 0.0, 1.9}) {
            CHECK(wigner_point(s, x, p) == doctest::Approx(std::exp(-x * x - p * p) / kPi).epsilon(1e-8));
        }
    }
}

TEST_CASE("Fock states at the origin") {
    CHECK(wigner_point(fock(1), 0, 0) == doctest::Approx(-1 / kPi).epsilon(1e-12));
    CHECK(wigner_point(fock(2), 0, 0) == doctest::Approx(1 / kPi).epsilon(1e-12));
    CHECK(wigner_point(fock(5), 0, 0) == doctest::Approx(-1 / kPi).epsilon(1e-12));
}

TEST_CASE("superposition of the two lowest levels") {
    StateVector s;
    s.amps = {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
    // W = exp(-x^2-p^2)/pi * (x^2 + p^2 + sqrt(2) x)
    for (double x : {-1.0, 0.3, 1.2}) {
        for (double p : {-0.5, 0.8}) {
            const double expected = std::exp(-x * x - p * p) / kPi * (x * x + p * p + std::sqrt(2.0) * x);
            CHECK(wigner_point(s, x, p) == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("Laguerre path agrees with direct quadrature") {
    std::mt19937_64 rng(20261017);
    for (int k = 0; k < 10; ++k) {
        const auto s = random_state(rng, 5);
        for (double x : {-1.5, 0.2, 1.1}) {
            for (double p : {-0.9, 0.6}) {
                const auto w = direct_wigner_point(s, x, p);
                CHECK(std::abs(w.real() - wigner_point(s, x, p)) < 1e-6);
                CHECK(std::abs(w.imag()) < 1e-10);
            }
        }
    }
}

TEST_CASE("oracle field matches production field") {
    std::mt19937_64 rng(7);
    const auto s = random_state(rng, 4);
    const auto grid = square(5.5, 33);
    const auto a = wigner_from_state(s, grid);
    const auto b = direct_wigner_oracle(s, grid);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-6);
}

TEST_CASE("normalisation, purity and marginals") {
    std::mt19937_64 rng(11);
    const auto s = random_state(rng, 6);
    const auto grid = square(7.0, 201);
    const auto w = wigner_from_state(s, grid);
    CHECK(w.integral() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(w.purity() == doctest::Approx(1.0).epsilon(1e-4));
    const auto marginal = w.x_marginal();
    for (std::size_t i = 0; i < grid.nx; i += 10) {
        CHECK(std::abs(marginal[i] - std::norm(wavefunction(s, grid.x(i)))) < 1e-3);
    }
}

TEST_CASE("phase rotation rotates phase space") {
    std::mt19937_64 rng(3);
    auto s = random_state(rng, 5);
    const double theta = 0.7;
    auto r = s;
    for (std::size_t n = 0; n < r.size(); ++n) r.amps[n] *= std::polar(1.0, -theta * static_cast<double>(n));
    for (double x : {-1.0, 0.5, 1.7}) {
        for (double p : {-0.4, 1.2}) {
            // exp(-i theta n) is free evolution for time theta: W follows the flow
            const double xr = x * std::cos(theta) - p * std::sin(theta);
            const double pr = x * std::sin(theta) + p * std::cos(theta);
            CHECK(wigner_point(r, x, p) == doctest::Approx(wigner_point(s, xr, pr)).epsilon(1e-10));
        }
    }
}

TEST_CASE("grid guards") {
    CHECK_THROWS_AS(square(4.0, 16).validate(), ConfigError);
    CHECK_THROWS_AS((PhaseSpaceGrid{1, -1, -1, 1, 64, 64}.validate()), ConfigError);
    // Level 30 has orbit radius ~7.8, far outside a [-3, 3] window.
    CHECK_THROWS_AS(wigner_from_state(fock(30, 32), square(3.0, 41)), NumericalGuardError);
    const auto fitted = PhaseSpaceGrid::fit(fock(30, 32), 41);
    CHECK_NOTHROW(wigner_from_state(fock(30, 32), fitted));
}

}  // TEST_SUITE
