#include "chirp/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/hermite.hpp>

#include "chirp/error.hpp"

namespace chirp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRescale = 1e150;
const double kLogRescale = std::log(kRescale);

// Highest level with non-negligible amplitude, plus one.
std::size_t effective_size(const StateVector& state) {
    std::size_t n = state.size();
    while (n > 1 && std::norm(state.amps[n - 1]) < 1e-32) --n;
    return n;
}

// Pair coefficients B[k][n] = (-1)^n c_{n+k} conj(c_n).
std::vector<std::vector<Complex>> pair_coefficients(const StateVector& state, std::size_t n_eff) {
    std::vector<std::vector<Complex>> b(n_eff);
    for (std::size_t k = 0; k < n_eff; ++k) {
        b[k].resize(n_eff - k);
        for (std::size_t n = 0; n + k < n_eff; ++n) {
            const double sign = (n % 2 == 0) ? 1.0 : -1.0;
            b[k][n] = sign * state.amps[n + k] * std::conj(state.amps[n]);
        }
    }
    return b;
}

// Sum over n of B[k][n] h_n^k(u), with
//   h_n^k(u) = sqrt(n!/(n+k)!) u^{k/2} e^{-u/2} L_n^{(k)}(u)
// evaluated through the normalised three-term recurrence in n, carrying a
// separate log scale so that neither the prefactor nor the polynomial overflows.
Complex laguerre_band_sum(const std::vector<Complex>& coeffs, std::size_t k, double u) {
    const double kd = static_cast<double>(k);
    double log_prefactor;
    if (k == 0) {
        log_prefactor = -0.5 * u;
    } else if (u <= 0.0) {
        return {};
    } else {
        log_prefactor = 0.5 * kd * std::log(u) - 0.5 * u - 0.5 * std::lgamma(kd + 1.0);
    }

    double log_scale = 0.0;
    double g_prev = 0.0;
    double g = 1.0;
    Complex acc{};
    // Terms are accumulated against the running scale; when the scale changes,
    // the accumulator is rescaled to match.
    for (std::size_t n = 0; n < coeffs.size(); ++n) {
        acc += coeffs[n] * g;
        const double nd = static_cast<double>(n);
        const double next = ((2.0 * nd + 1.0 + kd - u) * g - std::sqrt(nd * (nd + kd)) * g_prev) /
                            std::sqrt((nd + 1.0) * (nd + 1.0 + kd));
        g_prev = g;
        g = next;
        if (std::abs(g) > kRescale) {
            g /= kRescale;
            g_prev /= kRescale;
            acc /= kRescale;
            log_scale += kLogRescale;
        }
    }
    const double log_total = log_prefactor + log_scale;
    if (log_total < -745.0) return {};
    return acc * std::exp(log_total);
}

double wigner_value(const std::vector<std::vector<Complex>>& b, double x, double p) {
    const double r2 = x * x + p * p;
    const double u = 2.0 * r2;
    // exp(-i k theta) with theta = atan2(p, x), built up by repeated rotation.
    const double r = std::sqrt(r2);
    const Complex rot = r > 0.0 ? Complex(x / r, -p / r) : Complex(1.0, 0.0);
    Complex phase(1.0, 0.0);
    double w = laguerre_band_sum(b[0], 0, u).real();
    for (std::size_t k = 1; k < b.size(); ++k) {
        phase *= rot;
        w += 2.0 * (laguerre_band_sum(b[k], k, u) * phase).real();
    }
    return w / kPi;
}

double log_hermite_norm(std::size_t n) {
    const double nd = static_cast<double>(n);
    return -0.25 * std::log(kPi) - 0.5 * (nd * std::log(2.0) + std::lgamma(nd + 1.0));
}

}  // namespace

void PhaseSpaceGrid::validate() const {
    if (!(x_max > x_min) || !(p_max > p_min)) throw ConfigError("phase-space grid: empty extent");
    if (nx < 32 || np < 32) throw ConfigError("phase-space grid: need at least 32 samples per axis");
}

PhaseSpaceGrid PhaseSpaceGrid::fit(const StateVector& state, std::size_t points) {
    std::size_t n_occ = 0;
    for (std::size_t n = 0; n < state.size(); ++n) {
        if (std::norm(state.amps[n]) > 1e-3) n_occ = n;
    }
    const double half = std::sqrt(2.0 * static_cast<double>(n_occ)) + 3.0;
    return {-half, half, -half, half, points, points};
}

double WignerField::integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * grid.dx() * grid.dp();
}

double WignerField::purity() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return 2.0 * kPi * s * grid.dx() * grid.dp();
}

std::vector<double> WignerField::x_marginal() const {
    std::vector<double> m(grid.nx, 0.0);
    for (std::size_t j = 0; j < grid.np; ++j) {
        for (std::size_t i = 0; i < grid.nx; ++i) m[i] += at(i, j);
    }
    for (double& v : m) v *= grid.dp();
    return m;
}

WignerField wigner_from_state(const StateVector& state, const PhaseSpaceGrid& grid) {
    grid.validate();

    // Population whose classical orbit radius sqrt(2n+1), plus a margin for
    // the Gaussian tail, reaches past the nearest grid edge.
    const double reach = std::min({-grid.x_min, grid.x_max, -grid.p_min, grid.p_max});
    double outside = 0.0;
    for (std::size_t n = 0; n < state.size(); ++n) {
        if (std::sqrt(2.0 * static_cast<double>(n) + 1.0) + 1.5 > reach) outside += std::norm(state.amps[n]);
    }
    if (outside > 0.05) {
        throw NumericalGuardError("grid_mass", "estimated " + std::to_string(outside) +
                                                   " of the state lies outside the phase-space grid");
    }

    const std::size_t n_eff = effective_size(state);
    const auto b = pair_coefficients(state, n_eff);
    WignerField field{grid, std::vector<double>(grid.nx * grid.np)};
    for (std::size_t j = 0; j < grid.np; ++j) {
        const double p = grid.p(j);
        for (std::size_t i = 0; i < grid.nx; ++i) {
            field.values[j * grid.nx + i] = wigner_value(b, grid.x(i), p);
        }
    }
    return field;
}

double wigner_point(const StateVector& state, double x, double p) {
    const auto b = pair_coefficients(state, effective_size(state));
    return wigner_value(b, x, p);
}

std::complex<double> wavefunction(const StateVector& state, double x) {
    Complex psi{};
    const double gauss = -0.5 * x * x;
    for (std::size_t n = 0; n < state.size(); ++n) {
        if (state.amps[n] == Complex{}) continue;
        const double h = boost::math::hermite(static_cast<unsigned>(n), x);
        psi += state.amps[n] * h * std::exp(gauss + log_hermite_norm(n));
    }
    return psi;
}

std::complex<double> direct_wigner_point(const StateVector& state, double x, double p) {
    using boost::math::quadrature::gauss_kronrod;
    const double half_width = std::abs(x) + 12.0;

    auto integrand = [&](double s, bool imag) {
        const Complex v = std::conj(wavefunction(state, x + s)) * wavefunction(state, x - s) *
                          std::polar(1.0, 2.0 * p * s);
        return imag ? v.imag() : v.real();
    };
    double err_re = 0.0;
    double err_im = 0.0;
    const double re = gauss_kronrod<double, 61>::integrate(
        [&](double s) { return integrand(s, false); }, -half_width, half_width, 20, 1e-13, &err_re);
    const double im = gauss_kronrod<double, 61>::integrate(
        [&](double s) { return integrand(s, true); }, -half_width, half_width, 20, 1e-13, &err_im);
    if (err_re > 1e-10 || err_im > 1e-10) {
        throw NumericalGuardError("quadrature", "Wigner integral did not converge at (" +
                                                    std::to_string(x) + ", " + std::to_string(p) + ")");
    }
    return Complex(re, im) / kPi;
}

WignerField direct_wigner_oracle(const StateVector& state, const PhaseSpaceGrid& grid) {
    grid.validate();
    WignerField field{grid, std::vector<double>(grid.nx * grid.np)};
    for (std::size_t j = 0; j < grid.np; ++j) {
        for (std::size_t i = 0; i < grid.nx; ++i) {
            field.values[j * grid.nx + i] = direct_wigner_point(state, grid.x(i), grid.p(j)).real();
        }
    }
    return field;
}

}  // namespace chirp
