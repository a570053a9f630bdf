#pragma once

// Wigner quasi-probability W(x, p) of a pure state given in the harmonic
// oscillator (Fock) basis, hbar = 1:
//
//   W(x, p) = (1/pi) Integral psi*(x + s) psi(x - s) exp(2 i p s) ds.

#include <complex>
#include <cstddef>
#include <vector>

#include "chirp/propagator.hpp"

namespace chirp {

struct PhaseSpaceGrid {
    double x_min = -5.0;
    double x_max = 5.0;
    double p_min = -5.0;
    double p_max = 5.0;
    std::size_t nx = 101;
    std::size_t np = 101;

    double dx() const { return (x_max - x_min) / static_cast<double>(nx - 1); }
    double dp() const { return (p_max - p_min) / static_cast<double>(np - 1); }
    double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
    double p(std::size_t j) const { return p_min + static_cast<double>(j) * dp(); }

    /// Throws ConfigError on degenerate extents or fewer than 32 samples per axis.
    void validate() const;

    /// Square grid [-L, L]^2 with L = sqrt(2 n_occ) + 3, n_occ the highest
    /// level holding more than 1e-3 population.
    static PhaseSpaceGrid fit(const StateVector& state, std::size_t points = 201);

    bool operator==(const PhaseSpaceGrid&) const = default;
};

struct WignerField {
    PhaseSpaceGrid grid;
    std::vector<double> values;  // row-major: values[j * nx + i] = W(x_i, p_j)

    double at(std::size_t i, std::size_t j) const { return values[j * grid.nx + i]; }

    /// Riemann sum of W dx dp.
    double integral() const;
    /// 2 pi Riemann sum of W^2 dx dp; 1 for a pure state.
    double purity() const;
    /// Sum over p of W(x_i, p) dp for every x_i.
    std::vector<double> x_marginal() const;
};

/// Closed-form Laguerre evaluation, O(N^2) per grid point. Throws
/// NumericalGuardError when more than 5% of the population sits in levels
/// whose orbit does not fit inside the grid.
WignerField wigner_from_state(const StateVector& state, const PhaseSpaceGrid& grid);

/// W at one point via the Laguerre path.
double wigner_point(const StateVector& state, double x, double p);

/// psi(x) = sum_n c_n phi_n(x) with normalised Hermite functions phi_n.
std::complex<double> wavefunction(const StateVector& state, double x);

/// Reference W(x, p) by adaptive Gauss-Kronrod quadrature of the defining
/// integral. Returns the complex value; its imaginary part should vanish.
/// Throws NumericalGuardError when the quadrature error estimate exceeds 1e-10.
std::complex<double> direct_wigner_point(const StateVector& state, double x, double p);

/// Oracle field on a grid. Intended for N <= 10; cost is high.
WignerField direct_wigner_oracle(const StateVector& state, const PhaseSpaceGrid& grid);

}  // namespace chirp
