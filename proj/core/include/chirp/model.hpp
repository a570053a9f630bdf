#pragma once

// Static problem data for the chirp-driven anharmonic oscillator
//
//   H = (p^2 + x^2)/2 + lambda x^3/3 + beta x^4/4 + epsilon x cos(phi_d(t))
//
// expressed in the energy basis of the undriven oscillator.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace chirp {

enum class ResonanceMode {
    Fundamental,           // omega_d = 1 + alpha t
    Subharmonic2,          // omega_d = (1 + alpha t)/2
    EffectiveFundamental,  // Fundamental chirp, drive (8/9) eps^2 lambda
};

std::string_view to_string(ResonanceMode mode);
ResonanceMode parse_resonance_mode(std::string_view text);

struct PhysicalParams {
    double alpha = 1e-4;
    double beta = 0.0;
    double lambda = 0.0;
    double epsilon = 0.0;
    ResonanceMode mode = ResonanceMode::Subharmonic2;

    /// Throws ConfigError unless alpha > 0 and epsilon >= 0.
    void validate() const;

    bool operator==(const PhysicalParams&) const = default;
};

struct DimensionlessParams {
    double P1 = 0.0;
    double P2 = 0.0;
    double P1_tilde = 0.0;
    double mu = 0.0;
    double mu_tilde = 0.0;
    double T_NL = 0.0;
    double T_R = 0.0;  // infinite when epsilon == 0
    double T_S = 0.0;
};

/// gamma = (3/8) beta - (5/12) lambda^2
double anharmonicity(double beta, double lambda);

/// (8/9) epsilon^2 lambda
double effective_drive(const PhysicalParams& params);

/// Drive amplitude actually applied by the propagator for params.mode.
double drive_amplitude(const PhysicalParams& params);

/// Chirp parameters seen by the propagator: EffectiveFundamental maps onto
/// Fundamental with the rescaled drive.
PhysicalParams effective_twin(const PhysicalParams& subharmonic);

DimensionlessParams dimensionless(const PhysicalParams& params);

class EnergyLadder {
public:
    EnergyLadder(double beta, double lambda, std::size_t size);

    std::size_t size() const noexcept { return levels_.size(); }
    double gamma() const noexcept { return gamma_; }
    double operator[](std::size_t n) const { return levels_[n]; }
    const std::vector<double>& levels() const noexcept { return levels_; }

private:
    double gamma_;
    std::vector<double> levels_;
};

EnergyLadder build_ladder(const PhysicalParams& params, std::size_t size);

enum class CouplingOrder { Linear, Full };

std::string_view to_string(CouplingOrder order);
CouplingOrder parse_coupling_order(std::string_view text);

/// Symmetric real position matrix <psi_k| x |psi_n> with bandwidth 3.
class CouplingMatrix {
public:
    static constexpr std::size_t kMaxOffset = 3;

    CouplingMatrix(std::size_t size, CouplingOrder order, double beta, double lambda);

    std::size_t size() const noexcept { return size_; }
    CouplingOrder order() const noexcept { return order_; }

    /// Entry (k, n); zero outside the band.
    double entry(std::size_t k, std::size_t n) const;

    /// Stored diagonal at |offset|: band(o)[i] == entry(i, i + o).
    const std::vector<double>& band(std::size_t offset) const { return bands_[offset]; }

    /// max_k sum_n |entry(k, n)|
    double max_row_sum() const;

    /// y = K w for any element type supporting scalar multiply-add.
    template <class T>
    void apply(const T* w, T* y) const;

private:
    std::size_t size_;
    CouplingOrder order_;
    std::array<std::vector<double>, kMaxOffset + 1> bands_;
};

CouplingMatrix build_coupling(std::size_t size, CouplingOrder order, double beta, double lambda);

/// Drive phase schedule with the exact closed-form phase integral.
class ChirpSchedule {
public:
    ChirpSchedule(ResonanceMode mode, double alpha, double t0, double phase_offset = 0.0);

    ResonanceMode mode() const noexcept { return mode_; }
    double alpha() const noexcept { return alpha_; }
    double t0() const noexcept { return t0_; }
    double phase_offset() const noexcept { return offset_; }

    double frequency(double t) const;
    /// phi_d(t) = phase_offset + integral_{t0}^{t} omega_d
    double phase(double t) const;

private:
    ResonanceMode mode_;
    double alpha_;
    double t0_;
    double offset_;
    double scale_;  // 1 for fundamental, 1/2 for subharmonic
};

struct DrivePhase {
    double omega_d;
    double phi_d;
};

/// Throws ConfigError if t < schedule.t0().
DrivePhase drive_phase(const ChirpSchedule& schedule, double t);

// ---------------------------------------------------------------------------

template <class T>
void CouplingMatrix::apply(const T* w, T* y) const {
    const std::size_t n = size_;
    const auto& d0 = bands_[0];
    for (std::size_t i = 0; i < n; ++i) y[i] = d0[i] * w[i];
    for (std::size_t o = 1; o <= kMaxOffset; ++o) {
        const auto& d = bands_[o];
        for (std::size_t i = 0; i < d.size(); ++i) {
            y[i] += d[i] * w[i + o];
            y[i + o] += d[i] * w[i];
        }
    }
}

}  // namespace chirp
