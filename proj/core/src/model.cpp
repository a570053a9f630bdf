#include "chirp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chirp/error.hpp"

namespace chirp {

std::string_view to_string(ResonanceMode mode) {
    switch (mode) {
        case ResonanceMode::Fundamental: return "fundamental";
        case ResonanceMode::Subharmonic2: return "subharmonic2";
        case ResonanceMode::EffectiveFundamental: return "effective_fundamental";
    }
    return "unknown";
}

ResonanceMode parse_resonance_mode(std::string_view text) {
    if (text == "fundamental") return ResonanceMode::Fundamental;
    if (text == "subharmonic2") return ResonanceMode::Subharmonic2;
    if (text == "effective_fundamental") return ResonanceMode::EffectiveFundamental;
    throw ConfigError("unknown resonance mode '" + std::string(text) + "'");
}

std::string_view to_string(CouplingOrder order) {
    return order == CouplingOrder::Linear ? "linear" : "full";
}

CouplingOrder parse_coupling_order(std::string_view text) {
    if (text == "linear") return CouplingOrder::Linear;
    if (text == "full") return CouplingOrder::Full;
    throw ConfigError("unknown coupling order '" + std::string(text) + "'");
}

void PhysicalParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be > 0");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be >= 0");
    if (!std::isfinite(beta) || !std::isfinite(lambda)) throw ConfigError("beta and lambda must be finite");
}

double anharmonicity(double beta, double lambda) {
    return 3.0 / 8.0 * beta - 5.0 / 12.0 * lambda * lambda;
}

double effective_drive(const PhysicalParams& params) {
    return 8.0 / 9.0 * params.epsilon * params.epsilon * params.lambda;
}

double drive_amplitude(const PhysicalParams& params) {
    return params.mode == ResonanceMode::EffectiveFundamental ? effective_drive(params)
                                                              : params.epsilon;
}

PhysicalParams effective_twin(const PhysicalParams& subharmonic) {
    PhysicalParams twin = subharmonic;
    twin.mode = ResonanceMode::EffectiveFundamental;
    return twin;
}

DimensionlessParams dimensionless(const PhysicalParams& params) {
    if (!(params.alpha > 0.0)) throw ConfigError("alpha must be > 0");
    const double gamma = anharmonicity(params.beta, params.lambda);
    const double sqrt_alpha = std::sqrt(params.alpha);

    DimensionlessParams d;
    d.P1 = params.epsilon / std::sqrt(2.0 * params.alpha);
    d.P2 = 2.0 * gamma / sqrt_alpha;
    d.P1_tilde = 8.0 / 9.0 * params.epsilon * params.lambda * d.P1;
    // sqrt of a negative P2 (negative anharmonicity) is reported as NaN.
    d.mu = 0.5 * d.P1 * std::sqrt(d.P2);
    d.mu_tilde = 0.5 * d.P1_tilde * std::sqrt(d.P2);
    d.T_NL = 2.0 * gamma / params.alpha;
    d.T_R = params.epsilon > 0.0 ? std::sqrt(2.0) / params.epsilon
                                 : std::numeric_limits<double>::infinity();
    d.T_S = 1.0 / sqrt_alpha;
    return d;
}

EnergyLadder::EnergyLadder(double beta, double lambda, std::size_t size)
    : gamma_(anharmonicity(beta, lambda)) {
    if (size < 2) throw ConfigError("basis size must be >= 2");
    levels_.resize(size);
    const double shift = 3.0 / 16.0 * beta - 11.0 / 72.0 * lambda * lambda;
    for (std::size_t n = 0; n < size; ++n) {
        const double nn = static_cast<double>(n);
        levels_[n] = nn + 0.5 + gamma_ * (nn * nn + nn) + shift;
    }
}

EnergyLadder build_ladder(const PhysicalParams& params, std::size_t size) {
    return EnergyLadder(params.beta, params.lambda, size);
}

CouplingMatrix::CouplingMatrix(std::size_t size, CouplingOrder order, double beta, double lambda)
    : size_(size), order_(order) {
    const std::size_t min_size = order == CouplingOrder::Full ? 4 : 2;
    if (size < min_size) {
        throw ConfigError("basis size " + std::to_string(size) + " too small for " +
                          std::string(to_string(order)) + " coupling (need >= " +
                          std::to_string(min_size) + ")");
    }
    for (std::size_t o = 0; o <= kMaxOffset; ++o) bands_[o].assign(size - o, 0.0);

    // Linear part: entry(n, n+1) = sqrt((n+1)/2).
    for (std::size_t n = 0; n + 1 < size; ++n) {
        bands_[1][n] = std::sqrt((n + 1.0) / 2.0);
    }
    if (order == CouplingOrder::Linear) return;

    // lambda Q: diagonal -(2n+1)/2, offset 2 sqrt((n+1)(n+2))/6.
    for (std::size_t n = 0; n < size; ++n) {
        const double nn = static_cast<double>(n);
        bands_[0][n] += lambda * (-3.0 * (2.0 * nn + 1.0) / 6.0);
        if (n + 2 < size) bands_[2][n] += lambda * std::sqrt((nn + 1.0) * (nn + 2.0)) / 6.0;
    }
    // beta R: offset 1 -2(2n+3)sqrt(n+1), offset 3 3 sqrt((n+1)(n+2)(n+3)), over 24 sqrt(2).
    const double r_norm = 1.0 / (24.0 * std::sqrt(2.0));
    for (std::size_t n = 0; n < size; ++n) {
        const double nn = static_cast<double>(n);
        if (n + 1 < size) {
            bands_[1][n] += beta * r_norm * (-2.0 * (2.0 * nn + 3.0) * std::sqrt(nn + 1.0));
        }
        if (n + 3 < size) {
            bands_[3][n] += beta * r_norm * 3.0 * std::sqrt((nn + 1.0) * (nn + 2.0) * (nn + 3.0));
        }
    }
}

double CouplingMatrix::entry(std::size_t k, std::size_t n) const {
    const std::size_t lo = std::min(k, n);
    const std::size_t off = std::max(k, n) - lo;
    if (off > kMaxOffset) return 0.0;
    return bands_[off][lo];
}

double CouplingMatrix::max_row_sum() const {
    std::vector<double> sums(size_, 0.0);
    for (std::size_t i = 0; i < size_; ++i) sums[i] = std::abs(bands_[0][i]);
    for (std::size_t o = 1; o <= kMaxOffset; ++o) {
        for (std::size_t i = 0; i < bands_[o].size(); ++i) {
            sums[i] += std::abs(bands_[o][i]);
            sums[i + o] += std::abs(bands_[o][i]);
        }
    }
    return *std::max_element(sums.begin(), sums.end());
}

CouplingMatrix build_coupling(std::size_t size, CouplingOrder order, double beta, double lambda) {
    return CouplingMatrix(size, order, beta, lambda);
}

ChirpSchedule::ChirpSchedule(ResonanceMode mode, double alpha, double t0, double phase_offset)
    : mode_(mode),
      alpha_(alpha),
      t0_(t0),
      offset_(phase_offset),
      scale_(mode == ResonanceMode::Subharmonic2 ? 0.5 : 1.0) {}

double ChirpSchedule::frequency(double t) const { return scale_ * (1.0 + alpha_ * t); }

double ChirpSchedule::phase(double t) const {
    // (t - t0) + alpha (t^2 - t0^2)/2, factored to avoid cancellation.
    const double dt = t - t0_;
    return offset_ + scale_ * dt * (1.0 + 0.5 * alpha_ * (t + t0_));
}

DrivePhase drive_phase(const ChirpSchedule& schedule, double t) {
    if (t < schedule.t0()) throw ConfigError("drive_phase: t precedes schedule start");
    return {schedule.frequency(t), schedule.phase(t)};
}

}  // namespace chirp
