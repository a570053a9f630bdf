#pragma once

// Reductions of a sampled trajectory: boxcar smoothing, capture probability
// and ladder step-time detection.

#include <cstddef>
#include <span>
#include <vector>

#include "chirp/model.hpp"
#include "chirp/propagator.hpp"

namespace chirp {

struct TrajectorySeries {
    std::vector<double> taus;
    std::vector<double> energies;
    std::vector<double> energy_integrals;  // optional: cumulative integral of energy in tau
    std::vector<std::vector<double>> populations;

    static TrajectorySeries from(const Trajectory& trajectory);
};

constexpr double kSmoothingWindow = 0.1;

/// Centered moving average of the piecewise-linear interpolant over
/// [tau - window/2, tau + window/2], clipped to the sampled range at the ends.
/// Requires window >= 2 * (largest sample spacing).
std::vector<double> smooth(std::span<const double> taus, std::span<const double> values,
                           double window = kSmoothingWindow);

/// Window average from a cumulative integral known exactly at the sample
/// points (linear in between), clipped at the ends like smooth().
std::vector<double> smooth_integrated(std::span<const double> taus, std::span<const double> cumulative,
                                      double window = kSmoothingWindow);

/// Smooths the energy column, from energy_integrals when present (that path
/// sees every integrator step rather than only the samples). Populations are
/// carried over unchanged.
TrajectorySeries smooth(const TrajectorySeries& series, double window = kSmoothingWindow);

/// Which levels count as phase-locked when measuring capture.
struct CutoffRule {
    enum class Kind { HalfIdealLevel, FixedLevel };
    Kind kind = Kind::HalfIdealLevel;
    std::size_t level = 1;  // used by FixedLevel

    static CutoffRule half_ideal_level() { return {}; }
    static CutoffRule fixed(std::size_t n) { return {Kind::FixedLevel, n}; }

    /// max(1, ceil(nbar/2)) with nbar = tau_f / P2, or the fixed level.
    std::size_t cutoff(double tau_f, double P2) const;

    bool operator==(const CutoffRule&) const = default;
};

/// Sum of |c_n|^2 over n >= cutoff. Throws ConfigError if tau_f <= 0 or the
/// cutoff does not fit in the basis.
double capture_probability(std::span<const double> populations, double tau_f, double P2,
                           const CutoffRule& rule = {});
double capture_probability(const StateVector& state, double tau_f, double P2,
                           const CutoffRule& rule = {});

/// Step times of a ladder-climbing staircase. Rungs are detected where the
/// smoothed energy first rises through (E_n + E_{n+1})/2. Returns an empty
/// list unless the rise is staircase-like: the stretch leading up to each
/// crossing (from the previous crossing, or from the first sample) must last
/// at least two smoothing windows and, over its middle half, stay within half
/// a level gap. Each reported time is where the riser passes halfway between
/// the plateau means on either side (the ladder midpoint itself is reached
/// late when capture is partial).
std::vector<double> ladder_step_times(std::span<const double> taus, std::span<const double> smoothed,
                                      const EnergyLadder& ladder, double window = kSmoothingWindow);

}  // namespace chirp
