#pragma once

// Phase-locking threshold in the (P1_tilde, P2) plane for the 1:2 subharmonic
// resonance: parameter realisation, bracketing + bisection on capture
// probability, and the limiting theory lines.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chirp/model.hpp"
#include "chirp/observables.hpp"
#include "chirp/propagator.hpp"

namespace chirp {

enum class Regime { Classical, Quantum };

std::string_view to_string(Regime regime);

/// Classical side of the separator P2 = P1_tilde + 1 when P2 < P1_tilde + 1.
Regime classify(double P1_tilde, double P2);

struct TheoryThreshold {
    double classical;  // 0.82 / sqrt(P2)
    double quantum;    // 0.79
    Regime classical_line_regime;
    Regime quantum_line_regime;
};

TheoryThreshold theory_threshold(double P2);

/// Subharmonic parameters reproducing (P1_tilde, P2) for the chosen alpha and
/// lambda. Throws ConfigError outside the weak-nonlinearity domain
/// (epsilon lambda >= 1 or |beta| >= 1) or for non-positive inputs.
PhysicalParams realize_params(double P1_tilde, double P2, double alpha, double lambda);

/// Slow time at which capture is measured: max(10, 3 P2).
double threshold_tau_end(double P2);

/// Basis size large enough for the ideal ladder level at tau_end:
/// max(40, ceil(2 nbar) + 40).
std::size_t threshold_basis_size(double P2);

struct ThresholdPoint {
    double P2 = 0.0;
    double P1_tilde_cr = 0.0;
    std::vector<std::pair<double, double>> capture_curve;  // (P1_tilde, capture), evaluation order
    Regime regime = Regime::Classical;
    double alpha = 0.0;
    double lambda = 0.0;
};

struct BisectionOptions {
    double tol = 0.02;            // final bracket width in P1_tilde
    double prescan_factor = 1.5;  // geometric bracketing step
    std::size_t max_prescan = 16;
    double monotone_slack = 0.05;  // tolerated capture decrease while bracketing

    bool operator==(const BisectionOptions&) const = default;
};

using CaptureFunction = std::function<double(double P1_tilde)>;

/// Generic bracketing + bisection for the 50% crossing of capture(P1_tilde),
/// starting from guess. Throws NumericalGuardError("non_monotone_bracket")
/// if the capture curve runs the wrong way while bracketing, or if no bracket
/// is found within max_prescan steps.
ThresholdPoint bisect_threshold(const CaptureFunction& capture, double guess,
                                const BisectionOptions& options = {});

/// Quantum run settings for threshold work.
struct ThresholdRunConfig {
    double alpha = 1e-6;
    /// Columns with P2 <= alpha_coarse_max_P2 use alpha_coarse instead (their
    /// basis is large, so the finer chirp is expensive).
    double alpha_coarse = 1e-4;
    double alpha_coarse_max_P2 = 0.1;
    double lambda = 0.05;
    std::size_t basis_size = 0;  // 0 selects threshold_basis_size(P2)
    CouplingOrder order = CouplingOrder::Full;
    double phase_offset = 0.0;
    IntegratorConfig integrator;  // tau_end is overridden per column
    CutoffRule cutoff;
    BisectionOptions bisection;

    double alpha_for(double P2) const { return P2 <= alpha_coarse_max_P2 ? alpha_coarse : alpha; }
};

/// Capture probability of the subharmonic problem realised at (P1_tilde, P2)
/// with the given alpha.
double quantum_capture(double P1_tilde, double P2, double alpha, const ThresholdRunConfig& config);

/// Bisected quantum threshold for one P2 column.
ThresholdPoint quantum_threshold(double P2, const ThresholdRunConfig& config);

struct ThresholdMapEntry {
    double P2 = 0.0;
    std::optional<ThresholdPoint> point;
    std::string error;  // set when point is empty
};

/// Threshold per P2 column; per-column failures are recorded and the scan
/// continues. Columns run on up to `threads` workers; output order follows P2s.
std::vector<ThresholdMapEntry> threshold_map(const std::vector<double>& P2s,
                                             const ThresholdRunConfig& config,
                                             std::size_t threads = 1);

struct IsomorphismResult {
    double capture_subharmonic = 0.0;
    double capture_effective = 0.0;
    double delta = 0.0;  // subharmonic - effective
    Trajectory subharmonic;
    Trajectory effective;
};

/// Runs the subharmonic problem and its effective-fundamental twin with the
/// same basis, coupling order and integrator settings; capture at tau_end.
IsomorphismResult isomorphism_check(const Problem& subharmonic, const IntegratorConfig& integrator,
                                    const CutoffRule& cutoff = {});

}  // namespace chirp
