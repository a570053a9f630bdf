#pragma once

// Classical limit: Hamilton's equations of
//   H = (p^2 + x^2)/2 + lambda x^3/3 + beta x^4/4 + eps x cos(phi_d(t))
// integrated with the same RK4 scheme and slow-time conventions as the
// quantum propagator.

#include <cstddef>
#include <vector>

#include "chirp/model.hpp"
#include "chirp/threshold.hpp"

namespace chirp {

struct ClassicalState {
    double x = 0.0;
    double p = 0.0;
    double t = 0.0;

    bool operator==(const ClassicalState&) const = default;
};

struct PhaseVelocity {
    double dx;
    double dp;
};

/// dx/dt = p, dp/dt = -x - lambda x^2 - beta x^3 - drive cos(phi_d(t)),
/// drive chosen by params.mode as in the quantum problem.
PhaseVelocity classical_rhs(const ClassicalState& state, const PhysicalParams& params,
                            const ChirpSchedule& schedule);

/// Undriven energy (p^2 + x^2)/2 + lambda x^3/3 + beta x^4/4.
double classical_energy(double x, double p, const PhysicalParams& params);

/// Energy of the ideally locked oscillator at slow time tau: I + gamma I^2
/// with I = tau / P2 (zero before the resonance crossing).
double autoresonant_energy(double tau, const PhysicalParams& params);

struct ClassicalRunConfig {
    double tau_end = 10.0;
    double dt = 0.01;
    double sample_interval = 0.01;
    double window = kSmoothingWindow;
    double phase_offset = 0.0;
    ClassicalState initial{};  // t is replaced by -10/sqrt(alpha)
    double divergence_bound = 1e6;

    bool operator==(const ClassicalRunConfig&) const = default;
};

struct ClassicalTrace {
    std::vector<double> taus;
    std::vector<double> x;
    std::vector<double> p;
    std::vector<double> energy;
    std::vector<double> smoothed_energy;
};

struct ClassicalResult {
    bool captured = false;
    bool diverged = false;
    double final_smoothed_energy = 0.0;
    double target_energy = 0.0;  // autoresonant_energy(tau_end)
    ClassicalTrace trace;
};

/// RK4 run from tau = -10 to tau_end. Captured when the smoothed energy at
/// tau_end exceeds half the autoresonant energy; divergence counts as not captured.
ClassicalResult classical_capture(const PhysicalParams& params, const ClassicalRunConfig& config);

/// Defaults keep the locked orbit weakly nonlinear up to tau_end: the action
/// reaches tau_end/P2, so lambda * amplitude must stay small, while a slow
/// chirp keeps the drive epsilon small for the same P1_tilde.
struct ClassicalThresholdConfig {
    double alpha = 1e-7;
    double lambda = 0.01;
    ClassicalRunConfig run;  // tau_end is overridden per column
    BisectionOptions bisection;
};

/// Bisected classical threshold in P1_tilde for P2 <= 0.3.
ThresholdPoint classical_threshold(double P2, const ClassicalThresholdConfig& config);

}  // namespace chirp
