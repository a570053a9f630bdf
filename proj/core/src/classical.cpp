#include "chirp/classical.hpp"

#include <cmath>
#include <string>

#include "chirp/error.hpp"
#include "chirp/propagator.hpp"

namespace chirp {

PhaseVelocity classical_rhs(const ClassicalState& state, const PhysicalParams& params,
                            const ChirpSchedule& schedule) {
    const double x = state.x;
    const double force = drive_amplitude(params) * std::cos(schedule.phase(state.t));
    return {state.p, -x - params.lambda * x * x - params.beta * x * x * x - force};
}

double classical_energy(double x, double p, const PhysicalParams& params) {
    const double x2 = x * x;
    return 0.5 * (p * p + x2) + params.lambda * x2 * x / 3.0 + 0.25 * params.beta * x2 * x2;
}

double autoresonant_energy(double tau, const PhysicalParams& params) {
    const double P2 = dimensionless(params).P2;
    if (!(P2 > 0.0)) throw ConfigError("autoresonant_energy: needs positive anharmonicity");
    const double action = std::max(0.0, tau / P2);
    return action + anharmonicity(params.beta, params.lambda) * action * action;
}

ClassicalResult classical_capture(const PhysicalParams& params, const ClassicalRunConfig& config) {
    params.validate();
    if (!(config.dt > 0.0) || !(config.sample_interval > 0.0)) {
        throw ConfigError("classical run: dt and sample_interval must be > 0");
    }
    constexpr double kTau0 = -10.0;
    if (!(config.tau_end > kTau0)) throw ConfigError("classical run: tau_end must exceed -10");

    const double alpha = params.alpha;
    const ChirpSchedule schedule(params.mode, alpha, fast_time(kTau0, alpha), config.phase_offset);
    ClassicalState s = config.initial;
    s.t = schedule.t0();

    ClassicalResult result;
    auto& tr = result.trace;
    double energy_integral = 0.0;  // fast time
    std::vector<double> cumulative;
    auto record = [&](double tau) {
        cumulative.push_back(energy_integral * std::sqrt(alpha));
        tr.taus.push_back(tau);
        tr.x.push_back(s.x);
        tr.p.push_back(s.p);
        tr.energy.push_back(classical_energy(s.x, s.p, params));
    };
    record(kTau0);

    auto rk4 = [&](double h) {
        const auto k1 = classical_rhs(s, params, schedule);
        ClassicalState m{s.x + 0.5 * h * k1.dx, s.p + 0.5 * h * k1.dp, s.t + 0.5 * h};
        const auto k2 = classical_rhs(m, params, schedule);
        m = {s.x + 0.5 * h * k2.dx, s.p + 0.5 * h * k2.dp, s.t + 0.5 * h};
        const auto k3 = classical_rhs(m, params, schedule);
        m = {s.x + h * k3.dx, s.p + h * k3.dp, s.t + h};
        const auto k4 = classical_rhs(m, params, schedule);
        s.x += h / 6.0 * (k1.dx + 2.0 * (k2.dx + k3.dx) + k4.dx);
        s.p += h / 6.0 * (k1.dp + 2.0 * (k2.dp + k3.dp) + k4.dp);
    };

    const auto samples = static_cast<std::size_t>(
        std::ceil((config.tau_end - kTau0) / config.sample_interval - 1e-9));
    for (std::size_t j = 1; j <= samples && !result.diverged; ++j) {
        const double tau = std::min(config.tau_end, kTau0 + static_cast<double>(j) * config.sample_interval);
        const double t_start = s.t;
        const double span = fast_time(tau, alpha) - t_start;
        const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / config.dt - 1e-9)));
        const double h = span / static_cast<double>(steps);
        double e_prev = classical_energy(s.x, s.p, params);
        for (std::size_t k = 0; k < steps; ++k) {
            rk4(h);
            s.t = t_start + static_cast<double>(k + 1) * h;
            const double e = classical_energy(s.x, s.p, params);
            energy_integral += 0.5 * h * (e_prev + e);
            e_prev = e;
            if (!std::isfinite(s.x) || !std::isfinite(s.p) || std::abs(s.x) > config.divergence_bound) {
                result.diverged = true;
                break;
            }
        }
        if (!result.diverged) record(tau);
    }

    result.target_energy = autoresonant_energy(config.tau_end, params);
    if (result.diverged) return result;

    tr.smoothed_energy = smooth_integrated(tr.taus, cumulative, std::max(config.window, 2.0 * config.sample_interval));
    result.final_smoothed_energy = tr.smoothed_energy.back();
    result.captured = result.final_smoothed_energy > 0.5 * result.target_energy;
    return result;
}

ThresholdPoint classical_threshold(double P2, const ClassicalThresholdConfig& config) {
    if (!(P2 > 0.0) || P2 > 0.3) {
        throw ConfigError("classical_threshold: P2 = " + std::to_string(P2) +
                          " outside the classical range (0, 0.3]");
    }
    ClassicalRunConfig run = config.run;
    run.tau_end = threshold_tau_end(P2);
    const double guess = theory_threshold(P2).classical;
    ThresholdPoint point = bisect_threshold(
        [&](double p1t) {
            const auto params = realize_params(p1t, P2, config.alpha, config.lambda);
            return classical_capture(params, run).captured ? 1.0 : 0.0;
        },
        guess, config.bisection);
    point.P2 = P2;
    point.regime = classify(point.P1_tilde_cr, P2);
    point.alpha = config.alpha;
    point.lambda = config.lambda;
    return point;
}

}  // namespace chirp
