#include "chirp/threshold.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "chirp/error.hpp"

namespace chirp {

std::string_view to_string(Regime regime) {
    return regime == Regime::Classical ? "classical" : "quantum";
}

Regime classify(double P1_tilde, double P2) {
    return P2 < P1_tilde + 1.0 ? Regime::Classical : Regime::Quantum;
}

TheoryThreshold theory_threshold(double P2) {
    if (!(P2 > 0.0)) throw ConfigError("theory_threshold: P2 must be > 0");
    TheoryThreshold t;
    t.classical = 0.82 / std::sqrt(P2);
    t.quantum = 0.79;
    t.classical_line_regime = classify(t.classical, P2);
    t.quantum_line_regime = classify(t.quantum, P2);
    return t;
}

PhysicalParams realize_params(double P1_tilde, double P2, double alpha, double lambda) {
    if (!(alpha > 0.0) || !(lambda > 0.0)) throw ConfigError("realize_params: alpha and lambda must be > 0");
    if (!(P2 > 0.0) || !(P1_tilde >= 0.0)) {
        throw ConfigError("realize_params: targets must be positive");
    }
    const double gamma = 0.5 * P2 * std::sqrt(alpha);
    PhysicalParams p;
    p.alpha = alpha;
    p.lambda = lambda;
    p.beta = 8.0 / 3.0 * (gamma + 5.0 / 12.0 * lambda * lambda);
    p.epsilon = std::sqrt(P1_tilde * std::sqrt(2.0 * alpha) * 9.0 / (8.0 * lambda));
    p.mode = ResonanceMode::Subharmonic2;
    if (p.epsilon * lambda >= 1.0 || std::abs(p.beta) >= 1.0) {
        throw ConfigError("realize_params: (P1_tilde, P2) = (" + std::to_string(P1_tilde) + ", " +
                          std::to_string(P2) + ") leaves the weak-nonlinearity domain (epsilon*lambda = " +
                          std::to_string(p.epsilon * lambda) + ", beta = " + std::to_string(p.beta) + ")");
    }
    return p;
}

double threshold_tau_end(double P2) { return std::max(10.0, 3.0 * P2); }

std::size_t threshold_basis_size(double P2) {
    const double nbar = threshold_tau_end(P2) / P2;
    return std::max<std::size_t>(40, static_cast<std::size_t>(std::ceil(2.0 * nbar)) + 40);
}

ThresholdPoint bisect_threshold(const CaptureFunction& capture, double guess, const BisectionOptions& options) {
    if (!(guess > 0.0)) throw ConfigError("bisect_threshold: guess must be > 0");
    if (!(options.prescan_factor > 1.0)) throw ConfigError("bisect_threshold: prescan_factor must be > 1");
    if (!(options.tol > 0.0)) throw ConfigError("bisect_threshold: tol must be > 0");

    ThresholdPoint point;
    auto eval = [&](double x) {
        const double c = capture(x);
        point.capture_curve.emplace_back(x, c);
        return c;
    };

    double lo = guess;
    double hi = guess;
    double c_lo = eval(guess);
    double c_hi = c_lo;
    bool bracketed = false;
    if (c_lo < 0.5) {
        for (std::size_t i = 0; i < options.max_prescan; ++i) {
            hi = lo * options.prescan_factor;
            c_hi = eval(hi);
            if (c_hi < c_lo - options.monotone_slack) {
                throw NumericalGuardError("non_monotone_bracket",
                                          "capture fell from " + std::to_string(c_lo) + " to " +
                                              std::to_string(c_hi) + " while raising P1_tilde to " +
                                              std::to_string(hi) + "; retry with a finer pre-scan");
            }
            if (c_hi >= 0.5) {
                bracketed = true;
                break;
            }
            lo = hi;
            c_lo = c_hi;
        }
    } else {
        c_hi = c_lo;
        for (std::size_t i = 0; i < options.max_prescan; ++i) {
            lo = hi / options.prescan_factor;
            c_lo = eval(lo);
            if (c_lo > c_hi + options.monotone_slack) {
                throw NumericalGuardError("non_monotone_bracket",
                                          "capture rose from " + std::to_string(c_hi) + " to " +
                                              std::to_string(c_lo) + " while lowering P1_tilde to " +
                                              std::to_string(lo) + "; retry with a finer pre-scan");
            }
            if (c_lo < 0.5) {
                bracketed = true;
                break;
            }
            hi = lo;
            c_hi = c_lo;
        }
    }
    if (!bracketed) {
        throw NumericalGuardError("non_monotone_bracket", "no 50% crossing found within " +
                                                              std::to_string(options.max_prescan) +
                                                              " pre-scan steps from " + std::to_string(guess));
    }

    while (hi - lo > options.tol) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid) >= 0.5) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    point.P1_tilde_cr = 0.5 * (lo + hi);
    return point;
}

double quantum_capture(double P1_tilde, double P2, double alpha, const ThresholdRunConfig& config) {
    Problem problem;
    problem.params = realize_params(P1_tilde, P2, alpha, config.lambda);
    problem.basis_size = config.basis_size > 0 ? config.basis_size : threshold_basis_size(P2);
    problem.order = config.order;
    problem.phase_offset = config.phase_offset;

    IntegratorConfig integrator = config.integrator;
    integrator.tau_end = threshold_tau_end(P2);
    integrator.snapshot_taus.clear();
    const auto trajectory = propagate(problem, integrator);
    // Measured against the realised P2 (equal to the target up to rounding).
    const double realized_P2 = dimensionless(problem.params).P2;
    return capture_probability(trajectory.final_state, integrator.tau_end, realized_P2, config.cutoff);
}

ThresholdPoint quantum_threshold(double P2, const ThresholdRunConfig& config) {
    const double alpha = config.alpha_for(P2);
    const auto theory = theory_threshold(P2);
    const double guess = std::max(theory.classical, theory.quantum);
    ThresholdPoint point = bisect_threshold(
        [&](double p1t) { return quantum_capture(p1t, P2, alpha, config); }, guess, config.bisection);
    point.P2 = P2;
    point.regime = classify(point.P1_tilde_cr, P2);
    point.alpha = alpha;
    point.lambda = config.lambda;
    return point;
}

std::vector<ThresholdMapEntry> threshold_map(const std::vector<double>& P2s, const ThresholdRunConfig& config,
                                             std::size_t threads) {
    if (P2s.empty()) throw ConfigError("threshold_map: empty P2 list");
    std::vector<ThresholdMapEntry> entries(P2s.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < P2s.size(); i = next++) {
            entries[i].P2 = P2s[i];
            try {
                entries[i].point = quantum_threshold(P2s[i], config);
            } catch (const std::exception& e) {
                entries[i].error = e.what();
            }
        }
    };
    const std::size_t count = std::clamp<std::size_t>(threads, 1, P2s.size());
    if (count == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    }
    return entries;
}

IsomorphismResult isomorphism_check(const Problem& subharmonic, const IntegratorConfig& integrator,
                                    const CutoffRule& cutoff) {
    if (subharmonic.params.mode != ResonanceMode::Subharmonic2) {
        throw ConfigError("isomorphism_check: parameters must be in subharmonic2 mode");
    }
    Problem twin = subharmonic;
    twin.params = effective_twin(subharmonic.params);

    IsomorphismResult r;
    r.subharmonic = propagate(subharmonic, integrator);
    r.effective = propagate(twin, integrator);
    const double P2 = dimensionless(subharmonic.params).P2;
    r.capture_subharmonic = capture_probability(r.subharmonic.final_state, integrator.tau_end, P2, cutoff);
    r.capture_effective = capture_probability(r.effective.final_state, integrator.tau_end, P2, cutoff);
    r.delta = r.capture_subharmonic - r.capture_effective;
    return r;
}

}  // namespace chirp
