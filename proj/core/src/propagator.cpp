#include "chirp/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chirp/error.hpp"

namespace chirp {

namespace {

constexpr Complex kMinusI{0.0, -1.0};
constexpr double kInitialSlowTime = -10.0;

}  // namespace

double StateVector::norm() const {
    double s = 0.0;
    for (const auto& c : amps) s += std::norm(c);
    return s;
}

std::vector<double> StateVector::populations() const {
    std::vector<double> p(amps.size());
    std::transform(amps.begin(), amps.end(), p.begin(), [](const Complex& c) { return std::norm(c); });
    return p;
}

StateVector initial_state(std::size_t size, double alpha) {
    if (size < 2) throw ConfigError("basis size must be >= 2");
    if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
    StateVector s;
    s.amps.assign(size, Complex{});
    s.amps[0] = 1.0;
    s.t = fast_time(kInitialSlowTime, alpha);
    return s;
}

std::string_view to_string(Picture picture) {
    return picture == Picture::Schrodinger ? "schrodinger" : "interaction";
}

Picture parse_picture(std::string_view text) {
    if (text == "schrodinger") return Picture::Schrodinger;
    if (text == "interaction") return Picture::Interaction;
    throw ConfigError("unknown picture '" + std::string(text) + "'");
}

void rhs(const StateVector& state, const EnergyLadder& ladder, const CouplingMatrix& coupling,
         double drive, const ChirpSchedule& schedule, std::span<Complex> out) {
    const std::size_t n = state.size();
    if (ladder.size() != n || coupling.size() != n || out.size() != n) {
        throw ConfigError("rhs: dimension mismatch");
    }
    const double f = drive * std::cos(schedule.phase(state.t));
    coupling.apply(state.amps.data(), out.data());
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = kMinusI * (ladder[i] * state.amps[i] + f * out[i]);
    }
}

std::vector<Complex> rhs(const StateVector& state, const EnergyLadder& ladder,
                         const CouplingMatrix& coupling, double drive,
                         const ChirpSchedule& schedule) {
    std::vector<Complex> out(state.size());
    rhs(state, ladder, coupling, drive, schedule, out);
    return out;
}

Propagator::Propagator(const Problem& problem, Picture picture)
    : problem_(problem),
      ladder_(problem.params.beta, problem.params.lambda, problem.basis_size),
      coupling_(problem.basis_size, problem.order, problem.params.beta, problem.params.lambda),
      schedule_(problem.params.mode, problem.params.alpha,
                fast_time(kInitialSlowTime, problem.params.alpha), problem.phase_offset),
      drive_(drive_amplitude(problem.params)),
      picture_(picture) {
    problem.params.validate();
    const std::size_t n = problem.basis_size;
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &tmp_, &w_, &u0_, &uh_, &u1_, &rot_}) v->assign(n, Complex{});
}

StateVector Propagator::initial_state() const {
    return chirp::initial_state(problem_.basis_size, problem_.params.alpha);
}

double Propagator::default_dt() const {
    const std::size_t n = ladder_.size();
    const double e_max = std::max(std::abs(ladder_[n - 1]), std::abs(ladder_[0]));
    if (picture_ == Picture::Schrodinger) return 0.1 / e_max;

    // Fastest residual phase: widest coupled gap at the top of the basis plus
    // the drive frequency, taken at the largest slow time a run is likely to reach.
    const std::size_t lo = n > CouplingMatrix::kMaxOffset ? n - 1 - CouplingMatrix::kMaxOffset : 0;
    const double gap = std::abs(ladder_[n - 1] - ladder_[lo]);
    const double omega = std::abs(schedule_.frequency(fast_time(100.0, problem_.params.alpha)));
    double dt = 0.1 / (gap + omega);
    const double coupling_rate = drive_ * coupling_.max_row_sum();
    if (coupling_rate > 0.0) dt = std::min(dt, 0.08 / coupling_rate);
    return dt;
}

void Propagator::check_stability(double dt) const {
    if (picture_ != Picture::Schrodinger) return;
    const std::size_t n = ladder_.size();
    const double e_max = std::max(std::abs(ladder_[n - 1]), std::abs(ladder_[0]));
    if (std::abs(dt) * e_max >= 0.5) {
        throw NumericalGuardError("stability", "dt * max(E_n) = " + std::to_string(std::abs(dt) * e_max) +
                                                   " must be < 0.5 in the Schrodinger picture");
    }
}

void Propagator::phases(double t, std::vector<Complex>& u) const {
    const auto& e = ladder_.levels();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double arg = -e[i] * t;
        u[i] = Complex(std::cos(arg), std::sin(arg));
    }
}

void Propagator::derivative(double t, const std::vector<Complex>& y, std::vector<Complex>& out) {
    const double f = drive_ * std::cos(schedule_.phase(t));
    coupling_.apply(y.data(), out.data());
    const auto& e = ladder_.levels();
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = kMinusI * (e[i] * y[i] + f * out[i]);
}

void Propagator::derivative_interaction(double drive_factor, const std::vector<Complex>& u,
                                        const std::vector<Complex>& a, std::vector<Complex>& out) {
    for (std::size_t i = 0; i < a.size(); ++i) w_[i] = u[i] * a[i];
    coupling_.apply(w_.data(), out.data());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = kMinusI * drive_factor * std::conj(u[i]) * out[i];
    }
}

double Propagator::level_energy(const std::vector<Complex>& y) const {
    double e = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) e += ladder_[i] * std::norm(y[i]);
    return e;
}

void Propagator::rk4_steps(std::vector<Complex>& y, double t_start, double h, std::size_t count,
                           double* energy_integral) {
    const std::size_t n = y.size();
    double e_prev = energy_integral ? level_energy(y) : 0.0;
    const bool interaction = picture_ == Picture::Interaction;
    if (interaction) {
        // Phases advance by a fixed half-step rotation; resynchronised with
        // exact evaluation every kResync steps to bound rounding growth.
        phases(t_start, u0_);
        phases(0.5 * h, rot_);
    }
    constexpr std::size_t kResync = 256;

    for (std::size_t s = 0; s < count; ++s) {
        const double t = t_start + static_cast<double>(s) * h;
        const double th = t + 0.5 * h;
        const double t1 = t_start + static_cast<double>(s + 1) * h;

        if (interaction) {
            if ((s + 1) % kResync == 0) {
                phases(th, uh_);
                phases(t1, u1_);
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    uh_[i] = u0_[i] * rot_[i];
                    u1_[i] = uh_[i] * rot_[i];
                }
            }
            const double f0 = drive_ * std::cos(schedule_.phase(t));
            const double fh = drive_ * std::cos(schedule_.phase(th));
            const double f1 = drive_ * std::cos(schedule_.phase(t1));
            derivative_interaction(f0, u0_, y, k1_);
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k1_[i];
            derivative_interaction(fh, uh_, tmp_, k2_);
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k2_[i];
            derivative_interaction(fh, uh_, tmp_, k3_);
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * k3_[i];
            derivative_interaction(f1, u1_, tmp_, k4_);
            std::swap(u0_, u1_);
        } else {
            derivative(t, y, k1_);
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k1_[i];
            derivative(th, tmp_, k2_);
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + 0.5 * h * k2_[i];
            derivative(th, tmp_, k3_);
            for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * k3_[i];
            derivative(t1, tmp_, k4_);
        }
        const double h6 = h / 6.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] += h6 * (k1_[i] + 2.0 * (k2_[i] + k3_[i]) + k4_[i]);
        }
        if (energy_integral) {
            const double e = level_energy(y);
            *energy_integral += 0.5 * h * (e_prev + e);
            e_prev = e;
        }
    }
}

void Propagator::step(StateVector& state, double dt) {
    if (state.size() != problem_.basis_size) throw ConfigError("step: state dimension mismatch");
    check_stability(dt);
    if (picture_ == Picture::Interaction) {
        // c -> a = conj(u) c, step, a -> c.
        phases(state.t, u1_);
        for (std::size_t i = 0; i < state.size(); ++i) state.amps[i] *= std::conj(u1_[i]);
        rk4_steps(state.amps, state.t, dt, 1);
        phases(state.t + dt, u1_);
        for (std::size_t i = 0; i < state.size(); ++i) state.amps[i] *= u1_[i];
    } else {
        rk4_steps(state.amps, state.t, dt, 1);
    }
    state.t += dt;
}

std::size_t Propagator::advance(StateVector& state, double t_target, double dt_max, double* energy_integral) {
    if (state.size() != problem_.basis_size) throw ConfigError("advance: state dimension mismatch");
    const double span = t_target - state.t;
    if (span == 0.0) return 0;
    if (!(std::abs(dt_max) > 0.0)) throw ConfigError("advance: dt must be nonzero");
    const auto count = static_cast<std::size_t>(std::ceil(std::abs(span) / std::abs(dt_max) - 1e-9));
    const std::size_t steps = std::max<std::size_t>(count, 1);
    const double h = span / static_cast<double>(steps);
    check_stability(h);

    if (picture_ == Picture::Interaction) {
        phases(state.t, u1_);
        for (std::size_t i = 0; i < state.size(); ++i) state.amps[i] *= std::conj(u1_[i]);
        rk4_steps(state.amps, state.t, h, steps, energy_integral);
        phases(t_target, u1_);
        for (std::size_t i = 0; i < state.size(); ++i) state.amps[i] *= u1_[i];
    } else {
        rk4_steps(state.amps, state.t, h, steps, energy_integral);
    }
    state.t = t_target;
    return steps;
}

namespace {

Sample make_sample(const StateVector& state, const EnergyLadder& ladder, double tau) {
    Sample s;
    s.tau = tau;
    s.populations = state.populations();
    for (std::size_t i = 0; i < s.populations.size(); ++i) {
        s.norm += s.populations[i];
        s.mean_energy += ladder[i] * s.populations[i];
    }
    return s;
}

void check_truncation(const Sample& s, double threshold) {
    const std::size_t n = s.populations.size();
    const std::size_t top = std::min<std::size_t>(3, n);
    double edge = 0.0;
    for (std::size_t i = n - top; i < n; ++i) edge += s.populations[i];
    if (edge > threshold) {
        throw NumericalGuardError("truncation", "population " + std::to_string(edge) +
                                                    " in the top 3 of " + std::to_string(n) +
                                                    " levels at tau = " + std::to_string(s.tau) +
                                                    "; enlarge the basis");
    }
}

struct Stop {
    double tau;
    bool sample;
    bool snapshot;
};

std::vector<Stop> build_stops(const IntegratorConfig& config) {
    const double tau0 = kInitialSlowTime;
    std::vector<Stop> stops;
    const auto count = static_cast<std::size_t>(
        std::floor((config.tau_end - tau0) / config.sample_interval + 1e-9));
    for (std::size_t j = 1; j <= count; ++j) {
        stops.push_back({tau0 + static_cast<double>(j) * config.sample_interval, true, false});
    }
    if (stops.empty() || std::abs(stops.back().tau - config.tau_end) > 1e-9 * config.sample_interval) {
        stops.push_back({config.tau_end, true, false});
    } else {
        stops.back().tau = config.tau_end;
    }
    for (double s : config.snapshot_taus) {
        if (s < tau0 || s > config.tau_end) {
            throw ConfigError("snapshot tau " + std::to_string(s) + " outside run range [" +
                              std::to_string(tau0) + ", " + std::to_string(config.tau_end) + "]");
        }
        auto it = std::find_if(stops.begin(), stops.end(), [&](const Stop& st) {
            return std::abs(st.tau - s) <= 1e-9 * config.sample_interval;
        });
        if (it != stops.end()) {
            it->snapshot = true;
        } else if (s == tau0) {
            stops.insert(stops.begin(), {tau0, false, true});
        } else {
            stops.push_back({s, false, true});
        }
    }
    std::stable_sort(stops.begin(), stops.end(), [](const Stop& a, const Stop& b) { return a.tau < b.tau; });
    return stops;
}

}  // namespace

Trajectory propagate(const Problem& problem, const IntegratorConfig& config, const SampleSink& sink) {
    if (!(config.sample_interval > 0.0)) throw ConfigError("sample_interval must be > 0");
    if (!(config.tau_end > kInitialSlowTime)) throw ConfigError("tau_end must exceed the start time -10");
    if (!(config.norm_drift_budget > 0.0)) throw ConfigError("norm_drift_budget must be > 0");

    Propagator prop(problem, config.picture);
    const double alpha = problem.params.alpha;
    const double dt = config.dt > 0.0 ? config.dt : prop.default_dt();

    Trajectory traj;
    traj.dt = dt;
    StateVector state = prop.initial_state();
    double energy_integral = 0.0;  // fast time

    auto record = [&](double tau) {
        Sample s = make_sample(state, prop.ladder(), tau);
        s.energy_integral = energy_integral * std::sqrt(alpha);
        traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(s.norm - 1.0));
        if (traj.max_norm_drift > config.norm_drift_budget) {
            throw NumericalGuardError("norm_drift", "|norm - 1| = " + std::to_string(traj.max_norm_drift) +
                                                        " exceeds budget at tau = " + std::to_string(tau) +
                                                        "; reduce dt");
        }
        check_truncation(s, config.truncation_threshold);
        if (sink) sink(s);
        traj.samples.push_back(std::move(s));
    };

    const auto stops = build_stops(config);
    record(kInitialSlowTime);
    for (const auto& stop : stops) {
        const double t_stop = fast_time(stop.tau, alpha);
        traj.steps += prop.advance(state, t_stop, dt, &energy_integral);
        if (stop.sample) record(stop.tau);
        if (stop.snapshot) traj.snapshots.push_back({stop.tau, state});
    }
    traj.final_state = std::move(state);
    return traj;
}

}  // namespace chirp
