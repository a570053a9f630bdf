#pragma once

// Fixed-step RK4 integration of the energy-basis Schroedinger equation
//
//   i dc_n/dt = E_n c_n + f(t) sum_k K_kn c_k,   f(t) = drive cos(phi_d(t)),
//
// either directly or in the interaction picture c_n = a_n exp(-i E_n t),
// where only the coupling term is stepped.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "chirp/model.hpp"

namespace chirp {

using Complex = std::complex<double>;

struct StateVector {
    std::vector<Complex> amps;
    double t = 0.0;

    std::size_t size() const noexcept { return amps.size(); }
    double norm() const;  // sum |c_n|^2
    std::vector<double> populations() const;
};

/// Ground state at t0 = -10/sqrt(alpha).
StateVector initial_state(std::size_t size, double alpha);

/// Slow time tau = sqrt(alpha) t and its inverse.
inline double slow_time(double t, double alpha) { return t * std::sqrt(alpha); }
inline double fast_time(double tau, double alpha) { return tau / std::sqrt(alpha); }

enum class Picture { Schrodinger, Interaction };

std::string_view to_string(Picture picture);
Picture parse_picture(std::string_view text);

/// Everything needed to build the static operators of one run.
struct Problem {
    PhysicalParams params;
    std::size_t basis_size = 40;
    CouplingOrder order = CouplingOrder::Full;
    double phase_offset = 0.0;

    bool operator==(const Problem&) const = default;
};

struct IntegratorConfig {
    double dt = 0.0;  // <= 0 selects the default for the picture
    Picture picture = Picture::Interaction;
    double norm_drift_budget = 1e-6;
    double sample_interval = 0.01;  // slow time
    double tau_end = 0.0;
    double truncation_threshold = 1e-3;  // population of the top 3 levels
    std::vector<double> snapshot_taus;

    bool operator==(const IntegratorConfig&) const = default;
};

/// dc/dt for the Schroedinger-picture equation; out must have state.size() elements.
void rhs(const StateVector& state, const EnergyLadder& ladder, const CouplingMatrix& coupling,
         double drive, const ChirpSchedule& schedule, std::span<Complex> out);
std::vector<Complex> rhs(const StateVector& state, const EnergyLadder& ladder,
                         const CouplingMatrix& coupling, double drive,
                         const ChirpSchedule& schedule);

/// Owns the operators of one problem and a scratch workspace. Not thread-safe;
/// build one per concurrent run.
class Propagator {
public:
    explicit Propagator(const Problem& problem, Picture picture = Picture::Interaction);

    const Problem& problem() const noexcept { return problem_; }
    const EnergyLadder& ladder() const noexcept { return ladder_; }
    const CouplingMatrix& coupling() const noexcept { return coupling_; }
    const ChirpSchedule& schedule() const noexcept { return schedule_; }
    double drive() const noexcept { return drive_; }
    Picture picture() const noexcept { return picture_; }

    StateVector initial_state() const;

    /// Default step for the active picture.
    double default_dt() const;

    /// One RK4 step of length dt (may be negative). Throws NumericalGuardError
    /// in the Schroedinger picture when |dt| max(E_n) >= 0.5.
    void step(StateVector& state, double dt);

    /// Integrates to t_target with steps no longer than |dt_max|, landing
    /// exactly on t_target. Returns the number of steps taken. When
    /// energy_integral is given, the trapezoid integral of the mean level
    /// energy over fast time is added to it.
    std::size_t advance(StateVector& state, double t_target, double dt_max,
                        double* energy_integral = nullptr);

private:
    void check_stability(double dt) const;
    void phases(double t, std::vector<Complex>& u) const;
    void derivative(double t, const std::vector<Complex>& y, std::vector<Complex>& out);
    void derivative_interaction(double drive_factor, const std::vector<Complex>& u,
                                const std::vector<Complex>& a, std::vector<Complex>& out);
    double level_energy(const std::vector<Complex>& y) const;
    void rk4_steps(std::vector<Complex>& y, double t_start, double h, std::size_t count,
                   double* energy_integral = nullptr);

    Problem problem_;
    EnergyLadder ladder_;
    CouplingMatrix coupling_;
    ChirpSchedule schedule_;
    double drive_;
    Picture picture_;

    // workspace
    std::vector<Complex> k1_, k2_, k3_, k4_, tmp_, w_, u0_, uh_, u1_, rot_;
};

struct Sample {
    double tau = 0.0;
    double norm = 0.0;
    double mean_energy = 0.0;
    /// Integral of the mean level energy over slow time from tau = -10,
    /// accumulated on every integrator step (free of sampling aliasing).
    double energy_integral = 0.0;
    std::vector<double> populations;
};

struct Snapshot {
    double tau = 0.0;
    StateVector state;
};

struct Trajectory {
    std::vector<Sample> samples;
    std::vector<Snapshot> snapshots;
    StateVector final_state;
    double dt = 0.0;
    double max_norm_drift = 0.0;
    std::size_t steps = 0;
};

using SampleSink = std::function<void(const Sample&)>;

/// Runs from tau = -10 to config.tau_end, sampling every config.sample_interval.
/// Throws NumericalGuardError on norm drift above budget or basis truncation.
Trajectory propagate(const Problem& problem, const IntegratorConfig& config,
                     const SampleSink& sink = {});

}  // namespace chirp
