#include "chirp/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chirp/error.hpp"

namespace chirp {

TrajectorySeries TrajectorySeries::from(const Trajectory& trajectory) {
    TrajectorySeries s;
    s.taus.reserve(trajectory.samples.size());
    s.energies.reserve(trajectory.samples.size());
    s.energy_integrals.reserve(trajectory.samples.size());
    s.populations.reserve(trajectory.samples.size());
    for (const auto& sample : trajectory.samples) {
        s.taus.push_back(sample.tau);
        s.energies.push_back(sample.mean_energy);
        s.energy_integrals.push_back(sample.energy_integral);
        s.populations.push_back(sample.populations);
    }
    return s;
}

namespace {

// Integral of the piecewise-linear interpolant from taus[0] to x.
class LinearIntegral {
public:
    LinearIntegral(std::span<const double> taus, std::span<const double> values)
        : taus_(taus), values_(values), cumulative_(taus.size(), 0.0) {
        for (std::size_t i = 1; i < taus.size(); ++i) {
            cumulative_[i] = cumulative_[i - 1] + 0.5 * (taus[i] - taus[i - 1]) * (values[i] + values[i - 1]);
        }
    }

    double at(double x) const {
        auto it = std::upper_bound(taus_.begin(), taus_.end(), x);
        std::size_t j = it == taus_.begin() ? 0 : static_cast<std::size_t>(it - taus_.begin()) - 1;
        if (j + 1 >= taus_.size()) return cumulative_.back();
        const double h = taus_[j + 1] - taus_[j];
        const double frac = (x - taus_[j]) / h;
        const double vx = values_[j] + frac * (values_[j + 1] - values_[j]);
        return cumulative_[j] + 0.5 * (x - taus_[j]) * (values_[j] + vx);
    }

private:
    std::span<const double> taus_;
    std::span<const double> values_;
    std::vector<double> cumulative_;
};

void check_window(std::span<const double> taus, double window) {
    double max_gap = 0.0;
    for (std::size_t i = 1; i < taus.size(); ++i) {
        const double gap = taus[i] - taus[i - 1];
        if (!(gap > 0.0)) throw ConfigError("smooth: taus must be strictly increasing");
        max_gap = std::max(max_gap, gap);
    }
    if (window < 2.0 * max_gap * (1.0 - 1e-9)) {
        throw ConfigError("smooth: window " + std::to_string(window) +
                          " shorter than twice the sample interval " + std::to_string(max_gap));
    }
}

template <class Integral>
std::vector<double> window_means(std::span<const double> taus, const Integral& integral, double window) {
    const double lo = taus.front();
    const double hi = taus.back();
    std::vector<double> out(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double a = std::max(lo, taus[i] - 0.5 * window);
        const double b = std::min(hi, taus[i] + 0.5 * window);
        out[i] = (integral(b) - integral(a)) / (b - a);
    }
    return out;
}

}  // namespace

std::vector<double> smooth(std::span<const double> taus, std::span<const double> values, double window) {
    if (taus.size() != values.size()) throw ConfigError("smooth: taus and values differ in length");
    if (taus.size() < 2) return {values.begin(), values.end()};
    check_window(taus, window);
    const LinearIntegral integral(taus, values);
    return window_means(taus, [&](double x) { return integral.at(x); }, window);
}

std::vector<double> smooth_integrated(std::span<const double> taus, std::span<const double> cumulative,
                                      double window) {
    if (taus.size() != cumulative.size()) throw ConfigError("smooth: taus and integrals differ in length");
    if (taus.size() < 2) throw ConfigError("smooth: need at least two samples of the integral");
    check_window(taus, window);
    auto at = [&](double x) {
        auto it = std::upper_bound(taus.begin(), taus.end(), x);
        std::size_t j = it == taus.begin() ? 0 : static_cast<std::size_t>(it - taus.begin()) - 1;
        if (j + 1 >= taus.size()) return cumulative.back();
        const double f = (x - taus[j]) / (taus[j + 1] - taus[j]);
        return cumulative[j] + f * (cumulative[j + 1] - cumulative[j]);
    };
    return window_means(taus, at, window);
}

TrajectorySeries smooth(const TrajectorySeries& series, double window) {
    TrajectorySeries out = series;
    if (series.energy_integrals.size() == series.taus.size() && series.taus.size() >= 2) {
        out.energies = smooth_integrated(series.taus, series.energy_integrals, window);
    } else {
        out.energies = smooth(series.taus, series.energies, window);
    }
    return out;
}

std::size_t CutoffRule::cutoff(double tau_f, double P2) const {
    if (kind == Kind::FixedLevel) return level;
    if (!(P2 > 0.0)) throw ConfigError("capture cutoff: P2 must be > 0");
    const double nbar = tau_f / P2;
    const double half = std::ceil(0.5 * nbar - 1e-12);
    return std::max<std::size_t>(1, half > 0.0 ? static_cast<std::size_t>(half) : 0);
}

double capture_probability(std::span<const double> populations, double tau_f, double P2,
                           const CutoffRule& rule) {
    if (!(tau_f > 0.0)) throw ConfigError("capture_probability: tau_f must be > 0");
    const std::size_t cut = rule.cutoff(tau_f, P2);
    if (cut >= populations.size()) {
        throw ConfigError("capture_probability: cutoff level " + std::to_string(cut) +
                          " does not fit in a basis of " + std::to_string(populations.size()) +
                          " levels");
    }
    double sum = 0.0;
    for (std::size_t n = cut; n < populations.size(); ++n) sum += populations[n];
    return std::clamp(sum, 0.0, 1.0);
}

double capture_probability(const StateVector& state, double tau_f, double P2, const CutoffRule& rule) {
    const auto pops = state.populations();
    return capture_probability(pops, tau_f, P2, rule);
}

namespace {

// Plateau wobble allowed between rungs, as a fraction of the local level gap.
constexpr double kMaxPlateauWobble = 0.5;

double interpolate_crossing(std::span<const double> taus, std::span<const double> v, std::size_t i,
                            double level) {
    // v[i-1] < level <= v[i]
    if (i == 0) return taus[0];
    const double f = (level - v[i - 1]) / (v[i] - v[i - 1]);
    return taus[i - 1] + f * (taus[i] - taus[i - 1]);
}

std::size_t first_at_or_above(std::span<const double> v, std::size_t from, double level) {
    for (std::size_t i = from; i < v.size(); ++i) {
        if (v[i] >= level) return i;
    }
    return v.size();
}

struct Stretch {
    double min = INFINITY;
    double max = -INFINITY;
    double sum = 0.0;
    std::size_t count = 0;

    double spread() const { return count > 0 ? max - min : 0.0; }
    double mean() const { return sum / static_cast<double>(count); }
};

Stretch stretch(std::span<const double> taus, std::span<const double> v, double a, double b) {
    Stretch s;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (taus[i] < a || taus[i] > b) continue;
        s.min = std::min(s.min, v[i]);
        s.max = std::max(s.max, v[i]);
        s.sum += v[i];
        ++s.count;
    }
    return s;
}

}  // namespace

std::vector<double> ladder_step_times(std::span<const double> taus, std::span<const double> smoothed,
                                      const EnergyLadder& ladder, double window) {
    if (taus.size() != smoothed.size()) throw ConfigError("ladder_step_times: length mismatch");
    if (taus.size() < 2) return {};

    std::vector<double> crossings;
    std::vector<double> gaps;
    std::size_t from = 0;
    for (std::size_t n = 0; n + 1 < ladder.size(); ++n) {
        const double gap = ladder[n + 1] - ladder[n];
        const double mid = ladder[n] + 0.5 * gap;
        const std::size_t i_mid = first_at_or_above(smoothed, from, mid);
        if (i_mid == smoothed.size()) break;
        crossings.push_back(interpolate_crossing(taus, smoothed, i_mid, mid));
        gaps.push_back(gap);
        from = i_mid;
    }
    if (crossings.empty()) return {};

    // Each stretch before a crossing (back to the previous one, or to the start)
    // must be resolvable and flat in its middle half.
    std::vector<double> plateau_mean;
    std::vector<double> plateau_end;
    double previous = taus.front();
    for (std::size_t k = 0; k < crossings.size(); ++k) {
        const double length = crossings[k] - previous;
        if (length < 2.0 * window) return {};
        const double b = crossings[k] - 0.25 * length;
        const Stretch s = stretch(taus, smoothed, previous + 0.25 * length, b);
        if (s.count == 0 || s.spread() > kMaxPlateauWobble * gaps[k]) return {};
        plateau_mean.push_back(s.mean());
        plateau_end.push_back(b);
        previous = crossings[k];
    }
    // Level reached after the last crossing: second half of the remaining run.
    const double tail = taus.back() - crossings.back();
    const Stretch last = stretch(taus, smoothed, crossings.back() + 0.5 * tail, taus.back());
    plateau_mean.push_back(last.count > 0 ? last.mean() : smoothed.back());

    // With partial capture the plateaus sit below the ladder levels, so each
    // step time is taken where the riser passes halfway between its plateaus.
    std::vector<double> steps;
    for (std::size_t k = 0; k < crossings.size(); ++k) {
        const double half = 0.5 * (plateau_mean[k] + plateau_mean[k + 1]);
        const auto start = static_cast<std::size_t>(
            std::lower_bound(taus.begin(), taus.end(), plateau_end[k]) - taus.begin());
        const std::size_t i = first_at_or_above(smoothed, start, half);
        steps.push_back(i < smoothed.size() && half > plateau_mean[k]
                            ? interpolate_crossing(taus, smoothed, i, half)
                            : crossings[k]);
    }
    return steps;
}

}  // namespace chirp
