#pragma once

// Run configuration: INI file with sections, plus "section.key=value" overrides.

#include <optional>
#include <string>
#include <vector>

#include "chirp/classical.hpp"
#include "chirp/observables.hpp"
#include "chirp/propagator.hpp"
#include "chirp/threshold.hpp"

namespace chirp::cli {

struct WignerSection {
    std::optional<double> tau;  // unset: end of the run
    std::size_t points = 201;
    double half_width = 0.0;  // 0: fit the grid to the state

    bool operator==(const WignerSection&) const = default;
};

struct ThresholdSection {
    std::vector<double> p2;
    double alpha = 1e-6;
    double alpha_coarse = 1e-4;
    double alpha_coarse_max_p2 = 0.1;
    double lambda = 0.05;
    std::size_t basis_size = 0;
    BisectionOptions bisection;

    bool operator==(const ThresholdSection&) const = default;
};

struct ClassicalSection {
    ClassicalRunConfig run;
    std::vector<double> p2;  // threshold columns, empty for a single run
    double alpha = 1e-7;
    double lambda = 0.01;

    bool operator==(const ClassicalSection&) const = default;
};

struct RunConfig {
    Problem problem;
    IntegratorConfig integrator;
    CutoffRule cutoff;
    WignerSection wigner;
    ThresholdSection threshold;
    ClassicalSection classical;
    std::string out_dir = "out";

    bool operator==(const RunConfig&) const = default;
};

/// Parses INI text; overrides ("section.key=value") are applied on top.
/// Unknown sections or keys and malformed values throw ConfigError.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// INI text that parses back to the same RunConfig.
std::string serialize_config(const RunConfig& config);

ThresholdRunConfig threshold_config(const RunConfig& config);
ClassicalThresholdConfig classical_threshold_config(const RunConfig& config);

}  // namespace chirp::cli
