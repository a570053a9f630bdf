#pragma once

// Deterministic file writers: fixed 17-significant-digit floats, no timestamps.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "chirp/classical.hpp"
#include "chirp/observables.hpp"
#include "chirp/threshold.hpp"
#include "chirp/wigner.hpp"

namespace chirp::cli {

std::string format_double(double v);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

/// tau, norm, mean_energy, smoothed_energy, p_0 .. p_{N-1}
std::string trajectory_csv(const Trajectory& trajectory, const std::vector<double>& smoothed);

/// n, re, im
std::string amplitudes_csv(const StateVector& state);

/// First row: empty cell then x values; each following row: p, W(x_0..x_{nx-1}, p).
std::string wigner_csv(const WignerField& field);

/// P2, P1_tilde_cr, theory_classical, theory_quantum, regime
std::string threshold_map_csv(const std::vector<ThresholdMapEntry>& entries);

/// P1_tilde, capture in evaluation order.
std::string capture_curve_csv(const ThresholdPoint& point);

/// tau, x, p, energy, smoothed_energy
std::string classical_trace_csv(const ClassicalTrace& trace);

nlohmann::ordered_json params_json(const PhysicalParams& params);
nlohmann::ordered_json dimensionless_json(const DimensionlessParams& d);

/// File-name friendly rendering of a P2 value, e.g. 0.1 -> "0.1".
std::string p2_tag(double P2);

}  // namespace chirp::cli
