#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "chirp/error.hpp"
#include "output.hpp"

namespace chirp::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

fs::path prepare(const RunConfig& config) {
    const fs::path dir(config.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
    write_text(dir / "config.ini", serialize_config(config));
    return dir;
}

struct RunSummary {
    ordered_json json;
    std::vector<double> smoothed;
};

RunSummary summarize(const Problem& problem, const IntegratorConfig& integrator, const CutoffRule& cutoff,
                     const Trajectory& trajectory) {
    const auto d = dimensionless(problem.params);
    const auto series = smooth(TrajectorySeries::from(trajectory));
    const auto steps = ladder_step_times(series.taus, series.energies, build_ladder(problem.params, problem.basis_size));
    const double tau_f = integrator.tau_end;

    RunSummary s;
    s.smoothed = series.energies;
    s.json["params"] = params_json(problem.params);
    s.json["basis_size"] = problem.basis_size;
    s.json["coupling"] = std::string(to_string(problem.order));
    s.json["picture"] = std::string(to_string(integrator.picture));
    s.json["dimensionless"] = dimensionless_json(d);
    s.json["tau_end"] = tau_f;
    if (tau_f > 0.0 && d.P2 > 0.0) {
        s.json["cutoff_level"] = cutoff.cutoff(tau_f, d.P2);
        s.json["capture"] = capture_probability(trajectory.final_state, tau_f, d.P2, cutoff);
    } else {
        s.json["cutoff_level"] = nullptr;
        s.json["capture"] = nullptr;
    }
    s.json["step_times"] = steps;
    s.json["final_smoothed_energy"] = series.energies.back();
    s.json["dt"] = trajectory.dt;
    s.json["steps"] = trajectory.steps;
    s.json["max_norm_drift"] = trajectory.max_norm_drift;
    return s;
}

void report_capture(std::ostream& log, const std::string& label, const ordered_json& summary) {
    log << label << ": capture = ";
    if (summary["capture"].is_null()) {
        log << "n/a";
    } else {
        log << format_double(summary["capture"].get<double>());
    }
    log << ", steps at";
    if (summary["step_times"].empty()) log << " (none)";
    for (const auto& t : summary["step_times"]) log << ' ' << format_double(t.get<double>());
    log << "\n";
}

}  // namespace

int cmd_simulate(const RunConfig& config, std::ostream& log) {
    const auto dir = prepare(config);
    const auto trajectory = propagate(config.problem, config.integrator);
    const auto summary = summarize(config.problem, config.integrator, config.cutoff, trajectory);
    write_text(dir / "trajectory.csv", trajectory_csv(trajectory, summary.smoothed));
    write_text(dir / "final_state.csv", amplitudes_csv(trajectory.final_state));
    write_json(dir / "summary.json", summary.json);
    report_capture(log, "simulate", summary.json);
    return 0;
}

int cmd_wigner(const RunConfig& config, std::ostream& log) {
    const auto dir = prepare(config);
    IntegratorConfig integrator = config.integrator;
    const double tau = config.wigner.tau.value_or(integrator.tau_end);
    integrator.snapshot_taus = {tau};
    const auto trajectory = propagate(config.problem, integrator);
    const StateVector& state = trajectory.snapshots.front().state;

    PhaseSpaceGrid grid = PhaseSpaceGrid::fit(state, config.wigner.points);
    if (config.wigner.half_width > 0.0) {
        const double h = config.wigner.half_width;
        grid = {-h, h, -h, h, config.wigner.points, config.wigner.points};
    }
    const auto field = wigner_from_state(state, grid);
    const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());

    ordered_json meta;
    meta["tau"] = tau;
    meta["params"] = params_json(config.problem.params);
    meta["basis_size"] = config.problem.basis_size;
    meta["grid"] = {{"x_min", grid.x_min}, {"x_max", grid.x_max}, {"p_min", grid.p_min},
                    {"p_max", grid.p_max}, {"nx", grid.nx},       {"np", grid.np}};
    meta["layout"] = "rows: p ascending; columns: x ascending; first row and column hold the axes";
    meta["integral"] = field.integral();
    meta["purity"] = field.purity();
    meta["min"] = *lo;
    meta["max"] = *hi;
    const auto pops = state.populations();
    meta["dominant_level"] = static_cast<std::size_t>(std::max_element(pops.begin(), pops.end()) - pops.begin());
    write_text(dir / "wigner.csv", wigner_csv(field));
    write_text(dir / "snapshot_state.csv", amplitudes_csv(state));
    write_json(dir / "wigner.json", meta);
    log << "wigner: tau = " << format_double(tau) << ", integral = " << format_double(field.integral())
        << ", min = " << format_double(*lo) << "\n";
    return 0;
}

int cmd_threshold(const RunConfig& config, std::size_t threads, std::ostream& log) {
    if (config.threshold.p2.empty()) throw ConfigError("threshold.p2 is empty");
    const auto dir = prepare(config);
    const auto entries = threshold_map(config.threshold.p2, threshold_config(config), threads);

    write_text(dir / "threshold_map.csv", threshold_map_csv(entries));
    ordered_json doc = ordered_json::array();
    int status = 0;
    for (const auto& e : entries) {
        ordered_json row;
        row["P2"] = e.P2;
        if (e.point) {
            row["P1_tilde_cr"] = e.point->P1_tilde_cr;
            row["regime"] = std::string(to_string(e.point->regime));
            row["alpha"] = e.point->alpha;
            row["lambda"] = e.point->lambda;
            row["evaluations"] = e.point->capture_curve.size();
            write_text(dir / ("capture_curve_P2_" + p2_tag(e.P2) + ".csv"), capture_curve_csv(*e.point));
            log << "threshold: P2 = " << format_double(e.P2) << " -> P1_tilde_cr = "
                << format_double(e.point->P1_tilde_cr) << " (" << to_string(e.point->regime) << ")\n";
        } else {
            row["error"] = e.error;
            status = 3;
            log << "threshold: P2 = " << format_double(e.P2) << " failed: " << e.error << "\n";
        }
        doc.push_back(row);
    }
    write_json(dir / "threshold.json", doc);
    return status;
}

int cmd_isomorphism(const RunConfig& config, std::ostream& log) {
    const auto dir = prepare(config);
    const auto r = isomorphism_check(config.problem, config.integrator, config.cutoff);
    Problem twin = config.problem;
    twin.params = effective_twin(config.problem.params);
    const auto sh = summarize(config.problem, config.integrator, config.cutoff, r.subharmonic);
    const auto eff = summarize(twin, config.integrator, config.cutoff, r.effective);

    write_text(dir / "trajectory_subharmonic.csv", trajectory_csv(r.subharmonic, sh.smoothed));
    write_text(dir / "trajectory_effective.csv", trajectory_csv(r.effective, eff.smoothed));
    ordered_json doc;
    doc["capture_subharmonic"] = r.capture_subharmonic;
    doc["capture_effective"] = r.capture_effective;
    doc["delta"] = r.delta;
    doc["subharmonic"] = sh.json;
    doc["effective"] = eff.json;
    write_json(dir / "isomorphism.json", doc);
    report_capture(log, "subharmonic", sh.json);
    report_capture(log, "effective", eff.json);
    return 0;
}

int cmd_classical(const RunConfig& config, std::size_t threads, std::ostream& log) {
    const auto dir = prepare(config);
    const auto result = classical_capture(config.problem.params, config.classical.run);
    write_text(dir / "classical_trace.csv", classical_trace_csv(result.trace));

    ordered_json doc;
    doc["params"] = params_json(config.problem.params);
    doc["dimensionless"] = dimensionless_json(dimensionless(config.problem.params));
    doc["tau_end"] = config.classical.run.tau_end;
    doc["captured"] = result.captured;
    doc["diverged"] = result.diverged;
    doc["final_smoothed_energy"] = result.final_smoothed_energy;
    doc["target_energy"] = result.target_energy;
    log << "classical: " << (result.captured ? "captured" : "not captured")
        << (result.diverged ? " (diverged)" : "") << ", smoothed energy "
        << format_double(result.final_smoothed_energy) << " vs autoresonant " << format_double(result.target_energy)
        << "\n";

    int status = 0;
    const auto& columns = config.classical.p2;
    if (!columns.empty()) {
        const auto tc = classical_threshold_config(config);
        std::vector<std::optional<ThresholdPoint>> points(columns.size());
        std::vector<std::string> errors(columns.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < columns.size(); i = next++) {
                try {
                    points[i] = classical_threshold(columns[i], tc);
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            }
        };
        const std::size_t count = std::clamp<std::size_t>(threads, 1, columns.size());
        if (count == 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
        }

        std::ostringstream csv;
        csv << "P2,P1_tilde_cr,theory_classical\n";
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < columns.size(); ++i) {
            const double theory = theory_threshold(columns[i]).classical;
            ordered_json row;
            row["P2"] = columns[i];
            csv << format_double(columns[i]) << ',' << format_double(points[i] ? points[i]->P1_tilde_cr : NAN)
                << ',' << format_double(theory) << "\n";
            if (points[i]) {
                row["P1_tilde_cr"] = points[i]->P1_tilde_cr;
                row["evaluations"] = points[i]->capture_curve.size();
                write_text(dir / ("classical_curve_P2_" + p2_tag(columns[i]) + ".csv"), capture_curve_csv(*points[i]));
                log << "classical threshold: P2 = " << format_double(columns[i]) << " -> "
                    << format_double(points[i]->P1_tilde_cr) << " (line " << format_double(theory) << ")\n";
            } else {
                row["error"] = errors[i];
                status = 3;
                log << "classical threshold: P2 = " << format_double(columns[i]) << " failed: " << errors[i] << "\n";
            }
            rows.push_back(row);
        }
        doc["thresholds"] = rows;
        write_text(dir / "classical_threshold.csv", csv.str());
    }
    write_json(dir / "classical.json", doc);
    return status;
}

}  // namespace chirp::cli
