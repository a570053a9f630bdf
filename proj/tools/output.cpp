#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "chirp/error.hpp"

namespace chirp::cli {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

std::string trajectory_csv(const Trajectory& trajectory, const std::vector<double>& smoothed) {
    std::ostringstream o;
    const std::size_t n = trajectory.samples.empty() ? 0 : trajectory.samples.front().populations.size();
    o << "tau,norm,mean_energy,smoothed_energy";
    for (std::size_t k = 0; k < n; ++k) o << ",p_" << k;
    o << "\n";
    for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
        const auto& s = trajectory.samples[i];
        o << format_double(s.tau) << ',' << format_double(s.norm) << ',' << format_double(s.mean_energy) << ','
          << format_double(i < smoothed.size() ? smoothed[i] : NAN);
        for (double p : s.populations) o << ',' << format_double(p);
        o << "\n";
    }
    return o.str();
}

std::string amplitudes_csv(const StateVector& state) {
    std::ostringstream o;
    o << "n,re,im\n";
    for (std::size_t n = 0; n < state.size(); ++n) {
        o << n << ',' << format_double(state.amps[n].real()) << ',' << format_double(state.amps[n].imag()) << "\n";
    }
    return o.str();
}

std::string wigner_csv(const WignerField& field) {
    std::ostringstream o;
    const auto& g = field.grid;
    o << "p\\x";
    for (std::size_t i = 0; i < g.nx; ++i) o << ',' << format_double(g.x(i));
    o << "\n";
    for (std::size_t j = 0; j < g.np; ++j) {
        o << format_double(g.p(j));
        for (std::size_t i = 0; i < g.nx; ++i) o << ',' << format_double(field.at(i, j));
        o << "\n";
    }
    return o.str();
}

std::string threshold_map_csv(const std::vector<ThresholdMapEntry>& entries) {
    std::ostringstream o;
    o << "P2,P1_tilde_cr,theory_classical,theory_quantum,regime\n";
    for (const auto& e : entries) {
        const auto theory = theory_threshold(e.P2);
        o << format_double(e.P2) << ',' << format_double(e.point ? e.point->P1_tilde_cr : NAN) << ','
          << format_double(theory.classical) << ',' << format_double(theory.quantum) << ','
          << (e.point ? std::string(to_string(e.point->regime)) : std::string("failed")) << "\n";
    }
    return o.str();
}

std::string capture_curve_csv(const ThresholdPoint& point) {
    std::ostringstream o;
    o << "P1_tilde,capture\n";
    for (const auto& [x, c] : point.capture_curve) o << format_double(x) << ',' << format_double(c) << "\n";
    return o.str();
}

std::string classical_trace_csv(const ClassicalTrace& trace) {
    std::ostringstream o;
    o << "tau,x,p,energy,smoothed_energy\n";
    for (std::size_t i = 0; i < trace.taus.size(); ++i) {
        o << format_double(trace.taus[i]) << ',' << format_double(trace.x[i]) << ',' << format_double(trace.p[i])
          << ',' << format_double(trace.energy[i]) << ','
          << format_double(i < trace.smoothed_energy.size() ? trace.smoothed_energy[i] : NAN) << "\n";
    }
    return o.str();
}

nlohmann::ordered_json params_json(const PhysicalParams& params) {
    return {{"alpha", params.alpha},
            {"beta", params.beta},
            {"lambda", params.lambda},
            {"epsilon", params.epsilon},
            {"mode", std::string(to_string(params.mode))}};
}

nlohmann::ordered_json dimensionless_json(const DimensionlessParams& d) {
    auto finite = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(); };
    return {{"P1", d.P1},         {"P2", d.P2},           {"P1_tilde", d.P1_tilde},
            {"mu", d.mu},         {"mu_tilde", d.mu_tilde}, {"T_NL", finite(d.T_NL)},
            {"T_R", finite(d.T_R)}, {"T_S", d.T_S}};
}

std::string p2_tag(double P2) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", P2);
    return buf;
}

}  // namespace chirp::cli
