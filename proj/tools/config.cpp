#include "config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "chirp/error.hpp"

namespace chirp::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
    const std::string text = trim(raw);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError(key + ": expected a number, got '" + raw + "'");
    return v;
}

std::size_t to_size(const std::string& key, const std::string& raw) {
    const std::string text = trim(raw);
    std::size_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError(key + ": expected a non-negative integer, got '" + raw + "'");
    return v;
}

std::vector<double> to_list(const std::string& key, const std::string& raw) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        out.push_back(to_double(key, item));
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += num(v[i]);
    }
    return out;
}

// Reads keys from the tree and remembers which ones were used, so leftovers
// can be reported as unknown.
class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    template <class F>
    void get(const std::string& section, const std::string& key, F&& assign) {
        const auto sec = tree_.get_child_optional(section);
        if (!sec) return;
        const auto value = sec->get_optional<std::string>(key);
        if (!value) return;
        used_.insert(section + "." + key);
        assign(section + "." + key, *value);
    }

    void number(const std::string& s, const std::string& k, double& out) {
        get(s, k, [&](const std::string& name, const std::string& v) { out = to_double(name, v); });
    }
    void size(const std::string& s, const std::string& k, std::size_t& out) {
        get(s, k, [&](const std::string& name, const std::string& v) { out = to_size(name, v); });
    }
    void numbers(const std::string& s, const std::string& k, std::vector<double>& out) {
        get(s, k, [&](const std::string& name, const std::string& v) { out = to_list(name, v); });
    }

    void check_all_used() const {
        for (const auto& [section, child] : tree_) {
            if (child.empty() && !child.data().empty()) {
                throw ConfigError("key '" + section + "' outside any section");
            }
            for (const auto& [key, value] : child) {
                const std::string name = section + "." + key;
                if (!used_.count(name)) throw ConfigError("unknown config key '" + name + "'");
            }
        }
    }

private:
    const pt::ptree& tree_;
    std::set<std::string> used_;
};

void apply_override(pt::ptree& tree, const std::string& item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + item + "' is not key=value");
    const std::string key = trim(item.substr(0, eq));
    const auto dot = key.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == key.size() || key.find('.', dot + 1) != std::string::npos) {
        throw ConfigError("override key '" + key + "' must be section.key");
    }
    tree.put(pt::ptree::path_type(key, '.'), trim(item.substr(eq + 1)));
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (const auto& item : overrides) apply_override(tree, item);

    RunConfig c;
    Reader r(tree);
    auto& params = c.problem.params;
    r.number("params", "alpha", params.alpha);
    r.number("params", "beta", params.beta);
    r.number("params", "lambda", params.lambda);
    r.number("params", "epsilon", params.epsilon);
    r.get("params", "mode", [&](const std::string&, const std::string& v) { params.mode = parse_resonance_mode(trim(v)); });

    r.size("basis", "size", c.problem.basis_size);
    r.get("basis", "coupling", [&](const std::string&, const std::string& v) { c.problem.order = parse_coupling_order(trim(v)); });
    r.number("basis", "phase_offset", c.problem.phase_offset);

    auto& ig = c.integrator;
    r.number("integrator", "dt", ig.dt);
    r.get("integrator", "picture", [&](const std::string&, const std::string& v) { ig.picture = parse_picture(trim(v)); });
    r.number("integrator", "norm_drift_budget", ig.norm_drift_budget);
    r.number("integrator", "sample_interval", ig.sample_interval);
    r.number("integrator", "tau_end", ig.tau_end);
    r.number("integrator", "truncation_threshold", ig.truncation_threshold);
    r.numbers("integrator", "snapshot_taus", ig.snapshot_taus);

    r.get("capture", "rule", [&](const std::string& name, const std::string& v) {
        const std::string rule = trim(v);
        if (rule == "half_ideal_level") {
            c.cutoff.kind = CutoffRule::Kind::HalfIdealLevel;
        } else if (rule == "fixed") {
            c.cutoff.kind = CutoffRule::Kind::FixedLevel;
        } else {
            throw ConfigError(name + ": expected half_ideal_level or fixed, got '" + rule + "'");
        }
    });
    r.size("capture", "level", c.cutoff.level);

    r.get("wigner", "tau", [&](const std::string& name, const std::string& v) { c.wigner.tau = to_double(name, v); });
    r.size("wigner", "points", c.wigner.points);
    r.number("wigner", "half_width", c.wigner.half_width);

    auto& th = c.threshold;
    r.numbers("threshold", "p2", th.p2);
    r.number("threshold", "alpha", th.alpha);
    r.number("threshold", "alpha_coarse", th.alpha_coarse);
    r.number("threshold", "alpha_coarse_max_p2", th.alpha_coarse_max_p2);
    r.number("threshold", "lambda", th.lambda);
    r.size("threshold", "basis_size", th.basis_size);
    r.number("threshold", "tol", th.bisection.tol);
    r.number("threshold", "prescan_factor", th.bisection.prescan_factor);
    r.size("threshold", "max_prescan", th.bisection.max_prescan);
    r.number("threshold", "monotone_slack", th.bisection.monotone_slack);

    auto& cl = c.classical;
    r.number("classical", "tau_end", cl.run.tau_end);
    r.number("classical", "dt", cl.run.dt);
    r.number("classical", "sample_interval", cl.run.sample_interval);
    r.number("classical", "window", cl.run.window);
    r.number("classical", "x0", cl.run.initial.x);
    r.number("classical", "p0", cl.run.initial.p);
    r.number("classical", "divergence_bound", cl.run.divergence_bound);
    r.numbers("classical", "p2", cl.p2);
    r.number("classical", "alpha", cl.alpha);
    r.number("classical", "lambda", cl.lambda);

    r.get("output", "dir", [&](const std::string&, const std::string& v) { c.out_dir = trim(v); });

    r.check_all_used();
    c.classical.run.phase_offset = c.problem.phase_offset;
    return c;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream o;
    const auto& p = c.problem.params;
    o << "[params]\n"
      << "alpha = " << num(p.alpha) << "\n"
      << "beta = " << num(p.beta) << "\n"
      << "lambda = " << num(p.lambda) << "\n"
      << "epsilon = " << num(p.epsilon) << "\n"
      << "mode = " << to_string(p.mode) << "\n\n";
    o << "[basis]\n"
      << "size = " << c.problem.basis_size << "\n"
      << "coupling = " << to_string(c.problem.order) << "\n"
      << "phase_offset = " << num(c.problem.phase_offset) << "\n\n";
    const auto& ig = c.integrator;
    o << "[integrator]\n"
      << "dt = " << num(ig.dt) << "\n"
      << "picture = " << to_string(ig.picture) << "\n"
      << "norm_drift_budget = " << num(ig.norm_drift_budget) << "\n"
      << "sample_interval = " << num(ig.sample_interval) << "\n"
      << "tau_end = " << num(ig.tau_end) << "\n"
      << "truncation_threshold = " << num(ig.truncation_threshold) << "\n";
    if (!ig.snapshot_taus.empty()) o << "snapshot_taus = " << list(ig.snapshot_taus) << "\n";
    o << "\n[capture]\n"
      << "rule = " << (c.cutoff.kind == CutoffRule::Kind::FixedLevel ? "fixed" : "half_ideal_level") << "\n"
      << "level = " << c.cutoff.level << "\n\n";
    o << "[wigner]\n";
    if (c.wigner.tau) o << "tau = " << num(*c.wigner.tau) << "\n";
    o << "points = " << c.wigner.points << "\n"
      << "half_width = " << num(c.wigner.half_width) << "\n\n";
    const auto& th = c.threshold;
    o << "[threshold]\n";
    if (!th.p2.empty()) o << "p2 = " << list(th.p2) << "\n";
    o << "alpha = " << num(th.alpha) << "\n"
      << "alpha_coarse = " << num(th.alpha_coarse) << "\n"
      << "alpha_coarse_max_p2 = " << num(th.alpha_coarse_max_p2) << "\n"
      << "lambda = " << num(th.lambda) << "\n"
      << "basis_size = " << th.basis_size << "\n"
      << "tol = " << num(th.bisection.tol) << "\n"
      << "prescan_factor = " << num(th.bisection.prescan_factor) << "\n"
      << "max_prescan = " << th.bisection.max_prescan << "\n"
      << "monotone_slack = " << num(th.bisection.monotone_slack) << "\n\n";
    const auto& cl = c.classical;
    o << "[classical]\n"
      << "tau_end = " << num(cl.run.tau_end) << "\n"
      << "dt = " << num(cl.run.dt) << "\n"
      << "sample_interval = " << num(cl.run.sample_interval) << "\n"
      << "window = " << num(cl.run.window) << "\n"
      << "x0 = " << num(cl.run.initial.x) << "\n"
      << "p0 = " << num(cl.run.initial.p) << "\n"
      << "divergence_bound = " << num(cl.run.divergence_bound) << "\n";
    if (!cl.p2.empty()) o << "p2 = " << list(cl.p2) << "\n";
    o << "alpha = " << num(cl.alpha) << "\n"
      << "lambda = " << num(cl.lambda) << "\n\n";
    o << "[output]\n"
      << "dir = " << c.out_dir << "\n";
    return o.str();
}

ThresholdRunConfig threshold_config(const RunConfig& c) {
    ThresholdRunConfig t;
    t.alpha = c.threshold.alpha;
    t.alpha_coarse = c.threshold.alpha_coarse;
    t.alpha_coarse_max_P2 = c.threshold.alpha_coarse_max_p2;
    t.lambda = c.threshold.lambda;
    t.basis_size = c.threshold.basis_size;
    t.order = c.problem.order;
    t.phase_offset = c.problem.phase_offset;
    t.integrator = c.integrator;
    t.cutoff = c.cutoff;
    t.bisection = c.threshold.bisection;
    return t;
}

ClassicalThresholdConfig classical_threshold_config(const RunConfig& c) {
    ClassicalThresholdConfig t;
    t.alpha = c.classical.alpha;
    t.lambda = c.classical.lambda;
    t.run = c.classical.run;
    t.bisection = c.threshold.bisection;
    return t;
}

}  // namespace chirp::cli
