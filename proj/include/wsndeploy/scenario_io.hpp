#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "domain.hpp"
#include "optimizers.hpp"

namespace wsndeploy {

/// File-level problems: unreadable file, malformed JSON.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace io_detail {

using json = nlohmann::json;

inline const json& required(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw invalid_parameter(std::string(key) + ": missing");
    return *it;
}

template <class T>
T get(const json& j, const char* key) {
    try {
        return required(j, key).get<T>();
    } catch (const json::exception& e) {
        throw invalid_parameter(std::string(key) + ": " + e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return get<T>(j, key);
}

inline std::size_t count(const json& j, const char* key) {
    const json& v = required(j, key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw invalid_parameter(std::string(key) + ": expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

inline Point2 point(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw invalid_parameter(std::string(what) + ": expected [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<Point2> points(const json& j, const char* key) {
    const json& arr = required(j, key);
    if (!arr.is_array()) throw invalid_parameter(std::string(key) + ": expected a list of [x, y]");
    std::vector<Point2> out;
    for (const auto& p : arr) out.push_back(point(p, key));
    return out;
}

inline Matrix matrix(const json& j, const char* key) {
    const auto rows = get<std::vector<std::vector<double>>>(j, key);
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw invalid_parameter(std::string(key) + ": ragged matrix");
        for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = rows[i][k];
    }
    return m;
}

inline json to_json(const Point2& p) { return json::array({p.x, p.y}); }

inline json to_json(const std::vector<Point2>& ps) {
    json arr = json::array();
    for (const auto& p : ps) arr.push_back(to_json(p));
    return arr;
}

inline json to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

inline std::vector<double> scaled(std::vector<double> v, double factor) {
    for (double& x : v) x *= factor;
    return v;
}

inline DensitySpec density(const json& j) {
    const auto kind = get<std::string>(j, "kind");
    if (kind == "uniform") return DensitySpec::uniform();
    if (kind != "gaussian_mixture") throw invalid_parameter("density.kind: expected uniform or gaussian_mixture");
    std::vector<GaussianComponent> comps;
    for (const auto& c : required(j, "components")) {
        comps.push_back({get<double>(c, "weight"), point(required(c, "mean_m"), "density.components.mean_m"),
                         get<double>(c, "variance_m2")});
    }
    return DensitySpec::mixture(std::move(comps));
}

inline RadioParams radio(const json& doc, std::size_t N, std::size_t M, double bit_rate) {
    if (doc.contains("radio")) {
        const json& r = doc["radio"];
        return {get<std::vector<double>>(r, "eta_j_per_bit_m2"), get<std::vector<double>>(r, "rho_j_per_bit"),
                matrix(r, "beta_j_per_bit_m2")};
    }
    if (!doc.contains("physical_radio")) throw invalid_parameter("radio: need radio or physical_radio");
    const json& r = doc["physical_radio"];
    PhysicalRadio phys;
    phys.p_th = scaled(get<std::vector<double>>(r, "p_th_nw"), 1e-9);
    phys.g_t = get<std::vector<double>>(r, "g_t");
    phys.g_r = get<std::vector<double>>(r, "g_r");
    phys.rho = scaled(get<std::vector<double>>(r, "rho_nj_per_bit"), 1e-9);
    phys.g_t_sensor = get_or<double>(r, "g_t_sensor", 1.0);
    phys.carrier_wavelength = get<double>(r, "carrier_wavelength_m");
    return derive_radio(phys, N, M, bit_rate);
}

inline std::vector<double> lifetime_budgets(const json& j) {
    const auto nu = get<std::vector<double>>(j, "residual_energy_joules");
    const auto alpha = get<std::vector<double>>(j, "post_move_power_watts");
    const double T = get<double>(j, "lifetime_seconds");
    if (nu.size() != alpha.size()) {
        throw invalid_parameter("lifetime.post_move_power_watts: length must match residual_energy_joules");
    }
    std::vector<double> out;
    for (std::size_t n = 0; n < nu.size(); ++n) out.push_back(LifetimeBudget{nu[n], alpha[n], T}.budget());
    return out;
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace io_detail

/// Parses a scenario document. Table values in nW / nJ are converted to SI.
inline Scenario parse_scenario(const std::string& text) {
    using io_detail::get;
    using io_detail::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("scenario: parse error: ") + e.what());
    }
    if (!doc.is_object()) throw config_error("scenario: top level must be an object");

    Scenario s;
    s.name = io_detail::get_or<std::string>(doc, "name", "");
    s.region = io_detail::points(doc, "region_m");
    s.density = doc.contains("density") ? io_detail::density(doc["density"]) : DensitySpec::uniform();
    s.num_aps = io_detail::count(doc, "num_aps");
    s.num_fcs = io_detail::count(doc, "num_fcs");
    s.bit_rate = get<double>(doc, "bit_rate_bps");
    s.lambda = get<double>(doc, "lambda");
    s.radio = io_detail::radio(doc, s.num_aps, s.num_fcs, s.bit_rate);
    s.move_costs = io_detail::get_or<std::vector<double>>(doc, "move_cost_j_per_m", {});
    if (doc.contains("total_budget_joules")) s.total_budget = get<double>(doc, "total_budget_joules");
    if (doc.contains("node_budgets_joules")) {
        s.node_budgets = get<std::vector<double>>(doc, "node_budgets_joules");
    } else if (doc.contains("lifetime")) {
        s.node_budgets = io_detail::lifetime_budgets(doc["lifetime"]);
    }
    s.epsilon = io_detail::get_or<double>(doc, "epsilon", 1e-4);
    s.max_iters = doc.contains("max_iters") ? io_detail::count(doc, "max_iters") : 200;
    if (doc.contains("fixture")) {
        const json& f = doc["fixture"];
        Fixture fx;
        if (f.contains("positions_m")) fx.positions = io_detail::points(f, "positions_m");
        fx.cell_volumes = io_detail::get_or<std::vector<double>>(f, "cell_volumes", {});
        if (f.contains("flow_split")) fx.flow_split = io_detail::matrix(f, "flow_split");
        s.fixture = std::move(fx);
    }
    validate(s);
    return s;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("scenario: cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_scenario(text);
}

/// Serializes with the radio block in SI form, so the result reloads to an
/// identical Scenario whatever form it was loaded from.
inline std::string dump_scenario(const Scenario& s) {
    using io_detail::json;
    using io_detail::to_json;
    json doc;
    doc["name"] = s.name;
    doc["region_m"] = to_json(s.region);
    if (s.density.kind == DensitySpec::Kind::uniform) {
        doc["density"] = {{"kind", "uniform"}};
    } else {
        json comps = json::array();
        for (const auto& c : s.density.components) {
            comps.push_back({{"weight", c.weight}, {"mean_m", to_json(c.mean)}, {"variance_m2", c.variance}});
        }
        doc["density"] = {{"kind", "gaussian_mixture"}, {"components", comps}};
    }
    doc["num_aps"] = s.num_aps;
    doc["num_fcs"] = s.num_fcs;
    doc["bit_rate_bps"] = s.bit_rate;
    doc["lambda"] = s.lambda;
    doc["radio"] = {{"eta_j_per_bit_m2", s.radio.eta},
                    {"rho_j_per_bit", s.radio.rho},
                    {"beta_j_per_bit_m2", to_json(s.radio.beta)}};
    if (!s.move_costs.empty()) doc["move_cost_j_per_m"] = s.move_costs;
    if (s.total_budget) doc["total_budget_joules"] = *s.total_budget;
    if (s.node_budgets) doc["node_budgets_joules"] = *s.node_budgets;
    doc["epsilon"] = s.epsilon;
    doc["max_iters"] = s.max_iters;
    if (s.fixture) {
        json f = json::object();
        if (!s.fixture->positions.empty()) f["positions_m"] = to_json(s.fixture->positions);
        if (!s.fixture->cell_volumes.empty()) f["cell_volumes"] = s.fixture->cell_volumes;
        if (s.fixture->flow_split.rows() != 0) f["flow_split"] = to_json(s.fixture->flow_split);
        doc["fixture"] = f;
    }
    return doc.dump(2) + "\n";
}

inline void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("scenario: cannot write '" + path + "'");
    out << dump_scenario(s);
    if (!out) throw config_error("scenario: write failed for '" + path + "'");
}

/// Reads an initial deployment: CSV with x_m,y_m per line (header optional),
/// one row per node.
inline std::vector<Point2> read_positions_csv(std::istream& in) {
    std::vector<Point2> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',')) {
            throw config_error("initial deployment: expected x_m,y_m per line");
        }
        try {
            out.push_back({std::stod(a), std::stod(b)});
        } catch (const std::exception&) {
            if (out.empty()) continue; // header
            throw config_error("initial deployment: bad number in '" + line + "'");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Output writers. Numbers are written with %.17g so reruns are byte-identical.

inline void write_deployment_csv(std::ostream& out, const Deployment& d, std::size_t num_aps) {
    using io_detail::fmt;
    out << "node,kind,x_m,y_m,initial_x_m,initial_y_m\n";
    for (std::size_t n = 0; n < d.size(); ++n) {
        const Point2& p = d.positions()[n];
        const Point2& q = d.initial()[n];
        out << n + 1 << ',' << (n < num_aps ? "ap" : "fc") << ',' << fmt(p.x) << ',' << fmt(p.y) << ','
            << fmt(q.x) << ',' << fmt(q.y) << '\n';
    }
}

/// Trace with one movement-energy column per node; without move costs the
/// columns hold distances from the initial positions instead.
inline void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace,
                            const std::vector<double>& move_costs, std::size_t num_nodes) {
    using io_detail::fmt;
    const bool energy = move_costs.size() == num_nodes;
    out << "iteration,objective_watts";
    for (std::size_t n = 0; n < num_nodes; ++n) {
        out << ',' << (energy ? "energy_j_" : "distance_m_") << n + 1;
    }
    out << '\n';
    for (const auto& row : trace) {
        out << row.iteration << ',' << fmt(row.objective);
        for (std::size_t n = 0; n < num_nodes; ++n) {
            out << ',' << fmt(energy ? move_costs[n] * row.displacement[n] : row.displacement[n]);
        }
        out << '\n';
    }
}

struct RunSummary {
    std::string scenario;
    Algorithm algorithm = Algorithm::rl;
    std::uint64_t seed = 0;
    GridResolution grid;
    double final_objective = 0.0;
    std::optional<double> total_movement_energy;
    double total_distance = 0.0;
    std::size_t iterations = 0;
    Termination termination = Termination::max_iters;
};

inline RunSummary summarize(const Scenario& s, Algorithm algo, std::uint64_t seed, GridResolution grid,
                            const RunResult& r) {
    RunSummary out;
    out.scenario = s.name;
    out.algorithm = algo;
    out.seed = seed;
    out.grid = grid;
    out.final_objective = r.final_objective();
    if (s.move_costs.size() == s.num_nodes()) out.total_movement_energy = movement_energy(r.deployment, s.move_costs).total;
    for (double d : r.trace.back().displacement) out.total_distance += d;
    out.iterations = r.iterations();
    out.termination = r.termination;
    return out;
}

inline void write_summary_json(std::ostream& out, const RunSummary& s) {
    using io_detail::fmt;
    // Hand-rolled so the number format matches the CSV files.
    out << "{\n";
    out << "  \"scenario\": " << io_detail::json(s.scenario).dump() << ",\n";
    out << "  \"algorithm\": \"" << to_string(s.algorithm) << "\",\n";
    out << "  \"seed\": " << s.seed << ",\n";
    out << "  \"grid\": \"" << s.grid.nx << 'x' << s.grid.ny << "\",\n";
    out << "  \"final_objective_watts\": " << fmt(s.final_objective) << ",\n";
    out << "  \"total_movement_energy_joules\": "
        << (s.total_movement_energy ? fmt(*s.total_movement_energy) : std::string("null")) << ",\n";
    out << "  \"total_distance_m\": " << fmt(s.total_distance) << ",\n";
    out << "  \"iterations\": " << s.iterations << ",\n";
    out << "  \"termination\": \"" << to_string(s.termination) << "\"\n";
    out << "}\n";
}

} // namespace wsndeploy
