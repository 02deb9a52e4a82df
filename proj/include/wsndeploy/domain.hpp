#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"

namespace wsndeploy {

/// Raised for any out-of-range or inconsistent problem parameter. The message
/// starts with the offending field name.
class invalid_parameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Node indexing used throughout: APs are 0..N-1, FCs are N..N+M-1.

/// Per-node radio coefficients, all SI.
struct RadioParams {
    std::vector<double> eta;  // J/bit/m^2, sensor -> AP n, size N
    std::vector<double> rho;  // J/bit, receiver electronics of AP n, size N
    Matrix beta;              // J/bit/m^2, N x (N+M), AP i -> node j

    friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

/// Physical radio tables from which eta and beta are derived.
struct PhysicalRadio {
    std::vector<double> p_th;      // W, receiver threshold per node, size N+M
    std::vector<double> g_t;       // transmitter gain per AP, size N
    std::vector<double> g_r;       // receiver gain per node, size N+M
    std::vector<double> rho;       // J/bit per AP, size N
    double g_t_sensor = 1.0;
    double carrier_wavelength = 0.0; // m
};

struct GaussianComponent {
    double weight = 0.0;
    Point2 mean;
    double variance = 0.0; // isotropic, m^2

    friend bool operator==(const GaussianComponent&, const GaussianComponent&) = default;
};

struct DensitySpec {
    enum class Kind { uniform, gaussian_mixture };
    Kind kind = Kind::uniform;
    std::vector<GaussianComponent> components;

    static DensitySpec uniform() { return {}; }
    static DensitySpec mixture(std::vector<GaussianComponent> comps) {
        return {Kind::gaussian_mixture, std::move(comps)};
    }

    friend bool operator==(const DensitySpec&, const DensitySpec&) = default;
};

/// Movement budget derived from a lifetime requirement.
struct LifetimeBudget {
    double residual_energy = 0.0;   // J
    double post_move_power = 0.0;   // W
    double lifetime = 0.0;          // s

    double budget() const {
        const double g = residual_energy - post_move_power * lifetime;
        if (!(g >= 0.0)) {
            throw invalid_parameter("node_budgets: residual energy cannot sustain the requested lifetime");
        }
        return g;
    }
};

/// Fixed state bundled with small worked-example scenarios.
struct Fixture {
    std::vector<Point2> positions;      // N+M
    std::vector<double> cell_volumes;   // N
    Matrix flow_split;                  // N x (N+M)

    friend bool operator==(const Fixture&, const Fixture&) = default;
};

struct Scenario {
    std::string name;
    Polygon region;
    DensitySpec density;
    std::size_t num_aps = 0;
    std::size_t num_fcs = 0;
    RadioParams radio;
    double bit_rate = 0.0;            // bits/s
    double lambda = 0.0;
    std::vector<double> move_costs;   // J/m per node; empty when not given
    std::optional<double> total_budget;              // J
    std::optional<std::vector<double>> node_budgets; // J per node
    double epsilon = 1e-4;
    std::size_t max_iters = 200;
    std::optional<Fixture> fixture;

    std::size_t num_nodes() const { return num_aps + num_fcs; }
    bool is_ap(std::size_t n) const { return n < num_aps; }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

inline double link_coefficient(double p_th, double g_t, double g_r, double r_b, double lambda_c,
                               const char* what) {
    if (!(p_th > 0.0) || !(g_t > 0.0) || !(g_r > 0.0) || !(r_b > 0.0) || !(lambda_c > 0.0)) {
        throw invalid_parameter(std::string(what) + ": all physical inputs must be positive");
    }
    const double four_pi = 4.0 * std::numbers::pi;
    return p_th * four_pi * four_pi / (r_b * g_t * g_r * lambda_c * lambda_c);
}

} // namespace detail

/// Sensor-to-AP path-loss coefficient, J/bit/m^2.
inline double derive_eta(double p_th, double g_t_sensor, double g_r, double r_b, double lambda_c) {
    return detail::link_coefficient(p_th, g_t_sensor, g_r, r_b, lambda_c, "eta");
}

/// AP i to node j path-loss coefficient: receiver threshold and gain of j,
/// transmitter gain of i.
inline double derive_beta(double p_th_j, double g_t_i, double g_r_j, double r_b, double lambda_c) {
    return detail::link_coefficient(p_th_j, g_t_i, g_r_j, r_b, lambda_c, "beta");
}

inline RadioParams derive_radio(const PhysicalRadio& phys, std::size_t num_aps, std::size_t num_fcs,
                                double r_b) {
    const std::size_t total = num_aps + num_fcs;
    if (phys.p_th.size() != total) throw invalid_parameter("p_th: expected one entry per node");
    if (phys.g_r.size() != total) throw invalid_parameter("g_r: expected one entry per node");
    if (phys.g_t.size() != num_aps) throw invalid_parameter("g_t: expected one entry per AP");
    if (phys.rho.size() != num_aps) throw invalid_parameter("rho: expected one entry per AP");

    RadioParams radio;
    radio.rho = phys.rho;
    radio.eta.resize(num_aps);
    radio.beta = Matrix(num_aps, total);
    for (std::size_t n = 0; n < num_aps; ++n) {
        radio.eta[n] = derive_eta(phys.p_th[n], phys.g_t_sensor, phys.g_r[n], r_b, phys.carrier_wavelength);
        for (std::size_t j = 0; j < total; ++j) {
            if (j == n) continue;
            radio.beta(n, j) = derive_beta(phys.p_th[j], phys.g_t[n], phys.g_r[j], r_b, phys.carrier_wavelength);
        }
    }
    return radio;
}

/// Density value at `point`. The mixture is evaluated untruncated; the
/// uniform density is 1/area(region).
inline double density_at(const DensitySpec& spec, double region_area, const Point2& point) {
    if (spec.kind == DensitySpec::Kind::uniform) {
        return 1.0 / region_area;
    }
    double value = 0.0;
    for (const auto& c : spec.components) {
        const double d2 = squared_distance(point, c.mean);
        value += c.weight * std::exp(-0.5 * d2 / c.variance) / (2.0 * std::numbers::pi * c.variance);
    }
    return value;
}

inline double density_at(const DensitySpec& spec, std::span<const Point2> region, const Point2& point) {
    return density_at(spec, area(region), point);
}

inline void validate(const DensitySpec& spec) {
    if (spec.kind == DensitySpec::Kind::uniform) return;
    if (spec.components.empty()) throw invalid_parameter("density.components: mixture needs at least one component");
    double total = 0.0;
    for (const auto& c : spec.components) {
        if (!(c.weight > 0.0)) throw invalid_parameter("density.components.weight: must be positive");
        if (!(c.variance > 0.0)) throw invalid_parameter("density.components.variance_m2: must be positive");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) throw invalid_parameter("density.components.weight: weights must sum to 1");
}

/// Structural validation shared by all algorithms.
inline void validate(const Scenario& s) {
    if (s.num_aps < 1) throw invalid_parameter("num_aps: need at least one AP");
    if (s.num_fcs < 1) throw invalid_parameter("num_fcs: need at least one FC");
    if (!is_convex(s.region)) throw invalid_parameter("region_m: must be a convex polygon with 3+ non-collinear vertices");
    validate(s.density);
    if (!(s.bit_rate > 0.0)) throw invalid_parameter("bit_rate_bps: must be positive");
    if (!(s.lambda >= 0.0)) throw invalid_parameter("lambda: must be non-negative");
    if (!(s.epsilon > 0.0)) throw invalid_parameter("epsilon: must be positive");

    const std::size_t N = s.num_aps;
    const std::size_t total = s.num_nodes();
    if (s.radio.eta.size() != N) throw invalid_parameter("eta: expected one entry per AP");
    if (s.radio.rho.size() != N) throw invalid_parameter("rho: expected one entry per AP");
    if (s.radio.beta.rows() != N || s.radio.beta.cols() != total) {
        throw invalid_parameter("beta: expected an N x (N+M) matrix");
    }
    for (std::size_t n = 0; n < N; ++n) {
        if (!(s.radio.eta[n] > 0.0)) throw invalid_parameter("eta: entries must be positive");
        if (!(s.radio.rho[n] >= 0.0)) throw invalid_parameter("rho: entries must be non-negative");
        for (std::size_t j = 0; j < total; ++j) {
            if (j != n && !(s.radio.beta(n, j) > 0.0)) throw invalid_parameter("beta: off-diagonal entries must be positive");
        }
    }
    if (!s.move_costs.empty()) {
        if (s.move_costs.size() != total) throw invalid_parameter("move_cost_j_per_m: expected one entry per node");
        for (double z : s.move_costs) {
            if (!(z > 0.0)) throw invalid_parameter("move_cost_j_per_m: entries must be positive");
        }
    }
    if (s.total_budget && !(*s.total_budget >= 0.0)) {
        throw invalid_parameter("total_budget_joules: must be non-negative");
    }
    if (s.node_budgets) {
        if (s.node_budgets->size() != total) throw invalid_parameter("node_budgets_joules: expected one entry per node");
        for (double g : *s.node_budgets) {
            if (!(g >= 0.0)) throw invalid_parameter("node_budgets_joules: entries must be non-negative");
        }
    }
    if (s.fixture) {
        const Fixture& f = *s.fixture;
        if (!f.positions.empty() && f.positions.size() != total) {
            throw invalid_parameter("fixture.positions_m: expected one entry per node");
        }
        if (!f.cell_volumes.empty() && f.cell_volumes.size() != N) {
            throw invalid_parameter("fixture.cell_volumes: expected one entry per AP");
        }
        if (f.flow_split.rows() != 0 && (f.flow_split.rows() != N || f.flow_split.cols() != total)) {
            throw invalid_parameter("fixture.flow_split: expected an N x (N+M) matrix");
        }
    }
}

enum class Algorithm { rl, merl, lorl };

inline const char* to_string(Algorithm a) {
    switch (a) {
    case Algorithm::rl: return "rl";
    case Algorithm::merl: return "merl";
    case Algorithm::lorl: return "lorl";
    }
    return "?";
}

inline Algorithm parse_algorithm(const std::string& name) {
    if (name == "rl") return Algorithm::rl;
    if (name == "merl") return Algorithm::merl;
    if (name == "lorl") return Algorithm::lorl;
    throw invalid_parameter("algorithm: unknown algorithm '" + name + "' (expected rl, merl or lorl)");
}

/// Checks the parameters a given algorithm needs on top of validate().
inline void validate_for(const Scenario& s, Algorithm algo) {
    validate(s);
    if (algo == Algorithm::merl) {
        if (s.move_costs.empty()) throw invalid_parameter("move_cost_j_per_m: required for merl");
        if (!s.total_budget) throw invalid_parameter("total_budget_joules: required for merl");
    }
    if (algo == Algorithm::lorl) {
        if (s.move_costs.empty()) throw invalid_parameter("move_cost_j_per_m: required for lorl");
        if (!s.node_budgets) throw invalid_parameter("node_budgets_joules: required for lorl");
    }
}

} // namespace wsndeploy
