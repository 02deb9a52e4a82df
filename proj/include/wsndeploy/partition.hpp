#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "domain.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "routing.hpp"

namespace wsndeploy {

/// Everything the power objective needs besides geometry and routing.
struct CostModel {
    RadioParams radio;
    double lambda = 0.0;
    double bit_rate = 1.0;

    std::size_t num_aps() const { return radio.eta.size(); }
};

inline CostModel cost_model(const Scenario& s) { return {s.radio, s.lambda, s.bit_rate}; }

/// Point-wise cell assignment. Cells may be non-convex or disconnected, so no
/// polygonal form is kept.
struct Partition {
    std::vector<std::size_t> owner;   // AP index per field point
    std::vector<CellStats> cells;     // per AP

    std::vector<double> volumes() const {
        std::vector<double> v(cells.size());
        for (std::size_t n = 0; n < cells.size(); ++n) v[n] = cells[n].volume;
        return v;
    }
};

inline Partition make_partition(const DiscretizedField& field, std::vector<std::size_t> owner, std::size_t num_aps) {
    Partition p{std::move(owner), {}};
    p.cells = all_cell_stats(field, p.owner, num_aps);
    return p;
}

/// Generalized Voronoi assignment: each point goes to
/// argmin_n eta_n |p_n - w|^2 + lambda (g_n + rho_n), ties to the smaller index.
inline Partition voronoi_assign(std::span<const Point2> positions, std::span<const double> power_coeffs,
                                const CostModel& model, const DiscretizedField& field) {
    const std::size_t N = model.num_aps();
    if (power_coeffs.size() != N) throw invalid_parameter("voronoi_assign: one power coefficient per AP required");
    if (positions.size() <= N) throw invalid_parameter("voronoi_assign: deployment must hold N+M positions");

    std::vector<double> offset(N);
    for (std::size_t n = 0; n < N; ++n) offset[n] = model.lambda * power_coeffs[n] + model.lambda * model.radio.rho[n];

    std::vector<std::size_t> owner(field.size(), 0);
    for (std::size_t k = 0; k < field.size(); ++k) {
        const Point2& w = field.points[k];
        std::size_t best = 0;
        double best_cost = model.radio.eta[0] * squared_distance(positions[0], w) + offset[0];
        for (std::size_t n = 1; n < N; ++n) {
            const double c = model.radio.eta[n] * squared_distance(positions[n], w) + offset[n];
            if (c < best_cost) { best_cost = c; best = n; }
        }
        owner[k] = best;
    }
    return make_partition(field, std::move(owner), N);
}

struct ObjectiveTerms {
    double sensor_transmit = 0.0;  // W
    double ap_transmit = 0.0;      // W
    double ap_receive = 0.0;       // W
    double total = 0.0;            // sensor + lambda (transmit + receive)
};

/// Total power straight from its definition: sensor uplink, AP link
/// transmission and AP reception.
inline ObjectiveTerms objective_terms(std::span<const Point2> positions, const Partition& partition,
                                      const Matrix& split, const CostModel& model, const DiscretizedField& field) {
    const std::size_t N = model.num_aps();
    const Routing routing = propagate_flows(partition.volumes(), split, model.bit_rate);

    ObjectiveTerms t;
    for (std::size_t k = 0; k < field.size(); ++k) {
        const std::size_t n = partition.owner[k];
        t.sensor_transmit += model.radio.eta[n] * squared_distance(positions[n], field.points[k]) * model.bit_rate
                             * field.weights[k];
    }
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < split.cols(); ++j) {
            const double f = routing.flows(i, j);
            if (f == 0.0) continue;
            t.ap_transmit += model.radio.beta(i, j) * squared_distance(positions[i], positions[j]) * f;
        }
    }
    for (std::size_t n = 0; n < N; ++n) {
        double in = 0.0;
        for (std::size_t i = 0; i < N; ++i) in += routing.flows(i, n);
        t.ap_receive += model.radio.rho[n] * (in + model.bit_rate * partition.cells[n].volume);
    }
    t.total = t.sensor_transmit + model.lambda * (t.ap_transmit + t.ap_receive);
    return t;
}

inline double objective_direct(std::span<const Point2> positions, const Partition& partition, const Matrix& split,
                               const CostModel& model, const DiscretizedField& field) {
    return objective_terms(positions, partition, split, model, field).total;
}

/// Same objective written through the AP power coefficients: every sensor
/// pays its uplink plus lambda (g_n + rho_n) per bit.
inline double objective_coeff(std::span<const Point2> positions, const Partition& partition, const Matrix& split,
                              const CostModel& model, const DiscretizedField& field) {
    const std::vector<double> g = power_coefficients(positions, split, model.radio);
    double total = 0.0;
    for (std::size_t k = 0; k < field.size(); ++k) {
        const std::size_t n = partition.owner[k];
        const double per_bit = model.radio.eta[n] * squared_distance(positions[n], field.points[k])
                               + model.lambda * g[n] + model.lambda * model.radio.rho[n];
        total += per_bit * model.bit_rate * field.weights[k];
    }
    return total;
}

/// Sensor term split into the moment about each cell centroid plus the
/// centroid offset (parallel axis theorem); other terms as in objective_direct.
inline double objective_parallel_axis(std::span<const Point2> positions, const Partition& partition,
                                      const Matrix& split, const CostModel& model, const DiscretizedField& field) {
    const std::size_t N = model.num_aps();
    ObjectiveTerms t = objective_terms(positions, partition, split, model, field);
    double sensor = 0.0;
    for (std::size_t k = 0; k < field.size(); ++k) {
        const std::size_t n = partition.owner[k];
        const Point2 c = *partition.cells[n].centroid; // owned point => non-empty cell
        sensor += model.radio.eta[n] * model.bit_rate * field.weights[k] * squared_distance(c, field.points[k]);
    }
    for (std::size_t n = 0; n < N; ++n) {
        const CellStats& cell = partition.cells[n];
        if (!cell.centroid) continue;
        sensor += model.radio.eta[n] * model.bit_rate * cell.volume * squared_distance(positions[n], *cell.centroid);
    }
    return sensor + model.lambda * (t.ap_transmit + t.ap_receive);
}

} // namespace wsndeploy
