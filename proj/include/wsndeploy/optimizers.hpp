#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "domain.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "partition.hpp"
#include "routing.hpp"

namespace wsndeploy {

/// Node positions plus the initial positions they are measured from.
/// The initial positions never change after construction.
class Deployment {
public:
    Deployment() = default;
    explicit Deployment(std::vector<Point2> initial) : positions_(initial), initial_(std::move(initial)) {}
    Deployment(std::vector<Point2> initial, std::vector<Point2> positions)
        : positions_(std::move(positions)), initial_(std::move(initial)) {
        if (positions_.size() != initial_.size()) {
            throw invalid_parameter("deployment: positions and initial positions differ in length");
        }
    }

    std::span<const Point2> positions() const { return positions_; }
    std::span<const Point2> initial() const { return initial_; }
    std::size_t size() const { return positions_.size(); }

    void set_positions(std::vector<Point2> p) {
        if (p.size() != initial_.size()) throw invalid_parameter("deployment: wrong number of positions");
        positions_ = std::move(p);
    }

private:
    std::vector<Point2> positions_;
    std::vector<Point2> initial_;
};

/// Uniformly random positions inside a convex region (rejection sampling on
/// the bounding box). Fully determined by `seed`.
inline std::vector<Point2> random_positions(std::span<const Point2> region, std::size_t count, std::uint64_t seed) {
    const BoundingBox box = bounding_box(region);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x);
    std::uniform_real_distribution<double> uy(box.lo.y, box.hi.y);
    std::vector<Point2> out;
    out.reserve(count);
    while (out.size() < count) {
        const Point2 p{ux(rng), uy(rng)};
        if (contains(region, p)) out.push_back(p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Per-node quantities used by the position updates.

/// Optimal position of each node with the partition, routing and every other
/// node held fixed. A node with nothing pulling on it keeps its position.
inline std::vector<Point2> z_points(std::span<const Point2> positions, std::span<const CellStats> cells,
                                    const Matrix& flows, const CostModel& model) {
    const std::size_t N = model.num_aps();
    const std::size_t total = positions.size();
    const Matrix& beta = model.radio.beta;
    std::vector<Point2> z(total);

    for (std::size_t i = 0; i < N; ++i) {
        const double sensor_w = model.radio.eta[i] * model.bit_rate * cells[i].volume;
        Point2 num = cells[i].centroid ? sensor_w * *cells[i].centroid : Point2{};
        double den = sensor_w;
        Point2 link_num;
        double link_den = 0.0;
        for (std::size_t j = 0; j < total; ++j) {
            if (j == i) continue;
            const double out_w = beta(i, j) * flows(i, j);
            const double in_w = j < N ? beta(j, i) * flows(j, i) : 0.0;
            const double w = out_w + in_w;
            if (w == 0.0) continue;
            link_num += w * positions[j];
            link_den += w;
        }
        num += model.lambda * link_num;
        den += model.lambda * link_den;
        z[i] = den > 0.0 ? num * (1.0 / den) : positions[i];
    }
    // FCs only enter the objective through lambda; without it they have no
    // preferred position.
    for (std::size_t i = N; i < total; ++i) {
        if (model.lambda == 0.0) {
            z[i] = positions[i];
            continue;
        }
        Point2 num;
        double den = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            const double w = beta(j, i) * flows(j, i);
            if (w == 0.0) continue;
            num += w * positions[j];
            den += w;
        }
        z[i] = den > 0.0 ? num * (1.0 / den) : positions[i];
    }
    return z;
}

/// Curvature weight of the objective in each node's position (W/m^2): the
/// objective is psi_n |p_n - z_n|^2 plus terms independent of p_n.
inline std::vector<double> psi(std::span<const double> volumes, const Matrix& flows, const CostModel& model,
                               std::size_t num_nodes) {
    const std::size_t N = model.num_aps();
    const Matrix& beta = model.radio.beta;
    std::vector<double> out(num_nodes, 0.0);
    for (std::size_t n = 0; n < N; ++n) {
        double links = 0.0;
        for (std::size_t k = 0; k < num_nodes; ++k) {
            if (k == n) continue;
            links += beta(n, k) * flows(n, k);
            if (k < N) links += beta(k, n) * flows(k, n);
        }
        out[n] = model.radio.eta[n] * model.bit_rate * volumes[n] + model.lambda * links;
    }
    for (std::size_t n = N; n < num_nodes; ++n) {
        double links = 0.0;
        for (std::size_t k = 0; k < N; ++k) links += beta(k, n) * flows(k, n);
        out[n] = model.lambda * links;
    }
    return out;
}

struct MovementEnergy {
    std::vector<double> per_node; // J
    double total = 0.0;
};

/// Linear movement model: E_n = zeta_n |p_n - p~_n|.
inline MovementEnergy movement_energy(std::span<const Point2> positions, std::span<const Point2> initial,
                                      std::span<const double> move_costs) {
    MovementEnergy e;
    e.per_node.resize(positions.size());
    for (std::size_t n = 0; n < positions.size(); ++n) {
        e.per_node[n] = move_costs[n] * distance(positions[n], initial[n]);
        e.total += e.per_node[n];
    }
    return e;
}

inline MovementEnergy movement_energy(const Deployment& d, std::span<const double> move_costs) {
    return movement_energy(d.positions(), d.initial(), move_costs);
}

/// Moving efficiency chi_n = (psi_n / zeta_n) |p_n - z_n|.
inline std::vector<double> chi(std::span<const Point2> positions, std::span<const Point2> z,
                               std::span<const double> psi_values, std::span<const double> move_costs) {
    std::vector<double> out(positions.size());
    for (std::size_t n = 0; n < positions.size(); ++n) {
        out[n] = psi_values[n] / move_costs[n] * distance(positions[n], z[n]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constrained moves.

/// Displacements below this length (m) count as "already at the target".
inline constexpr double kMinDisplacement = 1e-9;

struct MovePlan {
    std::vector<Point2> z;             // target points
    std::vector<Point2> displacement;  // Gamma_n = z_n - p~_n
    std::vector<double> tau;           // J to reach z_n from p~_n
    std::vector<double> psi;
    std::vector<double> kappa;         // zeta^2 / psi, 0 when psi = 0
    std::vector<double> fraction;      // p_n = p~_n + fraction_n Gamma_n
    std::vector<bool> dynamic;         // member of the allocation's dynamic set
    double available = 0.0;            // budget shared by the dynamic set (J)
    double excess = 0.0;               // sum tau over dynamic set minus available, >= 0
};

struct MoveResult {
    std::vector<Point2> positions;
    MovePlan plan;
};

/// Total-budget move: nodes head from p~ toward z, and when the budget binds
/// the shortfall is shared in proportion to kappa_n so every moving node ends
/// with the same moving efficiency. Nodes whose share would be non-positive
/// are dropped and the share recomputed.
///
/// Nodes with psi_n = 0 or |Gamma_n| < kMinDisplacement are pinned: they sit
/// at z_n and their energy is reserved first. If the pinned nodes alone would
/// exceed the budget they stay at p~ instead.
inline MoveResult merl_move(std::span<const Point2> initial, std::span<const Point2> z,
                            std::span<const double> psi_values, std::span<const double> move_costs, double budget) {
    if (!(budget >= 0.0)) throw invalid_parameter("total_budget_joules: must be non-negative");
    const std::size_t total = initial.size();

    MovePlan plan;
    plan.z.assign(z.begin(), z.end());
    plan.psi.assign(psi_values.begin(), psi_values.end());
    plan.displacement.resize(total);
    plan.tau.resize(total);
    plan.kappa.assign(total, 0.0);
    plan.fraction.assign(total, 0.0);
    plan.dynamic.assign(total, false);

    std::vector<bool> pinned(total, false);
    double reserved = 0.0;
    for (std::size_t n = 0; n < total; ++n) {
        plan.displacement[n] = z[n] - initial[n];
        const double len = norm(plan.displacement[n]);
        plan.tau[n] = move_costs[n] * len;
        if (psi_values[n] > 0.0) plan.kappa[n] = move_costs[n] * move_costs[n] / psi_values[n];
        if (psi_values[n] == 0.0 || len < kMinDisplacement) {
            pinned[n] = true;
            reserved += plan.tau[n];
        } else {
            plan.dynamic[n] = true;
        }
    }
    const bool pin_at_target = reserved <= budget;
    if (!pin_at_target) reserved = 0.0;
    plan.available = budget - reserved;

    // Shrink the dynamic set until every remaining share is positive.
    for (;;) {
        double sum_tau = 0.0;
        double sum_kappa = 0.0;
        for (std::size_t n = 0; n < total; ++n) {
            if (!plan.dynamic[n]) continue;
            sum_tau += plan.tau[n];
            sum_kappa += plan.kappa[n];
        }
        plan.excess = std::max(0.0, sum_tau - plan.available);
        bool removed = false;
        for (std::size_t n = 0; n < total; ++n) {
            if (!plan.dynamic[n]) continue;
            const double r = plan.excess == 0.0 ? 1.0 : 1.0 - plan.excess * plan.kappa[n] / (plan.tau[n] * sum_kappa);
            plan.fraction[n] = r;
            if (r <= 0.0) {
                plan.dynamic[n] = false;
                plan.fraction[n] = 0.0;
                removed = true;
            }
        }
        if (!removed) break;
    }

    std::vector<Point2> out(total);
    for (std::size_t n = 0; n < total; ++n) {
        if (pinned[n]) {
            out[n] = pin_at_target ? z[n] : initial[n];
            plan.fraction[n] = pin_at_target ? 1.0 : 0.0;
        } else if (!plan.dynamic[n]) {
            out[n] = initial[n];
        } else if (plan.fraction[n] == 1.0) {
            out[n] = z[n];
        } else {
            out[n] = initial[n] + plan.fraction[n] * plan.displacement[n];
        }
    }
    return {std::move(out), std::move(plan)};
}

/// Per-node budget move: step from p~_n toward z_n, clipped at radius
/// gamma_n / zeta_n.
inline MoveResult lorl_move(std::span<const Point2> initial, std::span<const Point2> z,
                            std::span<const double> move_costs, std::span<const double> budgets) {
    const std::size_t total = initial.size();
    MovePlan plan;
    plan.z.assign(z.begin(), z.end());
    plan.displacement.resize(total);
    plan.tau.resize(total);
    plan.fraction.assign(total, 1.0);
    plan.dynamic.assign(total, false);

    std::vector<Point2> out(total);
    for (std::size_t n = 0; n < total; ++n) {
        if (!(budgets[n] >= 0.0)) throw invalid_parameter("node_budgets_joules: entries must be non-negative");
        plan.displacement[n] = z[n] - initial[n];
        plan.tau[n] = move_costs[n] * norm(plan.displacement[n]);
        if (plan.tau[n] <= budgets[n]) {
            out[n] = z[n];
        } else {
            plan.fraction[n] = budgets[n] / plan.tau[n];
            out[n] = initial[n] + plan.fraction[n] * plan.displacement[n];
        }
        plan.dynamic[n] = out[n] != initial[n];
    }
    return {std::move(out), std::move(plan)};
}

// ---------------------------------------------------------------------------
// Fixed-point drivers.

struct TraceRow {
    std::size_t iteration = 0;
    double objective = 0.0;              // W
    std::vector<double> displacement;    // m, |p_n - p~_n| per node
    std::vector<Point2> positions;
};

enum class Termination { converged, max_iters };

inline const char* to_string(Termination t) { return t == Termination::converged ? "converged" : "max-iters"; }

struct RunResult {
    Deployment deployment;
    Partition partition;
    Routing routing;
    std::vector<TraceRow> trace;   // row 0 is the initial state
    std::vector<MovePlan> plans;   // one per iteration
    Termination termination = Termination::max_iters;

    std::size_t iterations() const { return trace.empty() ? 0 : trace.size() - 1; }
    double final_objective() const { return trace.back().objective; }
};

struct RunOptions {
    double epsilon = 1e-4;
    std::size_t max_iters = 200;
};

inline RunOptions run_options(const Scenario& s) { return {s.epsilon, s.max_iters}; }

/// Computes new positions from (initial positions, current positions, z, psi).
using PositionUpdate = std::function<MoveResult(std::span<const Point2> initial, std::span<const Point2> current,
                                                std::span<const Point2> z, std::span<const double> psi_values)>;

namespace detail {

inline std::vector<double> displacements(const Deployment& d) {
    std::vector<double> out(d.size());
    for (std::size_t n = 0; n < d.size(); ++n) out[n] = distance(d.positions()[n], d.initial()[n]);
    return out;
}

} // namespace detail

/// Shared iteration: generalized Voronoi partition, minimum-cost routing,
/// position update. Stops once the relative decrease drops below epsilon.
inline RunResult run_fixed_point(const CostModel& model, const DiscretizedField& field, std::vector<Point2> initial,
                                 const RunOptions& opts, const PositionUpdate& update) {
    const std::size_t N = model.num_aps();
    if (initial.size() <= N) throw invalid_parameter("initial deployment: need N+M positions");

    RunResult result;
    result.deployment = Deployment(std::move(initial));
    const Deployment& dep = result.deployment;

    Matrix split = bellman_ford_route(dep.positions(), model.radio);
    result.partition = voronoi_assign(dep.positions(), power_coefficients(dep.positions(), split, model.radio),
                                      model, field);
    double objective = objective_direct(dep.positions(), result.partition, split, model, field);
    result.trace.push_back({0, objective, detail::displacements(dep), {dep.positions().begin(), dep.positions().end()}});
    result.routing = propagate_flows(result.partition.volumes(), split, model.bit_rate);

    if (objective == 0.0) {
        result.termination = Termination::converged;
        return result;
    }

    for (std::size_t it = 1; it <= opts.max_iters; ++it) {
        const double previous = objective;

        const std::vector<double> g = power_coefficients(dep.positions(), split, model.radio);
        result.partition = voronoi_assign(dep.positions(), g, model, field);
        split = bellman_ford_route(dep.positions(), model.radio);
        result.routing = propagate_flows(result.partition.volumes(), split, model.bit_rate);

        const std::vector<Point2> z = z_points(dep.positions(), result.partition.cells, result.routing.flows, model);
        const std::vector<double> w = psi(result.partition.volumes(), result.routing.flows, model, dep.size());
        MoveResult move = update(dep.initial(), dep.positions(), z, w);
        if (move.plan.psi.empty()) move.plan.psi = w;
        result.deployment.set_positions(std::move(move.positions));
        result.plans.push_back(std::move(move.plan));

        objective = objective_direct(dep.positions(), result.partition, split, model, field);
        result.trace.push_back({it, objective, detail::displacements(dep), {dep.positions().begin(), dep.positions().end()}});

        if (previous == 0.0 || (previous - objective) / previous < opts.epsilon) {
            result.termination = Termination::converged;
            return result;
        }
    }
    result.termination = Termination::max_iters;
    return result;
}

/// Unconstrained: every node jumps to its z-point.
inline RunResult rl_run(const Scenario& s, const DiscretizedField& field, std::vector<Point2> initial) {
    validate_for(s, Algorithm::rl);
    return run_fixed_point(cost_model(s), field, std::move(initial), run_options(s),
                           [](std::span<const Point2>, std::span<const Point2>, std::span<const Point2> z,
                              std::span<const double>) {
                               MoveResult m;
                               m.positions.assign(z.begin(), z.end());
                               m.plan.z = m.positions;
                               m.plan.fraction.assign(z.size(), 1.0);
                               return m;
                           });
}

/// Total movement budget shared across all nodes, measured from the initial
/// deployment.
inline RunResult merl_run(const Scenario& s, const DiscretizedField& field, std::vector<Point2> initial) {
    validate_for(s, Algorithm::merl);
    const std::vector<double> zeta = s.move_costs;
    const double budget = *s.total_budget;
    return run_fixed_point(cost_model(s), field, std::move(initial), run_options(s),
                           [&zeta, budget](std::span<const Point2> p0, std::span<const Point2>,
                                           std::span<const Point2> z, std::span<const double> w) {
                               return merl_move(p0, z, w, zeta, budget);
                           });
}

/// Individual movement budgets per node.
inline RunResult lorl_run(const Scenario& s, const DiscretizedField& field, std::vector<Point2> initial) {
    validate_for(s, Algorithm::lorl);
    const std::vector<double> zeta = s.move_costs;
    const std::vector<double> budgets = *s.node_budgets;
    return run_fixed_point(cost_model(s), field, std::move(initial), run_options(s),
                           [&zeta, &budgets](std::span<const Point2> p0, std::span<const Point2>,
                                             std::span<const Point2> z, std::span<const double>) {
                               return lorl_move(p0, z, zeta, budgets);
                           });
}

inline RunResult run(Algorithm algo, const Scenario& s, const DiscretizedField& field, std::vector<Point2> initial) {
    switch (algo) {
    case Algorithm::rl: return rl_run(s, field, std::move(initial));
    case Algorithm::merl: return merl_run(s, field, std::move(initial));
    case Algorithm::lorl: return lorl_run(s, field, std::move(initial));
    }
    throw invalid_parameter("algorithm: unknown");
}

} // namespace wsndeploy
