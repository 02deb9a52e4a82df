#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "domain.hpp"
#include "geometry.hpp"

namespace wsndeploy {

/// Raised when a flow-split matrix violates the routing invariants
/// (cycle, path explosion).
class routing_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Normalized flow matrix S together with the flows it induces.
struct Routing {
    Matrix split;                 // s_{i,j}, N x (N+M)
    Matrix flows;                 // F_{i,j}, bits/s
    std::vector<double> outflow;  // F_i, bits/s
};

/// Energy per bit on link i -> j (i an AP): path loss plus receiver
/// electronics when j is an AP.
inline double edge_cost(std::span<const Point2> positions, std::size_t i, std::size_t j, const RadioParams& radio) {
    const std::size_t num_aps = radio.eta.size();
    if (i >= num_aps) throw invalid_parameter("edge_cost: link must originate at an AP");
    if (j >= positions.size() || j == i) throw invalid_parameter("edge_cost: invalid destination node");
    const double path_loss = radio.beta(i, j) * squared_distance(positions[i], positions[j]);
    return j < num_aps ? path_loss + radio.rho[j] : path_loss;
}

/// APs in topological order of the support graph of `split`; throws on a cycle.
inline std::vector<std::size_t> topological_order(const Matrix& split) {
    const std::size_t N = split.rows();
    std::vector<std::size_t> in_degree(N, 0);
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            if (split(i, j) > 0.0) {
                if (i == j) throw routing_error("flow split has a self loop at AP " + std::to_string(i));
                ++in_degree[j];
            }
        }
    }
    // Kahn's algorithm; the ready set is scanned in index order so the result
    // is deterministic.
    std::vector<std::size_t> order;
    order.reserve(N);
    std::vector<bool> done(N, false);
    while (order.size() < N) {
        std::size_t next = N;
        for (std::size_t i = 0; i < N; ++i) {
            if (!done[i] && in_degree[i] == 0) { next = i; break; }
        }
        if (next == N) throw routing_error("flow split contains a cycle");
        done[next] = true;
        order.push_back(next);
        for (std::size_t j = 0; j < N; ++j) {
            if (split(next, j) > 0.0) --in_degree[j];
        }
    }
    return order;
}

struct ShortestPaths {
    std::vector<double> cost;        // min path cost to the FC set per AP, J/bit
    std::vector<std::size_t> hops;   // fewest hops among min-cost paths
    std::vector<std::size_t> next;   // chosen first hop per AP
};

/// Bellman-Ford over the complete AP-origin graph towards a virtual sink
/// joined to every FC. Ties pick the smallest successor index among exact
/// minimisers; a successor at equal cost must be strictly closer in hops,
/// which keeps zero-cost links from closing a cycle.
inline ShortestPaths shortest_paths(std::span<const Point2> positions, const RadioParams& radio) {
    const std::size_t N = radio.eta.size();
    const std::size_t total = positions.size();
    if (total <= N) throw invalid_parameter("bellman_ford_route: need at least one FC");

    constexpr double inf = std::numeric_limits<double>::infinity();
    constexpr std::size_t no_hops = std::numeric_limits<std::size_t>::max();
    std::vector<double> d(total, 0.0);
    std::vector<std::size_t> hops(total, 0);
    for (std::size_t n = 0; n < N; ++n) { d[n] = inf; hops[n] = no_hops; }

    for (std::size_t pass = 0; pass <= N; ++pass) {
        bool changed = false;
        for (std::size_t n = 0; n < N; ++n) {
            for (std::size_t j = 0; j < total; ++j) {
                if (j == n || d[j] == inf) continue;
                const double cand = edge_cost(positions, n, j, radio) + d[j];
                const std::size_t cand_hops = hops[j] + 1;
                if (cand < d[n] || (cand == d[n] && cand_hops < hops[n])) {
                    d[n] = cand;
                    hops[n] = cand_hops;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }

    ShortestPaths out;
    out.cost.assign(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(N));
    out.hops.assign(hops.begin(), hops.begin() + static_cast<std::ptrdiff_t>(N));
    out.next.assign(N, total);
    for (std::size_t n = 0; n < N; ++n) {
        for (std::size_t j = 0; j < total; ++j) {
            if (j == n) continue;
            const double cand = edge_cost(positions, n, j, radio) + d[j];
            if (cand == d[n] && (d[j] < d[n] || hops[j] < hops[n])) {
                out.next[n] = j;
                break;
            }
        }
        if (out.next[n] == total) {
            throw routing_error("bellman_ford_route: no successor found for AP " + std::to_string(n));
        }
    }
    return out;
}

/// Tree-structured minimum-cost routing: s_{n,next(n)} = 1.
inline Matrix bellman_ford_route(std::span<const Point2> positions, const RadioParams& radio) {
    const ShortestPaths sp = shortest_paths(positions, radio);
    Matrix s(radio.eta.size(), positions.size());
    for (std::size_t n = 0; n < sp.next.size(); ++n) s(n, sp.next[n]) = 1.0;
    return s;
}

/// Every AP sends straight to its cheapest FC, no relaying.
inline Matrix direct_baseline(std::span<const Point2> positions, const RadioParams& radio) {
    const std::size_t N = radio.eta.size();
    const std::size_t total = positions.size();
    if (total <= N) throw invalid_parameter("direct_baseline: need at least one FC");
    Matrix s(N, total);
    for (std::size_t n = 0; n < N; ++n) {
        std::size_t best = N;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t fc = N; fc < total; ++fc) {
            const double c = edge_cost(positions, n, fc, radio);
            if (c < best_cost) { best_cost = c; best = fc; }
        }
        s(n, best) = 1.0;
    }
    return s;
}

/// Flow propagation in topological order:
/// F_i = R_b v_i + sum_j F_{j,i},  F_{i,j} = s_{i,j} F_i.
inline Routing propagate_flows(std::span<const double> volumes, const Matrix& split, double bit_rate) {
    const std::size_t N = split.rows();
    if (volumes.size() != N) throw invalid_parameter("propagate_flows: one volume per AP required");
    Routing r{split, Matrix(N, split.cols()), std::vector<double>(N, 0.0)};
    std::vector<double> inflow(N, 0.0);
    for (std::size_t i : topological_order(split)) {
        const double out = bit_rate * volumes[i] + inflow[i];
        r.outflow[i] = out;
        for (std::size_t j = 0; j < split.cols(); ++j) {
            const double s = split(i, j);
            if (s == 0.0) continue;
            const double f = s * out;
            r.flows(i, j) = f;
            if (j < N) inflow[j] += f;
        }
    }
    return r;
}

/// AP power coefficients g_n (J/bit), via g_n = sum_j s_{n,j} (e_{n,j} + g_j)
/// in reverse topological order with g = 0 at FCs.
inline std::vector<double> power_coefficients(std::span<const Point2> positions, const Matrix& split,
                                              const RadioParams& radio) {
    const std::size_t N = split.rows();
    const std::vector<std::size_t> order = topological_order(split);
    std::vector<double> g(N, 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t n = *it;
        double acc = 0.0;
        for (std::size_t j = 0; j < split.cols(); ++j) {
            const double s = split(n, j);
            if (s == 0.0) continue;
            acc += s * (edge_cost(positions, n, j, radio) + (j < N ? g[j] : 0.0));
        }
        g[n] = acc;
    }
    return g;
}

struct PathShare {
    std::vector<std::size_t> nodes; // starts at the AP, ends at an FC
    double share = 0.0;             // product of split entries along the path
};

/// All AP-n-to-FC paths with a positive share, depth first in successor
/// index order.
inline std::vector<PathShare> enumerate_paths(const Matrix& split, std::size_t n,
                                              std::size_t max_paths = 1'000'000) {
    const std::size_t N = split.rows();
    if (n >= N) throw invalid_parameter("enumerate_paths: origin must be an AP");
    topological_order(split); // rejects cycles up front

    std::vector<PathShare> out;
    std::vector<std::size_t> stack_nodes{n};
    auto dfs = [&](auto&& self, std::size_t u, double share) -> void {
        for (std::size_t j = 0; j < split.cols(); ++j) {
            const double s = split(u, j);
            if (s <= 0.0) continue;
            stack_nodes.push_back(j);
            if (j >= N) {
                if (out.size() >= max_paths) throw routing_error("enumerate_paths: path count bound exceeded");
                out.push_back({stack_nodes, share * s});
            } else {
                self(self, j, share * s);
            }
            stack_nodes.pop_back();
        }
    };
    dfs(dfs, n, 1.0);
    return out;
}

} // namespace wsndeploy
