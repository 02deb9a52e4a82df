#pragma once

// Shared fixtures and brute-force oracles for the test binaries. The oracles
// deliberately avoid the library's own helpers (topological order, power
// coefficients, cell stats) so they can catch mistakes in them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <wsndeploy/wsndeploy.hpp>

namespace wsntest {

using namespace wsndeploy;

inline std::string scenario_path(const std::string& name) { return std::string(WSN_SCENARIO_DIR) + "/" + name; }

inline Polygon box(double w, double h) { return {{0, 0}, {w, 0}, {w, h}, {0, h}}; }

inline RadioParams constant_radio(std::size_t N, std::size_t M, double eta, double rho, double beta) {
    RadioParams r;
    r.eta.assign(N, eta);
    r.rho.assign(N, rho);
    r.beta = Matrix(N, N + M);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N + M; ++j)
            if (i != j) r.beta(i, j) = beta;
    return r;
}

inline RadioParams random_radio(std::mt19937_64& rng, std::size_t N, std::size_t M) {
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::uniform_real_distribution<double> ur(0.0, 0.5);
    RadioParams r;
    r.beta = Matrix(N, N + M);
    for (std::size_t i = 0; i < N; ++i) {
        r.eta.push_back(u(rng));
        r.rho.push_back(ur(rng));
        for (std::size_t j = 0; j < N + M; ++j)
            if (i != j) r.beta(i, j) = u(rng);
    }
    return r;
}

inline std::vector<Point2> random_points(std::mt19937_64& rng, std::size_t count, double w, double h) {
    std::uniform_real_distribution<double> ux(0.0, w), uy(0.0, h);
    std::vector<Point2> out;
    for (std::size_t k = 0; k < count; ++k) out.push_back({ux(rng), uy(rng)});
    return out;
}

/// Random acyclic row-stochastic split: a random priority order over the
/// APs, each AP may send only to lower-priority APs or to FCs.
inline Matrix random_dag_split(std::mt19937_64& rng, std::size_t N, std::size_t M, double density = 0.5) {
    std::vector<std::size_t> rank(N);
    std::iota(rank.begin(), rank.end(), 0);
    std::shuffle(rank.begin(), rank.end(), rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix s(N, N + M);
    for (std::size_t i = 0; i < N; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < N + M; ++j) {
            const bool allowed = j >= N ? true : rank[j] > rank[i];
            if (!allowed || u(rng) > density) continue;
            s(i, j) = u(rng) + 0.05;
            sum += s(i, j);
        }
        if (sum == 0.0) {
            const std::size_t fc = N + static_cast<std::size_t>(u(rng) * static_cast<double>(M)) % M;
            s(i, fc) = 1.0;
            sum = 1.0;
        }
        for (std::size_t j = 0; j < N + M; ++j) s(i, j) /= sum;
    }
    return s;
}

/// Flows by Jacobi sweeps of F = R_b v + S^T F (exact after N sweeps on a DAG).
inline Matrix oracle_flows(const std::vector<double>& v, const Matrix& s, double rb) {
    const std::size_t N = s.rows();
    std::vector<double> out(N, 0.0);
    for (std::size_t sweep = 0; sweep <= N; ++sweep) {
        std::vector<double> next(N);
        for (std::size_t i = 0; i < N; ++i) {
            double in = 0.0;
            for (std::size_t j = 0; j < N; ++j) in += s(j, i) * out[j];
            next[i] = rb * v[i] + in;
        }
        out = next;
    }
    Matrix f(N, s.cols());
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < s.cols(); ++j) f(i, j) = s(i, j) * out[i];
    return f;
}

inline double link_cost(const std::vector<Point2>& p, const RadioParams& r, std::size_t i, std::size_t j) {
    const double dx = p[i].x - p[j].x, dy = p[i].y - p[j].y;
    return r.beta(i, j) * (dx * dx + dy * dy) + (j < r.eta.size() ? r.rho[j] : 0.0);
}

/// Minimum cost over all simple AP-n-to-FC paths, by exhaustive DFS.
inline double oracle_min_path_cost(const std::vector<Point2>& p, const RadioParams& r, std::size_t n) {
    const std::size_t N = r.eta.size();
    double best = std::numeric_limits<double>::infinity();
    std::vector<bool> seen(N, false);
    auto dfs = [&](auto&& self, std::size_t u, double acc) -> void {
        seen[u] = true;
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (j == u) continue;
            const double c = acc + link_cost(p, r, u, j);
            if (j >= N) {
                best = std::min(best, c);
            } else if (!seen[j]) {
                self(self, j, c);
            }
        }
        seen[u] = false;
    };
    dfs(dfs, n, 0.0);
    return best;
}

/// Objective summed straight from its three terms over an owner vector.
inline double oracle_objective(const std::vector<Point2>& p, const std::vector<std::size_t>& owner,
                               const Matrix& s, const RadioParams& r, double lambda, double rb,
                               const DiscretizedField& field) {
    const std::size_t N = r.eta.size();
    std::vector<double> v(N, 0.0);
    double sensor = 0.0;
    for (std::size_t k = 0; k < field.size(); ++k) {
        const std::size_t n = owner[k];
        v[n] += field.weights[k];
        const double dx = p[n].x - field.points[k].x, dy = p[n].y - field.points[k].y;
        sensor += r.eta[n] * (dx * dx + dy * dy) * rb * field.weights[k];
    }
    const Matrix f = oracle_flows(v, s, rb);
    double tx = 0.0, rx = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < s.cols(); ++j) {
            if (j == i) continue;
            const double dx = p[i].x - p[j].x, dy = p[i].y - p[j].y;
            tx += r.beta(i, j) * (dx * dx + dy * dy) * f(i, j);
            if (j < N) rx += r.rho[j] * f(i, j);
        }
        rx += r.rho[i] * rb * v[i];
    }
    return sensor + lambda * (tx + rx);
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Scenario built from a small square region and a constant or random radio.
inline Scenario small_scenario(std::size_t N, std::size_t M, RadioParams radio, double lambda, double side = 10.0) {
    Scenario s;
    s.name = "small";
    s.region = box(side, side);
    s.num_aps = N;
    s.num_fcs = M;
    s.radio = std::move(radio);
    s.bit_rate = 1.0;
    s.lambda = lambda;
    return s;
}

} // namespace wsntest
