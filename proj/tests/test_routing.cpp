#include <gtest/gtest.h>

#include <algorithm>

#include "support.hpp"

using namespace wsntest;

namespace {

// Four nodes on the unit square corners; APs 1-3, FC 4; beta = rho = 1.
const std::vector<Point2> kSquare{{0, 0}, {0, 1}, {1, 0}, {1, 1}};

Matrix example_split() {
    Matrix s(3, 4);
    s(0, 1) = 0.4;
    s(0, 2) = 0.6;
    s(1, 2) = 0.25;
    s(1, 3) = 0.75;
    s(2, 3) = 1.0;
    return s;
}

RadioParams example_radio() { return constant_radio(3, 1, 1, 1, 1); }

double path_cost(const std::vector<Point2>& p, const RadioParams& r, const std::vector<std::size_t>& path) {
    double c = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) c += link_cost(p, r, path[k], path[k + 1]);
    return c;
}

} // namespace

TEST(EdgeCost, ExampleValues) {
    const auto r = example_radio();
    EXPECT_DOUBLE_EQ(edge_cost(kSquare, 0, 1, r), 2.0);
    EXPECT_DOUBLE_EQ(edge_cost(kSquare, 0, 2, r), 2.0);
    EXPECT_DOUBLE_EQ(edge_cost(kSquare, 1, 2, r), 3.0);
    EXPECT_DOUBLE_EQ(edge_cost(kSquare, 1, 3, r), 1.0);
    EXPECT_DOUBLE_EQ(edge_cost(kSquare, 2, 3, r), 1.0);
}

TEST(EdgeCost, CoLocatedAndErrors) {
    auto r = constant_radio(2, 1, 1, 0.7, 3);
    const std::vector<Point2> p{{2, 2}, {2, 2}, {5, 5}};
    EXPECT_DOUBLE_EQ(edge_cost(p, 0, 1, r), 0.7);
    EXPECT_THROW(edge_cost(p, 2, 0, r), invalid_parameter);
    EXPECT_THROW(edge_cost(p, 0, 0, r), invalid_parameter);
}

TEST(BellmanFord, ExampleTieBreak) {
    // With the direct 1 -> 4 link priced out, AP 1 has two routes of cost 3
    // (via AP 2 and via AP 3); the smaller successor index wins.
    auto r = example_radio();
    r.beta(0, 3) = 10.0;
    const Matrix s = bellman_ford_route(kSquare, r);
    EXPECT_EQ(s(0, 1), 1.0);
    EXPECT_EQ(s(0, 2), 0.0);
    EXPECT_EQ(s(1, 3), 1.0);
    EXPECT_EQ(s(2, 3), 1.0);
    const auto sp = shortest_paths(kSquare, r);
    EXPECT_DOUBLE_EQ(sp.cost[0], 3.0);
    EXPECT_DOUBLE_EQ(sp.cost[1], 1.0);
}

TEST(BellmanFord, ExampleWithDirectLink) {
    // beta = 1 everywhere: the direct diagonal costs 2 and beats both relays.
    const Matrix s = bellman_ford_route(kSquare, example_radio());
    EXPECT_EQ(s(0, 3), 1.0);
    EXPECT_DOUBLE_EQ(shortest_paths(kSquare, example_radio()).cost[0], 2.0);
}

TEST(BellmanFord, SingleApSingleFc) {
    const std::vector<Point2> p{{0, 0}, {3, 4}};
    const Matrix s = bellman_ford_route(p, constant_radio(1, 1, 1, 0, 1));
    EXPECT_EQ(s(0, 1), 1.0);
}

TEST(BellmanFord, MatchesExhaustivePaths) {
    std::mt19937_64 rng(11);
    for (int inst = 0; inst < 20; ++inst) {
        const std::size_t N = 5, M = 2;
        const auto p = random_points(rng, N + M, 10, 10);
        const auto r = random_radio(rng, N, M);
        const auto sp = shortest_paths(p, r);
        const Matrix s = bellman_ford_route(p, r);
        const auto g = power_coefficients(p, s, r);
        for (std::size_t n = 0; n < N; ++n) {
            const double oracle = oracle_min_path_cost(p, r, n);
            EXPECT_NEAR(sp.cost[n], oracle, 1e-12 * oracle);
            EXPECT_NEAR(g[n], oracle, 1e-12 * oracle);
            double row = 0.0;
            for (std::size_t j = 0; j < N + M; ++j) row += s(n, j);
            EXPECT_EQ(row, 1.0);
            EXPECT_EQ(s(n, n), 0.0);
        }
        EXPECT_NO_THROW(topological_order(s));
    }
}

TEST(BellmanFord, ZeroCostLinksStayAcyclic) {
    // Every node co-located and no receive cost: all links are free.
    const std::vector<Point2> p(6, Point2{1, 1});
    const auto r = constant_radio(4, 2, 1, 0, 1);
    const Matrix s = bellman_ford_route(p, r);
    EXPECT_NO_THROW(topological_order(s));
    for (std::size_t n = 0; n < 4; ++n) EXPECT_EQ(s(n, 4), 1.0);
}

TEST(BellmanFord, BeatsEveryRandomDag) {
    std::mt19937_64 rng(3);
    for (int inst = 0; inst < 10; ++inst) {
        const std::size_t N = 6, M = 2;
        const auto p = random_points(rng, N + M, 10, 10);
        const auto r = random_radio(rng, N, M);
        const auto g_best = power_coefficients(p, bellman_ford_route(p, r), r);
        for (int trial = 0; trial < 20; ++trial) {
            const auto g = power_coefficients(p, random_dag_split(rng, N, M), r);
            for (std::size_t n = 0; n < N; ++n) EXPECT_LE(g_best[n], g[n] * (1 + 1e-12));
        }
    }
}

TEST(PropagateFlows, ExampleOne) {
    const auto r = propagate_flows(std::vector<double>{0.3, 0.3, 0.4}, example_split(), 20.0);
    auto rel = [](double a, double b) { return std::abs(a - b) / b; };
    EXPECT_LE(rel(r.outflow[0], 6.0), 1e-12);
    EXPECT_LE(rel(r.flows(0, 1), 2.4), 1e-12);
    EXPECT_LE(rel(r.flows(0, 2), 3.6), 1e-12);
    EXPECT_LE(rel(r.outflow[1], 8.4), 1e-12);
    EXPECT_LE(rel(r.flows(1, 2), 2.1), 1e-12);
    EXPECT_LE(rel(r.flows(1, 3), 6.3), 1e-12);
    EXPECT_LE(rel(r.outflow[2], 13.7), 1e-12);
    EXPECT_LE(rel(r.flows(2, 3), 13.7), 1e-12);
}

TEST(PropagateFlows, ZeroVolumes) {
    const auto r = propagate_flows(std::vector<double>{0, 0, 0}, example_split(), 20.0);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(r.outflow[i], 0.0);
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(r.flows(i, j), 0.0);
    }
}

TEST(PropagateFlows, Chain) {
    Matrix s(2, 3);
    s(0, 1) = 1;
    s(1, 2) = 1;
    const auto r = propagate_flows(std::vector<double>{1, 1}, s, 1.0);
    EXPECT_EQ(r.flows(0, 1), 1.0);
    EXPECT_EQ(r.flows(1, 2), 2.0);
}

TEST(PropagateFlows, CycleRejected) {
    Matrix s(2, 3);
    s(0, 1) = 1;
    s(1, 0) = 1;
    EXPECT_THROW(propagate_flows(std::vector<double>{1, 1}, s, 1.0), routing_error);
    Matrix self(1, 2);
    self(0, 0) = 1;
    EXPECT_THROW(topological_order(self), routing_error);
}

TEST(PropagateFlows, ConservationOnRandomDags) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int inst = 0; inst < 30; ++inst) {
        const std::size_t N = 7, M = 3;
        const Matrix s = random_dag_split(rng, N, M);
        std::vector<double> v(N);
        for (auto& x : v) x = u(rng);
        const double rb = 3.0;
        const auto r = propagate_flows(v, s, rb);
        const Matrix oracle = oracle_flows(v, s, rb);
        for (std::size_t i = 0; i < N; ++i) {
            double in = rb * v[i], out = 0.0;
            for (std::size_t j = 0; j < N; ++j) in += r.flows(j, i);
            for (std::size_t j = 0; j < N + M; ++j) {
                out += r.flows(i, j);
                EXPECT_NEAR(r.flows(i, j), oracle(i, j), 1e-12 * (1 + oracle(i, j)));
            }
            EXPECT_NEAR(in, out, 1e-12 * out);
            EXPECT_NEAR(out, r.outflow[i], 1e-12 * out);
        }
    }
}

TEST(PowerCoefficients, ExampleTwo) {
    const auto g = power_coefficients(kSquare, example_split(), example_radio());
    EXPECT_LE(std::abs(g[0] - 3.3) / 3.3, 1e-12);
    EXPECT_DOUBLE_EQ(g[1], 0.25 * (3 + 1) + 0.75 * 1);
    EXPECT_DOUBLE_EQ(g[2], 1.0);
}

TEST(PowerCoefficients, AdjacentToFc) {
    const std::vector<Point2> p{{0, 0}, {3, 4}};
    auto r = constant_radio(1, 1, 1, 0.5, 2);
    Matrix s(1, 2);
    s(0, 1) = 1;
    EXPECT_DOUBLE_EQ(power_coefficients(p, s, r)[0], 2 * 25.0);
}

TEST(PowerCoefficients, MatchesPathEnumeration) {
    std::mt19937_64 rng(17);
    for (int inst = 0; inst < 25; ++inst) {
        const std::size_t N = 6, M = 2;
        const auto p = random_points(rng, N + M, 10, 10);
        const auto r = random_radio(rng, N, M);
        const Matrix s = random_dag_split(rng, N, M, 0.7);
        const auto g = power_coefficients(p, s, r);
        for (std::size_t n = 0; n < N; ++n) {
            double oracle = 0.0, shares = 0.0;
            for (const auto& path : enumerate_paths(s, n)) {
                oracle += path.share * path_cost(p, r, path.nodes);
                shares += path.share;
            }
            EXPECT_NEAR(g[n], oracle, 1e-12 * oracle);
            EXPECT_NEAR(shares, 1.0, 1e-12);
        }
    }
}

TEST(EnumeratePaths, ExampleShares) {
    auto paths = enumerate_paths(example_split(), 0);
    ASSERT_EQ(paths.size(), 3u);
    std::sort(paths.begin(), paths.end(), [](const auto& a, const auto& b) { return a.nodes < b.nodes; });
    EXPECT_EQ(paths[0].nodes, (std::vector<std::size_t>{0, 1, 2, 3}));
    EXPECT_NEAR(paths[0].share, 0.1, 1e-15);
    EXPECT_EQ(paths[1].nodes, (std::vector<std::size_t>{0, 1, 3}));
    EXPECT_NEAR(paths[1].share, 0.3, 1e-15);
    EXPECT_EQ(paths[2].nodes, (std::vector<std::size_t>{0, 2, 3}));
    EXPECT_NEAR(paths[2].share, 0.6, 1e-15);

    const auto r = example_radio();
    EXPECT_DOUBLE_EQ(path_cost(kSquare, r, paths[0].nodes), 6.0);
    EXPECT_DOUBLE_EQ(path_cost(kSquare, r, paths[1].nodes), 3.0);
    EXPECT_DOUBLE_EQ(path_cost(kSquare, r, paths[2].nodes), 3.0);
}

TEST(EnumeratePaths, ChainAndBound) {
    Matrix s(2, 3);
    s(0, 1) = 1;
    s(1, 2) = 1;
    const auto paths = enumerate_paths(s, 0);
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_EQ(paths[0].share, 1.0);
    EXPECT_THROW(enumerate_paths(example_split(), 0, 2), routing_error);
}

TEST(ObjectiveForms, CoefficientIdentity) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0, 1);
    for (int inst = 0; inst < 50; ++inst) {
        const std::size_t N = 1 + inst % 8, M = 1 + inst % 3;
        const auto p = random_points(rng, N + M, 10, 10);
        const auto r = random_radio(rng, N, M);
        const Matrix s = random_dag_split(rng, N, M);
        std::vector<double> v(N);
        for (auto& x : v) x = u(rng);
        const double rb = 2.5;
        const auto g = power_coefficients(p, s, r);
        const Matrix f = oracle_flows(v, s, rb);
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t n = 0; n < N; ++n) lhs += g[n] * rb * v[n];
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < N + M; ++j) {
                if (i == j) continue;
                rhs += r.beta(i, j) * squared_distance(p[i], p[j]) * f(i, j);
                if (j < N) rhs += r.rho[j] * f(i, j);
            }
        }
        EXPECT_LE(rel_diff(lhs, rhs), 1e-9);
    }
}

TEST(DirectBaseline, Choices) {
    const std::vector<Point2> p{{0, 0}, {5, 5}, {9, 9}};
    const Matrix one = direct_baseline(p, constant_radio(2, 1, 1, 0, 1));
    EXPECT_EQ(one(0, 2), 1.0);
    EXPECT_EQ(one(1, 2), 1.0);

    const Matrix s = direct_baseline(kSquare, example_radio());
    EXPECT_EQ(s(1, 3), 1.0);
    EXPECT_LT(edge_cost(kSquare, 1, 3, example_radio()),
              edge_cost(kSquare, 1, 2, example_radio()) + edge_cost(kSquare, 2, 3, example_radio()));
}
