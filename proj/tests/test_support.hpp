#pragma once

#include "syncgrid/graph.hpp"
#include "syncgrid/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace testsupport {

inline std::string data_path(const std::string& rel) { return std::string(SYNCGRID_DATA_DIR) + "/" + rel; }

/// Random connected graph: a random spanning tree plus extra edges with probability p.
inline syncgrid::WeightedGraph random_connected(int n, double p, std::uint64_t seed, bool unit = false) {
    syncgrid::CounterRng rng(seed, {901});
    std::vector<syncgrid::Edge> edges;
    std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
    auto weight = [&] { return unit ? 1.0 : rng.uniform(0.5, 5.0); };
    for (int v = 1; v < n; ++v) {
        const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
        edges.push_back({u, v, weight()});
        used[u][v] = used[v][u] = true;
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!used[i][j] && rng.uniform() < p) edges.push_back({i, j, weight()});
    return syncgrid::WeightedGraph::canonical(n, std::move(edges));
}

inline syncgrid::WeightedGraph random_tree(int n, std::uint64_t seed, bool unit = false) {
    return random_connected(n, 0.0, seed, unit);
}

inline syncgrid::WeightedGraph ring(int n, double w = 1.0) {
    std::vector<syncgrid::Edge> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, w});
    return syncgrid::WeightedGraph(n, std::move(edges));
}

inline syncgrid::WeightedGraph complete(int n, double w = 1.0) {
    std::vector<syncgrid::Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, w});
    return syncgrid::WeightedGraph(n, std::move(edges));
}

inline Eigen::VectorXd zero_mean_random(int n, std::uint64_t seed, double scale = 1.0) {
    syncgrid::CounterRng rng(seed, {902});
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = rng.uniform(-scale, scale);
    w.array() -= w.mean();
    return w;
}

/// Pseudoinverse through a complete orthogonal decomposition, independent of the eigen route.
inline Eigen::MatrixXd cod_pinv(const Eigen::MatrixXd& M) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(M);
    cod.setThreshold(1e-10);
    return cod.pseudoInverse();
}

/// Dense Laplacian straight from the edge list.
inline Eigen::MatrixXd laplacian_from_edges(const syncgrid::WeightedGraph& g) {
    const int n = g.node_count();
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges()) {
        L(e.source, e.source) += e.weight;
        L(e.sink, e.sink) += e.weight;
        L(e.source, e.sink) -= e.weight;
        L(e.sink, e.source) -= e.weight;
    }
    return L;
}

}  // namespace testsupport
