#include "syncgrid/graph.hpp"

#include "syncgrid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>
#include <utility>

namespace syncgrid {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(int n) : parent_(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

private:
    std::vector<int> parent_;
    std::vector<int> rank_;
};

}  // namespace

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 0) throw Error(ErrorCode::InvalidGraph, "negative node count");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges_) {
        if (e.source < 0 || e.source >= n || e.sink < 0 || e.sink >= n)
            throw Error(ErrorCode::InvalidGraph, "edge endpoint out of range");
        if (e.source == e.sink) throw Error(ErrorCode::InvalidGraph, "self-loop at node " + std::to_string(e.source + 1));
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw Error(ErrorCode::InvalidGraph, "edge weights must be positive and finite");
        auto key = std::minmax(e.source, e.sink);
        if (!seen.insert(key).second)
            throw Error(ErrorCode::InvalidGraph, "duplicate edge " + std::to_string(key.first + 1) + "-" +
                                                     std::to_string(key.second + 1));
    }
}

WeightedGraph WeightedGraph::canonical(int n, std::vector<Edge> edges) {
    for (auto& e : edges)
        if (e.source > e.sink) std::swap(e.source, e.sink);
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.source, a.sink) < std::tie(b.source, b.sink);
    });
    return WeightedGraph(n, std::move(edges));
}

Eigen::VectorXd WeightedGraph::weights() const {
    Eigen::VectorXd w(edge_count());
    for (int l = 0; l < edge_count(); ++l) w[l] = edges_[l].weight;
    return w;
}

Eigen::SparseMatrix<double> WeightedGraph::incidence() const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(2 * edges_.size());
    for (int l = 0; l < edge_count(); ++l) {
        t.emplace_back(edges_[l].sink, l, 1.0);
        t.emplace_back(edges_[l].source, l, -1.0);
    }
    Eigen::SparseMatrix<double> B(n_, edge_count());
    B.setFromTriplets(t.begin(), t.end());
    return B;
}

Eigen::MatrixXd WeightedGraph::incidence_dense() const { return Eigen::MatrixXd(incidence()); }

Eigen::SparseMatrix<double> WeightedGraph::laplacian_sparse() const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(4 * edges_.size());
    for (const auto& e : edges_) {
        t.emplace_back(e.source, e.source, e.weight);
        t.emplace_back(e.sink, e.sink, e.weight);
        t.emplace_back(e.source, e.sink, -e.weight);
        t.emplace_back(e.sink, e.source, -e.weight);
    }
    Eigen::SparseMatrix<double> L(n_, n_);
    L.setFromTriplets(t.begin(), t.end());
    return L;
}

Eigen::VectorXd WeightedGraph::weighted_degrees() const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
    for (const auto& e : edges_) {
        d[e.source] += e.weight;
        d[e.sink] += e.weight;
    }
    return d;
}

std::vector<std::vector<int>> WeightedGraph::adjacency() const {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_));
    for (int l = 0; l < edge_count(); ++l) {
        adj[edges_[l].source].push_back(l);
        adj[edges_[l].sink].push_back(l);
    }
    return adj;
}

Eigen::VectorXd WeightedGraph::edge_differences(const Eigen::VectorXd& x) const {
    if (x.size() != n_) throw Error(ErrorCode::DimensionMismatch, "node vector length differs from n");
    Eigen::VectorXd d(edge_count());
    for (int l = 0; l < edge_count(); ++l) d[l] = x[edges_[l].sink] - x[edges_[l].source];
    return d;
}

Eigen::VectorXd WeightedGraph::node_balance(const Eigen::VectorXd& flows) const {
    if (flows.size() != edge_count()) throw Error(ErrorCode::DimensionMismatch, "edge vector length differs from |E|");
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n_);
    for (int l = 0; l < edge_count(); ++l) {
        b[edges_[l].sink] += flows[l];
        b[edges_[l].source] -= flows[l];
    }
    return b;
}

bool WeightedGraph::is_connected() const {
    if (n_ == 0) return false;
    DisjointSets sets(n_);
    int components = n_;
    for (const auto& e : edges_)
        if (sets.unite(e.source, e.sink)) --components;
    return components == 1;
}

bool WeightedGraph::is_single_cycle() const {
    if (n_ < 3 || edge_count() != n_ || !is_connected()) return false;
    std::vector<int> deg(static_cast<std::size_t>(n_), 0);
    for (const auto& e : edges_) {
        ++deg[e.source];
        ++deg[e.sink];
    }
    return std::all_of(deg.begin(), deg.end(), [](int d) { return d == 2; });
}

WeightedGraph WeightedGraph::with_weights(const Eigen::VectorXd& w) const {
    if (w.size() != edge_count()) throw Error(ErrorCode::DimensionMismatch, "weight vector length differs from |E|");
    auto edges = edges_;
    for (int l = 0; l < edge_count(); ++l) edges[l].weight = w[l];
    return WeightedGraph(n_, std::move(edges));
}

WeightedGraph WeightedGraph::scaled(double factor) const { return with_weights(weights() * factor); }

void require_connected(const WeightedGraph& g) {
    if (g.node_count() < 2) throw Error(ErrorCode::DegenerateGraph, "graph needs at least two nodes");
    if (!g.is_connected()) throw Error(ErrorCode::DisconnectedGraph, "graph is not connected");
}

LaplacianBundle build_laplacian(const WeightedGraph& g) {
    require_connected(g);
    LaplacianBundle b;
    b.L = Eigen::MatrixXd(g.laplacian_sparse());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.L);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "Laplacian eigendecomposition failed");
    b.eigenvalues = es.eigenvalues();
    b.U = es.eigenvectors();
    const double cutoff = 1e-9 * b.eigenvalues[b.eigenvalues.size() - 1];
    Eigen::VectorXd inv(b.eigenvalues.size());
    for (int k = 0; k < inv.size(); ++k) inv[k] = std::abs(b.eigenvalues[k]) < cutoff ? 0.0 : 1.0 / b.eigenvalues[k];
    b.Ldagger = b.U * inv.asDiagonal() * b.U.transpose();
    return b;
}

LaplacianSolver::LaplacianSolver(const WeightedGraph& g) : n_(g.node_count()) {
    require_connected(g);
    Eigen::SparseMatrix<double> L = g.laplacian_sparse();
    Eigen::SparseMatrix<double> reduced = L.bottomRightCorner(n_ - 1, n_ - 1);
    ldlt_ = std::make_shared<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>(reduced);
    if (ldlt_->info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "reduced Laplacian factorization failed");
}

Eigen::VectorXd LaplacianSolver::solve(const Eigen::VectorXd& b) const {
    if (b.size() != n_) throw Error(ErrorCode::DimensionMismatch, "right-hand side length differs from n");
    Eigen::VectorXd centred = b.array() - b.mean();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    x.tail(n_ - 1) = ldlt_->solve(centred.tail(n_ - 1));
    x.array() -= x.mean();
    return x;
}

CycleBasis cycle_basis(const WeightedGraph& g) {
    require_connected(g);
    const int n = g.node_count();
    const auto& edges = g.edges();
    const auto adj = g.adjacency();

    std::vector<int> parent(n, -1), parent_edge(n, -1), depth(n, -1);
    std::vector<char> in_tree(edges.size(), 0);
    std::queue<int> q;
    depth[0] = 0;
    q.push(0);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int l : adj[u]) {
            int v = edges[l].source == u ? edges[l].sink : edges[l].source;
            if (depth[v] >= 0) continue;
            depth[v] = depth[u] + 1;
            parent[v] = u;
            parent_edge[v] = l;
            in_tree[l] = 1;
            q.push(v);
        }
    }

    // Tree edge l used to travel from child to parent contributes +1 when that
    // direction matches its orientation (source -> sink).
    auto step_sign = [&](int from, int l) { return edges[l].source == from ? 1.0 : -1.0; };

    CycleBasis basis;
    for (int l = 0; l < g.edge_count(); ++l) {
        if (in_tree[l]) continue;
        Eigen::VectorXd c = Eigen::VectorXd::Zero(g.edge_count());
        c[l] = 1.0;
        // Close the loop from sink back to source through the tree.
        int u = edges[l].sink;
        int v = edges[l].source;
        std::vector<std::pair<int, int>> down;  // steps from v upwards, traversed in reverse later
        while (depth[u] > depth[v]) {
            c[parent_edge[u]] += step_sign(u, parent_edge[u]);
            u = parent[u];
        }
        while (depth[v] > depth[u]) {
            down.emplace_back(v, parent_edge[v]);
            v = parent[v];
        }
        while (u != v) {
            c[parent_edge[u]] += step_sign(u, parent_edge[u]);
            u = parent[u];
            down.emplace_back(v, parent_edge[v]);
            v = parent[v];
        }
        // Travelling parent -> child along the recorded steps reverses the sign.
        for (const auto& [child, pe] : down) c[pe] -= step_sign(child, pe);
        basis.vectors.push_back(std::move(c));
    }
    basis.rank = static_cast<int>(basis.vectors.size());
    return basis;
}

double ConnectivityMetrics::effective_resistance(int i, int j) const {
    if (i < 0 || j < 0 || i >= Ldagger.rows() || j >= Ldagger.rows())
        throw Error(ErrorCode::DimensionMismatch, "node index out of range");
    if (i == j) return 0.0;
    return Ldagger(i, i) + Ldagger(j, j) - 2.0 * Ldagger(i, j);
}

ConnectivityMetrics connectivity_metrics(const WeightedGraph& g) {
    auto b = build_laplacian(g);
    ConnectivityMetrics m;
    m.lambda2 = b.eigenvalues[1];
    m.lambda_n = b.eigenvalues[b.eigenvalues.size() - 1];
    m.max_degree = g.weighted_degrees().maxCoeff();
    m.Ldagger = std::move(b.Ldagger);
    return m;
}

double edge_infinity_norm(const WeightedGraph& g, const Eigen::VectorXd& x) {
    if (x.size() != g.node_count()) throw Error(ErrorCode::DimensionMismatch, "node vector length differs from n");
    double best = 0.0;
    for (const auto& e : g.edges()) best = std::max(best, std::abs(x[e.source] - x[e.sink]));
    return best;
}

}  // namespace syncgrid
