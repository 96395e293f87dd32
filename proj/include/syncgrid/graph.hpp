#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <memory>
#include <vector>

namespace syncgrid {

/// Oriented edge. Node ids are 0-based inside the library.
struct Edge {
    int source = 0;
    int sink = 0;
    double weight = 1.0;
};

/// Undirected weighted graph with a fixed edge orientation.
/// Column l of the incidence matrix has +1 at the sink and -1 at the source,
/// so (B^T x)_l = x[sink] - x[source].
class WeightedGraph {
public:
    WeightedGraph() = default;
    /// Keeps the given orientation and order. Throws on self-loops, duplicate
    /// pairs, non-positive weights or out-of-range ids.
    WeightedGraph(int n, std::vector<Edge> edges);

    /// Orients every edge source < sink and sorts lexicographically.
    static WeightedGraph canonical(int n, std::vector<Edge> edges);

    [[nodiscard]] int node_count() const noexcept { return n_; }
    [[nodiscard]] int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
    [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }

    [[nodiscard]] Eigen::VectorXd weights() const;
    [[nodiscard]] Eigen::SparseMatrix<double> incidence() const;
    [[nodiscard]] Eigen::MatrixXd incidence_dense() const;
    [[nodiscard]] Eigen::SparseMatrix<double> laplacian_sparse() const;
    [[nodiscard]] Eigen::VectorXd weighted_degrees() const;
    [[nodiscard]] std::vector<std::vector<int>> adjacency() const;

    /// B^T x
    [[nodiscard]] Eigen::VectorXd edge_differences(const Eigen::VectorXd& x) const;
    /// B f
    [[nodiscard]] Eigen::VectorXd node_balance(const Eigen::VectorXd& flows) const;

    [[nodiscard]] bool is_connected() const;
    [[nodiscard]] bool is_tree() const { return is_connected() && edge_count() == n_ - 1; }
    /// True when connected, every degree is 2 and |E| = n.
    [[nodiscard]] bool is_single_cycle() const;

    [[nodiscard]] WeightedGraph with_weights(const Eigen::VectorXd& w) const;
    [[nodiscard]] WeightedGraph scaled(double factor) const;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
};

struct LaplacianBundle {
    Eigen::MatrixXd L;
    Eigen::MatrixXd Ldagger;
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXd U;
};

/// Dense Laplacian, its spectrum and the pseudoinverse built from it.
LaplacianBundle build_laplacian(const WeightedGraph& g);

/// Solves L x = b for b in 1-perp by grounding node 0 and factoring the
/// reduced sparse Laplacian once. Returns the zero-mean solution L^+ b.
class LaplacianSolver {
public:
    explicit LaplacianSolver(const WeightedGraph& g);
    [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    [[nodiscard]] int size() const noexcept { return n_; }

private:
    int n_;
    std::shared_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> ldlt_;
};

struct CycleBasis {
    std::vector<Eigen::VectorXd> vectors;
    int rank = 0;
};

/// Fundamental cycles of a BFS spanning tree rooted at node 0.
CycleBasis cycle_basis(const WeightedGraph& g);

struct ConnectivityMetrics {
    double lambda2 = 0.0;
    double lambda_n = 0.0;
    double max_degree = 0.0;
    Eigen::MatrixXd Ldagger;

    [[nodiscard]] double effective_resistance(int i, int j) const;
};

ConnectivityMetrics connectivity_metrics(const WeightedGraph& g);

/// max over edges of |x_i - x_j|
double edge_infinity_norm(const WeightedGraph& g, const Eigen::VectorXd& x);

/// Throws DisconnectedGraph / DegenerateGraph when the graph cannot carry a Laplacian analysis.
void require_connected(const WeightedGraph& g);

}  // namespace syncgrid
