#pragma once

#include "syncgrid/equilibrium.hpp"
#include "syncgrid/graph.hpp"

#include <optional>
#include <vector>

namespace syncgrid {

inline constexpr double kBoundarySlack = 1e-12;

struct SyncAssessment {
    double margin = 0.0;                 // |B^T L^+ omega|_inf
    std::optional<double> gamma_pred;    // arcsin(margin) when margin <= 1
    Eigen::VectorXd psi_particular;      // B^T L^+ omega
    Eigen::VectorXd phases;              // L^+ omega

    /// margin <= sin(gamma) up to the boundary slack.
    [[nodiscard]] bool holds(double gamma) const;
};

struct NecessaryCheck {
    bool absolute_ok = true;
    bool incremental_ok = true;
    std::vector<int> violating_nodes;  // 0-based
    std::vector<int> violating_edges;  // edge indices
};

struct SingleCycleResult {
    bool feasible = false;
    std::optional<double> lambda_star;
    std::optional<Eigen::VectorXd> theta;        // gauge theta_1 = 0
    std::optional<Eigen::VectorXd> edge_angles;  // B^T theta in stored orientation
    double f_lmin = 0.0;
    double f_lmax = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    Eigen::VectorXd x;  // B^T L^+ omega in walk orientation
    Eigen::VectorXd y;  // walk coefficients of the homogeneous direction
    std::vector<int> walk_nodes;
    std::vector<int> walk_edges;
    std::vector<double> walk_signs;
};

struct AuxiliarySolutionSpace {
    Eigen::VectorXd psi_particular;
    CycleBasis basis;
    Eigen::VectorXd weights;

    /// c^T arcsin(psi) for every basis vector c. Throws PsiOutOfRange when |psi_i| > 1.
    [[nodiscard]] Eigen::VectorXd cycle_residuals(const Eigen::VectorXd& psi) const;
};

struct MinNormSolution {
    Eigen::VectorXd psi_star;
    double norm = 0.0;
    Eigen::VectorXd mu;  // cycle-space coordinates
};

/// Returns omega minus its mean.
Eigen::VectorXd recentred(const Eigen::VectorXd& omega);

SyncAssessment sync_margin(const WeightedGraph& g, const Eigen::VectorXd& omega);

/// |U diag(0, 1/lambda_2, ..., 1/lambda_n) U^T omega|_{E,inf}
double spectral_margin(const LaplacianBundle& bundle, const WeightedGraph& g, const Eigen::VectorXd& omega);

NecessaryCheck necessary_conditions(const WeightedGraph& g, const Eigen::VectorXd& omega, double gamma);

/// Closed-form equilibrium on trees. Empty when margin > sin(gamma).
std::optional<EquilibriumSolution> acyclic_equilibrium(const WeightedGraph& g, const Eigen::VectorXd& omega,
                                                       double gamma);

SingleCycleResult single_cycle_feasibility(const WeightedGraph& g, const Eigen::VectorXd& omega, double gamma);

bool cycle_sufficient_bound(const WeightedGraph& g, const Eigen::VectorXd& omega, double gamma);

AuxiliarySolutionSpace auxiliary_solution_space(const WeightedGraph& g, const Eigen::VectorXd& omega);

/// min |psi|_inf subject to B diag(a) psi = omega.
MinNormSolution min_infinity_norm_solution(const WeightedGraph& g, const Eigen::VectorXd& omega);

/// Throws GammaOutOfRange unless 0 <= gamma <= pi/2.
void require_gamma(double gamma);

}  // namespace syncgrid
