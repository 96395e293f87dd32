#pragma once

#include "syncgrid/graph.hpp"

#include <optional>

namespace syncgrid {

struct EquilibriumSolution {
    Eigen::VectorXd theta;        // gauge theta_1 = 0, wrapped to (-pi, pi]
    double cohesiveness = 0.0;    // max geodesic edge distance
    bool stable = false;
    double lambda2_minus_J = 0.0;
    double residual = 0.0;        // infinity norm of the fixed-point equations
};

enum class NewtonStatus { Converged, NoConvergence, SingularJacobian };

struct NewtonOptions {
    double tolerance = 1e-10;
    int max_iterations = 50;
    int max_halvings = 20;
    double max_condition = 1e12;
};

struct NewtonResult {
    NewtonStatus status = NewtonStatus::NoConvergence;
    EquilibriumSolution solution;  // last iterate when not converged
    Eigen::VectorXd theta_unwrapped;
    int iterations = 0;

    [[nodiscard]] bool converged() const noexcept { return status == NewtonStatus::Converged; }
};

struct StabilityReport {
    bool stable = false;
    double lambda2_minus_J = 0.0;
};

/// J(theta) = -B diag(a cos(B^T theta)) B^T
Eigen::MatrixXd jacobian(const WeightedGraph& g, const Eigen::VectorXd& theta);

/// omega_i - sum_j a_ij sin(theta_i - theta_j)
Eigen::VectorXd kuramoto_rhs(const WeightedGraph& g, const Eigen::VectorXd& omega, const Eigen::VectorXd& theta);

/// Newton on the fixed-point equations with node 1 grounded. theta0 defaults to L^+ omega.
NewtonResult solve_equilibrium(const WeightedGraph& g, const Eigen::VectorXd& omega,
                               const std::optional<Eigen::VectorXd>& theta0 = std::nullopt,
                               const NewtonOptions& options = {});

/// Throws NotAnEquilibrium when the residual exceeds 1e-8.
StabilityReport assess_stability(const WeightedGraph& g, const Eigen::VectorXd& omega, const Eigen::VectorXd& theta);

double phase_cohesiveness(const Eigen::VectorXd& theta, const WeightedGraph& g);

/// Wraps to (-pi, pi].
double wrap_angle(double x);
/// Shifts so theta_1 = 0 and wraps every entry.
Eigen::VectorXd gauge_fixed(const Eigen::VectorXd& theta);
/// Largest wrapped difference between two phase vectors after removing the gauge.
double gauge_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Throws NonZeroMeanFrequencies unless |mean(omega)| <= 1e-9 max(1, |omega|_inf).
void require_zero_mean(const Eigen::VectorXd& omega);

}  // namespace syncgrid
