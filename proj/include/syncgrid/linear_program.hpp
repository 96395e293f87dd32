#pragma once

#include <Eigen/Dense>

namespace syncgrid {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    int pivots = 0;
};

/// minimize c^T x  subject to  A x <= b, x >= 0.
/// Dense two-phase tableau simplex with Bland's pivoting rule.
LpResult solve_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol = 1e-10);

}  // namespace syncgrid
