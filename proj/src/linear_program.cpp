#include "syncgrid/linear_program.hpp"

#include "syncgrid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace syncgrid {

namespace {

struct Tableau {
    Eigen::MatrixXd T;  // constraint rows then objective row; last column is the rhs
    std::vector<int> basis;
    int pivots = 0;

    [[nodiscard]] int rhs() const { return static_cast<int>(T.cols()) - 1; }

    void pivot(int r, int c) {
        T.row(r) /= T(r, c);
        for (int i = 0; i < T.rows(); ++i) {
            if (i == r) continue;
            const double f = T(i, c);
            if (f != 0.0) T.row(i) -= f * T.row(r);
        }
        basis[r] = c;
        ++pivots;
    }

    /// Bland's rule over columns [0, usable). Returns false when unbounded.
    bool optimise(int usable, double tol) {
        const Eigen::Index obj = T.rows() - 1;
        for (;;) {
            int enter = -1;
            for (int j = 0; j < usable; ++j) {
                if (T(obj, j) < -tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;
            Eigen::Index leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < obj; ++i) {
                if (T(i, enter) <= tol) continue;
                const double ratio = T(i, rhs()) / T(i, enter);
                const bool tie_wins = leave >= 0 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)];
                if (ratio < best - tol || (ratio <= best + tol && tie_wins)) {
                    best = std::min(best, ratio);
                    leave = i;
                }
            }
            if (leave < 0) return false;
            pivot(static_cast<int>(leave), enter);
        }
    }
};

}  // namespace

LpResult solve_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double tol) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    if (c.size() != n || b.size() != m) throw Error(ErrorCode::DimensionMismatch, "LP dimensions disagree");

    std::vector<int> needs_artificial;
    for (int i = 0; i < m; ++i)
        if (b[i] < 0.0) needs_artificial.push_back(i);
    const int k = static_cast<int>(needs_artificial.size());
    const int cols = n + m + k;

    Tableau tab;
    tab.T = Eigen::MatrixXd::Zero(m + 1, cols + 1);
    tab.basis.assign(static_cast<std::size_t>(m), -1);
    for (int i = 0; i < m; ++i) {
        const double s = b[i] < 0.0 ? -1.0 : 1.0;
        tab.T.row(i).head(n) = s * A.row(i);
        tab.T(i, n + i) = s;
        tab.T(i, cols) = s * b[i];
        if (s > 0) tab.basis[i] = n + i;
    }
    for (int a = 0; a < k; ++a) {
        const int i = needs_artificial[a];
        tab.T(i, n + m + a) = 1.0;
        tab.basis[i] = n + m + a;
    }

    LpResult result;
    if (k > 0) {
        tab.T.row(m).segment(n + m, k).setOnes();
        for (int i : needs_artificial) tab.T.row(m) -= tab.T.row(i);
        tab.optimise(cols, tol);
        if (-tab.T(m, cols) > 1e-8 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
            result.status = LpStatus::Infeasible;
            result.pivots = tab.pivots;
            return result;
        }
        for (int i = 0; i < m; ++i) {
            if (tab.basis[i] < n + m) continue;
            for (int j = 0; j < n + m; ++j) {
                if (std::abs(tab.T(i, j)) > tol) {
                    tab.pivot(i, j);
                    break;
                }
            }
        }
    }

    tab.T.row(m).setZero();
    tab.T.row(m).head(n) = c.transpose();
    for (int i = 0; i < m; ++i) {
        const int j = tab.basis[i];
        if (j < n + m && tab.T(m, j) != 0.0) tab.T.row(m) -= tab.T(m, j) * tab.T.row(i);
    }
    if (!tab.optimise(n + m, tol)) {
        result.status = LpStatus::Unbounded;
        result.pivots = tab.pivots;
        return result;
    }

    result.status = LpStatus::Optimal;
    result.x = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i)
        if (tab.basis[i] < n) result.x[tab.basis[i]] = tab.T(i, cols);
    result.objective = c.dot(result.x);
    result.pivots = tab.pivots;
    return result;
}

}  // namespace syncgrid
