#include "syncgrid/equilibrium.hpp"

#include "syncgrid/errors.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <numbers>

namespace syncgrid {

void require_zero_mean(const Eigen::VectorXd& omega) {
    if (omega.size() == 0) return;
    const double scale = std::max(1.0, omega.cwiseAbs().maxCoeff());
    if (std::abs(omega.mean()) > 1e-9 * scale)
        throw Error(ErrorCode::NonZeroMeanFrequencies, "frequencies must sum to zero; recentre first");
}

double wrap_angle(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(x, two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    if (r > std::numbers::pi) r -= two_pi;
    return r;
}

Eigen::VectorXd gauge_fixed(const Eigen::VectorXd& theta) {
    Eigen::VectorXd out(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) out[i] = wrap_angle(theta[i] - theta[0]);
    return out;
}

double gauge_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "phase vectors differ in length");
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(wrap_angle((a[i] - a[0]) - (b[i] - b[0]))));
    return worst;
}

double phase_cohesiveness(const Eigen::VectorXd& theta, const WeightedGraph& g) {
    if (theta.size() != g.node_count()) throw Error(ErrorCode::DimensionMismatch, "theta length differs from n");
    double worst = 0.0;
    for (const auto& e : g.edges()) worst = std::max(worst, std::abs(wrap_angle(theta[e.sink] - theta[e.source])));
    return worst;
}

Eigen::MatrixXd jacobian(const WeightedGraph& g, const Eigen::VectorXd& theta) {
    if (theta.size() != g.node_count()) throw Error(ErrorCode::DimensionMismatch, "theta length differs from n");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(g.node_count(), g.node_count());
    for (const auto& e : g.edges()) {
        const double w = e.weight * std::cos(theta[e.sink] - theta[e.source]);
        J(e.source, e.source) -= w;
        J(e.sink, e.sink) -= w;
        J(e.source, e.sink) += w;
        J(e.sink, e.source) += w;
    }
    return J;
}

Eigen::VectorXd kuramoto_rhs(const WeightedGraph& g, const Eigen::VectorXd& omega, const Eigen::VectorXd& theta) {
    if (theta.size() != g.node_count() || omega.size() != g.node_count())
        throw Error(ErrorCode::DimensionMismatch, "state length differs from n");
    Eigen::VectorXd f = omega;
    for (const auto& e : g.edges()) {
        const double flow = e.weight * std::sin(theta[e.source] - theta[e.sink]);
        f[e.source] -= flow;
        f[e.sink] += flow;
    }
    return f;
}

StabilityReport assess_stability(const WeightedGraph& g, const Eigen::VectorXd& omega, const Eigen::VectorXd& theta) {
    const double residual = kuramoto_rhs(g, omega, theta).cwiseAbs().maxCoeff();
    if (residual > 1e-8) throw Error(ErrorCode::NotAnEquilibrium, "fixed-point residual " + std::to_string(residual));
    const auto n = theta.size();
    StabilityReport r;
    if (n < 2) return r;
    // Restrict -J to the complement of the rotational mode 1.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(n, 1));
    const Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd perp = Q.rightCols(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(perp.transpose() * (-jacobian(g, theta)) * perp,
                                                      Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    r.lambda2_minus_J = ev[0];
    r.stable = r.lambda2_minus_J > 1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    return r;
}

NewtonResult solve_equilibrium(const WeightedGraph& g, const Eigen::VectorXd& omega,
                               const std::optional<Eigen::VectorXd>& theta0, const NewtonOptions& options) {
    require_connected(g);
    if (omega.size() != g.node_count()) throw Error(ErrorCode::DimensionMismatch, "omega length differs from n");
    require_zero_mean(omega);
    const int n = g.node_count();

    Eigen::VectorXd theta;
    if (theta0) {
        if (theta0->size() != n) throw Error(ErrorCode::DimensionMismatch, "theta0 length differs from n");
        theta = *theta0;
    } else {
        theta = LaplacianSolver(g).solve(omega);
    }
    theta.array() -= theta[0];

    NewtonResult result;
    Eigen::VectorXd f = kuramoto_rhs(g, omega, theta);
    double res = f.cwiseAbs().maxCoeff();
    const double l_norm = 2.0 * g.weighted_degrees().maxCoeff();
    int it = 0;
    while (res > options.tolerance && it < options.max_iterations) {
        ++it;
        const Eigen::MatrixXd Jr = jacobian(g, theta).bottomRightCorner(n - 1, n - 1);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(Jr);
        // Condition relative to the Laplacian scale.
        const double inv_norm = 1.0 / (lu.rcond() * Jr.cwiseAbs().colwise().sum().maxCoeff());
        if (!(inv_norm < std::numeric_limits<double>::infinity()) || l_norm * inv_norm > options.max_condition) {
            result.status = NewtonStatus::SingularJacobian;
            break;
        }
        const Eigen::VectorXd step = lu.solve(-f.tail(n - 1));
        double t = 1.0;
        Eigen::VectorXd trial = theta;
        Eigen::VectorXd ftrial;
        double rtrial = 0.0;
        for (int h = 0; h <= options.max_halvings; ++h) {
            trial.tail(n - 1) = theta.tail(n - 1) + t * step;
            ftrial = kuramoto_rhs(g, omega, trial);
            rtrial = ftrial.cwiseAbs().maxCoeff();
            if (rtrial < res) break;
            t *= 0.5;
        }
        theta = trial;
        f = ftrial;
        res = rtrial;
    }
    if (result.status != NewtonStatus::SingularJacobian)
        result.status = res <= options.tolerance ? NewtonStatus::Converged : NewtonStatus::NoConvergence;

    result.iterations = it;
    result.theta_unwrapped = theta;
    auto& sol = result.solution;
    sol.theta = gauge_fixed(theta);
    sol.cohesiveness = phase_cohesiveness(theta, g);
    sol.residual = res;
    if (result.status == NewtonStatus::Converged && res <= 1e-8) {
        auto st = assess_stability(g, omega, theta);
        sol.stable = st.stable;
        sol.lambda2_minus_J = st.lambda2_minus_J;
    }
    return result;
}

}  // namespace syncgrid
