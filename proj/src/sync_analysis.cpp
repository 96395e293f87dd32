#include "syncgrid/sync_analysis.hpp"

#include "syncgrid/errors.hpp"
#include "syncgrid/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace syncgrid {

namespace {

double clamped_asin(double v) { return std::asin(std::clamp(v, -1.0, 1.0)); }

void require_length(const WeightedGraph& g, const Eigen::VectorXd& omega) {
    if (omega.size() != g.node_count()) throw Error(ErrorCode::DimensionMismatch, "omega length differs from n");
}

void require_cycle(const WeightedGraph& g) {
    if (!g.is_single_cycle()) throw Error(ErrorCode::NotACycle, "graph is not a single cycle");
}

EquilibriumSolution finish_solution(const WeightedGraph& g, const Eigen::VectorXd& omega, const Eigen::VectorXd& theta) {
    EquilibriumSolution sol;
    sol.theta = gauge_fixed(theta);
    sol.cohesiveness = phase_cohesiveness(theta, g);
    sol.residual = kuramoto_rhs(g, omega, theta).cwiseAbs().maxCoeff();
    if (sol.residual <= 1e-8) {
        auto st = assess_stability(g, omega, theta);
        sol.stable = st.stable;
        sol.lambda2_minus_J = st.lambda2_minus_J;
    }
    return sol;
}

double min_over_line(const Eigen::VectorXd& p, const Eigen::VectorXd& h, double& mu_out) {
    auto phi = [&](double mu) { return (p + mu * h).cwiseAbs().maxCoeff(); };
    const double hmax = h.cwiseAbs().maxCoeff();
    const double pnorm = p.cwiseAbs().maxCoeff();
    if (hmax == 0.0 || pnorm == 0.0) {
        mu_out = 0.0;
        return pnorm;
    }
    double lo = -2.0 * pnorm / hmax, hi = 2.0 * pnorm / hmax;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
    double fc = phi(c), fd = phi(d);
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        if (fc <= fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = phi(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = phi(d);
        }
    }
    mu_out = 0.5 * (lo + hi);
    double best = phi(mu_out);
    if (best > pnorm) {
        mu_out = 0.0;
        best = pnorm;
    }
    return best;
}

}  // namespace

void require_gamma(double gamma) {
    if (!(gamma >= 0.0 && gamma <= std::numbers::pi / 2))
        throw Error(ErrorCode::GammaOutOfRange, "gamma must lie in [0, pi/2]");
}

Eigen::VectorXd recentred(const Eigen::VectorXd& omega) {
    Eigen::VectorXd out = omega;
    if (out.size() > 0) out.array() -= out.mean();
    return out;
}

bool SyncAssessment::holds(double gamma) const { return margin <= std::sin(gamma) + kBoundarySlack; }

SyncAssessment sync_margin(const WeightedGraph& g, const Eigen::VectorXd& omega) {
    require_connected(g);
    require_length(g, omega);
    require_zero_mean(omega);
    SyncAssessment a;
    a.phases = LaplacianSolver(g).solve(omega);
    a.psi_particular = g.edge_differences(a.phases);
    a.margin = a.psi_particular.size() ? a.psi_particular.cwiseAbs().maxCoeff() : 0.0;
    if (a.margin <= 1.0) a.gamma_pred = std::asin(a.margin);
    return a;
}

double spectral_margin(const LaplacianBundle& bundle, const WeightedGraph& g, const Eigen::VectorXd& omega) {
    require_length(g, omega);
    require_zero_mean(omega);
    if (bundle.eigenvalues.size() != g.node_count())
        throw Error(ErrorCode::DimensionMismatch, "bundle does not belong to this graph");
    const double cutoff = 1e-9 * bundle.eigenvalues[bundle.eigenvalues.size() - 1];
    Eigen::VectorXd modal = bundle.U.transpose() * omega;
    for (Eigen::Index k = 0; k < modal.size(); ++k)
        modal[k] = std::abs(bundle.eigenvalues[k]) < cutoff ? 0.0 : modal[k] / bundle.eigenvalues[k];
    return edge_infinity_norm(g, bundle.U * modal);
}

NecessaryCheck necessary_conditions(const WeightedGraph& g, const Eigen::VectorXd& omega, double gamma) {
    require_gamma(gamma);
    require_length(g, omega);
    const double s = std::sin(gamma);
    const Eigen::VectorXd deg = g.weighted_degrees();
    NecessaryCheck c;
    for (int i = 0; i < g.node_count(); ++i) {
        const double need = std::abs(omega[i]);
        if (deg[i] * s < need - 1e-9 * std::max(1.0, need)) c.violating_nodes.push_back(i);
    }
    for (int l = 0; l < g.edge_count(); ++l) {
        const auto& e = g.edges()[l];
        const double need = std::abs(omega[e.source] - omega[e.sink]);
        if ((deg[e.source] + deg[e.sink]) * s < need - 1e-9 * std::max(1.0, need)) c.violating_edges.push_back(l);
    }
    c.absolute_ok = c.violating_nodes.empty();
    c.incremental_ok = c.violating_edges.empty();
    return c;
}

std::optional<EquilibriumSolution> acyclic_equilibrium(const WeightedGraph& g, const Eigen::VectorXd& omega,
                                                       double gamma) {
    require_connected(g);
    if (g.edge_count() != g.node_count() - 1) throw Error(ErrorCode::NotAcyclic, "graph contains a cycle");
    require_gamma(gamma);
    const auto a = sync_margin(g, omega);
    if (!a.holds(gamma)) return std::nullopt;

    const int n = g.node_count();
    const auto adj = g.adjacency();
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        for (int l : adj[u]) {
            const auto& e = g.edges()[l];
            const int v = e.source == u ? e.sink : e.source;
            if (seen[v]) continue;
            seen[v] = 1;
            const double delta = clamped_asin(a.psi_particular[l]);
            theta[v] = e.sink == v ? theta[u] + delta : theta[u] - delta;
            q.push(v);
        }
    }
    return finish_solution(g, omega, theta);
}

SingleCycleResult single_cycle_feasibility(const WeightedGraph& g, const Eigen::VectorXd& omega, double gamma) {
    require_cycle(g);
    require_gamma(gamma);
    const auto a = sync_margin(g, omega);
    const int n = g.node_count();
    const auto adj = g.adjacency();
    const auto& edges = g.edges();

    SingleCycleResult r;
    int u = 0, prev = -1;
    for (int k = 0; k < n; ++k) {
        const int l = adj[u][0] != prev ? adj[u][0] : adj[u][1];
        const int v = edges[l].source == u ? edges[l].sink : edges[l].source;
        r.walk_nodes.push_back(u);
        r.walk_edges.push_back(l);
        r.walk_signs.push_back(edges[l].source == u ? 1.0 : -1.0);
        prev = l;
        u = v;
    }

    r.x.resize(n);
    r.y.resize(n);
    for (int k = 0; k < n; ++k) {
        r.x[k] = r.walk_signs[k] * a.psi_particular[r.walk_edges[k]];
        r.y[k] = 1.0 / edges[r.walk_edges[k]].weight;
    }
    const double s = std::sin(gamma);
    r.lambda_min = -std::numeric_limits<double>::infinity();
    r.lambda_max = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
        r.lambda_min = std::max(r.lambda_min, (-s - r.x[k]) / r.y[k]);
        r.lambda_max = std::min(r.lambda_max, (s - r.x[k]) / r.y[k]);
    }
    if (r.lambda_min > r.lambda_max) {
        r.f_lmin = r.f_lmax = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    auto f = [&](double lambda) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k) sum += clamped_asin(r.x[k] + lambda * r.y[k]);
        return sum;
    };
    r.f_lmin = f(r.lambda_min);
    r.f_lmax = f(r.lambda_max);
    if (!(r.f_lmin <= 0.0 && r.f_lmax >= 0.0)) return r;

    double lo = r.lambda_min, hi = r.lambda_max, star;
    if (r.f_lmin == 0.0) {
        star = lo;
    } else if (r.f_lmax == 0.0) {
        star = hi;
    } else {
        for (;;) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double fm = f(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            (fm < 0.0 ? lo : hi) = mid;
        }
        star = std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
    }

    r.feasible = true;
    r.lambda_star = star;
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd stored(n);
    for (int k = 0; k < n; ++k) {
        const double walk_angle = clamped_asin(r.x[k] + star * r.y[k]);
        stored[r.walk_edges[k]] = r.walk_signs[k] * walk_angle;
        if (k + 1 < n) theta[r.walk_nodes[k + 1]] = theta[r.walk_nodes[k]] + walk_angle;
    }
    r.theta = gauge_fixed(theta);
    r.edge_angles = stored;
    return r;
}

bool cycle_sufficient_bound(const WeightedGraph& g, const Eigen::VectorXd& omega, double gamma) {
    require_cycle(g);
    require_gamma(gamma);
    const auto a = sync_margin(g, omega);
    const Eigen::VectorXd w = g.weights();
    const double threshold = std::sin(gamma) * w.minCoeff() / (w.maxCoeff() + w.minCoeff());
    return a.margin <= threshold + kBoundarySlack;
}

Eigen::VectorXd AuxiliarySolutionSpace::cycle_residuals(const Eigen::VectorXd& psi) const {
    if (psi.size() != psi_particular.size()) throw Error(ErrorCode::DimensionMismatch, "psi length differs from |E|");
    if (psi.size() && psi.cwiseAbs().maxCoeff() > 1.0 + kBoundarySlack)
        throw Error(ErrorCode::PsiOutOfRange, "arcsin needs |psi_i| <= 1");
    Eigen::VectorXd angles(psi.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) angles[i] = clamped_asin(psi[i]);
    Eigen::VectorXd res(basis.rank);
    for (int k = 0; k < basis.rank; ++k) res[k] = basis.vectors[k].dot(angles);
    return res;
}

AuxiliarySolutionSpace auxiliary_solution_space(const WeightedGraph& g, const Eigen::VectorXd& omega) {
    AuxiliarySolutionSpace s;
    s.psi_particular = sync_margin(g, omega).psi_particular;
    s.basis = cycle_basis(g);
    s.weights = g.weights();
    return s;
}

MinNormSolution min_infinity_norm_solution(const WeightedGraph& g, const Eigen::VectorXd& omega) {
    const auto a = sync_margin(g, omega);
    const auto basis = cycle_basis(g);
    const Eigen::VectorXd p = a.psi_particular;
    const Eigen::VectorXd inv_w = g.weights().cwiseInverse();
    const int m = basis.rank;
    const int E = g.edge_count();

    MinNormSolution out;
    out.mu = Eigen::VectorXd::Zero(m);
    out.psi_star = p;
    out.norm = a.margin;
    if (m == 0 || a.margin == 0.0) return out;

    Eigen::MatrixXd H(E, m);
    for (int k = 0; k < m; ++k) H.col(k) = inv_w.cwiseProduct(basis.vectors[k]);

    if (m == 1) {
        double mu;
        out.norm = min_over_line(p, H.col(0), mu);
        out.mu[0] = mu;
        out.psi_star = p + mu * H.col(0);
        out.norm = out.psi_star.cwiseAbs().maxCoeff();
        return out;
    }

    // Variables (mu+, mu-, t) >= 0; minimise t subject to -t <= p + H (mu+ - mu-) <= t.
    const int nv = 2 * m + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * E, nv);
    Eigen::VectorXd b(2 * E);
    A.block(0, 0, E, m) = H;
    A.block(0, m, E, m) = -H;
    A.block(0, 2 * m, E, 1).setConstant(-1.0);
    b.head(E) = -p;
    A.block(E, 0, E, m) = -H;
    A.block(E, m, E, m) = H;
    A.block(E, 2 * m, E, 1).setConstant(-1.0);
    b.tail(E) = p;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(nv);
    c[2 * m] = 1.0;
    const auto lp = solve_lp(c, A, b, 1e-12);
    if (lp.status == LpStatus::Optimal) {
        const Eigen::VectorXd mu = lp.x.head(m) - lp.x.segment(m, m);
        const Eigen::VectorXd psi = p + H * mu;
        const double norm = psi.cwiseAbs().maxCoeff();
        if (norm <= out.norm) {
            out.mu = mu;
            out.psi_star = psi;
            out.norm = norm;
        }
    }
    return out;
}

}  // namespace syncgrid
