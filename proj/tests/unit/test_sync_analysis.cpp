#include "syncgrid/equilibrium.hpp"
#include "syncgrid/errors.hpp"
#include "syncgrid/sync_analysis.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <numbers>

using namespace syncgrid;
using testsupport::complete;
using testsupport::ring;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd fixed_point_residual(const WeightedGraph& g, const Eigen::VectorXd& omega, const Eigen::VectorXd& theta) {
    Eigen::VectorXd r = omega;
    for (const auto& e : g.edges()) {
        const double f = e.weight * std::sin(theta[e.source] - theta[e.sink]);
        r[e.source] -= f;
        r[e.sink] += f;
    }
    return r;
}

/// omega = B x on a ring oriented i -> i+1.
Eigen::VectorXd ring_injection(const Eigen::VectorXd& x) {
    const auto n = x.size();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (Eigen::Index l = 0; l < n; ++l) {
        w[(l + 1) % n] += x[l];
        w[l] -= x[l];
    }
    return w;
}

}  // namespace

TEST_CASE("sync margin closed forms") {
    const auto g = complete(4);
    CHECK(sync_margin(g, Eigen::VectorXd::Zero(4)).margin == 0.0);
    CHECK(*sync_margin(g, Eigen::VectorXd::Zero(4)).gamma_pred == 0.0);

    WeightedGraph two(2, {{0, 1, 4.0}});
    CHECK(sync_margin(two, Eigen::Vector2d(1.0, -1.0)).margin == doctest::Approx(0.25).epsilon(1e-12));

    for (int n : {3, 6, 10}) {
        const double K = 7.0;
        const auto gk = complete(n, K / n);
        const auto w = testsupport::zero_mean_random(n, 11 + n, 2.0);
        const double spread = w.maxCoeff() - w.minCoeff();
        CHECK(sync_margin(gk, w).margin == doctest::Approx(spread / K).epsilon(1e-12));
    }

    const auto a = sync_margin(complete(3), Eigen::Vector3d(1, -1, 0));
    CHECK(a.margin == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(a.holds(std::asin(2.0 / 3.0)));
    CHECK_FALSE(a.holds(std::asin(2.0 / 3.0) - 1e-6));

    try {
        (void)sync_margin(g, Eigen::Vector4d(1, 0, 0, 0));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonZeroMeanFrequencies);
    }
    const auto r = recentred(Eigen::Vector3d(2, 0, 1));
    CHECK((r - Eigen::Vector3d(1, -1, 0)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("spectral margin agrees with the direct route") {
    CHECK(spectral_margin(build_laplacian(complete(3)), complete(3), Eigen::Vector3d(1, -1, 0)) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    for (std::uint64_t s = 0; s < 60; ++s) {
        const int n = 2 + static_cast<int>((s * 7) % 60);
        const auto g = testsupport::random_connected(n, 0.1, 2000 + s);
        const auto w = testsupport::zero_mean_random(n, 3000 + s);
        const auto b = build_laplacian(g);
        CHECK(std::abs(spectral_margin(b, g, w) - sync_margin(g, w).margin) <= 1e-10);
    }
    const auto g = testsupport::random_connected(8, 0.4, 17);
    const auto b = build_laplacian(g);
    for (int k = 1; k < 8; ++k) {
        const Eigen::VectorXd u = b.U.col(k);
        const double c = 0.3;
        const double expected = edge_infinity_norm(g, u) * c / b.eigenvalues[k];
        CHECK(sync_margin(g, c * u).margin == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("necessary conditions") {
    const auto g = testsupport::random_connected(7, 0.3, 5);
    const auto none = necessary_conditions(g, Eigen::VectorXd::Zero(7), 1.0);
    CHECK(none.absolute_ok);
    CHECK(none.incremental_ok);
    CHECK(none.violating_nodes.empty());

    WeightedGraph star(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}});
    const double gamma = 1.0;
    const double w1 = 1.1 * 3.0 * std::sin(gamma);
    Eigen::Vector4d w(w1, -w1 / 3, -w1 / 3, -w1 / 3);
    const auto c = necessary_conditions(star, w, gamma);
    CHECK_FALSE(c.absolute_ok);
    REQUIRE_FALSE(c.violating_nodes.empty());
    CHECK(c.violating_nodes[0] == 0);

    // Ring example at alpha = 1, gamma = pi/2: node 2 meets a12 + a23 = |omega_2| with equality.
    Eigen::VectorXd x(5);
    x << 1, -1, -1, 0.5, 0.5;
    const auto eq = necessary_conditions(ring(5), ring_injection(x), kPi / 2);
    CHECK(std::abs(ring_injection(x)[1]) == doctest::Approx(2.0));
    CHECK(eq.absolute_ok);

    CHECK_THROWS_AS(necessary_conditions(g, Eigen::VectorXd::Zero(7), 2.0), Error);
    CHECK_THROWS_AS(necessary_conditions(g, Eigen::VectorXd::Zero(7), -0.1), Error);
}

TEST_CASE("acyclic equilibrium") {
    WeightedGraph two(2, {{0, 1, 2.0}});
    const auto s = acyclic_equilibrium(two, Eigen::Vector2d(1.0, -1.0), kPi / 2);
    REQUIRE(s);
    CHECK(s->theta[0] - s->theta[1] == doctest::Approx(kPi / 6).epsilon(1e-12));
    CHECK(s->stable);

    WeightedGraph path(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    const auto flat = acyclic_equilibrium(path, Eigen::VectorXd::Zero(3), 1.0);
    REQUIRE(flat);
    CHECK(flat->theta.cwiseAbs().maxCoeff() == 0.0);

    for (std::uint64_t k = 0; k < 30; ++k) {
        const auto tree = testsupport::random_tree(12, 40 + k);
        Eigen::VectorXd w = testsupport::zero_mean_random(12, 70 + k);
        w *= 0.99 / sync_margin(tree, w).margin;
        const auto sol = acyclic_equilibrium(tree, w, std::asin(0.99));
        REQUIRE(sol);
        CHECK(fixed_point_residual(tree, w, sol->theta).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(sol->cohesiveness == doctest::Approx(std::asin(0.99)).epsilon(1e-9));
        CHECK_FALSE(acyclic_equilibrium(tree, w * 1.02, kPi / 2));
    }
    CHECK_THROWS_AS(acyclic_equilibrium(ring(4), Eigen::VectorXd::Zero(4), 1.0), Error);
}

TEST_CASE("single cycle feasibility") {
    SUBCASE("symmetric frequencies give lambda zero") {
        const auto g = ring(6);
        Eigen::VectorXd omega_nodes(6);
        omega_nodes << 0.3, -0.3, 0.3, -0.3, 0.3, -0.3;
        const Eigen::VectorXd w = testsupport::laplacian_from_edges(g) * omega_nodes;
        const auto r = single_cycle_feasibility(g, w, kPi / 2);
        REQUIRE(r.feasible);
        CHECK(std::abs(*r.lambda_star) < 1e-12);
        const auto psi = sync_margin(g, w).psi_particular;
        for (int l = 0; l < 6; ++l) CHECK((*r.edge_angles)[l] == doctest::Approx(std::asin(psi[l])).epsilon(1e-12));
    }
    SUBCASE("zero frequencies") {
        const auto r = single_cycle_feasibility(ring(5), Eigen::VectorXd::Zero(5), 1.0);
        REQUIRE(r.feasible);
        CHECK(*r.lambda_star == 0.0);
        CHECK(r.theta->cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("five-node counterexample") {
        Eigen::VectorXd x(5);
        x << 1, -1, -1, 0.5, 0.5;
        const auto hard = single_cycle_feasibility(ring(5), ring_injection(0.999 * x), kPi / 2);
        CHECK(sync_margin(ring(5), ring_injection(0.999 * x)).margin == doctest::Approx(0.999).epsilon(1e-12));
        CHECK_FALSE(hard.feasible);
        CHECK(hard.f_lmax < 0.0);
        const auto easy = single_cycle_feasibility(ring(5), ring_injection(0.5 * x), kPi / 2);
        CHECK(easy.feasible);
    }
    SUBCASE("solutions solve the fixed-point equations") {
        for (std::uint64_t k = 0; k < 25; ++k) {
            syncgrid::CounterRng rng(k, {55});
            const int n = 3 + static_cast<int>(k % 8);
            std::vector<Edge> edges;
            for (int i = 0; i < n; ++i) {
                const int j = (i + 1) % n;
                if (rng.uniform() < 0.5)
                    edges.push_back({i, j, rng.uniform(0.5, 5.0)});
                else
                    edges.push_back({j, i, rng.uniform(0.5, 5.0)});
            }
            const WeightedGraph g(n, edges);
            Eigen::VectorXd w = testsupport::zero_mean_random(n, 900 + k);
            w *= 0.6 / sync_margin(g, w).margin;
            const auto r = single_cycle_feasibility(g, w, kPi / 2);
            if (!r.feasible) continue;
            CHECK(fixed_point_residual(g, w, *r.theta).cwiseAbs().maxCoeff() <= 1e-9);
            CHECK((g.edge_differences(*r.theta) - *r.edge_angles).cwiseAbs().maxCoeff() <= 1e-9);
            const auto newton = solve_equilibrium(g, w);
            REQUIRE(newton.converged());
            CHECK(gauge_distance(newton.solution.theta, *r.theta) <= 1e-8);
        }
    }
    SUBCASE("f is increasing on its domain") {
        const auto g = ring(7, 1.5);
        const auto w = testsupport::zero_mean_random(7, 4, 0.5);
        const auto r = single_cycle_feasibility(g, w, 1.2);
        REQUIRE(r.lambda_min <= r.lambda_max);
        CHECK(r.f_lmin < r.f_lmax);
    }
    CHECK_THROWS_AS(single_cycle_feasibility(complete(4), Eigen::VectorXd::Zero(4), 1.0), Error);
}

TEST_CASE("cycle sufficient bound") {
    const auto g = ring(6);
    CHECK(cycle_sufficient_bound(g, Eigen::VectorXd::Zero(6), 0.0));
    Eigen::VectorXd x(6);
    x << 1, -1, 1, -1, 0.5, -0.5;
    const Eigen::VectorXd base = ring_injection(x);
    const double m = sync_margin(g, base).margin;
    CHECK(cycle_sufficient_bound(g, base * (0.5 / m) * (1 - 1e-9), kPi / 2));
    CHECK_FALSE(cycle_sufficient_bound(g, base * (0.5 / m) * (1 + 1e-6), kPi / 2));

    for (std::uint64_t k = 0; k < 20; ++k) {
        syncgrid::CounterRng rng(k, {77});
        std::vector<Edge> edges;
        for (int i = 0; i < 6; ++i) edges.push_back({i, (i + 1) % 6, rng.uniform(0.5, 5.0)});
        const WeightedGraph wg(6, edges);
        const Eigen::VectorXd wts = wg.weights();
        const double gamma = rng.uniform(0.3, 1.5);
        const double thr = std::sin(gamma) * wts.minCoeff() / (wts.maxCoeff() + wts.minCoeff());
        Eigen::VectorXd w = testsupport::zero_mean_random(6, 300 + k);
        w *= thr * 0.999 / sync_margin(wg, w).margin;
        REQUIRE(cycle_sufficient_bound(wg, w, gamma));
        const auto r = single_cycle_feasibility(wg, w, gamma);
        CHECK(r.feasible);
    }
}

TEST_CASE("auxiliary solution space") {
    const auto tree = testsupport::random_tree(6, 9);
    const auto w = testsupport::zero_mean_random(6, 10, 0.2);
    const auto space = auxiliary_solution_space(tree, w);
    CHECK(space.cycle_residuals(space.psi_particular).size() == 0);

    const auto g = testsupport::random_connected(9, 0.4, 12);
    const auto w2 = testsupport::zero_mean_random(9, 13);
    const auto sp = auxiliary_solution_space(g, w2);
    const Eigen::VectorXd flows = g.weights().cwiseProduct(sp.psi_particular);
    CHECK((g.node_balance(flows) - w2).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK_THROWS_AS((void)sp.cycle_residuals(Eigen::VectorXd::Constant(g.edge_count(), 1.5)), Error);

    Eigen::VectorXd sym(6);
    sym << 0.4, -0.4, 0.4, -0.4, 0.4, -0.4;
    const auto cyc = auxiliary_solution_space(ring(6), ring_injection(sym));
    CHECK(std::abs(cyc.cycle_residuals(cyc.psi_particular)[0]) < 1e-12);

    // psi_pt = (-alpha, alpha/(n-3) x (n-3), 0, 0); residual f(0) = -asin(alpha) + (n-3) asin(alpha/(n-3)).
    const int n = 8;
    const double alpha = 0.95;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    x[0] = -alpha;
    for (int k = 1; k <= n - 3; ++k) x[k] = alpha / (n - 3);
    const auto ce = auxiliary_solution_space(ring(n), ring_injection(x));
    CHECK((ce.psi_particular - x).cwiseAbs().maxCoeff() < 1e-12);
    const double sign = ce.basis.vectors[0][0] > 0 ? 1.0 : -1.0;
    const double res = sign * ce.cycle_residuals(ce.psi_particular)[0];
    const double oracle = -std::asin(alpha) + (n - 3) * std::asin(alpha / (n - 3));
    CHECK(res == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(res < -0.1);
}

TEST_CASE("minimum infinity norm solution") {
    const auto tree = testsupport::random_tree(8, 21);
    const auto w = testsupport::zero_mean_random(8, 22);
    const auto t = min_infinity_norm_solution(tree, w);
    const auto a = sync_margin(tree, w);
    CHECK(t.norm == a.margin);
    CHECK((t.psi_star - a.psi_particular).cwiseAbs().maxCoeff() == 0.0);

    CHECK(min_infinity_norm_solution(complete(4), Eigen::VectorXd::Zero(4)).norm == 0.0);

    // Unit ring: psi = x + mu 1, minimised at mu = -(max x + min x) / 2.
    Eigen::VectorXd x(6);
    x << 0.7, -0.2, -0.5, 0.1, 0.3, -0.4;
    const auto r = min_infinity_norm_solution(ring(6), ring_injection(x));
    CHECK(r.norm == doctest::Approx((x.maxCoeff() - x.minCoeff()) / 2).epsilon(1e-9));

    for (std::uint64_t k = 0; k < 40; ++k) {
        const int n = 4 + static_cast<int>(k % 9);
        const auto g = testsupport::random_connected(n, 0.35, 4000 + k);
        const auto om = testsupport::zero_mean_random(n, 5000 + k);
        const auto sol = min_infinity_norm_solution(g, om);
        const auto direct = sync_margin(g, om);
        CHECK(sol.norm <= direct.margin + 1e-12);
        CHECK((g.node_balance(g.weights().cwiseProduct(sol.psi_star)) - om).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK(sol.norm == doctest::Approx(sol.psi_star.cwiseAbs().maxCoeff()));
        // Any other feasible point is no better: check random cycle-space perturbations.
        const auto basis = cycle_basis(g);
        syncgrid::CounterRng rng(k, {66});
        for (int trial = 0; trial < 20 && basis.rank > 0; ++trial) {
            Eigen::VectorXd psi = sol.psi_star;
            for (const auto& c : basis.vectors) psi += 0.05 * rng.normal() * g.weights().cwiseInverse().cwiseProduct(c);
            CHECK(psi.cwiseAbs().maxCoeff() >= sol.norm - 1e-9);
        }
    }
}
