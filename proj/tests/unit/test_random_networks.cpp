#include "syncgrid/errors.hpp"
#include "syncgrid/linear_program.hpp"
#include "syncgrid/random_networks.hpp"
#include "syncgrid/rng.hpp"
#include "syncgrid/sync_analysis.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>

using namespace syncgrid;

namespace {

// Minimum over all basic feasible points of {Ax <= b, x >= 0}.
double brute_force_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const int n = static_cast<int>(c.size());
    const int m = static_cast<int>(A.rows());
    Eigen::MatrixXd G(m + n, n);
    Eigen::VectorXd h(m + n);
    G << A, -Eigen::MatrixXd::Identity(n, n);
    h << b, Eigen::VectorXd::Zero(n);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> pick(n);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        Eigen::MatrixXd S(n, n);
        Eigen::VectorXd r(n);
        for (int k = 0; k < n; ++k) {
            S.row(k) = G.row(pick[k]);
            r[k] = h[pick[k]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
        if (lu.isInvertible()) {
            const Eigen::VectorXd x = lu.solve(r);
            if (((G * x - h).array() <= 1e-9).all()) best = std::min(best, c.dot(x));
        }
        int k = n - 1;
        while (k >= 0 && pick[k] == m + k) --k;
        if (k < 0) break;
        ++pick[k];
        for (int j = k + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
    }
    return best;
}

}  // namespace

TEST_CASE("counter rng") {
    CounterRng a(7, {1, 2}), b(7, {1, 2}), c(7, {1, 3}), d(8, {1, 2});
    for (int k = 0; k < 100; ++k) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
        CHECK(x != d.next_u64());
    }
    CounterRng u(3, {0});
    double sum = 0.0, sq = 0.0;
    const int N = 200000;
    for (int k = 0; k < N; ++k) {
        const double x = u.uniform();
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
        sum += x;
    }
    CHECK(std::abs(sum / N - 0.5) < 4 * std::sqrt(1.0 / 12 / N));
    CounterRng nrm(4, {0});
    sum = 0.0;
    for (int k = 0; k < N; ++k) {
        const double z = nrm.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / N) < 4 / std::sqrt(N));
    CHECK(std::abs(sq / N - 1.0) < 0.02);
    CounterRng bl(5, {0});
    std::vector<int> counts(7, 0);
    for (int k = 0; k < 70000; ++k) ++counts[bl.below(7)];
    for (int cnt : counts) CHECK(std::abs(cnt - 10000) < 500);
}

TEST_CASE("simplex") {
    // max x + y with x + 2y <= 4, 3x + y <= 6.
    Eigen::MatrixXd A(2, 2);
    A << 1, 2, 3, 1;
    const auto r = solve_lp(Eigen::Vector2d(-1, -1), A, Eigen::Vector2d(4, 6));
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.x[0] == doctest::Approx(1.6));
    CHECK(r.x[1] == doctest::Approx(1.2));
    CHECK(r.objective == doctest::Approx(-2.8));

    Eigen::MatrixXd I(1, 1);
    I << 1;
    CHECK(solve_lp(Eigen::VectorXd::Constant(1, 1.0), I, Eigen::VectorXd::Constant(1, -1.0)).status == LpStatus::Infeasible);
    CHECK(solve_lp(Eigen::VectorXd::Constant(1, -1.0), -I, Eigen::VectorXd::Constant(1, 1.0)).status == LpStatus::Unbounded);

    for (std::uint64_t s = 0; s < 200; ++s) {
        CounterRng rng(s, {77});
        const int n = 2 + static_cast<int>(s % 3);
        const int m = 2 + static_cast<int>(rng.below(4));
        Eigen::MatrixXd M(m + 1, n);
        Eigen::VectorXd b(m + 1), c(n);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) M(i, j) = rng.uniform(-2, 2);
            b[i] = rng.uniform(-1, 3);
        }
        M.row(m).setOnes();
        b[m] = 5.0;
        for (int j = 0; j < n; ++j) c[j] = rng.uniform(-1, 1);
        const double oracle = brute_force_lp(c, M, b);
        const auto res = solve_lp(c, M, b);
        if (std::isinf(oracle)) {
            CHECK(res.status == LpStatus::Infeasible);
        } else {
            REQUIRE(res.status == LpStatus::Optimal);
            CHECK(res.objective == doctest::Approx(oracle).epsilon(1e-8));
            CHECK((M * res.x - b).maxCoeff() <= 1e-9);
            CHECK(res.x.minCoeff() >= -1e-12);
        }
    }
}

TEST_CASE("graph models") {
    NominalNetworkSpec spec;
    spec.n = 9;
    spec.p = 1.0;
    CHECK(generate_graph(spec).edge_count() == 36);
    spec.model = GraphModel::RGG;
    spec.p = std::sqrt(2.0);
    CHECK(generate_graph(spec, 3).edge_count() == 36);

    spec.model = GraphModel::SMN;
    spec.n = 10;
    spec.p = 0.0;
    const auto ringg = generate_graph(spec);
    CHECK(ringg.edge_count() == 10);
    CHECK(ringg.is_single_cycle());
    CHECK((ringg.weighted_degrees().array() == 2.0).all());

    spec.p = 0.3;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto g = generate_graph(spec, s);
        CHECK(g.is_connected());
        CHECK(g.edge_count() == 10);
    }

    // Edge count of ERG; conditioning on connectivity barely matters at p = 0.7.
    spec.model = GraphModel::ERG;
    spec.n = 10;
    spec.p = 0.7;
    double total = 0.0;
    const int N = 10000;
    for (int s = 0; s < N; ++s) total += generate_graph(spec, static_cast<std::uint64_t>(s)).edge_count();
    const double sigma = std::sqrt(45 * 0.7 * 0.3 / N);
    CHECK(std::abs(total / N - 45 * 0.7) <= 3 * sigma);

    spec.p = 1.5;
    CHECK_THROWS_AS(spec.validate(), Error);
    spec.model = GraphModel::RGG;
    spec.validate();
    spec.n = 1;
    CHECK_THROWS_AS(spec.validate(), Error);
    CHECK_THROWS_AS(parse_graph_model("grid"), Error);
    CHECK(parse_graph_model("SMN") == GraphModel::SMN);
}

TEST_CASE("weights and frequencies") {
    NominalNetworkSpec spec;
    spec.n = 448;
    spec.p = 1.0;
    const auto g = sample_weights(generate_graph(spec), 11);
    REQUIRE(g.edge_count() >= 100000);
    double sum = 0.0;
    for (const auto& e : g.edges()) {
        REQUIRE(e.weight >= 0.5);
        REQUIRE(e.weight <= 5.0);
        sum += e.weight;
    }
    CHECK(std::abs(sum / g.edge_count() - 2.75) <= 0.02);
    const auto again = sample_weights(generate_graph(spec), 11);
    CHECK(again.edges()[12345].weight == g.edges()[12345].weight);

    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto w = sample_frequencies(12, FrequencyDistribution::Bipolar, 1.0, 5, s);
        CHECK(std::abs(w.sum()) <= 1e-12);
        const auto u = sample_frequencies(12, FrequencyDistribution::UniformAlpha, 6.0, 5, s);
        CHECK(std::abs(u.sum()) <= 1e-12);
        CHECK(u.cwiseAbs().maxCoeff() <= 6.0);
        CHECK(u.maxCoeff() - u.minCoeff() <= 6.0);
        const auto v = sample_frequencies(12, FrequencyDistribution::UniformUnit, 1.0, 5, s);
        CHECK(v.maxCoeff() - v.minCoeff() <= 2.0);
    }
    int opposite = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto w = sample_frequencies(2, FrequencyDistribution::Bipolar, 1.0, 9, s);
        if (std::abs(w[0]) > 0.5) {
            ++opposite;
            CHECK(std::abs(std::abs(w[0]) - 1.0) <= 1e-15);
            CHECK(w[1] == -w[0]);
        } else {
            CHECK(w.cwiseAbs().maxCoeff() == 0.0);
        }
    }
    CHECK(opposite > 10);
}

TEST_CASE("nominal networks") {
    NominalNetworkSpec spec;
    spec.n = 10;
    spec.p = 0.3;
    spec.alpha = 8.0;
    spec.seed = 42;
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto nn = nominal_network(spec, s);
        CHECK(nn.margin < 1.0);
        CHECK(nn.margin == doctest::Approx(sync_margin(nn.graph, nn.omega).margin).epsilon(1e-12));
        CHECK(nn.graph.is_connected());
        CHECK(nn.attempts >= 1);
        const auto again = nominal_network(spec, s);
        CHECK(again.margin == nn.margin);
        CHECK((again.omega - nn.omega).cwiseAbs().maxCoeff() == 0.0);
    }
    spec.alpha = 1e6;
    CHECK_THROWS_AS(nominal_network(spec), Error);
}
