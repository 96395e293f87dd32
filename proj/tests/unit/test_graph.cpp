#include "syncgrid/errors.hpp"
#include "syncgrid/graph.hpp"
#include "syncgrid/graph_io.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace syncgrid;
using testsupport::complete;
using testsupport::random_connected;

TEST_CASE("single edge laplacian and pseudoinverse") {
    const double a = 2.5;
    WeightedGraph g(2, {{0, 1, a}});
    const auto b = build_laplacian(g);
    CHECK(b.L(0, 0) == doctest::Approx(a));
    CHECK(b.L(0, 1) == doctest::Approx(-a));
    const double q = 1.0 / (4.0 * a);
    CHECK(b.Ldagger(0, 0) == doctest::Approx(q).epsilon(1e-12));
    CHECK(b.Ldagger(0, 1) == doctest::Approx(-q).epsilon(1e-12));
    CHECK(connectivity_metrics(g).effective_resistance(0, 1) == doctest::Approx(1.0 / a).epsilon(1e-12));
}

TEST_CASE("K3 spectrum and resistances") {
    const auto g = complete(3);
    const auto b = build_laplacian(g);
    const Eigen::MatrixXd expected = 3.0 * Eigen::MatrixXd::Identity(3, 3) - Eigen::MatrixXd::Ones(3, 3);
    CHECK((b.L - expected).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(b.eigenvalues[0]) < 1e-12);
    CHECK(b.eigenvalues[1] == doctest::Approx(3.0));
    CHECK(b.eigenvalues[2] == doctest::Approx(3.0));
    const auto m = connectivity_metrics(g);
    CHECK(m.lambda2 == doctest::Approx(3.0));
    CHECK(m.lambda_n == doctest::Approx(3.0));
    CHECK(m.max_degree == doctest::Approx(2.0));
    for (int i = 0; i < 3; ++i) {
        CHECK(m.effective_resistance(i, i) == 0.0);
        for (int j = i + 1; j < 3; ++j) CHECK(m.effective_resistance(i, j) == doctest::Approx(2.0 / 3.0));
    }
}

TEST_CASE("laplacian invariants on random graphs") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const int n = 2 + static_cast<int>(s % 25);
        const auto g = random_connected(n, 0.2, s);
        const auto b = build_laplacian(g);
        CHECK((b.L * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((b.L - testsupport::laplacian_from_edges(g)).cwiseAbs().maxCoeff() < 1e-12);
        const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Ones(n, n) / n;
        CHECK((b.L * b.Ldagger - P).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((b.Ldagger - testsupport::cod_pinv(b.L)).cwiseAbs().maxCoeff() < 1e-9);
        const Eigen::MatrixXd B = g.incidence_dense();
        const Eigen::MatrixXd BABt = B * g.weights().asDiagonal() * B.transpose();
        CHECK((BABt - b.L).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(b.eigenvalues[1] > 0.0);
    }
}

TEST_CASE("laplacian solver matches the pseudoinverse") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto g = random_connected(15, 0.3, 100 + s);
        const auto w = testsupport::zero_mean_random(15, s);
        const Eigen::VectorXd x = LaplacianSolver(g).solve(w);
        const Eigen::VectorXd y = build_laplacian(g).Ldagger * w;
        CHECK((x - y).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("edge infinity norm") {
    WeightedGraph path(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK(edge_infinity_norm(path, Eigen::Vector3d(0, 1, 3)) == 2.0);
    CHECK(edge_infinity_norm(path, Eigen::Vector3d(4, 4, 4)) == 0.0);
    CHECK(edge_infinity_norm(complete(3), Eigen::Vector3d(1.0 / 3, -1.0 / 3, 0)) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(edge_infinity_norm(path, Eigen::Vector2d(0, 1)), Error);
    const auto g = random_connected(12, 0.3, 7);
    const auto x = testsupport::zero_mean_random(12, 8);
    const Eigen::VectorXd bt = g.incidence_dense().transpose() * x;
    CHECK(edge_infinity_norm(g, x) == bt.cwiseAbs().maxCoeff());
}

TEST_CASE("incidence orientation") {
    WeightedGraph g(2, {{1, 0, 1.0}});
    CHECK(g.edge_differences(Eigen::Vector2d(5, 2))[0] == 3.0);
    const auto c = WeightedGraph::canonical(3, {{2, 0, 1.0}, {1, 0, 2.0}});
    CHECK(c.edges()[0].source == 0);
    CHECK(c.edges()[0].sink == 1);
    CHECK(c.edges()[1].sink == 2);
}

TEST_CASE("graph validation") {
    CHECK_THROWS_AS(WeightedGraph(2, {{0, 0, 1.0}}), Error);
    CHECK_THROWS_AS(WeightedGraph(2, {{0, 1, 0.0}}), Error);
    CHECK_THROWS_AS(WeightedGraph(2, {{0, 1, 1.0}, {1, 0, 1.0}}), Error);
    CHECK_THROWS_AS(WeightedGraph(2, {{0, 2, 1.0}}), Error);
    WeightedGraph two_parts(4, {{0, 1, 1.0}, {2, 3, 1.0}});
    CHECK_FALSE(two_parts.is_connected());
    try {
        build_laplacian(two_parts);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DisconnectedGraph);
    }
    try {
        build_laplacian(WeightedGraph(1, {}));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateGraph);
    }
}

TEST_CASE("cycle basis") {
    CHECK(cycle_basis(testsupport::random_tree(9, 3)).rank == 0);
    CHECK(cycle_basis(testsupport::random_tree(9, 3)).vectors.empty());

    const auto ring = testsupport::ring(6);
    const auto cb = cycle_basis(ring);
    REQUIRE(cb.rank == 1);
    Eigen::VectorXd c = cb.vectors[0];
    if (c[0] < 0) c = -c;
    CHECK((c - Eigen::VectorXd::Ones(6)).cwiseAbs().maxCoeff() == 0.0);

    const auto k4 = cycle_basis(complete(4));
    CHECK(k4.rank == 3);
    Eigen::MatrixXd C(6, 3);
    for (int k = 0; k < 3; ++k) C.col(k) = k4.vectors[k];
    CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(C).rank() == 3);

    for (std::uint64_t s = 0; s < 100; ++s) {
        const int n = 3 + static_cast<int>(s % 20);
        const auto g = random_connected(n, 0.25, 500 + s);
        const auto basis = cycle_basis(g);
        CHECK(basis.rank == g.edge_count() - n + 1);
        CHECK(static_cast<int>(basis.vectors.size()) == basis.rank);
        const Eigen::MatrixXd B = g.incidence_dense();
        for (const auto& v : basis.vectors) CHECK((B * v).cwiseAbs().maxCoeff() <= 1e-12);
        if (basis.rank > 0) {
            Eigen::MatrixXd M(g.edge_count(), basis.rank);
            for (int k = 0; k < basis.rank; ++k) M.col(k) = basis.vectors[k];
            CHECK(Eigen::FullPivLU<Eigen::MatrixXd>(M).rank() == basis.rank);
        }
    }
}

TEST_CASE("spectral sandwich") {
    for (std::uint64_t s = 0; s < 40; ++s) {
        const auto g = random_connected(10, 0.3, 800 + s);
        const auto m = connectivity_metrics(g);
        const Eigen::VectorXd w = testsupport::zero_mean_random(10, s, 3.0);
        const Eigen::VectorXd scaled = w * (m.lambda2 / std::max(1e-12, edge_infinity_norm(g, w))) * 0.999;
        const double margin = edge_infinity_norm(g, m.Ldagger * scaled);
        CHECK(margin <= 1.0);
        const double direct = edge_infinity_norm(g, m.Ldagger * w);
        if (direct <= 1.0) CHECK(2.0 * m.max_degree >= edge_infinity_norm(g, w));
    }
}

TEST_CASE("graph json and csv round trip") {
    const auto g = parse_graph_json(R"({"n": 3, "edges": [[1, 2, 1.5], [3, 2], [1, 3, 0.5]]})");
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.edges()[1].weight == 0.5);
    CHECK(g.edges()[2].source == 1);
    CHECK(g.edges()[2].sink == 2);
    const auto back = graph_from_json(graph_to_json(g));
    for (int l = 0; l < 3; ++l) CHECK(back.edges()[l].weight == g.edges()[l].weight);

    const auto h = parse_edge_csv("i,j,weight\n1,2,2\n2,3,1\n");
    CHECK(h.node_count() == 3);
    CHECK(h.edges()[0].weight == 2.0);

    try {
        parse_graph_json("{\"n\": 3,\n \"edges\": [1, }");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    const auto v = parse_vector_csv("omega\n1\n-2\n1\n");
    CHECK(v.size() == 3);
    CHECK(v[1] == -2.0);
}
