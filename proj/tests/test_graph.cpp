#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nettrack/errors.hpp"
#include "nettrack/graph.hpp"
#include "nettrack/linalg.hpp"
#include "support.hpp"

using namespace nettrack;

TEST_CASE("circulant construction") {
    const Graph c41 = circulant(4, 1);
    CHECK(c41.N == 4);
    REQUIRE(c41.edges.size() == 4);
    CHECK(has_edge(c41, 0, 1));
    CHECK(has_edge(c41, 1, 2));
    CHECK(has_edge(c41, 2, 3));
    CHECK(has_edge(c41, 0, 3));
    CHECK_FALSE(has_edge(c41, 0, 2));

    const Graph c62 = circulant(6, 2);
    for (int d : degrees(c62)) CHECK(d == 4);
    CHECK(c62.edges.size() == 12);

    // m = N/2 wraps onto itself: circulant(4,2) is complete
    const Graph c42 = circulant(4, 2);
    CHECK(c42.edges.size() == 6);
    const Graph k4 = complete(4);
    CHECK(c42.edges == k4.edges);

    CHECK_THROWS_AS(circulant(1, 1), BadParams);
    CHECK_THROWS_AS(circulant(4, 0), BadParams);
    CHECK_THROWS_AS(circulant(4, 4), BadParams);
}

TEST_CASE("complete graph") {
    const Graph k5 = complete(5);
    CHECK(k5.edges.size() == 10);
    for (int d : degrees(k5)) CHECK(d == 4);
    CHECK(is_connected(k5));
    CHECK_THROWS_AS(complete(1), BadParams);
}

TEST_CASE("from_edges normalizes input") {
    const Graph g = from_edges(4, {{2, 0}, {0, 2}, {1, 0}, {3, 2}});
    CHECK(g.edges.size() == 3);
    CHECK(g.edges[0] == std::pair<int, int>(0, 1));
    CHECK(g.edges[1] == std::pair<int, int>(0, 2));
    CHECK(g.edges[2] == std::pair<int, int>(2, 3));

    CHECK_THROWS_AS(from_edges(3, {{0, 0}}), BadParams);
    CHECK_THROWS_AS(from_edges(3, {{0, 3}}), BadParams);
    CHECK_THROWS_AS(from_edges(0, {}), BadParams);
}

TEST_CASE("graph grammar parsing") {
    const Graph c = parse_graph("circulant:N=6,m=2");
    CHECK(c.N == 6);
    CHECK(c.edges == circulant(6, 2).edges);

    const Graph k = parse_graph("complete:N=3");
    CHECK(k.edges == complete(3).edges);

    const Graph e = parse_graph("edges:0-1,1-2");
    CHECK(e.N == 3);
    CHECK(e.edges.size() == 2);

    CHECK_THROWS_AS(parse_graph(""), BadParams);
    CHECK_THROWS_AS(parse_graph("ring:N=4"), BadParams);
    CHECK_THROWS_AS(parse_graph("circulant:N=4"), BadParams);
    CHECK_THROWS_AS(parse_graph("circulant:m=2"), BadParams);
    CHECK_THROWS_AS(parse_graph("circulant:N=four,m=1"), BadParams);
    CHECK_THROWS_AS(parse_graph("complete:"), BadParams);
    CHECK_THROWS_AS(parse_graph("edges:"), BadParams);
    CHECK_THROWS_AS(parse_graph("edges:0-0"), BadParams);
    CHECK_THROWS_AS(parse_graph("edges:0"), BadParams);
    CHECK_THROWS_AS(parse_graph("edges:0-a"), BadParams);
}

TEST_CASE("format round-trips through parse") {
    testsup::Rng rng(7);
    std::vector<Graph> samples = {circulant(5, 2), complete(4),
                                  from_edges(6, {{0, 5}, {1, 2}, {3, 4}, {0, 1}})};
    for (int t = 0; t < 5; ++t) samples.push_back(testsup::random_connected_graph(rng, 3 + t));
    for (const Graph& g : samples) {
        const Graph back = parse_graph(format_graph(g));
        CHECK(back.N == g.N);
        CHECK(back.edges == g.edges);
    }
}

TEST_CASE("adjacency and Laplacian structure") {
    const Graph g = circulant(5, 1);
    const Matrix A = adjacency(g);
    const Matrix L = laplacian(g);
    const std::vector<int> deg = degrees(g);
    for (int i = 0; i < g.N; ++i) {
        double arow = 0, lrow = 0;
        for (int j = 0; j < g.N; ++j) {
            arow += A(i, j);
            lrow += L(i, j);
            if (i != j) CHECK(L(i, j) == -A(i, j));
        }
        CHECK(arow == doctest::Approx(double(deg[std::size_t(i)])));
        CHECK(lrow == doctest::Approx(0.0));
        CHECK(L(i, i) == double(deg[std::size_t(i)]));
        CHECK(A(i, i) == 0.0);
    }
    CHECK(min_eigenvalue(L) > -1e-12);
}

TEST_CASE("circulant Laplacian spectrum matches the cosine formula") {
    for (int N : {4, 5, 6, 8, 9}) {
        for (int m : {1, 2}) {
            if (m > (N - 1) / 2 && !(N % 2 == 0 && m == N / 2)) continue;
            const Graph g = circulant(N, m);
            const Spectrum sp = sym_eigen(laplacian(g));
            Vec formula;
            for (int k = 0; k < N; ++k) {
                double lam = 0.0;
                for (int s = 1; s <= m; ++s) {
                    // m = N/2 counts the antipodal vertex once
                    const bool antipodal = (N % 2 == 0 && s == N / 2);
                    const double c = std::cos(2.0 * M_PI * k * s / N);
                    lam += antipodal ? (1.0 - c) : (2.0 - 2.0 * c);
                }
                formula.push_back(lam);
            }
            std::sort(formula.begin(), formula.end());
            for (int k = 0; k < N; ++k)
                CHECK(sp.eigenvalues[std::size_t(k)] ==
                      doctest::Approx(formula[std::size_t(k)]).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("closed neighborhoods include the vertex itself") {
    const Graph g = from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    const auto nb = closed_neighborhoods(g);
    REQUIRE(nb.size() == 4);
    CHECK(nb[0] == std::vector<int>{0, 1});
    CHECK(nb[1] == std::vector<int>{0, 1, 2});
    CHECK(nb[2] == std::vector<int>{1, 2, 3});
    CHECK(nb[3] == std::vector<int>{2, 3});
}

TEST_CASE("connectivity") {
    CHECK(is_connected(circulant(7, 1)));
    CHECK(is_connected(from_edges(2, {{0, 1}})));
    CHECK_FALSE(is_connected(from_edges(4, {{0, 1}, {2, 3}})));
    CHECK_FALSE(is_connected(from_edges(3, {{0, 1}})));

    // lambda_2 positive iff connected; known values
    CHECK(algebraic_connectivity(complete(5)) == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(algebraic_connectivity(from_edges(2, {{0, 1}})) == doctest::Approx(2.0));
    CHECK(algebraic_connectivity(circulant(4, 1)) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(algebraic_connectivity(from_edges(4, {{0, 1}, {2, 3}})) < 1e-10);
}

TEST_CASE("circulant isomorphism search") {
    // relabeled 4-cycle: 0-2-1-3-0
    const Graph shuffled = from_edges(4, {{0, 2}, {1, 2}, {1, 3}, {0, 3}});
    const auto perm = circulant_isomorphism(shuffled, 1);
    REQUIRE(perm.has_value());
    CHECK(verify_circulant_isomorphism(shuffled, 1, *perm));

    // identity case
    const Graph c52 = circulant(5, 2);
    const auto idp = circulant_isomorphism(c52, 2);
    REQUIRE(idp.has_value());
    CHECK(verify_circulant_isomorphism(c52, 2, *idp));

    // path graph is not vertex-transitive: no isomorphism exists
    const Graph path = from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    CHECK_FALSE(circulant_isomorphism(path, 1).has_value());
    CHECK_FALSE(verify_circulant_isomorphism(path, 1, {0, 1, 2, 3}));

    // wrong m
    CHECK_FALSE(circulant_isomorphism(circulant(6, 1), 2).has_value());

    CHECK_THROWS_AS(circulant_isomorphism(circulant(12, 1), 1), TooLarge);
}

TEST_CASE("cycle decomposition splits the Laplacian") {
    const Graph c62 = circulant(6, 2);
    const CycleDecomposition dec = cycle_decompose(c62, {0, 1, 2, 3, 4, 5});
    const Matrix L = laplacian(c62);
    CHECK(max_abs(dec.L_cycle + dec.L1 - L) == 0.0);
    CHECK(max_abs(dec.L_cycle - laplacian(circulant(6, 1))) == 0.0);
    // leftover edges are the chords i to i+2
    CHECK(dec.L1(0, 2) == -1.0);
    CHECK(dec.L1(0, 1) == 0.0);
    CHECK(dec.L1(0, 0) == 2.0);

    // cycle edges must exist
    CHECK_THROWS_AS(cycle_decompose(circulant(4, 1), {0, 2, 1, 3}), NotACycle);
    // must be a permutation of all vertices
    CHECK_THROWS_AS(cycle_decompose(c62, {0, 1, 2, 3, 4, 4}), NotACycle);
    CHECK_THROWS_AS(cycle_decompose(c62, {0, 1, 2}), NotACycle);
}
