#include "consgain/errors.hpp"
#include "consgain/graph.hpp"

#include <doctest.h>

#include <random>

using namespace consgain;

TEST_CASE("build_family produces the 0-1 families") {
  SUBCASE("K3 is all ones off the diagonal") {
    const Graph g = build_family(complete(3));
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) CHECK(g.weight(i, j) == (i == j ? 0.0 : 1.0));
    }
  }
  SUBCASE("C_{1,4} is the 4-cycle") {
    const Graph g = build_family(ring_lattice(1, 4));
    CHECK(g.edge_count() == 4);
    CHECK(g.weight(0, 1) == 1.0);
    CHECK(g.weight(0, 3) == 1.0);
    CHECK(g.weight(0, 2) == 0.0);
  }
  SUBCASE("n=2 collapses every family to one edge") {
    const Graph k2 = build_family(complete(2));
    CHECK(build_family(star(2)) == k2);
    CHECK(build_family(path(2)) == k2);
    CHECK(k2.edge_count() == 1);
  }
  SUBCASE("star hub is vertex 0") {
    const Graph g = build_family(star(5));
    for (std::size_t i = 1; i < 5; ++i) CHECK(g.weight(0, i) == 1.0);
    CHECK(g.weight(1, 2) == 0.0);
  }
}

TEST_CASE("invalid family combinations are rejected") {
  CHECK_THROWS_AS(build_family(ring_lattice(2, 4)), ParameterError);
  CHECK_THROWS_AS(build_family(complete(1)), ParameterError);
  CHECK_THROWS_AS(build_family(ring_lattice(0, 5)), ParameterError);
  CHECK_THROWS_AS(build_family(path(kMaxVertices + 1)), ParameterError);
  CHECK_NOTHROW(build_family(ring_lattice(3, 7)));
}

TEST_CASE("density") {
  for (std::size_t n = 2; n <= 100; ++n) CHECK(density(build_family(complete(n))).value() == 1.0);
  CHECK(density(build_family(star(4))).value() == doctest::Approx(0.5));
  for (std::size_t k = 1; k <= 3; ++k) {
    for (std::size_t n = 2 * k + 1; n <= 40; ++n) {
      const Density d = density(build_family(ring_lattice(k, n)));
      CHECK(d.value() == doctest::Approx(2.0 * k / (n - 1.0)).epsilon(1e-15));
    }
  }
  const Graph empty(Eigen::MatrixXd::Zero(3, 3));
  CHECK(density(empty).value() == 0.0);
  CHECK_FALSE(empty.is_connected());
}

TEST_CASE("Graph constructor validates") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a(0, 1) = 1.0;
  CHECK_THROWS_AS(Graph{a}, ParameterError);  // asymmetric
  a(1, 0) = 1.0;
  CHECK_NOTHROW(Graph{a});
  a(2, 2) = 1.0;
  CHECK_THROWS_AS(Graph{a}, ParameterError);  // self-loop
  a(2, 2) = 0.0;
  a(0, 2) = a(2, 0) = -1.0;
  CHECK_THROWS_AS(Graph{a}, ParameterError);
  CHECK_THROWS_AS(Graph{Eigen::MatrixXd::Zero(1, 1)}, ParameterError);
  CHECK_THROWS_AS(Graph{Eigen::MatrixXd::Zero(2, 3)}, ParameterError);
}

TEST_CASE("components") {
  const Graph g = parse_edge_list("0 1 1\n2 3 1\n");
  const auto parts = g.components();
  REQUIRE(parts.size() == 2);
  CHECK(parts[0] == std::vector<std::size_t>{0, 1});
  CHECK(parts[1] == std::vector<std::size_t>{2, 3});
  CHECK(build_family(path(6)).is_connected());
}

TEST_CASE("edge-list parsing") {
  SUBCASE("path example") {
    const Graph g = parse_edge_list("0 1 1.0\n1 2 1.0\n2 3 1.0");
    CHECK(g == build_family(path(4)));
  }
  SUBCASE("unweighted lines default to 1") {
    CHECK(parse_edge_list("0 1\n1 2\n") == build_family(path(3)));
  }
  SUBCASE("comments and blank lines") {
    CHECK(parse_edge_list("# header\n\n0 1 1 # tail\n") == build_family(path(2)));
  }
  SUBCASE("vertex-count directive keeps isolated vertices") {
    const Graph g = parse_edge_list("# n=4\n0 1 1\n");
    CHECK(g.size() == 4);
    CHECK_FALSE(g.is_connected());
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_edge_list("0 0 2.0\n1 0 1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("0 1 -1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("0 1 1\n0 1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("0 1 1\n1 0 2\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("0 1 1 7\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("0 x\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("0 1 w\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("-1 1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("# n=2\n0 5 1\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list(""), ParseError);
  }
  SUBCASE("reverse duplicate within tolerance is averaged") {
    const Graph g = parse_edge_list("0 1 1.0\n1 0 1.0000000000000004\n");
    CHECK(g.weight(0, 1) == g.weight(1, 0));
    CHECK(g.weight(0, 1) == doctest::Approx(1.0));
  }
}

TEST_CASE("JSON parsing") {
  const Graph g = parse_graph_json(R"({"adjacency": [[0, 1.0], [1.000000000000001, 0]]})");
  CHECK(g.weight(0, 1) == g.weight(1, 0));
  CHECK_THROWS_AS(parse_graph_json(R"({"adjacency": [[0, 1.0], [1.1, 0]]})"), ParseError);
  CHECK_THROWS_AS(parse_graph_json(R"({"adjacency": [[2, 1], [1, 0]]})"), ParseError);
  CHECK_THROWS_AS(parse_graph_json(R"({"adjacency": [[0, 1], [1]]})"), ParseError);
  CHECK_THROWS_AS(parse_graph_json("{not json"), ParseError);
  // parse_graph sniffs the format
  CHECK(parse_graph(R"({"adjacency": [[0, 1], [1, 0]]})") == build_family(path(2)));
  CHECK(parse_graph("0 1 1\n") == build_family(path(2)));
}

TEST_CASE("serialisation round trip is exact") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> w(0.01, 3.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 9;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (u(rng) < 0.5) a(i, j) = a(j, i) = w(rng);
      }
    }
    const Graph g(a);
    CHECK(parse_edge_list(to_edge_list(g)) == g);
    CHECK(parse_graph_json(to_graph_json(g)) == g);
  }
}
