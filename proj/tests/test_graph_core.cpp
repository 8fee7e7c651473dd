#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "metastab/errors.hpp"
#include "metastab/generators.hpp"
#include "metastab/graph.hpp"

using namespace metastab;

TEST_CASE("connected components") {
  SUBCASE("path is one component") {
    auto comps = connected_components(path_graph(3));
    REQUIRE(comps.size() == 1);
    CHECK(comps[0].size() == 3);
  }
  SUBCASE("edgeless graph is all singletons") {
    Graph g = make_graph(5, {});
    auto comps = connected_components(g);
    CHECK(comps.size() == 5);
    for (const auto& c : comps) CHECK(c.size() == 1);
  }
  SUBCASE("bond percolation at p=0 in B_2 gives 16 singletons") {
    Graph g = gen_bond_percolation({2, 2, BoxKind::Lattice}, 0.0, 42);
    auto comps = connected_components(g);
    CHECK(comps.size() == 16);
  }
  SUBCASE("empty graph gives empty list") {
    Graph g;
    CHECK(connected_components(g).empty());
  }
  SUBCASE("component sizes sum to |V|") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      Graph g = gen_bond_percolation({4, 2, BoxKind::Lattice}, 0.4, seed);
      std::size_t total = 0;
      for (const auto& c : connected_components(g)) total += c.size();
      CHECK(total == g.num_vertices());
    }
  }
}

TEST_CASE("maximal component") {
  SUBCASE("unique maximum wins") {
    // components {0,1,2} and {3,4,5,6,7}
    Graph g = make_graph(8, std::vector<std::pair<Vertex, Vertex>>{
                                {0, 1}, {1, 2}, {3, 4}, {4, 5}, {5, 6}, {6, 7}});
    Component c = maximal_component(g);
    CHECK(c.size() == 5);
    CHECK(c.vertices.front() == 3);
  }
  SUBCASE("tie goes to the smallest minimum id") {
    // two triangles, min ids 0 and 7
    Graph g = make_graph(10, std::vector<std::pair<Vertex, Vertex>>{
                                 {0, 1}, {1, 2}, {2, 0}, {7, 8}, {8, 9}, {9, 7}});
    Component c = maximal_component(g);
    CHECK(c.vertices.front() == 0);
  }
  SUBCASE("p=1 bond percolation fills the box") {
    Graph g = gen_bond_percolation({3, 2, BoxKind::Lattice}, 1.0, 0);
    CHECK(maximal_component(g).size() == 36);
  }
  SUBCASE("empty graph throws") {
    Graph g;
    CHECK_THROWS_AS(maximal_component(g), EmptyGraphError);
  }
  SUBCASE("repeated calls return the identical vertex set") {
    Graph g = gen_bond_percolation({4, 2, BoxKind::Lattice}, 0.5, 9);
    CHECK(maximal_component(g).vertices == maximal_component(g).vertices);
  }
}

TEST_CASE("induced subgraph") {
  Graph tri = cycle_graph(3);
  SUBCASE("inducing on everything is the identity") {
    Graph g = induced_subgraph(tri, std::vector<Vertex>{0, 1, 2});
    CHECK(g.num_vertices() == 3);
    CHECK(g.num_edges() == 3);
  }
  SUBCASE("single vertex") {
    Graph g = induced_subgraph(tri, std::vector<Vertex>{1});
    CHECK(g.num_vertices() == 1);
    CHECK(g.num_edges() == 0);
  }
  SUBCASE("two of three triangle vertices keep one edge") {
    Graph g = induced_subgraph(tri, std::vector<Vertex>{0, 1});
    CHECK(g.num_vertices() == 2);
    CHECK(g.num_edges() == 1);
  }
  SUBCASE("unknown vertex throws") {
    CHECK_THROWS_AS(induced_subgraph(tri, std::vector<Vertex>{0, 5}), UnknownVertexError);
  }
  SUBCASE("idempotent") {
    Graph g = gen_bond_percolation({3, 2, BoxKind::Lattice}, 0.5, 4);
    std::vector<Vertex> vs{0, 3, 4, 5, 10, 11};
    Graph once = induced_subgraph(g, vs);
    std::vector<Vertex> all(once.num_vertices());
    for (std::size_t v = 0; v < all.size(); ++v) all[v] = static_cast<Vertex>(v);
    Graph twice = induced_subgraph(once, all);
    CHECK(serialize_graph(once) == serialize_graph(twice));
  }
}

TEST_CASE("box restrict") {
  Graph g = gen_bond_percolation({2, 2, BoxKind::Lattice}, 1.0, 0);  // grid on {-2..1}^2
  SUBCASE("box containing everything returns the graph") {
    Graph r = box_restrict(g, {2, 2, BoxKind::Lattice});
    CHECK(r.num_vertices() == g.num_vertices());
    CHECK(r.num_edges() == g.num_edges());
  }
  SUBCASE("2x2 grid inside B_1") {
    Graph r = box_restrict(g, {1, 2, BoxKind::Lattice});
    CHECK(r.num_vertices() == 4);
    CHECK(r.num_edges() == 4);
  }
  SUBCASE("no embedding throws") {
    Graph p = path_graph(3);
    CHECK_THROWS_AS(box_restrict(p, {1, 2, BoxKind::Lattice}), NoEmbeddingError);
  }
  SUBCASE("monotone in the box") {
    Graph small = box_restrict(g, {1, 2, BoxKind::Lattice});
    Graph big = box_restrict(g, {2, 2, BoxKind::Lattice});
    CHECK(small.num_vertices() <= big.num_vertices());
    CHECK(small.num_edges() <= big.num_edges());
  }
  SUBCASE("disjoint box gives the empty graph") {
    Graph far = gen_bond_percolation({1, 2, BoxKind::Lattice}, 1.0, 0);
    for (auto& c : far.coords) c += 100.0;
    Graph r = box_restrict(far, {2, 2, BoxKind::Lattice});
    CHECK(r.num_vertices() == 0);
  }
}

TEST_CASE("metric diameter is the max axis spread") {
  Graph g = gen_bond_percolation({2, 2, BoxKind::Lattice}, 1.0, 0);
  std::vector<Vertex> all(g.num_vertices());
  for (std::size_t v = 0; v < all.size(); ++v) all[v] = static_cast<Vertex>(v);
  CHECK(metric_diameter(g, all) == doctest::Approx(3.0));  // coords span -2..1
  CHECK(metric_diameter(g, std::vector<Vertex>{0}) == 0.0);
}

TEST_CASE("serialization") {
  SUBCASE("lattice graph round-trips to identical bytes") {
    Graph g = gen_bond_percolation({3, 2, BoxKind::Lattice}, 0.6, 1234);
    std::string s = serialize_graph(g);
    Graph back = parse_graph(s);
    CHECK(serialize_graph(back) == s);
    CHECK(back.num_vertices() == g.num_vertices());
    CHECK(back.num_edges() == g.num_edges());
    CHECK(back.adj == g.adj);
    CHECK(back.coords == g.coords);
    CHECK(back.provenance.model == "bond");
    CHECK(back.provenance.seed == 1234);
  }
  SUBCASE("continuum graph round-trips exactly") {
    Graph g = gen_rgg({3, 2, BoxKind::Continuum}, 1.5, 77);
    std::string s = serialize_graph(g);
    Graph back = parse_graph(s);
    CHECK(serialize_graph(back) == s);
    CHECK(back.coords == g.coords);
    CHECK(back.embedding == EmbeddingKind::Continuum);
  }
  SUBCASE("tree without embedding round-trips") {
    GwRecord rec = gen_gw_tree(OffspringLaw::parse("0:0.25,1:0.25,2:0.5"), 5,
                               GwConditioning::SurvivalToN, 5);
    std::string s = serialize_graph(rec.tree);
    Graph back = parse_graph(s);
    CHECK(serialize_graph(back) == s);
    CHECK(back.embedding == EmbeddingKind::None);
  }
}

TEST_CASE("make_graph validates") {
  CHECK_THROWS_AS(make_graph(2, std::vector<std::pair<Vertex, Vertex>>{{0, 0}}),
                  BadParameterError);
  CHECK_THROWS_AS(make_graph(2, std::vector<std::pair<Vertex, Vertex>>{{0, 5}}),
                  UnknownVertexError);
  // duplicate edges collapse
  Graph g = make_graph(2, std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {1, 0}, {0, 1}});
  CHECK(g.num_edges() == 1);
}
