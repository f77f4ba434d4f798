#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

#include "properad/error.hpp"
#include "properad/generate.hpp"
#include "properad/graph_io.hpp"
#include "properad/isomorphism.hpp"
#include "properad/wiring_graph.hpp"
#include "support.hpp"

using namespace properad;
using properad::test::data_graph;

namespace {

bool has_violation(const WiringGraph& g, const std::string& invariant) {
  const auto r = validate_graph(g);
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const Violation& v) { return v.invariant == invariant; });
}

// Cycle detection on the undirected graph, legs as edges to private anchors.
bool union_find_acyclic(const WiringGraph& g) {
  std::vector<std::size_t> parent(g.num_vertices() + g.num_edges() * 2);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  const auto& inc = g.incidence();
  std::size_t anchor = g.num_vertices();
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const std::size_t a = inc.tail_vertex[e] >= 0 ? static_cast<std::size_t>(inc.tail_vertex[e]) : anchor++;
    const std::size_t b = inc.head_vertex[e] >= 0 ? static_cast<std::size_t>(inc.head_vertex[e]) : anchor++;
    if (find(a) == find(b)) return false;
    parent[find(a)] = find(b);
  }
  return true;
}

WiringGraph relabel_pgc(const WiringGraph& g, bool swap_vertices_names, bool swap_edges) {
  Isomorphism r;
  for (const Vertex& v : g.vertices()) r.vertex_map[v.id] = swap_vertices_names ? v.id + "'" : v.id;
  for (const Edge& e : g.edges()) r.edge_map[e.id] = swap_edges ? "x" + e.id : e.id;
  return apply_renaming(g, r);
}

}  // namespace

TEST_CASE("the four-vertex tree is valid and simply connected") {
  const auto t = data_graph("tree_T.graph");
  CHECK(validate_graph(t).ok);
  CHECK(is_simply_connected(t));
  CHECK(t.num_vertices() == 4);
  CHECK(t.num_edges() == 8);
}

TEST_CASE("a self loop is reported as a directed cycle") {
  const auto g = data_graph("self_loop.graph");
  const auto r = validate_graph(g);
  CHECK_FALSE(r.ok);
  CHECK(has_violation(g, "directed cycle"));
}

TEST_CASE("two disjoint corollas are reported as disconnected") {
  CHECK(has_violation(data_graph("two_corollas.graph"), "connected"));
}

TEST_CASE("violations are generated for each invariant") {
  SUBCASE("port range") {
    auto g = make_corolla(1, 1);
    g.set_head("i1", Endpoint::at("v", 2));
    CHECK(has_violation(g, "port range"));
  }
  SUBCASE("port matching") {
    auto g = make_corolla(2, 1);
    g.set_head("i2", Endpoint::at("v", 1));
    CHECK(has_violation(g, "port matching"));
  }
  SUBCASE("leg order") {
    auto g = make_corolla(2, 1);
    g.set_inputs({"i2", "i1"});
    CHECK(has_violation(g, "leg order"));
  }
  SUBCASE("coloring total") {
    auto g = make_corolla(2, 1);
    g.set_color("i1", "c");
    CHECK(has_violation(g, "coloring total"));
  }
  SUBCASE("exceptional edge in a graph with vertices") {
    auto g = make_corolla(1, 1);
    g.add_edge("stray", Endpoint::slot(2), Endpoint::slot(2));
    g.set_inputs({"i1", "stray"});
    g.set_outputs({"o1", "stray"});
    CHECK(has_violation(g, "exceptional edge"));
  }
  SUBCASE("longer directed cycle names its vertices") {
    WiringGraph g("cyc");
    g.add_vertex("a", 1, 1);
    g.add_vertex("b", 1, 1);
    g.add_edge("x", Endpoint::at("a", 1), Endpoint::at("b", 1));
    g.add_edge("y", Endpoint::at("b", 1), Endpoint::at("a", 1));
    const auto r = validate_graph(g);
    REQUIRE_FALSE(r.ok);
    CHECK(has_violation(g, "directed cycle"));
  }
}

TEST_CASE("simple connectivity") {
  CHECK(is_simply_connected(make_exceptional_edge()));
  CHECK_FALSE(is_simply_connected(data_graph("subst_P.graph")));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const auto g = random_graph(rng);
    REQUIRE(is_valid(g));
    CHECK(is_simply_connected(g) == union_find_acyclic(g));
    const auto legs = g.inputs().size() + g.outputs().size();
    if (g.num_vertices() > 0) {
      CHECK(is_simply_connected(g) == (g.num_edges() == g.num_vertices() + legs - 1));
    }
  }
}

TEST_CASE("biprofiles") {
  const auto c = data_graph("colored_corolla.graph");
  CHECK(biprofile_of_vertex(c, "v") == Biprofile{{"c1", "c2"}, {"d"}});
  CHECK(biprofile_of(make_exceptional_edge("c")) == Biprofile{{"c"}, {"c"}});
  auto z = make_corolla(0, 2);
  for (const Edge& e : std::vector<Edge>(z.edges())) z.set_color(e.id, "x");
  CHECK(biprofile_of(z) == Biprofile{{}, {"x", "x"}});
  CHECK_THROWS_WITH_AS(biprofile_of(make_corolla(1, 1)), doctest::Contains("coloring required"), Error);
}

TEST_CASE("isomorphisms") {
  const auto t = data_graph("tree_T.graph");
  const auto self = find_isomorphisms(t, t, IsoMode::strict);
  REQUIRE(self.size() == 1);
  for (const auto& [v, w] : self[0].vertex_map) CHECK(v == w);

  auto a = make_corolla(2, 1);
  auto b = make_corolla(2, 1);
  b.set_head("i1", Endpoint::at("v", 2));
  b.set_head("i2", Endpoint::at("v", 1));
  CHECK(find_isomorphisms(a, b, IsoMode::weak).size() == 2);
  CHECK(find_isomorphisms(a, b, IsoMode::strict).empty());

  auto p = data_graph("parallel_uv.graph");
  Isomorphism swap;
  swap.vertex_map = {{"u", "u"}, {"v", "v"}};
  swap.edge_map = {{"1", "2"}, {"2", "1"}};
  CHECK(weakly_isomorphic(p, apply_renaming(p, swap)));
}

TEST_CASE("canonical forms") {
  const auto t = data_graph("tree_T.graph");
  CHECK(canonical_form(t) == canonical_form(t));
  CHECK(canonical_form(make_linear_graph(2)) != canonical_form(make_corolla(1, 1)));

  const auto pgc = make_pgc({1, 2, 2, 1, {{1, 1}, {2, 2}}});
  const std::string form = canonical_form(pgc);
  for (bool sv : {false, true}) {
    for (bool se : {false, true}) CHECK(canonical_form(relabel_pgc(pgc, sv, se)) == form);
  }

  std::mt19937_64 rng(11);
  std::vector<WiringGraph> pool;
  for (int i = 0; i < 60; ++i) {
    RandomGraphOptions o;
    o.max_vertices = 3;
    o.max_edges = 8;
    pool.push_back(random_graph(rng, o));
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = i; j < pool.size(); ++j) {
      const bool iso = !find_isomorphisms(pool[i], pool[j], IsoMode::weak, 1).empty();
      CHECK(iso == (canonical_form(pool[i]) == canonical_form(pool[j])));
    }
  }
}

TEST_CASE("canonical representatives agree across an isomorphism class") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto g = random_graph(rng);
    const auto rep = canonical_representative(g);
    CHECK(is_valid(rep.graph));
    CHECK(weakly_isomorphic(rep.graph, g));
    CHECK(apply_renaming(g, rep.from_original).num_edges() == g.num_edges());
  }
}

TEST_CASE("constructors") {
  CHECK(is_exceptional_edge(make_linear_graph(0)));
  const auto c00 = make_corolla(0, 0);
  CHECK(c00.num_vertices() == 1);
  CHECK(c00.num_edges() == 0);
  CHECK(validate_graph(c00).ok);
  const auto l3 = make_linear_graph(3);
  CHECK(l3.num_vertices() == 3);
  CHECK(arity_of(l3) == std::pair{1, 1});
  const auto p = make_pgc({3, 4, 4, 3, {{1, 1}, {2, 2}, {3, 3}}});
  CHECK(p.num_vertices() == 2);
  CHECK(arity_of(p) == std::pair{4, 4});
  CHECK(is_valid(p));
  CHECK_THROWS_WITH_AS(make_pgc({1, 1, 1, 1, {}}), doctest::Contains("PGC requires"), Error);
}

TEST_CASE("graph text format round trip") {
  for (const char* f : {"tree_T.graph", "subst_G.graph", "subst_P.graph", "reedy_G.graph", "reedy_K.graph",
                        "parallel_uv.graph", "exceptional.graph", "colored_corolla.graph", "self_loop.graph"}) {
    const auto g = data_graph(f);
    CHECK(parse_graph_string(print_graph(g)) == g);
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto g = random_graph(rng);
    CHECK(parse_graph_string(print_graph(g)) == g);
  }
}

TEST_CASE("strict parsing reports line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_graph_string(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("graph g\nvertex v in=1 out=1\nvertex v in=1 out=1\n") == 3);
  CHECK(line_of("graph g\nnode v\n") == 2);
  CHECK(line_of("graph g\nedge e from=w:out:1 to=out:1\n") == 2);
  CHECK(line_of("graph g\nedge e from=in:1 to=out:1\ninputs f\n") == 3);
  CHECK(line_of("graph g\nvertex v in=x out=1\n") == 2);
  CHECK(line_of("vertex v in=1 out=1\n") == 1);
}
