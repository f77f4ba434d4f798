#include <algorithm>

#include "../worked_examples.hpp"
#include "common.hpp"
#include "properad/gamma.hpp"
#include "properad/substitution.hpp"

namespace properad::acceptance {

namespace {

std::size_t internal_edges(const WiringGraph& g) {
  return static_cast<std::size_t>(
      std::count_if(g.edges().begin(), g.edges().end(), [&](const Edge& e) { return !is_leg(g, e); }));
}

}  // namespace

Outcome criterion_worked_examples() {
  Stopwatch clock;
  Outcome out;

  // Substituting the partially grafted corolla P at x.
  const auto g = test::data_graph("subst_G.graph");
  const auto gp = substitute(g, {"x", test::data_graph("subst_P.graph")});
  if (!is_valid(gp)) out.fail("G(P) is not a valid graph");
  if (gp.num_vertices() != 3) out.fail("G(P) has " + std::to_string(gp.num_vertices()) + " vertices, expected 3");
  if (internal_edges(gp) != internal_edges(g) + 3) {
    out.fail("G(P) has " + std::to_string(internal_edges(gp)) + " internal edges, expected " +
             std::to_string(internal_edges(g) + 3));
  }

  // The factorization G -> G1 -> K.
  const auto r = reedy_factorize(test::factorization_example());
  const WiringGraph& g1 = *r.negative.target;
  std::vector<VertexId> middle;
  for (const Vertex& v : g1.vertices()) middle.push_back(v.id);
  std::sort(middle.begin(), middle.end());
  if (middle != std::vector<VertexId>{"u", "x"}) out.fail("intermediate graph does not have exactly {u, x}");
  if (!same_morphism(compose(r.positive, r.negative), test::factorization_example())) {
    out.fail("factorization does not compose back");
  }

  // The endomorphism whose image doubles u.
  const auto bad = check_gamma_morphism(test::doubled_vertex_endomorphism());
  if (bad.ok) out.fail("non-subgraph image accepted");
  if (bad.image_vertices != 4) out.fail("image witness has " + std::to_string(bad.image_vertices) + " vertices");

  const double seconds = clock.seconds();
  if (seconds >= 1.0) out.fail("runtime " + std::to_string(seconds) + " s, limit 1 s");
  out.detail = "G(P): " + std::to_string(gp.num_vertices()) + " vertices, +" +
               std::to_string(internal_edges(gp) - internal_edges(g)) + " internal edges; G1 vertices {u, x}; " +
               "bad image rejected with " + std::to_string(bad.image_vertices) + "-vertex witness; " +
               std::to_string(static_cast<int>(seconds * 1000)) + " ms";
  return out;
}

}  // namespace properad::acceptance
