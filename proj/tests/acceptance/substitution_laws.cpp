#include <random>

#include "../support.hpp"
#include "common.hpp"
#include "properad/generate.hpp"
#include "properad/isomorphism.hpp"
#include "properad/substitution.hpp"

namespace properad::acceptance {

Outcome criterion_substitution_laws() {
  Stopwatch clock;
  Outcome out;
  std::mt19937_64 rng(2024);
  int trials = 0;
  std::size_t checks = 0;
  while (trials < 500) {
    RandomGraphOptions o;
    o.min_vertices = 1;
    o.max_vertices = 4;
    const auto g = random_graph(rng, o);
    const auto a = test::random_assignment(rng, g, 4);
    if (a.guest.num_vertices() == 0) continue;
    const auto b = test::random_assignment(rng, a.guest, 4);
    ++trials;
    const std::string where = " (trial " + std::to_string(trials) + ")";

    // Associativity: G(H_v) then K at v's copy of w, versus G(H(K_w)_v).
    const auto left =
        substitute(substitute(g, a), {a.host_vertex + "/" + b.host_vertex, b.guest, b.in_bij, b.out_bij});
    SubstitutionAssignment nested = a;
    nested.guest = substitute(a.guest, b);
    const auto right = substitute(g, nested);
    ++checks;
    if (!is_valid(left) || !is_valid(right)) out.fail("nested substitution is not a valid graph" + where);
    if (!weakly_isomorphic(left, right)) out.fail("associativity" + where);

    // Units: a vertex's own corolla, and the graph inside a corolla.
    for (const Vertex& v : g.vertices()) {
      ++checks;
      if (!weakly_isomorphic(substitute(g, {v.id, corolla_of(g, v.id)}), g)) out.fail("right unit at " + v.id + where);
    }
    const auto [m, n] = arity_of(left);
    ++checks;
    if (!weakly_isomorphic(substitute(make_corolla(m, n), {"v", left}), left)) out.fail("left unit" + where);
  }
  const double seconds = clock.seconds();
  if (seconds >= 30) out.fail("runtime above 30 s");
  out.detail = std::to_string(trials) + " nested substitutions, " + std::to_string(checks) + " law checks, " +
               std::to_string(static_cast<int>(seconds * 1000)) + " ms";
  return out;
}

}  // namespace properad::acceptance
