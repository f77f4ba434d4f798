#include "common.hpp"
#include "properad/isomorphism.hpp"
#include "properad/presheaf.hpp"
#include "properad/substitution.hpp"

namespace properad::acceptance {

Outcome criterion_simplicial_cofaces() {
  Outcome out;
  std::string counts;
  for (int n = 1; n <= 5; ++n) {
    const auto line = make_linear_graph(n);
    int inner = 0;
    int outer = 0;
    for (const auto& f : enumerate_cofaces_into(line)) {
      (f.kind == GeneratorKind::inner_coface ? inner : outer)++;
      // Every face of L_n is L_{n-1}, as for the simplex.
      if (!weakly_isomorphic(f.source, make_linear_graph(n - 1))) {
        out.fail("a face of L" + std::to_string(n) + " is not L" + std::to_string(n - 1));
      }
    }
    if (inner + outer != n + 1) out.fail("L" + std::to_string(n) + " has " + std::to_string(inner + outer) + " cofaces");
    if (inner != n - 1) out.fail("L" + std::to_string(n) + " has " + std::to_string(inner) + " inner cofaces");
    if (outer != 2) out.fail("L" + std::to_string(n) + " has " + std::to_string(outer) + " outer cofaces");
    counts += (n > 1 ? ", " : "") + std::string("L") + std::to_string(n) + ": " + std::to_string(inner) + "+" +
              std::to_string(outer);
  }

  // The same count from the faces of the truncated category, with distinct
  // images (linear graphs of up to 5 vertices have one input and one output).
  const ShapeIndex index(TruncationOptions{5, 1, 1, 0});
  for (int n = 1; n <= 5; ++n) {
    const auto shape = index.find(make_linear_graph(n));
    if (!shape) {
      out.fail("L" + std::to_string(n) + " missing from the truncation");
      continue;
    }
    int inner = 0;
    const auto& faces = index.faces(*shape);
    for (const auto& f : faces) inner += f.inner ? 1 : 0;
    if (faces.size() != static_cast<std::size_t>(n + 1) || inner != n - 1) {
      out.fail("distinct faces of L" + std::to_string(n) + ": " + std::to_string(faces.size()) + " (" +
               std::to_string(inner) + " inner)");
    }
  }
  out.detail = "inner+outer cofaces " + counts;
  return out;
}

}  // namespace properad::acceptance
