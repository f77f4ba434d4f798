#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "properad/generate.hpp"
#include "properad/graph_io.hpp"
#include "properad/substitution.hpp"

namespace properad::test {

inline std::string data_path(const std::string& file) {
  return std::string(PROPERAD_TEST_DATA) + "/" + file;
}

inline WiringGraph data_graph(const std::string& file) { return load_graph(data_path(file)); }

// A random vertex of g with a random guest of its arity, glued along random
// port bijections.
inline SubstitutionAssignment random_assignment(std::mt19937_64& rng, const WiringGraph& g, int max_vertices) {
  const auto& vs = g.vertices();
  const Vertex& v = vs[std::uniform_int_distribution<std::size_t>(0, vs.size() - 1)(rng)];
  RandomGraphOptions o;
  o.max_vertices = max_vertices;
  o.max_extra_edges = 1;
  SubstitutionAssignment a;
  a.host_vertex = v.id;
  a.guest = random_graph_with_arity(rng, v.in_arity, v.out_arity, o);
  std::vector<int> in(static_cast<std::size_t>(v.in_arity));
  std::vector<int> out(static_cast<std::size_t>(v.out_arity));
  for (std::size_t k = 0; k < in.size(); ++k) in[k] = static_cast<int>(k + 1);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = static_cast<int>(k + 1);
  std::shuffle(in.begin(), in.end(), rng);
  std::shuffle(out.begin(), out.end(), rng);
  a.in_bij = in;
  a.out_bij = out;
  return a;
}

}  // namespace properad::test
