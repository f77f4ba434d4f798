#include "properad/generate.hpp"

#include <algorithm>
#include <string>

#include "properad/error.hpp"

namespace properad {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

struct Draft {
  struct E {
    int tail = -1;  // vertex, or -1 for an input leg
    int head = -1;  // vertex, or -1 for an output leg
  };
  int n = 0;
  std::vector<E> edges;
};

WiringGraph realize(std::mt19937_64& rng, const Draft& d) {
  WiringGraph g("random");
  if (d.n == 0) return make_exceptional_edge();
  std::vector<std::vector<std::size_t>> ins(static_cast<std::size_t>(d.n));
  std::vector<std::vector<std::size_t>> outs(static_cast<std::size_t>(d.n));
  std::vector<std::size_t> in_legs;
  std::vector<std::size_t> out_legs;
  for (std::size_t e = 0; e < d.edges.size(); ++e) {
    if (d.edges[e].tail >= 0) {
      outs[static_cast<std::size_t>(d.edges[e].tail)].push_back(e);
    } else {
      in_legs.push_back(e);
    }
    if (d.edges[e].head >= 0) {
      ins[static_cast<std::size_t>(d.edges[e].head)].push_back(e);
    } else {
      out_legs.push_back(e);
    }
  }
  std::vector<Endpoint> tail(d.edges.size());
  std::vector<Endpoint> head(d.edges.size());
  for (int v = 0; v < d.n; ++v) {
    auto& vi = ins[static_cast<std::size_t>(v)];
    auto& vo = outs[static_cast<std::size_t>(v)];
    std::shuffle(vi.begin(), vi.end(), rng);
    std::shuffle(vo.begin(), vo.end(), rng);
    const std::string id = "v" + std::to_string(v);
    g.add_vertex(id, static_cast<int>(vi.size()), static_cast<int>(vo.size()));
    for (std::size_t k = 0; k < vi.size(); ++k) head[vi[k]] = Endpoint::at(id, static_cast<int>(k + 1));
    for (std::size_t k = 0; k < vo.size(); ++k) tail[vo[k]] = Endpoint::at(id, static_cast<int>(k + 1));
  }
  std::shuffle(in_legs.begin(), in_legs.end(), rng);
  std::shuffle(out_legs.begin(), out_legs.end(), rng);
  for (std::size_t k = 0; k < in_legs.size(); ++k) tail[in_legs[k]] = Endpoint::slot(static_cast<int>(k + 1));
  for (std::size_t k = 0; k < out_legs.size(); ++k) head[out_legs[k]] = Endpoint::slot(static_cast<int>(k + 1));
  auto name = [](std::size_t e) { return "e" + std::to_string(e); };
  for (std::size_t e = 0; e < d.edges.size(); ++e) g.add_edge(name(e), tail[e], head[e]);
  std::vector<EdgeId> gi;
  std::vector<EdgeId> go;
  for (auto e : in_legs) gi.push_back(name(e));
  for (auto e : out_legs) go.push_back(name(e));
  g.set_inputs(std::move(gi));
  g.set_outputs(std::move(go));
  return g;
}

Draft draft(std::mt19937_64& rng, const RandomGraphOptions& o) {
  Draft d;
  d.n = uniform(rng, o.min_vertices, o.max_vertices);
  if (d.n == 0) {
    d.edges.push_back({-1, -1});
    return d;
  }
  // Vertices are numbered in a topological order; edges go from lower to higher.
  for (int v = 1; v < d.n; ++v) {
    const int u = uniform(rng, 0, v - 1);
    d.edges.push_back({u, v});
  }
  if (d.n >= 2) {
    const int extra = uniform(rng, 0, o.max_extra_edges);
    for (int i = 0; i < extra; ++i) {
      const int a = uniform(rng, 0, d.n - 2);
      const int b = uniform(rng, a + 1, d.n - 1);
      d.edges.push_back({a, b});
    }
  }
  for (int v = 0; v < d.n; ++v) {
    const int li = uniform(rng, 0, o.max_legs_per_vertex);
    const int lo = uniform(rng, 0, o.max_legs_per_vertex);
    for (int i = 0; i < li; ++i) d.edges.push_back({-1, v});
    for (int i = 0; i < lo; ++i) d.edges.push_back({v, -1});
  }
  return d;
}

}  // namespace

WiringGraph random_graph(std::mt19937_64& rng, const RandomGraphOptions& options) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Draft d = draft(rng, options);
    if (options.max_edges > 0 && static_cast<int>(d.edges.size()) > options.max_edges) continue;
    return realize(rng, d);
  }
  throw Error("random_graph: edge limit too tight");
}

WiringGraph random_graph_with_arity(std::mt19937_64& rng, int m, int n,
                                    const RandomGraphOptions& options) {
  if (m == 1 && n == 1 && options.min_vertices == 0 && uniform(rng, 0, 4) == 0) {
    return make_exceptional_edge();
  }
  RandomGraphOptions o = options;
  o.min_vertices = std::max(1, o.min_vertices);
  o.max_vertices = std::max(o.min_vertices, o.max_vertices);
  Draft d = draft(rng, o);
  // Drop the drafted legs and hand out exactly m inputs and n outputs.
  std::erase_if(d.edges, [](const Draft::E& e) { return e.tail < 0 || e.head < 0; });
  for (int i = 0; i < m; ++i) d.edges.push_back({-1, uniform(rng, 0, d.n - 1)});
  for (int i = 0; i < n; ++i) d.edges.push_back({uniform(rng, 0, d.n - 1), -1});
  return realize(rng, d);
}

}  // namespace properad
