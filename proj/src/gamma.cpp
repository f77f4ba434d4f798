#include "properad/gamma.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "properad/error.hpp"
#include "properad/isomorphism.hpp"

namespace properad {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

const std::string& lookup(const std::map<std::string, std::string>& m, const std::string& key,
                          const std::string& what) {
  auto it = m.find(key);
  if (it == m.end()) throw Error(what + " undefined at " + key);
  return it->second;
}

// Bit mask of vertices adjacent through an internal edge.
std::vector<unsigned> adjacency_masks(const WiringGraph& g) {
  const auto& inc = g.incidence();
  std::vector<unsigned> adj(g.num_vertices(), 0);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const int t = inc.tail_vertex[e];
    const int h = inc.head_vertex[e];
    if (t >= 0 && h >= 0) {
      adj[static_cast<std::size_t>(t)] |= 1u << h;
      adj[static_cast<std::size_t>(h)] |= 1u << t;
    }
  }
  return adj;
}

bool mask_connected(unsigned mask, const std::vector<unsigned>& adj) {
  if (mask == 0) return false;
  unsigned seen = mask & (~mask + 1);
  unsigned frontier = seen;
  while (frontier) {
    unsigned next = 0;
    for (std::size_t v = 0; v < adj.size(); ++v) {
      if (frontier & (1u << v)) next |= adj[v];
    }
    next &= mask & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen == mask;
}

std::vector<unsigned> connected_masks(const WiringGraph& g) {
  if (g.num_vertices() > 20) throw Error("graph too large for subgraph enumeration");
  const auto adj = adjacency_masks(g);
  std::vector<unsigned> masks;
  const unsigned limit = 1u << g.num_vertices();
  for (unsigned m = 1; m < limit; ++m) {
    if (mask_connected(m, adj)) masks.push_back(m);
  }
  std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
    return __builtin_popcount(a) < __builtin_popcount(b);
  });
  return masks;
}

std::vector<VertexId> mask_vertices(const WiringGraph& g, unsigned mask) {
  std::vector<VertexId> vs;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (mask & (1u << v)) vs.push_back(g.vertices()[v].id);
  }
  return vs;
}

// Substitutes the decorated graphs `guests` (keyed by host vertex) into
// `host`; host edges are relabeled by `relabel_host_edge`.
DecoratedGraph substitute_decorated(const WiringGraph& host,
                                    const std::map<VertexId, const DecoratedGraph*>& guests,
                                    const std::function<std::string(const EdgeId&)>& relabel_host_edge) {
  std::vector<SubstitutionAssignment> as;
  as.reserve(guests.size());
  for (const auto& [v, d] : guests) as.push_back({v, d->shape, {}, {}, true});
  SubstitutionTrace trace;
  DecoratedGraph out;
  out.shape = substitute_many(host, as, &trace);
  for (const Edge& e : out.shape.edges()) {
    auto it = trace.guest_edges.find(e.id);
    if (it != trace.guest_edges.end()) {
      const auto& dec = guests.at(it->second.first)->edge_decoration;
      auto d = dec.find(it->second.second);
      if (d != dec.end()) out.edge_decoration[e.id] = d->second;
    } else {
      out.edge_decoration[e.id] = relabel_host_edge(e.id);
    }
  }
  for (const Vertex& v : out.shape.vertices()) {
    auto it = trace.guest_vertices.find(v.id);
    if (it == trace.guest_vertices.end()) continue;
    const auto& dec = guests.at(it->second.first)->vertex_decoration;
    auto d = dec.find(it->second.second);
    if (d != dec.end()) out.vertex_decoration[v.id] = d->second;
  }
  return out;
}

// Checks that leg k of `d` is decorated like port k of vertex v of `host`
// after relabeling by `label`.
void check_fit(const WiringGraph& host, const VertexId& v, const DecoratedGraph& d,
               const std::function<std::string(const EdgeId&)>& label, const std::string& what) {
  const Vertex& vx = host.vertex(v);
  const auto [m, n] = arity_of(d.shape);
  if (m != vx.in_arity || n != vx.out_arity) {
    throw Error(what + "(" + v + ") has " + std::to_string(m) + " inputs and " + std::to_string(n) +
                " outputs, vertex " + v + " has (" + std::to_string(vx.in_arity) + ";" +
                std::to_string(vx.out_arity) + ")");
  }
  const auto ins = host.in_edges(v);
  const auto outs = host.out_edges(v);
  for (int k = 0; k < m; ++k) {
    const auto& leg = d.shape.inputs()[static_cast<std::size_t>(k)];
    if (lookup(d.edge_decoration, leg, what + "(" + v + ") edge decoration") !=
        label(ins[static_cast<std::size_t>(k)])) {
      throw Error(what + "(" + v + ") input leg " + std::to_string(k + 1) + " does not match port " +
                  v + ":in:" + std::to_string(k + 1));
    }
  }
  for (int k = 0; k < n; ++k) {
    const auto& leg = d.shape.outputs()[static_cast<std::size_t>(k)];
    if (lookup(d.edge_decoration, leg, what + "(" + v + ") edge decoration") !=
        label(outs[static_cast<std::size_t>(k)])) {
      throw Error(what + "(" + v + ") output leg " + std::to_string(k + 1) +
                  " does not match port " + v + ":out:" + std::to_string(k + 1));
    }
  }
}

// Decorations injective and port-compatible with `target`: the decorated
// graph is then a subgraph of the target with the given leg order.
std::string embedding_problem(const DecoratedGraph& d, const WiringGraph& target) {
  std::map<std::string, VertexId> seen_v;
  for (const Vertex& v : d.shape.vertices()) {
    auto it = d.vertex_decoration.find(v.id);
    if (it == d.vertex_decoration.end()) return "vertex " + v.id + " is undecorated";
    const std::string& y = it->second;
    if (!target.has_vertex(y)) return "vertex " + v.id + " decorated by unknown vertex " + y;
    auto [pos, fresh] = seen_v.emplace(y, v.id);
    if (!fresh) {
      return "image has " + std::to_string(d.shape.num_vertices()) + " vertices; " + pos->second +
             " and " + v.id + " both map to target vertex " + y;
    }
    const Vertex& ty = target.vertex(y);
    if (ty.in_arity != v.in_arity || ty.out_arity != v.out_arity) {
      return "vertex " + v.id + " and target vertex " + y + " have different arities";
    }
    const auto ins = d.shape.in_edges(v.id);
    const auto outs = d.shape.out_edges(v.id);
    const auto tins = target.in_edges(y);
    const auto touts = target.out_edges(y);
    for (std::size_t k = 0; k < ins.size(); ++k) {
      auto e = d.edge_decoration.find(ins[k]);
      if (ins[k].empty() || e == d.edge_decoration.end() || e->second != tins[k]) {
        return "port " + v.id + ":in:" + std::to_string(k + 1) + " is not sent to " + y + ":in:" +
               std::to_string(k + 1);
      }
    }
    for (std::size_t k = 0; k < outs.size(); ++k) {
      auto e = d.edge_decoration.find(outs[k]);
      if (outs[k].empty() || e == d.edge_decoration.end() || e->second != touts[k]) {
        return "port " + v.id + ":out:" + std::to_string(k + 1) + " is not sent to " + y +
               ":out:" + std::to_string(k + 1);
      }
    }
  }
  std::map<std::string, EdgeId> seen_e;
  for (const Edge& e : d.shape.edges()) {
    auto it = d.edge_decoration.find(e.id);
    if (it == d.edge_decoration.end()) return "edge " + e.id + " is undecorated";
    if (!target.has_edge(it->second)) return "edge " + e.id + " decorated by unknown edge " + it->second;
    auto [pos, fresh] = seen_e.emplace(it->second, e.id);
    if (!fresh) {
      return "edges " + pos->second + " and " + e.id + " both map to target edge " + it->second;
    }
  }
  return {};
}

}  // namespace

std::shared_ptr<const WiringGraph> share(WiringGraph g) {
  return std::make_shared<const WiringGraph>(std::move(g));
}

std::vector<Subgraph> subgraphs(const WiringGraph& g) {
  std::vector<Subgraph> out;
  std::vector<EdgeId> edges;
  for (const Edge& e : g.edges()) edges.push_back(e.id);
  std::sort(edges.begin(), edges.end());
  for (const auto& e : edges) out.push_back({e, {}});
  std::vector<Subgraph> by_vertices;
  for (unsigned m : connected_masks(g)) {
    auto vs = mask_vertices(g, m);
    std::sort(vs.begin(), vs.end());
    by_vertices.push_back({std::nullopt, std::move(vs)});
  }
  std::stable_sort(by_vertices.begin(), by_vertices.end(), [](const Subgraph& a, const Subgraph& b) {
    if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
    return a.vertices < b.vertices;
  });
  out.insert(out.end(), by_vertices.begin(), by_vertices.end());
  return out;
}

WiringGraph subgraph_graph(const WiringGraph& g, const Subgraph& s) {
  if (s.edge) return edge_subgraph(g, *s.edge);
  return induced_subgraph(g, s.vertices);
}

namespace {

// An induced subgraph with its legs moved to the given slot order and
// identity decorations.
DecoratedGraph reslot(const WiringGraph& sub, const std::vector<EdgeId>& in_legs,
                      const std::vector<EdgeId>& out_legs) {
  DecoratedGraph d;
  d.shape = sub;
  for (std::size_t k = 0; k < in_legs.size(); ++k) {
    d.shape.set_tail(in_legs[k], Endpoint::slot(static_cast<int>(k + 1)));
  }
  for (std::size_t k = 0; k < out_legs.size(); ++k) {
    d.shape.set_head(out_legs[k], Endpoint::slot(static_cast<int>(k + 1)));
  }
  d.shape.set_inputs(in_legs);
  d.shape.set_outputs(out_legs);
  for (const Vertex& v : d.shape.vertices()) d.vertex_decoration[v.id] = v.id;
  for (const Edge& e : d.shape.edges()) d.edge_decoration[e.id] = e.id;
  return d;
}

}  // namespace

DecoratedGraph decorated_subgraph(const WiringGraph& g, const std::vector<VertexId>& vertices,
                                  const std::vector<EdgeId>& in_legs,
                                  const std::vector<EdgeId>& out_legs) {
  DecoratedGraph d;
  if (vertices.empty()) {
    if (in_legs.size() != 1 || out_legs != in_legs) {
      throw Error("an edge subgraph has exactly one input and one output leg, the same edge");
    }
    d.shape = edge_subgraph(g, in_legs[0]);
    d.edge_decoration[in_legs[0]] = in_legs[0];
    return d;
  }
  const WiringGraph sub = induced_subgraph(g, vertices);
  auto same_set = [](std::vector<EdgeId> a, std::vector<EdgeId> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
  };
  if (!same_set(in_legs, sub.inputs()) || !same_set(out_legs, sub.outputs())) {
    throw Error("leg order is not a permutation of the subgraph's legs");
  }
  return reslot(sub, in_legs, out_legs);
}

DecoratedGraph decorated_corolla(const WiringGraph& g, const VertexId& v) {
  return decorated_subgraph(g, {v}, g.in_edges(v), g.out_edges(v));
}

DecoratedGraph image(const GammaMorphism& f) {
  const WiringGraph& h = *f.source;
  auto label = [&](const EdgeId& e) -> std::string {
    auto it = f.f0.find(e);
    if (it == f.f0.end()) throw Error("f0 undefined at edge " + e);
    return it->second;
  };
  std::map<VertexId, const DecoratedGraph*> guests;
  for (const Vertex& v : h.vertices()) {
    auto it = f.f1.find(v.id);
    if (it == f.f1.end()) throw Error("f1 undefined at vertex " + v.id);
    check_fit(h, v.id, it->second, label, "f1");
    guests[v.id] = &it->second;
  }
  return substitute_decorated(h, guests, label);
}

ValidityReport check_gamma_morphism(const GammaMorphism& f) {
  ValidityReport report;
  if (!f.source || !f.target) {
    report.ok = false;
    report.witness = "missing source or target";
    return report;
  }
  for (const auto& [v, d] : f.f1) {
    if (!f.source->has_vertex(v)) {
      report.ok = false;
      report.witness = "f1 given at unknown vertex " + v;
      return report;
    }
    const auto vr = validate_graph(d.shape);
    if (!vr.ok) {
      report.ok = false;
      report.witness = "f1(" + v + ") is not a valid graph: " + vr.violations[0].invariant;
      return report;
    }
  }
  DecoratedGraph im;
  try {
    im = image(f);
  } catch (const Error& e) {
    report.ok = false;
    report.witness = e.what();
    return report;
  }
  report.image_vertices = im.shape.num_vertices();
  const std::string problem = embedding_problem(im, *f.target);
  if (!problem.empty()) {
    report.ok = false;
    report.witness = problem;
  }
  return report;
}

bool is_valid_gamma_morphism(const GammaMorphism& f) { return check_gamma_morphism(f).ok; }

GammaMorphism identity_morphism(std::shared_ptr<const WiringGraph> g) {
  GammaMorphism f;
  f.source = g;
  f.target = g;
  for (const Edge& e : g->edges()) f.f0[e.id] = e.id;
  for (const Vertex& v : g->vertices()) f.f1[v.id] = decorated_corolla(*g, v.id);
  return f;
}

GammaMorphism compose(const GammaMorphism& g, const GammaMorphism& f) {
  if (f.target != g.source && !(*f.target == *g.source)) {
    throw Error("cannot compose: target of the first map is not the source of the second");
  }
  GammaMorphism out;
  out.source = f.source;
  out.target = g.target;
  auto g0 = [&](const std::string& e) -> std::string {
    auto it = g.f0.find(e);
    if (it == g.f0.end()) throw Error("f0 of the second map undefined at edge " + e);
    return it->second;
  };
  for (const auto& [e, x] : f.f0) out.f0[e] = g0(x);
  for (const auto& [v, d] : f.f1) {
    std::map<VertexId, const DecoratedGraph*> guests;
    for (const Vertex& s : d.shape.vertices()) {
      const std::string& y = lookup(d.vertex_decoration, s.id, "vertex decoration");
      auto it = g.f1.find(y);
      if (it == g.f1.end()) throw Error("f1 of the second map undefined at vertex " + y);
      auto label = [&](const EdgeId& e) { return g0(lookup(d.edge_decoration, e, "edge decoration")); };
      check_fit(d.shape, s.id, it->second, label, "g1");
      guests[s.id] = &it->second;
    }
    out.f1[v] = substitute_decorated(d.shape, guests, [&](const EdgeId& e) {
      return g0(lookup(d.edge_decoration, e, "edge decoration"));
    });
  }
  return out;
}

std::string decoration_key(const DecoratedGraph& d, const WiringGraph* target) {
  if (target && embedding_problem(d, *target).empty()) {
    std::vector<std::string> vs;
    for (const auto& [v, y] : d.vertex_decoration) vs.push_back(y);
    std::sort(vs.begin(), vs.end());
    std::vector<std::string> ins;
    std::vector<std::string> outs;
    for (const auto& e : d.shape.inputs()) ins.push_back(d.edge_decoration.at(e));
    for (const auto& e : d.shape.outputs()) outs.push_back(d.edge_decoration.at(e));
    if (d.shape.num_vertices() == 0) {
      return "E:" + (ins.empty() ? std::string{} : ins[0]);
    }
    return "S:" + join(vs, ",") + "|" + join(ins, ",") + ";" + join(outs, ",");
  }
  CanonOptions opt;
  opt.ordered_legs = true;
  for (const Vertex& v : d.shape.vertices()) {
    auto it = d.vertex_decoration.find(v.id);
    opt.vertex_labels.push_back(it == d.vertex_decoration.end() ? std::string{} : it->second);
  }
  for (const Edge& e : d.shape.edges()) {
    auto it = d.edge_decoration.find(e.id);
    opt.edge_labels.push_back(it == d.edge_decoration.end() ? std::string{} : it->second);
  }
  return "C:" + canonical_labeling(d.shape, opt).form;
}

std::string morphism_key(const GammaMorphism& f) {
  std::string key = "f0:";
  for (const auto& [e, x] : f.f0) key += e + "=" + x + ",";
  key += "|f1:";
  for (const auto& [v, d] : f.f1) {
    key += v + "=" + decoration_key(d, f.target.get()) + ";";
  }
  return key;
}

bool same_morphism(const GammaMorphism& a, const GammaMorphism& b) {
  return a.f0 == b.f0 && morphism_key(a) == morphism_key(b);
}

std::string to_string(ReedyClass c) {
  switch (c) {
    case ReedyClass::positive: return "positive";
    case ReedyClass::negative: return "negative";
    case ReedyClass::isomorphism: return "isomorphism";
    case ReedyClass::neither: return "neither";
  }
  return "?";
}

bool is_positive(const GammaMorphism& f) {
  std::set<EdgeId> values;
  for (const auto& [e, x] : f.f0) {
    if (!values.insert(x).second) return false;
  }
  return true;
}

bool is_negative(const GammaMorphism& f) {
  std::set<EdgeId> values;
  for (const auto& [e, x] : f.f0) values.insert(x);
  if (values.size() != f.target->num_edges()) return false;
  std::set<VertexId> covered;
  for (const auto& [v, d] : f.f1) {
    if (d.shape.num_vertices() == 1) {
      auto it = d.vertex_decoration.find(d.shape.vertices()[0].id);
      if (it != d.vertex_decoration.end()) covered.insert(it->second);
    }
  }
  for (const Vertex& y : f.target->vertices()) {
    if (!covered.count(y.id)) return false;
  }
  return true;
}

bool is_isomorphism(const GammaMorphism& f) {
  if (f.source->num_vertices() != f.target->num_vertices()) return false;
  if (f.source->num_edges() != f.target->num_edges()) return false;
  for (const auto& [v, d] : f.f1) {
    if (d.shape.num_vertices() != 1) return false;
  }
  return is_positive(f) && is_negative(f);
}

ReedyClass classify(const GammaMorphism& f) {
  if (is_isomorphism(f)) return ReedyClass::isomorphism;
  if (is_positive(f)) return ReedyClass::positive;
  if (is_negative(f)) return ReedyClass::negative;
  return ReedyClass::neither;
}

std::size_t degree(const WiringGraph& g) { return g.num_vertices(); }

ReedyFactorization reedy_factorize(const GammaMorphism& f) {
  const auto report = check_gamma_morphism(f);
  if (!report.ok) throw Error("cannot factor an invalid morphism: " + report.witness);
  const WiringGraph& h = *f.source;
  ReedyFactorization out;
  std::set<VertexId> collapsed;
  std::vector<SubstitutionAssignment> as;
  for (const Vertex& v : h.vertices()) {
    if (f.f1.at(v.id).shape.num_vertices() == 0) {
      collapsed.insert(v.id);
      out.collapsed.push_back(v.id);
      as.push_back({v.id, make_exceptional_edge(), {}, {}, false});
    }
  }
  auto middle = share(substitute_many(h, as));
  auto top = [&](EdgeId e) {
    for (;;) {
      const Edge& edge = h.edge(e);
      if (!edge.tail.vertex || !collapsed.count(*edge.tail.vertex)) return e;
      e = h.in_edges(*edge.tail.vertex)[0];
    }
  };

  GammaMorphism& neg = out.negative;
  neg.source = f.source;
  neg.target = middle;
  for (const Edge& e : h.edges()) neg.f0[e.id] = top(e.id);
  for (const Vertex& v : h.vertices()) {
    if (collapsed.count(v.id)) {
      const EdgeId e = neg.f0.at(h.in_edges(v.id)[0]);
      neg.f1[v.id] = decorated_subgraph(*middle, {}, {e}, {e});
    } else {
      neg.f1[v.id] = decorated_corolla(*middle, v.id);
    }
  }

  GammaMorphism& pos = out.positive;
  pos.source = middle;
  pos.target = f.target;
  for (const Edge& e : middle->edges()) pos.f0[e.id] = f.f0.at(e.id);
  for (const Vertex& v : middle->vertices()) pos.f1[v.id] = f.f1.at(v.id);
  return out;
}

namespace {

struct Candidate {
  int subset = -1;  // index into the subset table, -1 for an edge subgraph
  int edge = -1;    // target edge index for an edge subgraph
};

}  // namespace

struct HomTarget::Data {
  struct Subset {
    std::vector<VertexId> vertices;
    unsigned mask = 0;
    std::vector<int> in_legs;   // target edge indices
    std::vector<int> out_legs;
    std::vector<int> internal;  // target edge indices of internal edges
    WiringGraph graph;          // induced subgraph, identity ids
  };
  std::vector<Subset> subsets;
  std::map<std::pair<int, int>, std::vector<int>> by_arity;
};

HomTarget::HomTarget(std::shared_ptr<const WiringGraph> g) : graph_(std::move(g)) {
  auto data = std::make_shared<Data>();
  const WiringGraph& tg = *graph_;
  for (unsigned m : connected_masks(tg)) {
    Data::Subset s;
    s.mask = m;
    s.vertices = mask_vertices(tg, m);
    s.graph = induced_subgraph(tg, s.vertices);
    for (const auto& e : s.graph.inputs()) s.in_legs.push_back(static_cast<int>(tg.edge_index(e)));
    for (const auto& e : s.graph.outputs()) s.out_legs.push_back(static_cast<int>(tg.edge_index(e)));
    for (const Edge& e : s.graph.edges()) {
      if (!is_leg(s.graph, e)) s.internal.push_back(static_cast<int>(tg.edge_index(e.id)));
    }
    data->by_arity[{static_cast<int>(s.in_legs.size()), static_cast<int>(s.out_legs.size())}].push_back(
        static_cast<int>(data->subsets.size()));
    data->subsets.push_back(std::move(s));
  }
  data_ = std::move(data);
}

namespace {

class HomSearch {
 public:
  HomSearch(std::shared_ptr<const WiringGraph> h, const HomTarget& target)
      : h_(std::move(h)), g_(target.graph()), subsets_(target.data().subsets),
        by_arity_(target.data().by_arity) {}

  std::vector<GammaMorphism> run() {
    const WiringGraph& h = *h_;
    const WiringGraph& g = *g_;
    std::vector<GammaMorphism> out;
    if (h.num_vertices() == 0) {
      for (const Edge& x : g.edges()) {
        GammaMorphism f;
        f.source = h_;
        f.target = g_;
        for (const Edge& e : h.edges()) f.f0[e.id] = x.id;
        out.push_back(std::move(f));
      }
      return out;
    }
    for (const Vertex& v : h.vertices()) {
      const bool bivalent = v.in_arity == 1 && v.out_arity == 1 && g.num_edges() > 0;
      if (!bivalent && !by_arity_.count({v.in_arity, v.out_arity})) return out;
    }
    order_vertices();
    f0_.assign(h.num_edges(), -1);
    used_.assign(g.num_vertices(), false);
    choice_.assign(h.num_vertices(), {});
    in_perm_.assign(h.num_vertices(), {});
    out_perm_.assign(h.num_vertices(), {});
    search(0, out);
    return out;
  }

 private:
  void order_vertices() {
    const WiringGraph& h = *h_;
    const auto adj = adjacency_masks(h);
    std::vector<bool> seen(h.num_vertices(), false);
    for (std::size_t start = 0; start < h.num_vertices(); ++start) {
      if (seen[start]) continue;
      std::vector<std::size_t> queue{start};
      seen[start] = true;
      for (std::size_t i = 0; i < queue.size(); ++i) {
        order_.push_back(queue[i]);
        for (std::size_t w = 0; w < h.num_vertices(); ++w) {
          if ((adj[queue[i]] & (1u << w)) && !seen[w]) {
            seen[w] = true;
            queue.push_back(w);
          }
        }
      }
    }
  }

  // Assigns f0 on the edges of vertex v's ports; returns the edges newly set,
  // or false on conflict (in which case nothing stays assigned).
  bool assign(const std::vector<int>& port_edges, const std::vector<int>& values,
              std::vector<int>& newly) {
    for (std::size_t k = 0; k < port_edges.size(); ++k) {
      int& slot = f0_[static_cast<std::size_t>(port_edges[k])];
      if (slot == -1) {
        slot = values[k];
        newly.push_back(port_edges[k]);
      } else if (slot != values[k]) {
        return false;
      }
    }
    return true;
  }

  void undo(const std::vector<int>& newly) {
    for (int e : newly) f0_[static_cast<std::size_t>(e)] = -1;
  }

  void search(std::size_t depth, std::vector<GammaMorphism>& out) {
    const WiringGraph& h = *h_;
    const WiringGraph& g = *g_;
    if (depth == order_.size()) {
      if (injective()) out.push_back(build());
      return;
    }
    const std::size_t vi = order_[depth];
    const Vertex& v = h.vertices()[vi];
    const auto& inc = h.incidence();
    const std::vector<int>& in_ports = inc.in_edge[vi];
    const std::vector<int>& out_ports = inc.out_edge[vi];

    if (v.in_arity == 1 && v.out_arity == 1) {
      for (std::size_t x = 0; x < g.num_edges(); ++x) {
        std::vector<int> newly;
        const std::vector<int> val{static_cast<int>(x)};
        if (assign(in_ports, val, newly) && assign(out_ports, val, newly)) {
          choice_[vi] = {-1, static_cast<int>(x)};
          search(depth + 1, out);
        }
        undo(newly);
      }
    }
    auto bucket = by_arity_.find({v.in_arity, v.out_arity});
    if (bucket == by_arity_.end()) return;
    for (int sidx : bucket->second) {
      const auto si = static_cast<std::size_t>(sidx);
      const HomTarget::Data::Subset& s = subsets_[si];
      bool clash = false;
      for (std::size_t y = 0; y < g.num_vertices(); ++y) {
        if ((s.mask & (1u << y)) && used_[y]) clash = true;
      }
      if (clash) continue;
      for (std::size_t y = 0; y < g.num_vertices(); ++y) {
        if (s.mask & (1u << y)) used_[y] = true;
      }
      choice_[vi] = {static_cast<int>(si), -1};
      std::vector<int> ins = s.in_legs;
      std::sort(ins.begin(), ins.end());
      do {
        std::vector<int> newly_in;
        if (assign(in_ports, ins, newly_in)) {
          std::vector<int> outs = s.out_legs;
          std::sort(outs.begin(), outs.end());
          do {
            std::vector<int> newly_out;
            if (assign(out_ports, outs, newly_out)) {
              in_perm_[vi] = ins;
              out_perm_[vi] = outs;
              search(depth + 1, out);
            }
            undo(newly_out);
          } while (std::next_permutation(outs.begin(), outs.end()));
        }
        undo(newly_in);
      } while (std::next_permutation(ins.begin(), ins.end()));
      for (std::size_t y = 0; y < g.num_vertices(); ++y) {
        if (s.mask & (1u << y)) used_[y] = false;
      }
    }
  }

  // The image's edges are the classes of source edges joined through
  // collapsed vertices, plus the internal edges of the chosen subgraphs;
  // they must map to distinct target edges.
  bool injective() const {
    const WiringGraph& h = *h_;
    const auto& inc = h.incidence();
    std::vector<std::size_t> parent(h.num_edges());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t vi = 0; vi < h.num_vertices(); ++vi) {
      if (choice_[vi].subset == -1) {
        parent[find(static_cast<std::size_t>(inc.in_edge[vi][0]))] =
            find(static_cast<std::size_t>(inc.out_edge[vi][0]));
      }
    }
    std::vector<bool> hit(g_->num_edges(), false);
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
      if (find(e) != e) continue;
      const auto x = static_cast<std::size_t>(f0_[e]);
      if (hit[x]) return false;
      hit[x] = true;
    }
    for (std::size_t vi = 0; vi < h.num_vertices(); ++vi) {
      if (choice_[vi].subset == -1) continue;
      for (int x : subsets_[static_cast<std::size_t>(choice_[vi].subset)].internal) {
        if (hit[static_cast<std::size_t>(x)]) return false;
        hit[static_cast<std::size_t>(x)] = true;
      }
    }
    return true;
  }

  GammaMorphism build() const {
    const WiringGraph& h = *h_;
    const WiringGraph& g = *g_;
    GammaMorphism f;
    f.source = h_;
    f.target = g_;
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
      f.f0[h.edges()[e].id] = g.edges()[static_cast<std::size_t>(f0_[e])].id;
    }
    auto ids = [&](const std::vector<int>& idx) {
      std::vector<EdgeId> out;
      for (int x : idx) out.push_back(g.edges()[static_cast<std::size_t>(x)].id);
      return out;
    };
    for (std::size_t vi = 0; vi < h.num_vertices(); ++vi) {
      const Candidate& c = choice_[vi];
      const VertexId& v = h.vertices()[vi].id;
      if (c.subset == -1) {
        const EdgeId x = g.edges()[static_cast<std::size_t>(c.edge)].id;
        f.f1[v] = decorated_subgraph(g, {}, {x}, {x});
      } else {
        f.f1[v] = reslot(subsets_[static_cast<std::size_t>(c.subset)].graph, ids(in_perm_[vi]),
                         ids(out_perm_[vi]));
      }
    }
    return f;
  }

  std::shared_ptr<const WiringGraph> h_;
  std::shared_ptr<const WiringGraph> g_;
  const std::vector<HomTarget::Data::Subset>& subsets_;
  const std::map<std::pair<int, int>, std::vector<int>>& by_arity_;
  std::vector<std::size_t> order_;
  std::vector<int> f0_;
  std::vector<bool> used_;
  std::vector<Candidate> choice_;
  std::vector<std::vector<int>> in_perm_;
  std::vector<std::vector<int>> out_perm_;
};

}  // namespace

std::vector<GammaMorphism> hom_set(std::shared_ptr<const WiringGraph> h, const HomTarget& g) {
  return HomSearch(std::move(h), g).run();
}

std::vector<GammaMorphism> hom_set(std::shared_ptr<const WiringGraph> h,
                                   std::shared_ptr<const WiringGraph> g) {
  return hom_set(std::move(h), HomTarget(std::move(g)));
}

GammaMorphism morphism_from_iso(std::shared_ptr<const WiringGraph> source,
                                std::shared_ptr<const WiringGraph> target, const Isomorphism& iso) {
  GammaMorphism f;
  f.source = source;
  f.target = target;
  f.f0 = iso.edge_map;
  for (const Vertex& v : source->vertices()) {
    std::vector<EdgeId> ins;
    std::vector<EdgeId> outs;
    for (const auto& e : source->in_edges(v.id)) ins.push_back(iso.edge_map.at(e));
    for (const auto& e : source->out_edges(v.id)) outs.push_back(iso.edge_map.at(e));
    f.f1[v.id] = decorated_subgraph(*target, {iso.vertex_map.at(v.id)}, ins, outs);
  }
  return f;
}

GammaMorphism morphism_from_generator(const GeneratorMap& gen) {
  auto source = share(gen.source);
  auto target = share(gen.target);
  GammaMorphism f;
  f.source = source;
  f.target = target;
  switch (gen.kind) {
    case GeneratorKind::inner_coface:
    case GeneratorKind::outer_coface:
      for (const Edge& e : source->edges()) f.f0[e.id] = e.id;
      for (const Vertex& v : source->vertices()) {
        if (gen.kind == GeneratorKind::inner_coface && v.id == gen.vertex) {
          DecoratedGraph d;
          d.shape = gen.pgc;
          for (const Vertex& x : d.shape.vertices()) d.vertex_decoration[x.id] = x.id;
          for (const Edge& e : d.shape.edges()) d.edge_decoration[e.id] = e.id;
          f.f1[v.id] = std::move(d);
        } else {
          f.f1[v.id] = decorated_corolla(*target, v.id);
        }
      }
      return f;
    case GeneratorKind::codegeneracy: {
      const EdgeId in = source->in_edges(gen.vertex)[0];
      for (const Edge& e : source->edges()) f.f0[e.id] = target->has_edge(e.id) ? e.id : in;
      for (const Vertex& v : source->vertices()) {
        f.f1[v.id] = v.id == gen.vertex ? decorated_subgraph(*target, {}, {in}, {in})
                                        : decorated_corolla(*target, v.id);
      }
      return f;
    }
    case GeneratorKind::isomorphism:
      return morphism_from_iso(source, target, gen.iso);
  }
  throw Error("unknown generator kind");
}

}  // namespace properad
