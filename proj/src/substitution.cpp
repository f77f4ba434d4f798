#include "properad/substitution.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "properad/error.hpp"

namespace properad {

namespace {

std::vector<int> checked_bijection(const std::vector<int>& bij, int arity, const std::string& what) {
  if (bij.empty()) {
    std::vector<int> id(static_cast<std::size_t>(arity));
    for (int k = 0; k < arity; ++k) id[static_cast<std::size_t>(k)] = k + 1;
    return id;
  }
  std::vector<int> sorted = bij;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < arity; ++k) {
    if (static_cast<int>(sorted.size()) != arity || sorted[static_cast<std::size_t>(k)] != k + 1) {
      throw Error(what + " is not a bijection onto 1.." + std::to_string(arity));
    }
  }
  return bij;
}

}  // namespace

WiringGraph substitute(const WiringGraph& g, const SubstitutionAssignment& a,
                       SubstitutionTrace* trace) {
  const Vertex host = g.vertex(a.host_vertex);
  const WiringGraph& guest = a.guest;
  const int m = static_cast<int>(guest.inputs().size());
  const int n = static_cast<int>(guest.outputs().size());
  if (m != host.in_arity || n != host.out_arity) {
    throw Error("arity mismatch at " + host.id + ": guest has (" + std::to_string(m) + ";" +
                std::to_string(n) + "), host vertex has (" + std::to_string(host.in_arity) + ";" +
                std::to_string(host.out_arity) + ")");
  }
  const auto in_bij = checked_bijection(a.in_bij, m, "input bijection");
  const auto out_bij = checked_bijection(a.out_bij, n, "output bijection");

  std::vector<EdgeId> host_in = g.in_edges(host.id);
  std::vector<EdgeId> host_out = g.out_edges(host.id);
  for (const auto& id : host_in) {
    if (id.empty()) throw Error("host vertex " + host.id + " has an unmatched input port");
  }
  for (const auto& id : host_out) {
    if (id.empty()) throw Error("host vertex " + host.id + " has an unmatched output port");
  }

  // Colors must agree along both bijections when both sides carry them.
  auto check_color = [&](const EdgeId& guest_edge, const EdgeId& host_edge, const std::string& port) {
    const auto& gc = guest.edge(guest_edge).color;
    const auto& hc = g.edge(host_edge).color;
    if (gc && hc && *gc != *hc) {
      throw Error("color mismatch at " + port + ": guest " + *gc + ", host " + *hc);
    }
  };
  for (int k = 0; k < m; ++k) {
    const int port = in_bij[static_cast<std::size_t>(k)];
    check_color(guest.inputs()[static_cast<std::size_t>(k)], host_in[static_cast<std::size_t>(port - 1)],
                host.id + ":in:" + std::to_string(port));
  }
  for (int k = 0; k < n; ++k) {
    const int port = out_bij[static_cast<std::size_t>(k)];
    check_color(guest.outputs()[static_cast<std::size_t>(k)], host_out[static_cast<std::size_t>(port - 1)],
                host.id + ":out:" + std::to_string(port));
  }

  WiringGraph result = g;
  result.remove_vertex(host.id);

  if (guest.num_vertices() == 0) {
    if (m != 1 || n != 1) throw Error("a vertex-free guest needs a (1;1) host vertex");
    const EdgeId keep = host_in[0];
    const EdgeId drop = host_out[0];
    result.set_head(keep, g.edge(drop).head);
    auto outs = result.outputs();
    std::replace(outs.begin(), outs.end(), drop, keep);
    result.set_outputs(std::move(outs));
    result.remove_edge(drop);
    return result;
  }

  auto vname = [&](const VertexId& v) { return a.namespaced ? host.id + "/" + v : v; };
  auto ename = [&](const EdgeId& e) { return a.namespaced ? host.id + "/" + e : e; };
  auto rename_end = [&](Endpoint p) {
    if (p.vertex) p.vertex = vname(*p.vertex);
    return p;
  };

  for (const Vertex& v : guest.vertices()) {
    const VertexId id = vname(v.id);
    if (result.has_vertex(id)) throw Error("substitution id collision on vertex " + id);
    result.add_vertex(id, v.in_arity, v.out_arity);
    if (trace) trace->guest_vertices[id] = {host.id, v.id};
  }
  for (const Edge& e : guest.edges()) {
    const bool from_slot = e.tail.is_slot();
    const bool to_slot = e.head.is_slot();
    if (from_slot && to_slot) throw Error("guest edge " + e.id + " joins two boundary slots");
    if (!from_slot && !to_slot) {
      const EdgeId id = ename(e.id);
      if (result.has_edge(id)) throw Error("substitution id collision on edge " + id);
      result.add_edge(id, rename_end(e.tail), rename_end(e.head), e.color);
      if (trace) trace->guest_edges[id] = {host.id, e.id};
    } else if (from_slot) {
      const int slot = e.tail.index;
      if (slot < 1 || slot > m) throw Error("guest input slot out of range");
      const int port = in_bij[static_cast<std::size_t>(slot - 1)];
      result.set_head(host_in[static_cast<std::size_t>(port - 1)], rename_end(e.head));
    } else {
      const int slot = e.head.index;
      if (slot < 1 || slot > n) throw Error("guest output slot out of range");
      const int port = out_bij[static_cast<std::size_t>(slot - 1)];
      result.set_tail(host_out[static_cast<std::size_t>(port - 1)], rename_end(e.tail));
    }
  }
  return result;
}

WiringGraph substitute_many(const WiringGraph& g, const std::vector<SubstitutionAssignment>& as,
                            SubstitutionTrace* trace) {
  std::set<VertexId> hosts;
  for (const auto& a : as) {
    if (!hosts.insert(a.host_vertex).second) throw Error("duplicate host vertex " + a.host_vertex);
    if (!g.has_vertex(a.host_vertex)) throw Error("unknown host vertex " + a.host_vertex);
  }
  WiringGraph result = g;
  for (const auto& a : as) result = substitute(result, a, trace);
  return result;
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::inner_coface: return "inner_coface";
    case GeneratorKind::outer_coface: return "outer_coface";
    case GeneratorKind::codegeneracy: return "codegeneracy";
    case GeneratorKind::isomorphism: return "isomorphism";
  }
  return "?";
}

WiringGraph induced_subgraph(const WiringGraph& g, const std::vector<VertexId>& vertices) {
  const std::set<VertexId> inside(vertices.begin(), vertices.end());
  auto in_s = [&](const Endpoint& p) { return p.vertex && inside.count(*p.vertex) != 0; };
  WiringGraph s(g.name() + "_sub");
  for (const Vertex& v : g.vertices()) {
    if (inside.count(v.id)) s.add_vertex(v.id, v.in_arity, v.out_arity);
  }
  std::vector<EdgeId> ins;
  std::vector<EdgeId> outs;
  std::vector<EdgeId> new_ins;
  std::vector<EdgeId> new_outs;
  for (const auto& id : g.inputs()) {
    if (in_s(g.edge(id).head)) ins.push_back(id);
  }
  for (const auto& id : g.outputs()) {
    if (in_s(g.edge(id).tail)) outs.push_back(id);
  }
  for (const Edge& e : g.edges()) {
    const bool t = in_s(e.tail);
    const bool h = in_s(e.head);
    if (h && !t && !e.tail.is_slot()) new_ins.push_back(e.id);
    if (t && !h && !e.head.is_slot()) new_outs.push_back(e.id);
  }
  std::sort(new_ins.begin(), new_ins.end());
  std::sort(new_outs.begin(), new_outs.end());
  ins.insert(ins.end(), new_ins.begin(), new_ins.end());
  outs.insert(outs.end(), new_outs.begin(), new_outs.end());
  std::map<EdgeId, int> in_slot;
  std::map<EdgeId, int> out_slot;
  for (std::size_t i = 0; i < ins.size(); ++i) in_slot[ins[i]] = static_cast<int>(i + 1);
  for (std::size_t i = 0; i < outs.size(); ++i) out_slot[outs[i]] = static_cast<int>(i + 1);
  for (const Edge& e : g.edges()) {
    const bool t = in_s(e.tail);
    const bool h = in_s(e.head);
    if (!t && !h) continue;
    Endpoint tail = t ? e.tail : Endpoint::slot(in_slot.at(e.id));
    Endpoint head = h ? e.head : Endpoint::slot(out_slot.at(e.id));
    s.add_edge(e.id, tail, head, e.color);
  }
  s.set_inputs(std::move(ins));
  s.set_outputs(std::move(outs));
  return s;
}

WiringGraph edge_subgraph(const WiringGraph& g, const EdgeId& e) {
  WiringGraph s(g.name() + "_edge");
  s.add_edge(e, Endpoint::slot(1), Endpoint::slot(1), g.edge(e).color);
  s.set_inputs({e});
  s.set_outputs({e});
  return s;
}

WiringGraph replay(const GeneratorMap& gen) {
  switch (gen.kind) {
    case GeneratorKind::inner_coface:
      return substitute(gen.source, {gen.vertex, gen.pgc, {}, {}, false});
    case GeneratorKind::outer_coface:
      if (gen.pgc.num_vertices() == 1) {
        const Edge& leg = gen.pgc.edge(gen.edge);
        if (!is_leg(gen.pgc, leg) || !is_exceptional_edge(gen.source) ||
            gen.source.edges()[0].id != gen.edge) {
          throw Error("outer coface into a corolla must pick one of its legs");
        }
        return gen.pgc;
      }
      return substitute(gen.pgc, {gen.slot, gen.source, {}, {}, false});
    case GeneratorKind::codegeneracy:
      return substitute(gen.source, {gen.vertex, make_exceptional_edge(), {}, {}, false});
    case GeneratorKind::isomorphism:
      return apply_renaming(gen.source, gen.iso);
  }
  throw Error("unknown generator kind");
}

namespace {

// Is there a directed path u -> ... -> w through at least one other vertex?
bool has_long_path(const WiringGraph& k, std::size_t u, std::size_t w) {
  const auto& inc = k.incidence();
  std::vector<std::vector<std::size_t>> succ(k.num_vertices());
  for (std::size_t e = 0; e < k.num_edges(); ++e) {
    if (inc.tail_vertex[e] >= 0 && inc.head_vertex[e] >= 0) {
      succ[static_cast<std::size_t>(inc.tail_vertex[e])].push_back(
          static_cast<std::size_t>(inc.head_vertex[e]));
    }
  }
  std::vector<bool> seen(k.num_vertices(), false);
  std::deque<std::size_t> queue;
  for (std::size_t x : succ[u]) {
    if (x != w && !seen[x]) {
      seen[x] = true;
      queue.push_back(x);
    }
  }
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    if (x == w) return true;
    for (std::size_t y : succ[x]) {
      if (!seen[y]) {
        seen[y] = true;
        queue.push_back(y);
      }
    }
  }
  return false;
}

VertexId fresh_vertex_id(const WiringGraph& g, VertexId id) {
  while (g.has_vertex(id)) id += "'";
  return id;
}

}  // namespace

std::vector<GeneratorMap> enumerate_cofaces_into(const WiringGraph& k) {
  std::vector<GeneratorMap> result;
  const auto& inc = k.incidence();
  const std::size_t nv = k.num_vertices();
  if (nv == 0) return result;

  if (nv == 1) {
    std::vector<EdgeId> legs;
    for (const Edge& e : k.edges()) legs.push_back(e.id);
    std::sort(legs.begin(), legs.end());
    for (const auto& e : legs) {
      GeneratorMap gen;
      gen.kind = GeneratorKind::outer_coface;
      gen.source = edge_subgraph(k, e);
      gen.target = k;
      gen.vertex = k.vertices()[0].id;
      gen.pgc = k;
      gen.edge = e;
      result.push_back(std::move(gen));
    }
    return result;
  }

  // Inner cofaces: contract an adjacent pair u -> w whose contraction stays acyclic.
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t e = 0; e < k.num_edges(); ++e) {
    if (inc.tail_vertex[e] >= 0 && inc.head_vertex[e] >= 0) {
      pairs.emplace(static_cast<std::size_t>(inc.tail_vertex[e]), static_cast<std::size_t>(inc.head_vertex[e]));
    }
  }
  std::vector<std::pair<VertexId, VertexId>> named;
  for (auto [u, w] : pairs) {
    if (!has_long_path(k, u, w)) named.emplace_back(k.vertices()[u].id, k.vertices()[w].id);
  }
  std::sort(named.begin(), named.end());
  for (const auto& [u, w] : named) {
    WiringGraph pgc = induced_subgraph(k, {u, w});
    pgc.set_name("pgc");
    WiringGraph s = k;
    const VertexId c = fresh_vertex_id(k, u + "+" + w);
    for (const Edge& e : pgc.edges()) {
      if (!is_leg(pgc, e)) s.remove_edge(e.id);
    }
    s.remove_vertex(u);
    s.remove_vertex(w);
    s.add_vertex(c, static_cast<int>(pgc.inputs().size()), static_cast<int>(pgc.outputs().size()));
    for (std::size_t i = 0; i < pgc.inputs().size(); ++i) {
      s.set_head(pgc.inputs()[i], Endpoint::at(c, static_cast<int>(i + 1)));
    }
    for (std::size_t i = 0; i < pgc.outputs().size(); ++i) {
      s.set_tail(pgc.outputs()[i], Endpoint::at(c, static_cast<int>(i + 1)));
    }
    GeneratorMap gen;
    gen.kind = GeneratorKind::inner_coface;
    gen.source = std::move(s);
    gen.target = k;
    gen.vertex = c;
    gen.pgc = std::move(pgc);
    result.push_back(std::move(gen));
  }

  // Outer cofaces: remove a vertex all of whose edges to the rest point the same way.
  std::vector<VertexId> order;
  for (const Vertex& v : k.vertices()) order.push_back(v.id);
  std::sort(order.begin(), order.end());
  for (const auto& v : order) {
    const int vi = static_cast<int>(k.vertex_index(v));
    bool down = false;
    bool up = false;
    for (std::size_t e = 0; e < k.num_edges(); ++e) {
      if (inc.tail_vertex[e] == vi && inc.head_vertex[e] >= 0) down = true;
      if (inc.head_vertex[e] == vi && inc.tail_vertex[e] >= 0) up = true;
    }
    if (down == up) continue;  // mixed directions, or isolated from the rest
    std::vector<VertexId> rest;
    for (const Vertex& x : k.vertices()) {
      if (x.id != v) rest.push_back(x.id);
    }
    WiringGraph s = induced_subgraph(k, rest);
    if (!is_valid(s)) continue;
    s.set_name(k.name() + "_face");

    const VertexId slot = "S";
    WiringGraph pgc("pgc");
    const Vertex& vx = k.vertex(v);
    pgc.add_vertex(v, vx.in_arity, vx.out_arity);
    pgc.add_vertex(slot, static_cast<int>(s.inputs().size()), static_cast<int>(s.outputs().size()));
    std::map<EdgeId, int> s_in;
    std::map<EdgeId, int> s_out;
    for (std::size_t i = 0; i < s.inputs().size(); ++i) s_in[s.inputs()[i]] = static_cast<int>(i + 1);
    for (std::size_t i = 0; i < s.outputs().size(); ++i) s_out[s.outputs()[i]] = static_cast<int>(i + 1);
    for (const Edge& e : k.edges()) {
      Endpoint tail = e.tail;
      Endpoint head = e.head;
      const bool touches_v = (e.tail.vertex && *e.tail.vertex == v) || (e.head.vertex && *e.head.vertex == v);
      const bool touches_s = s_in.count(e.id) || s_out.count(e.id);
      if (!touches_v && !touches_s) continue;  // internal to S
      if (s_in.count(e.id)) head = Endpoint::at(slot, s_in[e.id]);
      if (s_out.count(e.id)) tail = Endpoint::at(slot, s_out[e.id]);
      pgc.add_edge(e.id, tail, head, e.color);
    }
    pgc.set_inputs(k.inputs());
    pgc.set_outputs(k.outputs());

    GeneratorMap gen;
    gen.kind = GeneratorKind::outer_coface;
    gen.source = std::move(s);
    gen.target = k;
    gen.vertex = v;
    gen.pgc = std::move(pgc);
    gen.slot = slot;
    result.push_back(std::move(gen));
  }
  return result;
}

GeneratorMap codegeneracy(const WiringGraph& g, const VertexId& v) {
  const Vertex& vx = g.vertex(v);
  if (vx.in_arity != 1 || vx.out_arity != 1) {
    throw Error("codegeneracy needs a (1;1) vertex, " + v + " is (" + std::to_string(vx.in_arity) +
                ";" + std::to_string(vx.out_arity) + ")");
  }
  GeneratorMap gen;
  gen.kind = GeneratorKind::codegeneracy;
  gen.source = g;
  gen.vertex = v;
  gen.target = substitute(g, {v, make_exceptional_edge(), {}, {}, false});
  return gen;
}

}  // namespace properad
