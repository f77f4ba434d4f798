#include "properad/wiring_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "properad/error.hpp"

namespace properad {

std::string to_string(const Biprofile& profile) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < profile.inputs.size(); ++i) {
    out << (i ? "," : "") << profile.inputs[i];
  }
  out << ';';
  for (std::size_t i = 0; i < profile.outputs.size(); ++i) {
    out << (i ? "," : "") << profile.outputs[i];
  }
  out << ')';
  return out.str();
}

void WiringGraph::add_vertex(VertexId id, int in_arity, int out_arity) {
  if (id.empty()) throw Error("vertex id must be nonempty");
  if (in_arity < 0 || out_arity < 0) {
    throw Error("vertex " + id + ": negative arity");
  }
  if (has_vertex(id)) throw Error("duplicate vertex id " + id);
  vindex_.emplace(id, vertices_.size());
  vertices_.push_back({std::move(id), in_arity, out_arity});
  touch();
}

void WiringGraph::add_edge(EdgeId id, Endpoint tail, Endpoint head,
                           std::optional<Color> color) {
  if (id.empty()) throw Error("edge id must be nonempty");
  if (has_edge(id)) throw Error("duplicate edge id " + id);
  if (color && color->empty()) throw Error("edge " + id + ": empty color");
  eindex_.emplace(id, edges_.size());
  edges_.push_back({std::move(id), std::move(tail), std::move(head), std::move(color)});
  touch();
}

void WiringGraph::reindex() {
  vindex_.clear();
  eindex_.clear();
  for (std::size_t i = 0; i < vertices_.size(); ++i) vindex_.emplace(vertices_[i].id, i);
  for (std::size_t i = 0; i < edges_.size(); ++i) eindex_.emplace(edges_[i].id, i);
  touch();
}

void WiringGraph::remove_vertex(const VertexId& id) {
  vertices_.erase(vertices_.begin() + static_cast<std::ptrdiff_t>(vertex_index(id)));
  reindex();
}

void WiringGraph::remove_edge(const EdgeId& id) {
  edges_.erase(edges_.begin() + static_cast<std::ptrdiff_t>(edge_index(id)));
  std::erase(inputs_, id);
  std::erase(outputs_, id);
  reindex();
}

void WiringGraph::set_tail(const EdgeId& id, Endpoint tail) {
  edges_[edge_index(id)].tail = std::move(tail);
  touch();
}

void WiringGraph::set_head(const EdgeId& id, Endpoint head) {
  edges_[edge_index(id)].head = std::move(head);
  touch();
}

void WiringGraph::set_color(const EdgeId& id, std::optional<Color> color) {
  edges_[edge_index(id)].color = std::move(color);
}

void WiringGraph::set_inputs(std::vector<EdgeId> inputs) { inputs_ = std::move(inputs); }
void WiringGraph::set_outputs(std::vector<EdgeId> outputs) { outputs_ = std::move(outputs); }

const Vertex& WiringGraph::vertex(const VertexId& id) const {
  return vertices_[vertex_index(id)];
}

const Edge& WiringGraph::edge(const EdgeId& id) const { return edges_[edge_index(id)]; }

std::size_t WiringGraph::vertex_index(const VertexId& id) const {
  auto it = vindex_.find(id);
  if (it == vindex_.end()) throw Error("unknown vertex " + id);
  return it->second;
}

std::size_t WiringGraph::edge_index(const EdgeId& id) const {
  auto it = eindex_.find(id);
  if (it == eindex_.end()) throw Error("unknown edge " + id);
  return it->second;
}

const Incidence& WiringGraph::incidence() const {
  auto cached = std::atomic_load(&incidence_);
  if (cached) return *cached;

  auto inc = std::make_shared<Incidence>();
  const auto nv = vertices_.size();
  const auto ne = edges_.size();
  inc->in_edge.resize(nv);
  inc->out_edge.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    inc->in_edge[v].assign(static_cast<std::size_t>(vertices_[v].in_arity), Incidence::unmatched);
    inc->out_edge[v].assign(static_cast<std::size_t>(vertices_[v].out_arity), Incidence::unmatched);
  }
  auto mark = [](std::vector<int>& table, int index, int e) {
    if (index < 1) return;
    if (static_cast<std::size_t>(index) > table.size()) table.resize(static_cast<std::size_t>(index), Incidence::unmatched);
    int& slot = table[static_cast<std::size_t>(index - 1)];
    slot = slot == Incidence::unmatched ? e : Incidence::multiple;
  };
  inc->tail_vertex.assign(ne, -1);
  inc->head_vertex.assign(ne, -1);
  inc->tail_index.assign(ne, 0);
  inc->head_index.assign(ne, 0);
  for (std::size_t i = 0; i < ne; ++i) {
    const Edge& e = edges_[i];
    const int ei = static_cast<int>(i);
    inc->tail_index[i] = e.tail.index;
    inc->head_index[i] = e.head.index;
    if (e.tail.is_slot()) {
      mark(inc->input_slot_edge, e.tail.index, ei);
    } else if (auto it = vindex_.find(*e.tail.vertex); it != vindex_.end()) {
      inc->tail_vertex[i] = static_cast<int>(it->second);
      auto& ports = inc->out_edge[it->second];
      if (e.tail.index >= 1 && static_cast<std::size_t>(e.tail.index) <= ports.size()) {
        int& slot = ports[static_cast<std::size_t>(e.tail.index - 1)];
        slot = slot == Incidence::unmatched ? ei : Incidence::multiple;
      }
    }
    if (e.head.is_slot()) {
      mark(inc->output_slot_edge, e.head.index, ei);
    } else if (auto it = vindex_.find(*e.head.vertex); it != vindex_.end()) {
      inc->head_vertex[i] = static_cast<int>(it->second);
      auto& ports = inc->in_edge[it->second];
      if (e.head.index >= 1 && static_cast<std::size_t>(e.head.index) <= ports.size()) {
        int& slot = ports[static_cast<std::size_t>(e.head.index - 1)];
        slot = slot == Incidence::unmatched ? ei : Incidence::multiple;
      }
    }
  }
  std::shared_ptr<const Incidence> result = std::move(inc);
  std::atomic_store(&incidence_, result);
  return *result;
}

const Edge* WiringGraph::in_edge(const VertexId& v, int port) const {
  const auto& inc = incidence();
  const auto& ports = inc.in_edge[vertex_index(v)];
  if (port < 1 || static_cast<std::size_t>(port) > ports.size()) return nullptr;
  const int e = ports[static_cast<std::size_t>(port - 1)];
  return e >= 0 ? &edges_[static_cast<std::size_t>(e)] : nullptr;
}

const Edge* WiringGraph::out_edge(const VertexId& v, int port) const {
  const auto& inc = incidence();
  const auto& ports = inc.out_edge[vertex_index(v)];
  if (port < 1 || static_cast<std::size_t>(port) > ports.size()) return nullptr;
  const int e = ports[static_cast<std::size_t>(port - 1)];
  return e >= 0 ? &edges_[static_cast<std::size_t>(e)] : nullptr;
}

std::vector<EdgeId> WiringGraph::in_edges(const VertexId& v) const {
  std::vector<EdgeId> result;
  for (int k = 1; k <= vertex(v).in_arity; ++k) {
    const Edge* e = in_edge(v, k);
    result.push_back(e ? e->id : EdgeId{});
  }
  return result;
}

std::vector<EdgeId> WiringGraph::out_edges(const VertexId& v) const {
  std::vector<EdgeId> result;
  for (int k = 1; k <= vertex(v).out_arity; ++k) {
    const Edge* e = out_edge(v, k);
    result.push_back(e ? e->id : EdgeId{});
  }
  return result;
}

bool WiringGraph::is_colored() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.color.has_value(); });
}

bool operator==(const WiringGraph& a, const WiringGraph& b) {
  if (a.vertices_.size() != b.vertices_.size() || a.edges_.size() != b.edges_.size()) {
    return false;
  }
  if (a.inputs_ != b.inputs_ || a.outputs_ != b.outputs_) return false;
  for (const Vertex& v : a.vertices_) {
    auto it = b.vindex_.find(v.id);
    if (it == b.vindex_.end() || b.vertices_[it->second] != v) return false;
  }
  for (const Edge& e : a.edges_) {
    auto it = b.eindex_.find(e.id);
    if (it == b.eindex_.end() || b.edges_[it->second] != e) return false;
  }
  return true;
}

namespace {

std::string describe(const Endpoint& p, bool tail) {
  if (p.is_slot()) return (tail ? "in:" : "out:") + std::to_string(p.index);
  return *p.vertex + (tail ? ":out:" : ":in:") + std::to_string(p.index);
}

// Union-find over vertex indices.
struct Components {
  std::vector<std::size_t> parent;
  explicit Components(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// Returns a directed cycle as a vertex index sequence, or empty.
std::vector<int> find_directed_cycle(const WiringGraph& g) {
  const auto& inc = g.incidence();
  const std::size_t nv = g.num_vertices();
  std::vector<std::vector<int>> succ(nv);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (inc.tail_vertex[e] >= 0 && inc.head_vertex[e] >= 0) {
      succ[static_cast<std::size_t>(inc.tail_vertex[e])].push_back(inc.head_vertex[e]);
    }
  }
  std::vector<int> state(nv, 0);  // 0 new, 1 on stack, 2 done
  std::vector<int> stack;
  std::vector<int> cycle;
  auto dfs = [&](auto&& self, int v) -> bool {
    state[static_cast<std::size_t>(v)] = 1;
    stack.push_back(v);
    for (int w : succ[static_cast<std::size_t>(v)]) {
      if (state[static_cast<std::size_t>(w)] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        cycle.assign(it, stack.end());
        cycle.push_back(w);
        return true;
      }
      if (state[static_cast<std::size_t>(w)] == 0 && self(self, w)) return true;
    }
    stack.pop_back();
    state[static_cast<std::size_t>(v)] = 2;
    return false;
  };
  for (std::size_t v = 0; v < nv; ++v) {
    if (state[v] == 0 && dfs(dfs, static_cast<int>(v))) return cycle;
  }
  return {};
}

void check_boundary_order(const WiringGraph& g, bool inputs, ValidationReport& report) {
  std::map<int, std::vector<EdgeId>> by_slot;
  for (const Edge& e : g.edges()) {
    const Endpoint& p = inputs ? e.tail : e.head;
    if (p.is_slot()) by_slot[p.index].push_back(e.id);
  }
  std::vector<EdgeId> expected;
  int next = 1;
  for (const auto& [slot, ids] : by_slot) {
    if (slot != next || ids.size() != 1) {
      report.add("port matching", std::string(inputs ? "graph input" : "graph output") +
                                      " slot " + std::to_string(slot) + " is hit by " +
                                      std::to_string(ids.size()) + " edge(s) or slots skip " +
                                      std::to_string(next));
    }
    expected.insert(expected.end(), ids.begin(), ids.end());
    next = slot + 1;
  }
  const auto& listed = inputs ? g.inputs() : g.outputs();
  if (listed != expected) {
    std::string got;
    for (const auto& id : listed) got += " " + id;
    std::string want;
    for (const auto& id : expected) want += " " + id;
    report.add("leg order", std::string(inputs ? "inputs" : "outputs") + " list [" + got +
                                " ] differs from slot order [" + want + " ]");
  }
}

}  // namespace

ValidationReport validate_graph(const WiringGraph& g) {
  ValidationReport report;
  const auto& inc = g.incidence();

  for (std::size_t i = 0; i < g.num_edges(); ++i) {
    const Edge& e = g.edges()[i];
    for (bool tail : {true, false}) {
      const Endpoint& p = tail ? e.tail : e.head;
      if (p.index < 1) {
        report.add("port range", "edge " + e.id + " " + describe(p, tail));
        continue;
      }
      if (p.is_slot()) continue;
      if (!g.has_vertex(*p.vertex)) {
        report.add("port range", "edge " + e.id + " refers to unknown vertex " + *p.vertex);
        continue;
      }
      const Vertex& v = g.vertex(*p.vertex);
      const int arity = tail ? v.out_arity : v.in_arity;
      if (p.index > arity) {
        report.add("port range", "edge " + e.id + " uses " + describe(p, tail) +
                                     " beyond arity " + std::to_string(arity));
      }
    }
    if (e.tail.is_slot() && e.head.is_slot() && g.num_vertices() > 0) {
      report.add("exceptional edge", "edge " + e.id + " joins two boundary slots in a graph with vertices");
    }
    if (!e.color && g.edges().size() > 0 &&
        std::any_of(g.edges().begin(), g.edges().end(),
                    [](const Edge& x) { return x.color.has_value(); })) {
      report.add("coloring total", "edge " + e.id + " is uncolored while others are colored");
    }
  }

  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    const Vertex& vx = g.vertices()[v];
    for (bool input : {true, false}) {
      const auto& ports = input ? inc.in_edge[v] : inc.out_edge[v];
      const int arity = input ? vx.in_arity : vx.out_arity;
      for (int k = 0; k < arity; ++k) {
        const int e = ports[static_cast<std::size_t>(k)];
        if (e == Incidence::unmatched) {
          report.add("port matching", vx.id + (input ? ":in:" : ":out:") + std::to_string(k + 1) +
                                          " is not hit by any edge");
        } else if (e == Incidence::multiple) {
          report.add("port matching", vx.id + (input ? ":in:" : ":out:") + std::to_string(k + 1) +
                                          " is hit by more than one edge");
        }
      }
    }
  }

  check_boundary_order(g, true, report);
  check_boundary_order(g, false, report);

  // Connectivity: vertices joined by internal edges; a vertex-free graph must
  // be the single exceptional edge.
  if (g.num_vertices() == 0) {
    if (g.num_edges() != 1) {
      report.add("connected", "vertex-free graph with " + std::to_string(g.num_edges()) +
                                  " edges (only the exceptional edge is connected)");
    }
  } else {
    Components comps(g.num_vertices());
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      if (inc.tail_vertex[e] >= 0 && inc.head_vertex[e] >= 0) {
        comps.unite(static_cast<std::size_t>(inc.tail_vertex[e]),
                    static_cast<std::size_t>(inc.head_vertex[e]));
      }
    }
    std::set<std::size_t> roots;
    for (std::size_t v = 0; v < g.num_vertices(); ++v) roots.insert(comps.find(v));
    if (roots.size() > 1) {
      std::string witness;
      for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        if (comps.find(v) != comps.find(0)) {
          witness = "no path between " + g.vertices()[0].id + " and " + g.vertices()[v].id;
          break;
        }
      }
      report.add("connected", witness);
    }
  }

  auto cycle = find_directed_cycle(g);
  if (!cycle.empty()) {
    std::string witness;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      witness += (i ? " -> " : "") + g.vertices()[static_cast<std::size_t>(cycle[i])].id;
    }
    report.add("directed cycle", witness);
  }
  return report;
}

bool is_valid(const WiringGraph& g) { return validate_graph(g).ok; }

bool is_simply_connected(const WiringGraph& g) {
  if (g.num_vertices() == 0) return g.num_edges() <= 1;
  const auto& inc = g.incidence();
  Components comps(g.num_vertices());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (inc.tail_vertex[e] >= 0 && inc.head_vertex[e] >= 0) {
      if (!comps.unite(static_cast<std::size_t>(inc.tail_vertex[e]),
                       static_cast<std::size_t>(inc.head_vertex[e]))) {
        return false;
      }
    }
  }
  return true;
}

namespace {

Color require_color(const WiringGraph& g, const EdgeId& id) {
  if (id.empty()) throw Error("coloring required: unmatched port");
  const Edge& e = g.edge(id);
  if (!e.color) throw Error("coloring required: edge " + id + " is uncolored");
  return *e.color;
}

}  // namespace

Biprofile biprofile_of(const WiringGraph& g) {
  Biprofile p;
  for (const auto& id : g.inputs()) p.inputs.push_back(require_color(g, id));
  for (const auto& id : g.outputs()) p.outputs.push_back(require_color(g, id));
  return p;
}

Biprofile biprofile_of_vertex(const WiringGraph& g, const VertexId& v) {
  Biprofile p;
  for (const auto& id : g.in_edges(v)) p.inputs.push_back(require_color(g, id));
  for (const auto& id : g.out_edges(v)) p.outputs.push_back(require_color(g, id));
  return p;
}

std::pair<int, int> arity_of(const WiringGraph& g) {
  return {static_cast<int>(g.inputs().size()), static_cast<int>(g.outputs().size())};
}

bool is_leg(const WiringGraph& /*g*/, const Edge& e) {
  return e.tail.is_slot() || e.head.is_slot();
}

bool is_exceptional_edge(const WiringGraph& g) {
  return g.num_vertices() == 0 && g.num_edges() == 1;
}

bool is_corolla(const WiringGraph& g) {
  if (g.num_vertices() != 1) return false;
  return std::all_of(g.edges().begin(), g.edges().end(),
                     [](const Edge& e) { return e.tail.is_slot() != e.head.is_slot(); });
}

WiringGraph make_exceptional_edge(std::optional<Color> color) {
  WiringGraph g("exceptional");
  g.add_edge("e", Endpoint::slot(1), Endpoint::slot(1), std::move(color));
  g.set_inputs({"e"});
  g.set_outputs({"e"});
  return g;
}

WiringGraph make_corolla(int m, int n) {
  if (m < 0 || n < 0) throw Error("corolla arities must be nonnegative");
  WiringGraph g("corolla");
  g.add_vertex("v", m, n);
  std::vector<EdgeId> ins;
  std::vector<EdgeId> outs;
  for (int k = 1; k <= m; ++k) {
    ins.push_back("i" + std::to_string(k));
    g.add_edge(ins.back(), Endpoint::slot(k), Endpoint::at("v", k));
  }
  for (int k = 1; k <= n; ++k) {
    outs.push_back("o" + std::to_string(k));
    g.add_edge(outs.back(), Endpoint::at("v", k), Endpoint::slot(k));
  }
  g.set_inputs(std::move(ins));
  g.set_outputs(std::move(outs));
  return g;
}

WiringGraph make_linear_graph(int n) {
  if (n < 0) throw Error("linear graph length must be nonnegative");
  WiringGraph g("linear");
  for (int i = 1; i <= n; ++i) g.add_vertex("v" + std::to_string(i), 1, 1);
  for (int i = 0; i <= n; ++i) {
    Endpoint tail = i == 0 ? Endpoint::slot(1) : Endpoint::at("v" + std::to_string(i), 1);
    Endpoint head = i == n ? Endpoint::slot(1) : Endpoint::at("v" + std::to_string(i + 1), 1);
    g.add_edge("e" + std::to_string(i), tail, head);
  }
  g.set_inputs({"e0"});
  g.set_outputs({"e" + std::to_string(n)});
  return g;
}

WiringGraph make_pgc(const PgcSpec& spec) {
  if (spec.grafts.empty()) throw Error("PGC requires >=1 connecting edge");
  if (spec.u_in < 0 || spec.u_out < 0 || spec.v_in < 0 || spec.v_out < 0) {
    throw Error("PGC arities must be nonnegative");
  }
  std::set<int> used_out;
  std::set<int> used_in;
  for (auto [o, i] : spec.grafts) {
    if (o < 1 || o > spec.u_out || i < 1 || i > spec.v_in) {
      throw Error("PGC graft (" + std::to_string(o) + "," + std::to_string(i) + ") out of range");
    }
    if (!used_out.insert(o).second || !used_in.insert(i).second) {
      throw Error("PGC grafting must be injective");
    }
  }
  WiringGraph g("pgc");
  g.add_vertex("u", spec.u_in, spec.u_out);
  g.add_vertex("v", spec.v_in, spec.v_out);
  std::vector<EdgeId> ins;
  std::vector<EdgeId> outs;
  int slot = 0;
  for (int k = 1; k <= spec.u_in; ++k) {
    ins.push_back("ui" + std::to_string(k));
    g.add_edge(ins.back(), Endpoint::slot(++slot), Endpoint::at("u", k));
  }
  for (int k = 1; k <= spec.v_in; ++k) {
    if (used_in.count(k)) continue;
    ins.push_back("vi" + std::to_string(k));
    g.add_edge(ins.back(), Endpoint::slot(++slot), Endpoint::at("v", k));
  }
  slot = 0;
  for (int k = 1; k <= spec.u_out; ++k) {
    if (used_out.count(k)) continue;
    outs.push_back("uo" + std::to_string(k));
    g.add_edge(outs.back(), Endpoint::at("u", k), Endpoint::slot(++slot));
  }
  for (int k = 1; k <= spec.v_out; ++k) {
    outs.push_back("vo" + std::to_string(k));
    g.add_edge(outs.back(), Endpoint::at("v", k), Endpoint::slot(++slot));
  }
  for (auto [o, i] : spec.grafts) {
    g.add_edge("g" + std::to_string(o), Endpoint::at("u", o), Endpoint::at("v", i));
  }
  g.set_inputs(std::move(ins));
  g.set_outputs(std::move(outs));
  return g;
}

WiringGraph corolla_of(const WiringGraph& g, const VertexId& v) {
  const Vertex& vx = g.vertex(v);
  WiringGraph c("corolla_" + v);
  c.add_vertex(v, vx.in_arity, vx.out_arity);
  std::vector<EdgeId> ins = g.in_edges(v);
  std::vector<EdgeId> outs = g.out_edges(v);
  for (int k = 1; k <= vx.in_arity; ++k) {
    const EdgeId& id = ins[static_cast<std::size_t>(k - 1)];
    if (id.empty()) throw Error("corolla_of: unmatched port " + v + ":in:" + std::to_string(k));
    c.add_edge(id, Endpoint::slot(k), Endpoint::at(v, k), g.edge(id).color);
  }
  for (int k = 1; k <= vx.out_arity; ++k) {
    const EdgeId& id = outs[static_cast<std::size_t>(k - 1)];
    if (id.empty()) throw Error("corolla_of: unmatched port " + v + ":out:" + std::to_string(k));
    c.add_edge(id, Endpoint::at(v, k), Endpoint::slot(k), g.edge(id).color);
  }
  c.set_inputs(std::move(ins));
  c.set_outputs(std::move(outs));
  return c;
}

}  // namespace properad
