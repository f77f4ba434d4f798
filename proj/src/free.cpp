#include "properad/free.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "properad/error.hpp"
#include "properad/isomorphism.hpp"

namespace properad {

namespace {

struct PortRef {
  int copy;
  int port;  // 1-based
  EdgeId decoration;
};

std::string unordered_key(const DecoratedGraph& d) {
  CanonOptions opt;
  for (const Vertex& v : d.shape.vertices()) opt.vertex_labels.push_back(d.vertex_decoration.at(v.id));
  for (const Edge& e : d.shape.edges()) opt.edge_labels.push_back(d.edge_decoration.at(e.id));
  return canonical_labeling(d.shape, opt).form;
}

class FreeEnumerator {
 public:
  FreeEnumerator(const WiringGraph& g, std::vector<DecoratedGraph>& out, std::set<std::string>& seen)
      : g_(g), out_(out), seen_(seen) {}

  void run(const std::vector<std::size_t>& copies) {
    copies_ = copies;
    ins_.clear();
    outs_.clear();
    for (std::size_t c = 0; c < copies.size(); ++c) {
      const VertexId& y = g_.vertices()[copies[c]].id;
      const auto in_edges = g_.in_edges(y);
      const auto out_edges = g_.out_edges(y);
      for (std::size_t k = 0; k < in_edges.size(); ++k) {
        ins_.push_back({static_cast<int>(c), static_cast<int>(k + 1), in_edges[k]});
      }
      for (std::size_t k = 0; k < out_edges.size(); ++k) {
        outs_.push_back({static_cast<int>(c), static_cast<int>(k + 1), out_edges[k]});
      }
    }
    match_.assign(ins_.size(), -1);
    used_.assign(outs_.size(), false);
    assign(0);
  }

 private:
  void assign(std::size_t i) {
    if (i == ins_.size()) {
      emit();
      return;
    }
    match_[i] = -1;
    assign(i + 1);
    for (std::size_t o = 0; o < outs_.size(); ++o) {
      if (used_[o] || outs_[o].copy == ins_[i].copy || outs_[o].decoration != ins_[i].decoration) continue;
      used_[o] = true;
      match_[i] = static_cast<int>(o);
      assign(i + 1);
      used_[o] = false;
      match_[i] = -1;
    }
  }

  void emit() {
    const std::size_t n = copies_.size();
    // Connected and acyclic over the copies.
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    std::vector<std::vector<std::size_t>> succ(n);
    for (std::size_t i = 0; i < ins_.size(); ++i) {
      if (match_[i] < 0) continue;
      const auto a = static_cast<std::size_t>(outs_[static_cast<std::size_t>(match_[i])].copy);
      const auto b = static_cast<std::size_t>(ins_[i].copy);
      succ[a].push_back(b);
      parent[find(a)] = find(b);
    }
    for (std::size_t c = 1; c < n; ++c) {
      if (find(c) != find(0)) return;
    }
    std::vector<int> state(n, 0);
    std::function<bool(std::size_t)> cyclic = [&](std::size_t x) {
      state[x] = 1;
      for (std::size_t y : succ[x]) {
        if (state[y] == 1 || (state[y] == 0 && cyclic(y))) return true;
      }
      state[x] = 2;
      return false;
    };
    for (std::size_t c = 0; c < n; ++c) {
      if (state[c] == 0 && cyclic(c)) return;
    }

    DecoratedGraph d;
    for (std::size_t c = 0; c < n; ++c) {
      const Vertex& y = g_.vertices()[copies_[c]];
      const VertexId id = "c" + std::to_string(c);
      d.shape.add_vertex(id, y.in_arity, y.out_arity);
      d.vertex_decoration[id] = y.id;
    }
    auto vid = [](int c) { return "c" + std::to_string(c); };
    struct Leg {
      EdgeId decoration;
      int copy;
      int port;
      EdgeId id;
    };
    std::vector<Leg> in_legs;
    std::vector<Leg> out_legs;
    int next = 0;
    for (std::size_t i = 0; i < ins_.size(); ++i) {
      const EdgeId id = "e" + std::to_string(next++);
      d.edge_decoration[id] = ins_[i].decoration;
      if (match_[i] >= 0) {
        const PortRef& o = outs_[static_cast<std::size_t>(match_[i])];
        d.shape.add_edge(id, Endpoint::at(vid(o.copy), o.port), Endpoint::at(vid(ins_[i].copy), ins_[i].port));
      } else {
        in_legs.push_back({ins_[i].decoration, ins_[i].copy, ins_[i].port, id});
      }
    }
    for (std::size_t o = 0; o < outs_.size(); ++o) {
      if (used_[o]) continue;
      const EdgeId id = "e" + std::to_string(next++);
      d.edge_decoration[id] = outs_[o].decoration;
      out_legs.push_back({outs_[o].decoration, outs_[o].copy, outs_[o].port, id});
    }
    auto by_decoration = [](const Leg& a, const Leg& b) {
      return std::tie(a.decoration, a.copy, a.port) < std::tie(b.decoration, b.copy, b.port);
    };
    std::sort(in_legs.begin(), in_legs.end(), by_decoration);
    std::sort(out_legs.begin(), out_legs.end(), by_decoration);
    std::vector<EdgeId> inputs;
    std::vector<EdgeId> outputs;
    for (std::size_t k = 0; k < in_legs.size(); ++k) {
      d.shape.add_edge(in_legs[k].id, Endpoint::slot(static_cast<int>(k + 1)),
                       Endpoint::at(vid(in_legs[k].copy), in_legs[k].port));
      inputs.push_back(in_legs[k].id);
    }
    for (std::size_t k = 0; k < out_legs.size(); ++k) {
      d.shape.add_edge(out_legs[k].id, Endpoint::at(vid(out_legs[k].copy), out_legs[k].port),
                       Endpoint::slot(static_cast<int>(k + 1)));
      outputs.push_back(out_legs[k].id);
    }
    d.shape.set_inputs(std::move(inputs));
    d.shape.set_outputs(std::move(outputs));
    if (seen_.insert(unordered_key(d)).second) out_.push_back(std::move(d));
  }

  const WiringGraph& g_;
  std::vector<DecoratedGraph>& out_;
  std::set<std::string>& seen_;
  std::vector<std::size_t> copies_;
  std::vector<PortRef> ins_;
  std::vector<PortRef> outs_;
  std::vector<int> match_;
  std::vector<bool> used_;
};

void multisets(std::size_t kinds, std::size_t size, std::size_t from, std::vector<std::size_t>& cur,
               const std::function<void(const std::vector<std::size_t>&)>& visit) {
  if (cur.size() == size) {
    visit(cur);
    return;
  }
  for (std::size_t k = from; k < kinds; ++k) {
    cur.push_back(k);
    multisets(kinds, size, k, cur, visit);
    cur.pop_back();
  }
}

// Re-slots the legs of d in the given orders.
DecoratedGraph with_leg_order(const DecoratedGraph& d, const std::vector<EdgeId>& ins,
                              const std::vector<EdgeId>& outs) {
  DecoratedGraph r = d;
  if (r.shape.num_vertices() == 0) return r;
  for (std::size_t k = 0; k < ins.size(); ++k) r.shape.set_tail(ins[k], Endpoint::slot(static_cast<int>(k + 1)));
  for (std::size_t k = 0; k < outs.size(); ++k) r.shape.set_head(outs[k], Endpoint::slot(static_cast<int>(k + 1)));
  r.shape.set_inputs(ins);
  r.shape.set_outputs(outs);
  return r;
}

// All orderings of `legs` whose decorations read `want`.
void leg_orders(const DecoratedGraph& d, const std::vector<EdgeId>& legs, const std::vector<EdgeId>& want,
                const std::function<void(const std::vector<EdgeId>&)>& visit) {
  if (legs.size() != want.size()) return;
  std::vector<EdgeId> cur;
  std::vector<bool> taken(legs.size(), false);
  std::function<void()> rec = [&]() {
    if (cur.size() == want.size()) {
      visit(cur);
      return;
    }
    const EdgeId& need = want[cur.size()];
    for (std::size_t i = 0; i < legs.size(); ++i) {
      if (taken[i] || d.edge_decoration.at(legs[i]) != need) continue;
      taken[i] = true;
      cur.push_back(legs[i]);
      rec();
      cur.pop_back();
      taken[i] = false;
    }
  };
  rec();
}

}  // namespace

std::vector<DecoratedGraph> free_elements_all(const WiringGraph& g, int max_vertices) {
  std::vector<DecoratedGraph> out;
  std::set<std::string> seen;
  for (const Edge& e : g.edges()) {
    DecoratedGraph d;
    d.shape.add_edge("e0", Endpoint::slot(1), Endpoint::slot(1));
    d.shape.set_inputs({"e0"});
    d.shape.set_outputs({"e0"});
    d.edge_decoration["e0"] = e.id;
    out.push_back(std::move(d));
  }
  FreeEnumerator enumerator(g, out, seen);
  for (int size = 1; size <= max_vertices; ++size) {
    std::vector<std::size_t> cur;
    multisets(g.num_vertices(), static_cast<std::size_t>(size), 0, cur,
              [&](const std::vector<std::size_t>& copies) { enumerator.run(copies); });
  }
  return out;
}

std::vector<DecoratedGraph> free_elements(const WiringGraph& g, const EdgeProfile& profile,
                                          int max_vertices) {
  std::vector<DecoratedGraph> out;
  std::set<std::string> seen;
  for (const DecoratedGraph& d : free_elements_all(g, max_vertices)) {
    leg_orders(d, d.shape.inputs(), profile.inputs, [&](const std::vector<EdgeId>& ins) {
      leg_orders(d, d.shape.outputs(), profile.outputs, [&](const std::vector<EdgeId>& outs) {
        DecoratedGraph r = with_leg_order(d, ins, outs);
        if (seen.insert(decoration_key(r, nullptr)).second) out.push_back(std::move(r));
      });
    });
  }
  return out;
}

std::vector<GammaMorphism> properad_maps(std::shared_ptr<const WiringGraph> h,
                                         std::shared_ptr<const WiringGraph> g, int max_vertices) {
  std::vector<GammaMorphism> out;
  if (h->num_vertices() == 0) {
    for (const Edge& x : g->edges()) {
      GammaMorphism f;
      f.source = h;
      f.target = g;
      for (const Edge& e : h->edges()) f.f0[e.id] = x.id;
      out.push_back(std::move(f));
    }
    return out;
  }
  const auto elements = free_elements_all(*g, max_vertices);
  GammaMorphism f;
  f.source = h;
  f.target = g;
  std::set<std::string> seen;
  std::function<void(std::size_t)> rec = [&](std::size_t vi) {
    if (vi == h->num_vertices()) {
      if (seen.insert(morphism_key(f)).second) out.push_back(f);
      return;
    }
    const VertexId& v = h->vertices()[vi].id;
    const auto ins = h->in_edges(v);
    const auto outs = h->out_edges(v);
    for (const DecoratedGraph& d : elements) {
      if (d.shape.inputs().size() != ins.size() || d.shape.outputs().size() != outs.size()) continue;
      std::vector<EdgeId> in_order = d.shape.inputs();
      std::sort(in_order.begin(), in_order.end());
      do {
        std::vector<EdgeId> out_order = d.shape.outputs();
        std::sort(out_order.begin(), out_order.end());
        do {
          // f0 must agree with what earlier vertices fixed.
          std::vector<EdgeId> fresh;
          bool ok = true;
          auto bind = [&](const EdgeId& e, const EdgeId& leg) {
            const EdgeId& x = d.edge_decoration.at(leg);
            auto it = f.f0.find(e);
            if (it == f.f0.end()) {
              f.f0[e] = x;
              fresh.push_back(e);
            } else if (it->second != x) {
              ok = false;
            }
          };
          for (std::size_t k = 0; ok && k < ins.size(); ++k) bind(ins[k], in_order[k]);
          for (std::size_t k = 0; ok && k < outs.size(); ++k) bind(outs[k], out_order[k]);
          if (ok) {
            f.f1[v] = d.shape.num_vertices() == 0 ? d : with_leg_order(d, in_order, out_order);
            rec(vi + 1);
            f.f1.erase(v);
          }
          for (const auto& e : fresh) f.f0.erase(e);
        } while (d.shape.num_vertices() > 0 && std::next_permutation(out_order.begin(), out_order.end()));
      } while (d.shape.num_vertices() > 0 && std::next_permutation(in_order.begin(), in_order.end()));
    }
  };
  rec(0);
  return out;
}

}  // namespace properad
