#include "properad/isomorphism.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "properad/error.hpp"

namespace properad {

namespace {

// Per-edge data the isomorphism notions look at.
struct EdgeInfo {
  int tail = -1;  // vertex index or -1
  int head = -1;
  int tail_port = 0;  // port index (vertex ends only)
  int head_port = 0;
  int in_slot = 0;   // 1-based slot when the edge is an input leg and slots matter
  int out_slot = 0;
  std::string label;
};

struct View {
  const WiringGraph* graph = nullptr;
  std::vector<std::string> vertex_label;
  std::vector<EdgeInfo> edges;
};

std::string quoted(const std::string& s) { return std::to_string(s.size()) + ":" + s; }

View make_view(const WiringGraph& g, const CanonOptions& opt) {
  View view;
  view.graph = &g;
  const auto& inc = g.incidence();
  view.vertex_label.resize(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    view.vertex_label[v] = opt.vertex_labels.empty() ? std::string{} : opt.vertex_labels[v];
  }
  std::map<EdgeId, int> in_pos;
  std::map<EdgeId, int> out_pos;
  for (std::size_t i = 0; i < g.inputs().size(); ++i) in_pos[g.inputs()[i]] = static_cast<int>(i + 1);
  for (std::size_t i = 0; i < g.outputs().size(); ++i) out_pos[g.outputs()[i]] = static_cast<int>(i + 1);
  view.edges.resize(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const Edge& edge = g.edges()[e];
    EdgeInfo& info = view.edges[e];
    info.tail = inc.tail_vertex[e];
    info.head = inc.head_vertex[e];
    info.tail_port = info.tail >= 0 ? edge.tail.index : 0;
    info.head_port = info.head >= 0 ? edge.head.index : 0;
    if (opt.ordered_legs) {
      if (edge.tail.is_slot()) info.in_slot = in_pos.count(edge.id) ? in_pos[edge.id] : edge.tail.index;
      if (edge.head.is_slot()) info.out_slot = out_pos.count(edge.id) ? out_pos[edge.id] : edge.head.index;
    }
    if (!opt.edge_labels.empty()) {
      info.label = opt.edge_labels[e];
    } else if (edge.color) {
      info.label = *edge.color;
    }
  }
  return view;
}

// Colour refinement run jointly over several graphs so that colours are
// comparable between them.  Colours are ranks of iso-invariant signatures.
std::vector<std::vector<int>> refine(const std::vector<const View*>& views) {
  std::vector<std::vector<std::string>> sig(views.size());
  for (std::size_t gi = 0; gi < views.size(); ++gi) {
    const View& view = *views[gi];
    const std::size_t nv = view.vertex_label.size();
    sig[gi].resize(nv);
    std::vector<std::vector<std::string>> legs(nv);
    for (const EdgeInfo& e : view.edges) {
      if (e.tail < 0 && e.head >= 0) {
        legs[static_cast<std::size_t>(e.head)].push_back("I" + std::to_string(e.in_slot) + quoted(e.label));
      }
      if (e.head < 0 && e.tail >= 0) {
        legs[static_cast<std::size_t>(e.tail)].push_back("O" + std::to_string(e.out_slot) + quoted(e.label));
      }
    }
    for (std::size_t v = 0; v < nv; ++v) {
      const Vertex& vx = view.graph->vertices()[v];
      std::sort(legs[v].begin(), legs[v].end());
      std::string s = quoted(view.vertex_label[v]) + "|" + std::to_string(vx.in_arity) + "|" +
                      std::to_string(vx.out_arity);
      for (const auto& l : legs[v]) s += "|" + l;
      sig[gi][v] = std::move(s);
    }
  }

  auto rank = [&](const std::vector<std::vector<std::string>>& signatures) {
    std::set<std::string> all;
    for (const auto& per : signatures) all.insert(per.begin(), per.end());
    std::map<std::string, int> index;
    int next = 0;
    for (const auto& s : all) index[s] = next++;
    std::vector<std::vector<int>> colors(signatures.size());
    for (std::size_t gi = 0; gi < signatures.size(); ++gi) {
      for (const auto& s : signatures[gi]) colors[gi].push_back(index[s]);
    }
    return std::make_pair(colors, next);
  };

  auto [colors, count] = rank(sig);
  for (;;) {
    std::vector<std::vector<std::string>> next_sig(views.size());
    for (std::size_t gi = 0; gi < views.size(); ++gi) {
      const View& view = *views[gi];
      const std::size_t nv = view.vertex_label.size();
      std::vector<std::vector<std::string>> nbrs(nv);
      for (const EdgeInfo& e : view.edges) {
        if (e.tail >= 0 && e.head >= 0) {
          const auto t = static_cast<std::size_t>(e.tail);
          const auto h = static_cast<std::size_t>(e.head);
          nbrs[t].push_back(">" + std::to_string(colors[gi][h]) + quoted(e.label));
          nbrs[h].push_back("<" + std::to_string(colors[gi][t]) + quoted(e.label));
        }
      }
      next_sig[gi].resize(nv);
      for (std::size_t v = 0; v < nv; ++v) {
        std::sort(nbrs[v].begin(), nbrs[v].end());
        std::string s = std::to_string(colors[gi][v]);
        for (const auto& n : nbrs[v]) s += "|" + n;
        next_sig[gi][v] = std::move(s);
      }
    }
    auto [next_colors, next_count] = rank(next_sig);
    if (next_count == count) break;
    colors = std::move(next_colors);
    count = next_count;
  }
  return colors;
}

using EdgeTuple = std::tuple<int, int, int, int, std::string>;

EdgeTuple edge_tuple(const EdgeInfo& e, const std::vector<int>& pos) {
  return {e.tail >= 0 ? pos[static_cast<std::size_t>(e.tail)] : -1,
          e.head >= 0 ? pos[static_cast<std::size_t>(e.head)] : -1, e.in_slot, e.out_slot, e.label};
}

std::string encode(const View& view, const std::vector<int>& pos, std::vector<EdgeTuple>& scratch) {
  const std::size_t nv = pos.size();
  std::vector<std::size_t> at(nv);
  for (std::size_t v = 0; v < nv; ++v) at[static_cast<std::size_t>(pos[v])] = v;
  std::string out = "V" + std::to_string(nv);
  for (std::size_t p = 0; p < nv; ++p) {
    const std::size_t v = at[p];
    const Vertex& vx = view.graph->vertices()[v];
    out += "(" + quoted(view.vertex_label[v]) + "," + std::to_string(vx.in_arity) + "," +
           std::to_string(vx.out_arity) + ")";
  }
  scratch.clear();
  for (const EdgeInfo& e : view.edges) scratch.push_back(edge_tuple(e, pos));
  std::sort(scratch.begin(), scratch.end());
  out += "E" + std::to_string(scratch.size());
  for (const auto& [t, h, is, os, label] : scratch) {
    out += "(" + std::to_string(t) + "," + std::to_string(h) + "," + std::to_string(is) + "," +
           std::to_string(os) + "," + quoted(label) + ")";
  }
  return out;
}

// Calls visit(pos) for every vertex ordering compatible with the colour cells.
template <typename Visit>
void for_each_cell_ordering(const std::vector<int>& colors, Visit&& visit) {
  const std::size_t nv = colors.size();
  std::vector<std::size_t> order(nv);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return colors[a] < colors[b]; });
  // cells as [begin, end) ranges in `order`
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < nv;) {
    std::size_t j = i;
    while (j < nv && colors[order[j]] == colors[order[i]]) ++j;
    cells.emplace_back(i, j);
    i = j;
  }
  std::vector<int> pos(nv);
  for (;;) {
    for (std::size_t p = 0; p < nv; ++p) pos[order[p]] = static_cast<int>(p);
    visit(pos);
    // odometer over per-cell permutations
    std::size_t c = 0;
    for (; c < cells.size(); ++c) {
      auto first = order.begin() + static_cast<std::ptrdiff_t>(cells[c].first);
      auto last = order.begin() + static_cast<std::ptrdiff_t>(cells[c].second);
      if (std::next_permutation(first, last)) break;
    }
    if (c == cells.size()) return;
  }
}

}  // namespace

CanonicalLabeling canonical_labeling(const WiringGraph& g, const CanonOptions& options) {
  View view = make_view(g, options);
  auto colors = refine({&view});
  CanonicalLabeling best;
  std::vector<EdgeTuple> scratch;
  bool first = true;
  for_each_cell_ordering(colors[0], [&](const std::vector<int>& pos) {
    std::string form = encode(view, pos, scratch);
    if (first || form < best.form) {
      best.form = std::move(form);
      best.vertex_position = pos;
      first = false;
    }
  });
  if (first) best.form = encode(view, {}, scratch);  // no vertices

  // Rank edges by their tuple under the chosen vertex order.
  std::vector<std::size_t> order(g.num_edges());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<EdgeTuple> tuples;
  for (const EdgeInfo& e : view.edges) tuples.push_back(edge_tuple(e, best.vertex_position));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tuples[a] < tuples[b]; });
  best.edge_position.assign(g.num_edges(), 0);
  for (std::size_t r = 0; r < order.size(); ++r) best.edge_position[order[r]] = static_cast<int>(r);
  return best;
}

std::string canonical_form(const WiringGraph& g) { return canonical_labeling(g).form; }

Representative canonical_representative(const WiringGraph& g) {
  const CanonicalLabeling lab = canonical_labeling(g);
  const auto& inc = g.incidence();
  Representative rep;
  WiringGraph& r = rep.graph;
  r.set_name("rep");
  const std::size_t nv = g.num_vertices();
  const std::size_t ne = g.num_edges();
  std::vector<std::size_t> vat(nv);
  for (std::size_t v = 0; v < nv; ++v) vat[static_cast<std::size_t>(lab.vertex_position[v])] = v;
  std::vector<std::size_t> eat(ne);
  for (std::size_t e = 0; e < ne; ++e) eat[static_cast<std::size_t>(lab.edge_position[e])] = e;

  auto vname = [](int p) { return "v" + std::to_string(p); };
  auto ename = [](std::size_t r) { return "e" + std::to_string(r); };
  for (std::size_t p = 0; p < nv; ++p) {
    const Vertex& vx = g.vertices()[vat[p]];
    r.add_vertex(vname(static_cast<int>(p)), vx.in_arity, vx.out_arity);
    rep.from_original.vertex_map[vx.id] = vname(static_cast<int>(p));
  }
  std::vector<int> next_in(nv, 1);
  std::vector<int> next_out(nv, 1);
  int next_in_slot = 1;
  int next_out_slot = 1;
  std::vector<EdgeId> ins;
  std::vector<EdgeId> outs;
  for (std::size_t rk = 0; rk < ne; ++rk) {
    const std::size_t e = eat[rk];
    const Edge& edge = g.edges()[e];
    Endpoint tail = Endpoint::slot(0);
    Endpoint head = Endpoint::slot(0);
    if (inc.tail_vertex[e] >= 0) {
      const auto p = static_cast<std::size_t>(lab.vertex_position[static_cast<std::size_t>(inc.tail_vertex[e])]);
      tail = Endpoint::at(vname(static_cast<int>(p)), next_out[p]++);
    } else {
      tail = Endpoint::slot(next_in_slot++);
      ins.push_back(ename(rk));
    }
    if (inc.head_vertex[e] >= 0) {
      const auto p = static_cast<std::size_t>(lab.vertex_position[static_cast<std::size_t>(inc.head_vertex[e])]);
      head = Endpoint::at(vname(static_cast<int>(p)), next_in[p]++);
    } else {
      head = Endpoint::slot(next_out_slot++);
      outs.push_back(ename(rk));
    }
    r.add_edge(ename(rk), tail, head, edge.color);
    rep.from_original.edge_map[edge.id] = ename(rk);
  }
  r.set_inputs(std::move(ins));
  r.set_outputs(std::move(outs));
  return rep;
}

std::vector<Isomorphism> find_isomorphisms(const WiringGraph& g, const WiringGraph& h,
                                           IsoMode mode, std::size_t limit) {
  std::vector<Isomorphism> result;
  if (g.num_vertices() != h.num_vertices() || g.num_edges() != h.num_edges() ||
      g.inputs().size() != h.inputs().size() || g.outputs().size() != h.outputs().size()) {
    return result;
  }
  CanonOptions opt;
  opt.ordered_legs = mode == IsoMode::strict;
  const View gv = make_view(g, opt);
  const View hv = make_view(h, opt);
  const auto colors = refine({&gv, &hv});
  const std::size_t nv = g.num_vertices();
  const std::size_t ne = g.num_edges();

  // Edges between ordered vertex pairs (or legs) as label multisets.
  auto bundle_key = [](const EdgeInfo& e, int t, int hd, bool strict) {
    return std::make_tuple(t, hd, strict ? e.tail_port : 0, strict ? e.head_port : 0, e.in_slot,
                           e.out_slot, e.label);
  };

  std::vector<int> phi(nv, -1);
  std::vector<bool> used(nv, false);
  const bool strict = mode == IsoMode::strict;

  auto complete = [&]() {
    // Group edges of both graphs by their (mapped) endpoint key.
    using Key = decltype(bundle_key(EdgeInfo{}, 0, 0, false));
    std::map<Key, std::vector<std::size_t>> gb;
    std::map<Key, std::vector<std::size_t>> hb;
    for (std::size_t e = 0; e < ne; ++e) {
      const EdgeInfo& x = gv.edges[e];
      gb[bundle_key(x, x.tail >= 0 ? phi[static_cast<std::size_t>(x.tail)] : -1,
                    x.head >= 0 ? phi[static_cast<std::size_t>(x.head)] : -1, strict)]
          .push_back(e);
      const EdgeInfo& y = hv.edges[e];
      hb[bundle_key(y, y.tail, y.head, strict)].push_back(e);
    }
    if (gb.size() != hb.size()) return true;
    for (const auto& [k, es] : gb) {
      auto it = hb.find(k);
      if (it == hb.end() || it->second.size() != es.size()) return true;
    }
    // Enumerate bijections within each bundle.
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> bundles;
    for (const auto& [k, es] : gb) bundles.emplace_back(es, hb[k]);
    Isomorphism base;
    for (std::size_t v = 0; v < nv; ++v) {
      base.vertex_map[g.vertices()[v].id] = h.vertices()[static_cast<std::size_t>(phi[v])].id;
    }
    auto rec = [&](auto&& self, std::size_t b, Isomorphism& iso) -> bool {
      if (b == bundles.size()) {
        result.push_back(iso);
        return limit == 0 || result.size() < limit;
      }
      auto targets = bundles[b].second;
      std::sort(targets.begin(), targets.end());
      do {
        for (std::size_t i = 0; i < targets.size(); ++i) {
          iso.edge_map[g.edges()[bundles[b].first[i]].id] = h.edges()[targets[i]].id;
        }
        if (!self(self, b + 1, iso)) return false;
      } while (std::next_permutation(targets.begin(), targets.end()));
      return true;
    };
    Isomorphism iso = base;
    return rec(rec, 0, iso);
  };

  // Incremental check of vertex v against already-mapped vertices.
  auto consistent = [&](std::size_t v) {
    using Key = std::tuple<int, int, int, int, int, int, std::string>;
    std::map<Key, int> count;
    auto add = [&](const EdgeInfo& e, int t, int hd, int delta) {
      count[bundle_key(e, t, hd, strict)] += delta;
    };
    const int iv = static_cast<int>(v);
    const int hvx = phi[v];
    for (const EdgeInfo& e : gv.edges) {
      const bool touches = e.tail == iv || e.head == iv;
      if (!touches) continue;
      if ((e.tail >= 0 && phi[static_cast<std::size_t>(e.tail)] < 0) ||
          (e.head >= 0 && phi[static_cast<std::size_t>(e.head)] < 0)) {
        continue;
      }
      add(e, e.tail >= 0 ? phi[static_cast<std::size_t>(e.tail)] : -1,
          e.head >= 0 ? phi[static_cast<std::size_t>(e.head)] : -1, 1);
    }
    for (const EdgeInfo& e : hv.edges) {
      const bool touches = e.tail == hvx || e.head == hvx;
      if (!touches) continue;
      auto mapped = [&](int w) {
        return w < 0 || std::find(phi.begin(), phi.end(), w) != phi.end();
      };
      if (!mapped(e.tail) || !mapped(e.head)) continue;
      add(e, e.tail, e.head, -1);
    }
    return std::all_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 0; });
  };

  auto search = [&](auto&& self, std::size_t v) -> bool {
    if (v == nv) return complete();
    for (std::size_t w = 0; w < nv; ++w) {
      if (used[w] || colors[0][v] != colors[1][w]) continue;
      if (g.vertices()[v].in_arity != h.vertices()[w].in_arity ||
          g.vertices()[v].out_arity != h.vertices()[w].out_arity) {
        continue;
      }
      phi[v] = static_cast<int>(w);
      used[w] = true;
      if (consistent(v) && !self(self, v + 1)) return false;
      phi[v] = -1;
      used[w] = false;
    }
    return true;
  };
  search(search, 0);
  return result;
}

bool weakly_isomorphic(const WiringGraph& g, const WiringGraph& h) {
  return canonical_form(g) == canonical_form(h);
}

Isomorphism inverse(const Isomorphism& iso) {
  Isomorphism inv;
  for (const auto& [a, b] : iso.vertex_map) inv.vertex_map[b] = a;
  for (const auto& [a, b] : iso.edge_map) inv.edge_map[b] = a;
  return inv;
}

WiringGraph apply_renaming(const WiringGraph& g, const Isomorphism& renaming) {
  auto vname = [&](const VertexId& v) {
    auto it = renaming.vertex_map.find(v);
    return it == renaming.vertex_map.end() ? v : it->second;
  };
  auto ename = [&](const EdgeId& e) {
    auto it = renaming.edge_map.find(e);
    return it == renaming.edge_map.end() ? e : it->second;
  };
  WiringGraph out(g.name());
  for (const Vertex& v : g.vertices()) out.add_vertex(vname(v.id), v.in_arity, v.out_arity);
  for (const Edge& e : g.edges()) {
    Endpoint t = e.tail;
    Endpoint h = e.head;
    if (t.vertex) t.vertex = vname(*t.vertex);
    if (h.vertex) h.vertex = vname(*h.vertex);
    out.add_edge(ename(e.id), t, h, e.color);
  }
  std::vector<EdgeId> ins;
  std::vector<EdgeId> outs;
  for (const auto& id : g.inputs()) ins.push_back(ename(id));
  for (const auto& id : g.outputs()) outs.push_back(ename(id));
  out.set_inputs(std::move(ins));
  out.set_outputs(std::move(outs));
  return out;
}

}  // namespace properad
