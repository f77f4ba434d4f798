#include "properad/catalog.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "properad/error.hpp"

namespace properad {

namespace {

// A draft: vertices 0..n-1 in topological order, internal edge multiplicities
// for pairs i<j, and leg counts per vertex.
struct Draft {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> mult;
  std::vector<int> in_legs;
  std::vector<int> out_legs;
};

bool connected(const Draft& d) {
  std::vector<int> parent(static_cast<std::size_t>(d.n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (std::size_t p = 0; p < d.pairs.size(); ++p) {
    if (d.mult[p] > 0) parent[static_cast<std::size_t>(find(d.pairs[p].first))] = find(d.pairs[p].second);
  }
  for (int v = 1; v < d.n; ++v) {
    if (find(v) != find(0)) return false;
  }
  return true;
}

WiringGraph build(const Draft& d) {
  WiringGraph g("shape");
  std::vector<int> in_count(static_cast<std::size_t>(d.n), 0);
  std::vector<int> out_count(static_cast<std::size_t>(d.n), 0);
  for (std::size_t p = 0; p < d.pairs.size(); ++p) {
    out_count[static_cast<std::size_t>(d.pairs[p].first)] += d.mult[p];
    in_count[static_cast<std::size_t>(d.pairs[p].second)] += d.mult[p];
  }
  for (int v = 0; v < d.n; ++v) {
    const auto i = static_cast<std::size_t>(v);
    g.add_vertex("v" + std::to_string(v), in_count[i] + d.in_legs[i], out_count[i] + d.out_legs[i]);
  }
  std::vector<int> next_in(static_cast<std::size_t>(d.n), 1);
  std::vector<int> next_out(static_cast<std::size_t>(d.n), 1);
  int e = 0;
  auto vid = [](int v) { return "v" + std::to_string(v); };
  std::vector<EdgeId> inputs;
  std::vector<EdgeId> outputs;
  for (int v = 0; v < d.n; ++v) {
    const auto i = static_cast<std::size_t>(v);
    for (int k = 0; k < d.in_legs[i]; ++k) {
      const EdgeId id = "e" + std::to_string(e++);
      inputs.push_back(id);
      g.add_edge(id, Endpoint::slot(static_cast<int>(inputs.size())), Endpoint::at(vid(v), next_in[i]++));
    }
  }
  for (std::size_t p = 0; p < d.pairs.size(); ++p) {
    const auto [a, b] = d.pairs[p];
    for (int k = 0; k < d.mult[p]; ++k) {
      g.add_edge("e" + std::to_string(e++), Endpoint::at(vid(a), next_out[static_cast<std::size_t>(a)]++),
                 Endpoint::at(vid(b), next_in[static_cast<std::size_t>(b)]++));
    }
  }
  for (int v = 0; v < d.n; ++v) {
    const auto i = static_cast<std::size_t>(v);
    for (int k = 0; k < d.out_legs[i]; ++k) {
      const EdgeId id = "e" + std::to_string(e++);
      outputs.push_back(id);
      g.add_edge(id, Endpoint::at(vid(v), next_out[i]++), Endpoint::slot(static_cast<int>(outputs.size())));
    }
  }
  g.set_inputs(std::move(inputs));
  g.set_outputs(std::move(outputs));
  return g;
}

class DraftEnumerator {
 public:
  DraftEnumerator(const CatalogOptions& o, ShapeCatalog& sink) : o_(o), sink_(sink) {}

  void run(int n) {
    d_ = Draft{};
    d_.n = n;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) d_.pairs.emplace_back(i, j);
    }
    d_.mult.assign(d_.pairs.size(), 0);
    d_.in_legs.assign(static_cast<std::size_t>(n), 0);
    d_.out_legs.assign(static_cast<std::size_t>(n), 0);
    in_.assign(static_cast<std::size_t>(n), 0);
    out_.assign(static_cast<std::size_t>(n), 0);
    // Slots: pairs, then in-legs per vertex, then out-legs per vertex.
    slots_ = d_.pairs.size() + 2 * static_cast<std::size_t>(n);
    rec(0, 0);
  }

 private:
  bool fits(int v, int din, int dout) const {
    const auto i = static_cast<std::size_t>(v);
    if (o_.max_vertex_in >= 0 && in_[i] + din > o_.max_vertex_in) return false;
    if (o_.max_vertex_out >= 0 && out_[i] + dout > o_.max_vertex_out) return false;
    return true;
  }

  void rec(std::size_t slot, int edges) {
    if (slot == slots_) {
      if (connected(d_)) sink_.insert(build(d_));
      return;
    }
    const int budget = o_.max_edges > 0 ? o_.max_edges - edges : 1 << 20;
    const std::size_t np = d_.pairs.size();
    for (int k = 0; k <= budget; ++k) {
      int a = -1;
      int b = -1;
      if (slot < np) {
        a = d_.pairs[slot].first;
        b = d_.pairs[slot].second;
        if (!fits(a, 0, k) || !fits(b, k, 0)) break;
        d_.mult[slot] = k;
        out_[static_cast<std::size_t>(a)] += k;
        in_[static_cast<std::size_t>(b)] += k;
      } else if (slot < np + static_cast<std::size_t>(d_.n)) {
        a = static_cast<int>(slot - np);
        if (!fits(a, k, 0)) break;
        d_.in_legs[static_cast<std::size_t>(a)] = k;
        in_[static_cast<std::size_t>(a)] += k;
      } else {
        a = static_cast<int>(slot - np - static_cast<std::size_t>(d_.n));
        if (!fits(a, 0, k)) break;
        d_.out_legs[static_cast<std::size_t>(a)] = k;
        out_[static_cast<std::size_t>(a)] += k;
      }
      rec(slot + 1, edges + k);
      if (slot < np) {
        d_.mult[slot] = 0;
        out_[static_cast<std::size_t>(a)] -= k;
        in_[static_cast<std::size_t>(b)] -= k;
      } else if (slot < np + static_cast<std::size_t>(d_.n)) {
        d_.in_legs[static_cast<std::size_t>(a)] = 0;
        in_[static_cast<std::size_t>(a)] -= k;
      } else {
        d_.out_legs[static_cast<std::size_t>(a)] = 0;
        out_[static_cast<std::size_t>(a)] -= k;
      }
    }
  }

  const CatalogOptions& o_;
  ShapeCatalog& sink_;
  Draft d_;
  std::vector<int> in_;
  std::vector<int> out_;
  std::size_t slots_ = 0;
};

}  // namespace

ShapeCatalog::ShapeCatalog(const CatalogOptions& options) {
  if (options.max_edges <= 0 && (options.max_vertex_in < 0 || options.max_vertex_out < 0)) {
    throw Error("catalog needs an edge limit or per-vertex arity limits");
  }
  ShapeCatalog raw;
  raw.insert(make_exceptional_edge());
  DraftEnumerator enumerator(options, raw);
  for (int n = 1; n <= options.max_vertices; ++n) enumerator.run(n);
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = raw.shapes_[a];
    const auto& y = raw.shapes_[b];
    return std::make_tuple(x.num_vertices(), x.num_edges(), raw.forms_[a]) <
           std::make_tuple(y.num_vertices(), y.num_edges(), raw.forms_[b]);
  });
  for (std::size_t i : order) {
    if (options.admit && !options.admit(raw.shapes_[i])) continue;
    index_[raw.forms_[i]] = shapes_.size();
    shapes_.push_back(raw.shapes_[i]);
    forms_.push_back(raw.forms_[i]);
  }
}

long ShapeCatalog::find(const WiringGraph& g) const { return find_form(canonical_form(g)); }

long ShapeCatalog::find_form(const std::string& form) const {
  auto it = index_.find(form);
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

std::size_t ShapeCatalog::insert(const WiringGraph& g) {
  const std::string form = canonical_form(g);
  auto it = index_.find(form);
  if (it != index_.end()) return it->second;
  auto rep = canonical_representative(g).graph;
  rep.set_name("shape");
  index_[form] = shapes_.size();
  shapes_.push_back(std::move(rep));
  forms_.push_back(form);
  return shapes_.size() - 1;
}

}  // namespace properad
