#include "properad/properad.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "properad/catalog.hpp"
#include "properad/error.hpp"

namespace properad {

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

int mod(long a, int m) { return static_cast<int>(((a % m) + m) % m); }

}  // namespace

// ---------------------------------------------------------------------------
// PGC keys

std::string to_string(const PgcKey& key) {
  std::string g;
  for (auto [o, i] : key.grafts) g += (g.empty() ? "" : ",") + std::to_string(o) + ">" + std::to_string(i);
  return "u" + to_string(key.u) + "[" + key.op_u + "] w" + to_string(key.w) + "[" + key.op_w + "] grafts " + g;
}

Biprofile composite_profile(const PgcKey& key) {
  if (key.grafts.empty()) throw Error("PGC requires at least one grafted edge");
  std::set<int> outs;
  std::set<int> ins;
  for (auto [o, i] : key.grafts) {
    if (o < 1 || o > static_cast<int>(key.u.outputs.size()) || i < 1 ||
        i > static_cast<int>(key.w.inputs.size())) {
      throw Error("PGC graft out of range in " + to_string(key));
    }
    if (!outs.insert(o).second || !ins.insert(i).second) throw Error("PGC grafting not injective in " + to_string(key));
    if (key.u.outputs[static_cast<std::size_t>(o - 1)] != key.w.inputs[static_cast<std::size_t>(i - 1)]) {
      throw Error("PGC graft joins different colors in " + to_string(key));
    }
  }
  Biprofile out;
  out.inputs = key.u.inputs;
  for (std::size_t j = 0; j < key.w.inputs.size(); ++j) {
    if (!ins.count(static_cast<int>(j + 1))) out.inputs.push_back(key.w.inputs[j]);
  }
  for (std::size_t j = 0; j < key.u.outputs.size(); ++j) {
    if (!outs.count(static_cast<int>(j + 1))) out.outputs.push_back(key.u.outputs[j]);
  }
  out.outputs.insert(out.outputs.end(), key.w.outputs.begin(), key.w.outputs.end());
  return out;
}

WiringGraph pgc_graph(const PgcKey& key) {
  composite_profile(key);
  PgcSpec spec;
  spec.u_in = static_cast<int>(key.u.inputs.size());
  spec.u_out = static_cast<int>(key.u.outputs.size());
  spec.v_in = static_cast<int>(key.w.inputs.size());
  spec.v_out = static_cast<int>(key.w.outputs.size());
  spec.grafts = key.grafts;
  WiringGraph g = make_pgc(spec);
  for (const Edge& e : std::vector<Edge>(g.edges())) {
    const auto idx = [](int k) { return static_cast<std::size_t>(k - 1); };
    Color c;
    if (e.head.vertex == "u") {
      c = key.u.inputs[idx(e.head.index)];
    } else if (e.head.vertex == "v") {
      c = key.w.inputs[idx(e.head.index)];
    } else if (e.tail.vertex == "u") {
      c = key.u.outputs[idx(e.tail.index)];
    } else {
      c = key.w.outputs[idx(e.tail.index)];
    }
    g.set_color(e.id, c);
  }
  return g;
}

Biprofile permute(const Biprofile& p, const std::vector<int>& in_perm, const std::vector<int>& out_perm) {
  auto apply = [](const std::vector<Color>& xs, const std::vector<int>& perm) {
    if (perm.empty()) return xs;
    if (perm.size() != xs.size()) throw Error("permutation size does not match the profile");
    std::vector<Color> out;
    for (int k : perm) out.push_back(xs.at(static_cast<std::size_t>(k)));
    return out;
  };
  return Biprofile{apply(p.inputs, in_perm), apply(p.outputs, out_perm)};
}

// ---------------------------------------------------------------------------
// FiniteProperad

bool FiniteProperad::within_bound(const Biprofile& p) const {
  return static_cast<int>(p.inputs.size()) <= max_inputs && static_cast<int>(p.outputs.size()) <= max_outputs;
}

bool FiniteProperad::has_color(const Color& c) const {
  return std::find(colors.begin(), colors.end(), c) != colors.end();
}

const std::vector<OpToken>& FiniteProperad::ops_of(const Biprofile& p) const {
  static const std::vector<OpToken> none;
  auto it = ops.find(p);
  return it == ops.end() ? none : it->second;
}

bool FiniteProperad::has_op(const Biprofile& p, const OpToken& op) const {
  const auto& list = ops_of(p);
  return std::find(list.begin(), list.end(), op) != list.end();
}

OpToken FiniteProperad::swap(const Biprofile& p, const OpToken& op, bool input, int k) const {
  const std::size_t n = input ? p.inputs.size() : p.outputs.size();
  if (k < 0 || static_cast<std::size_t>(k) + 1 >= n) throw Error("transposition out of range");
  auto it = swaps.find({p, op});
  if (it != swaps.end()) {
    const auto& list = input ? it->second.in_swaps : it->second.out_swaps;
    if (static_cast<std::size_t>(k) < list.size()) return list[static_cast<std::size_t>(k)];
  }
  if (swap_rule) {
    if (auto r = swap_rule(p, op, input, k)) return *r;
  }
  throw Error("symmetric action undefined on " + op + " " + to_string(p));
}

OpToken FiniteProperad::act(const Biprofile& p, const OpToken& op, const std::vector<int>& in_perm,
                            const std::vector<int>& out_perm) const {
  // Bubble-sort the permutation into adjacent transpositions; applying them in
  // reverse order from the identity rebuilds it.
  auto decompose = [](std::vector<int> perm) {
    std::vector<int> steps;
    for (std::size_t pass = 0; pass < perm.size(); ++pass) {
      for (std::size_t i = 0; i + 1 < perm.size(); ++i) {
        if (perm[i] > perm[i + 1]) {
          std::swap(perm[i], perm[i + 1]);
          steps.push_back(static_cast<int>(i));
        }
      }
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
  };
  Biprofile cur = p;
  OpToken tok = op;
  for (int k : decompose(in_perm)) {
    tok = swap(cur, tok, true, k);
    std::swap(cur.inputs[static_cast<std::size_t>(k)], cur.inputs[static_cast<std::size_t>(k) + 1]);
  }
  for (int k : decompose(out_perm)) {
    tok = swap(cur, tok, false, k);
    std::swap(cur.outputs[static_cast<std::size_t>(k)], cur.outputs[static_cast<std::size_t>(k) + 1]);
  }
  return tok;
}

std::optional<OpToken> FiniteProperad::compose(const PgcKey& key) const {
  auto it = table.find(key);
  if (it != table.end()) return it->second;
  if (compose_rule) return compose_rule(key);
  return std::nullopt;
}

const OpToken& FiniteProperad::unit(const Color& c) const {
  auto it = units.find(c);
  if (it == units.end()) throw Error("no unit for color " + c);
  return it->second;
}

// ---------------------------------------------------------------------------
// PGC enumeration

std::vector<PgcKey> pgc_shapes(int max_inputs, int max_outputs) {
  std::vector<PgcKey> out;
  for (int ui = 0; ui <= max_inputs; ++ui) {
    for (int uo = 1; uo <= max_outputs; ++uo) {
      for (int wi = 1; wi <= max_inputs; ++wi) {
        for (int wo = 0; wo <= max_outputs; ++wo) {
          // Partial injections from u's outputs to w's inputs, as a choice of
          // target (0 = free) per output.
          std::vector<int> choice(static_cast<std::size_t>(uo), 0);
          while (true) {
            std::set<int> used;
            bool injective = true;
            int grafted = 0;
            for (int c : choice) {
              if (c == 0) continue;
              ++grafted;
              injective = injective && used.insert(c).second;
            }
            if (injective && grafted > 0 && ui + wi - grafted <= max_inputs && uo - grafted + wo <= max_outputs) {
              PgcKey key;
              key.u.inputs.assign(static_cast<std::size_t>(ui), "");
              key.u.outputs.assign(static_cast<std::size_t>(uo), "");
              key.w.inputs.assign(static_cast<std::size_t>(wi), "");
              key.w.outputs.assign(static_cast<std::size_t>(wo), "");
              for (int o = 0; o < uo; ++o) {
                if (choice[static_cast<std::size_t>(o)]) key.grafts.emplace_back(o + 1, choice[static_cast<std::size_t>(o)]);
              }
              out.push_back(std::move(key));
            }
            std::size_t pos = 0;
            while (pos < choice.size() && choice[pos] == wi) choice[pos++] = 0;
            if (pos == choice.size()) break;
            ++choice[pos];
          }
        }
      }
    }
  }
  return out;
}

std::vector<PgcKey> pgc_entries(const FiniteProperad& p) {
  std::vector<PgcKey> out;
  const std::size_t k = p.colors.size();
  if (k == 0) return out;
  for (const PgcKey& shape : pgc_shapes(p.max_inputs, p.max_outputs)) {
    std::map<int, int> graft_of_w;  // w input port -> u output port
    for (auto [o, i] : shape.grafts) graft_of_w[i] = o;
    // Free variables: u inputs, u outputs, free w inputs, w outputs.
    const std::size_t ui = shape.u.inputs.size();
    const std::size_t uo = shape.u.outputs.size();
    const std::size_t wi = shape.w.inputs.size();
    const std::size_t wo = shape.w.outputs.size();
    const std::size_t vars = ui + uo + (wi - shape.grafts.size()) + wo;
    std::vector<std::size_t> digit(vars, 0);
    while (true) {
      PgcKey key = shape;
      std::size_t d = 0;
      for (std::size_t j = 0; j < ui; ++j) key.u.inputs[j] = p.colors[digit[d++]];
      for (std::size_t j = 0; j < uo; ++j) key.u.outputs[j] = p.colors[digit[d++]];
      for (std::size_t j = 0; j < wi; ++j) {
        auto it = graft_of_w.find(static_cast<int>(j + 1));
        key.w.inputs[j] = it != graft_of_w.end() ? key.u.outputs[static_cast<std::size_t>(it->second - 1)]
                                                 : p.colors[digit[d++]];
      }
      for (std::size_t j = 0; j < wo; ++j) key.w.outputs[j] = p.colors[digit[d++]];
      for (const OpToken& a : p.ops_of(key.u)) {
        for (const OpToken& b : p.ops_of(key.w)) {
          PgcKey full = key;
          full.op_u = a;
          full.op_w = b;
          out.push_back(std::move(full));
        }
      }
      std::size_t pos = 0;
      while (pos < vars && digit[pos] + 1 == k) digit[pos++] = 0;
      if (pos == vars) break;
      ++digit[pos];
    }
  }
  return out;
}

FiniteProperad materialize(const FiniteProperad& p) {
  FiniteProperad out = p;
  for (const auto& [profile, list] : p.ops) {
    for (const OpToken& op : list) {
      FiniteProperad::Swaps s;
      for (std::size_t k = 0; k + 1 < profile.inputs.size(); ++k) s.in_swaps.push_back(p.swap(profile, op, true, static_cast<int>(k)));
      for (std::size_t k = 0; k + 1 < profile.outputs.size(); ++k) s.out_swaps.push_back(p.swap(profile, op, false, static_cast<int>(k)));
      out.swaps[{profile, op}] = std::move(s);
    }
  }
  for (const PgcKey& key : pgc_entries(p)) {
    if (auto r = p.compose(key)) out.table[key] = *r;
  }
  out.swap_rule = nullptr;
  out.compose_rule = nullptr;
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct Contraction {
  struct Node {
    std::vector<int> ins;
    std::vector<int> outs;
    OpToken op;
    bool alive = true;
  };
  struct Link {
    int tail = -1;
    int head = -1;
    Color color;
  };
  std::vector<Node> nodes;
  std::vector<Link> links;
  std::vector<int> in_legs;
  std::vector<int> out_legs;

  Biprofile profile(const Node& n) const {
    Biprofile p;
    for (int e : n.ins) p.inputs.push_back(links[static_cast<std::size_t>(e)].color);
    for (int e : n.outs) p.outputs.push_back(links[static_cast<std::size_t>(e)].color);
    return p;
  }

  std::size_t alive_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.alive; }));
  }

  bool reaches(int from, int to) const {
    std::vector<int> stack{from};
    std::vector<bool> seen(nodes.size(), false);
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      if (x == to) return true;
      if (seen[static_cast<std::size_t>(x)]) continue;
      seen[static_cast<std::size_t>(x)] = true;
      for (int e : nodes[static_cast<std::size_t>(x)].outs) {
        int h = links[static_cast<std::size_t>(e)].head;
        if (h >= 0) stack.push_back(h);
      }
    }
    return false;
  }

  // u -> w joined by an edge and by no longer path.
  bool contractible(int u, int w) const {
    bool joined = false;
    for (int e : nodes[static_cast<std::size_t>(u)].outs) {
      int h = links[static_cast<std::size_t>(e)].head;
      if (h == w) {
        joined = true;
      } else if (h >= 0 && reaches(h, w)) {
        return false;
      }
    }
    return joined;
  }

  PgcKey key(int u, int w) const {
    const Node& nu = nodes[static_cast<std::size_t>(u)];
    const Node& nw = nodes[static_cast<std::size_t>(w)];
    PgcKey k;
    k.u = profile(nu);
    k.w = profile(nw);
    k.op_u = nu.op;
    k.op_w = nw.op;
    for (std::size_t o = 0; o < nu.outs.size(); ++o) {
      const Link& l = links[static_cast<std::size_t>(nu.outs[o])];
      if (l.head != w) continue;
      auto pos = std::find(nw.ins.begin(), nw.ins.end(), nu.outs[o]) - nw.ins.begin();
      k.grafts.emplace_back(static_cast<int>(o + 1), static_cast<int>(pos + 1));
    }
    return k;
  }

  Contraction contract(int u, int w, const OpToken& op) const {
    Contraction c = *this;
    Node merged;
    merged.op = op;
    const Node& nu = nodes[static_cast<std::size_t>(u)];
    const Node& nw = nodes[static_cast<std::size_t>(w)];
    merged.ins = nu.ins;
    for (int e : nw.ins) {
      if (links[static_cast<std::size_t>(e)].tail != u) merged.ins.push_back(e);
    }
    for (int e : nu.outs) {
      if (links[static_cast<std::size_t>(e)].head != w) merged.outs.push_back(e);
    }
    merged.outs.insert(merged.outs.end(), nw.outs.begin(), nw.outs.end());
    const int id = static_cast<int>(c.nodes.size());
    for (int e : merged.ins) c.links[static_cast<std::size_t>(e)].head = id;
    for (int e : merged.outs) c.links[static_cast<std::size_t>(e)].tail = id;
    c.nodes[static_cast<std::size_t>(u)].alive = false;
    c.nodes[static_cast<std::size_t>(w)].alive = false;
    c.nodes.push_back(std::move(merged));
    return c;
  }

  OpToken finish(const FiniteProperad& p) const {
    for (const Node& n : nodes) {
      if (!n.alive) continue;
      auto perm = [](const std::vector<int>& legs, const std::vector<int>& ports) {
        std::vector<int> out;
        for (int e : legs) out.push_back(static_cast<int>(std::find(ports.begin(), ports.end(), e) - ports.begin()));
        return out;
      };
      return p.act(profile(n), n.op, perm(in_legs, n.ins), perm(out_legs, n.outs));
    }
    throw Error("no vertex left");
  }
};

Contraction build_contraction(const FiniteProperad& p, const PDecoration& d) {
  const WiringGraph& g = d.shape;
  Contraction c;
  std::map<VertexId, int> vid;
  for (const Vertex& v : g.vertices()) {
    vid[v.id] = static_cast<int>(c.nodes.size());
    Contraction::Node n;
    auto it = d.vertex_decoration.find(v.id);
    if (it == d.vertex_decoration.end()) throw Error("vertex " + v.id + " carries no operation");
    n.op = it->second;
    c.nodes.push_back(std::move(n));
  }
  std::map<EdgeId, int> eid;
  for (const Edge& e : g.edges()) {
    eid[e.id] = static_cast<int>(c.links.size());
    Contraction::Link l;
    auto it = d.edge_decoration.find(e.id);
    if (it != d.edge_decoration.end()) {
      l.color = it->second;
    } else if (e.color) {
      l.color = *e.color;
    } else {
      throw Error("edge " + e.id + " carries no color");
    }
    if (!p.has_color(l.color)) throw Error("edge " + e.id + " has unknown color " + l.color);
    l.tail = e.tail.vertex ? vid.at(*e.tail.vertex) : -1;
    l.head = e.head.vertex ? vid.at(*e.head.vertex) : -1;
    c.links.push_back(l);
  }
  for (const Vertex& v : g.vertices()) {
    auto& n = c.nodes[static_cast<std::size_t>(vid[v.id])];
    for (const auto& e : g.in_edges(v.id)) n.ins.push_back(eid.at(e));
    for (const auto& e : g.out_edges(v.id)) n.outs.push_back(eid.at(e));
    const Biprofile prof = c.profile(n);
    if (!p.within_bound(prof)) throw Error("shape exceeds arity bound at vertex " + v.id);
    if (!p.has_op(prof, n.op)) throw Error("vertex " + v.id + ": " + n.op + " is not an operation of " + to_string(prof));
  }
  for (const auto& e : g.inputs()) c.in_legs.push_back(eid.at(e));
  for (const auto& e : g.outputs()) c.out_legs.push_back(eid.at(e));
  return c;
}

// Returns false when every contraction order leaves the arity bounds.
bool run(const FiniteProperad& p, const Contraction& c, bool all, std::set<OpToken>& results) {
  if (c.alive_count() == 1) {
    results.insert(c.finish(p));
    return true;
  }
  bool any = false;
  for (std::size_t u = 0; u < c.nodes.size(); ++u) {
    if (!c.nodes[u].alive) continue;
    for (std::size_t w = 0; w < c.nodes.size(); ++w) {
      if (w == u || !c.nodes[w].alive) continue;
      if (!c.contractible(static_cast<int>(u), static_cast<int>(w))) continue;
      const PgcKey key = c.key(static_cast<int>(u), static_cast<int>(w));
      if (!p.within_bound(composite_profile(key))) continue;
      auto r = p.compose(key);
      if (!r) throw Error("composition table incomplete: no entry for " + to_string(key));
      if (run(p, c.contract(static_cast<int>(u), static_cast<int>(w), *r), all, results)) {
        any = true;
        if (!all) return true;
      }
    }
  }
  return any;
}

std::set<OpToken> evaluate_impl(const FiniteProperad& p, const PDecoration& d, bool all) {
  const WiringGraph& g = d.shape;
  if (g.num_vertices() == 0) {
    if (g.num_edges() != 1) throw Error("a graph without vertices must be the exceptional edge");
    const Edge& e = g.edges().front();
    auto it = d.edge_decoration.find(e.id);
    const Color c = it != d.edge_decoration.end() ? it->second : e.color.value_or("");
    return {p.unit(c)};
  }
  std::set<OpToken> results;
  if (!run(p, build_contraction(p, d), all, results)) throw Error("shape exceeds arity bound: no contraction order stays within it");
  return results;
}

}  // namespace

OpToken evaluate(const FiniteProperad& p, const PDecoration& d) { return *evaluate_impl(p, d, false).begin(); }

std::set<OpToken> evaluate_all_orders(const FiniteProperad& p, const PDecoration& d) {
  return evaluate_impl(p, d, true);
}

// ---------------------------------------------------------------------------
// Axioms

void ProperadReport::add(std::string check, std::string witness, std::optional<WiringGraph> graph) {
  ok = false;
  violations.push_back({std::move(check), std::move(witness), std::move(graph)});
}

namespace {

// Composite legs as (vertex 0=u/1=w, port), inputs then outputs.
using LegList = std::vector<std::pair<int, int>>;
std::pair<LegList, LegList> composite_legs(const PgcKey& key) {
  std::set<int> outs;
  std::set<int> ins;
  for (auto [o, i] : key.grafts) {
    outs.insert(o);
    ins.insert(i);
  }
  LegList li;
  LegList lo;
  for (int k = 1; k <= static_cast<int>(key.u.inputs.size()); ++k) li.emplace_back(0, k);
  for (int k = 1; k <= static_cast<int>(key.w.inputs.size()); ++k) {
    if (!ins.count(k)) li.emplace_back(1, k);
  }
  for (int k = 1; k <= static_cast<int>(key.u.outputs.size()); ++k) {
    if (!outs.count(k)) lo.emplace_back(0, k);
  }
  for (int k = 1; k <= static_cast<int>(key.w.outputs.size()); ++k) lo.emplace_back(1, k);
  return {li, lo};
}

void check_symmetry(const FiniteProperad& p, const Biprofile& prof, const OpToken& op, ProperadReport& report,
                    std::size_t limit) {
  auto fail = [&](const std::string& what) {
    if (report.violations.size() < limit) report.add("symmetry", what + " at " + op + " " + to_string(prof));
    else report.ok = false;
  };
  for (bool input : {true, false}) {
    const std::size_t n = input ? prof.inputs.size() : prof.outputs.size();
    auto swapped = [&](Biprofile b, int k) {
      auto& xs = input ? b.inputs : b.outputs;
      std::swap(xs[static_cast<std::size_t>(k)], xs[static_cast<std::size_t>(k) + 1]);
      return b;
    };
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const int kk = static_cast<int>(k);
      const Biprofile b1 = swapped(prof, kk);
      const OpToken q = p.swap(prof, op, input, kk);
      if (!p.has_op(b1, q)) {
        fail("transposition leaves the operation set");
        continue;
      }
      if (p.swap(b1, q, input, kk) != op) fail("transposition is not an involution");
      if (k + 2 < n) {
        // (s_k s_{k+1})^3 = 1
        Biprofile b = prof;
        OpToken t = op;
        for (int step = 0; step < 6; ++step) {
          const int j = kk + (step % 2);
          t = p.swap(b, t, input, j);
          b = swapped(b, j);
        }
        if (t != op) fail("braid relation fails");
      }
      for (std::size_t j = k + 2; j + 1 < n; ++j) {
        const int jj = static_cast<int>(j);
        const OpToken a = p.swap(swapped(prof, kk), p.swap(prof, op, input, kk), input, jj);
        const OpToken c = p.swap(swapped(prof, jj), p.swap(prof, op, input, jj), input, kk);
        if (a != c) fail("distant transpositions do not commute");
      }
    }
  }
  for (std::size_t k = 0; k + 1 < prof.inputs.size(); ++k) {
    for (std::size_t j = 0; j + 1 < prof.outputs.size(); ++j) {
      Biprofile bi = prof;
      std::swap(bi.inputs[k], bi.inputs[k + 1]);
      Biprofile bo = prof;
      std::swap(bo.outputs[j], bo.outputs[j + 1]);
      const OpToken a = p.swap(bi, p.swap(prof, op, true, static_cast<int>(k)), false, static_cast<int>(j));
      const OpToken c = p.swap(bo, p.swap(prof, op, false, static_cast<int>(j)), true, static_cast<int>(k));
      if (a != c) fail("input and output actions do not commute");
    }
  }
}

}  // namespace

ProperadReport check_properad_axioms(const FiniteProperad& p, int graph_bound, std::size_t limit) {
  ProperadReport report;
  auto add = [&](const std::string& check, const std::string& witness, std::optional<WiringGraph> g = std::nullopt) {
    if (report.violations.size() < limit) report.add(check, witness, std::move(g));
    else report.ok = false;
  };

  // Structure.
  std::set<Color> seen_colors;
  for (const Color& c : p.colors) {
    if (c.empty() || !seen_colors.insert(c).second) add("structure", "color names must be nonempty and distinct: '" + c + "'");
  }
  for (const auto& [prof, list] : p.ops) {
    if (!p.within_bound(prof)) add("structure", "biprofile " + to_string(prof) + " exceeds the arity bound");
    for (const auto& c : prof.inputs) {
      if (!p.has_color(c)) add("structure", "unknown color " + c + " in " + to_string(prof));
    }
    for (const auto& c : prof.outputs) {
      if (!p.has_color(c)) add("structure", "unknown color " + c + " in " + to_string(prof));
    }
    std::set<OpToken> toks(list.begin(), list.end());
    if (toks.size() != list.size()) add("structure", "repeated operation in " + to_string(prof));
  }
  for (const Color& c : p.colors) {
    auto it = p.units.find(c);
    if (it == p.units.end() || !p.has_op(Biprofile{{c}, {c}}, it->second)) {
      add("structure", "color " + c + " has no unit operation");
    }
  }
  if (!report.ok) return report;

  // Symmetric action.
  for (const auto& [prof, list] : p.ops) {
    for (const OpToken& op : list) {
      try {
        check_symmetry(p, prof, op, report, limit);
      } catch (const Error& e) {
        add("symmetry", e.what());
      }
      ++report.checked;
    }
  }
  if (!report.ok) return report;

  // Unit laws.
  for (const auto& [prof, list] : p.ops) {
    const int m = static_cast<int>(prof.inputs.size());
    const int n = static_cast<int>(prof.outputs.size());
    for (const OpToken& op : list) {
      for (int k = 0; k < m; ++k) {
        const Color& c = prof.inputs[static_cast<std::size_t>(k)];
        PgcKey key{Biprofile{{c}, {c}}, prof, {{1, k + 1}}, p.unit(c), op};
        std::vector<int> perm{k};
        for (int i = 0; i < m; ++i) {
          if (i != k) perm.push_back(i);
        }
        const auto r = p.compose(key);
        const OpToken expected = p.act(prof, op, perm, {});
        if (!r || *r != expected) {
          add("unit", "unit of " + c + " grafted into input " + std::to_string(k + 1) + " of " + op + " " +
                          to_string(prof) + " gives " + r.value_or("nothing") + ", expected " + expected,
              pgc_graph(key));
        }
        ++report.checked;
      }
      for (int k = 0; k < n; ++k) {
        const Color& c = prof.outputs[static_cast<std::size_t>(k)];
        PgcKey key{prof, Biprofile{{c}, {c}}, {{k + 1, 1}}, op, p.unit(c)};
        std::vector<int> perm;
        for (int i = 0; i < n; ++i) {
          if (i != k) perm.push_back(i);
        }
        perm.push_back(k);
        const auto r = p.compose(key);
        const OpToken expected = p.act(prof, op, {}, perm);
        if (!r || *r != expected) {
          add("unit", "unit of " + c + " grafted onto output " + std::to_string(k + 1) + " of " + op + " " +
                          to_string(prof) + " gives " + r.value_or("nothing") + ", expected " + expected,
              pgc_graph(key));
        }
        ++report.checked;
      }
    }
  }

  // Equivariance of the PGC table under port relabelings of u and w.
  for (const PgcKey& key : pgc_entries(p)) {
    const auto r = p.compose(key);
    if (!r) {
      add("structure", "composition table incomplete: no entry for " + to_string(key), pgc_graph(key));
      continue;
    }
    const Biprofile comp = composite_profile(key);
    const auto [li, lo] = composite_legs(key);
    for (int vertex = 0; vertex < 2; ++vertex) {
      for (bool input : {true, false}) {
        const Biprofile& prof = vertex == 0 ? key.u : key.w;
        const std::size_t n = input ? prof.inputs.size() : prof.outputs.size();
        for (std::size_t k = 0; k + 1 < n; ++k) {
          const int kk = static_cast<int>(k);
          PgcKey moved = key;
          Biprofile& mp = vertex == 0 ? moved.u : moved.w;
          auto& xs = input ? mp.inputs : mp.outputs;
          std::swap(xs[k], xs[k + 1]);
          (vertex == 0 ? moved.op_u : moved.op_w) = p.swap(prof, vertex == 0 ? key.op_u : key.op_w, input, kk);
          auto relabel = [&](int port) { return port == kk + 1 ? kk + 2 : port == kk + 2 ? kk + 1 : port; };
          // Only u's outputs and w's inputs appear in grafts.
          if (vertex == 0 && !input) {
            for (auto& g : moved.grafts) g.first = relabel(g.first);
          }
          if (vertex == 1 && input) {
            for (auto& g : moved.grafts) g.second = relabel(g.second);
          }
          std::sort(moved.grafts.begin(), moved.grafts.end());
          const auto [mi, mo] = composite_legs(moved);
          // Leg i of the moved composite is, in the original numbering,
          // (vertex, relabel(port)) on the moved side.
          auto perm_of = [&](const LegList& moved_legs, const LegList& legs, bool legs_input) {
            std::vector<int> perm;
            for (auto [v, port] : moved_legs) {
              const int orig = (v == vertex && input == legs_input) ? relabel(port) : port;
              perm.push_back(static_cast<int>(std::find(legs.begin(), legs.end(), std::make_pair(v, orig)) - legs.begin()));
            }
            return perm;
          };
          const OpToken expected = p.act(comp, *r, perm_of(mi, li, true), perm_of(mo, lo, false));
          const auto got = p.compose(moved);
          if (!got || *got != expected) {
            add("equivariance", "relabeling " + std::string(input ? "inputs " : "outputs ") + std::to_string(k + 1) +
                                    "," + std::to_string(k + 2) + " of " + (vertex == 0 ? "u" : "w") + " in " +
                                    to_string(key) + " gives " + got.value_or("nothing") + ", expected " + expected,
                pgc_graph(key));
          }
          ++report.checked;
        }
      }
    }
  }

  // Associativity over decorated shapes.
  if (graph_bound >= 3) {
    CatalogOptions options;
    options.max_vertices = graph_bound;
    options.max_vertex_in = p.max_inputs;
    options.max_vertex_out = p.max_outputs;
    options.admit = [&](const WiringGraph& g) { return arity_bounded(g, p.max_inputs, p.max_outputs); };
    const ShapeCatalog catalog(options);
    for (const WiringGraph& g : catalog.shapes()) {
      if (g.num_vertices() < 3) continue;
      for (const PDecoration& d : nerve(p, g)) {
        ++report.checked;
        try {
          const auto results = evaluate_all_orders(p, d);
          if (results.size() > 1) {
            add("associativity", "contraction orders disagree (" + join({results.begin(), results.end()}, ", ") +
                                     ") on decoration " + encode_decoration(g, d),
                g);
          }
        } catch (const Error& e) {
          add("associativity", std::string(e.what()) + " on decoration " + encode_decoration(g, d), g);
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Nerve

std::vector<PDecoration> nerve(const FiniteProperad& p, const WiringGraph& g) {
  for (const Vertex& v : g.vertices()) {
    if (v.in_arity > p.max_inputs || v.out_arity > p.max_outputs) {
      throw Error("arity overflow: vertex " + v.id + " exceeds the properad's arity bound");
    }
  }
  std::vector<PDecoration> out;
  const auto& edges = g.edges();
  const auto& vertices = g.vertices();
  // Vertices become checkable once their last incident edge is colored.
  std::vector<std::vector<std::size_t>> ready(edges.size());
  std::vector<Color> coloring(edges.size());
  auto profile_of = [&](std::size_t vi) {
    Biprofile b;
    for (const auto& e : g.in_edges(vertices[vi].id)) b.inputs.push_back(coloring[g.edge_index(e)]);
    for (const auto& e : g.out_edges(vertices[vi].id)) b.outputs.push_back(coloring[g.edge_index(e)]);
    return b;
  };
  std::vector<const std::vector<OpToken>*> choices(vertices.size(), nullptr);
  for (std::size_t vi = 0; vi < vertices.size(); ++vi) {
    if (vertices[vi].in_arity + vertices[vi].out_arity == 0) {
      // An isolated vertex: its operations are those of the empty profile.
      choices[vi] = &p.ops_of(Biprofile{});
      if (choices[vi]->empty()) return out;
      continue;
    }
    std::size_t last = 0;
    for (const auto& e : g.in_edges(vertices[vi].id)) last = std::max(last, g.edge_index(e));
    for (const auto& e : g.out_edges(vertices[vi].id)) last = std::max(last, g.edge_index(e));
    ready[last].push_back(vi);
  }
  auto emit = [&]() {
    std::vector<std::size_t> idx(vertices.size(), 0);
    while (true) {
      PDecoration d;
      d.shape = g;
      for (std::size_t i = 0; i < edges.size(); ++i) d.edge_decoration[edges[i].id] = coloring[i];
      for (std::size_t vi = 0; vi < vertices.size(); ++vi) d.vertex_decoration[vertices[vi].id] = (*choices[vi])[idx[vi]];
      out.push_back(std::move(d));
      std::size_t pos = 0;
      while (pos < vertices.size() && idx[pos] + 1 == choices[pos]->size()) idx[pos++] = 0;
      if (pos == vertices.size()) break;
      ++idx[pos];
    }
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == edges.size()) {
      emit();
      return;
    }
    for (const Color& c : p.colors) {
      if (edges[i].color && *edges[i].color != c) continue;
      coloring[i] = c;
      bool ok = true;
      for (std::size_t vi : ready[i]) {
        choices[vi] = &p.ops_of(profile_of(vi));
        if (choices[vi]->empty()) {
          ok = false;
          break;
        }
      }
      if (ok) rec(i + 1);
    }
  };
  rec(0);
  return out;
}

PDecoration nerve_restrict(const FiniteProperad& p, const GammaMorphism& f, const PDecoration& x) {
  auto color_at = [&](const EdgeId& e) -> Color {
    auto it = x.edge_decoration.find(e);
    if (it != x.edge_decoration.end()) return it->second;
    const auto& c = f.target->edge(e).color;
    if (!c) throw Error("edge " + e + " carries no color");
    return *c;
  };
  PDecoration out;
  out.shape = *f.source;
  for (const Edge& e : f.source->edges()) out.edge_decoration[e.id] = color_at(f.f0.at(e.id));
  for (const Vertex& v : f.source->vertices()) {
    const DecoratedGraph& img = f.f1.at(v.id);
    PDecoration piece;
    piece.shape = img.shape;
    for (const Edge& e : img.shape.edges()) piece.edge_decoration[e.id] = color_at(img.edge_decoration.at(e.id));
    for (const Vertex& s : img.shape.vertices()) {
      piece.vertex_decoration[s.id] = x.vertex_decoration.at(img.vertex_decoration.at(s.id));
    }
    out.vertex_decoration[v.id] = evaluate(p, piece);
  }
  return out;
}

struct EncodedRestriction::Piece {
  enum class Kind { unit, single, general } kind = Kind::unit;
  std::size_t color = 0;  // unit: target edge index
  std::size_t host = 0;   // single: target vertex index
  std::vector<std::size_t> in_colors;
  std::vector<std::size_t> out_colors;
  std::vector<int> in_perm;
  std::vector<int> out_perm;
  // general: the piece with target indices of its edges and vertices
  WiringGraph graph;
  std::vector<std::size_t> edges;
  std::vector<std::size_t> vertices;
};

EncodedRestriction::EncodedRestriction(const FiniteProperad& p, const GammaMorphism& f)
    : p_(&p), target_edges_(f.target->num_edges()), target_vertices_(f.target->num_vertices()) {
  const WiringGraph& target = *f.target;
  const WiringGraph& source = *f.source;
  for (const Edge& e : source.edges()) edges_.push_back(target.edge_index(f.f0.at(e.id)));
  for (const Vertex& v : source.vertices()) {
    const DecoratedGraph& img = f.f1.at(v.id);
    const WiringGraph& piece = img.shape;
    auto color_of = [&](const EdgeId& e) { return target.edge_index(img.edge_decoration.at(e)); };
    Piece out;
    if (piece.num_vertices() == 0) {
      out.kind = Piece::Kind::unit;
      out.color = color_of(piece.edges().front().id);
    } else if (piece.num_vertices() == 1) {
      // A single operation with its legs reordered.
      out.kind = Piece::Kind::single;
      const VertexId& s = piece.vertices().front().id;
      out.host = target.vertex_index(img.vertex_decoration.at(s));
      const auto ins = piece.in_edges(s);
      const auto outs = piece.out_edges(s);
      for (const auto& e : ins) out.in_colors.push_back(color_of(e));
      for (const auto& e : outs) out.out_colors.push_back(color_of(e));
      auto perm = [](const std::vector<EdgeId>& legs, const std::vector<EdgeId>& ports) {
        std::vector<int> r;
        for (const auto& e : legs) r.push_back(static_cast<int>(std::find(ports.begin(), ports.end(), e) - ports.begin()));
        return r;
      };
      out.in_perm = perm(piece.inputs(), ins);
      out.out_perm = perm(piece.outputs(), outs);
    } else {
      out.kind = Piece::Kind::general;
      out.graph = piece;
      for (const Edge& e : piece.edges()) out.edges.push_back(color_of(e.id));
      for (const Vertex& w : piece.vertices()) out.vertices.push_back(target.vertex_index(img.vertex_decoration.at(w.id)));
    }
    pieces_.push_back(std::move(out));
  }
}

EncodedRestriction::~EncodedRestriction() = default;
EncodedRestriction::EncodedRestriction(EncodedRestriction&&) noexcept = default;

std::string EncodedRestriction::operator()(const std::string& x) const {
  const auto bar = x.find('|');
  if (bar == std::string::npos) throw Error("malformed decoration '" + x + "'");
  auto split = [&](std::size_t from, std::size_t to) {
    std::vector<std::string> out;
    if (from >= to) return out;
    std::size_t start = from;
    for (std::size_t i = from; i <= to; ++i) {
      if (i == to || x[i] == ',') {
        out.push_back(x.substr(start, i - start));
        start = i + 1;
      }
    }
    return out;
  };
  const auto colors = split(0, bar);
  const auto ops = split(bar + 1, x.size());
  if (colors.size() != target_edges_ || ops.size() != target_vertices_) {
    throw Error("decoration '" + x + "' does not fit the graph");
  }
  std::string out;
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (k) out += ',';
    out += colors[edges_[k]];
  }
  out += '|';
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    if (k) out += ',';
    const Piece& piece = pieces_[k];
    switch (piece.kind) {
      case Piece::Kind::unit:
        out += p_->unit(colors[piece.color]);
        break;
      case Piece::Kind::single: {
        Biprofile b;
        for (std::size_t c : piece.in_colors) b.inputs.push_back(colors[c]);
        for (std::size_t c : piece.out_colors) b.outputs.push_back(colors[c]);
        const OpToken& op = ops[piece.host];
        if (!p_->has_op(b, op)) throw Error(op + " is not an operation of " + to_string(b));
        out += p_->act(b, op, piece.in_perm, piece.out_perm);
        break;
      }
      case Piece::Kind::general: {
        PDecoration d;
        d.shape = piece.graph;
        for (std::size_t e = 0; e < piece.edges.size(); ++e) {
          d.edge_decoration[piece.graph.edges()[e].id] = colors[piece.edges[e]];
        }
        for (std::size_t v = 0; v < piece.vertices.size(); ++v) {
          d.vertex_decoration[piece.graph.vertices()[v].id] = ops[piece.vertices[v]];
        }
        out += evaluate(*p_, d);
        break;
      }
    }
  }
  return out;
}

std::string nerve_restrict_encoded(const FiniteProperad& p, const GammaMorphism& f, const std::string& x) {
  return EncodedRestriction(p, f)(x);
}

std::string encode_decoration(const WiringGraph& g, const PDecoration& d) {
  std::vector<std::string> cs;
  for (const Edge& e : g.edges()) {
    auto it = d.edge_decoration.find(e.id);
    cs.push_back(it != d.edge_decoration.end() ? it->second : e.color.value_or(""));
  }
  std::vector<std::string> ops;
  for (const Vertex& v : g.vertices()) ops.push_back(d.vertex_decoration.at(v.id));
  return join(cs, ",") + "|" + join(ops, ",");
}

PDecoration decode_decoration(const WiringGraph& g, const std::string& text) {
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::string cur;
    for (char ch : s) {
      if (ch == ',') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
    out.push_back(cur);
    return out;
  };
  const auto bar = text.find('|');
  if (bar == std::string::npos) throw Error("malformed decoration '" + text + "'");
  const auto cs = split(text.substr(0, bar));
  const auto ops = split(text.substr(bar + 1));
  if (cs.size() != g.num_edges() || ops.size() != g.num_vertices()) {
    throw Error("decoration '" + text + "' does not fit the graph");
  }
  PDecoration d;
  d.shape = g;
  for (std::size_t i = 0; i < cs.size(); ++i) d.edge_decoration[g.edges()[i].id] = cs[i];
  for (std::size_t i = 0; i < ops.size(); ++i) d.vertex_decoration[g.vertices()[i].id] = ops[i];
  return d;
}

// ---------------------------------------------------------------------------
// Families

FiniteProperad residue_properad(const RandomProperadOptions& o, const std::vector<int>& weight,
                                const std::vector<int>& charge) {
  if (o.colors < 1 || o.colors > 26 || o.ops < 1 || o.weights < 1) throw Error("invalid residue properad options");
  if (weight.size() != static_cast<std::size_t>(o.colors) || charge.size() != weight.size()) {
    throw Error("one weight and one charge per color expected");
  }
  FiniteProperad p;
  p.max_inputs = o.max_inputs;
  p.max_outputs = o.max_outputs;
  std::map<Color, int> w;
  std::map<Color, int> q;
  for (int i = 0; i < o.colors; ++i) {
    const Color c(1, static_cast<char>('a' + i));
    p.colors.push_back(c);
    w[c] = mod(weight[static_cast<std::size_t>(i)], o.weights);
    q[c] = mod(charge[static_cast<std::size_t>(i)], o.ops);
  }
  std::vector<OpToken> residues;
  for (int i = 0; i < o.ops; ++i) residues.push_back(std::to_string(i));
  auto balanced = [w, r = o.weights](const Biprofile& b) {
    long s = 0;
    for (const auto& c : b.inputs) s += w.at(c);
    for (const auto& c : b.outputs) s -= w.at(c);
    return mod(s, r) == 0;
  };
  // All color lists up to the bound.
  std::vector<std::vector<std::vector<Color>>> lists(static_cast<std::size_t>(std::max(o.max_inputs, o.max_outputs) + 1));
  lists[0].push_back({});
  for (std::size_t len = 1; len < lists.size(); ++len) {
    for (const auto& prev : lists[len - 1]) {
      for (const Color& c : p.colors) {
        auto next = prev;
        next.push_back(c);
        lists[len].push_back(std::move(next));
      }
    }
  }
  for (int m = 0; m <= o.max_inputs; ++m) {
    for (int n = 0; n <= o.max_outputs; ++n) {
      for (const auto& ins : lists[static_cast<std::size_t>(m)]) {
        for (const auto& outs : lists[static_cast<std::size_t>(n)]) {
          Biprofile b{ins, outs};
          if (balanced(b)) p.ops[b] = residues;
        }
      }
    }
  }
  for (const Color& c : p.colors) p.units[c] = std::to_string(mod(-q[c], o.ops));
  const int m = o.ops;
  auto residue_of = [m](const OpToken& t) -> std::optional<int> {
    if (t.empty() || t.size() > 3 || !std::all_of(t.begin(), t.end(), ::isdigit)) return std::nullopt;
    const int v = std::stoi(t);
    if (v >= m) return std::nullopt;
    return v;
  };
  p.swap_rule = [balanced, residue_of](const Biprofile& b, const OpToken& t, bool, int) -> std::optional<OpToken> {
    if (!balanced(b) || !residue_of(t)) return std::nullopt;
    return t;
  };
  p.compose_rule = [balanced, residue_of, q, m, mi = o.max_inputs, mo = o.max_outputs](const PgcKey& key) -> std::optional<OpToken> {
    const auto a = residue_of(key.op_u);
    const auto b = residue_of(key.op_w);
    if (!a || !b || !balanced(key.u) || !balanced(key.w)) return std::nullopt;
    const Biprofile comp = composite_profile(key);
    if (static_cast<int>(comp.inputs.size()) > mi || static_cast<int>(comp.outputs.size()) > mo) return std::nullopt;
    long s = *a + *b;
    for (auto [o, i] : key.grafts) s += q.at(key.u.outputs[static_cast<std::size_t>(o - 1)]);
    (void)comp;
    return std::to_string(mod(s, m));
  };
  return p;
}

FiniteProperad random_properad(std::mt19937_64& rng, const RandomProperadOptions& bounds) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  RandomProperadOptions o = bounds;
  o.colors = pick(1, bounds.colors);
  o.ops = pick(1, bounds.ops);
  o.weights = pick(1, o.colors);
  std::vector<int> weight;
  std::vector<int> charge;
  for (int i = 0; i < o.colors; ++i) {
    weight.push_back(pick(0, o.weights - 1));
    charge.push_back(pick(0, o.ops - 1));
  }
  return residue_properad(o, weight, charge);
}

FiniteProperad terminal_properad(int max_inputs, int max_outputs) {
  RandomProperadOptions o;
  o.colors = 1;
  o.ops = 1;
  o.weights = 1;
  o.max_inputs = max_inputs;
  o.max_outputs = max_outputs;
  return residue_properad(o, {0}, {0});
}

bool arity_bounded(const WiringGraph& g, int max_inputs, int max_outputs) {
  const auto& inc = g.incidence();
  const std::size_t n = g.num_vertices();
  if (n == 0) return max_inputs >= 1 && max_outputs >= 1;
  if (n > 20) throw Error("arity_bounded: graph too large");
  std::vector<unsigned> adj(n, 0);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const int t = inc.tail_vertex[e];
    const int h = inc.head_vertex[e];
    if (t >= 0 && h >= 0) {
      adj[static_cast<std::size_t>(t)] |= 1u << h;
      adj[static_cast<std::size_t>(h)] |= 1u << t;
    }
  }
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    // Connected?
    unsigned seen = mask & (~mask + 1);
    unsigned frontier = seen;
    while (frontier) {
      unsigned next = 0;
      for (std::size_t v = 0; v < n; ++v) {
        if (frontier & (1u << v)) next |= adj[v] & mask;
      }
      frontier = next & ~seen;
      seen |= next;
    }
    if (seen != mask) continue;
    int ins = 0;
    int outs = 0;
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const int t = inc.tail_vertex[e];
      const int h = inc.head_vertex[e];
      const bool tin = t >= 0 && (mask & (1u << t));
      const bool hin = h >= 0 && (mask & (1u << h));
      if (hin && !tin) ++ins;
      if (tin && !hin) ++outs;
    }
    if (ins > max_inputs || outs > max_outputs) return false;
  }
  return true;
}

}  // namespace properad
