#include "properad/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "properad/error.hpp"
#include "properad/isomorphism.hpp"
#include "properad/substitution.hpp"

namespace properad {

namespace {

constexpr char kSep = '\x1f';
constexpr std::size_t kMaxWitnesses = 25;

std::string join_values(const std::vector<std::string>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += kSep;
    out += values[i];
  }
  return out;
}

std::string show_values(const std::vector<std::string>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += "; ";
    out += values[i];
  }
  return out + "]";
}

CatalogOptions catalog_options(const TruncationOptions& t) {
  CatalogOptions c;
  c.max_vertices = t.max_vertices;
  c.max_edges = t.max_edges;
  c.max_vertex_in = t.max_inputs;
  c.max_vertex_out = t.max_outputs;
  if (t.max_inputs >= 0 && t.max_outputs >= 0) {
    const int in = t.max_inputs;
    const int out = t.max_outputs;
    c.admit = [in, out](const WiringGraph& g) { return arity_bounded(g, in, out); };
  }
  return c;
}

// Tuples (one candidate index per slot) satisfying every constraint; a
// constraint compares a value of slot i's candidate with one of slot j's
// candidate (i < j).
struct JoinConstraint {
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<std::string> left;   // per candidate of slot i
  std::vector<std::string> right;  // per candidate of slot j
};

std::vector<std::vector<std::size_t>> join(const std::vector<std::size_t>& sizes,
                                           const std::vector<JoinConstraint>& constraints) {
  const std::size_t n = sizes.size();
  std::vector<std::vector<const JoinConstraint*>> by_slot(n);
  for (const auto& c : constraints) {
    if (c.i >= c.j || c.j >= n) throw Error("malformed join constraint");
    by_slot[c.j].push_back(&c);
  }
  std::vector<std::map<std::string, std::vector<std::size_t>>> buckets(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t x = 0; x < sizes[s]; ++x) {
      std::vector<std::string> sig;
      for (const auto* c : by_slot[s]) sig.push_back(c->right[x]);
      buckets[s][join_values(sig)].push_back(x);
    }
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> chosen(n);
  std::function<void(std::size_t)> go = [&](std::size_t s) {
    if (s == n) {
      out.push_back(chosen);
      return;
    }
    std::vector<std::string> need;
    for (const auto* c : by_slot[s]) need.push_back(c->left[chosen[c->i]]);
    auto it = buckets[s].find(join_values(need));
    if (it == buckets[s].end()) return;
    for (std::size_t x : it->second) {
      chosen[s] = x;
      go(s + 1);
    }
  };
  go(0);
  return out;
}

bool contains(const std::vector<std::string>& sorted, const std::string& x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

}  // namespace

// ---------------------------------------------------------------------------
// ShapeIndex

std::string arrow_key(const ShapeIndex& index, const GammaMorphism& f) {
  return std::to_string(index.index_of(*f.source)) + ">" + std::to_string(index.index_of(*f.target)) + ":" +
         morphism_key(f);
}

ShapeIndex::ShapeIndex(const TruncationOptions& options)
    : options_(options), catalog_(catalog_options(options)) {
  for (std::size_t i = 0; i < catalog_.size(); ++i) {
    graphs_.push_back(std::make_shared<const WiringGraph>(catalog_.shape(i)));
    by_pointer_[graphs_.back().get()] = i;
  }
  auto a = find(make_exceptional_edge());
  if (!a) throw Error("truncation without the exceptional edge");
  arrow_ = *a;
}

std::optional<std::size_t> ShapeIndex::find(const WiringGraph& g) const {
  const long i = catalog_.find(g);
  if (i < 0) return std::nullopt;
  return static_cast<std::size_t>(i);
}

std::size_t ShapeIndex::index_of(const WiringGraph& g) const {
  auto it = by_pointer_.find(&g);
  if (it != by_pointer_.end()) return it->second;
  auto i = find(g);
  if (!i || !(*graphs_[*i] == g)) throw Error("graph is not a shape of the truncation");
  return *i;
}

GammaMorphism ShapeIndex::to_shape(std::shared_ptr<const WiringGraph> g) const {
  auto it = by_pointer_.find(g.get());
  if (it != by_pointer_.end()) return identity_morphism(g);
  Representative rep = canonical_representative(*g);
  auto i = find(rep.graph);
  if (!i) throw Error("graph lies outside the truncation");
  return morphism_from_iso(g, graphs_[*i], rep.from_original);
}

GammaMorphism ShapeIndex::transport(const GammaMorphism& f) const {
  GammaMorphism out = f;
  if (!by_pointer_.count(f.source.get())) {
    Representative rep = canonical_representative(*f.source);
    auto i = find(rep.graph);
    if (!i) throw Error("graph lies outside the truncation");
    out = compose(out, morphism_from_iso(graphs_[*i], f.source, inverse(rep.from_original)));
  }
  if (!by_pointer_.count(f.target.get())) out = compose(to_shape(f.target), out);
  return out;
}

const std::vector<GammaMorphism>& ShapeIndex::hom(std::size_t from, std::size_t to) const {
  const auto key = std::make_pair(from, to);
  auto it = hom_.find(key);
  if (it != hom_.end()) return it->second;
  auto t = targets_.find(to);
  if (t == targets_.end()) t = targets_.emplace(to, HomTarget(graph(to))).first;
  return hom_.emplace(key, hom_set(graph(from), t->second)).first->second;
}

const std::vector<GammaMorphism>& ShapeIndex::automorphisms(std::size_t i) const {
  auto it = automorphisms_.find(i);
  if (it != automorphisms_.end()) return it->second;
  std::vector<GammaMorphism> out;
  for (const auto& f : hom(i, i)) {
    if (is_isomorphism(f)) out.push_back(f);
  }
  return automorphisms_.emplace(i, std::move(out)).first->second;
}

std::string image_signature(const GammaMorphism& f) {
  std::set<std::string> edges;
  std::set<std::string> vertices;
  for (const auto& [e, t] : f.f0) edges.insert(t);
  for (const auto& [v, d] : f.f1) {
    for (const auto& [w, t] : d.vertex_decoration) vertices.insert(t);
  }
  std::string out;
  for (const auto& e : edges) out += e + ",";
  out += "|";
  for (const auto& v : vertices) out += v + ",";
  return out;
}

const std::vector<ShapeIndex::Face>& ShapeIndex::faces(std::size_t i) const {
  auto it = faces_.find(i);
  if (it != faces_.end()) return it->second;
  std::vector<Face> out;
  std::set<std::string> seen;
  for (const GeneratorMap& gen : enumerate_cofaces_into(*graph(i))) {
    auto s = find(gen.source);
    if (!s) continue;
    GammaMorphism m = morphism_from_generator(gen);
    m.target = graph(i);
    m = transport(m);
    if (!seen.insert(image_signature(m)).second) continue;
    out.push_back(Face{std::move(m), *s, gen.kind == GeneratorKind::inner_coface});
  }
  std::stable_partition(out.begin(), out.end(), [](const Face& f) { return f.inner; });
  return faces_.emplace(i, std::move(out)).first->second;
}

const std::vector<GammaMorphism>& ShapeIndex::codegeneracies(std::size_t i) const {
  auto it = codegeneracies_.find(i);
  if (it != codegeneracies_.end()) return it->second;
  std::vector<GammaMorphism> out;
  const WiringGraph& g = *graph(i);
  for (const Vertex& v : g.vertices()) {
    if (v.in_arity != 1 || v.out_arity != 1) continue;
    GeneratorMap gen = codegeneracy(g, v.id);
    if (!find(gen.target)) continue;
    GammaMorphism m = morphism_from_generator(gen);
    m.source = graph(i);
    out.push_back(transport(m));
  }
  return codegeneracies_.emplace(i, std::move(out)).first->second;
}

GammaMorphism ShapeIndex::subgraph_inclusion(std::size_t corolla, std::size_t i,
                                             const std::vector<VertexId>& vertices,
                                             const std::vector<EdgeId>& in_legs,
                                             const std::vector<EdgeId>& out_legs) const {
  const WiringGraph& c = *graph(corolla);
  if (c.num_vertices() != 1) throw Error("subgraph inclusion needs a corolla shape");
  const VertexId& v0 = c.vertices()[0].id;
  const auto ins = c.in_edges(v0);
  const auto outs = c.out_edges(v0);
  if (ins.size() != in_legs.size() || outs.size() != out_legs.size()) {
    throw Error("subgraph inclusion: leg count mismatch");
  }
  GammaMorphism f;
  f.source = graph(corolla);
  f.target = graph(i);
  for (std::size_t k = 0; k < ins.size(); ++k) f.f0[ins[k]] = in_legs[k];
  for (std::size_t k = 0; k < outs.size(); ++k) f.f0[outs[k]] = out_legs[k];
  f.f1[v0] = decorated_subgraph(*graph(i), vertices, in_legs, out_legs);
  return f;
}

const std::vector<GammaMorphism>& ShapeIndex::corolla_inclusions(std::size_t i) const {
  auto it = corollas_.find(i);
  if (it != corollas_.end()) return it->second;
  std::vector<GammaMorphism> out;
  const WiringGraph& g = *graph(i);
  for (const Vertex& v : g.vertices()) {
    auto c = find(make_corolla(v.in_arity, v.out_arity));
    if (!c) throw Error("corolla outside the truncation");
    out.push_back(subgraph_inclusion(*c, i, {v.id}, g.in_edges(v.id), g.out_edges(v.id)));
  }
  return corollas_.emplace(i, std::move(out)).first->second;
}

GammaMorphism ShapeIndex::edge_inclusion(std::size_t i, const EdgeId& e) const {
  if (!graph(i)->has_edge(e)) throw Error("unknown edge '" + e + "'");
  GammaMorphism f;
  f.source = graph(arrow_);
  f.target = graph(i);
  f.f0[graph(arrow_)->edges()[0].id] = e;
  return f;
}

GammaMorphism ShapeIndex::corolla_transposition(std::size_t corolla, bool input, int k) const {
  const WiringGraph& c = *graph(corolla);
  if (c.num_vertices() != 1) throw Error("transposition needs a corolla shape");
  const VertexId& v0 = c.vertices()[0].id;
  auto ins = c.in_edges(v0);
  auto outs = c.out_edges(v0);
  auto& side = input ? ins : outs;
  if (k < 0 || static_cast<std::size_t>(k) + 1 >= side.size()) throw Error("transposition out of range");
  std::swap(side[k], side[k + 1]);
  return subgraph_inclusion(corolla, corolla, {v0}, ins, outs);
}

const std::vector<ShapeIndex::Face>& ShapeIndex::horn_faces(std::size_t i, std::size_t beta) const {
  const auto key = std::make_pair(i, beta);
  auto it = horn_faces_.find(key);
  if (it != horn_faces_.end()) return it->second;
  const auto& all = faces(i);
  if (beta >= all.size()) throw Error("no face " + std::to_string(beta) + " of " + form(i));
  std::vector<Face> out;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (k != beta) out.push_back(all[k]);
  }
  return horn_faces_.emplace(key, std::move(out)).first->second;
}

const std::vector<HornConstraint>& ShapeIndex::horn_constraints(std::size_t i, std::size_t beta) const {
  const auto key = std::make_pair(i, beta);
  auto it = horn_constraints_.find(key);
  if (it != horn_constraints_.end()) return it->second;
  const auto& fs = horn_faces(i, beta);
  // Two faces meet in a union of pieces, each the image of a positive map;
  // agreement on the pieces is agreement on the intersection.
  std::map<std::string, std::vector<std::pair<std::size_t, const GammaMorphism*>>> by_key;
  for (std::size_t f = 0; f < fs.size(); ++f) {
    const std::size_t k = fs[f].source;
    for (std::size_t j = 0; j < size(); ++j) {
      if (degree(j) >= degree(k)) continue;
      for (const auto& a : hom(j, k)) {
        if (!is_positive(a)) continue;
        by_key[std::to_string(j) + ":" + morphism_key(compose(fs[f].map, a))].push_back({f, &a});
      }
    }
  }
  std::vector<HornConstraint> out;
  std::set<std::string> seen;
  for (const auto& [k, entries] : by_key) {
    const auto& [f0, a0] = entries.front();
    for (const auto& [f, a] : entries) {
      if (f == f0) continue;
      const std::string sig = std::to_string(f0) + ":" + std::to_string(f) + ":" +
                              image_signature(compose(fs[f0].map, *a0)) + ":" + form(index_of(*a0->source));
      if (!seen.insert(sig).second) continue;
      out.push_back(HornConstraint{f0, f, *a0, *a});
    }
  }
  return horn_constraints_.emplace(key, std::move(out)).first->second;
}

// ---------------------------------------------------------------------------
// Graphical sets

std::vector<std::string> GraphicalSet::restrict_all(const GammaMorphism& f, const std::vector<std::string>& xs) const {
  std::vector<std::string> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(restrict(f, x));
  return out;
}

namespace {

class RepresentableSet : public GraphicalSet {
 public:
  RepresentableSet(std::shared_ptr<const ShapeIndex> index, std::size_t base)
      : index_(std::move(index)), base_(base) {}

  std::shared_ptr<const ShapeIndex> index() const override { return index_; }

  const std::vector<std::string>& elements(std::size_t shape) const override { return table(shape).keys; }

  std::string restrict(const GammaMorphism& f, const std::string& x) const override {
    const auto& t = table(index_->index_of(*f.target));
    auto it = t.maps.find(x);
    if (it == t.maps.end()) throw Error("not an element: " + x);
    return morphism_key(compose(it->second, f));
  }

 private:
  struct Table {
    std::vector<std::string> keys;
    std::map<std::string, GammaMorphism> maps;
  };

  const Table& table(std::size_t shape) const {
    auto it = tables_.find(shape);
    if (it != tables_.end()) return it->second;
    Table t;
    for (const auto& f : index_->hom(shape, base_)) t.maps.emplace(morphism_key(f), f);
    for (const auto& [k, f] : t.maps) t.keys.push_back(k);
    return tables_.emplace(shape, std::move(t)).first->second;
  }

  std::shared_ptr<const ShapeIndex> index_;
  std::size_t base_;
  mutable std::map<std::size_t, Table> tables_;
};

class NerveSet : public GraphicalSet {
 public:
  NerveSet(std::shared_ptr<const ShapeIndex> index, FiniteProperad p)
      : index_(std::move(index)), p_(std::move(p)), elements_(index_->size()), done_(index_->size(), false) {}

  std::shared_ptr<const ShapeIndex> index() const override { return index_; }

  const std::vector<std::string>& elements(std::size_t shape) const override {
    if (!done_.at(shape)) {
      const WiringGraph& g = *index_->graph(shape);
      bool fits = true;
      for (const Vertex& v : g.vertices()) {
        fits = fits && v.in_arity <= p_.max_inputs && v.out_arity <= p_.max_outputs;
      }
      std::vector<std::string> out;
      if (fits) {
        for (const auto& d : nerve(p_, g)) out.push_back(encode_decoration(g, d));
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      elements_[shape] = std::move(out);
      done_[shape] = true;
    }
    return elements_[shape];
  }

  std::string restrict(const GammaMorphism& f, const std::string& x) const override {
    return nerve_restrict_encoded(p_, f, x);
  }

  std::vector<std::string> restrict_all(const GammaMorphism& f, const std::vector<std::string>& xs) const override {
    const EncodedRestriction r(p_, f);
    std::vector<std::string> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(r(x));
    return out;
  }

 private:
  std::shared_ptr<const ShapeIndex> index_;
  FiniteProperad p_;
  mutable std::vector<std::vector<std::string>> elements_;
  mutable std::vector<bool> done_;
};

class MutatedSet : public GraphicalSet {
 public:
  explicit MutatedSet(GraphicalSetPtr base) : base_(std::move(base)), elements_(base_->index()->size()) {
    for (std::size_t i = 0; i < elements_.size(); ++i) elements_[i] = base_->elements(i);
  }

  std::shared_ptr<const ShapeIndex> index() const override { return base_->index(); }
  const std::vector<std::string>& elements(std::size_t shape) const override { return elements_.at(shape); }

  std::string restrict(const GammaMorphism& f, const std::string& x) const override {
    return restrict_all(f, {x}).front();
  }

  std::vector<std::string> restrict_all(const GammaMorphism& f, const std::vector<std::string>& xs) const override {
    if (doubled_.empty()) return base_->restrict_all(f, xs);
    // Restrict the originals of doubled elements in the same batch.
    std::vector<std::string> plain;
    for (const auto& x : xs) plain.push_back(twin(f, x).value_or(x));
    auto out = base_->restrict_all(f, plain);
    const ShapeIndex& index = *base_->index();
    const auto& below = doubled_[index.index_of(*f.source)];
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (twin(f, xs[k]) && below.count(out[k])) out[k] += "*";
    }
    return out;
  }

  void remove(std::size_t shape, const std::string& x) {
    const auto up = closure(shape, x);
    for (std::size_t k = 0; k < elements_.size(); ++k) {
      auto& e = elements_[k];
      e.erase(std::remove_if(e.begin(), e.end(), [&](const std::string& y) { return up[k].count(y) != 0; }),
              e.end());
    }
  }

  // Glues a second copy of the closure along the rest of the set.
  void double_up(std::size_t shape, const std::string& x) {
    doubled_ = closure(shape, x);
    for (std::size_t k = 0; k < elements_.size(); ++k) {
      for (const auto& y : doubled_[k]) elements_[k].push_back(y + "*");
      std::sort(elements_[k].begin(), elements_[k].end());
    }
  }

 private:
  // Every graphex with a restriction equal to x: the complement of a
  // subpresheaf.
  std::vector<std::set<std::string>> closure(std::size_t shape, const std::string& x) const {
    const ShapeIndex& index = *base_->index();
    using Node = std::pair<std::size_t, std::string>;
    // Reverse restriction edges: z <- y whenever z is a generator restriction of y.
    std::map<Node, std::vector<Node>> above;
    for (const auto& g : TabulatedSet::generators(index)) {
      const std::size_t k = index.index_of(*g.target);
      const std::size_t j = index.index_of(*g.source);
      for (const auto& y : elements_[k]) above[{j, base_->restrict(g, y)}].push_back({k, y});
    }
    std::vector<std::set<std::string>> up(elements_.size());
    std::vector<Node> todo{{shape, x}};
    up[shape].insert(x);
    while (!todo.empty()) {
      const Node n = todo.back();
      todo.pop_back();
      auto it = above.find(n);
      if (it == above.end()) continue;
      for (const auto& m : it->second) {
        if (up[m.first].insert(m.second).second) todo.push_back(m);
      }
    }
    return up;
  }

  // The original of a doubled element at f's target.
  std::optional<std::string> twin(const GammaMorphism& f, const std::string& x) const {
    if (doubled_.empty() || x.empty() || x.back() != '*') return std::nullopt;
    std::string t = x.substr(0, x.size() - 1);
    if (!doubled_[base_->index()->index_of(*f.target)].count(t)) return std::nullopt;
    return t;
  }

  GraphicalSetPtr base_;
  std::vector<std::vector<std::string>> elements_;
  std::vector<std::set<std::string>> doubled_;
};

}  // namespace

GraphicalSetPtr representable(std::shared_ptr<const ShapeIndex> index, const WiringGraph& g) {
  auto i = index->find(g);
  if (!i) throw Error("graph lies outside the truncation");
  return std::make_shared<RepresentableSet>(std::move(index), *i);
}

GraphicalSetPtr nerve_set(std::shared_ptr<const ShapeIndex> index, FiniteProperad p) {
  return std::make_shared<NerveSet>(std::move(index), std::move(p));
}

GraphicalSetPtr puncture(GraphicalSetPtr base, std::size_t shape, const std::string& x) {
  if (!contains(base->elements(shape), x)) throw Error("not an element: " + x);
  auto out = std::make_shared<MutatedSet>(std::move(base));
  out->remove(shape, x);
  return out;
}

GraphicalSetPtr pad(GraphicalSetPtr base, std::size_t shape, const std::string& x) {
  if (!contains(base->elements(shape), x)) throw Error("not an element: " + x);
  auto out = std::make_shared<MutatedSet>(std::move(base));
  out->double_up(shape, x);
  return out;
}

// ---------------------------------------------------------------------------
// TabulatedSet

TabulatedSet::TabulatedSet(std::shared_ptr<const ShapeIndex> index)
    : index_(std::move(index)), elements_(index_->size()) {}

const std::vector<std::string>& TabulatedSet::elements(std::size_t shape) const { return elements_.at(shape); }

void TabulatedSet::set_elements(std::size_t shape, std::vector<std::string> elements) {
  std::sort(elements.begin(), elements.end());
  if (std::adjacent_find(elements.begin(), elements.end()) != elements.end()) {
    throw Error("repeated element at " + index_->form(shape));
  }
  elements_.at(shape) = std::move(elements);
}

void TabulatedSet::set_action(const GammaMorphism& generator, std::map<std::string, std::string> table) {
  GammaMorphism g = index_->transport(generator);
  const std::size_t s = index_->index_of(*g.source);
  const std::size_t t = index_->index_of(*g.target);
  for (const auto& x : elements_[t]) {
    auto it = table.find(x);
    if (it == table.end()) throw Error("action table misses element " + x);
    if (!contains(elements_[s], it->second)) throw Error("action table leaves the set: " + it->second);
  }
  const std::string key = arrow_key(*index_, g);
  actions_[key] = {std::move(g), std::move(table)};
  steps_.clear();
}

std::vector<GammaMorphism> TabulatedSet::generators(const ShapeIndex& index) {
  std::vector<GammaMorphism> out;
  std::set<std::string> seen;
  auto add = [&](const GammaMorphism& f) {
    if (seen.insert(arrow_key(index, f)).second) out.push_back(f);
  };
  for (std::size_t i = 0; i < index.size(); ++i) {
    for (const auto& f : index.faces(i)) add(f.map);
    for (const auto& s : index.codegeneracies(i)) add(s);
    for (const auto& a : index.automorphisms(i)) add(a);
  }
  return out;
}

const TabulatedSet::Step& TabulatedSet::decompose(const GammaMorphism& f, const std::string& key) const {
  auto it = steps_.find(key);
  if (it != steps_.end()) return it->second;
  const std::size_t s = index_->index_of(*f.source);
  const std::size_t t = index_->index_of(*f.target);
  const ReedyFactorization r = reedy_factorize(f);
  const std::size_t middle = r.positive.source->num_vertices();
  if (middle < index_->degree(t) || (middle == index_->degree(t) && !is_isomorphism(r.positive))) {
    for (const auto& face : index_->faces(t)) {
      for (const auto& rest : index_->hom(s, face.source)) {
        if (arrow_key(*index_, compose(face.map, rest)) == key) {
          return steps_.emplace(key, Step{face.map, rest, false}).first->second;
        }
      }
    }
  }
  if (index_->degree(s) > middle) {
    for (const auto& cd : index_->codegeneracies(s)) {
      for (const auto& rest : index_->hom(index_->index_of(*cd.target), t)) {
        if (arrow_key(*index_, compose(rest, cd)) == key) {
          return steps_.emplace(key, Step{cd, rest, true}).first->second;
        }
      }
    }
  }
  throw Error("restriction along a morphism without a tabulated factorization: " + key);
}

std::string TabulatedSet::restrict(const GammaMorphism& f, const std::string& x) const {
  const std::string key = arrow_key(*index_, f);
  auto it = actions_.find(key);
  if (it != actions_.end()) {
    auto jt = it->second.second.find(x);
    if (jt == it->second.second.end()) throw Error("not an element: " + x);
    return jt->second;
  }
  if (f.source->num_vertices() == f.target->num_vertices() && is_isomorphism(f)) {
    throw Error("no action tabulated for an automorphism: " + key);
  }
  const Step& step = decompose(f, key);
  if (step.generator_first) return restrict(step.generator, restrict(step.rest, x));
  return restrict(step.rest, restrict(step.generator, x));
}

std::shared_ptr<TabulatedSet> tabulate(const GraphicalSet& x) {
  auto index = x.index();
  auto out = std::make_shared<TabulatedSet>(index);
  for (std::size_t i = 0; i < index->size(); ++i) out->set_elements(i, x.elements(i));
  for (const auto& g : TabulatedSet::generators(*index)) {
    std::map<std::string, std::string> table;
    for (const auto& e : x.elements(index->index_of(*g.target))) table[e] = x.restrict(g, e);
    out->set_action(g, std::move(table));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parts of representables

std::string to_string(PartKind kind) {
  switch (kind) {
    case PartKind::full: return "full";
    case PartKind::boundary: return "boundary";
    case PartKind::horn: return "horn";
    case PartKind::segal_core: return "segal-core";
  }
  return "?";
}

RepresentablePart full_part(const ShapeIndex& index, std::size_t g) {
  return RepresentablePart{g, PartKind::full, std::nullopt, {identity_morphism(index.graph(g))}};
}

RepresentablePart boundary(const ShapeIndex& index, std::size_t g) {
  RepresentablePart p{g, PartKind::boundary, std::nullopt, {}};
  for (const auto& f : index.faces(g)) p.generators.push_back(f.map);
  return p;
}

RepresentablePart horn(const ShapeIndex& index, std::size_t g, std::size_t beta) {
  RepresentablePart p{g, PartKind::horn, beta, {}};
  for (const auto& f : index.horn_faces(g, beta)) p.generators.push_back(f.map);
  return p;
}

RepresentablePart segal_core(const ShapeIndex& index, std::size_t g) {
  if (g == index.arrow()) return RepresentablePart{g, PartKind::segal_core, std::nullopt, full_part(index, g).generators};
  return RepresentablePart{g, PartKind::segal_core, std::nullopt, index.corolla_inclusions(g)};
}

std::set<std::string> part_elements(const ShapeIndex& index, const RepresentablePart& part, std::size_t k) {
  std::set<std::string> out;
  for (const auto& d : part.generators) {
    for (const auto& a : index.hom(k, index.index_of(*d.source))) out.insert(morphism_key(compose(d, a)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

void CheckReport::fail(std::string check, std::string shape, std::string detail) {
  ok = false;
  if (witnesses.size() < kMaxWitnesses) witnesses.push_back({std::move(check), std::move(shape), std::move(detail)});
}

void CheckReport::merge(const CheckReport& other) {
  ok = ok && other.ok;
  checked += other.checked;
  for (const auto& w : other.witnesses) {
    if (witnesses.size() < kMaxWitnesses) witnesses.push_back(w);
  }
}

// ---------------------------------------------------------------------------
// Horns

namespace {

struct HornData {
  std::vector<std::vector<std::string>> candidates;  // per horn face
  std::vector<JoinConstraint> constraints;
};

HornData horn_data(const GraphicalSet& x, std::size_t g, std::size_t beta) {
  const ShapeIndex& index = *x.index();
  HornData d;
  for (const auto& f : index.horn_faces(g, beta)) d.candidates.push_back(x.elements(f.source));
  for (const auto& c : index.horn_constraints(g, beta)) {
    d.constraints.push_back(
        {c.i, c.j, x.restrict_all(c.a, d.candidates[c.i]), x.restrict_all(c.b, d.candidates[c.j])});
  }
  return d;
}

std::string face_tuple(const GraphicalSet& x, const std::vector<ShapeIndex::Face>& faces, const std::string& e) {
  std::vector<std::string> values;
  for (const auto& f : faces) values.push_back(x.restrict(f.map, e));
  return join_values(values);
}

CheckReport check_inner_horns(const GraphicalSet& x, int n, bool unique) {
  const ShapeIndex& index = *x.index();
  CheckReport report;
  for (std::size_t g = 0; g < index.size(); ++g) {
    if (index.degree(g) < 2 || static_cast<int>(index.degree(g)) > n) continue;
    const auto& all = index.faces(g);
    for (std::size_t beta = 0; beta < all.size(); ++beta) {
      if (!all[beta].inner) continue;
      const auto& faces = index.horn_faces(g, beta);
      std::map<std::string, std::size_t> fill;
      for (const auto& e : x.elements(g)) ++fill[face_tuple(x, faces, e)];
      const HornData d = horn_data(x, g, beta);
      std::vector<std::size_t> sizes;
      for (const auto& c : d.candidates) sizes.push_back(c.size());
      for (const auto& tuple : join(sizes, d.constraints)) {
        ++report.checked;
        std::vector<std::string> values;
        for (std::size_t k = 0; k < tuple.size(); ++k) values.push_back(d.candidates[k][tuple[k]]);
        auto it = fill.find(join_values(values));
        const std::size_t count = it == fill.end() ? 0 : it->second;
        if (count == 0 || (unique && count > 1)) {
          report.fail(count == 0 ? "inner-kan" : "unique-filler", index.form(g),
                      "horn missing the face from " + index.form(all[beta].source) + " with values " +
                          show_values(values) + " has " + std::to_string(count) + " fillers");
        }
      }
    }
  }
  return report;
}

}  // namespace

bool is_natural(const GraphicalSet& x, const HornMap& h) {
  const ShapeIndex& index = *x.index();
  const auto& faces = index.horn_faces(h.base, h.beta);
  if (h.values.size() != faces.size()) return false;
  for (std::size_t k = 0; k < faces.size(); ++k) {
    if (!contains(x.elements(faces[k].source), h.values[k])) return false;
  }
  for (const auto& c : index.horn_constraints(h.base, h.beta)) {
    if (x.restrict(c.a, h.values[c.i]) != x.restrict(c.b, h.values[c.j])) return false;
  }
  return true;
}

std::vector<HornMap> horn_maps(const GraphicalSet& x, std::size_t g, std::size_t beta) {
  const HornData d = horn_data(x, g, beta);
  std::vector<std::size_t> sizes;
  for (const auto& c : d.candidates) sizes.push_back(c.size());
  std::vector<HornMap> out;
  for (const auto& tuple : join(sizes, d.constraints)) {
    HornMap h{g, beta, {}};
    for (std::size_t k = 0; k < tuple.size(); ++k) h.values.push_back(d.candidates[k][tuple[k]]);
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<std::string> fillers(const GraphicalSet& x, const HornMap& h) {
  const auto& faces = x.index()->horn_faces(h.base, h.beta);
  const std::string want = join_values(h.values);
  std::vector<std::string> out;
  for (const auto& e : x.elements(h.base)) {
    if (face_tuple(x, faces, e) == want) out.push_back(e);
  }
  return out;
}

CheckReport is_inner_kan(const GraphicalSet& x, int n) { return check_inner_horns(x, n, false); }
CheckReport has_unique_inner_fillers(const GraphicalSet& x, int n) { return check_inner_horns(x, n, true); }

// ---------------------------------------------------------------------------
// Segal maps

SegalMap segal_map(const GraphicalSet& x, std::size_t g) {
  const ShapeIndex& index = *x.index();
  SegalMap out;
  const auto& elements = x.elements(g);
  if (g == index.arrow()) {
    for (const auto& e : elements) {
      out.image.push_back({e});
      out.compatible.push_back({e});
    }
    return out;
  }
  const WiringGraph& graph = *index.graph(g);
  const auto& inclusions = index.corolla_inclusions(g);
  for (const auto& e : elements) {
    std::vector<std::string> tuple;
    for (const auto& i : inclusions) tuple.push_back(x.restrict(i, e));
    out.image.push_back(std::move(tuple));
  }
  std::vector<std::vector<std::string>> candidates;
  std::vector<std::size_t> corolla;
  for (const auto& i : inclusions) {
    corolla.push_back(index.index_of(*i.source));
    candidates.push_back(x.elements(corolla.back()));
  }
  // The colour of an internal edge seen from either end must agree.
  auto leg_values = [&](std::size_t v, bool input, int port) {
    const WiringGraph& c = *index.graph(corolla[v]);
    const VertexId& v0 = c.vertices()[0].id;
    const EdgeId leg = input ? c.in_edges(v0)[port - 1] : c.out_edges(v0)[port - 1];
    return x.restrict_all(index.edge_inclusion(corolla[v], leg), candidates[v]);
  };
  std::vector<JoinConstraint> constraints;
  const Incidence& inc = graph.incidence();
  for (std::size_t e = 0; e < graph.num_edges(); ++e) {
    const int a = inc.tail_vertex[e];
    const int b = inc.head_vertex[e];
    if (a < 0 || b < 0) continue;
    auto ta = leg_values(a, false, inc.tail_index[e]);
    auto tb = leg_values(b, true, inc.head_index[e]);
    if (a < b) {
      constraints.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b), std::move(ta), std::move(tb)});
    } else {
      constraints.push_back({static_cast<std::size_t>(b), static_cast<std::size_t>(a), std::move(tb), std::move(ta)});
    }
  }
  std::vector<std::size_t> sizes;
  for (const auto& c : candidates) sizes.push_back(c.size());
  for (const auto& tuple : join(sizes, constraints)) {
    std::vector<std::string> values;
    for (std::size_t k = 0; k < tuple.size(); ++k) values.push_back(candidates[k][tuple[k]]);
    out.compatible.push_back(std::move(values));
  }
  return out;
}

CheckReport is_segal(const GraphicalSet& x, int n) {
  const ShapeIndex& index = *x.index();
  CheckReport report;
  for (std::size_t g = 0; g < index.size(); ++g) {
    if (g == index.arrow() || static_cast<int>(index.degree(g)) > n) continue;
    const SegalMap s = segal_map(x, g);
    const auto& elements = x.elements(g);
    std::map<std::string, std::size_t> seen;
    for (std::size_t k = 0; k < elements.size(); ++k) {
      ++report.checked;
      auto [it, fresh] = seen.emplace(join_values(s.image[k]), k);
      if (!fresh) {
        report.fail("segal-injective", index.form(g),
                    "elements " + elements[it->second] + " and " + elements[k] + " have the same corollas " +
                        show_values(s.image[k]));
      }
    }
    for (const auto& tuple : s.compatible) {
      ++report.checked;
      if (!seen.count(join_values(tuple))) {
        report.fail("segal-surjective", index.form(g), "compatible corollas " + show_values(tuple) + " have no preimage");
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Nerve recognition

namespace {

class Reconstruction {
 public:
  Reconstruction(const GraphicalSet& x, CheckReport& report) : x_(x), index_(*x.index()), report_(report) {}

  std::optional<FiniteProperad> run(int n) {
    try {
      build();
      if (!report_.ok) return std::nullopt;
      verify(n);
    } catch (const Error& e) {
      report_.fail("reconstruction", "", e.what());
    }
    if (!report_.ok) return std::nullopt;
    return p_;
  }

 private:
  using Op = std::pair<Biprofile, OpToken>;

  const Op& op(std::size_t corolla, const std::string& e) const {
    auto it = ops_.find({corolla, e});
    if (it == ops_.end()) throw Error("no operation for " + e + " at " + index_.form(corolla));
    return it->second;
  }

  void build() {
    int max_in = index_.options().max_inputs;
    int max_out = index_.options().max_outputs;
    const auto& colors = x_.elements(index_.arrow());
    for (std::size_t k = 0; k < colors.size(); ++k) {
      color_[colors[k]] = "c" + std::to_string(k);
      p_.colors.push_back("c" + std::to_string(k));
    }
    int seen_in = 0;
    int seen_out = 0;
    for (std::size_t c = 0; c < index_.size(); ++c) {
      if (index_.degree(c) != 1) continue;
      const WiringGraph& g = *index_.graph(c);
      const VertexId& v0 = g.vertices()[0].id;
      seen_in = std::max(seen_in, g.vertices()[0].in_arity);
      seen_out = std::max(seen_out, g.vertices()[0].out_arity);
      for (const auto& e : x_.elements(c)) {
        Biprofile b;
        for (const auto& leg : g.in_edges(v0)) b.inputs.push_back(color(index_.edge_inclusion(c, leg), e));
        for (const auto& leg : g.out_edges(v0)) b.outputs.push_back(color(index_.edge_inclusion(c, leg), e));
        auto& tokens = p_.ops[b];
        tokens.push_back("o" + std::to_string(tokens.size()));
        ops_[{c, e}] = {b, tokens.back()};
      }
    }
    p_.max_inputs = max_in >= 0 ? max_in : seen_in;
    p_.max_outputs = max_out >= 0 ? max_out : seen_out;

    if (!colors.empty()) {
      auto c11 = index_.find(make_corolla(1, 1));
      if (!c11) throw Error("the truncation lacks the (1,1) corolla");
      const GammaMorphism& sigma = index_.codegeneracies(*c11).at(0);
      for (const auto& e : colors) {
        const Op& u = op(*c11, x_.restrict(sigma, e));
        if (u.first != Biprofile{{color_.at(e)}, {color_.at(e)}}) {
          report_.fail("reconstruction", index_.form(*c11), "degenerate corolla on " + e + " has the wrong profile");
        }
        p_.units[color_.at(e)] = u.second;
      }
    }

    for (const auto& [key, o] : ops_) {
      const auto& [c, e] = key;
      FiniteProperad::Swaps s;
      for (int side = 0; side < 2; ++side) {
        const bool input = side == 0;
        const int arity = static_cast<int>(input ? o.first.inputs.size() : o.first.outputs.size());
        for (int k = 0; k + 1 < arity; ++k) {
          const Op& y = op(c, x_.restrict(index_.corolla_transposition(c, input, k), e));
          std::vector<int> perm(arity);
          std::iota(perm.begin(), perm.end(), 0);
          std::swap(perm[k], perm[k + 1]);
          Biprofile want = input ? permute(o.first, perm, iota(o.first.outputs.size()))
                                 : permute(o.first, iota(o.first.inputs.size()), perm);
          if (y.first != want) {
            report_.fail("reconstruction", index_.form(c), "transposed operation has the wrong profile");
          }
          (input ? s.in_swaps : s.out_swaps).push_back(y.second);
        }
      }
      p_.swaps[o] = std::move(s);
    }

    for (const PgcKey& shape : pgc_shapes(p_.max_inputs, p_.max_outputs)) {
      PgcSpec spec{static_cast<int>(shape.u.inputs.size()), static_cast<int>(shape.u.outputs.size()),
                   static_cast<int>(shape.w.inputs.size()), static_cast<int>(shape.w.outputs.size()), shape.grafts};
      const WiringGraph pgc = make_pgc(spec);
      const Representative rep = canonical_representative(pgc);
      auto g = index_.find(rep.graph);
      if (!g) continue;
      const Isomorphism& iso = rep.from_original;
      auto map_edges = [&](const std::vector<EdgeId>& es) {
        std::vector<EdgeId> out;
        for (const auto& e : es) out.push_back(iso.edge_map.at(e));
        return out;
      };
      auto corolla = [&](int m, int k) {
        auto c = index_.find(make_corolla(m, k));
        if (!c) throw Error("corolla outside the truncation");
        return *c;
      };
      const auto [ci, co] = arity_of(pgc);
      const std::size_t cu = corolla(spec.u_in, spec.u_out);
      const std::size_t cw = corolla(spec.v_in, spec.v_out);
      const std::size_t cc = corolla(ci, co);
      const GammaMorphism iu = index_.subgraph_inclusion(cu, *g, {iso.vertex_map.at("u")},
                                                         map_edges(pgc.in_edges("u")), map_edges(pgc.out_edges("u")));
      const GammaMorphism iw = index_.subgraph_inclusion(cw, *g, {iso.vertex_map.at("v")},
                                                         map_edges(pgc.in_edges("v")), map_edges(pgc.out_edges("v")));
      const GammaMorphism ic = index_.subgraph_inclusion(
          cc, *g, {iso.vertex_map.at("u"), iso.vertex_map.at("v")}, map_edges(pgc.inputs()), map_edges(pgc.outputs()));
      for (const auto& y : x_.elements(*g)) {
        const Op& a = op(cu, x_.restrict(iu, y));
        const Op& b = op(cw, x_.restrict(iw, y));
        const Op& z = op(cc, x_.restrict(ic, y));
        PgcKey key{a.first, b.first, shape.grafts, a.second, b.second};
        if (composite_profile(key) != z.first) {
          report_.fail("reconstruction", index_.form(*g), "composite of " + to_string(key) + " has the wrong profile");
          continue;
        }
        auto [it, fresh] = p_.table.emplace(key, z.second);
        if (!fresh && it->second != z.second) {
          report_.fail("reconstruction", index_.form(*g), "two composites for " + to_string(key));
        }
      }
    }
  }

  static std::vector<int> iota(std::size_t n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
  }

  const Color& color(const GammaMorphism& inclusion, const std::string& e) const {
    return color_.at(x_.restrict(inclusion, e));
  }

  // The decorations of shape g corresponding to the elements of X_g,
  // encoded and in element order.
  const std::vector<std::string>& images(std::size_t g) {
    auto it = images_.find(g);
    if (it != images_.end()) return it->second;
    const WiringGraph& graph = *index_.graph(g);
    const auto& elements = x_.elements(g);
    std::vector<PDecoration> d(elements.size());
    for (auto& di : d) di.shape = graph;
    for (const Edge& edge : graph.edges()) {
      const auto colors = x_.restrict_all(index_.edge_inclusion(g, edge.id), elements);
      for (std::size_t k = 0; k < d.size(); ++k) d[k].edge_decoration[edge.id] = color_.at(colors[k]);
    }
    if (g != index_.arrow()) {
      const auto& inclusions = index_.corolla_inclusions(g);
      for (std::size_t v = 0; v < inclusions.size(); ++v) {
        const std::size_t c = index_.index_of(*inclusions[v].source);
        const auto values = x_.restrict_all(inclusions[v], elements);
        for (std::size_t k = 0; k < d.size(); ++k) {
          d[k].vertex_decoration[graph.vertices()[v].id] = op(c, values[k]).second;
        }
      }
    }
    std::vector<std::string> out;
    out.reserve(d.size());
    for (const auto& di : d) out.push_back(encode_decoration(graph, di));
    return images_.emplace(g, std::move(out)).first->second;
  }

  const std::string& image(std::size_t g, const std::string& e) {
    const auto& elements = x_.elements(g);
    const auto it = std::lower_bound(elements.begin(), elements.end(), e);
    if (it == elements.end() || *it != e) throw Error("restriction leaves the set: " + e);
    return images(g).at(static_cast<std::size_t>(it - elements.begin()));
  }

  void verify(int n) {
    for (std::size_t g = 0; g < index_.size(); ++g) {
      if (static_cast<int>(index_.degree(g)) > n) continue;
      const WiringGraph& graph = *index_.graph(g);
      std::set<std::string> expected;
      for (const auto& d : nerve(p_, graph)) expected.insert(encode_decoration(graph, d));
      std::set<std::string> got;
      const auto& encoded = images(g);
      got.insert(encoded.begin(), encoded.end());
      ++report_.checked;
      if (got.size() != x_.elements(g).size() || got != expected) {
        report_.fail("nerve-iso", index_.form(g),
                     std::to_string(x_.elements(g).size()) + " elements against " + std::to_string(expected.size()) +
                         " decorations of the reconstructed properad");
        continue;
      }
      auto natural = [&](const GammaMorphism& f, std::size_t t, std::size_t s) {
        const auto restricted = x_.restrict_all(f, x_.elements(t));
        const auto& encoded = images(t);
        const EncodedRestriction along(p_, f);
        for (std::size_t k = 0; k < restricted.size(); ++k) {
          ++report_.checked;
          const std::string& lhs = image(s, restricted[k]);
          const std::string rhs = along(encoded[k]);
          if (lhs != rhs) {
            report_.fail("nerve-iso", index_.form(t),
                         "restriction to " + index_.form(s) + " differs: " + lhs + " vs " + rhs);
            return;
          }
        }
      };
      for (const auto& f : index_.faces(g)) natural(f.map, g, f.source);
      for (const auto& a : index_.automorphisms(g)) natural(a, g, g);
      for (const auto& s : index_.codegeneracies(g)) {
        const std::size_t t = index_.index_of(*s.target);
        natural(s, t, g);
      }
    }
  }

  const GraphicalSet& x_;
  const ShapeIndex& index_;
  CheckReport& report_;
  FiniteProperad p_;
  std::map<std::string, Color> color_;
  std::map<std::pair<std::size_t, std::string>, Op> ops_;
  std::map<std::size_t, std::vector<std::string>> images_;
};

}  // namespace

NerveReport is_nerve(const GraphicalSet& x, int n) {
  NerveReport out;
  out.report = is_segal(x, n);
  if (!out.report.ok) return out;
  Reconstruction r(x, out.report);
  out.properad = r.run(n);
  return out;
}

// ---------------------------------------------------------------------------
// Functoriality

CheckReport check_functoriality(const GraphicalSet& x, int n) {
  const ShapeIndex& index = *x.index();
  CheckReport report;
  std::vector<std::vector<GammaMorphism>> into(index.size());
  for (const auto& g : TabulatedSet::generators(index)) into[index.index_of(*g.target)].push_back(g);
  auto small = [&](std::size_t k) { return static_cast<int>(index.degree(k)) <= n; };
  for (std::size_t t = 0; t < index.size(); ++t) {
    if (!small(t)) continue;
    const auto& elements = x.elements(t);
    std::map<std::string, std::vector<std::string>> paths;
    for (const auto& b : into[t]) {
      const std::size_t s = index.index_of(*b.source);
      if (!small(s)) continue;
      std::vector<std::string> once;
      try {
        once = x.restrict_all(b, elements);
      } catch (const Error& e) {
        report.fail("functoriality", index.form(t), e.what());
        continue;
      }
      bool closed = true;
      for (std::size_t k = 0; k < elements.size(); ++k) {
        ++report.checked;
        if (!contains(x.elements(s), once[k])) {
          closed = false;
          report.fail("functoriality", index.form(t),
                      "restricting " + elements[k] + " to " + index.form(s) + " gives a non-element " + once[k]);
        }
      }
      if (!closed) continue;
      if (s == t) {
        std::set<std::string> distinct(once.begin(), once.end());
        if (distinct.size() != elements.size()) {
          report.fail("functoriality", index.form(t), "an automorphism does not act bijectively");
        }
      }
      for (const auto& a : into[s]) {
        const std::size_t r = index.index_of(*a.source);
        if (!small(r)) continue;
        const GammaMorphism ba = compose(b, a);
        std::vector<std::string> twice;
        try {
          twice = x.restrict_all(a, once);
        } catch (const Error& e) {
          report.fail("functoriality", index.form(t), e.what());
          continue;
        }
        report.checked += elements.size();
        // Equal composites of different generator pairs must act alike.
        auto [it, fresh] = paths.emplace(arrow_key(index, ba), twice);
        if (!fresh) {
          if (it->second != twice) {
            report.fail("functoriality", index.form(t),
                        "two factorizations of one map to " + index.form(r) + " act differently");
          }
          continue;
        }
        for (std::size_t k = 0; k < elements.size(); ++k) {
          std::string direct;
          try {
            direct = x.restrict(ba, elements[k]);
          } catch (const Error& e) {
            report.fail("functoriality", index.form(t), e.what());
            break;
          }
          if (twice[k] != direct) {
            report.fail("functoriality", index.form(t),
                        "restricting " + elements[k] + " to " + index.form(r) + " in two steps gives " + twice[k] +
                            ", directly " + direct);
          }
        }
      }
    }
  }
  return report;
}

}  // namespace properad
