#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "properad/catalog.hpp"
#include "properad/gamma.hpp"
#include "properad/properad.hpp"

namespace properad {

// The objects of a truncated graphical category: one representative per
// weak isomorphism class of graphs with at most `max_vertices` vertices whose
// connected pieces have at most max_inputs inputs and max_outputs outputs
// (negative bounds: unbounded, then max_edges must be positive).
struct TruncationOptions {
  int max_vertices = 3;
  int max_inputs = 3;
  int max_outputs = 3;
  int max_edges = 0;

  friend bool operator==(const TruncationOptions&, const TruncationOptions&) = default;
};

// Two faces of a horn agree on a common piece: a*(x_i) == b*(x_j), where
// face_i o a == face_j o b.
struct HornConstraint {
  std::size_t i = 0;
  std::size_t j = 0;
  GammaMorphism a;
  GammaMorphism b;
};

// Shapes of a truncation together with cached morphism data.  Morphisms
// handed to graphical sets always run between the shapes held here (same
// graph objects); transport() moves other morphisms onto them.  Caches are
// filled lazily; instances are not safe for concurrent use.
class ShapeIndex {
 public:
  struct Face {
    GammaMorphism map;  // source and target are shapes of the index
    std::size_t source = 0;
    bool inner = false;
  };

  explicit ShapeIndex(const TruncationOptions& options);

  const TruncationOptions& options() const noexcept { return options_; }
  std::size_t size() const noexcept { return graphs_.size(); }
  const std::shared_ptr<const WiringGraph>& graph(std::size_t i) const { return graphs_.at(i); }
  const std::string& form(std::size_t i) const { return catalog_.form(i); }
  std::size_t degree(std::size_t i) const { return graphs_.at(i)->num_vertices(); }
  // The exceptional edge.
  std::size_t arrow() const noexcept { return arrow_; }

  std::optional<std::size_t> find(const WiringGraph& g) const;
  // Index of a graph of the index (compared by identity, then by ids).
  std::size_t index_of(const WiringGraph& g) const;

  // The isomorphism from g to its shape.
  GammaMorphism to_shape(std::shared_ptr<const WiringGraph> g) const;
  // Conjugates f by the isomorphisms of its ends onto their shapes.
  GammaMorphism transport(const GammaMorphism& f) const;

  const std::vector<GammaMorphism>& hom(std::size_t from, std::size_t to) const;
  const std::vector<GammaMorphism>& automorphisms(std::size_t i) const;
  // Coface maps into shape i with pairwise distinct images, inner ones first.
  const std::vector<Face>& faces(std::size_t i) const;
  // Codegeneracies out of shape i, one per (1,1) vertex.
  const std::vector<GammaMorphism>& codegeneracies(std::size_t i) const;
  // Corolla inclusions C_v -> shape i, in vertex order.
  const std::vector<GammaMorphism>& corolla_inclusions(std::size_t i) const;
  // The inclusion of the exceptional edge at edge e of shape i.
  GammaMorphism edge_inclusion(std::size_t i, const EdgeId& e) const;
  // The automorphism of a corolla shape exchanging ports k+1 and k+2
  // (0-based k) on the input or output side.
  GammaMorphism corolla_transposition(std::size_t corolla, bool input, int k) const;
  // The map from shape `corolla` onto the subgraph of shape i induced by
  // `vertices`, with legs in the given order (each leg k matching port k).
  GammaMorphism subgraph_inclusion(std::size_t corolla, std::size_t i, const std::vector<VertexId>& vertices,
                                   const std::vector<EdgeId>& in_legs, const std::vector<EdgeId>& out_legs) const;
  // Faces of shape i other than faces(i)[beta], and the agreement conditions
  // making a family of face values a natural map from the horn (i < j).
  const std::vector<Face>& horn_faces(std::size_t i, std::size_t beta) const;
  const std::vector<HornConstraint>& horn_constraints(std::size_t i, std::size_t beta) const;

 private:
  TruncationOptions options_;
  ShapeCatalog catalog_;
  std::vector<std::shared_ptr<const WiringGraph>> graphs_;
  std::map<const WiringGraph*, std::size_t> by_pointer_;
  std::size_t arrow_ = 0;

  mutable std::map<std::size_t, HomTarget> targets_;
  mutable std::map<std::pair<std::size_t, std::size_t>, std::vector<GammaMorphism>> hom_;
  mutable std::map<std::size_t, std::vector<GammaMorphism>> automorphisms_;
  mutable std::map<std::size_t, std::vector<Face>> faces_;
  mutable std::map<std::size_t, std::vector<GammaMorphism>> codegeneracies_;
  mutable std::map<std::size_t, std::vector<GammaMorphism>> corollas_;
  mutable std::map<std::pair<std::size_t, std::size_t>, std::vector<Face>> horn_faces_;
  mutable std::map<std::pair<std::size_t, std::size_t>, std::vector<HornConstraint>> horn_constraints_;
};

// Identifies a morphism between shapes of the index (morphism_key does not
// name the ends, and all shapes share their ids).
std::string arrow_key(const ShapeIndex& index, const GammaMorphism& f);

// Two maps into the same graph have the same image exactly when these agree.
std::string image_signature(const GammaMorphism& f);

// A truncated graphical set: finite sets of elements per shape, with
// restriction along morphisms between shapes.
class GraphicalSet {
 public:
  virtual ~GraphicalSet() = default;
  virtual std::shared_ptr<const ShapeIndex> index() const = 0;
  // Sorted, without repetition.
  virtual const std::vector<std::string>& elements(std::size_t shape) const = 0;
  // x is an element at f's target; the result is one at f's source.
  virtual std::string restrict(const GammaMorphism& f, const std::string& x) const = 0;
  // restrict() applied to each of xs.
  virtual std::vector<std::string> restrict_all(const GammaMorphism& f, const std::vector<std::string>& xs) const;
};

using GraphicalSetPtr = std::shared_ptr<const GraphicalSet>;

// Γ[G] = Γ(-, G).  Elements are morphism keys; restriction is precomposition.
GraphicalSetPtr representable(std::shared_ptr<const ShapeIndex> index, const WiringGraph& g);
// The nerve: P-decorations of each shape (see encode_decoration).
GraphicalSetPtr nerve_set(std::shared_ptr<const ShapeIndex> index, FiniteProperad p);

// Explicit tables: elements per shape and the action of every generating map
// (faces into, codegeneracies out of, and automorphisms of each shape).
// Restriction along other maps goes through a factorization into generators.
class TabulatedSet : public GraphicalSet {
 public:
  explicit TabulatedSet(std::shared_ptr<const ShapeIndex> index);

  std::shared_ptr<const ShapeIndex> index() const override { return index_; }
  const std::vector<std::string>& elements(std::size_t shape) const override;
  std::string restrict(const GammaMorphism& f, const std::string& x) const override;

  void set_elements(std::size_t shape, std::vector<std::string> elements);
  void set_action(const GammaMorphism& generator, std::map<std::string, std::string> table);
  const std::map<std::string, std::pair<GammaMorphism, std::map<std::string, std::string>>>& actions() const {
    return actions_;
  }
  // Every generating map of the index, for tabulation.
  static std::vector<GammaMorphism> generators(const ShapeIndex& index);

 private:
  struct Step {
    GammaMorphism generator;
    GammaMorphism rest;
    bool generator_first = false;  // f = rest o generator (else generator o rest)
  };
  const Step& decompose(const GammaMorphism& f, const std::string& key) const;

  std::shared_ptr<const ShapeIndex> index_;
  std::vector<std::vector<std::string>> elements_;
  std::map<std::string, std::pair<GammaMorphism, std::map<std::string, std::string>>> actions_;
  mutable std::map<std::string, Step> steps_;
};

std::shared_ptr<TabulatedSet> tabulate(const GraphicalSet& x);

// Mutations for testing the checkers.  puncture removes x from X_shape
// together with every graphex having x as a restriction; pad doubles that
// same collection, each copy (named with a trailing '*') restricting like
// its original.  Both results are again graphical sets.
GraphicalSetPtr puncture(GraphicalSetPtr base, std::size_t shape, const std::string& x);
GraphicalSetPtr pad(GraphicalSetPtr base, std::size_t shape, const std::string& x);

// Subobjects of a representable.
enum class PartKind { full, boundary, horn, segal_core };
std::string to_string(PartKind kind);

struct RepresentablePart {
  std::size_t base = 0;
  PartKind kind = PartKind::full;
  std::optional<std::size_t> beta;         // face index for horns
  std::vector<GammaMorphism> generators;  // maps into the base
};

RepresentablePart full_part(const ShapeIndex& index, std::size_t g);
RepresentablePart boundary(const ShapeIndex& index, std::size_t g);
// beta indexes index.faces(g); throws when out of range.
RepresentablePart horn(const ShapeIndex& index, std::size_t g, std::size_t beta);
RepresentablePart segal_core(const ShapeIndex& index, std::size_t g);
// Morphism keys of the part's elements at shape k.
std::set<std::string> part_elements(const ShapeIndex& index, const RepresentablePart& part, std::size_t k);

// Findings of a checker: pass/fail plus witnesses.
struct CheckReport {
  struct Witness {
    std::string check;
    std::string shape;  // canonical form
    std::string detail;
  };
  bool ok = true;
  std::size_t checked = 0;
  std::vector<Witness> witnesses;

  void fail(std::string check, std::string shape, std::string detail);
  void merge(const CheckReport& other);
};

// A natural map from the horn Λ^β[G] to X, given by its values on the faces
// of G other than β (in the order of horn_faces).
struct HornMap {
  std::size_t base = 0;
  std::size_t beta = 0;
  std::vector<std::string> values;
};

// Naturality of the face values: agreement on every common restriction.
bool is_natural(const GraphicalSet& x, const HornMap& h);
std::vector<HornMap> horn_maps(const GraphicalSet& x, std::size_t g, std::size_t beta);
std::vector<std::string> fillers(const GraphicalSet& x, const HornMap& h);
// Every natural map from an inner horn of a shape with at most n vertices
// has a filler (resp. exactly one).
CheckReport is_inner_kan(const GraphicalSet& x, int n);
CheckReport has_unique_inner_fillers(const GraphicalSet& x, int n);

// χ_G: X_G -> X_G^1 sends x to its restrictions along the corolla inclusions.
struct SegalMap {
  std::vector<std::vector<std::string>> image;      // per element of X_G
  std::vector<std::vector<std::string>> compatible;  // all of X_G^1
};
SegalMap segal_map(const GraphicalSet& x, std::size_t g);
CheckReport is_segal(const GraphicalSet& x, int n);

struct NerveReport {
  CheckReport report;
  std::optional<FiniteProperad> properad;
};
// Segal check, then reconstruction of a properad from the values at the
// exceptional edge, corollas and partially grafted corollas, and a check that
// its nerve is isomorphic to X on shapes with at most n vertices.
NerveReport is_nerve(const GraphicalSet& x, int n);

// Relations among generators: restricting along a composite of two
// generators agrees with restricting twice; automorphisms act bijectively.
CheckReport check_functoriality(const GraphicalSet& x, int n);

}  // namespace properad
