#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "properad/substitution.hpp"
#include "properad/wiring_graph.hpp"

namespace properad {

// A subgraph of a host graph: either the exceptional edge at a host edge, or
// the subgraph induced by a nonempty connected set of host vertices.
struct Subgraph {
  std::optional<EdgeId> edge;
  std::vector<VertexId> vertices;  // sorted

  friend bool operator==(const Subgraph&, const Subgraph&) = default;
};

// All edge subgraphs (one per edge) and all connected vertex-induced
// subgraphs, edges first, then vertex sets by size and id.
std::vector<Subgraph> subgraphs(const WiringGraph& g);
WiringGraph subgraph_graph(const WiringGraph& g, const Subgraph& s);

// A graph whose edges and vertices carry labels: edges and vertices of a
// target graph for Γ-morphisms, colors and operation tokens for properad
// decorations.  Missing entries mean "undecorated".
struct DecoratedGraph {
  WiringGraph shape;
  std::map<EdgeId, std::string> edge_decoration;
  std::map<VertexId, std::string> vertex_decoration;
};

// The subgraph of `g` induced by `vertices` with its legs in the given order
// (each list a permutation of the induced legs), decorated by the identity.
// With no vertices, `in_legs` must name a single edge: the exceptional edge
// at that edge.
DecoratedGraph decorated_subgraph(const WiringGraph& g, const std::vector<VertexId>& vertices,
                                  const std::vector<EdgeId>& in_legs,
                                  const std::vector<EdgeId>& out_legs);

// The corolla of vertex `v` of `g`, decorated by the identity.
DecoratedGraph decorated_corolla(const WiringGraph& g, const VertexId& v);

// A map of graphical properads H -> G.  f1[v] is a decorated graph over G
// whose leg k (in each direction) corresponds to port k of v, so that the
// leg decorations read f0 on v's port edges.
struct GammaMorphism {
  std::shared_ptr<const WiringGraph> source;
  std::shared_ptr<const WiringGraph> target;
  std::map<EdgeId, EdgeId> f0;
  std::map<VertexId, DecoratedGraph> f1;
};

std::shared_ptr<const WiringGraph> share(WiringGraph g);

// f0 H{f1(v)}: substitute every f1(v) into H, decorations carried along.
// Throws when an f1(v) does not fit its vertex.
DecoratedGraph image(const GammaMorphism& f);

struct ValidityReport {
  bool ok = true;
  std::string witness;
  std::size_t image_vertices = 0;
};

// A morphism belongs to Γ iff its image is a subgraph of the target: the
// decorations of the image are injective and respect vertex ports.
ValidityReport check_gamma_morphism(const GammaMorphism& f);
bool is_valid_gamma_morphism(const GammaMorphism& f);

GammaMorphism identity_morphism(std::shared_ptr<const WiringGraph> g);
// g after f.
GammaMorphism compose(const GammaMorphism& g, const GammaMorphism& f);

// Key identifying a decorated graph over `target` up to isomorphism fixing
// the legs; used for morphism equality.
std::string decoration_key(const DecoratedGraph& d, const WiringGraph* target);
std::string morphism_key(const GammaMorphism& f);
bool same_morphism(const GammaMorphism& a, const GammaMorphism& b);

enum class ReedyClass { positive, negative, isomorphism, neither };
std::string to_string(ReedyClass c);

bool is_positive(const GammaMorphism& f);
bool is_negative(const GammaMorphism& f);
bool is_isomorphism(const GammaMorphism& f);
ReedyClass classify(const GammaMorphism& f);

std::size_t degree(const WiringGraph& g);

struct ReedyFactorization {
  GammaMorphism negative;  // h: source -> middle
  GammaMorphism positive;  // g: middle -> target
  std::vector<VertexId> collapsed;  // vertices sent to an exceptional edge
};
ReedyFactorization reedy_factorize(const GammaMorphism& f);

// Subgraph tables of a target graph, shared by hom_set calls into it.
class HomTarget {
 public:
  explicit HomTarget(std::shared_ptr<const WiringGraph> g);
  const std::shared_ptr<const WiringGraph>& graph() const noexcept { return graph_; }

  struct Data;
  const Data& data() const noexcept { return *data_; }

 private:
  std::shared_ptr<const WiringGraph> graph_;
  std::shared_ptr<const Data> data_;
};

// Exhaustive, duplicate-free list of Γ-morphisms h -> g.
std::vector<GammaMorphism> hom_set(std::shared_ptr<const WiringGraph> h, const HomTarget& g);
std::vector<GammaMorphism> hom_set(std::shared_ptr<const WiringGraph> h,
                                   std::shared_ptr<const WiringGraph> g);

GammaMorphism morphism_from_generator(const GeneratorMap& gen);
GammaMorphism morphism_from_iso(std::shared_ptr<const WiringGraph> source,
                                std::shared_ptr<const WiringGraph> target, const Isomorphism& iso);

}  // namespace properad
