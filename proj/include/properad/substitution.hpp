#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "properad/isomorphism.hpp"
#include "properad/wiring_graph.hpp"

namespace properad {

// Replace `host_vertex` of a graph by `guest`.  in_bij[k] is the input port of
// the host vertex that guest input slot k+1 is glued to (likewise out_bij);
// empty means the identity.  With `namespaced`, guest vertices and internal
// edges are renamed "<host>/<id>"; otherwise guest ids are kept verbatim and
// must not collide with the host graph.
struct SubstitutionAssignment {
  VertexId host_vertex;
  WiringGraph guest;
  std::vector<int> in_bij;
  std::vector<int> out_bij;
  bool namespaced = true;
};

// Where the vertices and edges of a substitution result came from.  Ids not
// listed are ids of the host graph.
struct SubstitutionTrace {
  std::map<VertexId, std::pair<VertexId, VertexId>> guest_vertices;  // new id -> (host, guest id)
  std::map<EdgeId, std::pair<VertexId, EdgeId>> guest_edges;         // new id -> (host, guest id)
};

WiringGraph substitute(const WiringGraph& g, const SubstitutionAssignment& a,
                       SubstitutionTrace* trace = nullptr);
WiringGraph substitute_many(const WiringGraph& g, const std::vector<SubstitutionAssignment>& as,
                            SubstitutionTrace* trace = nullptr);

enum class GeneratorKind { inner_coface, outer_coface, codegeneracy, isomorphism };
std::string to_string(GeneratorKind kind);

// A generating map source -> target of the graphical category together with
// the substitution data that produces the target from the source:
//   inner_coface: target = source(pgc at `vertex`)
//   outer_coface: target = pgc(source at `slot`); `vertex` is the vertex of
//                 the target outside the image.  When the target is a
//                 corolla, source is the leg `edge` and pgc holds the corolla.
//   codegeneracy: target = source(exceptional edge at `vertex`)
//   isomorphism:  iso is a weak isomorphism source -> target
struct GeneratorMap {
  GeneratorKind kind = GeneratorKind::isomorphism;
  WiringGraph source;
  WiringGraph target;
  VertexId vertex;
  WiringGraph pgc;
  VertexId slot;
  EdgeId edge;
  Isomorphism iso;
};

// Rebuilds the target from the source and the witness.
WiringGraph replay(const GeneratorMap& gen);

// All coface maps S -> k with one vertex fewer than k, inner ones first.
std::vector<GeneratorMap> enumerate_cofaces_into(const WiringGraph& k);

GeneratorMap codegeneracy(const WiringGraph& g, const VertexId& v);

// The vertex-induced subgraph on `vertices`: all incident edges, crossing
// edges as legs.  Legs keep the host's boundary order, followed by new legs
// sorted by edge id.
WiringGraph induced_subgraph(const WiringGraph& g, const std::vector<VertexId>& vertices);

// The exceptional edge carrying id (and color) of an edge of g.
WiringGraph edge_subgraph(const WiringGraph& g, const EdgeId& e);

}  // namespace properad
