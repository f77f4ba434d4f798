#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "properad/wiring_graph.hpp"

namespace properad {

// strict: preserves port order and boundary slot order.
// weak:   preserves incidence, direction and coloring only.
enum class IsoMode { strict, weak };

struct Isomorphism {
  std::map<VertexId, VertexId> vertex_map;
  std::map<EdgeId, EdgeId> edge_map;

  friend bool operator==(const Isomorphism&, const Isomorphism&) = default;
};

// Exhaustive list of isomorphisms g -> h (stops after `limit` when nonzero).
std::vector<Isomorphism> find_isomorphisms(const WiringGraph& g, const WiringGraph& h,
                                           IsoMode mode, std::size_t limit = 0);
bool weakly_isomorphic(const WiringGraph& g, const WiringGraph& h);

struct CanonOptions {
  // Legs keep their boundary positions (used for decorated graphs whose legs
  // are identified with ports of another vertex).
  bool ordered_legs = false;
  // Per vertex index; empty means unlabeled.
  std::vector<std::string> vertex_labels;
  // Per edge index; empty means "use the edge color".
  std::vector<std::string> edge_labels;
};

struct CanonicalLabeling {
  std::string form;
  std::vector<int> vertex_position;  // vertex index -> canonical position
  std::vector<int> edge_position;    // edge index -> canonical rank
};

CanonicalLabeling canonical_labeling(const WiringGraph& g, const CanonOptions& options = {});

// Equal for two graphs iff they are weakly isomorphic (colors respected).
std::string canonical_form(const WiringGraph& g);

struct Representative {
  WiringGraph graph;
  Isomorphism from_original;  // original -> representative
};

// A fixed member of g's weak isomorphism class (vertex ids v0.., edge ids
// e0..), identical for all weakly isomorphic inputs.
Representative canonical_representative(const WiringGraph& g);

Isomorphism inverse(const Isomorphism& iso);
WiringGraph apply_renaming(const WiringGraph& g, const Isomorphism& renaming);

}  // namespace properad
