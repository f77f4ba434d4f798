#pragma once

#include <memory>
#include <vector>

#include "properad/gamma.hpp"
#include "properad/wiring_graph.hpp"

namespace properad {

// Operations of the free properad on G: graphs whose edges are decorated by
// edges of G and whose vertices are decorated by vertices of G, port by port.
// Profiles are lists of edge ids of G.
struct EdgeProfile {
  std::vector<EdgeId> inputs;
  std::vector<EdgeId> outputs;
};

// All elements with at most `max_vertices` vertices, up to isomorphism of
// decorated graphs ignoring leg order (legs are listed sorted by decoration).
// Includes the exceptional edge at every edge of G.
std::vector<DecoratedGraph> free_elements_all(const WiringGraph& g, int max_vertices);

// All elements of the given profile, up to isomorphism fixing the legs.
std::vector<DecoratedGraph> free_elements(const WiringGraph& g, const EdgeProfile& profile,
                                          int max_vertices);

// Properad maps Γ(H) -> Γ(G) whose vertex images have at most `max_vertices`
// vertices (duplicate-free, not filtered for the subgraph condition).
std::vector<GammaMorphism> properad_maps(std::shared_ptr<const WiringGraph> h,
                                         std::shared_ptr<const WiringGraph> g, int max_vertices);

}  // namespace properad
