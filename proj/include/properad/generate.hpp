#pragma once

#include <random>
#include <vector>

#include "properad/wiring_graph.hpp"

namespace properad {

struct RandomGraphOptions {
  int min_vertices = 0;
  int max_vertices = 4;
  int max_extra_edges = 2;     // internal edges beyond a spanning tree
  int max_legs_per_vertex = 2; // per direction
  int max_edges = 0;           // 0: unlimited; otherwise retried until met
};

// A random valid graph: vertices v0.., edges e0.., shuffled ports and slots.
WiringGraph random_graph(std::mt19937_64& rng, const RandomGraphOptions& options = {});

// A random graph whose biprofile has exactly m inputs and n outputs.
WiringGraph random_graph_with_arity(std::mt19937_64& rng, int m, int n,
                                    const RandomGraphOptions& options = {});

}  // namespace properad
