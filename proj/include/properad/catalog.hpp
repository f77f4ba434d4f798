#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "properad/isomorphism.hpp"
#include "properad/wiring_graph.hpp"

namespace properad {

struct CatalogOptions {
  int max_vertices = 3;
  int max_edges = 0;       // legs included; 0 = no limit
  int max_vertex_in = -1;  // -1 = no limit (then max_edges must be set)
  int max_vertex_out = -1;
  // Extra admission test applied to each representative.
  std::function<bool(const WiringGraph&)> admit;
};

// All weak isomorphism classes of valid uncolored graphs within the bounds,
// one canonical representative each (vertex ids v0.., edge ids e0..), sorted
// by (vertex count, edge count, canonical form).
class ShapeCatalog {
 public:
  explicit ShapeCatalog(const CatalogOptions& options);
  ShapeCatalog() = default;

  std::size_t size() const noexcept { return shapes_.size(); }
  const WiringGraph& shape(std::size_t i) const { return shapes_.at(i); }
  const std::vector<WiringGraph>& shapes() const noexcept { return shapes_; }
  const std::string& form(std::size_t i) const { return forms_.at(i); }

  // Index of g's class, or -1 when g is outside the catalog.
  long find(const WiringGraph& g) const;
  long find_form(const std::string& form) const;

  // Adds a representative of g's class when missing; returns its index.
  std::size_t insert(const WiringGraph& g);

 private:
  std::vector<WiringGraph> shapes_;
  std::vector<std::string> forms_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace properad
