#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace properad {

using VertexId = std::string;
using EdgeId = std::string;
using Color = std::string;

enum class Direction { input, output };

struct Port {
  VertexId vertex;
  Direction direction = Direction::input;
  int index = 1;
};

// One end of an edge: either a (1-based) port of a vertex, or a (1-based)
// slot of the graph boundary.  For a tail the vertex port is an output port
// and the slot a graph-input slot; for a head, dually.
struct Endpoint {
  std::optional<VertexId> vertex;
  int index = 1;

  static Endpoint slot(int index) { return Endpoint{std::nullopt, index}; }
  static Endpoint at(VertexId vertex, int port) {
    return Endpoint{std::move(vertex), port};
  }
  bool is_slot() const noexcept { return !vertex.has_value(); }

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct Vertex {
  VertexId id;
  int in_arity = 0;
  int out_arity = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Edge {
  EdgeId id;
  Endpoint tail;
  Endpoint head;
  std::optional<Color> color;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Biprofile {
  std::vector<Color> inputs;
  std::vector<Color> outputs;

  friend auto operator<=>(const Biprofile&, const Biprofile&) = default;
  friend bool operator==(const Biprofile&, const Biprofile&) = default;
};

std::string to_string(const Biprofile& profile);

// Integer view of a graph's incidence structure.  Vertex and edge indices are
// positions in WiringGraph::vertices() / edges().
struct Incidence {
  static constexpr int unmatched = -1;
  static constexpr int multiple = -2;

  std::vector<int> tail_vertex;  // -1 for a graph-input slot
  std::vector<int> head_vertex;  // -1 for a graph-output slot
  std::vector<int> tail_index;   // port or slot index, 1-based
  std::vector<int> head_index;
  // in_edge[v][k] is the edge hitting input port k+1 of vertex v
  std::vector<std::vector<int>> in_edge;
  std::vector<std::vector<int>> out_edge;
  std::vector<int> input_slot_edge;   // by slot, from edge tails
  std::vector<int> output_slot_edge;  // by slot, from edge heads
};

// A connected directed acyclic graph with legs and ordered ports.  The class
// itself admits ill-formed data so that validate_graph() can report on it;
// only duplicate ids are rejected on insertion.
class WiringGraph {
 public:
  WiringGraph() = default;
  explicit WiringGraph(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  void add_vertex(VertexId id, int in_arity, int out_arity);
  void add_edge(EdgeId id, Endpoint tail, Endpoint head,
                std::optional<Color> color = std::nullopt);
  void remove_vertex(const VertexId& id);
  void remove_edge(const EdgeId& id);
  void set_tail(const EdgeId& id, Endpoint tail);
  void set_head(const EdgeId& id, Endpoint head);
  void set_color(const EdgeId& id, std::optional<Color> color);
  void set_inputs(std::vector<EdgeId> inputs);
  void set_outputs(std::vector<EdgeId> outputs);

  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<EdgeId>& inputs() const noexcept { return inputs_; }
  const std::vector<EdgeId>& outputs() const noexcept { return outputs_; }
  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  bool has_vertex(const VertexId& id) const { return vindex_.count(id) != 0; }
  bool has_edge(const EdgeId& id) const { return eindex_.count(id) != 0; }
  const Vertex& vertex(const VertexId& id) const;
  const Edge& edge(const EdgeId& id) const;
  std::size_t vertex_index(const VertexId& id) const;
  std::size_t edge_index(const EdgeId& id) const;

  // Edge attached at a vertex port, or nullptr when no (or no unique) edge is.
  const Edge* in_edge(const VertexId& v, int port) const;
  const Edge* out_edge(const VertexId& v, int port) const;
  // Edge ids in port order; "" marks an unmatched port.
  std::vector<EdgeId> in_edges(const VertexId& v) const;
  std::vector<EdgeId> out_edges(const VertexId& v) const;

  bool is_colored() const;
  const Incidence& incidence() const;

  // Edge-id-level identity: same vertices and edges (as sets keyed by id, with
  // identical endpoints and colors) and identical ordered legs.  The name is
  // ignored.
  friend bool operator==(const WiringGraph& a, const WiringGraph& b);

 private:
  void reindex();
  void touch() { std::atomic_store(&incidence_, std::shared_ptr<const Incidence>{}); }

  std::string name_;
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<EdgeId> inputs_;
  std::vector<EdgeId> outputs_;
  std::unordered_map<VertexId, std::size_t> vindex_;
  std::unordered_map<EdgeId, std::size_t> eindex_;
  mutable std::shared_ptr<const Incidence> incidence_;
};

struct Violation {
  std::string invariant;
  std::string witness;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;

  void add(std::string invariant, std::string witness) {
    ok = false;
    violations.push_back({std::move(invariant), std::move(witness)});
  }
};

ValidationReport validate_graph(const WiringGraph& g);
bool is_valid(const WiringGraph& g);

// True iff the underlying undirected graph (legs included) has no cycle.
bool is_simply_connected(const WiringGraph& g);

Biprofile biprofile_of(const WiringGraph& g);
Biprofile biprofile_of_vertex(const WiringGraph& g, const VertexId& v);

// Leg counts, without colors.
std::pair<int, int> arity_of(const WiringGraph& g);
bool is_leg(const WiringGraph& g, const Edge& e);
bool is_exceptional_edge(const WiringGraph& g);
bool is_corolla(const WiringGraph& g);

WiringGraph make_exceptional_edge(std::optional<Color> color = std::nullopt);
WiringGraph make_corolla(int m, int n);
WiringGraph make_linear_graph(int n);

// Two vertices u, v; grafts[k] = (output port of u, input port of v).
// Leg order: inputs of u, then free inputs of v (port order); free outputs of
// u, then outputs of v.
struct PgcSpec {
  int u_in = 0;
  int u_out = 0;
  int v_in = 0;
  int v_out = 0;
  std::vector<std::pair<int, int>> grafts;
};
WiringGraph make_pgc(const PgcSpec& spec);

// The corolla C_v of a vertex: v with its port edges as legs, legs in port
// order, ids and colors kept.
WiringGraph corolla_of(const WiringGraph& g, const VertexId& v);

}  // namespace properad
