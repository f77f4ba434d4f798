#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "properad/gamma.hpp"
#include "properad/wiring_graph.hpp"

namespace properad {

using OpToken = std::string;

// A partially grafted corolla decorated by two operations: u's outputs
// grafts[k].first are attached to w's inputs grafts[k].second (1-based,
// sorted by u port).  The composite has the leg order of make_pgc: inputs of
// u, free inputs of w; free outputs of u, outputs of w.
struct PgcKey {
  Biprofile u;
  Biprofile w;
  std::vector<std::pair<int, int>> grafts;
  OpToken op_u;
  OpToken op_w;

  friend auto operator<=>(const PgcKey&, const PgcKey&) = default;
  friend bool operator==(const PgcKey&, const PgcKey&) = default;
};

std::string to_string(const PgcKey& key);
// Checks the grafts against the profiles; throws on mismatch.
Biprofile composite_profile(const PgcKey& key);
// The colored PGC graph of the key (vertices "u" and "v").
WiringGraph pgc_graph(const PgcKey& key);

// A colored properad with finitely many operations of bounded arity.
// Operation tokens are local to their biprofile.  The symmetric action is
// given on adjacent transpositions: in_swaps[k] is the operation obtained by
// exchanging input ports k+1 and k+2 (0-based k), likewise out_swaps.
// Composition is given on partially grafted corollas only.
//
// Large properads may leave parts of the data implicit: `swap_rule` and
// `compose_rule` are consulted for entries missing from the tables.
struct FiniteProperad {
  struct Swaps {
    std::vector<OpToken> in_swaps;
    std::vector<OpToken> out_swaps;
  };
  using OpKey = std::pair<Biprofile, OpToken>;

  int max_inputs = 3;
  int max_outputs = 3;
  std::vector<Color> colors;
  std::map<Biprofile, std::vector<OpToken>> ops;
  std::map<Color, OpToken> units;
  std::map<OpKey, Swaps> swaps;
  std::map<PgcKey, OpToken> table;

  std::function<std::optional<OpToken>(const Biprofile&, const OpToken&, bool input, int k)> swap_rule;
  std::function<std::optional<OpToken>(const PgcKey&)> compose_rule;

  bool within_bound(const Biprofile& p) const;
  bool has_color(const Color& c) const;
  bool has_op(const Biprofile& p, const OpToken& op) const;
  const std::vector<OpToken>& ops_of(const Biprofile& p) const;  // empty when none

  // One adjacent transposition; throws when the data is missing.
  OpToken swap(const Biprofile& p, const OpToken& op, bool input, int k) const;
  // The operation whose input i is input in_perm[i] of op (0-based), and
  // likewise for outputs.  Its biprofile is permute(p, in_perm, out_perm).
  OpToken act(const Biprofile& p, const OpToken& op, const std::vector<int>& in_perm,
              const std::vector<int>& out_perm) const;

  std::optional<OpToken> compose(const PgcKey& key) const;
  const OpToken& unit(const Color& c) const;
};

Biprofile permute(const Biprofile& p, const std::vector<int>& in_perm, const std::vector<int>& out_perm);

// Every PGC shape whose vertices and composite fit the arity bounds, without
// colors or operations (profiles hold empty color strings).
std::vector<PgcKey> pgc_shapes(int max_inputs, int max_outputs);

// Every fully decorated PGC of the properad: colored shapes with operations
// at both vertices, composite within bounds.
std::vector<PgcKey> pgc_entries(const FiniteProperad& p);

// Copies every implicit entry into the tables and drops the rules.
FiniteProperad materialize(const FiniteProperad& p);

// A graph decorated by a properad: edge_decoration holds colors, and
// vertex_decoration holds operation tokens (each in its vertex's biprofile).
// Edge colors missing from edge_decoration fall back to the edge's color.
using PDecoration = DecoratedGraph;

// Contracts the decorated graph to one operation (in the graph's leg order)
// by repeated PGC composition, each time contracting the first contractible
// pair whose composite fits the bounds.  The exceptional edge evaluates to the
// unit of its color.
OpToken evaluate(const FiniteProperad& p, const PDecoration& d);
// The results of all contraction orders.
std::set<OpToken> evaluate_all_orders(const FiniteProperad& p, const PDecoration& d);

struct ProperadReport {
  bool ok = true;
  struct Item {
    std::string check;    // structure, symmetry, unit, equivariance, associativity
    std::string witness;  // human-readable
    std::optional<WiringGraph> graph;
  };
  std::vector<Item> violations;
  std::size_t checked = 0;

  void add(std::string check, std::string witness, std::optional<WiringGraph> graph = std::nullopt);
};

// Structure, symmetric action, unit laws, equivariance of every PGC entry,
// and associativity over every decorated shape with up to `graph_bound`
// vertices whose connected pieces fit the arity bounds.
ProperadReport check_properad_axioms(const FiniteProperad& p, int graph_bound = 3, std::size_t max_violations = 20);

// All P-decorations of g: colorings of its edges with an operation of the
// induced biprofile at each vertex.  Throws when a vertex exceeds the bounds.
std::vector<PDecoration> nerve(const FiniteProperad& p, const WiringGraph& g);

// Pulls x (a P-decoration of f's target) back along f.
PDecoration nerve_restrict(const FiniteProperad& p, const GammaMorphism& f, const PDecoration& x);

// Stable text for a decoration of a fixed graph: edge colors in edge order,
// then operation tokens in vertex order.
std::string encode_decoration(const WiringGraph& g, const PDecoration& d);
PDecoration decode_decoration(const WiringGraph& g, const std::string& text);

// nerve_restrict on encoded decorations, without building decorated graphs.
std::string nerve_restrict_encoded(const FiniteProperad& p, const GammaMorphism& f, const std::string& x);

// The same, prepared once for many decorations of f's target.  Keeps a
// reference to p.
class EncodedRestriction {
 public:
  EncodedRestriction(const FiniteProperad& p, const GammaMorphism& f);
  ~EncodedRestriction();
  EncodedRestriction(EncodedRestriction&&) noexcept;
  std::string operator()(const std::string& x) const;

 private:
  struct Piece;
  const FiniteProperad* p_;
  std::size_t target_edges_;
  std::size_t target_vertices_;
  std::vector<std::size_t> edges_;
  std::vector<Piece> pieces_;
};

// A family of properads used for testing.  Colors carry weights w(c) mod r
// and charges q(c) mod m.  Operations of a biprofile whose input and output
// weights agree mod r are the residues 0..m-1; composing adds the residues
// and the charges of the grafted edges; the unit of c is -q(c).  The
// symmetric action moves an operation to the permuted biprofile unchanged.
struct RandomProperadOptions {
  int colors = 2;
  int ops = 2;      // m
  int weights = 1;  // r
  int max_inputs = 3;
  int max_outputs = 3;
};
FiniteProperad residue_properad(const RandomProperadOptions& options, const std::vector<int>& weight,
                                const std::vector<int>& charge);
FiniteProperad random_properad(std::mt19937_64& rng, const RandomProperadOptions& bounds);

// One color, one operation per biprofile up to the given arities.
FiniteProperad terminal_properad(int max_inputs, int max_outputs);

// True when every connected vertex-induced subgraph has at most the given
// numbers of inputs and outputs.
bool arity_bounded(const WiringGraph& g, int max_inputs, int max_outputs);

}  // namespace properad
