#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include <json.hpp>

#include "properad/gamma.hpp"
#include "properad/presheaf.hpp"
#include "properad/properad.hpp"
#include "properad/wiring_graph.hpp"

namespace properad {

using Json = nlohmann::ordered_json;

// Parses JSON text; syntax errors raise ParseError with the line number.
Json parse_json(const std::string& text);
Json load_json(const std::string& path);

// Graphs inside JSON documents are strings: either the line format itself
// (anything containing a newline) or a path to a .graph file, resolved
// against `base_dir`.
WiringGraph graph_from_json(const Json& j, const std::string& base_dir = "");

// {"graph": <line format>, "edges": {id: label}, "vertices": {id: label}}
Json to_json(const DecoratedGraph& d);
DecoratedGraph decorated_from_json(const Json& j, const std::string& base_dir = "");

// {"source": graph, "target": graph, "f0": {edge: edge}, "f1": {vertex: decorated}}
Json to_json(const GammaMorphism& f);
GammaMorphism morphism_from_json(const Json& j, const std::string& base_dir = "");
// Only f0 and f1, for maps whose ends are known from context.
Json to_json_body(const GammaMorphism& f);
GammaMorphism morphism_from_json_body(const Json& j, std::shared_ptr<const WiringGraph> source,
                                      std::shared_ptr<const WiringGraph> target);

// Explicit tables:
//   {"max_inputs", "max_outputs", "colors": [...],
//    "operations": [{"inputs", "outputs", "tokens"}],
//    "units": {color: token},
//    "swaps": [{"inputs", "outputs", "op", "in_swaps", "out_swaps"}],
//    "compositions": [{"u": {"inputs", "outputs"}, "w": {...}, "grafts": [[i, j]],
//                      "op_u", "op_w", "result"}]}
// or a generated family:
//   {"residue": {"colors", "ops", "weights", "max_inputs", "max_outputs", "weight", "charge"}}
//   {"random": {"colors", "ops", "weights", "max_inputs", "max_outputs"[, "seed"]}}
// A random properad without its own seed draws from `seed`.
Json to_json(const FiniteProperad& p);
FiniteProperad properad_from_json(const Json& j, std::uint64_t seed = 0);

// {"bound": {"vertices", "inputs", "outputs"},
//  "shapes": [{"form", "graph", "elements": [...]}],
//  "actions": [{"source": form, "target": form, "map": {"f0", "f1"}, "table": {x: y}}]}
// Shapes are the canonical representatives of the truncation; actions are
// given for every generating map (TabulatedSet::generators).
Json to_json(const GraphicalSet& x);
std::shared_ptr<TabulatedSet> graphical_set_from_json(const Json& j);

Json to_json(const CheckReport& r);
Json to_json(const ProperadReport& r);
Json to_json(const ValidationReport& r);

}  // namespace properad
