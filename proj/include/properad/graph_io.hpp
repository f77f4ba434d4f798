#pragma once

#include <istream>
#include <string>

#include "properad/wiring_graph.hpp"

namespace properad {

// Line-oriented graph format:
//
//   graph <name>
//   vertex <vid> in=<k> out=<j>
//   edge <eid> from=<vid>:out:<i>|in:<slot> to=<vid>:in:<i>|out:<slot> [color=<c>]
//   inputs <eid> ...
//   outputs <eid> ...
//
// Blank lines and lines starting with '#' are ignored.  Parsing is strict:
// unknown keywords, duplicate ids and dangling references raise ParseError
// with the offending line.  Graph invariants are not checked here; see
// validate_graph().
WiringGraph parse_graph(std::istream& in);
WiringGraph parse_graph_string(const std::string& text);
WiringGraph load_graph(const std::string& path);

std::string print_graph(const WiringGraph& g);

// Graphviz rendering: one node per vertex, one arrow per edge from tail to
// head (inputs on top), legs attached to invisible anchor nodes "in:k" and
// "out:k", edges labelled by id and color.  Vertices and edges are listed
// sorted by id.
std::string export_dot(const WiringGraph& g);

}  // namespace properad
