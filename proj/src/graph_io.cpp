#include "properad/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "properad/error.hpp"

namespace properad {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

int parse_int(std::size_t line, const std::string& s, const std::string& what) {
  int value = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw ParseError(line, "expected an integer for " + what + ", got '" + s + "'");
  }
  if (value < 0) throw ParseError(line, what + " must be nonnegative");
  return value;
}

std::string value_of(std::size_t line, const std::string& token, const std::string& key) {
  const std::string prefix = key + "=";
  if (token.rfind(prefix, 0) != 0) {
    throw ParseError(line, "expected " + prefix + "..., got '" + token + "'");
  }
  return token.substr(prefix.size());
}

void check_id(std::size_t line, const std::string& id, const std::string& what) {
  if (id.empty()) throw ParseError(line, "empty " + what + " id");
  if (id.find(':') != std::string::npos || id.find('=') != std::string::npos) {
    throw ParseError(line, what + " id '" + id + "' may not contain ':' or '='");
  }
}

// `boundary` is "in" for tails and "out" for heads; `port_dir` the opposite.
Endpoint parse_endpoint(std::size_t line, const std::string& text, const std::string& boundary,
                        const std::string& port_dir, const WiringGraph& g) {
  const auto parts = split(text, ':');
  if (parts.size() == 2 && parts[0] == boundary) {
    const int slot = parse_int(line, parts[1], "slot");
    if (slot < 1) throw ParseError(line, "slots are 1-based");
    return Endpoint::slot(slot);
  }
  if (parts.size() == 3 && parts[1] == port_dir) {
    if (!g.has_vertex(parts[0])) throw ParseError(line, "unknown vertex '" + parts[0] + "'");
    const int port = parse_int(line, parts[2], "port");
    if (port < 1) throw ParseError(line, "ports are 1-based");
    return Endpoint::at(parts[0], port);
  }
  throw ParseError(line, "malformed endpoint '" + text + "', expected <vertex>:" + port_dir +
                             ":<i> or " + boundary + ":<slot>");
}

}  // namespace

WiringGraph parse_graph(std::istream& in) {
  WiringGraph g;
  bool have_header = false;
  bool have_inputs = false;
  bool have_outputs = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string& kw = tok[0];
    if (!have_header && kw != "graph") throw ParseError(line, "expected 'graph <name>' first");
    if (kw == "graph") {
      if (have_header) throw ParseError(line, "duplicate 'graph' line");
      if (tok.size() != 2) throw ParseError(line, "expected 'graph <name>'");
      g.set_name(tok[1]);
      have_header = true;
    } else if (kw == "vertex") {
      if (tok.size() != 4) throw ParseError(line, "expected 'vertex <id> in=<k> out=<j>'");
      check_id(line, tok[1], "vertex");
      if (g.has_vertex(tok[1])) throw ParseError(line, "duplicate vertex id '" + tok[1] + "'");
      const int k = parse_int(line, value_of(line, tok[2], "in"), "in");
      const int j = parse_int(line, value_of(line, tok[3], "out"), "out");
      g.add_vertex(tok[1], k, j);
    } else if (kw == "edge") {
      if (tok.size() != 4 && tok.size() != 5) {
        throw ParseError(line, "expected 'edge <id> from=... to=... [color=<c>]'");
      }
      check_id(line, tok[1], "edge");
      if (g.has_edge(tok[1])) throw ParseError(line, "duplicate edge id '" + tok[1] + "'");
      const Endpoint tail = parse_endpoint(line, value_of(line, tok[2], "from"), "in", "out", g);
      const Endpoint head = parse_endpoint(line, value_of(line, tok[3], "to"), "out", "in", g);
      std::optional<Color> color;
      if (tok.size() == 5) {
        color = value_of(line, tok[4], "color");
        if (color->empty()) throw ParseError(line, "empty color");
      }
      g.add_edge(tok[1], tail, head, color);
    } else if (kw == "inputs" || kw == "outputs") {
      bool& seen = kw == "inputs" ? have_inputs : have_outputs;
      if (seen) throw ParseError(line, "duplicate '" + kw + "' line");
      seen = true;
      std::vector<EdgeId> ids(tok.begin() + 1, tok.end());
      std::set<EdgeId> distinct;
      for (const auto& id : ids) {
        if (!g.has_edge(id)) throw ParseError(line, "unknown edge '" + id + "'");
        if (!distinct.insert(id).second) throw ParseError(line, "edge '" + id + "' listed twice");
      }
      if (kw == "inputs") {
        g.set_inputs(std::move(ids));
      } else {
        g.set_outputs(std::move(ids));
      }
    } else {
      throw ParseError(line, "unknown keyword '" + kw + "'");
    }
  }
  if (!have_header) throw ParseError(line == 0 ? 1 : line, "empty graph file");
  return g;
}

WiringGraph parse_graph_string(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

WiringGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_graph(in);
}

std::string print_graph(const WiringGraph& g) {
  std::ostringstream out;
  out << "graph " << (g.name().empty() ? "G" : g.name()) << "\n";
  for (const Vertex& v : g.vertices()) {
    out << "vertex " << v.id << " in=" << v.in_arity << " out=" << v.out_arity << "\n";
  }
  for (const Edge& e : g.edges()) {
    out << "edge " << e.id << " from=";
    if (e.tail.is_slot()) {
      out << "in:" << e.tail.index;
    } else {
      out << *e.tail.vertex << ":out:" << e.tail.index;
    }
    out << " to=";
    if (e.head.is_slot()) {
      out << "out:" << e.head.index;
    } else {
      out << *e.head.vertex << ":in:" << e.head.index;
    }
    if (e.color) out << " color=" << *e.color;
    out << "\n";
  }
  out << "inputs";
  for (const auto& id : g.inputs()) out << " " << id;
  out << "\noutputs";
  for (const auto& id : g.outputs()) out << " " << id;
  out << "\n";
  return out.str();
}

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string dot_end(const Endpoint& p, bool tail) {
  if (p.is_slot()) return dot_quote(std::string(tail ? "in:" : "out:") + std::to_string(p.index));
  return dot_quote(*p.vertex);
}

}  // namespace

std::string export_dot(const WiringGraph& g) {
  std::vector<const Vertex*> vertices;
  for (const Vertex& v : g.vertices()) vertices.push_back(&v);
  std::sort(vertices.begin(), vertices.end(), [](const Vertex* a, const Vertex* b) { return a->id < b->id; });
  std::vector<const Edge*> edges;
  for (const Edge& e : g.edges()) edges.push_back(&e);
  std::sort(edges.begin(), edges.end(), [](const Edge* a, const Edge* b) { return a->id < b->id; });

  std::ostringstream out;
  out << "digraph " << dot_quote(g.name().empty() ? "G" : g.name()) << " {\n";
  out << "  rankdir=TB;\n";
  for (const Vertex* v : vertices) out << "  " << dot_quote(v->id) << " [shape=circle];\n";
  for (std::size_t k = 1; k <= g.inputs().size(); ++k) {
    out << "  " << dot_quote("in:" + std::to_string(k)) << " [shape=point, style=invis];\n";
  }
  for (std::size_t k = 1; k <= g.outputs().size(); ++k) {
    out << "  " << dot_quote("out:" + std::to_string(k)) << " [shape=point, style=invis];\n";
  }
  for (const Edge* e : edges) {
    const std::string label = e->color ? e->id + " : " + *e->color : e->id;
    out << "  " << dot_end(e->tail, true) << " -> " << dot_end(e->head, false) << " [label=" << dot_quote(label)
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace properad
