#include "properad/json_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "properad/error.hpp"
#include "properad/graph_io.hpp"

namespace properad {

namespace {

// Structure errors inside a document are reported with a path-like context.
[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ParseError(0, where + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing \"") + key + "\"");
  return *it;
}

template <typename T>
T as(const Json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    bad(where, e.what());
  }
}

template <typename T>
T field(const Json& j, const char* key, const std::string& where) {
  return as<T>(member(j, key, where), where + "." + key);
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  return it == j.end() ? fallback : as<T>(*it, where + "." + key);
}

std::map<std::string, std::string> string_map(const Json& j, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object of strings");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) out[k] = as<std::string>(v, where + "." + k);
  return out;
}

Json profile_json(const Biprofile& p) { return Json{{"inputs", p.inputs}, {"outputs", p.outputs}}; }

Biprofile profile_from_json(const Json& j, const std::string& where) {
  return Biprofile{field<std::vector<Color>>(j, "inputs", where), field<std::vector<Color>>(j, "outputs", where)};
}

RandomProperadOptions family_options(const Json& j, const std::string& where) {
  RandomProperadOptions o;
  o.colors = field_or(j, "colors", o.colors, where);
  o.ops = field_or(j, "ops", o.ops, where);
  o.weights = field_or(j, "weights", o.weights, where);
  o.max_inputs = field_or(j, "max_inputs", o.max_inputs, where);
  o.max_outputs = field_or(j, "max_outputs", o.max_outputs, where);
  if (o.colors < 0 || o.ops < 1 || o.weights < 1 || o.max_inputs < 0 || o.max_outputs < 0) {
    bad(where, "sizes must be nonnegative and ops, weights positive");
  }
  return o;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + end, '\n'));
    throw ParseError(line, "invalid JSON: " + std::string(e.what()));
  }
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_json(text.str());
}

WiringGraph graph_from_json(const Json& j, const std::string& base_dir) {
  const auto text = as<std::string>(j, "graph");
  if (text.find('\n') != std::string::npos) return parse_graph_string(text);
  std::filesystem::path path(text);
  if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
  return load_graph(path.string());
}

Json to_json(const DecoratedGraph& d) {
  return Json{{"graph", print_graph(d.shape)}, {"edges", d.edge_decoration}, {"vertices", d.vertex_decoration}};
}

DecoratedGraph decorated_from_json(const Json& j, const std::string& base_dir) {
  DecoratedGraph d;
  d.shape = graph_from_json(member(j, "graph", "decorated graph"), base_dir);
  if (j.contains("edges")) d.edge_decoration = string_map(j["edges"], "decorated graph.edges");
  if (j.contains("vertices")) d.vertex_decoration = string_map(j["vertices"], "decorated graph.vertices");
  return d;
}

Json to_json_body(const GammaMorphism& f) {
  Json f1 = Json::object();
  for (const auto& [v, d] : f.f1) f1[v] = to_json(d);
  return Json{{"f0", f.f0}, {"f1", f1}};
}

GammaMorphism morphism_from_json_body(const Json& j, std::shared_ptr<const WiringGraph> source,
                                      std::shared_ptr<const WiringGraph> target) {
  GammaMorphism f;
  f.source = std::move(source);
  f.target = std::move(target);
  f.f0 = string_map(member(j, "f0", "morphism"), "morphism.f0");
  const Json& f1 = member(j, "f1", "morphism");
  if (!f1.is_object()) bad("morphism.f1", "expected an object");
  for (const auto& [v, d] : f1.items()) f.f1[v] = decorated_from_json(d);
  for (const Edge& e : f.source->edges()) {
    if (!f.f0.count(e.id)) bad("morphism.f0", "no image for edge " + e.id);
    if (!f.target->has_edge(f.f0.at(e.id))) bad("morphism.f0", "unknown target edge " + f.f0.at(e.id));
  }
  for (const Vertex& v : f.source->vertices()) {
    if (!f.f1.count(v.id)) bad("morphism.f1", "no image for vertex " + v.id);
  }
  return f;
}

Json to_json(const GammaMorphism& f) {
  Json j{{"source", print_graph(*f.source)}, {"target", print_graph(*f.target)}};
  const Json body = to_json_body(f);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j;
}

GammaMorphism morphism_from_json(const Json& j, const std::string& base_dir) {
  auto source = share(graph_from_json(member(j, "source", "morphism"), base_dir));
  auto target = share(graph_from_json(member(j, "target", "morphism"), base_dir));
  return morphism_from_json_body(j, std::move(source), std::move(target));
}

Json to_json(const FiniteProperad& given) {
  const FiniteProperad p = materialize(given);
  Json ops = Json::array();
  for (const auto& [profile, tokens] : p.ops) {
    Json o = profile_json(profile);
    o["tokens"] = tokens;
    ops.push_back(o);
  }
  Json swaps = Json::array();
  for (const auto& [key, s] : p.swaps) {
    Json o = profile_json(key.first);
    o["op"] = key.second;
    o["in_swaps"] = s.in_swaps;
    o["out_swaps"] = s.out_swaps;
    swaps.push_back(o);
  }
  Json compositions = Json::array();
  for (const auto& [key, result] : p.table) {
    Json grafts = Json::array();
    for (const auto& [i, k] : key.grafts) grafts.push_back({i, k});
    compositions.push_back(Json{{"u", profile_json(key.u)},
                                {"w", profile_json(key.w)},
                                {"grafts", grafts},
                                {"op_u", key.op_u},
                                {"op_w", key.op_w},
                                {"result", result}});
  }
  return Json{{"max_inputs", p.max_inputs}, {"max_outputs", p.max_outputs}, {"colors", p.colors},
              {"operations", ops},          {"units", p.units},             {"swaps", swaps},
              {"compositions", compositions}};
}

FiniteProperad properad_from_json(const Json& j, std::uint64_t seed) {
  if (!j.is_object()) bad("properad", "expected an object");
  if (j.contains("residue")) {
    const Json& r = j["residue"];
    const auto options = family_options(r, "residue");
    const auto weight = field<std::vector<int>>(r, "weight", "residue");
    const auto charge = field<std::vector<int>>(r, "charge", "residue");
    if (static_cast<int>(weight.size()) != options.colors || static_cast<int>(charge.size()) != options.colors) {
      bad("residue", "weight and charge need one entry per color");
    }
    return residue_properad(options, weight, charge);
  }
  if (j.contains("random")) {
    const Json& r = j["random"];
    std::mt19937_64 rng(field_or<std::uint64_t>(r, "seed", seed, "random"));
    return random_properad(rng, family_options(r, "random"));
  }
  FiniteProperad p;
  p.max_inputs = field<int>(j, "max_inputs", "properad");
  p.max_outputs = field<int>(j, "max_outputs", "properad");
  p.colors = field<std::vector<Color>>(j, "colors", "properad");
  for (const auto& o : field<Json>(j, "operations", "properad")) {
    p.ops[profile_from_json(o, "operations")] = field<std::vector<OpToken>>(o, "tokens", "operations");
  }
  if (j.contains("units")) p.units = string_map(j["units"], "units");
  for (const auto& o : field_or<Json>(j, "swaps", Json::array(), "properad")) {
    const OpToken op = field<OpToken>(o, "op", "swaps");
    p.swaps[{profile_from_json(o, "swaps"), op}] = FiniteProperad::Swaps{
        field_or<std::vector<OpToken>>(o, "in_swaps", {}, "swaps"),
        field_or<std::vector<OpToken>>(o, "out_swaps", {}, "swaps")};
  }
  for (const auto& o : field_or<Json>(j, "compositions", Json::array(), "properad")) {
    PgcKey key;
    key.u = profile_from_json(member(o, "u", "compositions"), "compositions.u");
    key.w = profile_from_json(member(o, "w", "compositions"), "compositions.w");
    key.grafts = field<std::vector<std::pair<int, int>>>(o, "grafts", "compositions");
    key.op_u = field<OpToken>(o, "op_u", "compositions");
    key.op_w = field<OpToken>(o, "op_w", "compositions");
    try {
      composite_profile(key);
    } catch (const Error& e) {
      bad("compositions", e.what());
    }
    p.table[key] = field<OpToken>(o, "result", "compositions");
  }
  return p;
}

Json to_json(const GraphicalSet& x) {
  const ShapeIndex& index = *x.index();
  const auto& o = index.options();
  Json shapes = Json::array();
  for (std::size_t i = 0; i < index.size(); ++i) {
    shapes.push_back(
        Json{{"form", index.form(i)}, {"graph", print_graph(*index.graph(i))}, {"elements", x.elements(i)}});
  }
  Json actions = Json::array();
  for (const auto& g : TabulatedSet::generators(index)) {
    const std::size_t t = index.index_of(*g.target);
    const auto& elements = x.elements(t);
    const auto values = x.restrict_all(g, elements);
    Json table = Json::object();
    for (std::size_t k = 0; k < elements.size(); ++k) table[elements[k]] = values[k];
    actions.push_back(Json{{"source", index.form(index.index_of(*g.source))},
                           {"target", index.form(t)},
                           {"map", to_json_body(g)},
                           {"table", table}});
  }
  return Json{{"bound", {{"vertices", o.max_vertices}, {"inputs", o.max_inputs}, {"outputs", o.max_outputs}}},
              {"shapes", shapes},
              {"actions", actions}};
}

std::shared_ptr<TabulatedSet> graphical_set_from_json(const Json& j) {
  const Json& b = member(j, "bound", "graphical set");
  TruncationOptions options{field<int>(b, "vertices", "bound"), field<int>(b, "inputs", "bound"),
                            field<int>(b, "outputs", "bound"), 0};
  if (options.max_vertices < 0 || options.max_inputs < 0 || options.max_outputs < 0) {
    bad("bound", "bounds must be nonnegative");
  }
  auto index = std::make_shared<const ShapeIndex>(options);
  std::map<std::string, std::size_t> by_form;
  for (std::size_t i = 0; i < index->size(); ++i) by_form[index->form(i)] = i;
  auto shape = [&](const std::string& form, const std::string& where) {
    auto it = by_form.find(form);
    if (it == by_form.end()) bad(where, "not a shape of the truncation: " + form);
    return it->second;
  };

  auto x = std::make_shared<TabulatedSet>(index);
  std::set<std::size_t> listed;
  for (const auto& s : field<Json>(j, "shapes", "graphical set")) {
    const std::size_t i = shape(field<std::string>(s, "form", "shapes"), "shapes");
    if (!listed.insert(i).second) bad("shapes", "shape listed twice: " + index->form(i));
    try {
      x->set_elements(i, field<std::vector<std::string>>(s, "elements", "shapes"));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      bad("shapes", e.what());
    }
  }
  for (const auto& a : field<Json>(j, "actions", "graphical set")) {
    const std::size_t s = shape(field<std::string>(a, "source", "actions"), "actions.source");
    const std::size_t t = shape(field<std::string>(a, "target", "actions"), "actions.target");
    GammaMorphism f = morphism_from_json_body(member(a, "map", "actions"), index->graph(s), index->graph(t));
    const auto validity = check_gamma_morphism(f);
    if (!validity.ok) bad("actions", "not a graphical map: " + validity.witness);
    try {
      x->set_action(f, string_map(member(a, "table", "actions"), "actions.table"));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      bad("actions", std::string(e.what()) + " (" + index->form(s) + " -> " + index->form(t) + ")");
    }
  }
  for (const auto& g : TabulatedSet::generators(*index)) {
    if (!x->actions().count(arrow_key(*index, g))) {
      bad("actions", "no table for a generating map " + index->form(index->index_of(*g.source)) + " -> " +
                         index->form(index->index_of(*g.target)));
    }
  }
  return x;
}

Json to_json(const CheckReport& r) {
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses) {
    witnesses.push_back(Json{{"check", w.check}, {"shape", w.shape}, {"detail", w.detail}});
  }
  return Json{{"ok", r.ok}, {"checked", r.checked}, {"witnesses", witnesses}};
}

Json to_json(const ProperadReport& r) {
  Json witnesses = Json::array();
  for (const auto& v : r.violations) {
    Json w{{"check", v.check}, {"detail", v.witness}};
    if (v.graph) w["graph"] = print_graph(*v.graph);
    witnesses.push_back(w);
  }
  return Json{{"ok", r.ok}, {"checked", r.checked}, {"witnesses", witnesses}};
}

Json to_json(const ValidationReport& r) {
  Json witnesses = Json::array();
  for (const auto& v : r.violations) witnesses.push_back(Json{{"check", v.invariant}, {"detail", v.witness}});
  return Json{{"ok", r.ok}, {"witnesses", witnesses}};
}

}  // namespace properad
