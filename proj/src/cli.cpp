#include "properad/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "properad/error.hpp"
#include "properad/gamma.hpp"
#include "properad/free.hpp"
#include "properad/graph_io.hpp"
#include "properad/isomorphism.hpp"
#include "properad/json_io.hpp"
#include "properad/presheaf.hpp"
#include "properad/properad.hpp"
#include "properad/substitution.hpp"

namespace properad::cli {

namespace {

// An input problem already prefixed with the file it came from.
class InputError : public Error {
 public:
  using Error::Error;
};

struct Settings {
  int bound = 4;
  std::uint64_t seed = 0;
  bool force = false;
  std::string format = "json";
  bool unique = false;
  bool strict = false;
  bool verbatim = false;
  std::vector<std::string> inputs;
  std::array<std::string, 3> positional;
};

template <typename F>
auto from_file(const std::string& path, F load) -> decltype(load()) {
  try {
    return load();
  } catch (const Error& e) {
    throw InputError(path + ": " + e.what());
  }
}

WiringGraph read_graph(const std::string& path) {
  return from_file(path, [&] { return load_graph(path); });
}

std::string directory_of(const std::string& path) { return std::filesystem::path(path).parent_path().string(); }

class Command {
 public:
  Command(const Settings& settings, std::ostream& out) : s_(settings), out_(out) {}

  int validate() {
    const auto report = validate_graph(read_graph(input(0)));
    return finish("validate", to_json(report), report.ok);
  }

  int iso() {
    const auto a = read_graph(input(0));
    const auto b = read_graph(input(1));
    const auto found = find_isomorphisms(a, b, s_.strict ? IsoMode::strict : IsoMode::weak, 1);
    if (found.empty()) {
      Json report{{"ok", false},
                  {"witnesses",
                   Json::array({Json{{"check", "isomorphism"},
                                     {"detail", std::string("no ") + (s_.strict ? "strict" : "weak") +
                                                    " isomorphism; canonical forms " + canonical_form(a) +
                                                    " and " + canonical_form(b)}}})}};
      return finish("iso", report, false);
    }
    return finish("iso",
                  Json{{"ok", true}, {"vertex_map", found.front().vertex_map}, {"edge_map", found.front().edge_map}},
                  true);
  }

  int substitute() {
    const auto host = read_graph(input(0));
    const auto guest = read_graph(input(2));
    SubstitutionAssignment a{input(1), guest, {}, {}, !s_.verbatim};
    return emit_graph(properad::substitute(host, a));
  }

  int cofaces() {
    const auto k = read_graph(input(0));
    Json list = Json::array();
    std::ostringstream text;
    for (const auto& gen : enumerate_cofaces_into(k)) {
      Json j{{"kind", to_string(gen.kind)}, {"source", print_graph(gen.source)}};
      if (!gen.vertex.empty()) j["vertex"] = gen.vertex;
      if (!gen.slot.empty()) j["slot"] = gen.slot;
      if (!gen.edge.empty()) j["edge"] = gen.edge;
      text << to_string(gen.kind) << " " << (gen.vertex.empty() ? gen.edge : gen.vertex) << " from "
           << canonical_form(gen.source) << "\n";
      list.push_back(j);
    }
    return emit(Json{{"count", list.size()}, {"cofaces", list}},
                std::to_string(list.size()) + " cofaces\n" + text.str());
  }

  int codegen() {
    const auto g = read_graph(input(0));
    return emit_graph(codegeneracy(g, input(1)).target);
  }

  int factor() {
    const GammaMorphism f = from_file(input(0), [&] {
      return morphism_from_json(load_json(input(0)), directory_of(input(0)));
    });
    const auto validity = check_gamma_morphism(f);
    if (!validity.ok) {
      return finish("factor",
                    Json{{"ok", false},
                         {"witnesses", Json::array({Json{{"check", "subgraph image"}, {"detail", validity.witness}}})}},
                    false);
    }
    const auto r = reedy_factorize(f);
    const WiringGraph& middle = *r.negative.target;
    Json j{{"middle", print_graph(middle)},
           {"collapsed", r.collapsed},
           {"negative", to_json(r.negative)},
           {"positive", to_json(r.positive)}};
    std::ostringstream text;
    text << "middle graph (" << middle.num_vertices() << " vertices):\n" << print_graph(middle) << "collapsed:";
    for (const auto& v : r.collapsed) text << " " << v;
    text << "\n";
    return emit(j, text.str());
  }

  int hom() {
    auto h = share(read_graph(input(0)));
    auto g = share(read_graph(input(1)));
    auto maps = hom_set(h, g);
    std::vector<std::pair<std::string, const GammaMorphism*>> sorted;
    for (const auto& f : maps) sorted.emplace_back(morphism_key(f), &f);
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Json list = Json::array();
    std::ostringstream text;
    text << sorted.size() << " morphisms\n";
    for (const auto& [key, f] : sorted) {
      list.push_back(to_json_body(*f));
      text << key << "\n";
    }
    return emit(Json{{"count", sorted.size()}, {"morphisms", list}}, text.str());
  }

  int free() {
    const auto g = read_graph(input(0));
    std::vector<std::pair<std::string, Json>> sorted;
    for (const auto& d : free_elements_all(g, s_.bound)) {
      Json j = to_json(d);
      sorted.emplace_back(j.dump(), j);
    }
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Json list = Json::array();
    for (auto& [key, j] : sorted) list.push_back(std::move(j));
    return emit(Json{{"count", list.size()}, {"elements", list}},
                std::to_string(list.size()) + " elements with at most " + std::to_string(s_.bound) + " vertices\n");
  }

  int nerve() {
    const FiniteProperad p = read_properad();
    if (!s_.force) {
      const auto axioms = check_properad_axioms(p, std::min(s_.bound, 3));
      if (!axioms.ok) return finish("nerve", to_json(axioms), false);
    }
    auto index = std::make_shared<const ShapeIndex>(TruncationOptions{s_.bound, p.max_inputs, p.max_outputs, 0});
    out_ << to_json(*nerve_set(index, p)).dump(s_.format == "json" ? 2 : -1) << "\n";
    return success;
  }

  int check_properad() {
    const auto report = check_properad_axioms(read_properad(), s_.bound);
    return finish("check-properad", to_json(report), report.ok);
  }

  int check_segal() {
    std::shared_ptr<TabulatedSet> x;
    if (int code = read_graphical_set("check-segal", x); code != success) return code;
    const auto report = is_segal(*x, s_.bound);
    return finish("check-segal", to_json(report), report.ok);
  }

  int check_inner_kan() {
    std::shared_ptr<TabulatedSet> x;
    if (int code = read_graphical_set("check-inner-kan", x); code != success) return code;
    const auto report = s_.unique ? has_unique_inner_fillers(*x, s_.bound) : is_inner_kan(*x, s_.bound);
    return finish("check-inner-kan", to_json(report), report.ok);
  }

  int is_nerve() {
    std::shared_ptr<TabulatedSet> x;
    if (int code = read_graphical_set("is-nerve", x); code != success) return code;
    const auto result = properad::is_nerve(*x, s_.bound);
    Json j = to_json(result.report);
    if (result.properad) j["properad"] = to_json(*result.properad);
    return finish("is-nerve", j, result.report.ok);
  }

  int export_dot() {
    out_ << properad::export_dot(read_graph(input(0)));
    return success;
  }

 private:
  const std::string& input(std::size_t i) const {
    if (i >= s_.inputs.size()) throw InputError("missing input argument " + std::to_string(i + 1));
    return s_.inputs[i];
  }

  FiniteProperad read_properad() {
    return from_file(input(0), [&] { return properad_from_json(load_json(input(0)), s_.seed); });
  }

  // Loads a graphical set and checks functoriality up to the bound (unless
  // forced); a failure is reported under `verb`.
  int read_graphical_set(const std::string& verb, std::shared_ptr<TabulatedSet>& x) {
    x = from_file(input(0), [&] { return graphical_set_from_json(load_json(input(0))); });
    if (s_.force) return success;
    const auto report = check_functoriality(*x, s_.bound);
    if (report.ok) return success;
    return finish(verb, to_json(report), false);
  }

  int emit(const Json& j, const std::string& text) {
    if (s_.format == "json") {
      out_ << j.dump(2) << "\n";
    } else {
      out_ << text;
    }
    return success;
  }

  int emit_graph(const WiringGraph& g) { return emit(Json{{"graph", print_graph(g)}}, print_graph(g)); }

  // A check report: exit 0 when ok, 1 with the witnesses otherwise.
  int finish(const std::string& verb, const Json& report, bool ok) {
    Json j{{"verb", verb}};
    for (const auto& [k, v] : report.items()) j[k] = v;
    if (s_.format == "json") {
      out_ << j.dump(2) << "\n";
    } else {
      out_ << verb << ": " << (ok ? "ok" : "FAILED");
      if (report.contains("checked")) out_ << " (" << report["checked"].get<std::size_t>() << " checks)";
      out_ << "\n";
      if (report.contains("witnesses")) {
        for (const auto& w : report["witnesses"]) {
          out_ << "  " << w.value("check", "") << " " << w.value("shape", "") << ": " << w.value("detail", "")
               << "\n";
        }
      }
    }
    return ok ? success : check_failed;
  }

  const Settings& s_;
  std::ostream& out_;
};

int default_bound() {
  const char* env = std::getenv("PROPERAD_KIT_BOUND");
  if (env == nullptr || *env == '\0') return 4;
  int value = 0;
  const char* end = env + std::char_traits<char>::length(env);
  auto [ptr, ec] = std::from_chars(env, end, value);
  if (ec != std::errc() || ptr != end || value < 0) {
    throw InputError(std::string("PROPERAD_KIT_BOUND is not a nonnegative integer: ") + env);
  }
  return value;
}

struct Verb {
  const char* name;
  const char* help;
  std::vector<const char*> inputs;
  int (Command::*run)();
};

const std::vector<Verb>& verbs() {
  static const std::vector<Verb> list = {
      {"validate", "Check the invariants of a wiring graph", {"graph"}, &Command::validate},
      {"iso", "Find an isomorphism between two graphs", {"first", "second"}, &Command::iso},
      {"substitute", "Substitute a graph into a vertex", {"host", "vertex", "guest"}, &Command::substitute},
      {"cofaces", "List the coface maps into a graph", {"graph"}, &Command::cofaces},
      {"codegen", "Collapse a (1,1) vertex to an edge", {"graph", "vertex"}, &Command::codegen},
      {"factor", "Factor a graphical map as degeneracy then face", {"morphism"}, &Command::factor},
      {"hom", "List the graphical maps between two graphs", {"source", "target"}, &Command::hom},
      {"free", "List elements of the free properad on a graph", {"graph"}, &Command::free},
      {"nerve", "Tabulate the nerve of a properad", {"properad"}, &Command::nerve},
      {"check-properad", "Check the properad axioms", {"properad"}, &Command::check_properad},
      {"check-segal", "Check the Segal condition of a graphical set", {"set"}, &Command::check_segal},
      {"check-inner-kan", "Check inner horn fillers of a graphical set", {"set"}, &Command::check_inner_kan},
      {"is-nerve", "Decide whether a graphical set is a nerve", {"set"}, &Command::is_nerve},
      {"export-dot", "Render a graph in Graphviz format", {"graph"}, &Command::export_dot},
  };
  return list;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  try {
    s.bound = default_bound();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }

  CLI::App app{"Wiring graphs, properads and graphical sets", "properad_kit"};
  app.require_subcommand(1, 1);
  app.add_option("--bound", s.bound, "Maximal number of vertices of checked shapes")->check(CLI::Range(0, 16));
  app.add_option("--seed", s.seed, "Seed for randomized inputs");
  app.add_flag("--force", s.force, "Load inputs despite failed axiom or functoriality checks");
  app.add_option("--format", s.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  std::map<CLI::App*, const Verb*> by_app;
  for (const Verb& v : verbs()) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    sub->fallthrough();
    for (std::size_t i = 0; i < v.inputs.size(); ++i) sub->add_option(v.inputs[i], s.positional.at(i))->required();
    if (std::string(v.name) == "iso") sub->add_flag("--strict", s.strict, "Respect port and slot order");
    if (std::string(v.name) == "substitute") {
      sub->add_flag("--verbatim", s.verbatim, "Keep guest ids instead of prefixing them with the vertex");
    }
    if (std::string(v.name) == "check-inner-kan") {
      sub->add_flag("--unique", s.unique, "Require exactly one filler per horn");
    }
    by_app[sub] = &v;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return success;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }

  const Verb& verb = *by_app.at(app.get_subcommands().front());
  s.inputs.assign(s.positional.begin(), s.positional.begin() + static_cast<long>(verb.inputs.size()));
  try {
    Command command(s, out);
    return (command.*verb.run)();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }
}

}  // namespace properad::cli
