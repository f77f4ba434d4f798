#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "properad/cli.hpp"
#include "properad/graph_io.hpp"
#include "properad/json_io.hpp"
#include "support.hpp"

using namespace properad;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result kit(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Runs with the working directory set to `dir`.
class InDirectory {
 public:
  explicit InDirectory(const fs::path& dir) : previous_(fs::current_path()) { fs::current_path(dir); }
  ~InDirectory() { fs::current_path(previous_); }

 private:
  fs::path previous_;
};

const std::string mutations = test::data_path("mutations");

}  // namespace

TEST_CASE("the mutation corpus yields the recorded exit codes and witnesses") {
  const Json manifest = load_json(mutations + "/manifest.json");
  InDirectory here(mutations);
  for (const auto& c : manifest["cases"]) {
    const auto args = c["args"].get<std::vector<std::string>>();
    CAPTURE(c.dump());
    const Result r = kit(args);
    CHECK(r.code == c["exit"].get<int>());
    if (c.contains("witness")) CHECK(((r.out + r.err).find(c["witness"].get<std::string>()) != std::string::npos));
    if (r.code == cli::check_failed) {
      const Json report = parse_json(r.out);
      CHECK(report["ok"] == false);
      CHECK(!report["witnesses"].empty());
    }
  }
}

TEST_CASE("factoring the worked example passes through a two-vertex graph") {
  const Result r = kit({"factor", mutations + "/factor_example.json"});
  REQUIRE(r.code == 0);
  const Json j = parse_json(r.out);
  const WiringGraph middle = parse_graph_string(j["middle"].get<std::string>());
  CHECK(middle.num_vertices() == 2);
  CHECK(middle.has_vertex("u"));
  CHECK(middle.has_vertex("x"));
  CHECK(j["collapsed"] == Json::array({"v"}));
}

TEST_CASE("graph files print back to themselves") {
  for (const auto& dir : {test::data_path(""), mutations}) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() != ".graph" || entry.path().stem() == "malformed") continue;
      CAPTURE(entry.path().string());
      const WiringGraph g = load_graph(entry.path().string());
      CHECK(parse_graph_string(print_graph(g)) == g);
    }
  }
}

TEST_CASE("output is deterministic for a fixed seed") {
  const std::string random = (fs::temp_directory_path() / "properad_kit_random.json").string();
  {
    std::ofstream out(random);
    out << R"({"random": {"colors": 2, "ops": 2, "weights": 2, "max_inputs": 1, "max_outputs": 1}})";
  }
  const Result a = kit({"nerve", random, "--bound", "2", "--seed", "7"});
  const Result b = kit({"nerve", random, "--bound", "2", "--seed", "7"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const Result h1 = kit({"hom", test::data_path("tree_T.graph"), test::data_path("tree_T.graph")});
  const Result h2 = kit({"hom", test::data_path("tree_T.graph"), test::data_path("tree_T.graph")});
  CHECK(h1.out == h2.out);
  fs::remove(random);
}

TEST_CASE("the default bound comes from the environment") {
  const std::string tree = test::data_path("tree_T.graph");
  ::setenv("PROPERAD_KIT_BOUND", "1", 1);
  const Result one = kit({"free", tree});
  ::setenv("PROPERAD_KIT_BOUND", "x", 1);
  const Result bad = kit({"free", tree});
  ::unsetenv("PROPERAD_KIT_BOUND");
  const Result flag = kit({"free", tree, "--bound", "1"});
  CHECK(one.code == 0);
  CHECK(one.out == flag.out);
  CHECK(bad.code == cli::input_error);
  CHECK(bad.err.find("PROPERAD_KIT_BOUND") != std::string::npos);
}

TEST_CASE("verbs produce their documented outputs") {
  const std::string tree = test::data_path("tree_T.graph");
  SUBCASE("export-dot") {
    const Result r = kit({"export-dot", tree});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("digraph", 0) == 0);
  }
  SUBCASE("substitute") {
    const Result r = kit({"substitute", test::data_path("subst_G.graph"), "x", test::data_path("subst_P.graph"),
                          "--format", "text"});
    REQUIRE(r.code == 0);
    CHECK(parse_graph_string(r.out).num_vertices() == 3);
  }
  SUBCASE("codegen") {
    const Result r = kit({"codegen", test::data_path("reedy_G.graph"), "v", "--format", "text"});
    REQUIRE(r.code == 0);
    CHECK(parse_graph_string(r.out).num_vertices() == 2);
  }
  SUBCASE("codegen of a vertex that is not (1,1)") {
    CHECK(kit({"codegen", tree, "v"}).code == cli::input_error);
  }
  SUBCASE("cofaces") {
    const Result r = kit({"cofaces", tree});
    REQUIRE(r.code == 0);
    CHECK(parse_json(r.out)["count"].get<int>() > 0);
  }
  SUBCASE("hom counts the monotone maps between linear graphs") {
    const std::string l1 = (fs::temp_directory_path() / "properad_kit_l1.graph").string();
    const std::string l2 = (fs::temp_directory_path() / "properad_kit_l2.graph").string();
    std::ofstream(l1) << print_graph(make_linear_graph(1));
    std::ofstream(l2) << print_graph(make_linear_graph(2));
    const Result r = kit({"hom", l1, l2});
    REQUIRE(r.code == 0);
    CHECK(parse_json(r.out)["count"] == 6);
    fs::remove(l1);
    fs::remove(l2);
  }
  SUBCASE("is-nerve returns the reconstructed properad") {
    const Result r = kit({"is-nerve", mutations + "/nerve.json", "--bound", "2"});
    REQUIRE(r.code == 0);
    const Json j = parse_json(r.out);
    CHECK(j["properad"]["colors"].size() == 2);
  }
  SUBCASE("help") {
    const Result r = kit({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("check-inner-kan") != std::string::npos);
  }
  SUBCASE("missing arguments") {
    CHECK(kit({"iso", tree}).code == cli::input_error);
  }
}
