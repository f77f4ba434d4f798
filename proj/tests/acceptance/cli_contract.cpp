#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "../support.hpp"
#include "common.hpp"
#include "properad/graph_io.hpp"
#include "properad/json_io.hpp"

namespace properad::acceptance {

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Runs the command-line tool in `dir`; stderr is folded into the output.
Run kit(const std::string& dir, const std::vector<std::string>& args) {
  std::string command = "cd " + quote(dir) + " && " + quote(PROPERAD_KIT);
  for (const auto& a : args) command += " " + quote(a);
  command += " 2>&1";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buffer;
  std::size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) r.out.append(buffer.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

Outcome criterion_cli_contract() {
  Stopwatch clock;
  Outcome out;

  // Parse/print round trip over every graph file of the corpus.
  std::size_t graphs = 0;
  for (const auto& entry : fs::recursive_directory_iterator(PROPERAD_TEST_DATA)) {
    if (entry.path().extension() != ".graph" || entry.path().stem() == "malformed") continue;
    ++graphs;
    const WiringGraph g = load_graph(entry.path().string());
    const std::string printed = print_graph(g);
    if (!(parse_graph_string(printed) == g) || print_graph(parse_graph_string(printed)) != printed) {
      out.fail("round trip changes " + entry.path().filename().string());
    }
  }

  // Exit codes and witnesses of the mutation corpus, each run twice.
  const std::string dir = test::data_path("mutations");
  const Json manifest = load_json(dir + "/manifest.json");
  std::size_t cases = 0;
  for (const auto& c : manifest["cases"]) {
    ++cases;
    const auto args = c["args"].get<std::vector<std::string>>();
    std::string line;
    for (const auto& a : args) line += " " + a;
    const Run first = kit(dir, args);
    const Run second = kit(dir, args);
    if (first.code != c["exit"].get<int>()) {
      out.fail("exit " + std::to_string(first.code) + " instead of " + std::to_string(c["exit"].get<int>()) + ":" +
               line);
    }
    if (c.contains("witness") && first.out.find(c["witness"].get<std::string>()) == std::string::npos) {
      out.fail("missing witness '" + c["witness"].get<std::string>() + "':" + line);
    }
    if (first.code == 1) {
      try {
        const Json report = parse_json(first.out);
        if (report.value("ok", true) || report["witnesses"].empty()) out.fail("empty witness report:" + line);
      } catch (const std::exception&) {
        out.fail("report is not JSON:" + line);
      }
    }
    if (first.out != second.out || first.code != second.code) out.fail("output differs between runs:" + line);
  }

  // A seeded random properad gives the same nerve twice.
  const std::string random = (fs::temp_directory_path() / "properad_acceptance_random.json").string();
  std::ofstream(random) << R"({"random": {"colors": 3, "ops": 3, "max_inputs": 2, "max_outputs": 1}})";
  const Run a = kit(dir, {"nerve", random, "--bound", "2", "--seed", "11"});
  const Run b = kit(dir, {"nerve", random, "--bound", "2", "--seed", "11"});
  if (a.code != 0 || a.out != b.out) out.fail("seeded nerve is not reproducible");
  fs::remove(random);

  out.detail = std::to_string(graphs) + " graph files round-tripped, " + std::to_string(cases) +
               " corpus cases run twice, " + std::to_string(static_cast<int>(clock.seconds())) + " s";
  return out;
}

}  // namespace properad::acceptance
