#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

namespace fs = std::filesystem;
using consys::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Input documents shared by the suite, written once into a scratch directory.
const std::map<std::string, std::string> kFiles = {
    {"unipotent.json",
     R"({"version": 1, "system": {"case": {"kind": "2M", "q1": 2, "q2": 3},
         "B1": [["1", "0"], ["x^2 - x", "1"]], "B2": [["1", "0"], ["x^3 - x", "1"]]}})"},
    {"sextic.json",
     R"({"version": 1, "system": {"case": {"kind": "2M", "q1": 2, "q2": 3},
         "B1": [["1", "0"], ["x^12 - x^6", "1"]], "B2": [["1", "0"], ["x^18 - x^6", "1"]]}})"},
    {"violation.json", R"({"version": 1, "system": {"case": {"kind": "Q", "q": 2}, "A": [["0"]], "B": [["x"]]}})"},
    {"symbolic.json",
     R"({"version": 1, "constants": ["q"], "system": {"case": {"kind": "Q", "q": "q"}, "A": [["1"]], "B": [["q"]]}})"},
    {"undeclared.json", R"({"version": 1, "system": {"case": {"kind": "Q", "q": 2}, "A": [["t"]], "B": [["x"]]}})"},
    {"div0.json", R"({"version": 1, "system": {"case": {"kind": "Q", "q": 2}, "A": [["1/0"]], "B": [["x"]]}})"},
    {"garbage.json", R"({"version": 1, "system": )"},
    {"gauge.json", R"({"version": 1, "G": [["x", "1"], ["0", "1"]]})"},
    {"singular.json", R"({"version": 1, "G": [["x", "x"], ["1", "1"]]})"},
    {"delta.json",
     R"({"version": 1, "operator": {"case": {"kind": "Q", "q": 2}, "kind": "delta", "coeffs": ["-1", "1"]}})"},
    {"delta_exp.json",
     R"({"version": 1, "operator": {"case": {"kind": "Q", "q": 2}, "kind": "delta", "coeffs": ["-x", "1"]}})"},
    {"sigma.json",
     R"({"version": 1, "operator": {"case": {"kind": "Q", "q": 2}, "kind": "sigma", "coeffs": ["-2", "1"]}})"},
    {"geometric.json",
     R"({"version": 1, "operators": [{"case": {"kind": "M", "q": 2}, "kind": "sigma", "coeffs": ["-1", "1 + x"]}],
         "seed": {"coeffs": ["1", "1", "1", "1", "1", "1", "1", "1"], "prec": 8}})"},
    {"contradiction.json",
     R"({"version": 1, "operators": [{"case": {"kind": "M", "q": 2}, "kind": "sigma", "coeffs": ["-1", "1 + x"]}],
         "seed": {"coeffs": ["1", "2"], "prec": 2}})"},
    {"powers.json", R"({"version": 1, "automaton": {"base": 2, "transitions": [[0, 1], [1, 2], [2, 2]],
         "outputs": [0, 1, 0], "initial": 0}})"},
    {"flip.json", R"({"version": 1, "automaton": {"base": 2, "transitions": [[1, 0], [0, 1]],
         "outputs": [0, 1], "initial": 0}})"},
    // Multiples of 11 read most significant digit first: 110 states after reversal.
    {"mod11.json", R"({"version": 1, "automaton": {"base": 2, "digit_order": "msd", "initial": 0,
         "outputs": [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
         "transitions": [[0, 1], [2, 3], [4, 5], [6, 7], [8, 9], [10, 0], [1, 2], [3, 4], [5, 6], [7, 8], [9, 10]]}})"},
};

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("consys_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    for (const auto &[name, text] : kFiles)
      std::ofstream(dir / name) << text;
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator()(const std::string &name) const { return (dir / name).string(); }
};

const Scratch &scratch() {
  static Scratch s;
  return s;
}

struct Envelope {
  std::vector<std::string> args; // file names are resolved in the scratch directory
  int exit;
  std::string needle; // expected in standard output, when nonempty
};

std::vector<std::string> resolve(const std::vector<std::string> &args) {
  std::vector<std::string> out;
  for (const auto &a : args)
    out.push_back(kFiles.count(a) ? scratch()(a) : a);
  return out;
}

} // namespace

TEST_CASE("cli examples") {
  auto ok = run(resolve({"check", "unipotent.json"}));
  CHECK(ok.code == 0);
  CHECK(nlohmann::json::parse(ok.out)["result"] == "consistent");

  auto bad = run(resolve({"check", "violation.json"}));
  CHECK(bad.code == 1);
  auto doc = nlohmann::json::parse(bad.out);
  CHECK(doc["result"] == "inconsistent");
  // delta(B) - sigma(A) B + B A = x for A = 0, B = x.
  CHECK(doc["residual"] == nlohmann::json::parse(R"([[{"num": ["0", "1"], "den": ["1"]}]])"));

  auto zero = run(resolve({"check", "div0.json"}));
  CHECK(zero.code == 2);
  CHECK(zero.out.empty());
}

TEST_CASE("cli golden envelopes") {
  const std::vector<Envelope> suite = {
      {{"check", "unipotent.json"}, 0, "\"consistent\""},
      {{"check", "symbolic.json"}, 0, "\"q\""},
      {{"check", "violation.json"}, 1, "\"residual\""},
      {{"check", "div0.json"}, 2, ""},
      {{"check", "undeclared.json"}, 2, ""},
      {{"check", "garbage.json"}, 2, ""},
      {{"check", "missing.json"}, 2, ""},
      {{"check", "--frobnicate", "unipotent.json"}, 2, ""},
      {{"frobnicate"}, 2, ""},
      {{"build", "sigma.json", "delta.json"}, 0, "\"basis\""},
      {{"build", "delta_exp.json", "sigma.json"}, 1, ""},
      {{"gauge", "symbolic.json", "--gauge", "gauge.json"}, 2, ""},
      {{"gauge", "unipotent.json", "--gauge", "singular.json"}, 2, ""},
      {{"gauge", "unipotent.json", "--gauge", "gauge.json"}, 0, "\"certificate\""},
      {{"shift", "unipotent.json", "--steps", "2"}, 0, "\"certificate\""},
      {{"reduce", "unipotent.json"}, 0, "\"B1\""},
      {{"reduce", "sextic.json", "--order", "2", "--max-order", "4"}, 3, ""},
      {{"reduce", "violation.json"}, 2, ""},
      {{"solve-rational", "geometric.json", "--order", "8"}, 0, "\"certified\""},
      {{"solve-rational", "geometric.json", "--order", "8", "--max-deg", "0", "--max-order", "16"}, 1,
       "\"not-certified\""},
      {{"solve-rational", "contradiction.json"}, 1, ""},
      {{"gen", "--case", "2M", "--seed", "5", "--lower-only"}, 0, "\"certificate\""},
      {{"gen", "--case", "Q", "--q", "q", "--seed", "1"}, 0, "\"q\""},
      {{"gen", "--case", "3M"}, 2, ""},
      {{"automaton", "powers.json"}, 0, "\"annihilator\""},
      {{"automaton", "flip.json"}, 2, ""},
      {{"automaton", "mod11.json"}, 3, ""},
  };
  REQUIRE(suite.size() >= 20);
  for (const auto &e : suite) {
    auto args = resolve(e.args);
    auto r = run(args);
    std::string shown;
    for (const auto &a : e.args)
      shown += a + " ";
    INFO(shown, "\nstdout: ", r.out, "\nstderr: ", r.err);
    CHECK(r.code == e.exit);
    if (!e.needle.empty())
      CHECK(r.out.find(e.needle) != std::string::npos);
    if (e.exit == 0 || !r.out.empty()) {
      // Every artifact re-reads as a versioned document.
      auto doc = nlohmann::json::parse(r.out);
      CHECK(doc["version"] == 1);
    }
    if (e.exit >= 2)
      CHECK_FALSE(r.err.empty());
  }
}

TEST_CASE("cli output is byte-deterministic") {
  const std::vector<std::vector<std::string>> commands = {
      {"gen", "--case", "2M", "--seed", "11", "--lower-only"},
      {"gen", "--case", "S", "--n", "3", "--seed", "11"},
      {"gen", "--case", "2S", "--seed", "4"},
      {"reduce", "unipotent.json"},
      {"automaton", "powers.json"},
  };
  for (const auto &c : commands) {
    auto args = resolve(c);
    auto a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  // Different seeds give different instances.
  CHECK(run({"gen", "--seed", "1"}).out != run({"gen", "--seed", "2"}).out);
}

TEST_CASE("cli output files feed later commands") {
  std::string inst = scratch()("instance.json"), reduced = scratch()("reduced.json");
  REQUIRE(run({"gen", "--case", "2M", "--seed", "9", "--lower-only", "-o", inst}).code == 0);
  CHECK(run({"check", inst}).code == 0);
  auto r = run({"reduce", inst, "-o", reduced});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(reduced);
  auto doc = nlohmann::json::parse(in);
  CHECK(doc["certificate"]["target"]["case"]["kind"] == "2M");
}
