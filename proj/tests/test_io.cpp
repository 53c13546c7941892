#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "splab/io.hpp"

using namespace splab;

namespace {

std::string error_of(std::string_view text) {
  try {
    io::parse_problem(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidData);
    return e.what();
  }
  FAIL("no error thrown");
  return {};
}

const char* kRankOne = R"({
  "atoms": [{"t": -1, "mu": 1}, {"t": 1, "mu": 1}],
  "a": [[1, 0], [1, 0]],
  "b": [[1, 0], [1, 0]],
  "kappa": [1, 0]
})";

}  // namespace

TEST_CASE("rank-one problem parses") {
  const auto p = io::parse_problem(kRankOne);
  REQUIRE(std::holds_alternative<data::RankOneData>(p));
  const auto& d = std::get<data::RankOneData>(p);
  CHECK(d.size() == 2);
  CHECK(d.kappa() == Complex(1.0));
}

TEST_CASE("rank-n problem parses") {
  const auto p = io::parse_problem(R"({"atoms":[{"t":1,"mu":1},{"t":2,"mu":1}],
    "a":[[[1,0],[0,0]],[[0,0],[1,0]]], "b":[[[1,0],[0,0]],[[0,0],[1,0]]],
    "kappa":[[[1,0],[0,0]],[[0,0],[1,0]]]})");
  REQUIRE(std::holds_alternative<data::RankNData>(p));
  CHECK(std::get<data::RankNData>(p).rank() == 2);
}

TEST_CASE("serialization round trip is byte identical") {
  const auto once = io::serialize_problem(io::parse_problem(kRankOne));
  const auto twice = io::serialize_problem(io::parse_problem(once));
  CHECK(once == twice);
  CHECK(once.back() == '\n');
  CHECK(once.find("\"atoms\"") < once.find("\"kappa\""));
}

TEST_CASE("error messages locate the problem") {
  CHECK(error_of("{\"atoms\": [").find("malformed JSON at byte") != std::string::npos);
  CHECK(error_of(R"({"atoms":[{"t":"x","mu":1}],"a":[[1,0]],"b":[[1,0]],"kappa":[1,0]})").find("/atoms/0/t") !=
        std::string::npos);
  CHECK(error_of(R"({"atoms":[{"t":1,"mu":1}],"a":[[1,0]],"kappa":[1,0]})").find("missing key \"b\"") != std::string::npos);
  CHECK(!error_of(R"({"atoms":[{"t":0,"mu":1}],"a":[[1,0]],"b":[[1,0]],"kappa":[1,0]})").empty());
}

TEST_CASE("hashes are deterministic and parameter sensitive") {
  CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(io::hex64(io::fnv1a64("a")) == "af63dc4c8601ec8c");
  const auto h1 = io::input_hash("x", {{"tol", "1e-7"}});
  CHECK(h1 == io::input_hash("x", {{"tol", "1e-7"}}));
  CHECK(h1 != io::input_hash("x", {{"tol", "1e-8"}}));
  CHECK(h1 != io::input_hash("y", {{"tol", "1e-7"}}));
}

TEST_CASE("output directory resolution") {
  io::RunManifest m;
  m.command = "diagnose growth";
  m.input_hash = "abc";
  CHECK(io::output_dir(m, "root") == std::filesystem::path("root/diagnose-growth/abc"));
  ::setenv("SPLAB_OUT", "envroot", 1);
  CHECK(io::output_dir(m) == std::filesystem::path("envroot/diagnose-growth/abc"));
  ::unsetenv("SPLAB_OUT");
  CHECK(io::output_dir(m) == std::filesystem::path("out/diagnose-growth/abc"));
}

TEST_CASE("artifacts carry the manifest") {
  const auto dir = std::filesystem::temp_directory_path() / "splab_io_test";
  std::filesystem::remove_all(dir);
  io::RunManifest m;
  m.command = "spectrum";
  m.parameters["tol"] = "1e-7";
  m.seed = 3;
  const auto path = io::write_artifact(dir, "result.json", m, io::Json{{"ok", true}});
  std::ifstream in(path);
  const auto j = io::Json::parse(in);
  CHECK(j["manifest"]["command"] == "spectrum");
  CHECK(j["manifest"]["tool_version"] == std::string(io::tool_version()));
  CHECK(j["result"]["ok"] == true);
  std::filesystem::remove_all(dir);
}

TEST_CASE("shortest round-trip doubles") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}
