#pragma once
// Problem files, artifacts and run manifests.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"
#include "splab/spectral_data.hpp"

namespace splab::io {

using Json = nlohmann::ordered_json;
using Problem = std::variant<data::RankOneData, data::RankNData>;

/// Problem JSON:
///   {"atoms":[{"t":..,"mu":..},..], "a":[[re,im],..], "b":[[re,im],..], "kappa":[re,im]}
/// Rank n: a and b are N arrays of n [re,im] pairs, kappa is n x n.
/// Throws Error(InvalidData) with the parser position or the offending path.
Problem parse_problem(std::string_view text);
Problem read_problem(const std::filesystem::path& path);

/// Canonical form: fixed key order, two-space indent, trailing newline.
std::string serialize_problem(const Problem& problem);

Json to_json(Complex z);
Json to_json(const ComplexVec& v);
Complex complex_from_json(const Json& j, const std::string& where);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) noexcept;
std::string hex64(std::uint64_t h);

std::string_view tool_version() noexcept;

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::string input_hash;
  std::uint64_t seed = 0;
  std::string tool_version{io::tool_version()};

  Json to_json() const;
};

/// Hash of the input bytes followed by the sorted parameters.
std::string input_hash(std::string_view input, const std::map<std::string, std::string>& parameters);

/// <root>/<command>/<input_hash>, root = `override_root` if non-empty, else
/// $SPLAB_OUT, else "out".
std::filesystem::path output_dir(const RunManifest& manifest, const std::string& override_root = {});

/// Writes {"manifest": ..., "result": ...} to dir/name; returns the path.
std::filesystem::path write_artifact(const std::filesystem::path& dir, const std::string& name,
                                     const RunManifest& manifest, const Json& result);
std::filesystem::path write_text(const std::filesystem::path& dir, const std::string& name,
                                 const std::string& text);

/// Shortest round-trip decimal form, as used in CSV output.
std::string format_double(double x);

}  // namespace splab::io
