#include "splab/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef SPLAB_VERSION
#define SPLAB_VERSION "0.0.0"
#endif

namespace splab::io {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::InvalidData, where + ": " + what);
}

const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) bad(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad(where, std::string("missing key \"") + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number");
  return j.get<double>();
}

bool is_pair(const Json& j) { return j.is_array() && j.size() == 2 && j[0].is_number(); }

ComplexVec complex_array(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array");
  ComplexVec out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(complex_from_json(j[i], where + "/" + std::to_string(i)));
  return out;
}

Eigen::MatrixXcd complex_matrix(const Json& j, const std::string& where, Eigen::Index cols) {
  if (!j.is_array()) bad(where, "expected an array of rows");
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rw = where + "/" + std::to_string(r);
    const ComplexVec row = complex_array(j[r], rw);
    if (static_cast<Eigen::Index>(row.size()) != cols)
      bad(rw, "expected " + std::to_string(cols) + " entries, got " + std::to_string(row.size()));
    for (Eigen::Index c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

Json matrix_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json atoms_json(const data::DiscreteSpectralData& base) {
  Json atoms = Json::array();
  for (std::size_t n = 0; n < base.size(); ++n) atoms.push_back(Json{{"t", base.t(n)}, {"mu", base.mu(n)}});
  return atoms;
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const ComplexVec& v) {
  Json out = Json::array();
  for (Complex z : v) out.push_back(to_json(z));
  return out;
}

Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) bad(where, "expected [re, im]");
  return {number(j[0], where + "/0"), number(j[1], where + "/1")};
}

Problem parse_problem(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::ostringstream os;
    os << "malformed JSON at byte " << e.byte << ": " << e.what();
    throw Error(ErrorKind::InvalidData, os.str());
  }
  const Json& atoms_j = member(j, "atoms", "");
  if (!atoms_j.is_array()) bad("/atoms", "expected an array");
  std::vector<data::Atom> atoms;
  for (std::size_t n = 0; n < atoms_j.size(); ++n) {
    const std::string w = "/atoms/" + std::to_string(n);
    atoms.push_back({number(member(atoms_j[n], "t", w), w + "/t"), number(member(atoms_j[n], "mu", w), w + "/mu")});
  }
  data::DiscreteSpectralData base(std::move(atoms));

  const Json& a = member(j, "a", "");
  const Json& b = member(j, "b", "");
  const Json& kappa = member(j, "kappa", "");
  if (!a.is_array() || a.size() != base.size())
    bad("/a", "expected " + std::to_string(base.size()) + " entries");
  if (!b.is_array() || b.size() != base.size())
    bad("/b", "expected " + std::to_string(base.size()) + " entries");

  const bool rank_one = a.empty() || is_pair(a[0]) || a[0].is_number();
  if (rank_one) {
    return data::RankOneData(std::move(base), complex_array(a, "/a"), complex_array(b, "/b"),
                             complex_from_json(kappa, "/kappa"));
  }
  if (!a[0].is_array()) bad("/a/0", "expected a row of [re, im] pairs");
  const auto n = static_cast<Eigen::Index>(a[0].size());
  return data::RankNData(std::move(base), complex_matrix(a, "/a", n), complex_matrix(b, "/b", n),
                         complex_matrix(kappa, "/kappa", n));
}

Problem read_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidData, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_problem(ss.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string serialize_problem(const Problem& problem) {
  Json j;
  if (const auto* d = std::get_if<data::RankOneData>(&problem)) {
    j["atoms"] = atoms_json(d->base());
    j["a"] = to_json(ComplexVec(d->a().begin(), d->a().end()));
    j["b"] = to_json(ComplexVec(d->b().begin(), d->b().end()));
    j["kappa"] = to_json(d->kappa());
  } else {
    const auto& n = std::get<data::RankNData>(problem);
    j["atoms"] = atoms_json(n.base());
    j["a"] = matrix_json(n.a());
    j["b"] = matrix_json(n.b());
    j["kappa"] = matrix_json(n.kappa());
  }
  return j.dump(2) + "\n";
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string_view tool_version() noexcept { return SPLAB_VERSION; }

Json RunManifest::to_json() const {
  Json params = Json::object();
  for (const auto& [k, v] : parameters) params[k] = v;
  return Json{{"command", command},
              {"parameters", params},
              {"input_hash", input_hash},
              {"seed", seed},
              {"tool_version", tool_version}};
}

std::string input_hash(std::string_view input, const std::map<std::string, std::string>& parameters) {
  std::uint64_t h = fnv1a64(input);
  for (const auto& [k, v] : parameters) {
    h = fnv1a64("\n", h);
    h = fnv1a64(k, h);
    h = fnv1a64("=", h);
    h = fnv1a64(v, h);
  }
  return hex64(h);
}

std::filesystem::path output_dir(const RunManifest& manifest, const std::string& override_root) {
  std::filesystem::path root = "out";
  if (!override_root.empty()) {
    root = override_root;
  } else if (const char* env = std::getenv("SPLAB_OUT"); env && *env) {
    root = env;
  }
  std::string command = manifest.command;
  for (char& c : command)
    if (c == ' ') c = '-';
  return root / command / manifest.input_hash;
}

std::filesystem::path write_text(const std::filesystem::path& dir, const std::string& name,
                                 const std::string& text) {
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::InvalidData, "cannot write " + path.string());
  return path;
}

std::filesystem::path write_artifact(const std::filesystem::path& dir, const std::string& name,
                                     const RunManifest& manifest, const Json& result) {
  Json doc{{"manifest", manifest.to_json()}, {"result", result}};
  return write_text(dir, name, doc.dump(2) + "\n");
}

std::string format_double(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

}  // namespace splab::io
