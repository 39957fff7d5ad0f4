#include "conic/problem_io.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "conic/errors.hpp"

namespace conic {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ParseError(fmt::format("field '{}': {}", field, what));
}

const json& member(const json& obj, const std::string& key, const std::string& ctx) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(ctx + key, "missing");
  return *it;
}

int read_int(const json& obj, const std::string& key, const std::string& ctx) {
  const json& v = member(obj, key, ctx);
  if (!v.is_number_integer()) fail(ctx + key, "expected an integer");
  const auto i = v.get<long long>();
  if (i < 0 || i > std::numeric_limits<int>::max()) fail(ctx + key, "out of range");
  return static_cast<int>(i);
}

double read_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  return v.get<double>();
}

Vector read_vector(const json& obj, const std::string& key, int expected) {
  const json& arr = member(obj, key, "");
  if (!arr.is_array()) fail(key, "expected an array");
  if (static_cast<int>(arr.size()) != expected) {
    fail(key, fmt::format("has {} entries, expected {}", arr.size(), expected));
  }
  Vector v(expected);
  for (int i = 0; i < expected; ++i) v[i] = read_number(arr[i], fmt::format("{}[{}]", key, i));
  return v;
}

std::vector<double> read_alpha(const json& cone, const std::string& ctx) {
  const json& arr = member(cone, "alpha", ctx);
  if (!arr.is_array()) fail(ctx + "alpha", "expected an array");
  std::vector<double> alpha;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    alpha.push_back(read_number(arr[i], fmt::format("{}alpha[{}]", ctx, i)));
  }
  return alpha;
}

SparseMatrix read_matrix(const json& obj, const std::string& key, int rows, int cols) {
  const json& m = member(obj, key, "");
  if (!m.is_object()) fail(key, "expected an object with 'triplets'");
  const json& trip = member(m, "triplets", key + ".");
  if (!trip.is_array()) fail(key + ".triplets", "expected an array");
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(trip.size());
  for (std::size_t k = 0; k < trip.size(); ++k) {
    const std::string f = fmt::format("{}.triplets[{}]", key, k);
    const json& e = trip[k];
    if (!e.is_array() || e.size() != 3) fail(f, "expected [row, col, value]");
    if (!e[0].is_number_integer() || !e[1].is_number_integer()) {
      fail(f, "row and col must be integers");
    }
    const auto i = e[0].get<long long>();
    const auto j = e[1].get<long long>();
    if (i < 0 || i >= rows || j < 0 || j >= cols) {
      fail(f, fmt::format("index ({}, {}) outside {}x{}", i, j, rows, cols));
    }
    t.emplace_back(static_cast<int>(i), static_cast<int>(j), read_number(e[2], f));
  }
  SparseMatrix out(rows, cols);
  // setFromTriplets sums duplicates in input order.
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

ConeSpec read_cone(const json& c, std::size_t index) {
  const std::string ctx = fmt::format("cones[{}].", index);
  if (!c.is_object()) fail(fmt::format("cones[{}]", index), "expected an object");
  const json& type = member(c, "type", ctx);
  if (!type.is_string()) fail(ctx + "type", "expected a string");
  const auto t = type.get<std::string>();
  if (t == "zero") return ConeSpec::zero(read_int(c, "n", ctx));
  if (t == "nonneg") return ConeSpec::nonneg(read_int(c, "n", ctx));
  if (t == "relentropy") return ConeSpec::relentropy(read_int(c, "d", ctx));
  if (t == "powmean") return ConeSpec::powmean(read_alpha(c, ctx));
  if (t == "genpow") {
    auto alpha = read_alpha(c, ctx);
    if (c.contains("d1") && read_int(c, "d1", ctx) != static_cast<int>(alpha.size())) {
      fail(ctx + "d1", "does not match the length of alpha");
    }
    return ConeSpec::genpow(std::move(alpha), read_int(c, "d2", ctx));
  }
  fail(ctx + "type", fmt::format("unknown cone type \"{}\"", t));
}

json vector_json(const VectorRef& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json matrix_json(const SparseMatrix& m) {
  json trip = json::array();
  for (int j = 0; j < m.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) {
      trip.push_back(json::array({it.row(), it.col(), it.value()}));
    }
  }
  return json{{"triplets", trip}};
}

json cone_json(const ConeSpec& c) {
  switch (c.kind()) {
    case ConeKind::Zero:
      return json{{"type", "zero"}, {"n", c.dim()}};
    case ConeKind::NonNeg:
      return json{{"type", "nonneg"}, {"n", c.dim()}};
    case ConeKind::GenPow: {
      const auto& k = c.as<GenPowCone>();
      return json{{"type", "genpow"},
                  {"alpha", k.alpha},
                  {"d1", k.alpha.size()},
                  {"d2", k.d2}};
    }
    case ConeKind::PowMean:
      return json{{"type", "powmean"}, {"alpha", c.as<PowMeanCone>().alpha}};
    case ConeKind::RelEntropy:
      return json{{"type", "relentropy"}, {"d", c.as<RelEntropyCone>().d}};
  }
  return {};
}

}  // namespace

ProblemData parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte offset -> line number for the message.
    const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n');
    throw ParseError(fmt::format("line {}: {}", line, e.what()));
  }
  if (!doc.is_object()) throw ParseError("top level must be a JSON object");
  const json& ver = member(doc, "version", "");
  if (!ver.is_string() || ver.get<std::string>() != "1") {
    fail("version", "unsupported version, expected \"1\"");
  }
  ProblemData pd;
  const int n = read_int(doc, "n", "");
  const int p = read_int(doc, "p", "");
  const int m = read_int(doc, "m", "");
  pd.c = read_vector(doc, "c", n);
  pd.h = read_vector(doc, "h", p);
  pd.b = read_vector(doc, "b", m);
  pd.G = read_matrix(doc, "G", p, n);
  pd.A = read_matrix(doc, "A", m, n);
  const json& cones = member(doc, "cones", "");
  if (!cones.is_array()) fail("cones", "expected an array");
  for (std::size_t i = 0; i < cones.size(); ++i) pd.cones.push_back(read_cone(cones[i], i));

  const auto errors = validate(pd);
  if (!errors.empty()) {
    std::string msg = "invalid problem:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ValidationError(msg);
  }
  return pd;
}

ProblemData read_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(fmt::format("cannot open {}", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::string to_json(const ProblemData& pd) {
  json doc;
  doc["version"] = "1";
  doc["n"] = pd.n();
  doc["p"] = pd.p();
  doc["m"] = pd.m();
  doc["c"] = vector_json(pd.c);
  doc["h"] = vector_json(pd.h);
  doc["b"] = vector_json(pd.b);
  doc["G"] = matrix_json(pd.G);
  doc["A"] = matrix_json(pd.A);
  json cones = json::array();
  for (const auto& c : pd.cones) cones.push_back(cone_json(c));
  doc["cones"] = cones;
  return doc.dump(1) + "\n";
}

void write_problem(const ProblemData& pd, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError(fmt::format("cannot write {}", path.string()));
  out << to_json(pd);
  if (!out) throw ParseError(fmt::format("write to {} failed", path.string()));
}

}  // namespace conic
