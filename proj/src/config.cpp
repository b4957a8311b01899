#include "lpiso/config.hpp"

#include "lpiso/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace lpiso {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::ConfigError, path + ": " + why);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!ok.count(item.key())) fail(path + "." + item.key(), "unknown key");
  }
}

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) fail(path + "." + key, "missing");
  return obj.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

long long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Vector vec(const json& j, const std::string& path, int n = -1) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
  if (n >= 0 && static_cast<int>(j.size()) != n) fail(path, "expected " + std::to_string(n) + " entries");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Matrix mat(const json& j, const std::string& path, int n = -1) {
  if (!j.is_array() || j.empty()) fail(path, "expected a square array of rows");
  const int rows = static_cast<int>(j.size());
  if (n >= 0 && rows != n) fail(path, "expected " + std::to_string(n) + " rows");
  Matrix m(rows, rows);
  for (int i = 0; i < rows; ++i) m.row(i) = vec(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]", rows).transpose();
  return m;
}

DomainConfig parse_domain(const json& j, const std::string& path, int n, bool allow_image) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string shape = text(require(j, "shape", path), path + ".shape");
  DomainConfig d;
  if (j.contains("margin")) {
    d.margin = number(j.at("margin"), path + ".margin");
    if (*d.margin < 0) fail(path + ".margin", "must be non-negative");
  }
  if (shape == "box") {
    check_keys(j, path, {"shape", "lo", "hi", "margin"});
    d.kind = DomainConfig::Kind::Box;
    d.lo = vec(require(j, "lo", path), path + ".lo", n);
    d.hi = vec(require(j, "hi", path), path + ".hi", n);
    if (!((d.lo.array() < d.hi.array()).all())) fail(path, "box needs lo < hi in every coordinate");
  } else if (shape == "ball") {
    check_keys(j, path, {"shape", "center", "radius", "margin"});
    d.kind = DomainConfig::Kind::Ball;
    d.center = vec(require(j, "center", path), path + ".center", n);
    d.radius = number(require(j, "radius", path), path + ".radius");
    if (!(d.radius > 0)) fail(path + ".radius", "must be positive");
  } else if (shape == "affine") {
    check_keys(j, path, {"shape", "base", "matrix", "shift", "margin"});
    d.kind = DomainConfig::Kind::Affine;
    d.base = std::make_shared<DomainConfig>(parse_domain(require(j, "base", path), path + ".base", n, false));
    d.matrix = mat(require(j, "matrix", path), path + ".matrix", n);
    d.shift = j.contains("shift") ? vec(j.at("shift"), path + ".shift", n) : Vector::Zero(n);
  } else if (shape == "witness_image") {
    if (!allow_image) fail(path, "witness_image is only allowed for E1");
    check_keys(j, path, {"shape", "margin"});
    d.kind = DomainConfig::Kind::WitnessImage;
  } else {
    fail(path + ".shape", "unknown shape '" + shape + "' (box, ball, affine, witness_image)");
  }
  return d;
}

MappingConfig parse_mapping(const json& j, const std::string& path, int n) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string type = text(require(j, "type", path), path + ".type");
  MappingConfig m;
  if (type == "similarity") {
    check_keys(j, path, {"type", "t", "Q", "rotations", "v"});
    m.kind = MappingConfig::Kind::Similarity;
    if (j.contains("t")) m.t = number(j.at("t"), path + ".t");
    if (m.t == 0.0) fail(path + ".t", "homothety coefficient must be non-zero");
    if (j.contains("Q")) m.Q = mat(j.at("Q"), path + ".Q", n);
    if (j.contains("v")) m.v = vec(j.at("v"), path + ".v", n);
    if (j.contains("rotations")) {
      const json& rs = j.at("rotations");
      if (!rs.is_array()) fail(path + ".rotations", "expected an array");
      for (std::size_t r = 0; r < rs.size(); ++r) {
        const std::string rp = path + ".rotations[" + std::to_string(r) + "]";
        check_keys(rs[r], rp, {"i", "j", "angle"});
        MappingConfig::Rotation rot;
        rot.i = static_cast<int>(integer(require(rs[r], "i", rp), rp + ".i"));
        rot.j = static_cast<int>(integer(require(rs[r], "j", rp), rp + ".j"));
        rot.angle = number(require(rs[r], "angle", rp), rp + ".angle");
        if (rot.i < 0 || rot.j < 0 || rot.i >= n || rot.j >= n || rot.i == rot.j) fail(rp, "indices must be distinct and in [0, n)");
        m.rotations.push_back(rot);
      }
    }
  } else if (type == "inversion") {
    check_keys(j, path, {"type", "center"});
    m.kind = MappingConfig::Kind::Inversion;
    m.center = j.contains("center") ? vec(j.at("center"), path + ".center", n) : Vector::Zero(n);
  } else if (type == "composition") {
    check_keys(j, path, {"type", "stages"});
    m.kind = MappingConfig::Kind::Composition;
    const json& st = require(j, "stages", path);
    if (!st.is_array() || st.empty()) fail(path + ".stages", "expected a non-empty array");
    for (std::size_t s = 0; s < st.size(); ++s) m.stages.push_back(parse_mapping(st[s], path + ".stages[" + std::to_string(s) + "]", n));
  } else if (type == "family") {
    check_keys(j, path, {"type", "case", "branch", "c", "d", "gamma", "delta", "k", "alpha", "beta"});
    m.kind = MappingConfig::Kind::Family;
    if (n != 2) fail(path, "2D families need n = 2");
    const std::string id = text(require(j, "case", path), path + ".case");
    const auto fc = id.size() == 3 ? parse_family_case(id.substr(0, 2)) : std::nullopt;
    if (!fc || (id[2] != 'a' && id[2] != 'b')) fail(path + ".case", "expected one of F1a..F4b");
    m.family = *fc;
    m.variant = id[2] == 'a' ? FamilyVariant::A : FamilyVariant::B;
    if (j.contains("branch")) {
      const std::string br = text(j.at("branch"), path + ".branch");
      if (br == "upper") m.branch = 1;
      else if (br == "lower") m.branch = -1;
      else fail(path + ".branch", "expected 'upper' or 'lower'");
    }
    if (j.contains("c")) m.c = number(j.at("c"), path + ".c");
    if (j.contains("d")) m.d = number(j.at("d"), path + ".d");
    if (j.contains("gamma")) m.gamma = number(j.at("gamma"), path + ".gamma");
    if (j.contains("delta")) m.delta = number(j.at("delta"), path + ".delta");
    if (j.contains("k")) m.k = number(j.at("k"), path + ".k");
    if (j.contains("alpha")) m.alpha = number(j.at("alpha"), path + ".alpha");
    if (j.contains("beta")) m.beta = number(j.at("beta"), path + ".beta");
  } else {
    fail(path + ".type", "unknown mapping type '" + type + "' (similarity, inversion, composition, family)");
  }
  return m;
}

}  // namespace

DomainSpec DomainConfig::build() const {
  DomainSpec out = [&] {
    switch (kind) {
      case Kind::Box: return DomainSpec::box(lo, hi);
      case Kind::Ball: return DomainSpec::ball(center, radius);
      case Kind::Affine: return DomainSpec::affine_image(base->build(), matrix, shift);
      case Kind::WitnessImage: break;
    }
    throw Error(ErrorCode::ConfigError, "witness_image domain needs the assembled operator");
  }();
  if (margin) out.set_margin(*margin);
  return out;
}

MappingSpec build_mapping(const MappingConfig& cfg, int n, int ell, double p, const std::optional<FamilyDefaults>& defaults) {
  switch (cfg.kind) {
    case MappingConfig::Kind::Similarity: {
      Matrix Q = cfg.Q ? *cfg.Q : Matrix::Identity(n, n);
      for (const auto& r : cfg.rotations) Q = Q * ell_rotation(n, ell, r.i, r.j, r.angle);
      return Similarity::make(cfg.t, Q, cfg.v ? *cfg.v : Vector::Zero(n), ell);
    }
    case MappingConfig::Kind::Inversion:
      return Inversion{cfg.center, ell};
    case MappingConfig::Kind::Composition: {
      Composition c;
      for (const auto& s : cfg.stages) c.stages.push_back(build_mapping(s, n, ell, p, defaults));
      return c;
    }
    case MappingConfig::Kind::Family: {
      TwoDFamily f;
      f.family = cfg.family;
      f.variant = cfg.variant;
      f.p = p;
      f.sign = cfg.branch ? *cfg.branch : (defaults ? defaults->sign : 1);
      f.c = cfg.c ? *cfg.c : (defaults ? defaults->c : 0.0);
      f.d = cfg.d ? *cfg.d : (defaults ? defaults->d : 0.0);
      f.gamma = cfg.gamma;
      f.delta = cfg.delta;
      f.k = cfg.k;
      f.alpha = cfg.alpha;
      f.beta = cfg.beta;
      check_family_params(f);
      return f;
    }
  }
  throw Error(ErrorCode::ConfigError, "unknown mapping kind");
}

ProblemConfig parse_config(const json& doc) {
  check_keys(doc, "config", {"n", "A", "a", "B", "b", "E1", "E2", "p", "quadrature", "seed", "solutions", "tolerance",
                             "witness", "grid", "description"});
  ProblemConfig c;
  c.source = doc;
  c.A = mat(require(doc, "A", "config"), "config.A");
  c.n = static_cast<int>(c.A.rows());
  if (doc.contains("n") && integer(doc.at("n"), "config.n") != c.n) fail("config.n", "does not match the size of A");
  if (c.n < 2) fail("config.A", "dimension must be at least 2");
  c.a = doc.contains("a") ? vec(doc.at("a"), "config.a", c.n) : Vector::Zero(c.n);
  if (doc.contains("B")) c.B = mat(doc.at("B"), "config.B", c.n);
  if (doc.contains("b")) {
    if (!c.B) fail("config.b", "given without B");
    c.b = vec(doc.at("b"), "config.b", c.n);
  } else if (c.B) {
    c.b = Vector::Zero(c.n);
  }
  if (doc.contains("E1")) c.E1 = parse_domain(doc.at("E1"), "config.E1", c.n, true);
  if (doc.contains("E2")) c.E2 = parse_domain(doc.at("E2"), "config.E2", c.n, false);
  if (doc.contains("p")) c.p = number(doc.at("p"), "config.p");

  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned()) fail("config.seed", "expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  c.quadrature.seed = c.seed;
  if (doc.contains("quadrature")) {
    const json& q = doc.at("quadrature");
    check_keys(q, "config.quadrature", {"method", "order", "points"});
    if (q.contains("method")) {
      const std::string m = text(q.at("method"), "config.quadrature.method");
      if (m == "gauss") c.quadrature.method = QuadratureMethod::Gauss;
      else if (m == "mc") c.quadrature.method = QuadratureMethod::MonteCarlo;
      else fail("config.quadrature.method", "expected 'gauss' or 'mc'");
    }
    if (q.contains("order")) {
      const auto o = integer(q.at("order"), "config.quadrature.order");
      if (o < 2 || o > 256) fail("config.quadrature.order", "must lie in [2, 256]");
      c.quadrature.order = static_cast<int>(o);
    }
    if (q.contains("points")) {
      const auto pts = integer(q.at("points"), "config.quadrature.points");
      if (pts < 2) fail("config.quadrature.points", "must be at least 2");
      c.quadrature.points = static_cast<std::size_t>(pts);
    }
  }
  if (doc.contains("solutions")) {
    const json& s = doc.at("solutions");
    check_keys(s, "config.solutions", {"budget"});
    if (s.contains("budget")) {
      const auto b = integer(s.at("budget"), "config.solutions.budget");
      if (b < 1) fail("config.solutions.budget", "must be at least 1");
      c.solution_budget = static_cast<std::size_t>(b);
    }
  }
  if (doc.contains("tolerance")) {
    const json& t = doc.at("tolerance");
    check_keys(t, "config.tolerance", {"pde", "points"});
    if (t.contains("pde")) {
      c.pde_tolerance = number(t.at("pde"), "config.tolerance.pde");
      if (!(c.pde_tolerance > 0)) fail("config.tolerance.pde", "must be positive");
    }
    if (t.contains("points")) {
      const auto pts = integer(t.at("points"), "config.tolerance.points");
      if (pts < 1) fail("config.tolerance.points", "must be positive");
      c.pde_points = static_cast<std::size_t>(pts);
    }
  }
  if (doc.contains("witness")) {
    const json& w = doc.at("witness");
    check_keys(w, "config.witness", {"mapping", "sign", "weight"});
    WitnessConfig wc;
    wc.mapping = parse_mapping(require(w, "mapping", "config.witness"), "config.witness.mapping", c.n);
    if (w.contains("sign")) {
      const auto s = integer(w.at("sign"), "config.witness.sign");
      if (s != 1 && s != -1) fail("config.witness.sign", "must be 1 or -1");
      wc.sign = static_cast<int>(s);
    }
    if (w.contains("weight")) {
      const std::string kind = text(w.at("weight"), "config.witness.weight");
      if (kind == "unit") wc.unit_weight = true;
      else if (kind != "auto") fail("config.witness.weight", "expected 'auto' or 'unit'");
    }
    c.witness = std::move(wc);
  }
  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    check_keys(g, "config.grid", {"lo", "hi", "points"});
    GridConfig gc;
    gc.lo = vec(require(g, "lo", "config.grid"), "config.grid.lo", c.n);
    gc.hi = vec(require(g, "hi", "config.grid"), "config.grid.hi", c.n);
    const json& pts = require(g, "points", "config.grid");
    if (!pts.is_array() || static_cast<int>(pts.size()) != c.n) fail("config.grid.points", "expected one count per axis");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto k = integer(pts[i], "config.grid.points[" + std::to_string(i) + "]");
      if (k < 1 || k > 10000) fail("config.grid.points", "counts must lie in [1, 10000]");
      gc.points.push_back(static_cast<int>(k));
    }
    c.grid = std::move(gc);
  }
  return c;
}

ProblemConfig parse_config_text(const std::string& text_in) {
  json doc;
  try {
    doc = json::parse(text_in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_hash(const json& doc) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : doc.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace lpiso
