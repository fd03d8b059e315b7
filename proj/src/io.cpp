#include "pfw/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "pfw/errors.hpp"

namespace pfw::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::int64_t as_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) fail(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

Json to_json(const Point& p) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p(i));
  return a;
}

Point point_from_json(const Json& j, Eigen::Index d, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array");
  if (d >= 0 && static_cast<Eigen::Index>(j.size()) != d)
    fail(std::string(what) + " has the wrong length");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p(static_cast<Eigen::Index>(i)) = as_int(j[i], what);
  return p;
}

Json vector_json(const IntVector& v) { return to_json(to_point(v)); }

Eigen::Index parse_int_token(std::string_view s) {
  long long x = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, x);
  if (ec != std::errc() || ptr != e || b == e) fail("bad integer \"" + std::string(s) + "\" in support");
  return static_cast<Eigen::Index>(x);
}

}  // namespace

Json to_json(const IntMatrix& m) {
  const Mat64 v = to_int64(m);
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    Json r = Json::array();
    for (Eigen::Index k = 0; k < v.cols(); ++k) r.push_back(v(i, k));
    rows.push_back(std::move(r));
  }
  Json out;
  out["d"] = v.rows();
  out["entries"] = std::move(rows);
  return out;
}

IntMatrix matrix_from_json(const Json& j) {
  const Json& rows = j.is_array() ? j : field(j, "entries");
  if (!rows.is_array() || rows.empty()) fail("matrix entries must be a non-empty array of rows");
  const std::size_t d = rows.size();
  if (j.is_object() && j.contains("d") && as_int(j.at("d"), "d") != static_cast<std::int64_t>(d))
    fail("matrix \"d\" does not match the number of rows");
  IntMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (!rows[i].is_array() || rows[i].size() != d) fail("matrix must be square");
    for (std::size_t k = 0; k < d; ++k) m(i, k) = Integer(as_int(rows[i][k], "matrix entry"));
  }
  return m;
}

Json to_json(const FactorList& factors) {
  Json out = Json::array();
  for (const auto& f : factors) {
    Json e;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Swap>) {
            e["kind"] = "swap";
            e["i"] = x.i + 1;
            e["j"] = x.j + 1;
          } else if constexpr (std::is_same_v<T, Shear>) {
            e["kind"] = "shear";
            e["i"] = x.i + 1;
            e["j"] = x.j + 1;
            e["sign"] = x.sign;
          } else if constexpr (std::is_same_v<T, SignFlip>) {
            e["kind"] = "sign";
            e["p"] = x.p + 1;
          } else {
            e["kind"] = "dilate";
            e["p"] = x.p + 1;
          }
        },
        f);
    out.push_back(std::move(e));
  }
  return out;
}

FactorList factors_from_json(const Json& j) {
  if (!j.is_array()) fail("factor list must be an array");
  FactorList out;
  for (const Json& e : j) {
    const Json& kind = field(e, "kind");
    if (!kind.is_string()) fail("factor kind must be a string");
    const std::string k = kind.get<std::string>();
    auto idx = [&](const char* key) {
      const std::int64_t v = as_int(field(e, key), key);
      if (v < 1) fail("factor indices are 1-based");
      return static_cast<Eigen::Index>(v - 1);
    };
    if (k == "swap") {
      out.push_back(Swap{idx("i"), idx("j")});
    } else if (k == "shear") {
      const std::int64_t s = as_int(field(e, "sign"), "sign");
      if (s != 1 && s != -1) fail("shear sign must be +1 or -1");
      out.push_back(Shear{idx("i"), idx("j"), static_cast<int>(s)});
    } else if (k == "sign") {
      out.push_back(SignFlip{idx("p")});
    } else if (k == "dilate") {
      out.push_back(Dilate{idx("p")});
    } else {
      fail("unknown factor kind \"" + k + "\"");
    }
  }
  return out;
}

Json to_json(const PartitionData& pd) {
  Json out;
  out["A0"] = to_json(pd.a0);
  out["A"] = to_json(pd.a);
  out["S"] = to_json(pd.s);
  out["S_inv"] = to_json(pd.s_inv);
  out["ell"] = vector_json(pd.ell);
  out["q"] = vector_json(pd.q);
  return out;
}

PartitionData partition_from_json(const Json& j) {
  PartitionData pd;
  pd.a0 = matrix_from_json(field(j, "A0"));
  pd.a = matrix_from_json(field(j, "A"));
  pd.s = matrix_from_json(field(j, "S"));
  pd.s_inv = matrix_from_json(field(j, "S_inv"));
  const Eigen::Index d = pd.a.rows();
  if (pd.a0.rows() != d || pd.s.rows() != d || pd.s_inv.rows() != d)
    fail("partition matrices differ in dimension");
  pd.ell = to_integer(point_from_json(field(j, "ell"), d, "ell"));
  pd.q = to_integer(point_from_json(field(j, "q"), d, "q"));
  return pd;
}

std::string format_coeff(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_coeff(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) fail("coefficient must be a decimal string or a number");
  const std::string s = j.get<std::string>();
  double x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    fail("bad coefficient \"" + s + "\"");
  return x;
}

Json to_json(const Mask& m) {
  Json out;
  out["dim"] = m.dim;
  out["role"] = m.role;
  Json support = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json e;
    e["n"] = to_json(m.support[i]);
    e["h"] = format_coeff(m.coeffs[i]);
    support.push_back(std::move(e));
  }
  out["support"] = std::move(support);
  if (m.verified_tol) out["verified_tol"] = *m.verified_tol;
  return out;
}

std::vector<Mask> masks_from_json(const Json& j) {
  std::vector<Mask> out;
  if (j.is_object() && j.contains("masks")) {
    if (!j.at("masks").is_array()) fail("\"masks\" must be an array");
    for (const Json& e : j.at("masks")) out.push_back(mask_from_json(e));
    if (out.empty()) fail("empty mask list");
  } else {
    out.push_back(mask_from_json(j));
  }
  return out;
}

Mask mask_from_json(const Json& j) {
  if (j.is_object() && j.contains("masks")) {
    auto all = masks_from_json(j);
    if (all.empty()) fail("empty mask list");
    return all.front();
  }
  Mask m;
  m.dim = static_cast<Eigen::Index>(as_int(field(j, "dim"), "dim"));
  if (m.dim < 1) fail("mask dimension must be positive");
  if (j.contains("role")) {
    if (!j.at("role").is_string()) fail("role must be a string");
    m.role = j.at("role").get<std::string>();
  }
  const Json& support = field(j, "support");
  if (!support.is_array() || support.empty()) fail("mask support must be a non-empty array");
  std::set<Point, LexLess> seen;
  for (const Json& e : support) {
    Point n = point_from_json(field(e, "n"), m.dim, "support point");
    if (!seen.insert(n).second) fail("duplicate support point in mask");
    m.support.push_back(std::move(n));
    m.coeffs.push_back(parse_coeff(field(e, "h")));
  }
  if (j.contains("verified_tol")) {
    if (!j.at("verified_tol").is_number()) fail("verified_tol must be a number");
    m.verified_tol = j.at("verified_tol").get<double>();
  }
  return m;
}

Json to_json(const SampledFunction& f) {
  Json out;
  out["A"] = to_json(f.matrix);
  out["level"] = f.level;
  if (!f.unit_tile()) {
    IntMatrix t(f.tile.rows(), f.tile.cols());
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      for (Eigen::Index k = 0; k < t.cols(); ++k) t(i, k) = Integer(f.tile(i, k));
    out["tile"] = to_json(t);
  }
  Json cells = Json::array();
  for (const auto& [m, v] : f.values) {
    Json c;
    c["m"] = to_json(m);
    c["v"] = v;
    cells.push_back(std::move(c));
  }
  out["cells"] = std::move(cells);
  return out;
}

SampledFunction function_from_json(const Json& j) {
  SampledFunction f;
  f.matrix = matrix_from_json(field(j, "A"));
  const Eigen::Index d = f.matrix.rows();
  f.level = static_cast<int>(as_int(field(j, "level"), "level"));
  if (f.level < 0) fail("level must be non-negative");
  f.tile = j.contains("tile") ? to_int64(matrix_from_json(j.at("tile"))) : Mat64::Identity(d, d);
  if (f.tile.rows() != d) fail("tile dimension does not match A");
  const Json& cells = field(j, "cells");
  if (!cells.is_array()) fail("cells must be an array");
  for (const Json& c : cells) {
    const Json& v = field(c, "v");
    if (!v.is_number()) fail("cell value must be a number");
    if (!f.values.emplace(point_from_json(field(c, "m"), d, "cell index"), v.get<double>()).second)
      fail("duplicate cell index");
  }
  return f;
}

Json to_json(const PartitionReport& r) {
  Json out;
  out["pass"] = r.pass;
  out["violation_count"] = r.violation_count;
  Json v = Json::array();
  for (const auto& x : r.violations) {
    Json e;
    e["property"] = x.property;
    e["v"] = to_json(x.v);
    e["detail"] = x.detail;
    v.push_back(std::move(e));
  }
  out["violations"] = std::move(v);
  return out;
}

Json to_json(const QmfReport& r) {
  Json out;
  out["max_dev"] = r.max_dev;
  out["samples"] = r.samples;
  out["seed"] = r.seed;
  return out;
}

Json to_json(const SupportBound& b) {
  Json out;
  out["radius"] = b.radius;
  out["terms"] = b.terms;
  out["tail"] = b.tail;
  out["tail_start"] = b.tail_start;
  out["block"] = b.block;
  out["contraction"] = b.contraction;
  return out;
}

Json to_json(const PartialSum& p) {
  Json out;
  out["n_lo"] = p.n_lo;
  out["n_hi"] = p.n_hi;
  out["value"] = p.value;
  Json w = Json::object();
  for (const auto& [n, c] : p.window) w[std::to_string(n)] = c;
  out["window"] = std::move(w);
  return out;
}

Json to_json(const TelescopeResult& t) {
  Json out;
  out["J"] = t.J;
  out["residual"] = t.residual;
  out["energy_residual"] = t.energy_residual;
  out["lj_fine"] = t.lj_fine;
  out["lj_coarse"] = t.lj_coarse;
  out["wavelet_energy"] = t.wavelet_energy;
  return out;
}

Json to_json(const FrameReport& r) {
  Json out;
  out["f_norm_sq"] = r.f_norm_sq;
  Json ps = Json::array();
  for (const auto& p : r.parseval_partial) ps.push_back(to_json(p));
  out["parseval_partial"] = std::move(ps);
  Json lj = Json::array();
  for (const auto& [J, v] : r.lj_curve) lj.push_back(Json{{"J", J}, {"L", v}});
  out["lj_curve"] = std::move(lj);
  Json tel = Json::array();
  for (const auto& t : r.telescope) tel.push_back(to_json(t));
  out["telescope"] = std::move(tel);
  out["error_sources"] = Json{{"lawton_residual", r.lawton_residual},
                              {"stage_diff", r.stage_diff},
                              {"quadrature_margin", r.quadrature_margin}};
  return out;
}

std::string to_csv(const SampledFunction& f) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < f.dim(); ++i) os << 'm' << i + 1 << ',';
  os << "value\n";
  for (const auto& [m, v] : f.values) {
    for (Eigen::Index i = 0; i < m.size(); ++i) os << m(i) << ',';
    os << format_coeff(v) << '\n';
  }
  return os.str();
}

std::string lj_csv(const std::map<int, double>& curve) {
  std::ostringstream os;
  os << "J,L_J\n";
  for (const auto& [J, v] : curve) os << J << ',' << format_coeff(v) << '\n';
  return os.str();
}

std::string partial_csv(const std::vector<PartialSum>& sums) {
  std::ostringstream os;
  os << "n_lo,n_hi,partial_sum\n";
  for (const auto& p : sums) os << p.n_lo << ',' << p.n_hi << ',' << format_coeff(p.value) << '\n';
  return os.str();
}

std::vector<Point> parse_support(const std::string& spec) {
  std::vector<std::int64_t> lo, hi;
  std::string_view rest(spec);
  if (rest.empty()) fail("empty support specification");
  while (true) {
    const std::size_t comma = rest.find(',');
    const std::string_view tok = rest.substr(0, comma);
    const std::size_t dots = tok.find("..");
    const auto a = parse_int_token(tok.substr(0, dots));
    const auto b = dots == std::string_view::npos ? a : parse_int_token(tok.substr(dots + 2));
    if (a > b) fail("support range \"" + std::string(tok) + "\" is empty");
    lo.push_back(a);
    hi.push_back(b);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  Point l(static_cast<Eigen::Index>(lo.size())), h(static_cast<Eigen::Index>(hi.size()));
  for (std::size_t i = 0; i < lo.size(); ++i) {
    l(static_cast<Eigen::Index>(i)) = lo[i];
    h(static_cast<Eigen::Index>(i)) = hi[i];
  }
  return support_box(l, h);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write " + path);
  out << text;
  if (!out) throw PreconditionError("write failed for " + path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace pfw::io
