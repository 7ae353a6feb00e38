#pragma once

#include <json.hpp>

#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "extension.hpp"
#include "shiftspace.hpp"

namespace qpoly {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Writing. Output is always canonical and deterministic: spaces are written
// through their canonical vertex representation, objects have sorted keys,
// and every number is an exact rational string "p/q" (or "p" for integers).
// ---------------------------------------------------------------------------

inline Json vec_to_json(const QVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

inline Json vec_list_to_json(const std::vector<QVec>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(vec_to_json(v));
  return a;
}

inline Json mat_to_json(const QMat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(std::move(row));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

inline Json space_to_json(const PolySpace& s) {
  return Json{{"kind", "space"}, {"dim", s.dim()}, {"vertices", vec_list_to_json(s.ball_v().generators)}};
}

inline Json subspace_to_json(const Subspace& s) {
  return Json{{"kind", "subspace"}, {"ambient_dim", s.ambient_dim}, {"basis", vec_list_to_json(s.basis)}};
}

inline Json partiso_to_json(const PartialIsometry& o) {
  return Json{{"space", space_to_json(o.space)},
              {"domain_basis", vec_list_to_json(o.dom.basis)},
              {"range_basis", vec_list_to_json(o.ran.basis)},
              {"map", mat_to_json(o.map)}};
}

inline Json seq_to_json(const FinSupportSeq& a) {
  Json entries = Json::object();
  for (const auto& [idx, v] : a.entries) entries[std::to_string(idx)] = vec_to_json(v);
  return Json{{"space", space_to_json(a.space)}, {"entries", std::move(entries)}};
}

inline Json system_to_json(const IsometrySystem& sys) {
  return Json{{"space", space_to_json(sys.space)},
              {"autom", mat_to_json(sys.autom)},
              {"embed", mat_to_json(sys.embed)},
              {"order", sys.order}};
}

inline Json report_to_json(const Condition3Report& r) {
  Json j{{"n", r.n}, {"holds", r.holds}};
  if (r.witness) j["witness"] = vec_list_to_json(*r.witness);
  if (r.lhs) j["lhs"] = r.lhs->str();
  if (r.rhs) j["rhs"] = r.rhs->str();
  return j;
}

/// A positive verdict packaged for later independent re-checking: the
/// instance, the period it was certified at, and the certifying system.
inline Json extension_certificate_to_json(const PartialIsometry& o, int n, const IsometrySystem& sys) {
  return Json{{"kind", "extension-certificate"},
              {"instance", partiso_to_json(o)},
              {"n", n},
              {"system", system_to_json(sys)}};
}

/// A negative verdict packaged the same way: the instance and the full
/// report with its violating chain and exact sides.
inline Json violation_certificate_to_json(const PartialIsometry& o, const Condition3Report& r) {
  return Json{{"kind", "violation-certificate"}, {"instance", partiso_to_json(o)}, {"report", report_to_json(r)}};
}

// ---------------------------------------------------------------------------
// Reading. Strict: unknown keys, wrong types, ragged arrays, and malformed
// rational strings are parse errors naming the offending field by path.
// Semantic invariants (spanning vertex sets, independent bases, ...) are
// enforced by the constructors the readers delegate to.
// ---------------------------------------------------------------------------

namespace detail {

[[noreturn]] inline void fail_at(const std::string& path, const std::string& what) {
  throw parse_error(path + ": " + what);
}

inline const Json& member(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) fail_at(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail_at(path, std::string("missing field '") + key + "'");
  return *it;
}

// exact key discipline: everything in `required` present, nothing outside
// `required` + `optional` tolerated
inline void require_keys(const Json& j, const std::string& path, std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) fail_at(path, "expected an object");
  for (const char* k : required)
    if (!j.contains(k)) fail_at(path, std::string("missing field '") + k + "'");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) fail_at(path, "unknown field '" + key + "'");
  }
}

inline int int_from_json(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail_at(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < -1000000000LL || v > 1000000000LL) fail_at(path, "integer out of range");
  return static_cast<int>(v);
}

}  // namespace detail

inline Rat rat_from_json(const Json& j, const std::string& path) {
  if (!j.is_string()) detail::fail_at(path, "expected a rational string \"p/q\"");
  try {
    return Rat::parse(j.get<std::string>());
  } catch (const parse_error& e) {
    detail::fail_at(path, e.what());
  }
}

inline QVec vec_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) detail::fail_at(path, "expected an array of rationals");
  QVec v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(rat_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return v;
}

inline std::vector<QVec> vec_list_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) detail::fail_at(path, "expected an array of vectors");
  std::vector<QVec> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(vec_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline QMat mat_from_json(const Json& j, const std::string& path) {
  detail::require_keys(j, path, {"rows", "cols", "entries"});
  const int rows = detail::int_from_json(j["rows"], path + ".rows");
  const int cols = detail::int_from_json(j["cols"], path + ".cols");
  if (rows < 0 || cols < 0) detail::fail_at(path, "negative matrix dimension");
  const Json& entries = j["entries"];
  if (!entries.is_array() || static_cast<int>(entries.size()) != rows)
    detail::fail_at(path + ".entries", "expected " + std::to_string(rows) + " rows");
  QMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const std::string rp = path + ".entries[" + std::to_string(i) + "]";
    const QVec row = vec_from_json(entries[static_cast<std::size_t>(i)], rp);
    if (static_cast<int>(row.size()) != cols)
      detail::fail_at(rp, "expected " + std::to_string(cols) + " columns");
    for (int c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

/**
 * Accepts {"dim", "vertices"}, {"dim", "facets"}, or both (cross-checked
 * for describing the same ball); an optional "kind" must be "space".
 * The result is canonicalized by construction.
 */
inline PolySpace space_from_json(const Json& j, const std::string& path) {
  detail::require_keys(j, path, {"dim"}, {"kind", "vertices", "facets"});
  if (j.contains("kind") && j["kind"] != Json("space"))
    detail::fail_at(path + ".kind", "expected \"space\"");
  const int dim = detail::int_from_json(j["dim"], path + ".dim");
  if (dim < 0) detail::fail_at(path + ".dim", "negative dimension");
  const bool has_v = j.contains("vertices"), has_h = j.contains("facets");
  if (!has_v && !has_h) detail::fail_at(path, "need \"vertices\" or \"facets\"");

  const auto check_dims = [&](const std::vector<QVec>& vs, const std::string& p) {
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (static_cast<int>(vs[i].size()) != dim)
        detail::fail_at(p + "[" + std::to_string(i) + "]", "expected " + std::to_string(dim) + " coordinates");
  };
  std::optional<SymVRep> v;
  if (has_v) {
    std::vector<QVec> gens = vec_list_from_json(j["vertices"], path + ".vertices");
    check_dims(gens, path + ".vertices");
    v = SymVRep{dim, std::move(gens)};
  }
  std::optional<SymHRep> h;
  if (has_h) {
    std::vector<QVec> fs = vec_list_from_json(j["facets"], path + ".facets");
    check_dims(fs, path + ".facets");
    h = SymHRep{dim, std::move(fs)};
  }
  if (has_v && has_h) return PolySpace::from_both(std::move(*v), std::move(*h));
  if (has_v) return PolySpace::from_vrep(std::move(*v));
  return PolySpace::from_hrep(std::move(*h));
}

inline Subspace subspace_from_json(const Json& j, const std::string& path) {
  detail::require_keys(j, path, {"ambient_dim", "basis"}, {"kind"});
  if (j.contains("kind") && j["kind"] != Json("subspace"))
    detail::fail_at(path + ".kind", "expected \"subspace\"");
  const int dim = detail::int_from_json(j["ambient_dim"], path + ".ambient_dim");
  Subspace s{dim, vec_list_from_json(j["basis"], path + ".basis")};
  for (std::size_t i = 0; i < s.basis.size(); ++i)
    if (static_cast<int>(s.basis[i].size()) != dim)
      detail::fail_at(path + ".basis[" + std::to_string(i) + "]",
                      "expected " + std::to_string(dim) + " coordinates");
  return s;
}

inline PartialIsometry partiso_from_json(const Json& j, const std::string& path) {
  detail::require_keys(j, path, {"space", "domain_basis", "range_basis", "map"});
  PolySpace space = space_from_json(j["space"], path + ".space");
  const int d = space.dim();
  Subspace dom{d, vec_list_from_json(j["domain_basis"], path + ".domain_basis")};
  Subspace ran{d, vec_list_from_json(j["range_basis"], path + ".range_basis")};
  return {std::move(space), std::move(dom), std::move(ran), mat_from_json(j["map"], path + ".map")};
}

inline FinSupportSeq seq_from_json(const Json& j, const std::string& path) {
  detail::require_keys(j, path, {"space", "entries"});
  PolySpace space = space_from_json(j["space"], path + ".space");
  const Json& entries = j["entries"];
  if (!entries.is_object()) detail::fail_at(path + ".entries", "expected an object keyed by integer indices");
  FinSupportSeq out{std::move(space), {}};
  for (const auto& [key, value] : entries.items()) {
    const std::string ep = path + ".entries[\"" + key + "\"]";
    std::size_t used = 0;
    int idx = 0;
    try {
      idx = std::stoi(key, &used);
    } catch (const std::exception&) {
      detail::fail_at(ep, "key is not an integer index");
    }
    if (used != key.size()) detail::fail_at(ep, "key is not an integer index");
    QVec v = vec_from_json(value, ep);
    if (static_cast<int>(v.size()) != out.space.dim()) detail::fail_at(ep, "entry dimension mismatch");
    if (is_zero(v)) detail::fail_at(ep, "stored entries must be nonzero");
    out.entries.emplace(idx, std::move(v));
  }
  return out;
}

inline IsometrySystem system_from_json(const Json& j, const std::string& path) {
  detail::require_keys(j, path, {"space", "autom", "embed", "order"});
  IsometrySystem sys{space_from_json(j["space"], path + ".space"),
                     mat_from_json(j["autom"], path + ".autom"),
                     mat_from_json(j["embed"], path + ".embed"),
                     detail::int_from_json(j["order"], path + ".order")};
  if (sys.order < 1) detail::fail_at(path + ".order", "order must be positive");
  return sys;
}

inline Condition3Report report_from_json(const Json& j, const std::string& path) {
  detail::require_keys(j, path, {"n", "holds"}, {"witness", "lhs", "rhs"});
  Condition3Report r;
  r.n = detail::int_from_json(j["n"], path + ".n");
  if (!j["holds"].is_boolean()) detail::fail_at(path + ".holds", "expected a boolean");
  r.holds = j["holds"].get<bool>();
  if (j.contains("witness")) r.witness = vec_list_from_json(j["witness"], path + ".witness");
  if (j.contains("lhs")) r.lhs = rat_from_json(j["lhs"], path + ".lhs");
  if (j.contains("rhs")) r.rhs = rat_from_json(j["rhs"], path + ".rhs");
  return r;
}

/// One decoded certificate file of either kind.
struct CertificateFile {
  std::string kind;
  PartialIsometry instance;
  std::optional<int> n;                      // extension-certificate
  std::optional<IsometrySystem> system;      // extension-certificate
  std::optional<Condition3Report> report;    // violation-certificate
};

inline CertificateFile certificate_from_json(const Json& j, const std::string& path) {
  const Json& kind = detail::member(j, "kind", path);
  if (kind == Json("extension-certificate")) {
    detail::require_keys(j, path, {"kind", "instance", "n", "system"});
    CertificateFile c{"extension-certificate", partiso_from_json(j["instance"], path + ".instance"),
                      detail::int_from_json(j["n"], path + ".n"),
                      system_from_json(j["system"], path + ".system"), std::nullopt};
    if (*c.n < 1) detail::fail_at(path + ".n", "n must be positive");
    return c;
  }
  if (kind == Json("violation-certificate")) {
    detail::require_keys(j, path, {"kind", "instance", "report"});
    return {"violation-certificate", partiso_from_json(j["instance"], path + ".instance"), std::nullopt,
            std::nullopt, report_from_json(j["report"], path + ".report")};
  }
  detail::fail_at(path + ".kind", "expected \"extension-certificate\" or \"violation-certificate\"");
}

/// Strict full-document parse with position diagnostics.
inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    std::string msg = e.what();
    const auto bracket = msg.find("] ");
    if (msg.rfind("[json.exception.", 0) == 0 && bracket != std::string::npos) msg = msg.substr(bracket + 2);
    throw parse_error(msg);
  }
}

/// Canonical rendering used for files and stdout: two-space indent, sorted
/// keys (the object storage is ordered), trailing newline.
inline std::string render_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qpoly
