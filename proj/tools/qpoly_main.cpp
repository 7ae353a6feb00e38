// Command-line front end: space algebra on exact polytope norms, partial
// isometry validation, extendability checks with re-verifiable
// certificates, the halving-map demonstration, isometry groups, and
// eventual cores.
//
// Exit codes: 0 success or positive verdict, 1 sound negative verdict
// (a failed check, an unverifiable certificate, an exhausted search),
// 2 malformed input or usage error.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qpoly/qpoly.hpp"

namespace {

using qpoly::Json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qpoly::parse_error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json load_json(const std::string& path) {
  try {
    return qpoly::parse_json_text(read_file(path));
  } catch (const qpoly::parse_error& e) {
    throw qpoly::parse_error(path + ": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qpoly::parse_error("cannot write file: " + path);
  out << content;
}

qpoly::PolySpace load_space(const std::string& p) {
  return qpoly::space_from_json(load_json(p), p + ":$");
}
qpoly::Subspace load_subspace(const std::string& p) {
  return qpoly::subspace_from_json(load_json(p), p + ":$");
}
qpoly::PartialIsometry load_partiso(const std::string& p) {
  return qpoly::partiso_from_json(load_json(p), p + ":$");
}
qpoly::CertificateFile load_certificate(const std::string& p) {
  return qpoly::certificate_from_json(load_json(p), p + ":$");
}

// shared flags, bound to every leaf command
struct Io {
  std::vector<std::string> ins;
  std::string out;
  bool json = false;

  void attach(CLI::App* cmd, int inputs_required) {
    if (inputs_required > 0)
      cmd->add_option("--in", ins, "input file (JSON)")->required()->expected(inputs_required);
    cmd->add_option("--out", out, "write the result document to this file");
    cmd->add_flag("--json", json, "print the result as JSON instead of text");
  }

  const std::string& in(std::size_t i) const { return ins.at(i); }
};

// one compact row for a matrix: nested arrays of rational strings
std::string brief_mat(const qpoly::QMat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(std::move(row));
  }
  return rows.dump();
}

std::string brief_vecs(const std::vector<qpoly::QVec>& vs) {
  return vec_list_to_json(vs).dump();
}

// Emits a document-producing result: text mode prints the document too
// (space files are their own best rendering); --out writes it.
int emit_document(const Io& io, const Json& doc) {
  const std::string rendered = qpoly::render_json(doc);
  std::cout << rendered;
  if (!io.out.empty()) write_file(io.out, rendered);
  return 0;
}

// Emits a verdict-style result: text lines by default, a JSON document
// with --json, an optional certificate document behind --out.
int emit_verdict(const Io& io, const std::string& text, const Json& doc, int code,
                 const Json* out_doc = nullptr) {
  if (io.json)
    std::cout << qpoly::render_json(doc);
  else
    std::cout << text;
  if (!io.out.empty() && out_doc != nullptr) write_file(io.out, qpoly::render_json(*out_doc));
  return code;
}

// --- space algebra ---------------------------------------------------------

int run_space_dual(const Io& io) {
  return emit_document(io, space_to_json(qpoly::dual(load_space(io.in(0)))));
}

int run_space_l1sum(const Io& io) {
  const auto x = load_space(io.in(0));
  const auto y = load_space(io.in(1));
  return emit_document(io, space_to_json(qpoly::l1_sum(x, y)));
}

int run_space_linfsum(const Io& io) {
  const auto x = load_space(io.in(0));
  const auto y = load_space(io.in(1));
  return emit_document(io, space_to_json(qpoly::linf_sum(x, y)));
}

int run_space_quotient(const Io& io) {
  const auto s = load_space(io.in(0));
  const auto sub = load_subspace(io.in(1));
  const auto [q, proj] = qpoly::quotient_space(s, sub);
  return emit_document(io, Json{{"space", space_to_json(q)}, {"projection", mat_to_json(proj)}});
}

int run_space_subspace(const Io& io) {
  const auto s = load_space(io.in(0));
  const auto sub = load_subspace(io.in(1));
  return emit_document(io, space_to_json(qpoly::subspace_space(s, sub)));
}

// --- partial isometries ------------------------------------------------------

Json validation_to_json(const qpoly::ValidationReport& v) {
  Json j{{"ok", v.ok}};
  if (!v.ok) j["violation"] = v.violation;
  if (v.witness) j["witness"] = vec_to_json(*v.witness);
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

int run_partiso_validate(const Io& io) {
  const auto o = load_partiso(io.in(0));
  const qpoly::ValidationReport v = qpoly::validate(o);
  std::string text = "ok = " + std::string(v.ok ? "true" : "false") + "\n";
  if (!v.ok) text += "violation = " + v.violation + "\n";
  if (v.witness) text += "witness = " + vec_to_json(*v.witness).dump() + "\n";
  if (!v.detail.empty()) text += "detail = " + v.detail + "\n";
  const Json doc = validation_to_json(v);
  return emit_verdict(io, text, doc, v.ok ? 0 : 1, &doc);
}

// --- extendability -----------------------------------------------------------

std::string report_text(const qpoly::Condition3Report& r) {
  std::string line = "n = " + std::to_string(r.n) + ": holds = " + (r.holds ? "true" : "false");
  if (!r.holds) {
    line += ", lhs = " + r.lhs->str() + ", rhs = " + r.rhs->str();
    line += "\nwitness = " + brief_vecs(*r.witness);
  }
  return line + "\n";
}

int run_check(const Io& io, int n) {
  const auto o = load_partiso(io.in(0));
  const qpoly::Condition3Report r = qpoly::check_condition3(o, n);
  if (r.holds) {
    const qpoly::IsometrySystem sys = qpoly::extension_certificate(o, n);
    const Json cert = extension_certificate_to_json(o, n, sys);
    return emit_verdict(io, report_text(r), cert, 0, &cert);
  }
  const Json cert = violation_certificate_to_json(o, r);
  return emit_verdict(io, report_text(r), cert, 1, &cert);
}

int run_search(const Io& io, int n_max) {
  const auto o = load_partiso(io.in(0));
  const auto n = qpoly::search_extendability(o, n_max);
  if (n) {
    const qpoly::IsometrySystem sys = qpoly::extension_certificate(o, *n);
    const Json cert = extension_certificate_to_json(o, *n, sys);
    const Json doc{{"found", true}, {"n", *n}, {"certificate", cert}};
    return emit_verdict(io, "extendable at n = " + std::to_string(*n) + "\n", doc, 0, &cert);
  }
  const qpoly::Condition3Report last = qpoly::check_condition3(o, n_max);
  const Json cert = violation_certificate_to_json(o, last);
  const Json doc{{"found", false}, {"n_max", n_max}, {"certificate", cert}};
  return emit_verdict(io, "unknown up to " + std::to_string(n_max) + "\n", doc, 1, &cert);
}

int run_demo(const Io& io, int n_max) {
  const qpoly::PartialIsometry o = qpoly::gurarii_counterexample();
  std::string text;
  Json rows = Json::array();
  for (int n = 1; n <= n_max; ++n) {
    // verdict from the decision procedure, sides from the explicit chain
    // a_i = 2^-i e_1 (expressed in domain coordinates)
    const qpoly::Condition3Report r = qpoly::check_condition3(o, n);
    std::vector<qpoly::QVec> chain;
    qpoly::Rat x(1);
    for (int i = 0; i < n; ++i, x /= qpoly::Rat(2)) chain.push_back(qpoly::QVec{x});
    const auto sides = qpoly::condition3_sides(o, chain);
    text += "n = " + std::to_string(n) + ": holds = " + (r.holds ? "true" : "false") +
            ", lhs = " + sides.first.str() + ", rhs = " + sides.second.str() + "\n";
    rows.push_back(Json{{"n", n},
                        {"holds", r.holds},
                        {"lhs", sides.first.str()},
                        {"rhs", sides.second.str()}});
  }
  const Json doc{{"rows", std::move(rows)}};
  return emit_verdict(io, text, doc, 0, &doc);
}

// --- certificates -------------------------------------------------------------

int run_verify(const Io& io) {
  const qpoly::CertificateFile c = load_certificate(io.in(0));
  std::string reason;
  if (c.kind == "extension-certificate") {
    const qpoly::ValidationReport v = qpoly::validate(c.instance);
    if (!v.ok)
      reason = "embedded instance is not a partial isometry (" + v.violation + ")";
    else if (*c.n % c.system->order != 0)
      reason = "claimed period " + std::to_string(*c.n) + " is not a multiple of the order";
    else {
      const qpoly::ValidationReport s = qpoly::check_system(c.instance, *c.system);
      if (!s.ok) reason = "system re-check failed (" + s.violation + ")";
    }
  } else {
    const auto& r = *c.report;
    const qpoly::ValidationReport v = qpoly::validate(c.instance);
    if (!v.ok)
      reason = "embedded instance is not a partial isometry (" + v.violation + ")";
    else if (r.holds)
      reason = "a violation certificate must report holds = false";
    else if (!r.witness || !r.lhs || !r.rhs)
      reason = "violation certificate is missing its witness or sides";
    else if (static_cast<int>(r.witness->size()) != r.n)
      reason = "witness length differs from n";
    else {
      try {
        const auto sides = qpoly::condition3_sides(c.instance, *r.witness);
        if (sides.first != *r.lhs || sides.second != *r.rhs)
          reason = "stored sides do not match re-evaluation of the witness chain";
        else if (!(sides.first > sides.second))
          reason = "witness chain does not violate the inequality";
      } catch (const qpoly::precondition_error& e) {
        reason = std::string("witness chain is malformed: ") + e.what();
      }
    }
  }
  const bool sound = reason.empty();
  Json doc{{"sound", sound}, {"kind", c.kind}};
  if (!sound) doc["reason"] = reason;
  const std::string text =
      sound ? "certificate verifies\n" : "certificate does not verify: " + reason + "\n";
  return emit_verdict(io, text, doc, sound ? 0 : 1, &doc);
}

// --- groups and cores -----------------------------------------------------------

int run_isogroup(const Io& io) {
  const auto s = load_space(io.in(0));
  const std::vector<qpoly::LinearMap> group = qpoly::isometry_group(s);
  std::string text = "group order: " + std::to_string(group.size()) + "\n";
  Json elems = Json::array();
  for (const auto& g : group) {
    text += brief_mat(g) + "\n";
    elems.push_back(mat_to_json(g));
  }
  const Json doc{{"order", group.size()}, {"elements", std::move(elems)}};
  return emit_verdict(io, text, doc, 0, &doc);
}

int run_core(const Io& io) {
  const auto o = load_partiso(io.in(0));
  const qpoly::EventualCore ec = qpoly::eventual_core(o);
  std::string text = "core dimension = " + std::to_string(ec.core.basis.size()) +
                     ", steps = " + std::to_string(ec.steps) + "\n";
  if (!ec.core.basis.empty()) {
    text += "basis = " + brief_vecs(ec.core.basis) + "\n";
    text += "restricted = " + brief_mat(ec.restricted) + "\n";
  }
  const Json doc{{"core", subspace_to_json(ec.core)},
                 {"restricted", mat_to_json(ec.restricted)},
                 {"steps", ec.steps}};
  return emit_verdict(io, text, doc, 0, &doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact rational polytope norms: space algebra, partial isometries, "
               "extendability certificates, shift sequences"};
  app.require_subcommand(1);

  Io io;
  int n = 1;
  int n_max = 8;
  std::function<int()> action;

  CLI::App* space = app.add_subcommand("space", "operations on space files");
  space->require_subcommand(1);
  {
    CLI::App* c = space->add_subcommand("dual", "dual space (polar unit ball)");
    io.attach(c, 1);
    c->callback([&] { action = [&] { return run_space_dual(io); }; });
  }
  {
    CLI::App* c = space->add_subcommand("l1sum", "direct sum with added norms");
    io.attach(c, 2);
    c->callback([&] { action = [&] { return run_space_l1sum(io); }; });
  }
  {
    CLI::App* c = space->add_subcommand("linfsum", "direct sum with max norms");
    io.attach(c, 2);
    c->callback([&] { action = [&] { return run_space_linfsum(io); }; });
  }
  {
    CLI::App* c = space->add_subcommand("quotient", "quotient by a subspace (space + projection)");
    io.attach(c, 2);
    c->callback([&] { action = [&] { return run_space_quotient(io); }; });
  }
  {
    CLI::App* c = space->add_subcommand("subspace", "induced norm on a subspace, in basis coordinates");
    io.attach(c, 2);
    c->callback([&] { action = [&] { return run_space_subspace(io); }; });
  }

  CLI::App* partiso = app.add_subcommand("partiso", "operations on partial isometry files");
  partiso->require_subcommand(1);
  {
    CLI::App* c = partiso->add_subcommand("validate", "check the partial-isometry axioms");
    io.attach(c, 1);
    c->callback([&] { action = [&] { return run_partiso_validate(io); }; });
  }

  {
    CLI::App* c = app.add_subcommand("check", "decide the n-link chain inequality; emit a certificate");
    io.attach(c, 1);
    c->add_option("--n", n, "number of chain links")->required();
    c->callback([&] { action = [&] { return run_check(io, n); }; });
  }
  {
    CLI::App* c = app.add_subcommand("search", "find the least n at which the chain inequality holds");
    io.attach(c, 1);
    c->add_option("--n-max", n_max, "largest n to try")->required();
    c->callback([&] { action = [&] { return run_search(io, n_max); }; });
  }

  CLI::App* demo = app.add_subcommand("demo", "built-in demonstrations");
  demo->require_subcommand(1);
  {
    CLI::App* c = demo->add_subcommand(
        "gurarii", "the halving map that fails the chain inequality at every n");
    io.attach(c, 0);
    c->add_option("--n-max", n_max, "largest chain length to tabulate (default 8)");
    c->callback([&] { action = [&] { return run_demo(io, n_max); }; });
  }

  {
    CLI::App* c = app.add_subcommand("verify", "re-check a certificate file from its own content");
    io.attach(c, 1);
    c->callback([&] { action = [&] { return run_verify(io); }; });
  }
  {
    CLI::App* c = app.add_subcommand("isogroup", "all surjective linear isometries of a space");
    io.attach(c, 1);
    c->callback([&] { action = [&] { return run_isogroup(io); }; });
  }
  {
    CLI::App* c = app.add_subcommand("core", "largest subspace on which the map iterates forever");
    io.attach(c, 1);
    c->callback([&] { action = [&] { return run_core(io); }; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return action ? action() : 2;
  } catch (const qpoly::parse_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const qpoly::precondition_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const qpoly::degenerate_input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const qpoly::resource_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
