// Acceptance gate: ten end-to-end criteria, one pass/fail line each.
// Everything is exact rational arithmetic, so every comparison below is
// exact equality — the only pinned tolerance is the wall-clock bound on
// criterion 1. Random draws use fixed seeds; reruns are byte-identical.

#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qpoly/qpoly.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

namespace {

using namespace qpoly;

int failures = 0;

void report(int idx, const std::string& what, bool ok, const std::string& note) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << idx << ": " << what;
  if (!note.empty()) std::cout << " — " << note;
  std::cout << "\n";
  if (!ok) ++failures;
}

void run(int idx, const std::string& what, bool (*fn)(std::string&)) {
  std::string note;
  bool ok = false;
  try {
    ok = fn(note);
  } catch (const std::exception& e) {
    note = std::string("threw: ") + e.what();
  }
  report(idx, what, ok, note);
}

std::string fmt_secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f s", s);
  return buf;
}

// --- shared random generators (fixed seeds per criterion) --------------------

Rat rnd_rat(std::mt19937& rng, int num_range = 4, int den_max = 3) {
  std::uniform_int_distribution<int> num(-num_range, num_range), den(1, den_max);
  return Rat(num(rng), den(rng));
}

QVec rnd_vec(std::mt19937& rng, int dim) {
  QVec v(dim);
  for (auto& c : v) c = rnd_rat(rng);
  return v;
}

QVec rnd_nonzero_vec(std::mt19937& rng, int dim) {
  for (;;) {
    QVec v = rnd_vec(rng, dim);
    for (const auto& c : v)
      if (!c.is_zero()) return v;
  }
}

PolySpace random_space(std::mt19937& rng, int dim, int max_pairs = 8) {
  for (;;) {
    std::uniform_int_distribution<int> cnt(dim, max_pairs);
    const int m = cnt(rng);
    std::vector<QVec> gens;
    for (int i = 0; i < m; ++i) gens.push_back(rnd_nonzero_vec(rng, dim));
    if (rank_of_columns(dim, gens) == dim) return PolySpace::from_vrep(SymVRep{dim, std::move(gens)});
  }
}

std::vector<QVec> random_independent(std::mt19937& rng, int dim, int count) {
  for (;;) {
    std::vector<QVec> vs;
    for (int i = 0; i < count; ++i) vs.push_back(rnd_nonzero_vec(rng, dim));
    if (rank_of_columns(dim, vs) == count) return vs;
  }
}

// --- 1: the halving map refutes the chain inequality at every n ---------------

bool crit1(std::string& note) {
  const auto t0 = std::chrono::steady_clock::now();
  const PartialIsometry o = gurarii_counterexample();
  for (int n = 1; n <= 10; ++n) {
    const Condition3Report r = check_condition3(o, n);
    if (r.holds) {
      note = "verdict flipped to holds at n = " + std::to_string(n);
      return false;
    }
    std::vector<QVec> chain;
    Rat x(1);
    for (int i = 0; i < n; ++i, x /= Rat(2)) chain.push_back(QVec{x});
    const auto sides = condition3_sides(o, chain);
    const Rat want_rhs = Rat(1) - chain.back()[0];  // 1 - 2^-(n-1)
    if (sides.first != Rat(1) || sides.second != want_rhs) {
      note = "explicit chain sides differ at n = " + std::to_string(n) + ": lhs = " +
             sides.first.str() + ", rhs = " + sides.second.str();
      return false;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs >= 60.0) {
    note = "too slow: " + fmt_secs(secs);
    return false;
  }
  note = "n = 1..10 all refuted, explicit chain sides exact, " + fmt_secs(secs);
  return true;
}

// --- 2: certificates from restriction corpus re-verify -------------------------

bool crit2(std::string& note) {
  const auto& entries = corpus::restriction_corpus();
  if (entries.size() < 50) {
    note = "corpus too small: " + std::to_string(entries.size());
    return false;
  }
  int i = 0;
  for (const auto& e : entries) {
    const auto n = search_extendability(e.o, e.order);
    if (!n) {
      note = "entry " + std::to_string(i) + " found no n <= " + std::to_string(e.order);
      return false;
    }
    const IsometrySystem sys = extension_certificate(e.o, *n);
    if (*n % sys.order != 0) {
      note = "entry " + std::to_string(i) + ": period does not divide n";
      return false;
    }
    const ValidationReport v = check_system(e.o, sys);
    if (!v.ok) {
      note = "entry " + std::to_string(i) + " failed re-verification (" + v.violation + ")";
      return false;
    }
    ++i;
  }
  note = std::to_string(entries.size()) + " restrictions, every returned system re-verified exactly";
  return true;
}

// --- 3: representation round trips and gauge agreement ---------------------------

bool crit3(std::string& note) {
  std::mt19937 rng(301);
  int points = 0;
  for (int t = 0; t < 100; ++t) {
    const int dim = 1 + t % 4;
    const PolySpace s = random_space(rng, dim);
    const SymVRep v1 = s.ball_v();
    const SymHRep h1 = s.ball_h();
    const PolySpace s2 = PolySpace::from_hrep(h1);
    if (!(s2.ball_v() == v1)) {
      note = "facet-to-vertex trip changed the ball at instance " + std::to_string(t);
      return false;
    }
    if (!(s2.ball_h() == h1)) {
      note = "vertex-to-facet trip changed the facets at instance " + std::to_string(t);
      return false;
    }
    for (int p = 0; p < 10; ++p, ++points) {
      const QVec x = rnd_vec(rng, dim);
      const Rat g = gauge(v1, x);
      if (g != norm_h(h1, x) || g != s.norm(x)) {
        note = "gauge and facet norm disagree at instance " + std::to_string(t);
        return false;
      }
    }
  }
  note = "100 balls (dims 1..4), round trips exact, " + std::to_string(points) + " point agreements";
  return true;
}

// --- 4: duality laws, sums, quotients, finite groups --------------------------------

// independent hexagon-group count: images of the two unit vectors range
// over the six signed vertices; keep invertible maps permuting the vertex set
int hexagon_group_oracle() {
  const QVec e1{Rat(1), Rat(0)}, e2{Rat(0), Rat(1)}, d{Rat(1), Rat(1)};
  std::vector<QVec> verts;
  for (const QVec& v : {e1, e2, d}) {
    verts.push_back(v);
    verts.push_back(-v);
  }
  int count = 0;
  for (const QVec& a : verts)
    for (const QVec& b : verts) {
      QMat m(2, 2);
      m(0, 0) = a[0];
      m(1, 0) = a[1];
      m(0, 1) = b[0];
      m(1, 1) = b[1];
      if (!inverse(m)) continue;
      bool perm = true;
      for (const QVec& v : verts) {
        const QVec img = m * v;
        bool found = false;
        for (const QVec& w : verts) found = found || img == w;
        perm = perm && found;
      }
      if (perm) ++count;
    }
  return count;
}

bool crit4(std::string& note) {
  std::mt19937 rng(401);
  // dual is an involution
  for (int t = 0; t < 20; ++t) {
    const PolySpace s = random_space(rng, 1 + t % 4, 6);
    if (!(dual(dual(s)) == s)) {
      note = "double dual differs at instance " + std::to_string(t);
      return false;
    }
  }
  // duality swaps the two sums
  for (int t = 0; t < 15; ++t) {
    const PolySpace x = random_space(rng, 1 + t % 3, 5);
    const PolySpace y = random_space(rng, 1 + (t + 1) % 3, 5);
    if (!(dual(l1_sum(x, y)) == linf_sum(dual(x), dual(y))) ||
        !(dual(linf_sum(x, y)) == l1_sum(dual(x), dual(y)))) {
      note = "sum duality law failed at instance " + std::to_string(t);
      return false;
    }
  }
  // subspaces and quotients stay polyhedral (and re-canonicalize)
  for (int t = 0; t < 15; ++t) {
    const int dim = 2 + t % 3;
    const PolySpace s = random_space(rng, dim, 6);
    const Subspace sub{dim, random_independent(rng, dim, 1 + t % (dim - 1 > 0 ? dim - 1 : 1))};
    const PolySpace in = subspace_space(s, sub);
    const auto [q, proj] = quotient_space(s, sub);
    if (!(PolySpace::from_vrep(in.ball_v()) == in) || !(PolySpace::from_vrep(q.ball_v()) == q)) {
      note = "induced space failed to re-canonicalize at instance " + std::to_string(t);
      return false;
    }
    if (proj.rows() != q.dim()) {
      note = "projection shape mismatch at instance " + std::to_string(t);
      return false;
    }
  }
  // every group element has finite order
  const PolySpace diamond = PolySpace::from_vrep(SymVRep{2, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}});
  const PolySpace hex =
      PolySpace::from_vrep(SymVRep{2, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1), Rat(1)}}});
  for (const PolySpace* s : {&diamond, &hex}) {
    const auto group = isometry_group(*s);
    for (const auto& g : group) {
      QMat p = g;
      std::size_t k = 1;
      while (!p.is_identity() && k <= group.size()) {
        p = p * g;
        ++k;
      }
      if (!p.is_identity()) {
        note = "group element without finite order";
        return false;
      }
    }
  }
  // pinned orders with independent oracles
  const auto dg = isometry_group(diamond);
  if (dg.size() != 8) {
    note = "diamond group order " + std::to_string(dg.size()) + ", wanted 8";
    return false;
  }
  std::set<std::vector<std::string>> found, expected;
  auto key = [](const QMat& m) {
    std::vector<std::string> k;
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) k.push_back(m(i, j).str());
    return k;
  };
  for (const auto& g : dg) found.insert(key(g));
  for (const auto& g : oracle::signed_permutations(2)) expected.insert(key(g));
  if (found != expected) {
    note = "diamond group differs from the signed permutations";
    return false;
  }
  const auto hg = isometry_group(hex);
  if (hg.size() != 12 || hexagon_group_oracle() != 12) {
    note = "hexagon group order " + std::to_string(hg.size()) + ", oracle " +
           std::to_string(hexagon_group_oracle()) + ", wanted 12";
    return false;
  }
  note = "duality involution, sum swaps, induced norms, finite orders, |diamond| = 8, |hexagon| = 12";
  return true;
}

// --- 5: quotient norm equals direct minimization over the subspace ------------------

Rat direct_coset_min(const PolySpace& s, const Subspace& sub, const QVec& x) {
  const auto& funcs = s.ball_h().functionals;
  const int m = static_cast<int>(sub.basis.size());
  LinearProgram lp;
  lp.num_vars = 1 + m;  // t, then the subspace coordinates
  lp.objective = QVec(1 + m);
  lp.objective[0] = Rat(1);
  lp.nonneg = std::vector<bool>(static_cast<std::size_t>(1 + m), false);
  lp.nonneg[0] = true;
  for (const QVec& u : funcs)
    for (int sgn : {1, -1}) {
      QVec a(1 + m);
      a[0] = Rat(-1);
      for (int j = 0; j < m; ++j) a[1 + j] = Rat(sgn) * dot(u, sub.basis[j]);
      lp.constraints.push_back({a, Rat(-sgn) * dot(u, x), Rel::LE});
    }
  const LpOutcome out = lp_min(lp);
  if (out.status != LpStatus::Optimal) throw std::logic_error("coset norm program must be solvable");
  return out.value;
}

bool crit5(std::string& note) {
  std::mt19937 rng(501);
  for (int t = 0; t < 100; ++t) {
    const int dim = 2 + t % 3;
    const PolySpace s = random_space(rng, dim, 6);
    std::uniform_int_distribution<int> cnt(1, dim - 1);
    const Subspace sub{dim, random_independent(rng, dim, cnt(rng))};
    const QVec x = rnd_vec(rng, dim);
    const auto [q, proj] = quotient_space(s, sub);
    if (q.norm(proj * x) != direct_coset_min(s, sub, x)) {
      note = "projection norm and direct minimum disagree at instance " + std::to_string(t);
      return false;
    }
  }
  note = "100 (space, subspace, point) triples agree exactly";
  return true;
}

// --- 6: window stability and shift equivariance ---------------------------------------

bool crit6(std::string& note) {
  std::mt19937 rng(601);
  const auto& entries = corpus::restriction_corpus();
  for (int t = 0; t < 50; ++t) {
    const auto& e = entries[static_cast<std::size_t>(t) % entries.size()];
    const int dim = e.o.space.dim();
    std::uniform_int_distribution<int> width(0, 2);
    const int hi = width(rng);
    std::map<int, QVec> cells;
    for (int r = 0; r <= hi; ++r) {
      const QVec v = rnd_vec(rng, dim);
      for (const auto& c : v)
        if (!c.is_zero()) {
          cells[r] = v;
          break;
        }
    }
    const FinSupportSeq a{e.o.space, cells};
    const Rat base = windowed_quotient_norm(a, e.o, 0, hi);
    if (windowed_quotient_norm(a, e.o, -1, hi + 1) != base ||
        windowed_quotient_norm(a, e.o, -5, hi + 5) != base) {
      note = "window enlargement changed the value at instance " + std::to_string(t);
      return false;
    }
    std::vector<QVec> samples;
    for (int j = 0; j < 3; ++j) {
      QVec v(dim);
      for (const auto& b : e.o.dom.basis) v = v + rnd_rat(rng) * b;
      samples.push_back(std::move(v));
    }
    if (!check_shift_equivariance(e.o, samples)) {
      note = "equivariance failed on sampled domain vectors at instance " + std::to_string(t);
      return false;
    }
  }
  note = "50 instances window-stable (+-1, +-5), equivariance on all samples";
  return true;
}

// --- 7: the eventual core is reached fast and carries a surjective isometry ------------

bool crit7(std::string& note) {
  const EventualCore g = eventual_core(gurarii_counterexample());
  if (!g.core.basis.empty() || g.steps != 2) {
    note = "halving map core dim " + std::to_string(g.core.basis.size()) + " in " +
           std::to_string(g.steps) + " steps, wanted 0 in 2";
    return false;
  }
  int i = 0;
  for (const auto& e : corpus::restriction_corpus()) {
    const EventualCore ec = eventual_core(e.o);
    if (ec.steps > e.o.space.dim()) {
      note = "entry " + std::to_string(i) + " stabilized too late";
      return false;
    }
    if (!ec.core.basis.empty()) {
      if (!inverse(ec.restricted)) {
        note = "entry " + std::to_string(i) + " core map is not invertible";
        return false;
      }
      const PolySpace cs = subspace_space(e.o.space, ec.core);
      if (!is_isometric_embedding(cs, cs, ec.restricted)) {
        note = "entry " + std::to_string(i) + " core map is not an isometry";
        return false;
      }
    }
    ++i;
  }
  note = "halving map: trivial core in 2 steps; corpus cores carry surjective isometries";
  return true;
}

// --- 8: extendability at n implies extendability at 2n ----------------------------------

bool crit8(std::string& note) {
  int i = 0;
  int checked = 0;
  for (const auto& e : corpus::restriction_corpus()) {
    const auto n = search_extendability(e.o, e.order);
    if (!n) {
      note = "entry " + std::to_string(i) + " has no base point";
      return false;
    }
    if (!check_condition3(e.o, 2 * *n).holds) {
      note = "entry " + std::to_string(i) + " holds at " + std::to_string(*n) + " but not at " +
             std::to_string(2 * *n);
      return false;
    }
    ++checked;
    ++i;
  }
  note = std::to_string(checked) + " corpus instances double their chain length";
  return true;
}

// --- 9: smoothness at the unit sphere and the orbit obstruction ---------------------------

bool crit9(std::string& note) {
  const PolySpace diamond =
      PolySpace::from_vrep(SymVRep{2, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}});
  const SymHRep h = diamond.ball_h();
  const QVec corner{Rat(1), Rat(0)};
  const QVec edge{Rat(1, 2), Rat(1, 2)};
  if (is_smooth_point(h, corner)) {
    note = "corner point reported smooth";
    return false;
  }
  if (!is_smooth_point(h, edge)) {
    note = "edge midpoint reported non-smooth";
    return false;
  }
  const auto group = isometry_group(diamond);
  if (group.size() != 8) {
    note = "diamond group order " + std::to_string(group.size()) + ", wanted 8";
    return false;
  }
  for (const auto& g : group)
    if (g * corner == edge) {
      note = "a symmetry carried the corner to the edge midpoint";
      return false;
    }
  note = "corner non-smooth, edge midpoint smooth, no symmetry links them (8 checked)";
  return true;
}

// --- 10: partial linear injections extend to invertible maps ------------------------------

bool crit10(std::string& note) {
  std::mt19937 rng(1001);
  for (int t = 0; t < 50; ++t) {
    const int dim = 1 + t % 5;
    std::uniform_int_distribution<int> kd(0, dim);
    const int k = kd(rng);
    const Subspace dom{dim, k == 0 ? std::vector<QVec>{} : random_independent(rng, dim, k)};
    const std::vector<QVec> imgs = k == 0 ? std::vector<QVec>{} : random_independent(rng, dim, k);
    QMat images(dim, k);
    for (int j = 0; j < k; ++j)
      for (int r = 0; r < dim; ++r) images(r, j) = imgs[static_cast<std::size_t>(j)][r];
    const LinearExtension ext = linear_hrushovski_extension(dim, dom, images);
    if (!inverse(ext.map)) {
      note = "extension not invertible at instance " + std::to_string(t);
      return false;
    }
    for (int j = 0; j < k; ++j) {
      QVec in(ext.dim), want(ext.dim);
      for (int r = 0; r < dim; ++r) {
        in[r] = dom.basis[static_cast<std::size_t>(j)][r];
        want[r] = images(r, j);
      }
      if (!(ext.map * in == want)) {
        note = "extension disagrees with the input map at instance " + std::to_string(t);
        return false;
      }
    }
  }
  note = "50 injections (dims 1..5) extended to exact invertible maps";
  return true;
}

}  // namespace

int main() {
  run(1, "halving map refutes the chain inequality for n = 1..10", crit1);
  run(2, "restriction corpus certificates re-verify", crit2);
  run(3, "vertex/facet round trips and gauge agreement", crit3);
  run(4, "duality laws, sums, induced norms, finite groups", crit4);
  run(5, "quotient norm equals direct coset minimization", crit5);
  run(6, "window stability and shift equivariance", crit6);
  run(7, "eventual cores are small and carry surjective isometries", crit7);
  run(8, "extendability at n implies extendability at 2n", crit8);
  run(9, "smooth points and the symmetry obstruction", crit9);
  run(10, "partial linear injections extend to invertible maps", crit10);
  if (failures != 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all 10 criteria passed\n";
  return 0;
}
