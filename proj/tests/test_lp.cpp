#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support/oracles.hpp"
#include "qpoly/lp.hpp"

using namespace qpoly;

namespace {

LinConstraint le(QVec a, Rat b) { return {std::move(a), std::move(b), Rel::LE}; }
LinConstraint eq(QVec a, Rat b) { return {std::move(a), std::move(b), Rel::EQ}; }

bool feasible(const LinearProgram& lp, const QVec& x) {
  for (const auto& c : lp.constraints) {
    const Rat v = dot(c.a, x);
    if (c.rel == Rel::EQ ? v != c.b : v > c.b) return false;
  }
  if (!lp.nonneg.empty())
    for (std::size_t i = 0; i < x.size(); ++i)
      if (lp.nonneg[i] && x[i].sign() < 0) return false;
  return true;
}

}  // namespace

TEST_CASE("one-variable minimum against a lower bound", "[lp]") {
  LinearProgram lp{{Rat(1)}, {le({Rat(-1)}, Rat(-1))}, 1, {}};
  const auto out = lp_min(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == Rat(1));
  CHECK(out.point == QVec{Rat(1)});
}

TEST_CASE("two lower bounds add up", "[lp]") {
  LinearProgram lp{{Rat(1), Rat(1)}, {le({Rat(-1), Rat(0)}, Rat(-1)), le({Rat(0), Rat(-1)}, Rat(-1))}, 2, {}};
  const auto out = lp_min(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == Rat(2));
  CHECK(feasible(lp, out.point));
}

TEST_CASE("equality rows restrict to an affine slice", "[lp]") {
  // min x subject to x + y = 2, 0 <= y <= 1: optimum x = 1 at y = 1
  LinearProgram lp{{Rat(1), Rat(0)},
                   {eq({Rat(1), Rat(1)}, Rat(2)), le({Rat(0), Rat(1)}, Rat(1)), le({Rat(0), Rat(-1)}, Rat(0))},
                   2,
                   {}};
  const auto out = lp_min(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == Rat(1));
  CHECK(feasible(lp, out.point));
}

TEST_CASE("contradictory bounds are infeasible", "[lp]") {
  LinearProgram lp{{Rat(1)}, {le({Rat(1)}, Rat(0)), le({Rat(-1)}, Rat(-1))}, 1, {}};
  CHECK(lp_min(lp).status == LpStatus::Infeasible);
}

TEST_CASE("a free direction with no floor is unbounded", "[lp]") {
  LinearProgram lp{{Rat(1)}, {le({Rat(1)}, Rat(5))}, 1, {}};
  CHECK(lp_min(lp).status == LpStatus::Unbounded);
}

TEST_CASE("sign-restricted variables change the answer", "[lp]") {
  LinearProgram lp{{Rat(-1)}, {le({Rat(1)}, Rat(3))}, 1, {true}};
  auto out = lp_min(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == Rat(-3));

  // min x with x >= 0 and no other constraints: bounded at 0, not unbounded
  LinearProgram floor_only{{Rat(1)}, {}, 1, {true}};
  out = lp_min(floor_only);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == Rat(0));
}

TEST_CASE("zero-variable programs reduce to constant-row checks", "[lp]") {
  LinearProgram ok{{}, {le({}, Rat(1))}, 0, {}};
  CHECK(lp_min(ok).status == LpStatus::Optimal);
  CHECK(lp_min(ok).value == Rat(0));
  LinearProgram bad{{}, {le({}, Rat(-1))}, 0, {}};
  CHECK(lp_min(bad).status == LpStatus::Infeasible);
}

TEST_CASE("degenerate vertices terminate and give the right value", "[lp]") {
  // the minimum sits on a vertex where three constraints meet in 2D
  LinearProgram lp{{Rat(-1), Rat(-1)},
                   {le({Rat(1), Rat(0)}, Rat(1)), le({Rat(0), Rat(1)}, Rat(1)), le({Rat(1), Rat(1)}, Rat(2))},
                   2,
                   {}};
  const auto out = lp_min(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  CHECK(out.value == Rat(-2));
  CHECK(out.point == QVec{Rat(1), Rat(1)});
}

TEST_CASE("fractional data stays exact", "[lp]") {
  // min (1/3)x + y subject to x/2 + y/5 >= 7/6, x <= 1/2, y >= 0
  LinearProgram lp{{Rat(1, 3), Rat(1)},
                   {le({Rat(-1, 2), Rat(-1, 5)}, Rat(-7, 6)), le({Rat(1), Rat(0)}, Rat(1, 2)), le({Rat(0), Rat(-1)}, Rat(0))},
                   2,
                   {}};
  const auto out = lp_min(lp);
  REQUIRE(out.status == LpStatus::Optimal);
  // x = 1/2 forced, then y = 5(7/6 - 1/4) = 55/12; value = 1/6 + 55/12 = 57/12 = 19/4
  CHECK(out.value == Rat(19, 4));
  CHECK(feasible(lp, out.point));
}

TEST_CASE("random boxed programs match vertex enumeration", "[lp][property]") {
  std::mt19937_64 rng(2468);
  std::uniform_int_distribution<int> dim(2, 3), extra(0, 4), coef(-2, 2), rhs(-2, 4);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = dim(rng);
    LinearProgram lp;
    lp.num_vars = n;
    for (int j = 0; j < n; ++j) {
      QVec up(n), down(n);
      up[j] = Rat(1);
      down[j] = Rat(-1);
      lp.constraints.push_back(le(up, Rat(3)));
      lp.constraints.push_back(le(down, Rat(3)));
    }
    const int m = extra(rng);
    for (int i = 0; i < m; ++i) {
      QVec a(n);
      for (int j = 0; j < n; ++j) a[j] = Rat(coef(rng));
      lp.constraints.push_back(le(std::move(a), Rat(rhs(rng))));
    }
    lp.objective.resize(n);
    for (int j = 0; j < n; ++j) lp.objective[j] = Rat(coef(rng));

    const auto expected = oracle::lp_min_vertex_enum(lp.objective, lp.constraints, n);
    const auto out = lp_min(lp);
    INFO("trial " << trial);
    if (expected) {
      REQUIRE(out.status == LpStatus::Optimal);
      CHECK(out.value == *expected);
      CHECK(feasible(lp, out.point));
      CHECK(dot(lp.objective, out.point) == out.value);
    } else {
      CHECK(out.status == LpStatus::Infeasible);
    }
  }
}

TEST_CASE("random programs with equality rows match vertex enumeration", "[lp][property]") {
  std::mt19937_64 rng(13579);
  std::uniform_int_distribution<int> coef(-2, 2), rhs(0, 2);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3;
    LinearProgram lp;
    lp.num_vars = n;
    for (int j = 0; j < n; ++j) {
      QVec up(n), down(n);
      up[j] = Rat(1);
      down[j] = Rat(-1);
      lp.constraints.push_back(le(up, Rat(2)));
      lp.constraints.push_back(le(down, Rat(2)));
    }
    QVec a(n);
    for (int j = 0; j < n; ++j) a[j] = Rat(coef(rng));
    lp.constraints.push_back(eq(std::move(a), Rat(rhs(rng))));
    lp.objective.resize(n);
    for (int j = 0; j < n; ++j) lp.objective[j] = Rat(coef(rng));

    const auto expected = oracle::lp_min_vertex_enum(lp.objective, lp.constraints, n);
    const auto out = lp_min(lp);
    INFO("trial " << trial);
    if (expected) {
      REQUIRE(out.status == LpStatus::Optimal);
      CHECK(out.value == *expected);
      CHECK(feasible(lp, out.point));
    } else {
      CHECK(out.status == LpStatus::Infeasible);
    }
  }
}

TEST_CASE("projection of a clipped box onto one axis", "[lp][fm]") {
  // |x| <= 1, |y| <= 1, x + y <= 1: shadow on the x-axis is [-1, 1]
  std::vector<LinConstraint> rows = {
      le({Rat(1), Rat(0)}, Rat(1)),  le({Rat(-1), Rat(0)}, Rat(1)), le({Rat(0), Rat(1)}, Rat(1)),
      le({Rat(0), Rat(-1)}, Rat(1)), le({Rat(1), Rat(1)}, Rat(1)),
  };
  const auto shadow = fm_project(rows, {0});
  const std::vector<LinConstraint> want = {le({Rat(-1)}, Rat(1)), le({Rat(1)}, Rat(1))};
  CHECK(shadow == want);
}

TEST_CASE("projection detects empty systems", "[lp][fm]") {
  // x <= 0 and x >= 1 cannot both hold; eliminating x must leave a contradiction
  std::vector<LinConstraint> rows = {le({Rat(1), Rat(0)}, Rat(0)), le({Rat(-1), Rat(0)}, Rat(-1))};
  const auto shadow = fm_project(rows, {1});
  REQUIRE(shadow.size() == 1);
  CHECK(shadow[0].a == QVec{Rat(0)});
  CHECK(shadow[0].b.sign() < 0);
}

TEST_CASE("projection output is scaled, sorted, and irredundant", "[lp][fm]") {
  // duplicate and scaled rows collapse; redundant rows disappear
  std::vector<LinConstraint> rows = {
      le({Rat(2), Rat(2)}, Rat(4)),
      le({Rat(1), Rat(1)}, Rat(2)),
      le({Rat(1), Rat(1)}, Rat(5)),
      le({Rat(-1), Rat(0)}, Rat(1)),
      le({Rat(0), Rat(-1)}, Rat(1)),
  };
  const auto out = fm_project(rows, {0, 1});
  const std::vector<LinConstraint> want = {
      le({Rat(-1), Rat(0)}, Rat(1)), le({Rat(0), Rat(-1)}, Rat(1)), le({Rat(1), Rat(1)}, Rat(2))};
  CHECK(out == want);
}

TEST_CASE("projection membership agrees with lift feasibility", "[lp][fm][property]") {
  std::mt19937_64 rng(8642);
  std::uniform_int_distribution<int> coef(-2, 2), rhs(-1, 3), rows_n(2, 5);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3;
    std::vector<LinConstraint> rows;
    for (int j = 0; j < n; ++j) {  // box to keep everything bounded
      QVec up(n), down(n);
      up[j] = Rat(1);
      down[j] = Rat(-1);
      rows.push_back(le(up, Rat(2)));
      rows.push_back(le(down, Rat(2)));
    }
    const int m = rows_n(rng);
    for (int i = 0; i < m; ++i) {
      QVec a(n);
      for (int j = 0; j < n; ++j) a[j] = Rat(coef(rng));
      rows.push_back(le(std::move(a), Rat(rhs(rng))));
    }
    const auto shadow = fm_project(rows, {0, 1});

    for (int px = -2; px <= 2; ++px) {
      for (int py = -2; py <= 2; ++py) {
        const QVec p{Rat(px), Rat(py)};
        bool in_shadow = true;
        for (const auto& c : shadow)
          if (dot(c.a, p) > c.b) in_shadow = false;

        // decide by a different route: fix (x, y) = p, ask whether some z lifts it
        LinearProgram lift;
        lift.num_vars = 1;
        lift.objective = {Rat(0)};
        for (const auto& c : rows)
          lift.constraints.push_back(le({c.a[2]}, c.b - c.a[0] * p[0] - c.a[1] * p[1]));
        const bool liftable = lp_min(lift).status == LpStatus::Optimal;
        INFO("trial " << trial << " point (" << px << "," << py << ")");
        CHECK(in_shadow == liftable);
      }
    }
  }
}
