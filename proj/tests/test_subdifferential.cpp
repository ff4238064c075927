#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "dfd/fixtures.hpp"
#include "dfd/generators.hpp"
#include "dfd/rational_fm.hpp"
#include "dfd/subdifferential.hpp"

using namespace dfd;

namespace {

std::vector<SignedRow> sortedRows(const InequalitySystem& sys) {
  std::vector<SignedRow> rows = sys.rows;
  std::sort(rows.begin(), rows.end());
  return rows;
}

bool inProjectedSystem(const RationalSystem& sys, std::size_t level,
                       const RatVec& tailFromLevel) {
  if (sys.inconsistent) return false;
  RatVec full(sys.dimension, Rat(0));
  for (std::size_t i = 0; i < tailFromLevel.size(); ++i)
    full[level + i] = tailFromLevel[i];
  for (const IneqRow& r : sys.rows)
    if (dot(r.coeffs, full) > r.rhs) return false;
  return true;
}

// Mutual-inclusion audit of IQ(l) against the generic eliminator: region
// membership must agree on a half-integer grid, and for every integer tail
// lying in both level-(l+1) projections the p_l intervals must coincide.
bool iqMatchesGenericFM(const TableFunction& f, const LatticePoint& x,
                        const IntegralBox& box, long intervalWindow,
                        long gridHalfSteps) {
  InequalitySystem sys = buildSubgradientSystem(f, x);
  const std::size_t n = sys.dimension;

  std::vector<RationalSystem> projected;  // projected[l]: vars p_l..p_n
  projected.push_back(
      toRationalSystem(InequalitySystem(sys.dimension, sys.rows, box)));
  for (std::size_t l = 1; l < n; ++l)
    projected.push_back(genericFourierMotzkin(projected.back(), l - 1));
  std::vector<IQSystem> iq;
  for (std::size_t l = 0; l < n; ++l) iq.push_back(buildIQ(sys, box, l));

  for (std::size_t l = 0; l < n; ++l) {
    bool ok = true;

    // Interval equality over integer tails in both level-(l+1) projections.
    LatticePoint lo(n - l - 1, -intervalWindow), hi(n - l - 1, intervalWindow);
    forEachPointInBox(lo, hi, [&](const LatticePoint& t) {
      if (!ok) return;
      RatVec tail = toRatVec(t);
      bool tailInIQ = l + 1 >= n || iqSatisfied(iq[l + 1], tail);
      bool tailInFM = l + 1 >= n || inProjectedSystem(projected[l + 1], l + 1, tail);
      if (tailInIQ != tailInFM) { ok = false; return; }
      if (!tailInIQ) return;
      auto [iqLo, iqHi] = projectionInterval(iq[l], tail);
      auto [fmLo, fmHi] = rationalInterval(projected[l], l, tail);
      if (iqLo != fmLo || iqHi != fmHi) ok = false;
    });
    if (!ok) return false;

    // Region membership agreement on a half-integer grid over p_l..p_n.
    LatticePoint glo(n - l, -gridHalfSteps), ghi(n - l, gridHalfSteps);
    forEachPointInBox(glo, ghi, [&](const LatticePoint& g) {
      if (!ok) return;
      RatVec z(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) z[i] = Rat(g[i]) / 2;
      if (iqSatisfied(iq[l], z) != inProjectedSystem(projected[l], l, z))
        ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("subgradient system rows") {
  InequalitySystem sys = buildSubgradientSystem(fixtures::ex49(), {0, 0});
  std::vector<SignedRow> expect = {
      {{1, 1}, 4}, {{1, -1}, 4}, {{-1, 1}, 2}, {{-1, -1}, 3},
      {{1, 0}, 4}, {{-1, 0}, 2}, {{0, 1}, 3},  {{0, -1}, 3}};
  std::sort(expect.begin(), expect.end());
  CHECK(sortedRows(sys) == expect);

  InequalitySystem r46 = buildSubgradientSystem(fixtures::r46(), {0, 0, 0});
  std::vector<SignedRow> expect46 = {
      {{1, 1, 0}, 1}, {{0, 1, 1}, 1}, {{1, 0, 1}, 1}};
  std::sort(expect46.begin(), expect46.end());
  CHECK(sortedRows(r46) == expect46);

  TableFunction single(2, {{LatticePoint{3, 3}, Int(7)}});
  CHECK(buildSubgradientSystem(single, {3, 3}).rows.empty());
  CHECK_THROWS_AS(buildSubgradientSystem(single, {0, 0}), PointOutsideDomain);
}

TEST_CASE("box-free Fourier-Motzkin reduction") {
  InequalitySystem sys = buildSubgradientSystem(fixtures::ex49(), {0, 0});
  std::vector<TailBound> fm = fmReducedSystem(sys);
  REQUIRE(fm.size() == 2);

  // p1 bounds: max{p2-2, -p2-3, -2} <= p1 <= min{-p2+4, p2+4, 4}
  CHECK(fm[0].upperRows.size() == 3);
  CHECK(fm[0].lowerRows.size() == 3);
  for (Rat p2 = -3; p2 <= 3; ++p2) {
    auto [lo, hi] = tailBoundInterval(fm[0], 2, {p2});
    CHECK(lo == ExtRat(std::max({p2 - 2, -p2 - 3, Rat(-2)})));
    CHECK(hi == ExtRat(std::min({-p2 + 4, p2 + 4, Rat(4)})));
  }
  // p2 bounds: -3 <= p2 <= 3
  auto [lo2, hi2] = tailBoundInterval(fm[1], 2, {});
  CHECK(lo2 == ExtRat(Rat(-3)));
  CHECK(hi2 == ExtRat(Rat(3)));

  // empty system: unbounded intervals everywhere
  InequalitySystem empty(2, {});
  for (const TailBound& tb : fmReducedSystem(empty)) {
    CHECK(tb.upperRows.empty());
    CHECK(tb.lowerRows.empty());
  }

  // r46 at the origin: no row has leading support at p3, so p3 is unbounded
  std::vector<TailBound> fm46 =
      fmReducedSystem(buildSubgradientSystem(fixtures::r46(), {0, 0, 0}));
  CHECK(fm46[2].upperRows.empty());
  CHECK(fm46[2].lowerRows.empty());
}

TEST_CASE("box-free reduction tail describes the projection (generic oracle)") {
  // Theorem-level cross-check: the tail bound for p_n matches the generic
  // eliminator's interval for several IC instances.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TwoSeparableSpec spec;
    spec.dimension = 3;
    spec.boxRadius = 1;
    TableFunction f = generate2Separable(seed, spec);
    LatticePoint x{0, 0, 0};
    InequalitySystem sys = buildSubgradientSystem(f, x);
    std::vector<TailBound> fm = fmReducedSystem(sys);

    RationalSystem generic = toRationalSystem(sys);
    generic = genericFourierMotzkin(generic, 0);
    generic = genericFourierMotzkin(generic, 1);
    auto [glo, ghi] = rationalInterval(generic, 2, {});
    auto [flo, fhi] = tailBoundInterval(fm[2], 3, {});
    CHECK(glo == flo);
    CHECK(ghi == fhi);
  }
}

TEST_CASE("IQ systems for the worked example") {
  TableFunction f = fixtures::ex49();
  InequalitySystem sys = buildSubgradientSystem(f, {0, 0});
  IntegralBox B = fixtures::ex49Box();

  IQSystem iq2 = buildIQ(sys, B, 1);
  CHECK(iq2.plusRows.size() == 3);
  CHECK(iq2.minusRows.size() == 3);
  CHECK(iq2.zeroRows.size() == 2);
  CHECK(iq2.rowCount() == 8 + 2 * (2 - 1));

  // alpha_1 + p2 <= 4 folds to p2 <= 2; -beta_1 rows are vacuous
  int vacuous = 0;
  ExtInt tightest = ExtInt::plusInfinity();
  for (const IQRow& r : iq2.plusRows) {
    if (r.trivial) { ++vacuous; continue; }
    tightest = min(tightest, r.rhs);
  }
  CHECK(vacuous == 1);
  CHECK(tightest == ExtInt(2));

  auto [lo, hi] = projectionInterval(iq2, {});
  CHECK(lo == ExtRat(Rat(-2)));
  CHECK(hi == ExtRat(Rat(2)));

  // IQ(1) is the combined system: every row non-vacuous with original rhs
  IQSystem iq1 = buildIQ(sys, B, 0);
  CHECK(iq1.rowCount() == 8 + 2 * 2);
  for (const IQRow& r : iq1.plusRows) CHECK(r.rhs == ExtInt(r.origin.b));
  auto [lo1, hi1] = projectionInterval(iq1, {Rat(0)});
  CHECK(lo1 == ExtRat(Rat(2)));   // max{2, -2, -3, -2}
  CHECK(hi1 == ExtRat(Rat(4)));   // min{4, 4, 4}

  // trivial box: rows with any prefix support become vacuous at level 2
  IQSystem iqTrivial = buildIQ(sys, IntegralBox::trivial(2), 1);
  for (const IQRow& r : iqTrivial.plusRows)
    CHECK(r.trivial == (r.origin.a[0] != 0));
}

TEST_CASE("integral subgradient extraction") {
  // worked example: box (2 <= p1, -4 <= p2 <= 4) extracts (2, -2)
  auto p = integralSubgradientInBox(fixtures::ex49(), {0, 0},
                                    fixtures::ex49Box());
  REQUIRE(p.has_value());
  CHECK(*p == LatticePoint{2, -2});
  CHECK(membershipCheck(fixtures::ex49(), {0, 0}, toRatVec(*p)));

  // r46 with the trivial box: an integral subgradient exists
  auto q = integralSubgradientInBox(fixtures::r46(), {0, 0, 0},
                                    IntegralBox::trivial(3));
  REQUIRE(q.has_value());
  CHECK(membershipCheck(fixtures::r46(), {0, 0, 0}, toRatVec(*q)));

  // r45 is not integrally convex: no integral subgradient at the origin
  CHECK_THROWS_AS(integralSubgradientInBox(fixtures::r45(), {0, 0, 0},
                                           IntegralBox::trivial(3)),
                  NotIntegrallyConvex);

  // empty region: a box far from the subdifferential
  IntegralBox far({ExtInt(50), ExtInt(50)}, {ExtInt(60), ExtInt(60)});
  CHECK_FALSE(integralSubgradientInBox(fixtures::ex49(), {0, 0}, far)
                  .has_value());
}

TEST_CASE("membership check") {
  TableFunction r45 = fixtures::r45();
  CHECK(membershipCheck(r45, {0, 0, 0}, {Rat(1, 2), Rat(1, 2), Rat(1, 2)}));
  CHECK_FALSE(membershipCheck(r45, {0, 0, 0}, {Rat(0), Rat(0), Rat(0)}));

  TableFunction single(2, {{LatticePoint{1, 1}, Int(3)}});
  CHECK(membershipCheck(single, {1, 1}, {Rat(99), Rat(-99)}));
}

TEST_CASE("rounding a fractional subgradient") {
  // r46 at the origin: p = (1/2,1/2,1/2) rounds to an integral subgradient
  // inside {0,1}^3 with pairwise sums <= 1
  TableFunction r46 = fixtures::r46();
  RatVec half{Rat(1, 2), Rat(1, 2), Rat(1, 2)};
  REQUIRE(membershipCheck(r46, {0, 0, 0}, half));
  LatticePoint q = roundSubgradient(r46, {0, 0, 0}, half);
  for (const Int& c : q) CHECK((c == 0 || c == 1));
  CHECK(q[0] + q[1] <= 1);
  CHECK(q[1] + q[2] <= 1);
  CHECK(q[0] + q[2] <= 1);

  // integral p rounds to itself
  TableFunction f = fixtures::ex49();
  RatVec integral{Rat(-1), Rat(0)};
  REQUIRE(membershipCheck(f, {0, 0}, integral));
  CHECK(roundSubgradient(f, {0, 0}, integral) == LatticePoint{-1, 0});

  // p = (5/2, -1/2): q lands in {2,3} x {-1,0} and stays a subgradient
  RatVec frac{Rat(5, 2), Rat(-1, 2)};
  REQUIRE(membershipCheck(f, {0, 0}, frac));
  LatticePoint r = roundSubgradient(f, {0, 0}, frac);
  CHECK((r[0] == 2 || r[0] == 3));
  CHECK((r[1] == -1 || r[1] == 0));
  CHECK(membershipCheck(f, {0, 0}, toRatVec(r)));
}

TEST_CASE("generic Fourier-Motzkin elimination") {
  // {p1 <= 1, -p1 <= 0}: eliminating p1 leaves a feasible empty system
  RationalSystem s;
  s.dimension = 1;
  s.rows = {{{Rat(1)}, Rat(1)}, {{Rat(-1)}, Rat(0)}};
  RationalSystem t = genericFourierMotzkin(s, 0);
  CHECK(t.rows.empty());
  CHECK_FALSE(t.inconsistent);

  // contradictory: {p1 <= 0, -p1 <= -1}
  RationalSystem bad;
  bad.dimension = 1;
  bad.rows = {{{Rat(1)}, Rat(0)}, {{Rat(-1)}, Rat(-1)}};
  CHECK(genericFourierMotzkin(bad, 0).inconsistent);

  // worked example without the box: p2 range [-3, 3]
  InequalitySystem sys = buildSubgradientSystem(fixtures::ex49(), {0, 0});
  RationalSystem noBox = toRationalSystem(sys);
  auto [lo, hi] = rationalInterval(genericFourierMotzkin(noBox, 0), 1, {});
  CHECK(lo == ExtRat(Rat(-3)));
  CHECK(hi == ExtRat(Rat(3)));

  // with the box: [-2, 2]
  RationalSystem withBox = toRationalSystem(
      InequalitySystem(sys.dimension, sys.rows, fixtures::ex49Box()));
  auto [blo, bhi] = rationalInterval(genericFourierMotzkin(withBox, 0), 1, {});
  CHECK(blo == ExtRat(Rat(-2)));
  CHECK(bhi == ExtRat(Rat(2)));
}

TEST_CASE("extraction agrees with the generic eliminator on emptiness") {
  TableFunction f = fixtures::ex49();
  Rng rng(23);
  for (int t = 0; t < 30; ++t) {
    Int a1 = rng.uniformInt(-6, 6), a2 = rng.uniformInt(-6, 6);
    IntegralBox box({ExtInt(a1), ExtInt(a2)},
                    {ExtInt(a1 + rng.uniformInt(0, 4)),
                     ExtInt(a2 + rng.uniformInt(0, 4))});
    auto p = integralSubgradientInBox(f, {0, 0}, box);

    RationalSystem rs = toRationalSystem(
        InequalitySystem(2, buildSubgradientSystem(f, {0, 0}).rows, box));
    auto [lo, hi] = rationalInterval(genericFourierMotzkin(rs, 0), 1, {});
    const bool genericEmpty = hi < lo;
    CHECK(p.has_value() == !genericEmpty);
    if (p) {
      CHECK(membershipCheck(f, {0, 0}, toRatVec(*p)));
      CHECK(box.contains(*p));
    }
  }
}

TEST_CASE("IQ completeness against the generic eliminator") {
  // Theorem-level audit on a batch of small IC instances with random boxes.
  Rng rng(5);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    TwoSeparableSpec spec;
    spec.dimension = (seed % 2) ? 2 : 3;
    spec.boxRadius = 1;
    TableFunction f = generate2Separable(seed, spec);
    const std::size_t n = spec.dimension;
    std::vector<ExtInt> lo(n), hi(n);
    for (std::size_t j = 0; j < n; ++j) {
      Int a = rng.uniformInt(-4, 2);
      lo[j] = ExtInt(a);
      hi[j] = ExtInt(a + rng.uniformInt(1, 6));
    }
    LatticePoint x(n, Int(0));
    CHECK(iqMatchesGenericFM(f, x, IntegralBox(lo, hi), 8, 10));
  }
  // and the worked example with its box
  CHECK(iqMatchesGenericFM(fixtures::ex49(), {0, 0}, fixtures::ex49Box(), 8, 12));
}

TEST_CASE("vertex enumeration") {
  // r45 system at the origin: the single vertex (1/2,1/2,1/2)
  InequalitySystem r45sys = buildSubgradientSystem(fixtures::r45(), {0, 0, 0});
  std::vector<RatVec> v45 = enumerateVertices(r45sys);
  REQUIRE(v45.size() == 1);
  CHECK(v45[0] == RatVec{Rat(1, 2), Rat(1, 2), Rat(1, 2)});

  // r47 at the origin: 8 non-integral and 6 integral vertices
  InequalitySystem r47sys = buildSubgradientSystem(fixtures::r47(), {0, 0, 0});
  std::vector<RatVec> v47 = enumerateVertices(r47sys);
  REQUIRE(v47.size() == 14);
  int integral = 0, half = 0;
  for (const RatVec& v : v47) {
    if (isIntegral(v)) {
      ++integral;
      Rat norm = abs(v[0]) + abs(v[1]) + abs(v[2]);
      CHECK(norm == 1);  // unit vectors
    } else {
      ++half;
      for (const Rat& c : v) CHECK(abs(c) == Rat(1, 2));
    }
  }
  CHECK(integral == 6);
  CHECK(half == 8);

  // unit box in two dimensions: 4 vertices
  InequalitySystem unitBox(
      2, {}, IntegralBox({ExtInt(0), ExtInt(0)}, {ExtInt(1), ExtInt(1)}));
  CHECK(enumerateVertices(unitBox).size() == 4);

  // unbounded region is reported
  InequalitySystem openSys = buildSubgradientSystem(fixtures::ex49(), {1, 1});
  CHECK_THROWS_AS(enumerateVertices(openSys), UnboundedRegion);
}

TEST_CASE("every extracted subgradient is integral and certified") {
  // Theorem: for IC f and every x in dom f with the trivial box, an integral
  // subgradient exists.
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    TwoSeparableSpec spec;
    spec.dimension = 2;
    spec.boxRadius = 2;
    TableFunction f = generate2Separable(seed, spec);
    for (const auto& [x, v] : f.entries()) {
      auto p = integralSubgradientInBox(f, x, IntegralBox::trivial(2));
      REQUIRE(p.has_value());
      CHECK(membershipCheck(f, x, toRatVec(*p)));
    }
  }
}
