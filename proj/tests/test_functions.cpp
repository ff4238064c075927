#include <catch2/catch_amalgamated.hpp>

#include "dfd/fixtures.hpp"
#include "dfd/generators.hpp"
#include "dfd/integral_convexity.hpp"
#include "dfd/separable.hpp"
#include "dfd/table_function.hpp"

using namespace dfd;

namespace {

// Brute-force univariate conjugate oracle: scans k in [k0-M, k0+M] and
// certifies that the objective is monotone (worsening) at both window ends,
// so the scan provably covers the optimum of a convex/concave piece.
ExtInt bruteConvexConjugate(const UnivariatePiece& p, const Int& l, long M) {
  const Int k0 = p.kinkPoint();
  Int best = 0;
  bool first = true;
  for (Int k = k0 - M; k <= k0 + M; ++k) {
    Int v = k * l - p.finiteValue(k, Orientation::Convex);
    if (first || v > best) { best = v; first = false; }
  }
  auto objective = [&](const Int& k) {
    return k * l - p.finiteValue(k, Orientation::Convex);
  };
  // monotone beyond the window => unbounded above => +inf
  if (objective(k0 - M - 1) > objective(k0 - M) ||
      objective(k0 + M + 1) > objective(k0 + M))
    return ExtInt::plusInfinity();
  return ExtInt(best);
}

ExtInt bruteConcaveConjugate(const UnivariatePiece& p, const Int& l, long M) {
  const Int k0 = p.kinkPoint();
  Int best = 0;
  bool first = true;
  for (Int k = k0 - M; k <= k0 + M; ++k) {
    Int v = k * l - p.finiteValue(k, Orientation::Concave);
    if (first || v < best) { best = v; first = false; }
  }
  auto objective = [&](const Int& k) {
    return k * l - p.finiteValue(k, Orientation::Concave);
  };
  if (objective(k0 - M - 1) < objective(k0 - M) ||
      objective(k0 + M + 1) < objective(k0 + M))
    return ExtInt::minusInfinity();
  return ExtInt(best);
}

}  // namespace

TEST_CASE("table evaluation") {
  TableFunction f = fixtures::ex49();
  CHECK(f(LatticePoint{0, 0}) == ExtInt(0));
  CHECK(f(LatticePoint{1, 0}) == ExtInt(4));
  CHECK(f(LatticePoint{2, 2}) == ExtInt::plusInfinity());
  CHECK_THROWS_AS(f(LatticePoint{0}), DimensionMismatch);
}

TEST_CASE("separable evaluation") {
  // Psi(x) = -x1^2 - x2^2 at (1,-2) -> -5
  SeparableFunction psi(Orientation::Concave,
                        {UnivariatePiece::quadForm(1, 0),
                         UnivariatePiece::quadForm(1, 0)});
  CHECK(psi(LatticePoint{1, -2}) == ExtInt(-5));
  CHECK(psi(LatticePoint{0, 0}) == ExtInt(0));
}

TEST_CASE("table conjugate") {
  // single-point domain: f = {0 -> 0}
  TableFunction single(2, {{LatticePoint{0, 0}, Int(0)}});
  CHECK(single.conjugate(LatticePoint{5, -7}) == 0);
  CHECK(single.conjugate(LatticePoint{0, 0}) == 0);

  TableFunction f = fixtures::ex49();
  // brute force over the 9 table points is the defining formula
  CHECK(f.conjugate(LatticePoint{0, 0}) == 0);   // max of -f
  CHECK(f.conjugate(LatticePoint{1, 1}) == 0);
}

TEST_CASE("closed-form conjugates match the paper's displayed values") {
  // psi(k) = -k^2: psi°(3) = -floor(3/2)*ceil(3/2) = -2
  UnivariatePiece quad = UnivariatePiece::quadForm(1, 0);
  CHECK(univariateConcaveConjugate(quad, 3) == ExtInt(-2));
  CHECK(univariateConcaveConjugate(quad, -3) == ExtInt(-2));
  CHECK(univariateConcaveConjugate(quad, 0) == ExtInt(0));

  // psi(k) = -2|k|: psi°(3) = -inf, psi°(1) = 0
  UnivariatePiece absp = UnivariatePiece::absForm(2, 0);
  CHECK(univariateConcaveConjugate(absp, 3) == ExtInt::minusInfinity());
  CHECK(univariateConcaveConjugate(absp, 1) == ExtInt(0));

  // linear slope c on Z: psi°(c) = 0, psi°(c+1) = -inf
  UnivariatePiece lin = UnivariatePiece::linearForm(4);
  CHECK(univariateConcaveConjugate(lin, 4) == ExtInt(0));
  CHECK(univariateConcaveConjugate(lin, 5) == ExtInt::minusInfinity());
  // and the convex counterpart: phi*(c) = 0, else +inf
  CHECK(univariateConvexConjugate(lin, 4) == ExtInt(0));
  CHECK(univariateConvexConjugate(lin, 3) == ExtInt::plusInfinity());
}

TEST_CASE("closed-form conjugates agree with the brute-force oracle") {
  for (long alpha = 0; alpha <= 5; ++alpha) {
    for (long k0 = -5; k0 <= 5; ++k0) {
      UnivariatePiece p = UnivariatePiece::absForm(alpha, k0);
      for (long l = -5; l <= 5; ++l) {
        CHECK(univariateConvexConjugate(p, l) == bruteConvexConjugate(p, l, 30));
        CHECK(univariateConcaveConjugate(p, l) ==
              bruteConcaveConjugate(p, l, 30));
      }
    }
  }
  for (long beta = 1; beta <= 5; ++beta) {
    for (long k0 = -5; k0 <= 5; ++k0) {
      UnivariatePiece p = UnivariatePiece::quadForm(beta, k0);
      for (long l = -5; l <= 5; ++l) {
        CHECK(univariateConvexConjugate(p, l) == bruteConvexConjugate(p, l, 30));
        CHECK(univariateConcaveConjugate(p, l) ==
              bruteConcaveConjugate(p, l, 30));
      }
    }
  }
  // kink pieces (the two-slope closed form)
  for (long a = -3; a <= 3; ++a) {
    for (long b = a; b <= 3; ++b) {
      UnivariatePiece vex = UnivariatePiece::kinkForm(a, b, 1);
      UnivariatePiece cav = UnivariatePiece::kinkForm(b, a, -1);
      for (long l = -5; l <= 5; ++l) {
        CHECK(univariateConvexConjugate(vex, l) ==
              bruteConvexConjugate(vex, l, 30));
        CHECK(univariateConcaveConjugate(cav, l) ==
              bruteConcaveConjugate(cav, l, 30));
      }
    }
  }
}

TEST_CASE("separable concave conjugate") {
  SeparableFunction psi(Orientation::Concave,
                        {UnivariatePiece::quadForm(1, 0),
                         UnivariatePiece::absForm(2, 0)});
  CHECK(concaveConjugateSeparable(psi, LatticePoint{3, 1}) == ExtInt(-2));
  CHECK(concaveConjugateSeparable(psi, LatticePoint{3, 3}) ==
        ExtInt::minusInfinity());
}

TEST_CASE("subdifferential box of a separable convex function") {
  SeparableFunction sq(Orientation::Convex, {UnivariatePiece::quadForm(1, 0)});
  IntegralBox b1 = subdifferentialBoxOfSeparable(sq, LatticePoint{0});
  CHECK(b1.lower(0) == ExtInt(-1));
  CHECK(b1.upper(0) == ExtInt(1));

  SeparableFunction twoAbs(Orientation::Convex,
                           {UnivariatePiece::absForm(2, 0)});
  IntegralBox b2 = subdifferentialBoxOfSeparable(twoAbs, LatticePoint{3});
  CHECK(b2.lower(0) == ExtInt(-2));
  CHECK(b2.upper(0) == ExtInt(-2));

  // breakpoint piece on [0,5]: at the left endpoint the upper bound is +inf
  std::map<Int, Int> vals;
  for (Int k = 0; k <= 5; ++k) vals[k] = k * k;
  SeparableFunction bp(Orientation::Convex,
                       {UnivariatePiece::breakpoints(vals)});
  IntegralBox b3 = subdifferentialBoxOfSeparable(bp, LatticePoint{0});
  CHECK(b3.upper(0).isPlusInfinity());
  CHECK(b3.lower(0) == ExtInt(-1));

  CHECK_THROWS_AS(subdifferentialBoxOfSeparable(bp, LatticePoint{9}),
                  PointOutsideDomain);
}

TEST_CASE("subdifferential box members are subgradients of the tabulation") {
  // for each integer p in the box (finite sample) and all y in a window:
  // Phi(y) - Phi(x) >= <-p, y - x>
  SeparableFunction phi(Orientation::Convex,
                        {UnivariatePiece::quadForm(1, 0),
                         UnivariatePiece::absForm(1, 1)});
  for (long x1 = -2; x1 <= 2; ++x1) {
    for (long x2 = -2; x2 <= 2; ++x2) {
      LatticePoint x{x1, x2};
      IntegralBox B = subdifferentialBoxOfSeparable(phi, x);
      LatticePoint lo(2), hi(2);
      for (int j = 0; j < 2; ++j) {
        lo[j] = B.lower(j).isFinite() ? B.lower(j).value() : Int(-4);
        hi[j] = B.upper(j).isFinite() ? B.upper(j).value() : Int(4);
      }
      forEachPointInBox(lo, hi, [&](const LatticePoint& p) {
        forEachPointInBox({-4, -4}, {4, 4}, [&](const LatticePoint& y) {
          Int lhs = phi(y).value() - phi(x).value();
          Int rhs = -dot(p, sub(y, x));
          CHECK(lhs >= rhs);
        });
      });
    }
  }
}

TEST_CASE("biconjugate check") {
  // single point: f(0) = 5
  TableFunction single(1, {{LatticePoint{0}, Int(5)}});
  CHECK(biconjugateCheck(single).holds);

  CHECK(biconjugateCheck(fixtures::ex49()).holds);

  auto r45 = biconjugateCheck(fixtures::r45());
  CHECK_FALSE(r45.holds);
  REQUIRE(r45.violating.has_value());
  // the biconjugate dips strictly below f at the violating point
  CHECK(r45.biconjugateValue < fixtures::r45().at(*r45.violating));
  CHECK_THROWS_AS(biconjugateCheck(fixtures::r45(), /*strict=*/true),
                  NotIntegrallyConvex);
}

TEST_CASE("2-separable generator output is integrally convex") {
  // f = x1^2 + x2^2 + (x1-x2)^2 on [-2,2]^2 has f(1,-1) = 6
  TwoSeparableSpec spec;
  spec.dimension = 2;
  spec.boxRadius = 2;
  std::map<Int, Int> sq;
  for (Int k = -4; k <= 4; ++k) sq[k] = k * k;

  std::map<LatticePoint, Int> entries;
  forEachPointInBox({-2, -2}, {2, 2}, [&](const LatticePoint& x) {
    entries.emplace(x, x[0] * x[0] + x[1] * x[1] + (x[0] - x[1]) * (x[0] - x[1]));
  });
  TableFunction f(2, entries);
  CHECK(f.at(LatticePoint{1, -1}) == 6);
  CHECK(isIntegrallyConvexFunction(f).integrallyConvex);

  // all-zero pieces give the identically-zero table
  std::map<LatticePoint, Int> zeros;
  forEachPointInBox({-1, -1}, {1, 1},
                    [&](const LatticePoint& x) { zeros.emplace(x, 0); });
  CHECK(isIntegrallyConvexFunction(TableFunction(2, zeros)).integrallyConvex);

  // seeded generator output passes the checker (the checker is the oracle)
  TwoSeparableSpec s3;
  s3.dimension = 3;
  s3.boxRadius = 1;
  TableFunction g = generate2Separable(7, s3);
  CHECK(isIntegrallyConvexFunction(g).integrallyConvex);
}
