#include <catch2/catch_amalgamated.hpp>

#include "dfd/bisubmodular.hpp"
#include "dfd/generators.hpp"
#include "dfd/separable.hpp"

using namespace dfd;

namespace {

BisubFunction n1Function(long a, long b) {
  BisubFunction f(1);
  f.setValue(SignedPair{1, 0}, Int(a));
  f.setValue(SignedPair{0, 1}, Int(b));
  return f;
}

}  // namespace

TEST_CASE("bisubmodularity check") {
  // n = 1: a + b >= 0 suffices
  CHECK_FALSE(isBisubmodular(n1Function(2, 1)).has_value());
  CHECK_FALSE(isBisubmodular(n1Function(0, 0)).has_value());
  CHECK(isBisubmodular(n1Function(1, -2)).has_value());

  // n = 2: f = 0 except f({1},{2}) = -1; brute-force enumeration says the
  // inequality fails (take (X1,Y1) = ({1},{2}), (X2,Y2) = ({2},{1})).
  BisubFunction g(2);
  g.setValue(SignedPair{1, 2}, -1);
  auto viol = isBisubmodular(g);
  REQUIRE(viol.has_value());
  CHECK(g.value(viol->first) + g.value(viol->second) <
        g.value(SignedPair{viol->first.X & viol->second.X,
                           viol->first.Y & viol->second.Y}) +
            [&] {
              std::uint32_t ux = viol->first.X | viol->second.X;
              std::uint32_t uy = viol->first.Y | viol->second.Y;
              return g.value(SignedPair{ux & ~uy, uy & ~ux});
            }());

  // w_{alpha beta} is bisubmodular whenever alpha <= beta
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    LatticePoint alpha(3), beta(3);
    for (int i = 0; i < 3; ++i) {
      alpha[i] = rng.uniformInt(-3, 3);
      beta[i] = alpha[i] + rng.uniformInt(0, 4);
    }
    CHECK_FALSE(
        isBisubmodular(BisubFunction::boxFunction(alpha, beta)).has_value());
  }
}

TEST_CASE("polyhedron membership") {
  BisubFunction f = n1Function(2, 1);  // P(f) = [-1, 2]
  CHECK(polyhedronMembership(f, {Rat(2)}));
  CHECK_FALSE(polyhedronMembership(f, {Rat(3)}));
  CHECK(polyhedronMembership(f, {Rat(-1)}));
  CHECK_FALSE(polyhedronMembership(f, {Rat(-3, 2)}));

  // z = 0 iff f >= 0 everywhere
  BisubFunction g = generateBisubmodularByRejection(17, 2);
  bool nonneg = true;
  for (const SignedPair& s : g.allPairs())
    if (g.value(s) < 0) nonneg = false;
  CHECK(polyhedronMembership(g, {Rat(0), Rat(0)}) == nonneg);

  // P(w_{alpha beta}) is the box [alpha, beta]
  LatticePoint alpha{-1, 0}, beta{2, 3};
  BisubFunction w = BisubFunction::boxFunction(alpha, beta);
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    RatVec z{Rat(rng.uniformInt(-6, 6), 2), Rat(rng.uniformInt(-6, 6), 2)};
    bool inBox = z[0] >= Rat(-1) && z[0] <= Rat(2) && z[1] >= Rat(0) &&
                 z[1] <= Rat(3);
    CHECK(polyhedronMembership(w, z) == inBox);
  }
}

TEST_CASE("integer point enumeration") {
  BisubFunction f = n1Function(2, 1);
  std::vector<LatticePoint> pts =
      enumerateIntegerPoints(f, IntegralBox::trivial(1));
  std::vector<LatticePoint> expect = {{-1}, {0}, {1}, {2}};
  CHECK(pts == expect);

  // single-point box: kept iff a member
  IntegralBox pt({ExtInt(1)}, {ExtInt(1)});
  CHECK(enumerateIntegerPoints(f, pt) == std::vector<LatticePoint>{{1}});
  IntegralBox out({ExtInt(5)}, {ExtInt(5)});
  CHECK(enumerateIntegerPoints(f, out).empty());

  // against the per-point membership filter
  BisubFunction g = generateBisubmodularByRejection(29, 2);
  IntegralBox box(std::vector<ExtInt>(2, ExtInt(-3)),
                  std::vector<ExtInt>(2, ExtInt(3)));
  std::vector<LatticePoint> got = enumerateIntegerPoints(g, box);
  std::vector<LatticePoint> manual;
  forEachPointInBox({-3, -3}, {3, 3}, [&](const LatticePoint& z) {
    if (polyhedronMembership(g, toRatVec(z))) manual.push_back(z);
  });
  CHECK(got == manual);
}

TEST_CASE("min-max with an upper bound vector") {
  BisubFunction f = n1Function(2, 1);
  MinMaxResult r = minmaxCGK(f, LatticePoint{5});
  CHECK(r.lhs == 2);
  CHECK(r.rhs == 2);

  // huge w: the maximum is f(N, empty)
  MinMaxResult big = minmaxCGK(f, LatticePoint{100});
  CHECK(big.lhs == f.value(SignedPair{1, 0}));
  CHECK(big.rhs == big.lhs);

  // random instances, all equalities
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    BisubFunction g = generateBisubmodularByRejection(seed, 2);
    Rng rng(seed * 31);
    LatticePoint w{rng.uniformInt(-3, 3), rng.uniformInt(-3, 3)};
    try {
      MinMaxResult rr = minmaxCGK(g, w);
      CHECK(rr.lhs == rr.rhs);
      CHECK(polyhedronMembership(g, toRatVec(rr.lhsWitness)));
    } catch (const InfeasiblePrecondition&) {
      // acceptable: no z in P(f) below w
    }
  }
}

TEST_CASE("min-max with a box") {
  // specialization A = N, B = empty, alpha very low reproduces the w-form
  BisubFunction f = n1Function(2, 1);
  MinMaxResult viaFP =
      minmaxFP(f, LatticePoint{-10}, LatticePoint{10}, 0b1, 0);
  MinMaxResult viaCGK = minmaxCGK(f, LatticePoint{10});
  CHECK(viaFP.lhs == viaCGK.lhs);
  CHECK(viaFP.rhs == viaCGK.rhs);

  // A = B = empty: both sides are 0 whenever the region is nonempty
  MinMaxResult zero = minmaxFP(f, LatticePoint{-10}, LatticePoint{10}, 0, 0);
  CHECK(zero.lhs == 0);
  CHECK(zero.rhs == 0);

  // random instances, all nine (A,B) pairs for n = 2
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    BisubFunction g = generateBisubmodularByRejection(seed + 100, 2);
    for (std::uint32_t A = 0; A < 4; ++A) {
      for (std::uint32_t B = 0; B < 4; ++B) {
        if (A & B) continue;
        try {
          MinMaxResult r2 =
              minmaxFP(g, LatticePoint{-2, -2}, LatticePoint{2, 2}, A, B);
          CHECK(r2.lhs == r2.rhs);
        } catch (const InfeasiblePrecondition&) {
        }
      }
    }
  }
}

TEST_CASE("box convolution") {
  // convolving a box function with a box intersects the bounds
  LatticePoint a1{-2, -1}, b1{3, 4};
  LatticePoint a2{-1, -3}, b2{2, 2};
  BisubFunction w = BisubFunction::boxFunction(a1, b1);
  BisubFunction conv = boxConvolution(w, a2, b2);
  LatticePoint alo{std::max(a1[0], a2[0]), std::max(a1[1], a2[1])};
  LatticePoint bhi{std::min(b1[0], b2[0]), std::min(b1[1], b2[1])};
  BisubFunction expect = BisubFunction::boxFunction(alo, bhi);
  for (const SignedPair& s : w.allPairs())
    CHECK(conv.value(s) == expect.value(s));

  // a huge box leaves f unchanged
  BisubFunction g = generateBisubmodularByRejection(7, 2);
  BisubFunction same =
      boxConvolution(g, LatticePoint{-100, -100}, LatticePoint{100, 100});
  for (const SignedPair& s : g.allPairs()) CHECK(same.value(s) == g.value(s));

  // random instances: output is bisubmodular and P(f o w) = P(f) cap box
  Rng rng(11);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    BisubFunction h = generateBisubmodularByRejection(seed + 200, 2);
    LatticePoint alpha{rng.uniformInt(-3, 0), rng.uniformInt(-3, 0)};
    LatticePoint beta{rng.uniformInt(0, 3), rng.uniformInt(0, 3)};
    BisubFunction hw = boxConvolution(h, alpha, beta);
    CHECK_FALSE(isBisubmodular(hw).has_value());
    for (int t = 0; t < 40; ++t) {
      RatVec z{Rat(rng.uniformInt(-8, 8), 2), Rat(rng.uniformInt(-8, 8), 2)};
      bool inBox = ExtRat(z[0]) >= ExtRat(Rat(alpha[0])) &&
                   ExtRat(z[0]) <= ExtRat(Rat(beta[0])) &&
                   ExtRat(z[1]) >= ExtRat(Rat(alpha[1])) &&
                   ExtRat(z[1]) <= ExtRat(Rat(beta[1]));
      CHECK(polyhedronMembership(hw, z) ==
            (polyhedronMembership(h, z) && inBox));
    }
  }
}

TEST_CASE("separable concave construction from a signed pair") {
  // i in C at the kink: psi_i(0) = 0
  SeparableFunction psiC =
      buildPsiFromSignedPair(0, 0, LatticePoint{-2}, LatticePoint{5}, 1);
  CHECK(psiC(LatticePoint{0}) == ExtInt(0));

  // i in A with alpha=1, beta=3: psi(2) = 1, psi(0) = -3
  SeparableFunction psiA =
      buildPsiFromSignedPair(0b1, 0, LatticePoint{1}, LatticePoint{3}, 1);
  CHECK(psiA(LatticePoint{2}) == ExtInt(1));
  CHECK(psiA(LatticePoint{0}) == ExtInt(-3));

  // the displayed identity -Psi(e_X - e_Y) = box correction, all 9 pairs
  Rng rng(13);
  for (int t = 0; t < 10; ++t) {
    LatticePoint alpha(2), beta(2);
    for (int i = 0; i < 2; ++i) {
      alpha[i] = rng.uniformInt(-3, 2);
      beta[i] = alpha[i] + rng.uniformInt(0, 4);
    }
    const std::uint32_t A = 0b01, B = 0b10;
    SeparableFunction psi = buildPsiFromSignedPair(A, B, alpha, beta, 2);
    BisubFunction probe(2);
    for (const SignedPair& s : probe.allPairs()) {
      Int lhs = -psi(signedVector(s, 2)).value();
      CHECK(lhs == boxCorrection(alpha, beta, A, B, s));
    }
  }

  // concavity at interior points of every piece
  SeparableFunction psi =
      buildPsiFromSignedPair(0b01, 0b10, LatticePoint{-1, 0}, LatticePoint{2, 3}, 2);
  for (int i = 0; i < 2; ++i) {
    const UnivariatePiece& pc = psi.piece(i);
    for (Int k = -3; k <= 3; ++k) {
      Int twoMid = 2 * pc.finiteValue(k, Orientation::Concave);
      Int ends = pc.finiteValue(k - 1, Orientation::Concave) +
                 pc.finiteValue(k + 1, Orientation::Concave);
      CHECK(ends <= twoMid);
    }
  }
}

TEST_CASE("min-max via the separable construction agrees with the direct form") {
  // The boxed min-max right-hand side is exactly min over signed vectors of
  // f(X,Y) - Psi(e_X - e_Y) with the constructed Psi.
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    BisubFunction f = generateBisubmodularByRejection(seed + 300, 2);
    LatticePoint alpha{-2, -1}, beta{1, 2};
    for (std::uint32_t A = 0; A < 4; ++A) {
      for (std::uint32_t B = 0; B < 4; ++B) {
        if (A & B) continue;
        SeparableFunction psi = buildPsiFromSignedPair(A, B, alpha, beta, 2);
        std::optional<Int> viaPsi;
        for (const SignedPair& s : f.allPairs()) {
          Int v = f.value(s) - psi(signedVector(s, 2)).value();
          if (!viaPsi || v < *viaPsi) viaPsi = v;
        }
        try {
          MinMaxResult r = minmaxFP(f, alpha, beta, A, B);
          CHECK(r.rhs == *viaPsi);
        } catch (const InfeasiblePrecondition&) {
        }
      }
    }
  }
}
