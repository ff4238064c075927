#ifndef DFD_GENERATORS_HPP
#define DFD_GENERATORS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "dfd/bisubmodular.hpp"
#include "dfd/core.hpp"
#include "dfd/integral_convexity.hpp"
#include "dfd/separable.hpp"
#include "dfd/table_function.hpp"

namespace dfd {

/// Deterministic seeded source of small integers for instance generation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform draw from [lo, hi] (biased-by-modulo is fine for test data).
  long uniform(long lo, long hi) {
    return lo + static_cast<long>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  Int uniformInt(long lo, long hi) { return Int(uniform(lo, hi)); }

 private:
  std::mt19937_64 eng_;
};

/// Random univariate convex breakpoint piece on [lo, hi]: integrate a
/// nondecreasing random slope sequence.
inline UnivariatePiece randomConvexPiece(Rng& rng, long lo, long hi,
                                         long slopeRange = 2,
                                         long stepRange = 2) {
  std::map<Int, Int> vals;
  Int v = rng.uniformInt(-3, 3);
  Int slope = rng.uniformInt(-slopeRange, slopeRange);
  vals[Int(lo)] = v;
  for (long k = lo + 1; k <= hi; ++k) {
    v += slope;
    vals[Int(k)] = v;
    slope += rng.uniformInt(0, stepRange);
  }
  return UnivariatePiece::breakpoints(std::move(vals));
}

/// Random univariate concave breakpoint piece on [lo, hi].
inline UnivariatePiece randomConcavePiece(Rng& rng, long lo, long hi,
                                          long slopeRange = 2,
                                          long stepRange = 2) {
  std::map<Int, Int> vals;
  Int v = rng.uniformInt(-3, 3);
  Int slope = rng.uniformInt(-slopeRange, slopeRange);
  vals[Int(lo)] = v;
  for (long k = lo + 1; k <= hi; ++k) {
    v += slope;
    vals[Int(k)] = v;
    slope -= rng.uniformInt(0, stepRange);
  }
  return UnivariatePiece::breakpoints(std::move(vals));
}

struct TwoSeparableSpec {
  std::size_t dimension = 2;
  long boxRadius = 2;    // tabulation box [-R, R]^n
  long slopeRange = 2;   // initial slope magnitude of each univariate part
  long stepRange = 2;    // max slope increment per step
};

/// 2-separable convex sum  sum phi_i(x_i) + sum phi_ij(x_i - x_j)
/// + sum psi_ij(x_i + x_j), tabulated on the box; integrally convex by
/// construction.
inline TableFunction generate2Separable(std::uint64_t seed,
                                        const TwoSeparableSpec& spec) {
  Rng rng(seed);
  const std::size_t n = spec.dimension;
  const long R = spec.boxRadius;

  std::vector<UnivariatePiece> single;
  for (std::size_t i = 0; i < n; ++i)
    single.push_back(randomConvexPiece(rng, -R, R, spec.slopeRange, spec.stepRange));
  std::map<std::pair<std::size_t, std::size_t>, UnivariatePiece> diff, sum;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      diff.emplace(std::make_pair(i, j),
                   randomConvexPiece(rng, -2 * R, 2 * R, spec.slopeRange,
                                     spec.stepRange));
      sum.emplace(std::make_pair(i, j),
                  randomConvexPiece(rng, -2 * R, 2 * R, spec.slopeRange,
                                    spec.stepRange));
    }
  }

  std::map<LatticePoint, Int> entries;
  LatticePoint lo(n, Int(-R)), hi(n, Int(R));
  forEachPointInBox(lo, hi, [&](const LatticePoint& x) {
    Int v = 0;
    for (std::size_t i = 0; i < n; ++i)
      v += single[i].finiteValue(x[i], Orientation::Convex);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        v += diff.at({i, j}).finiteValue(x[i] - x[j], Orientation::Convex);
        v += sum.at({i, j}).finiteValue(x[i] + x[j], Orientation::Convex);
      }
    }
    entries.emplace(x, v);
  });
  return TableFunction(n, std::move(entries));
}

/// x^T Q x with Q symmetric diagonally dominant (nonnegative diagonal),
/// tabulated on [-R, R]^n; integrally convex.
inline TableFunction generateDiagonallyDominantQuadratic(std::uint64_t seed,
                                                         std::size_t n,
                                                         long R) {
  Rng rng(seed);
  std::vector<std::vector<Int>> Q(n, std::vector<Int>(n, Int(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      Q[i][j] = Q[j][i] = rng.uniformInt(-2, 2);
  for (std::size_t i = 0; i < n; ++i) {
    Int offdiag = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) offdiag += abs(Q[i][j]);
    Q[i][i] = offdiag + rng.uniformInt(0, 2);
  }

  std::map<LatticePoint, Int> entries;
  LatticePoint lo(n, Int(-R)), hi(n, Int(R));
  forEachPointInBox(lo, hi, [&](const LatticePoint& x) {
    Int v = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) v += x[i] * Q[i][j] * x[j];
    entries.emplace(x, v);
  });
  return TableFunction(n, std::move(entries));
}

/// Random separable concave function finite on all of Z^n (closed-form
/// pieces only when boxSupportedConjugates is set, so that dom Psi° is a
/// finite box).
inline SeparableFunction generateSeparableConcave(
    std::uint64_t seed, std::size_t n, bool boxSupportedConjugates = false,
    long breakpointRadius = 4) {
  Rng rng(seed);
  std::vector<UnivariatePiece> pieces;
  for (std::size_t i = 0; i < n; ++i) {
    const long kindMax = boxSupportedConjugates ? 2 : 4;
    switch (rng.uniform(0, kindMax)) {
      case 0:
        pieces.push_back(
            UnivariatePiece::absForm(rng.uniformInt(0, 3), rng.uniformInt(-1, 1)));
        break;
      case 1:
        pieces.push_back(UnivariatePiece::linearForm(rng.uniformInt(-2, 2)));
        break;
      case 2: {
        Int a = rng.uniformInt(-3, 3), b = rng.uniformInt(-3, 3);
        if (a < b) std::swap(a, b);  // concave kink: left slope >= right
        pieces.push_back(
            UnivariatePiece::kinkForm(a, b, rng.uniformInt(-1, 1)));
        break;
      }
      case 3:
        pieces.push_back(
            UnivariatePiece::quadForm(rng.uniformInt(1, 2), rng.uniformInt(-1, 1)));
        break;
      default:
        pieces.push_back(randomConcavePiece(rng, -breakpointRadius,
                                            breakpointRadius));
        break;
    }
  }
  return SeparableFunction(Orientation::Concave, std::move(pieces));
}

/// Rejection-sampled integrally convex table on [-R, R]^n with small values.
/// Samples random tables until the checker accepts one.
inline TableFunction generateICTableByRejection(std::uint64_t seed,
                                                std::size_t n, long R,
                                                long valueRange = 4,
                                                int maxTries = 10000) {
  Rng rng(seed);
  LatticePoint lo(n, Int(-R)), hi(n, Int(R));
  for (int t = 0; t < maxTries; ++t) {
    std::map<LatticePoint, Int> entries;
    forEachPointInBox(lo, hi, [&](const LatticePoint& x) {
      entries.emplace(x, rng.uniformInt(0, valueRange));
    });
    TableFunction f(n, std::move(entries));
    if (isIntegrallyConvexFunction(f).integrallyConvex) return f;
  }
  throw Error("RejectionExhausted", "generateICTableByRejection");
}

/// Rejection-sampled table that is NOT integrally convex and has a strict
/// local-but-not-global minimum, for the local-optimality counterexamples.
inline TableFunction generateNonICWithFalseLocalMin(std::uint64_t seed,
                                                    std::size_t n, long R,
                                                    int maxTries = 100000) {
  Rng rng(seed);
  LatticePoint lo(n, Int(-R)), hi(n, Int(R));
  for (int t = 0; t < maxTries; ++t) {
    std::map<LatticePoint, Int> entries;
    forEachPointInBox(lo, hi, [&](const LatticePoint& x) {
      entries.emplace(x, rng.uniformInt(0, 6));
    });
    TableFunction f(n, std::move(entries));
    Int globalMin = f.entries().begin()->second;
    for (const auto& [x, v] : f.entries()) globalMin = std::min(globalMin, v);
    bool found = false;
    for (const auto& [x, v] : f.entries()) {
      if (v == globalMin) continue;
      bool localMin = true;
      for (const LatticePoint& d : allDisplacements(n)) {
        if (linfNorm(d) == 0) continue;
        ExtInt w = f(add(x, d));
        if (w.isFinite() && w.value() < v) { localMin = false; break; }
      }
      if (localMin) { found = true; break; }
    }
    if (found && !isIntegrallyConvexFunction(f).integrallyConvex) return f;
  }
  throw Error("RejectionExhausted", "generateNonICWithFalseLocalMin");
}

/// Rejection-sampled bisubmodular function with values in [-range, range].
inline BisubFunction generateBisubmodularByRejection(std::uint64_t seed,
                                                     std::size_t n,
                                                     long range = 3,
                                                     int maxTries = 200000) {
  Rng rng(seed);
  for (int t = 0; t < maxTries; ++t) {
    BisubFunction f(n);
    for (const SignedPair& s : f.allPairs()) {
      if (s.X == 0 && s.Y == 0) continue;
      f.setValue(s, rng.uniformInt(-range, range));
    }
    if (!isBisubmodular(f)) return f;
  }
  throw Error("RejectionExhausted", "generateBisubmodularByRejection");
}

}  // namespace dfd

#endif  // DFD_GENERATORS_HPP
