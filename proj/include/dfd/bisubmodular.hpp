#ifndef DFD_BISUBMODULAR_HPP
#define DFD_BISUBMODULAR_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dfd/core.hpp"
#include "dfd/separable.hpp"
#include "dfd/table_function.hpp"

namespace dfd {

/// A pair of disjoint subsets (X, Y) of {0,..,n-1} as bitmasks; equivalently
/// the signed vector e_X - e_Y in {-1,0,+1}^n.
struct SignedPair {
  std::uint32_t X = 0, Y = 0;

  friend bool operator==(const SignedPair& a, const SignedPair& b) {
    return a.X == b.X && a.Y == b.Y;
  }
};

inline LatticePoint signedVector(const SignedPair& s, std::size_t n) {
  LatticePoint x(n, Int(0));
  for (std::size_t i = 0; i < n; ++i) {
    if (s.X >> i & 1u) x[i] = 1;
    if (s.Y >> i & 1u) x[i] = -1;
  }
  return x;
}

/// Component sum z(S) over a bitmask subset.
inline Int maskSum(const LatticePoint& z, std::uint32_t mask) {
  Int s = 0;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (mask >> i & 1u) s += z[i];
  return s;
}

inline Rat maskSum(const RatVec& z, std::uint32_t mask) {
  Rat s = 0;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (mask >> i & 1u) s += z[i];
  return s;
}

/// Integer-valued function on 3^N (all disjoint pairs), f(0,0) = 0.
class BisubFunction {
 public:
  explicit BisubFunction(std::size_t n) : n_(n), values_(pow3(n), Int(0)) {
    if (n == 0 || n > 12) throw DimensionMismatch("BisubFunction ground set");
  }

  std::size_t groundSetSize() const { return n_; }

  const Int& value(const SignedPair& s) const { return values_[index(s)]; }
  void setValue(const SignedPair& s, Int v) {
    if (s.X == 0 && s.Y == 0 && v != 0)
      throw Error("NotNormalized", "f(empty,empty) must be 0");
    values_[index(s)] = std::move(v);
  }

  /// All (X, Y) pairs, a fixed deterministic order.
  std::vector<SignedPair> allPairs() const {
    std::vector<SignedPair> out;
    out.reserve(values_.size());
    const std::uint32_t full = (1u << n_) - 1u;
    for (std::uint32_t X = 0; X <= full; ++X) {
      std::uint32_t rest = full & ~X;
      // enumerate subsets Y of rest, including empty
      std::uint32_t Y = 0;
      for (;;) {
        out.push_back(SignedPair{X, Y});
        if (Y == rest) break;
        Y = (Y - rest) & rest;
      }
    }
    return out;
  }

  /// The box function w_{alpha beta}(X,Y) = beta(X) - alpha(Y).
  static BisubFunction boxFunction(const LatticePoint& alpha,
                                   const LatticePoint& beta) {
    if (alpha.size() != beta.size()) throw DimensionMismatch("boxFunction");
    BisubFunction w(alpha.size());
    for (const SignedPair& s : w.allPairs())
      w.setValue(s, maskSum(beta, s.X) - maskSum(alpha, s.Y));
    return w;
  }

 private:
  static std::size_t pow3(std::size_t n) {
    std::size_t r = 1;
    while (n--) r *= 3;
    return r;
  }
  std::size_t index(const SignedPair& s) const {
    if (s.X & s.Y) throw Error("NotDisjoint", "signed pair");
    if ((s.X | s.Y) >> n_) throw DimensionMismatch("signed pair mask");
    std::size_t idx = 0, base = 1;
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t digit = (s.X >> i & 1u) ? 1 : ((s.Y >> i & 1u) ? 2 : 0);
      idx += digit * base;
      base *= 3;
    }
    return idx;
  }

  std::size_t n_;
  std::vector<Int> values_;
};

// ---------------------------------------------------------------------------
// Membership and the bisubmodular inequality
// ---------------------------------------------------------------------------

struct BisubViolation {
  SignedPair first, second;
};

/// Exhaustive check of
///   f(X1,Y1) + f(X2,Y2) >= f(X1 cap X2, Y1 cap Y2)
///                        + f((X1 u X2)\(Y1 u Y2), (Y1 u Y2)\(X1 u X2)).
inline std::optional<BisubViolation> isBisubmodular(const BisubFunction& f) {
  const std::vector<SignedPair> pairs = f.allPairs();
  for (const SignedPair& a : pairs) {
    for (const SignedPair& b : pairs) {
      const SignedPair meet{a.X & b.X, a.Y & b.Y};
      const std::uint32_t ux = a.X | b.X, uy = a.Y | b.Y;
      const SignedPair join{ux & ~uy, uy & ~ux};
      if (f.value(a) + f.value(b) < f.value(meet) + f.value(join))
        return BisubViolation{a, b};
    }
  }
  return std::nullopt;
}

/// z in P(f): z(X) - z(Y) <= f(X,Y) for all (X,Y).
inline bool polyhedronMembership(const BisubFunction& f, const RatVec& z) {
  if (z.size() != f.groundSetSize()) throw DimensionMismatch("P(f) membership");
  for (const SignedPair& s : f.allPairs())
    if (maskSum(z, s.X) - maskSum(z, s.Y) > Rat(f.value(s))) return false;
  return true;
}

/// All integer z in P(f) intersected with the box. The singleton constraints
/// z_i <= f({i},0), -z_i <= f(0,{i}) always bound the enumeration.
inline std::vector<LatticePoint> enumerateIntegerPoints(
    const BisubFunction& f, const IntegralBox& box) {
  const std::size_t n = f.groundSetSize();
  if (box.dimension() != n) throw DimensionMismatch("enumerateIntegerPoints");
  LatticePoint lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    ExtInt lower = max(box.lower(i),
                       ExtInt(-f.value(SignedPair{0, 1u << i})));
    ExtInt upper = min(box.upper(i),
                       ExtInt(f.value(SignedPair{1u << i, 0})));
    if (!lower.isFinite() || !upper.isFinite())
      throw UnboundedEnumeration("no finite bound derivable");
    lo[i] = lower.value();
    hi[i] = upper.value();
  }
  std::vector<LatticePoint> out;
  forEachPointInBox(lo, hi, [&](const LatticePoint& z) {
    if (polyhedronMembership(f, toRatVec(z))) out.push_back(z);
  });
  return out;
}

// ---------------------------------------------------------------------------
// The two min-max theorems, verified by enumeration
// ---------------------------------------------------------------------------

struct MinMaxResult {
  Int lhs, rhs;
  LatticePoint lhsWitness;   // maximizing z
  SignedPair rhsWitness;     // minimizing (X,Y)
};

/// max{ z(N) : z in P(f) cap Z^n, z <= w }
///   = min{ f(X,Y) + w(N\X) + w(Y) : (X,Y) in 3^N }.
inline MinMaxResult minmaxCGK(const BisubFunction& f, const LatticePoint& w) {
  const std::size_t n = f.groundSetSize();
  if (w.size() != n) throw DimensionMismatch("minmaxCGK");
  std::vector<ExtInt> lo(n, ExtInt::minusInfinity()), hi(n);
  for (std::size_t i = 0; i < n; ++i) hi[i] = ExtInt(w[i]);
  std::vector<LatticePoint> feasible =
      enumerateIntegerPoints(f, IntegralBox(lo, hi));
  if (feasible.empty())
    throw InfeasiblePrecondition("no z in P(f) with z <= w");

  MinMaxResult res;
  bool first = true;
  const std::uint32_t full = (1u << n) - 1u;
  for (const LatticePoint& z : feasible) {
    Int v = maskSum(z, full);
    if (first || v > res.lhs) { res.lhs = v; res.lhsWitness = z; first = false; }
  }
  first = true;
  for (const SignedPair& s : f.allPairs()) {
    Int v = f.value(s) + maskSum(w, full & ~s.X) + maskSum(w, s.Y);
    if (first || v < res.rhs) { res.rhs = v; res.rhsWitness = s; first = false; }
  }
  return res;
}

/// The correction term of the boxed formula:
///   beta(A\X) + beta(Y\B) - alpha(B\Y) - alpha(X\A).
inline Int boxCorrection(const LatticePoint& alpha, const LatticePoint& beta,
                         std::uint32_t A, std::uint32_t B,
                         const SignedPair& s) {
  return maskSum(beta, A & ~s.X) + maskSum(beta, s.Y & ~B) -
         maskSum(alpha, B & ~s.Y) - maskSum(alpha, s.X & ~A);
}

/// max{ z(A) - z(B) : z in P(f) cap Z^n, alpha <= z <= beta }
///   = min over (X,Y) of f(X,Y) + the box correction term.
inline MinMaxResult minmaxFP(const BisubFunction& f, const LatticePoint& alpha,
                             const LatticePoint& beta, std::uint32_t A,
                             std::uint32_t B) {
  const std::size_t n = f.groundSetSize();
  if (alpha.size() != n || beta.size() != n) throw DimensionMismatch("minmaxFP");
  if (A & B) throw Error("NotDisjoint", "minmaxFP (A,B)");
  std::vector<ExtInt> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = ExtInt(alpha[i]);
    hi[i] = ExtInt(beta[i]);
    if (beta[i] < alpha[i]) throw InfeasiblePrecondition("alpha > beta");
  }
  std::vector<LatticePoint> feasible =
      enumerateIntegerPoints(f, IntegralBox(lo, hi));
  if (feasible.empty())
    throw InfeasiblePrecondition("no z in P(f) with alpha <= z <= beta");

  MinMaxResult res;
  bool first = true;
  for (const LatticePoint& z : feasible) {
    Int v = maskSum(z, A) - maskSum(z, B);
    if (first || v > res.lhs) { res.lhs = v; res.lhsWitness = z; first = false; }
  }
  first = true;
  for (const SignedPair& s : f.allPairs()) {
    Int v = f.value(s) + boxCorrection(alpha, beta, A, B, s);
    if (first || v < res.rhs) { res.rhs = v; res.rhsWitness = s; first = false; }
  }
  return res;
}

/// Box convolution (f o w)(A,B) with w = w_{alpha beta}; bisubmodular with
/// P(f o w) = P(f) cap [alpha, beta].
inline BisubFunction boxConvolution(const BisubFunction& f,
                                    const LatticePoint& alpha,
                                    const LatticePoint& beta) {
  const std::size_t n = f.groundSetSize();
  if (alpha.size() != n || beta.size() != n)
    throw DimensionMismatch("boxConvolution");
  for (std::size_t i = 0; i < n; ++i)
    if (beta[i] < alpha[i]) throw Error("InvalidBox", "boxConvolution");
  BisubFunction out(n);
  const std::vector<SignedPair> pairs = f.allPairs();
  for (const SignedPair& ab : pairs) {
    std::optional<Int> best;
    for (const SignedPair& s : pairs) {
      Int v = f.value(s) + boxCorrection(alpha, beta, ab.X, ab.Y, s);
      if (!best || v < *best) best = v;
    }
    if (ab.X == 0 && ab.Y == 0 && *best != 0)
      throw InfeasiblePrecondition(
          "P(f) misses the box; the convolution is not normalized");
    out.setValue(ab, *best);
  }
  return out;
}

/// The separable concave function whose negation at e_X - e_Y is exactly the
/// box correction term: kink pieces with slopes (beta_i, alpha_i) around
/// k0 = +1 on A, -1 on B, 0 elsewhere.
inline SeparableFunction buildPsiFromSignedPair(std::uint32_t A, std::uint32_t B,
                                                const LatticePoint& alpha,
                                                const LatticePoint& beta,
                                                std::size_t n) {
  if (A & B) throw Error("NotDisjoint", "buildPsiFromSignedPair");
  if (alpha.size() != n || beta.size() != n)
    throw DimensionMismatch("buildPsiFromSignedPair");
  std::vector<UnivariatePiece> pieces;
  pieces.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (beta[i] < alpha[i]) throw Error("InvalidBox", "buildPsiFromSignedPair");
    Int k0 = (A >> i & 1u) ? Int(1) : ((B >> i & 1u) ? Int(-1) : Int(0));
    // Concave kink: left slope beta_i >= right slope alpha_i.
    pieces.push_back(UnivariatePiece::kinkForm(beta[i], alpha[i], k0));
  }
  return SeparableFunction(Orientation::Concave, std::move(pieces));
}

}  // namespace dfd

#endif  // DFD_BISUBMODULAR_HPP
