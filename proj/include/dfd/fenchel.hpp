#ifndef DFD_FENCHEL_HPP
#define DFD_FENCHEL_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dfd/core.hpp"
#include "dfd/integral_convexity.hpp"
#include "dfd/separable.hpp"
#include "dfd/simplex.hpp"
#include "dfd/subdifferential.hpp"
#include "dfd/table_function.hpp"

namespace dfd {

// ---------------------------------------------------------------------------
// Primal minimization
// ---------------------------------------------------------------------------

struct Minimizer {
  LatticePoint point;
  Int value;
};

/// Exhaustive exact minimum of f - Psi over dom f; ties broken by the
/// lexicographically smallest minimizer.
inline Minimizer minimizeDifference(const TableFunction& f,
                                    const SeparableFunction& psi) {
  if (psi.dimension() != f.dimension())
    throw DimensionMismatch("minimizeDifference");
  std::optional<Minimizer> best;
  for (const auto& [x, fx] : f.entries()) {
    ExtInt py = psi(x);
    if (!py.isFinite()) continue;
    Int v = fx - py.value();
    if (!best || v < best->value) best = Minimizer{x, v};
  }
  if (!best) throw EmptyIntersection("dom f and dom Psi are disjoint");
  return *best;
}

/// Same, with the concave part given as a table (finite values on its key
/// set, -inf outside).
inline Minimizer minimizeDifference(const TableFunction& f,
                                    const TableFunction& g) {
  if (g.dimension() != f.dimension())
    throw DimensionMismatch("minimizeDifference");
  std::optional<Minimizer> best;
  for (const auto& [x, fx] : f.entries()) {
    if (!g.inDomain(x)) continue;
    Int v = fx - g.at(x);
    if (!best || v < best->value) best = Minimizer{x, v};
  }
  if (!best) throw EmptyIntersection("dom f and dom g are disjoint");
  return *best;
}

/// f(x) <= f(x + d) for all d in {-1,0,+1}^n. For integrally convex f this
/// is equivalent to global minimality.
inline bool localMinimumCheck(const TableFunction& f, const LatticePoint& x) {
  if (!f.inDomain(x)) throw PointOutsideDomain("localMinimumCheck");
  const Int fx = f.at(x);
  for (const LatticePoint& d : allDisplacements(f.dimension())) {
    if (linfNorm(d) == 0) continue;
    ExtInt v = f(add(x, d));
    if (v.isFinite() && v.value() < fx) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// The duality certificate
// ---------------------------------------------------------------------------

struct DualityCertificate {
  LatticePoint primalPoint;   // x*
  LatticePoint dualPoint;     // p*
  Int primalValue;            // f(x*) - Psi(x*)
  Int dualValue;              // Psi°(p*) - f•(p*)
  Int conjugateF;             // f•(p*)
  Int conjugatePsi;           // Psi°(p*)
  bool argmaxVerified;        // x* maximizes <p*,.> - f exhaustively
  bool argminVerified;        // x* minimizes <p*,.> - Psi (conjugate identity)
};

/// Runs the certificate construction: minimize f - Psi, take the box
/// B = -subdiff(-Psi)(x*), extract an integral p* from subdiff(f)(x*)
/// intersected with B, and verify both argmin/argmax memberships.
inline DualityCertificate fenchelCertificate(const TableFunction& f,
                                             const SeparableFunction& psi) {
  if (psi.orientation() != Orientation::Concave)
    throw InvalidPiece("fenchelCertificate needs concave Psi");
  Minimizer m = minimizeDifference(f, psi);

  SeparableFunction phi = psi.negated();
  IntegralBox box = subdifferentialBoxOfSeparable(phi, m.point);

  std::optional<LatticePoint> p = integralSubgradientInBox(f, m.point, box);
  if (!p)
    throw InternalInfeasible(
        "subdifferential misses the dual box; inputs violate the "
        "convexity preconditions");

  DualityCertificate cert;
  cert.primalPoint = m.point;
  cert.dualPoint = *p;
  cert.primalValue = m.value;
  cert.conjugateF = f.conjugate(*p);
  ExtInt psiConj = concaveConjugateSeparable(psi, *p);
  if (!psiConj.isFinite())
    throw InternalInfeasible("Psi°(p*) is not finite at the extracted point");
  cert.conjugatePsi = psiConj.value();
  cert.dualValue = cert.conjugatePsi - cert.conjugateF;

  // x* attains f•(p*): <p*,x*> - f(x*) equals the exhaustive maximum.
  cert.argmaxVerified =
      dot(cert.dualPoint, m.point) - f.at(m.point) == cert.conjugateF;
  // x* attains Psi°(p*): <p*,x*> - Psi(x*) equals the exact minimum, which
  // the closed-form conjugate computes over all of Z^n.
  ExtInt psiAtX = psi(m.point);
  cert.argminVerified =
      psiAtX.isFinite() &&
      dot(cert.dualPoint, m.point) - psiAtX.value() == cert.conjugatePsi;

  if (!cert.argmaxVerified || !cert.argminVerified ||
      cert.primalValue != cert.dualValue)
    throw InternalInfeasible("certificate verification failed");
  return cert;
}

/// Weak duality: Psi°(p) - f•(p) <= min(f - Psi) for every sampled p.
/// Holds for arbitrary f and concave-represented Psi, no convexity needed.
inline bool weakDualityAudit(const TableFunction& f,
                             const SeparableFunction& psi,
                             const std::vector<LatticePoint>& samples) {
  ExtInt minVal = ExtInt::plusInfinity();
  for (const auto& [x, fx] : f.entries()) {
    ExtInt py = psi(x);
    if (!py.isFinite()) continue;
    minVal = min(minVal, ExtInt(fx - py.value()));
  }
  for (const LatticePoint& p : samples) {
    ExtInt gap = concaveConjugateSeparable(psi, p);
    if (!gap.isFinite()) continue;  // -inf <= anything
    if (ExtInt(gap.value() - f.conjugate(p)) > minVal) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Counterexample gap chains
// ---------------------------------------------------------------------------

/// Four-value chain  min_Z(f-g)  >=  min_R(f~-g~)  =  max_R(g°-f•)  >=
/// max_Z(g°-f•), evaluated exactly. The continuous legs run only for n = 2.
struct GapReport {
  ExtRat minDiscrete;    // min over Z^n of f - g
  ExtRat minContinuous;  // min over R^n of the envelopes' difference
  ExtRat maxContinuous;  // max over real p of g°(p) - f•(p)
  ExtRat maxDiscrete;    // max over integer p in the dual box
  std::optional<LatticePoint> maxDiscreteWitness;
};

namespace detail {

/// Margin-certified table conjugate. When the table is the restriction of a
/// wider-domain convex-extensible function, a conjugate value is trusted only
/// if it is attained strictly inside the table's bounding box: such a point
/// is a local and hence global optimum of <p,.> - f. Otherwise the true
/// value may escape the box and +inf is reported.
inline ExtInt certifiedConvexConjugate(const TableFunction& f,
                                       const LatticePoint& p,
                                       bool restricted) {
  bool first = true;
  Int best = 0;
  for (const auto& [x, v] : f.entries()) {
    Int cand = dot(p, x) - v;
    if (first || cand > best) { best = cand; first = false; }
  }
  if (!restricted) return ExtInt(best);
  auto [lo, hi] = f.boundingBox();
  for (const auto& [x, v] : f.entries()) {
    if (dot(p, x) - v != best) continue;
    bool interior = true;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] <= lo[j] || x[j] >= hi[j]) { interior = false; break; }
    if (interior) return ExtInt(best);
  }
  return ExtInt::plusInfinity();
}

/// Concave counterpart: untrusted minima report -inf.
inline ExtInt certifiedConcaveConjugate(const TableFunction& g,
                                        const LatticePoint& p,
                                        bool restricted) {
  bool first = true;
  Int best = 0;
  for (const auto& [x, v] : g.entries()) {
    Int cand = dot(p, x) - v;
    if (first || cand < best) { best = cand; first = false; }
  }
  if (!restricted) return ExtInt(best);
  auto [lo, hi] = g.boundingBox();
  for (const auto& [x, v] : g.entries()) {
    if (dot(p, x) - v != best) continue;
    bool interior = true;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] <= lo[j] || x[j] >= hi[j]) { interior = false; break; }
    if (interior) return ExtInt(best);
  }
  return ExtInt::minusInfinity();
}

}  // namespace detail

/// Computes the four-value chain for a pair of finite tables. `restricted`
/// marks tables that are restrictions of wider-domain functions, in which
/// case integer-point conjugates are margin-certified (see above).
inline GapReport counterexampleGapReport(const TableFunction& f,
                                         const TableFunction& g,
                                         const IntegralBox& dualBox,
                                         bool restricted = true) {
  const std::size_t n = f.dimension();
  if (g.dimension() != n || dualBox.dimension() != n)
    throw DimensionMismatch("counterexampleGapReport");

  GapReport rep;

  // Leg 1: discrete minimum.
  try {
    rep.minDiscrete = ExtRat(Rat(minimizeDifference(f, g).value));
  } catch (const EmptyIntersection&) {
    rep.minDiscrete = ExtRat::plusInfinity();
  }

  // Legs 2 and 3: exact LPs over the envelopes (n = 2 only).
  if (n != 2)
    throw UnsupportedDimension("continuous legs are implemented for n = 2");
  {
    // min sum lambda_y f(y) - sum mu_w g(w)
    //   s.t. sum lambda_y y - sum mu_w w = 0, sum lambda = 1, sum mu = 1.
    std::vector<LatticePoint> fy = f.domain(), gw = g.domain();
    const std::size_t mf = fy.size(), mg = gw.size();
    std::vector<std::vector<Rat>> A(n + 2, std::vector<Rat>(mf + mg, Rat(0)));
    std::vector<Rat> b(n + 2, Rat(0)), c(mf + mg);
    for (std::size_t k = 0; k < mf; ++k) {
      for (std::size_t i = 0; i < n; ++i) A[i][k] = Rat(fy[k][i]);
      A[n][k] = 1;
      c[k] = Rat(f.at(fy[k]));
    }
    for (std::size_t k = 0; k < mg; ++k) {
      for (std::size_t i = 0; i < n; ++i) A[i][mf + k] = -Rat(gw[k][i]);
      A[n + 1][mf + k] = 1;
      c[mf + k] = -Rat(g.at(gw[k]));
    }
    b[n] = 1;
    b[n + 1] = 1;
    LpSolution sol = Simplex::solveStandardForm(A, b, c);
    rep.minContinuous = sol.status == LpStatus::Optimal
                            ? ExtRat(sol.value)
                            : ExtRat::plusInfinity();
  }
  {
    // max s - t  s.t.  s <= <p,w> - g(w),  t >= <p,y> - f(y);
    // variables [p_1..p_n, s, t], all free.
    std::vector<IneqRow> rows;
    for (const auto& [w, v] : g.entries()) {
      RatVec a(n + 2, Rat(0));
      for (std::size_t i = 0; i < n; ++i) a[i] = -Rat(w[i]);
      a[n] = 1;
      rows.push_back(IneqRow{std::move(a), Rat(-v)});
    }
    for (const auto& [y, v] : f.entries()) {
      RatVec a(n + 2, Rat(0));
      for (std::size_t i = 0; i < n; ++i) a[i] = Rat(y[i]);
      a[n + 1] = -1;
      rows.push_back(IneqRow{std::move(a), Rat(v)});
    }
    RatVec obj(n + 2, Rat(0));
    obj[n] = 1;
    obj[n + 1] = -1;
    LpSolution sol = maximizeOverPolyhedron(rows, obj);
    rep.maxContinuous = sol.status == LpStatus::Optimal
                            ? ExtRat(sol.value)
                            : (sol.status == LpStatus::Unbounded
                                   ? ExtRat::plusInfinity()
                                   : ExtRat::minusInfinity());
  }

  // Leg 4: exhaustive integer p over the dual box.
  for (std::size_t j = 0; j < n; ++j)
    if (!dualBox.lower(j).isFinite() || !dualBox.upper(j).isFinite())
      throw UnboundedEnumeration("dual box must be finite");
  LatticePoint lo(n), hi(n);
  for (std::size_t j = 0; j < n; ++j) {
    lo[j] = dualBox.lower(j).value();
    hi[j] = dualBox.upper(j).value();
  }
  rep.maxDiscrete = ExtRat::minusInfinity();
  forEachPointInBox(lo, hi, [&](const LatticePoint& p) {
    ExtInt fc = detail::certifiedConvexConjugate(f, p, restricted);
    ExtInt gc = detail::certifiedConcaveConjugate(g, p, restricted);
    if (!fc.isFinite() || !gc.isFinite()) return;
    ExtRat gap(Rat(gc.value() - fc.value()));
    if (rep.maxDiscrete < gap) {
      rep.maxDiscrete = gap;
      rep.maxDiscreteWitness = p;
    }
  });
  return rep;
}

// ---------------------------------------------------------------------------
// The conjugate-class variant of the min-max formula
// ---------------------------------------------------------------------------

struct ConjugateClassCertificate {
  TableFunction g;   // f• tabulated on the dual box
  Int lhs;           // min { g(x) - Psi(x) }
  Int rhs;           // max { Psi°(p) - g•(p) }
  LatticePoint lhsWitness, rhsWitness;
};

/// Support box of Psi°, available when every piece has a box-supported
/// concave conjugate (abs/kink/linear closed forms on all of Z).
inline std::optional<IntegralBox> conjugateSupportBox(
    const SeparableFunction& psi) {
  std::vector<ExtInt> lo(psi.dimension()), hi(psi.dimension());
  for (std::size_t i = 0; i < psi.dimension(); ++i) {
    const UnivariatePiece& pc = psi.piece(i);
    if (pc.hasFiniteDomain()) return std::nullopt;  // conjugate finite on Z
    switch (pc.shape()) {
      case PieceShape::AbsForm:
        lo[i] = ExtInt(-pc.paramA());
        hi[i] = ExtInt(pc.paramA());
        break;
      case PieceShape::LinearForm:
        lo[i] = hi[i] = ExtInt(pc.paramA());
        break;
      case PieceShape::KinkForm:
        // Concave kink is finite on [right slope, left slope].
        lo[i] = ExtInt(pc.paramB());
        hi[i] = ExtInt(pc.paramA());
        break;
      default:
        return std::nullopt;
    }
  }
  return IntegralBox(std::move(lo), std::move(hi));
}

/// Verifies min{g - Psi} = max{Psi° - g•} for g = f• on a finite dual box,
/// with f an integrally convex generator of g. The box must reproduce f by
/// biconjugation (the containment audit); otherwise BoxTooSmall.
inline ConjugateClassCertificate conjugateClassCertificate(
    const TableFunction& f, const LatticePoint& dualLo,
    const LatticePoint& dualHi, const SeparableFunction& psi) {
  const std::size_t n = f.dimension();
  if (psi.dimension() != n) throw DimensionMismatch("conjugateClassCertificate");
  if (psi.orientation() != Orientation::Concave)
    throw InvalidPiece("conjugateClassCertificate needs concave Psi");

  std::map<LatticePoint, Int> gEntries;
  forEachPointInBox(dualLo, dualHi, [&](const LatticePoint& p) {
    gEntries.emplace(p, f.conjugate(p));
  });
  TableFunction g(n, std::move(gEntries));

  // Containment audit: biconjugation over the box must reproduce f on dom f,
  // i.e. max_{p in box} <p,x> - f•(p) = f(x).
  for (const auto& [x, v] : f.entries())
    if (g.conjugate(x) != v)
      throw BoxTooSmall("dual box does not reproduce f by biconjugation");

  ConjugateClassCertificate out{std::move(g), 0, 0, {}, {}};

  Minimizer lhs = minimizeDifference(out.g, psi);
  out.lhs = lhs.value;
  out.lhsWitness = lhs.point;

  std::optional<IntegralBox> support = conjugateSupportBox(psi);
  if (!support)
    throw UnboundedEnumeration(
        "Psi° has unbounded support; supply box-supported pieces");
  LatticePoint slo(n), shi(n);
  for (std::size_t j = 0; j < n; ++j) {
    slo[j] = support->lower(j).value();
    shi[j] = support->upper(j).value();
  }
  std::optional<Int> best;
  forEachPointInBox(slo, shi, [&](const LatticePoint& p) {
    ExtInt pc = concaveConjugateSeparable(psi, p);
    if (!pc.isFinite()) return;
    Int v = pc.value() - out.g.conjugate(p);
    if (!best || v > *best) {
      best = v;
      out.rhsWitness = p;
    }
  });
  if (!best) throw InternalInfeasible("empty Psi° support");
  out.rhs = *best;
  return out;
}

// ---------------------------------------------------------------------------
// Finiteness propagation (max finite => min finite)
// ---------------------------------------------------------------------------

struct FinitenessReport {
  bool passed = false;
  bool stabilized = false;  // max did not grow when the box was enlarged
  ExtInt maxValue = ExtInt::minusInfinity();
  ExtInt minValue = ExtInt::plusInfinity();
};

/// Audits: whenever max{Psi° - f•} over a dual box is finite and stable
/// under enlarging the box, min{f - Psi} must be finite. A max that keeps
/// growing marks a sup of +inf, for which the claim is vacuous.
inline FinitenessReport finitenessPropagationCheck(const TableFunction& f,
                                                   const SeparableFunction& psi,
                                                   const LatticePoint& dualLo,
                                                   const LatticePoint& dualHi) {
  FinitenessReport rep;
  auto maxOver = [&](const LatticePoint& lo, const LatticePoint& hi) {
    ExtInt best = ExtInt::minusInfinity();
    forEachPointInBox(lo, hi, [&](const LatticePoint& p) {
      ExtInt pc = concaveConjugateSeparable(psi, p);
      if (!pc.isFinite()) return;
      best = max(best, ExtInt(pc.value() - f.conjugate(p)));
    });
    return best;
  };
  rep.maxValue = maxOver(dualLo, dualHi);
  LatticePoint lo2(dualLo), hi2(dualHi);
  for (auto& v : lo2) v -= 1;
  for (auto& v : hi2) v += 1;
  rep.stabilized = maxOver(lo2, hi2) == rep.maxValue;

  for (const auto& [x, fx] : f.entries()) {
    ExtInt py = psi(x);
    if (!py.isFinite()) continue;
    rep.minValue = min(rep.minValue, ExtInt(fx - py.value()));
  }

  if (!rep.maxValue.isFinite() || !rep.stabilized)
    rep.passed = true;  // vacuous: the sup is -inf or not yet finite-stable
  else
    rep.passed = rep.minValue.isFinite();
  return rep;
}

}  // namespace dfd

#endif  // DFD_FENCHEL_HPP
