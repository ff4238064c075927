#ifndef DFD_SUBDIFFERENTIAL_HPP
#define DFD_SUBDIFFERENTIAL_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dfd/core.hpp"
#include "dfd/table_function.hpp"

namespace dfd {

/// One row a.p <= b with a in {-1,0,+1}^n.
struct SignedRow {
  LatticePoint a;
  Int b;

  friend bool operator==(const SignedRow& l, const SignedRow& r) {
    return l.a == r.a && l.b == r.b;
  }
  friend bool operator<(const SignedRow& l, const SignedRow& r) {
    return std::tie(l.a, l.b) < std::tie(r.a, r.b);
  }
};

/// System A p <= b with entries in {-1,0,+1}, plus an integral box.
struct InequalitySystem {
  std::size_t dimension = 0;
  std::vector<SignedRow> rows;
  IntegralBox box;  // trivial box when absent

  InequalitySystem() = default;
  InequalitySystem(std::size_t n, std::vector<SignedRow> r)
      : dimension(n), rows(std::move(r)), box(IntegralBox::trivial(n)) {}
  InequalitySystem(std::size_t n, std::vector<SignedRow> r, IntegralBox b)
      : dimension(n), rows(std::move(r)), box(std::move(b)) {
    if (box.dimension() != n) throw DimensionMismatch("InequalitySystem box");
  }

  bool satisfied(const RatVec& p) const {
    for (const SignedRow& row : rows)
      if (dot(toRatVec(row.a), p) > Rat(row.b)) return false;
    return box.contains(p);
  }
};

/// Subdifferential system of f at x: one row per displacement d in
/// {-1,0,+1}^n \ {0} with f(x+d) finite, reading  d.p <= f(x+d) - f(x).
inline InequalitySystem buildSubgradientSystem(const TableFunction& f,
                                               const LatticePoint& x) {
  if (!f.inDomain(x)) throw PointOutsideDomain("buildSubgradientSystem");
  const Int fx = f.at(x);
  std::vector<SignedRow> rows;
  for (const LatticePoint& d : allDisplacements(f.dimension())) {
    if (linfNorm(d) == 0) continue;
    ExtInt v = f(add(x, d));
    if (!v.isFinite()) continue;
    rows.push_back(SignedRow{d, v.value() - fx});
  }
  return InequalitySystem(f.dimension(), std::move(rows));
}

/// Exact subgradient membership: f(y) - f(x) >= <p, y - x> for all y in dom f.
inline bool membershipCheck(const TableFunction& f, const LatticePoint& x,
                            const RatVec& p) {
  if (!f.inDomain(x)) throw PointOutsideDomain("membershipCheck");
  if (p.size() != f.dimension()) throw DimensionMismatch("membershipCheck");
  const Rat fx(f.at(x));
  for (const auto& [y, v] : f.entries()) {
    if (Rat(v) - fx < dot(p, sub(y, x))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Box-free Fourier-Motzkin reduction (nested index-set filtration)
// ---------------------------------------------------------------------------

/// Two-sided bound on p_l in terms of the tail p_{l+1}..p_n:
///   max over lowerRows of (tail terms - b)  <=  p_l  <=
///   min over upperRows of (b - tail terms).
struct TailBound {
  std::size_t level = 0;               // l, 0-based
  std::vector<SignedRow> upperRows;    // rows with a_l = +1
  std::vector<SignedRow> lowerRows;    // rows with a_l = -1
};

/// The reduced system produced by the elimination filtration: level l keeps
/// only rows whose leading nonzero coordinate is l. For integrally convex
/// inputs the tail of the output describes the projection of the region.
inline std::vector<TailBound> fmReducedSystem(const InequalitySystem& sys) {
  std::vector<TailBound> out(sys.dimension);
  for (std::size_t l = 0; l < sys.dimension; ++l) out[l].level = l;
  for (const SignedRow& row : sys.rows) {
    std::size_t lead = sys.dimension;
    for (std::size_t j = 0; j < sys.dimension; ++j) {
      if (row.a[j] != 0) { lead = j; break; }
    }
    if (lead == sys.dimension) continue;  // all-zero row carries no bound
    if (row.a[lead] > 0)
      out[lead].upperRows.push_back(row);
    else
      out[lead].lowerRows.push_back(row);
  }
  return out;
}

/// Evaluates a TailBound at concrete tail values p_{l+1}..p_n.
inline std::pair<ExtRat, ExtRat> tailBoundInterval(const TailBound& tb,
                                                   std::size_t dimension,
                                                   const RatVec& tail) {
  if (tail.size() != dimension - tb.level - 1)
    throw DimensionMismatch("tailBoundInterval");
  ExtRat lo = ExtRat::minusInfinity(), hi = ExtRat::plusInfinity();
  auto tailTerm = [&](const SignedRow& row) {
    Rat s = 0;
    for (std::size_t j = tb.level + 1; j < dimension; ++j)
      s += Rat(row.a[j]) * tail[j - tb.level - 1];
    return s;
  };
  for (const SignedRow& row : tb.upperRows)
    hi = min(hi, ExtRat(Rat(row.b) - tailTerm(row)));
  for (const SignedRow& row : tb.lowerRows)
    lo = max(lo, ExtRat(tailTerm(row) - Rat(row.b)));
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// IQ(l): the direct inequality description of the projection with a box
// ---------------------------------------------------------------------------

/// One IQ row over the tail variables p_l..p_n (0-based level l):
///   sign * p_l + sum_{j>l} a_j p_j <= rhs
/// where rhs = b - (sum_{j<l, a_j=+1} alpha_j - sum_{j<l, a_j=-1} beta_j).
/// sign is +1 (plus-row), -1 (minus-row) or 0 (zero-row). Rows whose folded
/// constant involves an infinite bound are trivially true; they are kept with
/// trivial=true so the row count invariant stays visible.
struct IQRow {
  int sign = 0;
  LatticePoint tailCoeffs;  // coefficients of p_{l+1}..p_n
  ExtInt rhs;               // +inf marks a trivially-true row
  bool trivial = false;
  SignedRow origin;         // the A p <= b row this came from
};

struct IQSystem {
  std::size_t dimension = 0;
  std::size_t level = 0;  // 0-based l
  std::vector<IQRow> plusRows, minusRows, zeroRows;
  IntegralBox box;  // box rows alpha_j <= p_j <= beta_j for j >= level

  std::size_t rowCount() const {
    // |I| + 2(n - l + 1) in the paper's 1-based counting.
    return plusRows.size() + minusRows.size() + zeroRows.size() +
           2 * (dimension - level);
  }
};

/// Builds IQ(l) for the system combined with the box. The constants
/// sum_{j in J+} alpha_j - sum_{j in J-} beta_j are folded into each rhs;
/// a fold that hits alpha_j = -inf or beta_j = +inf makes the row vacuous.
inline IQSystem buildIQ(const InequalitySystem& sys, const IntegralBox& box,
                        std::size_t level) {
  const std::size_t n = sys.dimension;
  if (level >= n) throw DimensionMismatch("buildIQ level");
  if (box.dimension() != n) throw DimensionMismatch("buildIQ box");

  IQSystem iq;
  iq.dimension = n;
  iq.level = level;
  iq.box = box;

  for (const SignedRow& row : sys.rows) {
    IQRow r;
    r.origin = row;
    r.sign = static_cast<int>(row.a[level]);
    r.tailCoeffs.assign(row.a.begin() + static_cast<long>(level) + 1,
                        row.a.end());

    bool vacuous = false;
    Int folded = 0;
    for (std::size_t j = 0; j < level; ++j) {
      if (row.a[j] > 0) {
        if (!box.lower(j).isFinite()) { vacuous = true; break; }
        folded += box.lower(j).value();
      } else if (row.a[j] < 0) {
        if (!box.upper(j).isFinite()) { vacuous = true; break; }
        folded -= box.upper(j).value();
      }
    }
    if (vacuous) {
      r.rhs = ExtInt::plusInfinity();
      r.trivial = true;
    } else {
      r.rhs = ExtInt(row.b - folded);
    }
    if (r.sign > 0)
      iq.plusRows.push_back(std::move(r));
    else if (r.sign < 0)
      iq.minusRows.push_back(std::move(r));
    else
      iq.zeroRows.push_back(std::move(r));
  }
  return iq;
}

/// A point of the tail space satisfies IQ(l)?  (Used by the completeness
/// audits; tail holds the values of p_l..p_n.)
inline bool iqSatisfied(const IQSystem& iq, const RatVec& tailFromLevel) {
  const std::size_t n = iq.dimension;
  if (tailFromLevel.size() != n - iq.level)
    throw DimensionMismatch("iqSatisfied");
  auto rowHolds = [&](const IQRow& r) {
    if (r.trivial) return true;
    Rat lhs = Rat(r.sign) * tailFromLevel[0];
    for (std::size_t j = 0; j < r.tailCoeffs.size(); ++j)
      lhs += Rat(r.tailCoeffs[j]) * tailFromLevel[j + 1];
    return ExtRat(lhs) <= toExtRat(r.rhs);
  };
  auto zeroRowHolds = [&](const IQRow& r) {
    if (r.trivial) return true;
    Rat lhs = 0;
    for (std::size_t j = 0; j < r.tailCoeffs.size(); ++j)
      lhs += Rat(r.tailCoeffs[j]) * tailFromLevel[j + 1];
    return ExtRat(lhs) <= toExtRat(r.rhs);
  };
  for (const IQRow& r : iq.plusRows)
    if (!rowHolds(r)) return false;
  for (const IQRow& r : iq.minusRows)
    if (!rowHolds(r)) return false;
  for (const IQRow& r : iq.zeroRows)
    if (!zeroRowHolds(r)) return false;
  for (std::size_t j = iq.level; j < n; ++j) {
    const ExtRat v(tailFromLevel[j - iq.level]);
    if (v < toExtRat(iq.box.lower(j)) || toExtRat(iq.box.upper(j)) < v)
      return false;
  }
  return true;
}

/// The exact interval for p_l prescribed by IQ(l) at the given tail values
/// p_{l+1}..p_n:
///   max{alpha_l, lower rows}  <=  p_l  <=  min{beta_l, upper rows}.
/// An empty interval is a value, not a failure.
inline std::pair<ExtRat, ExtRat> projectionInterval(const IQSystem& iq,
                                                    const RatVec& tail) {
  const std::size_t n = iq.dimension;
  if (tail.size() != n - iq.level - 1)
    throw DimensionMismatch("projectionInterval tail");

  ExtRat lo = toExtRat(iq.box.lower(iq.level));
  ExtRat hi = toExtRat(iq.box.upper(iq.level));
  auto tailTerm = [&](const IQRow& r) {
    Rat s = 0;
    for (std::size_t j = 0; j < r.tailCoeffs.size(); ++j)
      s += Rat(r.tailCoeffs[j]) * tail[j];
    return s;
  };
  for (const IQRow& r : iq.plusRows) {
    if (r.trivial) continue;
    hi = min(hi, ExtRat(Rat(r.rhs.value()) - tailTerm(r)));
  }
  for (const IQRow& r : iq.minusRows) {
    if (r.trivial) continue;
    lo = max(lo, ExtRat(tailTerm(r) - Rat(r.rhs.value())));
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Integral subgradient extraction
// ---------------------------------------------------------------------------

/// Back-substitution through the IQ intervals for l = n..1. Integer pick
/// rule: finite lower endpoint, else finite upper endpoint, else 0. Returns
/// nothing iff the subdifferential misses the box; throws
/// NotIntegrallyConvex when a consistency check fails (empty interval with a
/// valid tail, a fractional endpoint, or a returned point failing the exact
/// membership check), which signals a non-integrally-convex input.
inline std::optional<LatticePoint> integralSubgradientInBox(
    const TableFunction& f, const LatticePoint& x, const IntegralBox& box) {
  InequalitySystem sys = buildSubgradientSystem(f, x);
  const std::size_t n = sys.dimension;

  std::vector<IQSystem> iq;
  iq.reserve(n);
  for (std::size_t l = 0; l < n; ++l) iq.push_back(buildIQ(sys, box, l));

  LatticePoint p(n, Int(0));
  for (std::size_t l = n; l-- > 0;) {
    RatVec tail;
    for (std::size_t j = l + 1; j < n; ++j) tail.push_back(Rat(p[j]));
    auto [lo, hi] = projectionInterval(iq[l], tail);
    if (hi < lo) {
      if (l + 1 == n) return std::nullopt;  // region genuinely empty
      throw NotIntegrallyConvex(
          "empty interval during back-substitution at level " +
          std::to_string(l + 1));
    }
    ExtRat chosen;
    if (lo.isFinite())
      chosen = lo;
    else if (hi.isFinite())
      chosen = hi;
    else
      chosen = ExtRat(Rat(0));
    if (!isIntegral(chosen.value()))
      throw NotIntegrallyConvex("fractional interval endpoint at level " +
                                std::to_string(l + 1));
    p[l] = boost::multiprecision::numerator(chosen.value());
  }

  if (!membershipCheck(f, x, toRatVec(p)) || !box.contains(p))
    throw NotIntegrallyConvex("extracted point fails the membership check");
  return p;
}

/// Rounds a (possibly fractional) subgradient p to an integral one inside
/// the unit box [floor p, ceil p], via boxed extraction.
inline LatticePoint roundSubgradient(const TableFunction& f,
                                     const LatticePoint& x, const RatVec& p) {
  if (!membershipCheck(f, x, p))
    throw Error("NotASubgradient", "roundSubgradient input");
  std::vector<ExtInt> lo(p.size()), hi(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    lo[j] = ExtInt(floorRat(p[j]));
    hi[j] = ExtInt(ceilRat(p[j]));
  }
  auto q = integralSubgradientInBox(f, x, IntegralBox(lo, hi));
  if (!q)
    throw NotIntegrallyConvex("rounding box contains no integral subgradient");
  return *q;
}

}  // namespace dfd

#endif  // DFD_SUBDIFFERENTIAL_HPP
