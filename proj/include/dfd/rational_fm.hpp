#ifndef DFD_RATIONAL_FM_HPP
#define DFD_RATIONAL_FM_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "dfd/core.hpp"
#include "dfd/simplex.hpp"
#include "dfd/subdifferential.hpp"

namespace dfd {

/// General inequality system over rationals: rows a.p <= b. The generic
/// Fourier-Motzkin eliminator below is the independent oracle against which
/// the IQ(l) construction is audited, so it must stay free of any shortcut
/// that assumes integral convexity.
struct RationalSystem {
  std::size_t dimension = 0;
  std::vector<IneqRow> rows;
  bool inconsistent = false;  // a row 0.p <= b with b < 0 was produced

  bool satisfied(const RatVec& p) const {
    if (inconsistent) return false;
    for (const IneqRow& r : rows)
      if (dot(r.coeffs, p) > r.rhs) return false;
    return true;
  }
};

inline RationalSystem toRationalSystem(const InequalitySystem& sys) {
  RationalSystem out;
  out.dimension = sys.dimension;
  for (const SignedRow& row : sys.rows)
    out.rows.push_back(IneqRow{toRatVec(row.a), Rat(row.b)});
  for (std::size_t j = 0; j < sys.dimension; ++j) {
    if (sys.box.lower(j).isFinite()) {
      RatVec a(sys.dimension, Rat(0));
      a[j] = -1;
      out.rows.push_back(IneqRow{std::move(a), Rat(-sys.box.lower(j).value())});
    }
    if (sys.box.upper(j).isFinite()) {
      RatVec a(sys.dimension, Rat(0));
      a[j] = 1;
      out.rows.push_back(IneqRow{std::move(a), Rat(sys.box.upper(j).value())});
    }
  }
  return out;
}

namespace detail {

// Canonical scaling: divide by |first nonzero coefficient|. All-zero rows are
// handled by the caller.
inline IneqRow normalizeRow(IneqRow row) {
  for (const Rat& c : row.coeffs) {
    if (c != 0) {
      const Rat scale = abs(c);
      for (Rat& v : row.coeffs) v /= scale;
      row.rhs /= scale;
      break;
    }
  }
  return row;
}

}  // namespace detail

/// One exact elimination step for variable `eliminate`: all plus/minus row
/// combinations plus the untouched zero rows. Pruning is limited to exact
/// duplicates and rows dominated by an identical-coefficient row with a
/// smaller right-hand side; trivially-true constant rows are dropped and a
/// trivially-false one marks the system inconsistent.
inline RationalSystem genericFourierMotzkin(const RationalSystem& sys,
                                            std::size_t eliminate) {
  if (eliminate >= sys.dimension)
    throw DimensionMismatch("genericFourierMotzkin");

  std::vector<IneqRow> plus, minus, keep;
  for (const IneqRow& r : sys.rows) {
    const Rat& c = r.coeffs[eliminate];
    if (c > 0)
      plus.push_back(r);
    else if (c < 0)
      minus.push_back(r);
    else
      keep.push_back(r);
  }

  RationalSystem out;
  out.dimension = sys.dimension;
  out.inconsistent = sys.inconsistent;

  auto addRow = [&](IneqRow row) {
    row.coeffs[eliminate] = 0;
    bool allZero = true;
    for (const Rat& c : row.coeffs)
      if (c != 0) { allZero = false; break; }
    if (allZero) {
      if (row.rhs < 0) out.inconsistent = true;
      return;  // constant row: either trivially true or recorded as above
    }
    out.rows.push_back(detail::normalizeRow(std::move(row)));
  };

  for (IneqRow& r : keep) addRow(std::move(r));
  for (const IneqRow& pr : plus) {
    for (const IneqRow& mr : minus) {
      const Rat cp = pr.coeffs[eliminate];
      const Rat cm = -mr.coeffs[eliminate];
      IneqRow combo;
      combo.coeffs.resize(sys.dimension);
      for (std::size_t j = 0; j < sys.dimension; ++j)
        combo.coeffs[j] = pr.coeffs[j] / cp + mr.coeffs[j] / cm;
      combo.rhs = pr.rhs / cp + mr.rhs / cm;
      addRow(std::move(combo));
    }
  }

  // Duplicate / dominance pruning on normalized rows.
  std::map<RatVec, Rat> best;
  for (IneqRow& r : out.rows) {
    auto it = best.find(r.coeffs);
    if (it == best.end())
      best.emplace(std::move(r.coeffs), std::move(r.rhs));
    else
      it->second = std::min(it->second, r.rhs);
  }
  out.rows.clear();
  for (auto& [coeffs, rhs] : best) out.rows.push_back(IneqRow{coeffs, rhs});
  return out;
}

/// Eliminates variables 0..upTo-1 in order, leaving a system over the tail.
inline RationalSystem eliminatePrefix(RationalSystem sys, std::size_t upTo) {
  for (std::size_t j = 0; j < upTo; ++j) sys = genericFourierMotzkin(sys, j);
  return sys;
}

/// Interval for variable `level` prescribed by a system in which variables
/// 0..level-1 have already been eliminated, at the given tail values.
inline std::pair<ExtRat, ExtRat> rationalInterval(const RationalSystem& sys,
                                                  std::size_t level,
                                                  const RatVec& tail) {
  if (tail.size() != sys.dimension - level - 1)
    throw DimensionMismatch("rationalInterval");
  ExtRat lo = ExtRat::minusInfinity(), hi = ExtRat::plusInfinity();
  for (const IneqRow& r : sys.rows) {
    for (std::size_t j = 0; j < level; ++j)
      if (r.coeffs[j] != 0)
        throw Error("NotEliminated", "rationalInterval row touches a prefix var");
    Rat tailSum = 0;
    for (std::size_t j = level + 1; j < sys.dimension; ++j)
      tailSum += r.coeffs[j] * tail[j - level - 1];
    const Rat& c = r.coeffs[level];
    if (c > 0)
      hi = min(hi, ExtRat((r.rhs - tailSum) / c));
    else if (c < 0)
      lo = max(lo, ExtRat((r.rhs - tailSum) / c));
    else if (tailSum > r.rhs)
      return {ExtRat(Rat(1)), ExtRat(Rat(0))};  // tail infeasible: empty
  }
  if (sys.inconsistent) return {ExtRat(Rat(1)), ExtRat(Rat(0))};
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Vertex enumeration
// ---------------------------------------------------------------------------

namespace detail {

/// Solves M y = rhs exactly; empty on singular M.
inline std::optional<RatVec> solveSquare(std::vector<RatVec> M, RatVec rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = n;
    for (std::size_t r = col; r < n; ++r)
      if (M[r][col] != 0) { piv = r; break; }
    if (piv == n) return std::nullopt;
    std::swap(M[piv], M[col]);
    std::swap(rhs[piv], rhs[col]);
    const Rat d = M[col][col];
    for (std::size_t j = col; j < n; ++j) M[col][j] /= d;
    rhs[col] /= d;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || M[r][col] == 0) continue;
      const Rat f = M[r][col];
      for (std::size_t j = col; j < n; ++j) M[r][j] -= f * M[col][j];
      rhs[r] -= f * rhs[col];
    }
  }
  return rhs;
}

}  // namespace detail

/// All vertices of { p : rows hold } by exhaustive basis enumeration with
/// exact solves; requires a bounded region (checked by coordinate-wise LP).
/// Result is deduplicated and lexicographically sorted.
inline std::vector<RatVec> enumerateVertices(const InequalitySystem& sys) {
  RationalSystem rs = toRationalSystem(sys);
  const std::size_t n = rs.dimension;

  for (std::size_t j = 0; j < n; ++j) {
    for (int sgn : {+1, -1}) {
      RatVec obj(n, Rat(0));
      obj[j] = sgn;
      LpSolution s = maximizeOverPolyhedron(rs.rows, obj);
      if (s.status == LpStatus::Unbounded)
        throw UnboundedRegion("direction " + std::to_string(j));
      if (s.status == LpStatus::Infeasible) return {};
    }
  }

  std::vector<RatVec> vertices;
  std::vector<std::size_t> idx(n, 0);
  const std::size_t m = rs.rows.size();
  if (m < n) return {};
  // Iterate over all n-subsets of rows.
  std::vector<std::size_t> comb(n);
  for (std::size_t i = 0; i < n; ++i) comb[i] = i;
  for (;;) {
    std::vector<RatVec> M(n, RatVec(n));
    RatVec rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      M[i] = rs.rows[comb[i]].coeffs;
      rhs[i] = rs.rows[comb[i]].rhs;
    }
    if (auto y = detail::solveSquare(std::move(M), std::move(rhs))) {
      if (rs.satisfied(*y)) vertices.push_back(std::move(*y));
    }
    // next combination
    std::size_t i = n;
    while (i-- > 0) {
      if (comb[i] + (n - i) < m) {
        ++comb[i];
        for (std::size_t k = i + 1; k < n; ++k) comb[k] = comb[k - 1] + 1;
        break;
      }
      if (i == 0) {
        std::sort(vertices.begin(), vertices.end());
        vertices.erase(std::unique(vertices.begin(), vertices.end()),
                       vertices.end());
        return vertices;
      }
    }
  }
}

}  // namespace dfd

#endif  // DFD_RATIONAL_FM_HPP
