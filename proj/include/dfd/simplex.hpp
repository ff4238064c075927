#ifndef DFD_SIMPLEX_HPP
#define DFD_SIMPLEX_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "dfd/core.hpp"

namespace dfd {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Rat value = 0;            // optimal objective (valid when Optimal)
  std::vector<Rat> x;       // primal solution (valid when Optimal)
};

/// Dense exact-rational simplex for min c.x s.t. Ax = b, x >= 0.
/// Bland's pivot rule throughout, so termination is guaranteed.
class Simplex {
 public:
  static LpSolution solveStandardForm(std::vector<std::vector<Rat>> A,
                                      std::vector<Rat> b,
                                      const std::vector<Rat>& c) {
    const std::size_t m = A.size();
    const std::size_t n = m == 0 ? c.size() : A[0].size();
    if (c.size() != n) throw DimensionMismatch("simplex objective");

    // Normalize to b >= 0.
    for (std::size_t i = 0; i < m; ++i) {
      if (b[i] < 0) {
        b[i] = -b[i];
        for (auto& a : A[i]) a = -a;
      }
    }

    // Tableau with artificial variables appended: columns [x | artificial].
    // Row layout: m constraint rows, then the phase objective row.
    std::vector<std::vector<Rat>> t(m + 1, std::vector<Rat>(n + m + 1, Rat(0)));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) t[i][j] = A[i][j];
      t[i][n + i] = 1;
      t[i][n + m] = b[i];
      basis[i] = n + i;
    }

    // Phase I: minimize the sum of artificials. With the artificial basis,
    // the reduced objective row is -(sum of constraint rows) on structural
    // columns and the rhs, zero on artificial columns.
    for (std::size_t j = 0; j <= n + m; ++j) {
      if (j >= n && j < n + m) { t[m][j] = 0; continue; }
      Rat s = 0;
      for (std::size_t i = 0; i < m; ++i) s += t[i][j];
      t[m][j] = -s;
    }
    runSimplex(t, basis, n + m);
    if (t[m][n + m] != 0) return {LpStatus::Infeasible, 0, {}};

    // Drive remaining artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n) continue;
      std::size_t enter = n + m;
      for (std::size_t j = 0; j < n; ++j) {
        if (t[i][j] != 0) { enter = j; break; }
      }
      if (enter < n) pivot(t, basis, i, enter);
      // Otherwise the row is all-zero on structural columns (redundant row);
      // the artificial stays basic at value zero, which is harmless.
    }

    // Phase II objective row.
    for (std::size_t j = 0; j <= n + m; ++j) t[m][j] = 0;
    for (std::size_t j = 0; j < n; ++j) t[m][j] = c[j];
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n && t[m][basis[i]] != 0) {
        const Rat f = t[m][basis[i]];
        for (std::size_t j = 0; j <= n + m; ++j) t[m][j] -= f * t[i][j];
      }
    }
    if (!runSimplex(t, basis, n + m, /*allowedCols=*/n))
      return {LpStatus::Unbounded, 0, {}};

    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.value = -t[m][n + m];
    sol.x.assign(n, Rat(0));
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) sol.x[basis[i]] = t[i][n + m];
    return sol;
  }

 private:
  static void pivot(std::vector<std::vector<Rat>>& t,
                    std::vector<std::size_t>& basis, std::size_t r,
                    std::size_t cidx) {
    const std::size_t cols = t[0].size();
    const Rat piv = t[r][cidx];
    for (std::size_t j = 0; j < cols; ++j) t[r][j] /= piv;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i == r || t[i][cidx] == 0) continue;
      const Rat f = t[i][cidx];
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = cidx;
  }

  // Returns false on unboundedness. allowedCols limits entering columns
  // (used in phase II to lock artificials out).
  static bool runSimplex(std::vector<std::vector<Rat>>& t,
                         std::vector<std::size_t>& basis,
                         std::size_t rhsCol,
                         std::size_t allowedCols = SIZE_MAX) {
    const std::size_t m = t.size() - 1;
    const std::size_t limit = std::min(rhsCol, allowedCols);
    for (;;) {
      // Bland: entering = smallest index with negative reduced cost.
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (t[m][j] < 0) { enter = j; break; }
      }
      if (enter == limit) return true;

      // Leaving: min ratio, ties by smallest basis index.
      std::size_t leave = m;
      Rat bestRatio = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] <= 0) continue;
        const Rat ratio = t[i][rhsCol] / t[i][enter];
        if (leave == m || ratio < bestRatio ||
            (ratio == bestRatio && basis[i] < basis[leave])) {
          leave = i;
          bestRatio = ratio;
        }
      }
      if (leave == m) return false;
      pivot(t, basis, leave, enter);
    }
  }
};

/// One inequality a.y <= b over free variables y.
struct IneqRow {
  RatVec coeffs;
  Rat rhs;
};

/// Maximize c.y over { y : rows hold }, y free. Returns Optimal/Infeasible/
/// Unbounded with an optimal y when it exists.
inline LpSolution maximizeOverPolyhedron(const std::vector<IneqRow>& rows,
                                         const RatVec& c) {
  const std::size_t n = c.size();
  const std::size_t m = rows.size();
  // Standard form: y = u - v, slack s per row; min (-c).(u - v).
  std::vector<std::vector<Rat>> A(m, std::vector<Rat>(2 * n + m, Rat(0)));
  std::vector<Rat> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].coeffs.size() != n) throw DimensionMismatch("maximizeOverPolyhedron");
    for (std::size_t j = 0; j < n; ++j) {
      A[i][j] = rows[i].coeffs[j];
      A[i][n + j] = -rows[i].coeffs[j];
    }
    A[i][2 * n + i] = 1;
    b[i] = rows[i].rhs;
  }
  std::vector<Rat> cost(2 * n + m, Rat(0));
  for (std::size_t j = 0; j < n; ++j) {
    cost[j] = -c[j];
    cost[n + j] = c[j];
  }
  LpSolution inner = Simplex::solveStandardForm(A, b, cost);
  LpSolution out;
  out.status = inner.status;
  if (inner.status == LpStatus::Optimal) {
    out.value = -inner.value;
    out.x.assign(n, Rat(0));
    for (std::size_t j = 0; j < n; ++j) out.x[j] = inner.x[j] - inner.x[n + j];
  }
  return out;
}

inline bool polyhedronFeasible(const std::vector<IneqRow>& rows, std::size_t n) {
  return maximizeOverPolyhedron(rows, RatVec(n, Rat(0))).status !=
         LpStatus::Infeasible;
}

}  // namespace dfd

#endif  // DFD_SIMPLEX_HPP
