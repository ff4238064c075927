#ifndef DFD_FIXTURES_HPP
#define DFD_FIXTURES_HPP

#include <map>
#include <utility>

#include "dfd/core.hpp"
#include "dfd/table_function.hpp"

namespace dfd::fixtures {

/// 3x3 integrally convex table on {-1,0,1}^2 used throughout the regression
/// suite (values 2,3,4 / 2,0,4 / 3,3,4).
inline TableFunction ex49() {
  std::map<LatticePoint, Int> e;
  e[{-1, 1}] = 2;  e[{0, 1}] = 3;   e[{1, 1}] = 4;
  e[{-1, 0}] = 2;  e[{0, 0}] = 0;   e[{1, 0}] = 4;
  e[{-1, -1}] = 3; e[{0, -1}] = 3;  e[{1, -1}] = 4;
  return TableFunction(2, std::move(e));
}

/// The box 2 <= p1, -4 <= p2 <= 4 paired with ex49 in the worked example.
inline IntegralBox ex49Box() {
  return IntegralBox({ExtInt(2), ExtInt(-4)},
                     {ExtInt::plusInfinity(), ExtInt(4)});
}

/// f(x) = (x1+x2+x3)/2 on D = {0, ±(1,1,0), ±(0,1,1), ±(1,0,1)}; not
/// integrally convex, subdifferential at the origin is {(1/2,1/2,1/2)}.
inline TableFunction r45() {
  std::map<LatticePoint, Int> e;
  e[{0, 0, 0}] = 0;
  e[{1, 1, 0}] = 1;  e[{-1, -1, 0}] = -1;
  e[{0, 1, 1}] = 1;  e[{0, -1, -1}] = -1;
  e[{1, 0, 1}] = 1;  e[{-1, 0, -1}] = -1;
  return TableFunction(3, std::move(e));
}

/// f(0,0,0)=0, f(1,1,0)=f(0,1,1)=f(1,0,1)=1; integrally convex with a
/// non-integral subdifferential vertex at the origin.
inline TableFunction r46() {
  std::map<LatticePoint, Int> e;
  e[{0, 0, 0}] = 0;
  e[{1, 1, 0}] = 1;
  e[{0, 1, 1}] = 1;
  e[{1, 0, 1}] = 1;
  return TableFunction(3, std::move(e));
}

/// f = 0 at the origin and 1 elsewhere on
/// D = { x in {-1,0,1}^3 : |x1|+|x2|+|x3| <= 2 }; the subdifferential at the
/// origin has 8 non-integral and 6 integral vertices.
inline TableFunction r47() {
  std::map<LatticePoint, Int> e;
  forEachPointInBox({-1, -1, -1}, {1, 1, 1}, [&](const LatticePoint& x) {
    Int a = abs(x[0]) + abs(x[1]) + abs(x[2]);
    if (a > 2) return;
    e[x] = a == 0 ? 0 : 1;
  });
  return TableFunction(3, std::move(e));
}

/// Counterexample pair f(x) = |x1+x2-1|, g(x) = 1 - |x1-x2|, tabulated on
/// [-R, R]^2. Gap chain (0, -1, -1, -1).
inline std::pair<TableFunction, TableFunction> e35(long R = 3) {
  std::map<LatticePoint, Int> ef, eg;
  forEachPointInBox({Int(-R), Int(-R)}, {Int(R), Int(R)},
                    [&](const LatticePoint& x) {
                      ef[x] = abs(x[0] + x[1] - 1);
                      eg[x] = 1 - abs(x[0] - x[1]);
                    });
  return {TableFunction(2, std::move(ef)), TableFunction(2, std::move(eg))};
}

/// Counterexample pair f(x) = max(0, x1+x2), g(x) = min(x1, x2), tabulated
/// on [-R, R]^2. Gap chain (0, 0, 0, -inf).
inline std::pair<TableFunction, TableFunction> e36(long R = 3) {
  std::map<LatticePoint, Int> ef, eg;
  forEachPointInBox({Int(-R), Int(-R)}, {Int(R), Int(R)},
                    [&](const LatticePoint& x) {
                      ef[x] = std::max(Int(0), x[0] + x[1]);
                      eg[x] = std::min(x[0], x[1]);
                    });
  return {TableFunction(2, std::move(ef)), TableFunction(2, std::move(eg))};
}

}  // namespace dfd::fixtures

#endif  // DFD_FIXTURES_HPP
