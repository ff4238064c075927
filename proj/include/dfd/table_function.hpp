#ifndef DFD_TABLE_FUNCTION_HPP
#define DFD_TABLE_FUNCTION_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dfd/core.hpp"

namespace dfd {

/// Integer-valued function on Z^n with finite effective domain, stored as a
/// point -> value map. Points outside the key set have value +inf.
class TableFunction {
 public:
  TableFunction(std::size_t dimension, std::map<LatticePoint, Int> entries)
      : dimension_(dimension), entries_(std::move(entries)) {
    if (entries_.empty()) throw Error("EmptyDomain", "TableFunction");
    for (const auto& [x, v] : entries_)
      if (x.size() != dimension_) throw DimensionMismatch("TableFunction key");
  }

  std::size_t dimension() const { return dimension_; }
  const std::map<LatticePoint, Int>& entries() const { return entries_; }
  std::size_t domainSize() const { return entries_.size(); }

  bool inDomain(const LatticePoint& x) const {
    return entries_.count(x) != 0;
  }

  ExtInt operator()(const LatticePoint& x) const {
    if (x.size() != dimension_) throw DimensionMismatch("TableFunction eval");
    auto it = entries_.find(x);
    if (it == entries_.end()) return ExtInt::plusInfinity();
    return ExtInt(it->second);
  }

  /// Value at an in-domain point (throws PointOutsideDomain otherwise).
  const Int& at(const LatticePoint& x) const {
    auto it = entries_.find(x);
    if (it == entries_.end()) throw PointOutsideDomain("TableFunction::at");
    return it->second;
  }

  std::vector<LatticePoint> domain() const {
    std::vector<LatticePoint> d;
    d.reserve(entries_.size());
    for (const auto& [x, v] : entries_) d.push_back(x);
    return d;
  }

  /// Coordinate-wise bounding box [lo, hi] of the effective domain.
  std::pair<LatticePoint, LatticePoint> boundingBox() const {
    LatticePoint lo = entries_.begin()->first, hi = lo;
    for (const auto& [x, v] : entries_) {
      for (std::size_t j = 0; j < dimension_; ++j) {
        lo[j] = std::min(lo[j], x[j]);
        hi[j] = std::max(hi[j], x[j]);
      }
    }
    return {lo, hi};
  }

  /// Pointwise sum on the intersection of the effective domains.
  TableFunction operator+(const TableFunction& o) const {
    if (o.dimension_ != dimension_) throw DimensionMismatch("TableFunction +");
    std::map<LatticePoint, Int> sum;
    for (const auto& [x, v] : entries_) {
      auto it = o.entries_.find(x);
      if (it != o.entries_.end()) sum.emplace(x, v + it->second);
    }
    if (sum.empty()) throw EmptyIntersection("sum of tables");
    return TableFunction(dimension_, std::move(sum));
  }

  /// max over x in dom f of <p,x> - f(x); finite since the domain is finite.
  Int conjugate(const LatticePoint& p) const {
    if (p.size() != dimension_) throw DimensionMismatch("conjugate");
    bool first = true;
    Int best = 0;
    for (const auto& [x, v] : entries_) {
      Int cand = dot(p, x) - v;
      if (first || cand > best) { best = cand; first = false; }
    }
    return best;
  }

  Rat conjugate(const RatVec& p) const {
    if (p.size() != dimension_) throw DimensionMismatch("conjugate");
    bool first = true;
    Rat best = 0;
    for (const auto& [x, v] : entries_) {
      Rat cand = dot(p, x) - Rat(v);
      if (first || cand > best) { best = cand; first = false; }
    }
    return best;
  }

  /// Concave conjugate of the table read as a concave function (finite values
  /// on the key set, -inf outside): min over dom of <p,x> - g(x).
  Int concaveConjugate(const LatticePoint& p) const {
    bool first = true;
    Int best = 0;
    for (const auto& [x, v] : entries_) {
      Int cand = dot(p, x) - v;
      if (first || cand < best) { best = cand; first = false; }
    }
    return best;
  }

 private:
  std::size_t dimension_;
  std::map<LatticePoint, Int> entries_;
};

/// Odometer over the integer box [lo, hi]; visits points in lexicographic
/// order. Calls fn(point) for each.
template <class Fn>
void forEachPointInBox(const LatticePoint& lo, const LatticePoint& hi, Fn&& fn) {
  const std::size_t n = lo.size();
  if (hi.size() != n) throw DimensionMismatch("forEachPointInBox");
  if (n == 0) return;
  for (std::size_t j = 0; j < n; ++j)
    if (hi[j] < lo[j]) return;
  LatticePoint x = lo;
  for (;;) {
    fn(const_cast<const LatticePoint&>(x));
    std::size_t j = n;
    for (;;) {
      if (j == 0) return;
      --j;
      if (x[j] < hi[j]) { ++x[j]; break; }
      x[j] = lo[j];
    }
  }
}

/// All displacements d in {-1,0,+1}^n, zero included, lexicographic.
inline std::vector<LatticePoint> allDisplacements(std::size_t n) {
  std::vector<LatticePoint> out;
  LatticePoint lo(n, Int(-1)), hi(n, Int(1));
  forEachPointInBox(lo, hi, [&](const LatticePoint& d) { out.push_back(d); });
  return out;
}

struct BiconjugacyResult {
  bool holds = false;
  std::optional<LatticePoint> violating;  // first x in dom f with f**(x) != f(x)
  Int biconjugateValue = 0;               // f**(x) at that point
};

/// Checks f** = f on dom f by two nested exact maximizations. The dual
/// variable p ranges over the slope box [-R, R]^n with R the maximum
/// pairwise value difference of f; supports outside that Lipschitz range
/// are never tight, so the enumeration is exhaustive.
inline BiconjugacyResult biconjugateCheck(const TableFunction& f,
                                          bool strict = false) {
  Int radius = 0;
  const Int base = f.entries().begin()->second;
  Int lo = base, hi = base;
  for (const auto& [x, v] : f.entries()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  radius = hi - lo;

  const std::size_t n = f.dimension();
  LatticePoint plo(n, -radius), phi(n, radius);
  std::vector<std::pair<LatticePoint, Int>> conj;
  forEachPointInBox(plo, phi, [&](const LatticePoint& p) {
    conj.emplace_back(p, f.conjugate(p));
  });

  BiconjugacyResult res;
  for (const auto& [x, v] : f.entries()) {
    bool first = true;
    Int best = 0;
    for (const auto& [p, fstar] : conj) {
      Int cand = dot(p, x) - fstar;
      if (first || cand > best) { best = cand; first = false; }
    }
    if (best != v) {
      res.holds = false;
      res.violating = x;
      res.biconjugateValue = best;
      if (strict)
        throw NotIntegrallyConvex("biconjugacy fails at a domain point");
      return res;
    }
  }
  res.holds = true;
  return res;
}

}  // namespace dfd

#endif  // DFD_TABLE_FUNCTION_HPP
