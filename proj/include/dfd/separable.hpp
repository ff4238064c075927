#ifndef DFD_SEPARABLE_HPP
#define DFD_SEPARABLE_HPP

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "dfd/core.hpp"
#include "dfd/table_function.hpp"

namespace dfd {

enum class Orientation { Convex, Concave };

enum class PieceShape { Breakpoints, AbsForm, QuadForm, LinearForm, KinkForm };

/// One univariate discrete convex or concave piece. Closed-form shapes
/// (abs/quad/linear/kink) live on all of Z unless the domain restricts them;
/// breakpoint pieces carry explicit values on a finite integer interval.
///
/// Evaluated value by shape, under convex orientation:
///   abs:    alpha * |k - k0|                 (alpha >= 0)
///   quad:   beta * (k - k0)^2                (beta >= 1)
///   linear: slope * k
///   kink:   sLeft*(k-k0) for k <= k0, sRight*(k-k0) for k >= k0
///           (sLeft <= sRight)
/// Concave orientation negates abs/quad and swaps the kink slope condition
/// (sLeft >= sRight); linear and breakpoints are stored as-is.
class UnivariatePiece {
 public:
  static UnivariatePiece absForm(Int alpha, Int k0) {
    if (alpha < 0) throw InvalidPiece("abs_form needs alpha >= 0");
    UnivariatePiece p(PieceShape::AbsForm);
    p.a_ = std::move(alpha);
    p.k0_ = std::move(k0);
    return p;
  }

  static UnivariatePiece quadForm(Int beta, Int k0) {
    if (beta < 1) throw InvalidPiece("quad_form needs beta >= 1");
    UnivariatePiece p(PieceShape::QuadForm);
    p.a_ = std::move(beta);
    p.k0_ = std::move(k0);
    return p;
  }

  static UnivariatePiece linearForm(Int slope) {
    UnivariatePiece p(PieceShape::LinearForm);
    p.a_ = std::move(slope);
    return p;
  }

  static UnivariatePiece kinkForm(Int slopeLeft, Int slopeRight, Int k0) {
    UnivariatePiece p(PieceShape::KinkForm);
    p.a_ = std::move(slopeLeft);
    p.b_ = std::move(slopeRight);
    p.k0_ = std::move(k0);
    return p;
  }

  static UnivariatePiece breakpoints(std::map<Int, Int> values) {
    if (values.empty()) throw InvalidPiece("breakpoints needs a nonempty table");
    UnivariatePiece p(PieceShape::Breakpoints);
    p.lo_ = ExtInt(values.begin()->first);
    p.hi_ = ExtInt(values.rbegin()->first);
    Int expect = values.begin()->first;
    for (const auto& [k, v] : values) {
      if (k != expect) throw InvalidPiece("breakpoint domain must be contiguous");
      ++expect;
    }
    p.table_ = std::move(values);
    return p;
  }

  UnivariatePiece withDomain(ExtInt lo, ExtInt hi) const {
    if (shape_ == PieceShape::Breakpoints)
      throw InvalidPiece("breakpoint domain is fixed by its table");
    if (hi < lo) throw InvalidPiece("empty domain");
    UnivariatePiece p = *this;
    p.lo_ = std::move(lo);
    p.hi_ = std::move(hi);
    return p;
  }

  PieceShape shape() const { return shape_; }
  const ExtInt& domainLower() const { return lo_; }
  const ExtInt& domainUpper() const { return hi_; }
  bool hasFiniteDomain() const { return lo_.isFinite() && hi_.isFinite(); }
  const std::map<Int, Int>& table() const { return table_; }
  const Int& paramA() const { return a_; }
  const Int& paramB() const { return b_; }
  const Int& kinkPoint() const { return k0_; }

  bool inDomain(const Int& k) const {
    return ExtInt(k) >= lo_ && ExtInt(k) <= hi_;
  }

  /// Value under the given orientation; +inf (convex) or -inf (concave)
  /// outside the domain.
  ExtInt evaluate(const Int& k, Orientation orient) const {
    if (!inDomain(k))
      return orient == Orientation::Convex ? ExtInt::plusInfinity()
                                           : ExtInt::minusInfinity();
    return ExtInt(finiteValue(k, orient));
  }

  Int finiteValue(const Int& k, Orientation orient) const {
    const bool concave = orient == Orientation::Concave;
    switch (shape_) {
      case PieceShape::AbsForm: {
        Int v = a_ * abs(k - k0_);
        return concave ? Int(-v) : v;
      }
      case PieceShape::QuadForm: {
        Int v = a_ * (k - k0_) * (k - k0_);
        return concave ? Int(-v) : v;
      }
      case PieceShape::LinearForm:
        return a_ * k;
      case PieceShape::KinkForm:
        return (k <= k0_ ? a_ : b_) * (k - k0_);
      case PieceShape::Breakpoints:
        return table_.at(k);
    }
    throw Error("Unreachable", "finiteValue");
  }

  /// Checks the discrete convexity/concavity inequality at every interior
  /// point of a finite domain; closed forms are validated via parameters.
  bool respectsOrientation(Orientation orient) const {
    const bool concave = orient == Orientation::Concave;
    switch (shape_) {
      case PieceShape::AbsForm:
      case PieceShape::QuadForm:
      case PieceShape::LinearForm:
        return true;  // parameter constraints already enforce shape
      case PieceShape::KinkForm:
        return concave ? a_ >= b_ : a_ <= b_;
      case PieceShape::Breakpoints: {
        for (auto it = table_.begin(); it != table_.end(); ++it) {
          auto next = std::next(it);
          if (next == table_.end()) break;
          auto next2 = std::next(next);
          if (next2 == table_.end()) break;
          const Int mid2 = 2 * next->second;
          const Int ends = it->second + next2->second;
          if (concave ? ends > mid2 : ends < mid2) return false;
        }
        return true;
      }
    }
    return false;
  }

 private:
  explicit UnivariatePiece(PieceShape s)
      : shape_(s), lo_(ExtInt::minusInfinity()), hi_(ExtInt::plusInfinity()) {}

  PieceShape shape_;
  ExtInt lo_, hi_;
  Int a_ = 0, b_ = 0, k0_ = 0;     // shape parameters
  std::map<Int, Int> table_;       // breakpoints only
};

/// Separable function Phi(x) = sum_i phi_i(x_i), all pieces sharing one
/// orientation.
class SeparableFunction {
 public:
  SeparableFunction(Orientation orient, std::vector<UnivariatePiece> pieces)
      : orient_(orient), pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw DimensionMismatch("SeparableFunction");
    for (const auto& p : pieces_) {
      if (!p.respectsOrientation(orient_))
        throw InvalidPiece("piece violates the declared orientation");
      if (!p.hasFiniteDomain() && p.shape() == PieceShape::Breakpoints)
        throw InvalidPiece("breakpoint piece with infinite domain");
      const bool semiInfinite = p.domainLower().isFinite() !=
                                p.domainUpper().isFinite();
      if (semiInfinite)
        throw InvalidPiece("semi-infinite piece domains are not supported");
    }
  }

  std::size_t dimension() const { return pieces_.size(); }
  Orientation orientation() const { return orient_; }
  const UnivariatePiece& piece(std::size_t i) const { return pieces_.at(i); }

  ExtInt operator()(const LatticePoint& x) const {
    if (x.size() != pieces_.size()) throw DimensionMismatch("Separable eval");
    Int sum = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      ExtInt v = pieces_[i].evaluate(x[i], orient_);
      if (!v.isFinite()) return v;
      sum += v.value();
    }
    return ExtInt(sum);
  }

  bool inDomain(const LatticePoint& x) const { return (*this)(x).isFinite(); }

  SeparableFunction negated() const {
    std::vector<UnivariatePiece> neg;
    neg.reserve(pieces_.size());
    const Orientation flipped = orient_ == Orientation::Convex
                                    ? Orientation::Concave
                                    : Orientation::Convex;
    for (const auto& p : pieces_) {
      switch (p.shape()) {
        case PieceShape::AbsForm:
        case PieceShape::QuadForm:
          neg.push_back(p);  // sign is carried by the orientation
          break;
        case PieceShape::LinearForm:
          neg.push_back(UnivariatePiece::linearForm(-p.paramA())
                            .withDomain(p.domainLower(), p.domainUpper()));
          break;
        case PieceShape::KinkForm:
          neg.push_back(UnivariatePiece::kinkForm(-p.paramA(), -p.paramB(),
                                                  p.kinkPoint())
                            .withDomain(p.domainLower(), p.domainUpper()));
          break;
        case PieceShape::Breakpoints: {
          std::map<Int, Int> t;
          for (const auto& [k, v] : p.table()) t.emplace(k, -v);
          neg.push_back(UnivariatePiece::breakpoints(std::move(t)));
          break;
        }
      }
    }
    return SeparableFunction(flipped, std::move(neg));
  }

  /// Tabulates the function on an integer box (intersected with the domain).
  TableFunction tabulate(const LatticePoint& lo, const LatticePoint& hi) const {
    std::map<LatticePoint, Int> entries;
    forEachPointInBox(lo, hi, [&](const LatticePoint& x) {
      ExtInt v = (*this)(x);
      if (v.isFinite()) entries.emplace(x, v.value());
    });
    return TableFunction(dimension(), std::move(entries));
  }

 private:
  Orientation orient_;
  std::vector<UnivariatePiece> pieces_;
};

// ---------------------------------------------------------------------------
// Univariate conjugates
// ---------------------------------------------------------------------------

/// Convex conjugate of one convex piece: max over k of k*l - phi(k).
/// Closed forms are used on all-of-Z domains; finite domains go by scan.
inline ExtInt univariateConvexConjugate(const UnivariatePiece& p, const Int& l) {
  if (p.hasFiniteDomain()) {
    const Int lo = p.domainLower().value(), hi = p.domainUpper().value();
    Int best = lo * l - p.finiteValue(lo, Orientation::Convex);
    for (Int k = lo + 1; k <= hi; ++k)
      best = std::max(best, Int(k * l - p.finiteValue(k, Orientation::Convex)));
    return ExtInt(best);
  }
  switch (p.shape()) {
    case PieceShape::AbsForm:
      if (abs(l) <= p.paramA()) return ExtInt(p.kinkPoint() * l);
      return ExtInt::plusInfinity();
    case PieceShape::QuadForm: {
      const Int& beta = p.paramA();
      const Int q = floorDiv(l + beta, 2 * beta);
      return ExtInt(p.kinkPoint() * l + q * (l - beta * q));
    }
    case PieceShape::LinearForm:
      return l == p.paramA() ? ExtInt(Int(0)) : ExtInt::plusInfinity();
    case PieceShape::KinkForm:
      if (p.paramA() <= l && l <= p.paramB()) return ExtInt(p.kinkPoint() * l);
      return ExtInt::plusInfinity();
    case PieceShape::Breakpoints:
      break;
  }
  throw InvalidPiece("conjugate of an unbounded breakpoint piece");
}

/// Concave conjugate of one concave piece: min over k of k*l - psi(k).
/// For psi(k) = -phi(k) this equals -phi*(-l), which the closed forms use.
inline ExtInt univariateConcaveConjugate(const UnivariatePiece& p, const Int& l) {
  if (p.hasFiniteDomain()) {
    const Int lo = p.domainLower().value(), hi = p.domainUpper().value();
    Int best = lo * l - p.finiteValue(lo, Orientation::Concave);
    for (Int k = lo + 1; k <= hi; ++k)
      best = std::min(best, Int(k * l - p.finiteValue(k, Orientation::Concave)));
    return ExtInt(best);
  }
  switch (p.shape()) {
    case PieceShape::AbsForm:
    case PieceShape::QuadForm: {
      ExtInt v = univariateConvexConjugate(p, -l);
      return -v;
    }
    case PieceShape::LinearForm:
      return l == p.paramA() ? ExtInt(Int(0)) : ExtInt::minusInfinity();
    case PieceShape::KinkForm:
      // Concave kink: left slope a >= right slope b; finite on [b, a].
      if (p.paramB() <= l && l <= p.paramA()) return ExtInt(p.kinkPoint() * l);
      return ExtInt::minusInfinity();
    case PieceShape::Breakpoints:
      break;
  }
  throw InvalidPiece("conjugate of an unbounded breakpoint piece");
}

/// Psi°(p) = sum_i psi_i°(p_i); -inf as soon as one coordinate is -inf.
inline ExtInt concaveConjugateSeparable(const SeparableFunction& psi,
                                        const LatticePoint& p) {
  if (psi.orientation() != Orientation::Concave)
    throw InvalidPiece("concaveConjugateSeparable needs a concave function");
  if (p.size() != psi.dimension()) throw DimensionMismatch("Psi conjugate");
  Int sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ExtInt v = univariateConcaveConjugate(psi.piece(i), p[i]);
    if (!v.isFinite()) return ExtInt::minusInfinity();
    sum += v.value();
  }
  return ExtInt(sum);
}

/// Phi*(p) for convex separable Phi; +inf as soon as one coordinate is +inf.
inline ExtInt convexConjugateSeparable(const SeparableFunction& phi,
                                       const LatticePoint& p) {
  if (phi.orientation() != Orientation::Convex)
    throw InvalidPiece("convexConjugateSeparable needs a convex function");
  if (p.size() != phi.dimension()) throw DimensionMismatch("Phi conjugate");
  Int sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ExtInt v = univariateConvexConjugate(phi.piece(i), p[i]);
    if (!v.isFinite()) return ExtInt::plusInfinity();
    sum += v.value();
  }
  return ExtInt(sum);
}

// ---------------------------------------------------------------------------
// Subdifferential box of a separable convex function
// ---------------------------------------------------------------------------

/// Returns B = -subdiff Phi(x) as an integral box: per coordinate
///   lower = -(phi_j(x_j+1) - phi_j(x_j))   (-inf at the right endpoint),
///   upper = -(phi_j(x_j) - phi_j(x_j-1))   (+inf at the left endpoint).
inline IntegralBox subdifferentialBoxOfSeparable(const SeparableFunction& phi,
                                                 const LatticePoint& x) {
  if (phi.orientation() != Orientation::Convex)
    throw InvalidPiece("subdifferentialBoxOfSeparable needs convex Phi");
  if (x.size() != phi.dimension()) throw DimensionMismatch("subdiff box");
  if (!phi.inDomain(x)) throw PointOutsideDomain("subdifferentialBoxOfSeparable");

  std::vector<ExtInt> lo(x.size()), hi(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const UnivariatePiece& pc = phi.piece(j);
    const Int here = pc.finiteValue(x[j], Orientation::Convex);
    if (pc.inDomain(x[j] + 1)) {
      lo[j] = ExtInt(-(pc.finiteValue(x[j] + 1, Orientation::Convex) - here));
    } else {
      lo[j] = ExtInt::minusInfinity();
    }
    if (pc.inDomain(x[j] - 1)) {
      hi[j] = ExtInt(-(here - pc.finiteValue(x[j] - 1, Orientation::Convex)));
    } else {
      hi[j] = ExtInt::plusInfinity();
    }
  }
  return IntegralBox(std::move(lo), std::move(hi));
}

}  // namespace dfd

#endif  // DFD_SEPARABLE_HPP
