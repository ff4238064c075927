#ifndef DFD_CORE_HPP
#define DFD_CORE_HPP

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dfd {

// Exact arbitrary-precision scalars. Everything downstream is built on these;
// no floating point anywhere. Expression templates are off so that abs(),
// sums etc. yield plain values.
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define DFD_DEFINE_ERROR(Name)                                 \
  class Name : public Error {                                  \
   public:                                                     \
    explicit Name(const std::string& what = "")                \
        : Error(#Name, what) {}                                \
  }

DFD_DEFINE_ERROR(OppositeInfinities);
DFD_DEFINE_ERROR(DimensionMismatch);
DFD_DEFINE_ERROR(PointOutsideDomain);
DFD_DEFINE_ERROR(NotIntegrallyConvex);
DFD_DEFINE_ERROR(EmptyIntersection);
DFD_DEFINE_ERROR(InternalInfeasible);
DFD_DEFINE_ERROR(UnboundedRegion);
DFD_DEFINE_ERROR(InfeasiblePrecondition);
DFD_DEFINE_ERROR(UnboundedEnumeration);
DFD_DEFINE_ERROR(BoxTooSmall);
DFD_DEFINE_ERROR(UnsupportedDimension);
DFD_DEFINE_ERROR(ParseError);
DFD_DEFINE_ERROR(InvalidPiece);

#undef DFD_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Integer helpers
// ---------------------------------------------------------------------------

// Floor division for exact integers (rounds toward -inf, unlike operator/).
inline Int floorDiv(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int ceilDiv(const Int& a, const Int& b) { return -floorDiv(-a, b); }

inline Int floorRat(const Rat& r) {
  return floorDiv(boost::multiprecision::numerator(r),
                  boost::multiprecision::denominator(r));
}

inline Int ceilRat(const Rat& r) {
  return ceilDiv(boost::multiprecision::numerator(r),
                 boost::multiprecision::denominator(r));
}

inline bool isIntegral(const Rat& r) {
  return boost::multiprecision::denominator(r) == 1;
}

// ---------------------------------------------------------------------------
// Extended scalars (value or one of the two infinities)
// ---------------------------------------------------------------------------

/// A scalar extended with -inf and +inf. Total order: -inf < finite < +inf.
/// Addition of opposite infinities is a reported error, never a value.
template <class T>
class Extended {
 public:
  Extended() : state_(State::Finite), value_(0) {}
  Extended(T v) : state_(State::Finite), value_(std::move(v)) {}  // NOLINT
  Extended(int v) : state_(State::Finite), value_(v) {}           // NOLINT

  static Extended minusInfinity() { return Extended(State::MinusInf); }
  static Extended plusInfinity() { return Extended(State::PlusInf); }

  bool isFinite() const { return state_ == State::Finite; }
  bool isMinusInfinity() const { return state_ == State::MinusInf; }
  bool isPlusInfinity() const { return state_ == State::PlusInf; }

  const T& value() const {
    if (!isFinite()) throw Error("NotFinite", "value() on an infinite element");
    return value_;
  }

  Extended operator-() const {
    switch (state_) {
      case State::MinusInf: return plusInfinity();
      case State::PlusInf: return minusInfinity();
      default: return Extended(-value_);
    }
  }

  Extended operator+(const Extended& o) const {
    if (isFinite() && o.isFinite()) return Extended(value_ + o.value_);
    if ((isPlusInfinity() && o.isMinusInfinity()) ||
        (isMinusInfinity() && o.isPlusInfinity()))
      throw OppositeInfinities("+inf + -inf");
    return isFinite() ? o : *this;
  }

  Extended operator-(const Extended& o) const { return *this + (-o); }

  friend bool operator==(const Extended& a, const Extended& b) {
    if (a.state_ != b.state_) return false;
    return !a.isFinite() || a.value_ == b.value_;
  }

  friend bool operator<(const Extended& a, const Extended& b) {
    if (a.state_ == State::MinusInf) return b.state_ != State::MinusInf;
    if (a.state_ == State::PlusInf) return false;
    if (b.state_ == State::PlusInf) return true;
    if (b.state_ == State::MinusInf) return false;
    return a.value_ < b.value_;
  }
  friend bool operator!=(const Extended& a, const Extended& b) { return !(a == b); }
  friend bool operator>(const Extended& a, const Extended& b) { return b < a; }
  friend bool operator<=(const Extended& a, const Extended& b) { return !(b < a); }
  friend bool operator>=(const Extended& a, const Extended& b) { return !(a < b); }

  friend Extended min(const Extended& a, const Extended& b) { return a < b ? a : b; }
  friend Extended max(const Extended& a, const Extended& b) { return a < b ? b : a; }

  std::string str() const {
    if (isMinusInfinity()) return "-inf";
    if (isPlusInfinity()) return "+inf";
    return value_.str();
  }

 private:
  enum class State { Finite, MinusInf, PlusInf };
  explicit Extended(State s) : state_(s), value_(0) {}
  State state_;
  T value_;
};

using ExtInt = Extended<Int>;
using ExtRat = Extended<Rat>;

inline ExtRat toExtRat(const ExtInt& e) {
  if (e.isMinusInfinity()) return ExtRat::minusInfinity();
  if (e.isPlusInfinity()) return ExtRat::plusInfinity();
  return ExtRat(Rat(e.value()));
}

// ---------------------------------------------------------------------------
// Lattice points and rational vectors
// ---------------------------------------------------------------------------

using LatticePoint = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline Int dot(const LatticePoint& p, const LatticePoint& x) {
  if (p.size() != x.size()) throw DimensionMismatch("dot");
  Int s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * x[i];
  return s;
}

inline Rat dot(const RatVec& p, const LatticePoint& x) {
  if (p.size() != x.size()) throw DimensionMismatch("dot");
  Rat s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * Rat(x[i]);
  return s;
}

inline Rat dot(const RatVec& p, const RatVec& x) {
  if (p.size() != x.size()) throw DimensionMismatch("dot");
  Rat s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * x[i];
  return s;
}

inline LatticePoint add(const LatticePoint& a, const LatticePoint& b) {
  if (a.size() != b.size()) throw DimensionMismatch("add");
  LatticePoint r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline LatticePoint sub(const LatticePoint& a, const LatticePoint& b) {
  if (a.size() != b.size()) throw DimensionMismatch("sub");
  LatticePoint r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Int linfNorm(const LatticePoint& a) {
  Int m = 0;
  for (const Int& c : a) m = std::max(m, abs(c));
  return m;
}

inline RatVec toRatVec(const LatticePoint& x) {
  RatVec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = Rat(x[i]);
  return r;
}

inline RatVec midpoint(const LatticePoint& a, const LatticePoint& b) {
  if (a.size() != b.size()) throw DimensionMismatch("midpoint");
  RatVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = Rat(a[i] + b[i]) / 2;
  return r;
}

inline bool isIntegral(const RatVec& z) {
  for (const Rat& c : z)
    if (!isIntegral(c)) return false;
  return true;
}

inline LatticePoint toLatticePoint(const RatVec& z) {
  LatticePoint r(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!isIntegral(z[i])) throw Error("NotIntegral", "toLatticePoint");
    r[i] = boost::multiprecision::numerator(z[i]);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Integral boxes
// ---------------------------------------------------------------------------

/// Coordinate-wise interval [alpha, beta] with integer (possibly infinite)
/// endpoints. Invariant: alpha_j <= beta_j, alpha_j != +inf, beta_j != -inf.
class IntegralBox {
 public:
  IntegralBox() = default;
  IntegralBox(std::vector<ExtInt> lower, std::vector<ExtInt> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size()) throw DimensionMismatch("IntegralBox");
    for (std::size_t j = 0; j < lower_.size(); ++j) {
      if (lower_[j].isPlusInfinity() || upper_[j].isMinusInfinity() ||
          upper_[j] < lower_[j])
        throw Error("InvalidBox", "bound " + std::to_string(j));
    }
  }

  /// The all-of-R^n box.
  static IntegralBox trivial(std::size_t n) {
    return IntegralBox(std::vector<ExtInt>(n, ExtInt::minusInfinity()),
                       std::vector<ExtInt>(n, ExtInt::plusInfinity()));
  }

  std::size_t dimension() const { return lower_.size(); }
  const ExtInt& lower(std::size_t j) const { return lower_.at(j); }
  const ExtInt& upper(std::size_t j) const { return upper_.at(j); }
  const std::vector<ExtInt>& lower() const { return lower_; }
  const std::vector<ExtInt>& upper() const { return upper_; }

  bool contains(const RatVec& p) const {
    if (p.size() != dimension()) throw DimensionMismatch("boxContains");
    for (std::size_t j = 0; j < p.size(); ++j) {
      const ExtRat v(p[j]);
      if (v < toExtRat(lower_[j]) || toExtRat(upper_[j]) < v) return false;
    }
    return true;
  }

  bool contains(const LatticePoint& p) const { return contains(toRatVec(p)); }

  bool isBoundedBelow(std::size_t j) const { return lower_[j].isFinite(); }
  bool isBoundedAbove(std::size_t j) const { return upper_[j].isFinite(); }

 private:
  std::vector<ExtInt> lower_, upper_;
};

}  // namespace dfd

#endif  // DFD_CORE_HPP
