#include <catch2/catch_amalgamated.hpp>

#include "dfd/core.hpp"
#include "dfd/generators.hpp"

using namespace dfd;

TEST_CASE("extended integer arithmetic") {
  CHECK(ExtInt(2) + ExtInt(3) == ExtInt(5));
  CHECK(ExtInt::plusInfinity() + ExtInt(-7) == ExtInt::plusInfinity());
  CHECK(ExtInt::minusInfinity() + ExtInt(100) == ExtInt::minusInfinity());
  CHECK_THROWS_AS(ExtInt::plusInfinity() + ExtInt::minusInfinity(),
                  OppositeInfinities);
  CHECK_THROWS_AS(ExtInt::minusInfinity() + ExtInt::plusInfinity(),
                  OppositeInfinities);
  CHECK(-ExtInt::plusInfinity() == ExtInt::minusInfinity());
  CHECK(ExtInt::plusInfinity() - ExtInt(5) == ExtInt::plusInfinity());
}

TEST_CASE("extended order is total and transitive on a finite sample") {
  std::vector<ExtInt> sample = {ExtInt::minusInfinity(), ExtInt(-3), ExtInt(0),
                                ExtInt(7), ExtInt::plusInfinity()};
  Rng rng(42);
  for (int i = 0; i < 20; ++i)
    sample.push_back(ExtInt(rng.uniformInt(-50, 50)));

  for (const auto& a : sample) {
    for (const auto& b : sample) {
      // totality: exactly one of <, ==, > holds
      int holds = (a < b) + (a == b) + (b < a);
      CHECK(holds == 1);
      for (const auto& c : sample) {
        if (a < b && b < c) CHECK(a < c);
        if (a <= b && b <= c) CHECK(a <= c);
      }
    }
  }
  CHECK(ExtInt::minusInfinity() < ExtInt(-1000000));
  CHECK(ExtInt(1000000) < ExtInt::plusInfinity());
}

TEST_CASE("rational arithmetic is exact") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Rat a(rng.uniformInt(-99, 99), rng.uniformInt(1, 40));
    Rat b(rng.uniformInt(-99, 99), rng.uniformInt(1, 40));
    Rat c(rng.uniformInt(-99, 99), rng.uniformInt(1, 40));
    // two association orders agree bit-for-bit
    CHECK((a + b) + c == a + (b + c));
    CHECK((a + b) * c == a * c + b * c);
  }
  // stored in lowest terms with positive denominator
  Rat r = Rat(-4) / Rat(-6);
  CHECK(boost::multiprecision::numerator(r) == 2);
  CHECK(boost::multiprecision::denominator(r) == 3);
  Rat s = Rat(4) / Rat(-6);
  CHECK(boost::multiprecision::numerator(s) == -2);
  CHECK(boost::multiprecision::denominator(s) == 3);
}

TEST_CASE("floor and ceiling division") {
  CHECK(floorDiv(7, 2) == 3);
  CHECK(floorDiv(-7, 2) == -4);
  CHECK(floorDiv(-6, 2) == -3);
  CHECK(ceilDiv(7, 2) == 4);
  CHECK(ceilDiv(-7, 2) == -3);
  CHECK(floorRat(Rat(-3, 2)) == -2);
  CHECK(ceilRat(Rat(-3, 2)) == -1);
  CHECK(floorRat(Rat(4)) == 4);
}

TEST_CASE("box membership") {
  // the worked example's box: 2 <= p1, -4 <= p2 <= 4
  IntegralBox B({ExtInt(2), ExtInt(-4)}, {ExtInt::plusInfinity(), ExtInt(4)});
  CHECK(B.contains(RatVec{Rat(2), Rat(0)}));
  CHECK_FALSE(B.contains(RatVec{Rat(3, 2), Rat(0)}));
  CHECK(B.contains(RatVec{Rat(1000), Rat(4)}));
  CHECK_FALSE(B.contains(RatVec{Rat(2), Rat(5)}));

  IntegralBox all = IntegralBox::trivial(3);
  CHECK(all.contains(RatVec{Rat(-999), Rat(0), Rat(12345)}));

  CHECK_THROWS_AS(B.contains(RatVec{Rat(0)}), DimensionMismatch);
  // invalid bounds are rejected at construction
  CHECK_THROWS(IntegralBox({ExtInt(3)}, {ExtInt(2)}));
  CHECK_THROWS(IntegralBox({ExtInt::plusInfinity()}, {ExtInt::plusInfinity()}));
}
