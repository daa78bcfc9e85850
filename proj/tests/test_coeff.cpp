#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "robba/coeff.hpp"

using namespace robba;

namespace {

mpz_class pow_int(int p, int e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  return r;
}

// a == b mod p^n for integers, the reference for p-adic ring arithmetic.
bool same_mod(const mpz_class& a, const mpz_class& b, int p, int n) {
  mpz_class d = a - b;
  mpz_class m = pow_int(p, n);
  return d % m == 0;
}

}  // namespace

TEST_CASE("rationals are stored canonically") {
  const Rational q = make_rational(6, -4);
  CHECK(q.get_num() == -3);
  CHECK(q.get_den() == 2);
  CHECK(make_rational(0, 7).get_den() == 1);
  CHECK_THROWS_AS(make_rational(1, 0), Error);
}

TEST_CASE("padic_normalize examples") {
  const PAdic a = padic_normalize(12, 1, 2, 6);
  CHECK(a.valuation() == 2);
  CHECK(a.unit() == 3);
  CHECK(a.abs_prec() == 6);

  const PAdic b = padic_normalize(1, 3, 2, 4);
  CHECK(b.valuation() == 0);
  CHECK(b.unit() == 11);
  CHECK(b.abs_prec() == 4);

  const PAdic z = padic_normalize(0, 5, 5, 8);
  CHECK(z.is_zero());
  CHECK(z.valuation() == PAdic::kInfinite);
  CHECK(z.abs_prec() == 8);
}

TEST_CASE("padic_normalize rejects bad input") {
  CHECK_THROWS_AS(padic_normalize(1, 0, 5, 4), Error);
  CHECK_THROWS_AS(padic_normalize(1, 1, 4, 4), Error);
  CHECK_THROWS_AS(padic_normalize(1, 1, 5, 0), Error);
}

TEST_CASE("negative valuations keep the absolute precision") {
  const PAdic x = padic_normalize(1, 4, 2, 6);
  CHECK(x.valuation() == -2);
  CHECK(x.unit() == 1);
  CHECK(x.rel_prec() == 8);
  CHECK(x.to_rational() == make_rational(1, 4));
}

TEST_CASE("reduce_mod_p examples") {
  CHECK(reduce_mod_p(padic_normalize(3, 1, 2, 6)) == ResidueElement{2, 1});
  CHECK(reduce_mod_p(padic_normalize(10, 1, 5, 6)) == ResidueElement{5, 0});
  CHECK(reduce_mod_p(padic_normalize(1, 2, 3, 6)) == ResidueElement{3, 2});
  CHECK(reduce_mod_p(PAdic::zero(7, 3)) == ResidueElement{7, 0});
}

TEST_CASE("reduce_mod_p of a non-integral value") {
  try {
    reduce_mod_p(padic_normalize(1, 5, 5, 4));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotIntegral);
  }
}

TEST_CASE("lift_from_residue examples") {
  const PAdic one = lift_from_residue({2, 1}, 8);
  CHECK(one.valuation() == 0);
  CHECK(one.unit() == 1);
  CHECK(one.abs_prec() == 8);
  const PAdic z = lift_from_residue({5, 0}, 4);
  CHECK(z.is_zero());
  CHECK(z.abs_prec() == 4);
  const PAdic two = lift_from_residue({3, 2}, 6);
  CHECK(two.valuation() == 0);
  CHECK(two.unit() == 2);
}

TEST_CASE("reduce after lift is the identity") {
  for (int p : {2, 3, 5, 7, 11}) {
    for (int v = 0; v < p; ++v) CHECK(reduce_mod_p(lift_from_residue({p, v}, 3)) == ResidueElement{p, v});
  }
}

TEST_CASE("precision propagation") {
  const PAdic a = padic_normalize(3, 1, 3, 5);   // v 1, abs 5
  const PAdic b = padic_normalize(2, 1, 3, 8);   // v 0, abs 8
  CHECK((a + b).abs_prec() == 5);
  CHECK((a * b).abs_prec() == std::min(5 + 0, 8 + 1));
  const PAdic c = padic_normalize(9, 1, 3, 4);   // v 2, abs 4
  CHECK((a * c).abs_prec() == std::min(5 + 2, 4 + 1));
  CHECK((a * c).valuation() == 3);
  // dividing by 3 loses one digit
  CHECK(b.div_int(3).abs_prec() == 7);
  CHECK(b.div_int(3).valuation() == -1);
}

TEST_CASE("cancellation leaves a zero that knows its precision") {
  const PAdic a = padic_normalize(5, 1, 5, 4);
  const PAdic d = a - padic_normalize(5 + 625, 1, 5, 6);
  CHECK(d.is_zero());
  CHECK(d.abs_prec() == 4);
}

TEST_CASE("mixed primes are rejected") {
  CHECK_THROWS_AS(padic_normalize(1, 1, 2, 4) + padic_normalize(1, 1, 3, 4), Error);
}

TEST_CASE("division by a known zero fails") {
  CHECK_THROWS_AS(padic_normalize(1, 1, 2, 4) / PAdic::zero(2, 4), Error);
  CHECK_THROWS_AS(Coefficient(Rational(1)) / Coefficient(Rational(0)), Error);
}

TEST_CASE("p-adic ring arithmetic agrees with integers mod p^N") {
  std::mt19937_64 rng(7001);
  std::uniform_int_distribution<long> draw(-5000, 5000);
  for (int p : {2, 3, 5, 7}) {
    for (int trial = 0; trial < 200; ++trial) {
      const long x = draw(rng), y = draw(rng);
      const int n = 3 + trial % 6;
      const PAdic a = PAdic::from_integer(x, p, n);
      const PAdic b = PAdic::from_integer(y, p, n);
      const PAdic s = a + b, d = a - b, m = a * b;
      CHECK(same_mod(s.to_rational().get_num(), x + y, p, s.abs_prec()));
      CHECK(same_mod(d.to_rational().get_num(), x - y, p, d.abs_prec()));
      CHECK(same_mod(m.to_rational().get_num(), mpz_class(x) * y, p, m.abs_prec()));
      CHECK(s.abs_prec() == n);
      if (!a.is_zero() && !b.is_zero()) {
        CHECK(m.valuation() == a.valuation() + b.valuation());
        if (!s.is_zero()) CHECK(s.valuation() >= std::min(a.valuation(), b.valuation()));
      }
    }
  }
}

TEST_CASE("p-adic division against the rational oracle") {
  std::mt19937_64 rng(7002);
  for (int trial = 0; trial < 300; ++trial) {
    const int p = (trial % 3 == 0) ? 2 : (trial % 3 == 1 ? 3 : 5);
    const oracle::Q x = oracle::random_small(rng, 60, 30);
    oracle::Q y = oracle::random_small(rng, 60, 30);
    if (y == 0) y = 1;
    const Coefficient a = PAdic::from_rational(x.get_num(), x.get_den(), p, 10);
    const Coefficient b = PAdic::from_rational(y.get_num(), y.get_den(), p, 10);
    CHECK(oracle::congruent(a / b, x / y));
    CHECK(oracle::congruent(a * b, x * y));
  }
}

TEST_CASE("rational ring laws") {
  std::mt19937_64 rng(7003);
  for (int trial = 0; trial < 300; ++trial) {
    const Coefficient a = oracle::random_small(rng, 30, 12);
    const Coefficient b = oracle::random_small(rng, 30, 12);
    const Coefficient c = oracle::random_small(rng, 30, 12);
    CHECK((a + b).equals(b + a));
    CHECK((a * b).equals(b * a));
    CHECK(((a + b) + c).equals(a + (b + c)));
    CHECK(((a * b) * c).equals(a * (b * c)));
    CHECK((a * (b + c)).equals(a * b + a * c));
  }
}

TEST_CASE("coefficient kinds do not mix") {
  const Coefficient q = Rational(1);
  const Coefficient x = PAdic::from_integer(1, 3, 4);
  CHECK_THROWS_AS(q + x, Error);
  CHECK_THROWS_AS(q.padic(), Error);
  CHECK_THROWS_AS(x.rational(), Error);
  CHECK_THROWS_AS(q.valuation(), Error);
}

TEST_CASE("context minting") {
  const auto ctx = CoeffContext::padic(3, 7);
  const Coefficient c = ctx.fraction(1, 9);
  CHECK(c.valuation() == -2);
  CHECK(c.padic().abs_prec() == 7);
  CHECK(ctx.zero().is_zero());
  CHECK(CoeffContext::rational().fraction(2, 4).rational() == make_rational(1, 2));
  CHECK_THROWS_AS(CoeffContext::padic(6, 3), Error);
}

TEST_CASE("printing") {
  CHECK(padic_normalize(12, 1, 2, 6).str() == "2^2*3 (mod 2^6)");
  CHECK(PAdic::zero(5, 8).str() == "0 (mod 5^8)");
  CHECK(Coefficient(make_rational(-3, 2)).str() == "-3/2");
}

TEST_CASE("capping and shifting") {
  const PAdic x = PAdic::from_integer(1 + 9 + 81, 3, 8);
  const PAdic c = x.capped(2);
  CHECK(c.abs_prec() == 2);
  CHECK(c.unit() == 1);
  const PAdic s = x.shift(3);
  CHECK(s.valuation() == 3);
  CHECK(s.abs_prec() == 11);
}

TEST_CASE("valuation_of and is_prime") {
  CHECK(valuation_of(96, 2) == 5);
  CHECK(valuation_of(-250, 5) == 3);
  CHECK(is_prime(2));
  CHECK(is_prime(97));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(91));
}
