#pragma once

#include <gmpxx.h>

#include <limits>
#include <string>
#include <variant>

#include "robba/error.hpp"

namespace robba {

/// Exact rationals for the characteristic-zero theory. mpq_class keeps
/// gcd(|num|, den) = 1 and den >= 1 once canonicalized, which every
/// constructor in this library does.
using Rational = mpq_class;

Rational make_rational(const mpz_class& num, const mpz_class& den);

/// Largest e with p^e | n (n != 0).
int valuation_of(const mpz_class& n, int prime);

/// A p-adic number p^valuation * unit, known modulo p^abs_prec.
///
/// The unit lies in [1, p^(abs_prec - valuation)) and is prime to p. A value
/// that is zero modulo p^abs_prec is stored with valuation = kInfinite; its
/// abs_prec records how much of that zero is actually known, so an
/// "unknown" coefficient is simply zero with abs_prec at its valuation floor.
///
/// Precision propagates like interval arithmetic: sums keep the smaller
/// abs_prec, products keep min(a.abs + v(b), b.abs + v(a)).
class PAdic {
public:
  static constexpr int kInfinite = std::numeric_limits<int>::max();

  PAdic() = default;

  static PAdic zero(int prime, int abs_prec);
  /// num/den as a p-adic number known modulo p^abs_prec.
  static PAdic from_rational(const mpz_class& num, const mpz_class& den, int prime, int abs_prec);
  static PAdic from_integer(const mpz_class& n, int prime, int abs_prec);
  /// p^valuation * unit with unit reduced modulo p^(abs_prec - valuation);
  /// `unit` may contain further factors of p, they are folded into the valuation.
  static PAdic from_parts(int prime, int valuation, const mpz_class& unit, int abs_prec);

  int prime() const { return prime_; }
  int valuation() const { return valuation_; }
  const mpz_class& unit() const { return unit_; }
  int abs_prec() const { return abs_prec_; }
  /// Digits of the unit that are known; 0 for zero.
  int rel_prec() const { return is_zero() ? 0 : abs_prec_ - valuation_; }
  bool is_zero() const { return valuation_ == kInfinite; }

  PAdic operator-() const;
  PAdic operator+(const PAdic& o) const;
  PAdic operator-(const PAdic& o) const;
  PAdic operator*(const PAdic& o) const;
  /// Division is allowed by any known-nonzero value; positive valuation of the
  /// divisor lowers the quotient's valuation.
  PAdic operator/(const PAdic& o) const;

  /// Multiplication/division by an exact integer; v_p(n) digits are gained
  /// or lost respectively.
  PAdic mul_int(const mpz_class& n) const;
  PAdic div_int(const mpz_class& n) const;

  /// Multiply by p^shift (exact).
  PAdic shift(int shift) const;
  /// Forget digits beyond p^cap (no-op when cap >= abs_prec).
  PAdic capped(int cap) const;

  /// Equality of the two values modulo the smaller precision.
  bool equals(const PAdic& o) const { return (*this - o).is_zero(); }

  /// The exact rational p^valuation * unit (0 for zero).
  Rational to_rational() const;
  std::string str() const;

private:
  void check_same_prime(const PAdic& o) const;

  int prime_ = 2;
  int valuation_ = kInfinite;
  mpz_class unit_ = 0;
  int abs_prec_ = 0;
};

/// An element of the residue field F_p.
struct ResidueElement {
  int prime = 2;
  int value = 0;

  bool operator==(const ResidueElement&) const = default;
};

PAdic padic_normalize(const mpz_class& raw_numerator, const mpz_class& raw_denominator,
                      int prime, int abs_prec);
ResidueElement reduce_mod_p(const PAdic& x);
PAdic lift_from_residue(const ResidueElement& x, int abs_prec);

bool is_prime(long n);

enum class CoeffKind { Rational, PAdic };

/// A scalar of either kind. Mixing kinds in one operation is an invalid-input
/// error; series of a given ring only ever hold one kind.
class Coefficient {
public:
  Coefficient() : value_(Rational(0)) {}
  Coefficient(Rational q) : value_(std::move(q)) {}
  Coefficient(PAdic x) : value_(std::move(x)) {}

  CoeffKind kind() const {
    return std::holds_alternative<Rational>(value_) ? CoeffKind::Rational : CoeffKind::PAdic;
  }
  bool is_padic() const { return kind() == CoeffKind::PAdic; }
  const Rational& rational() const;
  const PAdic& padic() const;

  bool is_zero() const;
  /// p-adic valuation; kInfinite for zero. Rational coefficients are an error.
  int valuation() const;

  Coefficient operator-() const;
  Coefficient operator+(const Coefficient& o) const;
  Coefficient operator-(const Coefficient& o) const;
  Coefficient operator*(const Coefficient& o) const;
  Coefficient operator/(const Coefficient& o) const;
  Coefficient& operator+=(const Coefficient& o) { return *this = *this + o; }
  Coefficient& operator-=(const Coefficient& o) { return *this = *this - o; }
  Coefficient& operator*=(const Coefficient& o) { return *this = *this * o; }

  Coefficient mul_int(const mpz_class& n) const;
  Coefficient div_int(const mpz_class& n) const;

  /// Exact equality for rationals, equality at the smaller precision for p-adics.
  bool equals(const Coefficient& o) const;
  std::string str() const;

private:
  std::variant<Rational, PAdic> value_;
};

/// What a series needs to mint new scalars: the coefficient kind and, in
/// p-adic mode, the prime and the working absolute precision.
struct CoeffContext {
  CoeffKind kind = CoeffKind::Rational;
  int prime = 0;
  int abs_prec = 0;

  static CoeffContext rational() { return {}; }
  static CoeffContext padic(int prime, int abs_prec);

  Coefficient zero() const;
  Coefficient integer(const mpz_class& n) const;
  Coefficient fraction(const mpz_class& num, const mpz_class& den) const;

  bool operator==(const CoeffContext&) const = default;
};

}  // namespace robba
