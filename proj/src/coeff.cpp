#include "robba/coeff.hpp"

#include <algorithm>

namespace robba {

namespace {

mpz_class power_of(int prime, int exponent) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(prime),
                static_cast<unsigned long>(exponent));
  return r;
}

mpz_class mod_positive(const mpz_class& x, const mpz_class& m) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class inverse_mod(const mpz_class& x, const mpz_class& m) {
  if (m == 1) return 0;
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw Error(ErrorCode::NonUnit, "value is not invertible modulo " + m.get_str());
  }
  return r;
}

// Strips p from n in place and returns how many factors were removed.
int strip(mpz_class& n, int prime) {
  if (n == 0) return 0;
  mpz_class p = prime;
  return static_cast<int>(mpz_remove(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

}  // namespace

Rational make_rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw Error(ErrorCode::InvalidInput, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

int valuation_of(const mpz_class& n, int prime) {
  if (n == 0) return PAdic::kInfinite;
  mpz_class copy = n;
  return strip(copy, prime);
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------- PAdic

PAdic PAdic::zero(int prime, int abs_prec) {
  PAdic z;
  z.prime_ = prime;
  z.abs_prec_ = abs_prec;
  return z;
}

PAdic PAdic::from_parts(int prime, int valuation, const mpz_class& unit, int abs_prec) {
  mpz_class u = unit;
  if (u == 0) return zero(prime, abs_prec);
  valuation += strip(u, prime);
  if (valuation >= abs_prec) return zero(prime, abs_prec);
  PAdic r;
  r.prime_ = prime;
  r.valuation_ = valuation;
  r.abs_prec_ = abs_prec;
  r.unit_ = mod_positive(u, power_of(prime, abs_prec - valuation));
  return r;
}

PAdic PAdic::from_rational(const mpz_class& num, const mpz_class& den, int prime, int abs_prec) {
  if (den == 0) throw Error(ErrorCode::InvalidInput, "zero denominator");
  if (!is_prime(prime)) {
    throw Error(ErrorCode::InvalidInput, std::to_string(prime) + " is not prime");
  }
  if (num == 0) return zero(prime, abs_prec);
  mpz_class n = num;
  mpz_class d = den;
  const int v = strip(n, prime) - strip(d, prime);
  if (v >= abs_prec) return zero(prime, abs_prec);
  const mpz_class modulus = power_of(prime, abs_prec - v);
  return from_parts(prime, v, mod_positive(n * inverse_mod(d, modulus), modulus), abs_prec);
}

PAdic PAdic::from_integer(const mpz_class& n, int prime, int abs_prec) {
  return from_rational(n, 1, prime, abs_prec);
}

void PAdic::check_same_prime(const PAdic& o) const {
  if (prime_ != o.prime_) {
    throw Error(ErrorCode::InvalidInput, "p-adic operands with different primes " +
                                             std::to_string(prime_) + " and " +
                                             std::to_string(o.prime_));
  }
}

PAdic PAdic::operator-() const {
  if (is_zero()) return *this;
  return from_parts(prime_, valuation_, -unit_, abs_prec_);
}

PAdic PAdic::operator+(const PAdic& o) const {
  check_same_prime(o);
  const int n = std::min(abs_prec_, o.abs_prec_);
  if (is_zero()) return o.capped(n);
  if (o.is_zero()) return capped(n);
  const int v = std::min(valuation_, o.valuation_);
  mpz_class sum = unit_ * power_of(prime_, valuation_ - v) +
                  o.unit_ * power_of(prime_, o.valuation_ - v);
  return from_parts(prime_, v, sum, n);
}

PAdic PAdic::operator-(const PAdic& o) const { return *this + (-o); }

PAdic PAdic::operator*(const PAdic& o) const {
  check_same_prime(o);
  // A zero is only known to be divisible by p^abs_prec; that is its valuation floor.
  const int va = is_zero() ? abs_prec_ : valuation_;
  const int vb = o.is_zero() ? o.abs_prec_ : o.valuation_;
  const int n = std::min(abs_prec_ + vb, o.abs_prec_ + va);
  if (is_zero() || o.is_zero()) return zero(prime_, n);
  return from_parts(prime_, va + vb, unit_ * o.unit_, n);
}

PAdic PAdic::operator/(const PAdic& o) const {
  check_same_prime(o);
  if (o.is_zero()) {
    throw Error(ErrorCode::NonUnit, "division by a p-adic zero (mod " + std::to_string(prime_) +
                                        "^" + std::to_string(o.abs_prec_) + ")");
  }
  if (is_zero()) return zero(prime_, abs_prec_ - o.valuation_);
  const int rel = std::min(rel_prec(), o.rel_prec());
  const int v = valuation_ - o.valuation_;
  const mpz_class modulus = power_of(prime_, rel);
  return from_parts(prime_, v, unit_ * inverse_mod(o.unit_, modulus), v + rel);
}

PAdic PAdic::mul_int(const mpz_class& n) const {
  if (n == 0) return zero(prime_, abs_prec_);
  mpz_class m = n;
  const int e = strip(m, prime_);
  if (is_zero()) return zero(prime_, abs_prec_ + e);
  return from_parts(prime_, valuation_ + e, unit_ * m, abs_prec_ + e);
}

PAdic PAdic::div_int(const mpz_class& n) const {
  if (n == 0) throw Error(ErrorCode::InvalidInput, "division by integer zero");
  mpz_class m = n;
  const int e = strip(m, prime_);
  if (is_zero()) return zero(prime_, abs_prec_ - e);
  const mpz_class modulus = power_of(prime_, rel_prec());
  return from_parts(prime_, valuation_ - e, unit_ * inverse_mod(m, modulus), abs_prec_ - e);
}

PAdic PAdic::shift(int s) const {
  PAdic r = *this;
  if (!is_zero()) r.valuation_ += s;
  r.abs_prec_ += s;
  return r;
}

PAdic PAdic::capped(int cap) const {
  if (cap >= abs_prec_) return *this;
  if (is_zero()) return zero(prime_, cap);
  return from_parts(prime_, valuation_, unit_, cap);
}

Rational PAdic::to_rational() const {
  if (is_zero()) return 0;
  if (valuation_ >= 0) return Rational(unit_ * power_of(prime_, valuation_));
  return make_rational(unit_, power_of(prime_, -valuation_));
}

std::string PAdic::str() const {
  const std::string p = std::to_string(prime_);
  const std::string mod = " (mod " + p + "^" + std::to_string(abs_prec_) + ")";
  if (is_zero()) return "0" + mod;
  return p + "^" + std::to_string(valuation_) + "*" + unit_.get_str() + mod;
}

PAdic padic_normalize(const mpz_class& raw_numerator, const mpz_class& raw_denominator,
                      int prime, int abs_prec) {
  if (abs_prec < 1) throw Error(ErrorCode::InvalidInput, "abs_prec must be at least 1");
  return PAdic::from_rational(raw_numerator, raw_denominator, prime, abs_prec);
}

ResidueElement reduce_mod_p(const PAdic& x) {
  if (x.abs_prec() < 1) {
    throw Error(ErrorCode::InvalidInput, "value not known modulo p; cannot reduce");
  }
  if (x.is_zero()) return {x.prime(), 0};
  if (x.valuation() < 0) {
    throw Error(ErrorCode::NotIntegral,
                "value " + x.str() + " has negative valuation; no reduction mod p");
  }
  if (x.valuation() > 0) return {x.prime(), 0};
  const mpz_class r = x.unit() % x.prime();
  return {x.prime(), static_cast<int>(r.get_si())};
}

PAdic lift_from_residue(const ResidueElement& x, int abs_prec) {
  if (abs_prec < 1) throw Error(ErrorCode::InvalidInput, "abs_prec must be at least 1");
  return PAdic::from_integer(((x.value % x.prime) + x.prime) % x.prime, x.prime, abs_prec);
}

// ---------------------------------------------------------------- Coefficient

const Rational& Coefficient::rational() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return *q;
  throw Error(ErrorCode::InvalidInput, "expected a rational coefficient");
}

const PAdic& Coefficient::padic() const {
  if (const auto* x = std::get_if<PAdic>(&value_)) return *x;
  throw Error(ErrorCode::InvalidInput, "expected a p-adic coefficient");
}

bool Coefficient::is_zero() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return sgn(*q) == 0;
  return std::get<PAdic>(value_).is_zero();
}

int Coefficient::valuation() const { return padic().valuation(); }

namespace {

void check_kinds(const Coefficient& a, const Coefficient& b) {
  if (a.kind() != b.kind()) {
    throw Error(ErrorCode::InvalidInput, "cannot mix rational and p-adic coefficients");
  }
}

}  // namespace

Coefficient Coefficient::operator-() const {
  if (kind() == CoeffKind::Rational) return Rational(-rational());
  return -padic();
}

Coefficient Coefficient::operator+(const Coefficient& o) const {
  check_kinds(*this, o);
  if (kind() == CoeffKind::Rational) return Rational(rational() + o.rational());
  return padic() + o.padic();
}

Coefficient Coefficient::operator-(const Coefficient& o) const {
  check_kinds(*this, o);
  if (kind() == CoeffKind::Rational) return Rational(rational() - o.rational());
  return padic() - o.padic();
}

Coefficient Coefficient::operator*(const Coefficient& o) const {
  check_kinds(*this, o);
  if (kind() == CoeffKind::Rational) return Rational(rational() * o.rational());
  return padic() * o.padic();
}

Coefficient Coefficient::operator/(const Coefficient& o) const {
  check_kinds(*this, o);
  if (kind() == CoeffKind::Rational) {
    if (sgn(o.rational()) == 0) throw Error(ErrorCode::NonUnit, "division by zero");
    return Rational(rational() / o.rational());
  }
  return padic() / o.padic();
}

Coefficient Coefficient::mul_int(const mpz_class& n) const {
  if (kind() == CoeffKind::Rational) return Rational(rational() * n);
  return padic().mul_int(n);
}

Coefficient Coefficient::div_int(const mpz_class& n) const {
  if (kind() == CoeffKind::Rational) return Rational(make_rational(1, n) * rational());
  return padic().div_int(n);
}

bool Coefficient::equals(const Coefficient& o) const {
  check_kinds(*this, o);
  if (kind() == CoeffKind::Rational) return rational() == o.rational();
  return padic().equals(o.padic());
}

std::string Coefficient::str() const {
  if (kind() == CoeffKind::Rational) return rational().get_str();
  return padic().str();
}

// ---------------------------------------------------------------- CoeffContext

CoeffContext CoeffContext::padic(int prime, int abs_prec) {
  if (!is_prime(prime)) {
    throw Error(ErrorCode::InvalidInput, std::to_string(prime) + " is not prime");
  }
  if (abs_prec < 1) throw Error(ErrorCode::InvalidInput, "abs_prec must be at least 1");
  return {CoeffKind::PAdic, prime, abs_prec};
}

Coefficient CoeffContext::zero() const {
  if (kind == CoeffKind::Rational) return Rational(0);
  return PAdic::zero(prime, abs_prec);
}

Coefficient CoeffContext::integer(const mpz_class& n) const {
  if (kind == CoeffKind::Rational) return Rational(n);
  return PAdic::from_integer(n, prime, abs_prec);
}

Coefficient CoeffContext::fraction(const mpz_class& num, const mpz_class& den) const {
  if (kind == CoeffKind::Rational) return make_rational(num, den);
  return PAdic::from_rational(num, den, prime, abs_prec);
}

}  // namespace robba
