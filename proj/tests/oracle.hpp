#pragma once

// Reference arithmetic for the tests: dense rational coefficient vectors,
// nothing shared with the library beyond GMP. Every routine here is the
// schoolbook version.

#include <gmpxx.h>

#include <cstddef>
#include <random>
#include <vector>

#include "robba/series.hpp"

namespace oracle {

using Q = mpq_class;
using Poly = std::vector<Q>;  // coefficient of t^i at index i

inline Q frac(long n, long d) {
  Q q(n, d);
  q.canonicalize();
  return q;
}

inline Poly mul(const Poly& a, const Poly& b, std::size_t n) {
  Poly c(n, 0);
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

// b with a*b = 1 mod t^n, by long division.
inline Poly inverse(const Poly& a, std::size_t n) {
  Poly b(n, 0);
  b[0] = 1 / a[0];
  for (std::size_t k = 1; k < n; ++k) {
    Q s = 0;
    for (std::size_t j = 1; j <= k && j < a.size(); ++j) s += a[j] * b[k - j];
    b[k] = -s / a[0];
  }
  return b;
}

inline Poly derivative(const Poly& a) {
  Poly d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<long>(i));
  return d;
}

// Zero constant term; one degree longer than the input.
inline Poly integral(const Poly& a) {
  Poly r(a.size() + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i + 1] = a[i] / static_cast<long>(i + 1);
  return r;
}

// log(a / a(0)) = integral of a'/a, truncated to n terms.
inline Poly log_unit(const Poly& a, std::size_t n) {
  Poly q = mul(derivative(a), inverse(a, n), n - 1);
  Poly r = integral(q);
  r.resize(n);
  return r;
}

inline int vp(const Q& q, int p) {
  if (q == 0) return 1 << 30;
  int v = 0;
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  while (num % p == 0) {
    num /= p;
    ++v;
  }
  while (den % p == 0) {
    den /= p;
    --v;
  }
  return v;
}

// q mod p^abs, represented as an exact residue check: true when
// v_p(c - q) >= abs for the library value c.
inline bool congruent(const robba::Coefficient& c, const Q& q) {
  const auto& x = c.padic();
  const Q diff = x.to_rational() - q;
  return diff == 0 || vp(diff, x.prime()) >= x.abs_prec();
}

inline bool rational_matches(const robba::TruncatedSeries& s, const Poly& want, int lo = 0) {
  for (int k = s.min_degree(); k < s.trunc_order(); ++k) {
    const int idx = k - lo;
    const Q w = idx >= 0 && static_cast<std::size_t>(idx) < want.size() ? want[static_cast<std::size_t>(idx)] : Q(0);
    if (s.coeff(k).rational() != w) return false;
  }
  return true;
}

inline Q random_small(std::mt19937_64& rng, int num_bound, int den_bound) {
  std::uniform_int_distribution<int> n(-num_bound, num_bound);
  std::uniform_int_distribution<int> d(1, den_bound);
  return frac(n(rng), d(rng));
}

}  // namespace oracle
