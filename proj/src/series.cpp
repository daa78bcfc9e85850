#include "robba/series.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace robba {

namespace {

struct RingInfo {
  RingLabel label;
  std::string_view name;
  bool nonnegative;
  bool integral;
  CoeffKind kind;
};

constexpr std::array<RingInfo, 9> kRings{{
    {RingLabel::FormalChar0, "formal", true, false, CoeffKind::Rational},
    {RingLabel::FormalLaurentChar0, "formal-laurent", false, false, CoeffKind::Rational},
    {RingLabel::GammaPlus, "gamma+", true, true, CoeffKind::PAdic},
    {RingLabel::EPlus, "e+", true, false, CoeffKind::PAdic},
    {RingLabel::Gamma, "gamma", false, true, CoeffKind::PAdic},
    {RingLabel::E, "e", false, false, CoeffKind::PAdic},
    {RingLabel::Dagger, "dagger", false, false, CoeffKind::PAdic},
    {RingLabel::RobbaPlus, "robba+", true, false, CoeffKind::PAdic},
    {RingLabel::Robba, "robba", false, false, CoeffKind::PAdic},
}};

const RingInfo& info(RingLabel ring) {
  for (const auto& r : kRings) {
    if (r.label == ring) return r;
  }
  throw Error(ErrorCode::InvalidInput, "unknown ring label");
}

CoeffContext merged(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (a.ring() != b.ring()) {
    throw Error(ErrorCode::InvalidInput, "ring mismatch: " + std::string(ring_name(a.ring())) +
                                             " vs " + std::string(ring_name(b.ring())));
  }
  const auto& x = a.context();
  const auto& y = b.context();
  if (x.kind != y.kind || x.prime != y.prime) {
    throw Error(ErrorCode::InvalidInput, "series over different coefficient domains");
  }
  CoeffContext c = x;
  c.abs_prec = std::min(x.abs_prec, y.abs_prec);
  return c;
}

void require_padic(const TruncatedSeries& s, const char* op) {
  if (s.context().kind != CoeffKind::PAdic) {
    throw Error(ErrorCode::InvalidInput, std::string(op) + " needs p-adic coefficients");
  }
}

// Extends the window upwards by `extra` coefficients that are only known to be
// divisible by p^floor: the tail of an element of p^floor * Gamma.
TruncatedSeries pad_unknown(const TruncatedSeries& s, int extra, int floor) {
  if (extra <= 0) return s;
  std::vector<Coefficient> c = s.coefficients();
  for (int i = 0; i < extra; ++i) c.emplace_back(PAdic::zero(s.context().prime, floor));
  return TruncatedSeries(s.ring(), s.context(), s.min_degree(), std::move(c));
}

// Keeps degrees below `max_trunc`, then drops trailing coefficients that carry
// no information (abs_prec <= floor).
TruncatedSeries trim_top(const TruncatedSeries& s, int max_trunc, int floor) {
  std::vector<Coefficient> c = s.coefficients();
  const int keep = std::max(0, std::min<int>(static_cast<int>(c.size()), max_trunc - s.min_degree()));
  c.resize(keep);
  while (!c.empty() && c.back().is_padic() && c.back().padic().abs_prec() <= floor) c.pop_back();
  return TruncatedSeries(s.ring(), s.context(), s.min_degree(), std::move(c));
}

TruncatedSeries trim_leading_zeros(const TruncatedSeries& s, int keep_from) {
  const auto& c = s.coefficients();
  std::size_t first = 0;
  while (first < c.size() && c[first].is_zero() && s.min_degree() + static_cast<int>(first) < keep_from) {
    ++first;
  }
  std::vector<Coefficient> rest(c.begin() + static_cast<std::ptrdiff_t>(first), c.end());
  return TruncatedSeries(s.ring(), s.context(), s.min_degree() + static_cast<int>(first), std::move(rest));
}

// 1 / (lead * (1 + sum_{j>=1} b_j u^j)) on the window [0, n) of `tail`, where
// tail[j] holds b_j * lead for j >= 1. Classic recurrence.
std::vector<Coefficient> inverse_recurrence(const std::vector<Coefficient>& b, const Coefficient& one) {
  std::vector<Coefficient> c;
  if (b.empty()) return c;
  c.reserve(b.size());
  const Coefficient inv0 = one / b[0];
  c.push_back(inv0);
  for (std::size_t k = 1; k < b.size(); ++k) {
    Coefficient acc;
    bool have = false;
    for (std::size_t j = 1; j <= k; ++j) {
      if (b[j].is_zero() && !b[j].is_padic()) continue;
      Coefficient term = b[j] * c[k - j];
      if (have) {
        acc += term;
      } else {
        acc = term;
        have = true;
      }
    }
    c.push_back(have ? -(acc * inv0) : one.mul_int(0));
  }
  return c;
}

struct UnitShape {
  int lead_degree;   // first degree whose coefficient attains the minimal valuation
  int lowest;        // first nonzero degree
  int min_val;       // minimal valuation (p-adic only)
};

UnitShape unit_shape(const TruncatedSeries& a) {
  const auto lowest = a.order();
  if (!lowest) throw Error(ErrorCode::NonUnit, "series is zero on its window; not a unit");
  if (a.context().kind == CoeffKind::Rational) {
    if (is_nonnegative(a.ring()) && *lowest != 0) {
      throw Error(ErrorCode::NonUnit, "constant term is zero; not a unit");
    }
    return {*lowest, *lowest, 0};
  }
  int k = PAdic::kInfinite;
  for (const auto& c : a.coefficients()) {
    if (!c.is_zero()) k = std::min(k, c.valuation());
  }
  int d = *lowest;
  while (a.coeff(d).is_zero() || a.coeff(d).valuation() != k) ++d;
  for (int i = a.min_degree(); i < d; ++i) {
    const PAdic& c = a.coeff(i).padic();
    if (c.is_zero() && c.abs_prec() <= k) {
      throw Error(ErrorCode::NonUnit, "coefficient of degree " + std::to_string(i) +
                                          " is not known well enough to certify a unit");
    }
  }
  if (is_nonnegative(a.ring()) && d != 0) {
    throw Error(ErrorCode::NonUnit, "constant term does not dominate; not a unit of " +
                                        std::string(ring_name(a.ring())));
  }
  if (is_integral(a.ring()) && k != 0) {
    throw Error(ErrorCode::NonUnit, "leading coefficient has positive valuation; not a unit of " +
                                        std::string(ring_name(a.ring())));
  }
  return {d, *lowest, k};
}

// Largest relative precision carried by any coefficient once p^k is factored out.
int relative_precision(const TruncatedSeries& a, int k) {
  int n = 1;
  for (const auto& c : a.coefficients()) n = std::max(n, c.padic().abs_prec() - k);
  return n;
}

// Inverse of a Laurent p-adic unit whose dominant coefficient sits above lower
// nonzero (but p-adically smaller) terms. Writing a = p^k c u^d (1 + y_- + y_+)
// with y_- of positive valuation in negative degrees and y_+ in positive
// degrees, 1/a = p^-k c^-1 u^-d w sum_n (-y_- w)^n with w = 1/(1 + y_+).
// The unknown tail of `a` is treated as lying in p^k Gamma, which lets the
// precision model carry partial knowledge past the u-adic window.
// With `clamp` the window stops at the u-adic bound T - 2d; without it the
// partially known coefficients above that bound are kept.
TruncatedSeries inverse_dominant(const TruncatedSeries& a, const UnitShape& shape, bool clamp) {
  const int k = shape.min_val;
  const int d = shape.lead_degree;
  const int gap = d - shape.lowest;
  const int p = a.context().prime;
  const int T = a.trunc_order();
  const int nrel = relative_precision(a, k);
  const int pad = nrel * gap;

  CoeffContext local = a.context();
  local.abs_prec = nrel + 1;
  const PAdic one = PAdic::from_integer(1, p, nrel + 1);
  const PAdic lead = a.coeff(d).padic().shift(-k);

  auto normalized = [&](int i) {
    return i < T ? a.coeff(i).padic().shift(-k) : PAdic::zero(p, 0);
  };

  // y_- on [lowest - d, 0) and y_+ on (0, T + pad - d).
  const int top = T + pad - d;
  std::vector<Coefficient> minus;
  for (int j = shape.lowest - d; j < top; ++j) {
    minus.emplace_back(j < 0 ? normalized(j + d) / lead : PAdic::zero(p, nrel + 1));
  }
  std::vector<Coefficient> plus{one};
  for (int j = 1; j < top; ++j) plus.emplace_back(normalized(j + d) / lead);

  const TruncatedSeries w(a.ring(), local, 0, inverse_recurrence(plus, one));
  const TruncatedSeries y_minus(a.ring(), local, shape.lowest - d, std::move(minus));
  const TruncatedSeries neg_z = -(y_minus * w);

  TruncatedSeries sum = TruncatedSeries::constant(a.ring(), local, one, top);
  TruncatedSeries power = sum;
  for (int n = 1; n < nrel; ++n) {
    power = power * neg_z;
    sum = sum + power;
  }
  TruncatedSeries q = (w * sum).map_coefficients([&](const Coefficient& c) {
    return Coefficient(c.padic().capped(nrel));
  });
  q = trim_top(q, clamp ? T - d : q.trunc_order(), 0);
  q = trim_leading_zeros(q, q.trunc_order());

  const TruncatedSeries out = q.map_coefficients([&](const Coefficient& c) {
    return Coefficient((c.padic() / lead).shift(-k));
  });
  return TruncatedSeries(a.ring(), a.context(), out.min_degree() - d, out.coefficients());
}

}  // namespace

bool is_nonnegative(RingLabel ring) { return info(ring).nonnegative; }
bool is_integral(RingLabel ring) { return info(ring).integral; }
CoeffKind coefficient_kind(RingLabel ring) { return info(ring).kind; }
std::string_view ring_name(RingLabel ring) { return info(ring).name; }

RingLabel parse_ring(std::string_view name) {
  for (const auto& r : kRings) {
    if (r.name == name) return r.label;
  }
  throw Error(ErrorCode::Usage, "unknown ring label '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- TruncatedSeries

TruncatedSeries::TruncatedSeries(RingLabel ring, CoeffContext ctx, int min_degree,
                                 std::vector<Coefficient> coefficients)
    : ring_(ring), ctx_(ctx), min_degree_(min_degree), coeffs_(std::move(coefficients)) {
  validate();
}

void TruncatedSeries::validate() const {
  const auto& r = info(ring_);
  if (r.kind != ctx_.kind) {
    throw Error(ErrorCode::InvalidInput, "ring " + std::string(r.name) +
                                             " does not match the coefficient kind");
  }
  if (r.nonnegative && min_degree_ < 0) {
    throw Error(ErrorCode::ExponentOutOfWindow,
                "negative degree " + std::to_string(min_degree_) + " in ring " + std::string(r.name));
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const auto& c = coeffs_[i];
    if (c.kind() != ctx_.kind) {
      throw Error(ErrorCode::InvalidInput, "coefficient kind does not match the series");
    }
    if (c.is_padic() && c.padic().prime() != ctx_.prime) {
      throw Error(ErrorCode::InvalidInput, "coefficient prime does not match the series");
    }
    if (r.integral && !c.is_zero() && c.valuation() < 0) {
      throw Error(ErrorCode::Integrality,
                  "coefficient of degree " + std::to_string(min_degree_ + static_cast<int>(i)) +
                      " is not integral in " + std::string(r.name));
    }
  }
}

TruncatedSeries TruncatedSeries::zero(RingLabel ring, CoeffContext ctx, int min_degree,
                                      int trunc_order) {
  const int n = std::max(0, trunc_order - min_degree);
  return TruncatedSeries(ring, ctx, std::min(min_degree, trunc_order),
                         std::vector<Coefficient>(static_cast<std::size_t>(n), ctx.zero()));
}

TruncatedSeries TruncatedSeries::constant(RingLabel ring, CoeffContext ctx, const Coefficient& c,
                                          int trunc_order) {
  return monomial(ring, ctx, c, 0, trunc_order);
}

TruncatedSeries TruncatedSeries::monomial(RingLabel ring, CoeffContext ctx, const Coefficient& c,
                                          int degree, int trunc_order) {
  const int lo = std::min(0, degree);
  auto s = zero(ring, ctx, std::min(lo, trunc_order), trunc_order);
  if (degree < trunc_order) s.coeffs_[static_cast<std::size_t>(degree - s.min_degree_)] = c;
  s.validate();
  return s;
}

Coefficient TruncatedSeries::coeff(int degree) const {
  if (degree >= trunc_order()) {
    throw Error(ErrorCode::InsufficientWindow, "degree " + std::to_string(degree) +
                                                   " lies beyond O(u^" +
                                                   std::to_string(trunc_order()) + ")");
  }
  if (degree < min_degree_) return ctx_.zero();
  return coeffs_[static_cast<std::size_t>(degree - min_degree_)];
}

bool TruncatedSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Coefficient& c) { return c.is_zero(); });
}

std::optional<int> TruncatedSeries::order() const {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (!coeffs_[i].is_zero()) return min_degree_ + static_cast<int>(i);
  }
  return std::nullopt;
}

TruncatedSeries TruncatedSeries::truncated(int trunc) const {
  if (trunc >= trunc_order()) return *this;
  const int lo = std::min(min_degree_, trunc);
  std::vector<Coefficient> c(coeffs_.begin(), coeffs_.begin() + std::max(0, trunc - min_degree_));
  return TruncatedSeries(ring_, ctx_, lo, std::move(c));
}

TruncatedSeries TruncatedSeries::relabeled(RingLabel ring) const {
  return TruncatedSeries(ring, ctx_, min_degree_, coeffs_);
}

TruncatedSeries TruncatedSeries::extended_down(int degree) const {
  if (degree >= min_degree_) return *this;
  std::vector<Coefficient> c(static_cast<std::size_t>(min_degree_ - degree), ctx_.zero());
  c.insert(c.end(), coeffs_.begin(), coeffs_.end());
  return TruncatedSeries(ring_, ctx_, degree, std::move(c));
}

TruncatedSeries TruncatedSeries::shifted(int k) const {
  return TruncatedSeries(ring_, ctx_, min_degree_ + k, coeffs_);
}

TruncatedSeries TruncatedSeries::scaled(const Coefficient& c) const {
  return map_coefficients([&](const Coefficient& x) { return x * c; });
}

TruncatedSeries TruncatedSeries::operator-() const {
  return map_coefficients([](const Coefficient& x) { return -x; });
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
  const CoeffContext ctx = merged(*this, o);
  const int hi = std::min(trunc_order(), o.trunc_order());
  const int lo = std::min({min_degree_, o.min_degree_, hi});
  std::vector<Coefficient> c;
  c.reserve(static_cast<std::size_t>(hi - lo));
  for (int i = lo; i < hi; ++i) {
    const bool in_a = i >= min_degree_;
    const bool in_b = i >= o.min_degree_;
    if (in_a && in_b) {
      c.push_back(coeff(i) + o.coeff(i));
    } else {
      c.push_back(in_a ? coeff(i) : o.coeff(i));
    }
  }
  return TruncatedSeries(ring_, ctx, lo, std::move(c));
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const { return *this + (-o); }

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
  const CoeffContext ctx = merged(*this, o);
  const int lo = min_degree_ + o.min_degree_;
  const int hi = std::min(trunc_order() + o.min_degree_, o.trunc_order() + min_degree_);
  if (hi <= lo) return TruncatedSeries(ring_, ctx, hi, {});
  const bool exact = ctx.kind == CoeffKind::Rational;
  std::vector<Coefficient> c;
  std::vector<bool> touched(static_cast<std::size_t>(hi - lo), false);
  c.resize(static_cast<std::size_t>(hi - lo));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const auto& x = coeffs_[i];
    // An exact rational zero contributes nothing; a p-adic zero still carries
    // its precision into the product.
    if (exact && x.is_zero()) continue;
    const int di = min_degree_ + static_cast<int>(i);
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
      const int deg = di + o.min_degree_ + static_cast<int>(j);
      if (deg >= hi) break;
      const auto& y = o.coeffs_[j];
      if (exact && y.is_zero()) continue;
      const auto slot = static_cast<std::size_t>(deg - lo);
      if (touched[slot]) {
        c[slot] += x * y;
      } else {
        c[slot] = x * y;
        touched[slot] = true;
      }
    }
  }
  for (std::size_t s = 0; s < c.size(); ++s) {
    if (!touched[s]) c[s] = ctx.zero();
  }
  return TruncatedSeries(ring_, ctx, lo, std::move(c));
}

bool TruncatedSeries::equals(const TruncatedSeries& o) const {
  const CoeffContext ctx = merged(*this, o);
  (void)ctx;
  const int lo = std::min(min_degree_, o.min_degree_);
  const int hi = std::min(trunc_order(), o.trunc_order());
  if (hi <= lo) {
    throw Error(ErrorCode::DisjointWindows, "series windows do not overlap; comparison is undefined");
  }
  for (int i = lo; i < hi; ++i) {
    if (!coeff(i).equals(o.coeff(i))) return false;
  }
  return true;
}

// ---------------------------------------------------------------- forms

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
  return {a.coefficient_series + b.coefficient_series};
}

DifferentialForm operator*(const TruncatedSeries& s, const DifferentialForm& f) {
  return {s * f.coefficient_series};
}

DifferentialForm derive(const TruncatedSeries& s) {
  const int m = s.min_degree();
  const int t = s.trunc_order();
  const bool nonneg = is_nonnegative(s.ring());
  const int lo = nonneg ? std::max(m - 1, 0) : m - 1;
  const int hi = nonneg ? std::max(t - 1, 0) : t - 1;
  std::vector<Coefficient> c;
  for (int j = lo + 1; j <= hi; ++j) c.push_back(s.coeff(j).mul_int(j));
  return {TruncatedSeries(s.ring(), s.context(), std::min(lo, hi), std::move(c))};
}

TruncatedSeries antiderive(const DifferentialForm& f, RingLabel target) {
  const auto& s = f.coefficient_series;
  if (coefficient_kind(target) != s.context().kind) {
    throw Error(ErrorCode::InvalidInput, "target ring " + std::string(ring_name(target)) +
                                             " has the wrong coefficient kind");
  }
  if (s.trunc_order() <= -1 && !is_nonnegative(s.ring())) {
    throw Error(ErrorCode::InsufficientWindow,
                "window O(u^" + std::to_string(s.trunc_order()) + ") hides the u^-1 du term");
  }
  if (s.min_degree() <= -1) {
    const Coefficient r = s.coeff(-1);
    if (!r.is_zero()) {
      throw ObstructionError("form has residue " + r.str() + " and is not exact", r.str());
    }
  }
  if (is_nonnegative(target)) {
    for (int i = s.min_degree(); i < std::min(0, s.trunc_order()); ++i) {
      if (!s.coeff(i).is_zero()) {
        throw Error(ErrorCode::InvalidInput, "form has negative-degree terms; target " +
                                                 std::string(ring_name(target)) +
                                                 " only holds power series");
      }
    }
  }
  const int lo = is_nonnegative(target) ? 0 : std::min(s.min_degree() + 1, 0);
  const int hi = s.trunc_order() + 1;
  std::vector<Coefficient> c;
  for (int i = lo; i < hi; ++i) {
    if (i == 0) {
      c.push_back(s.context().zero());
    } else {
      c.push_back(s.coeff(i - 1).div_int(i));
    }
  }
  if (is_integral(target)) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (!c[i].is_zero() && c[i].valuation() < 0) {
        throw Error(ErrorCode::Integrality,
                    "antiderivative coefficient of degree " + std::to_string(lo + static_cast<int>(i)) +
                        " leaves O; no antiderivative in " + std::string(ring_name(target)));
      }
    }
  }
  return TruncatedSeries(target, s.context(), lo, std::move(c));
}

Coefficient residue(const DifferentialForm& f) {
  const auto& s = f.coefficient_series;
  if (is_nonnegative(s.ring())) return s.context().zero();
  if (s.trunc_order() <= -1) {
    throw Error(ErrorCode::InsufficientWindow,
                "window O(u^" + std::to_string(s.trunc_order()) + ") does not reach degree -1");
  }
  return s.coeff(-1);
}

// ---------------------------------------------------------------- units

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }

TruncatedSeries inverse(const TruncatedSeries& a) {
  const UnitShape shape = unit_shape(a);
  if (shape.lowest != shape.lead_degree) return inverse_dominant(a, shape, true);
  const int d = shape.lead_degree;
  std::vector<Coefficient> b;
  for (int i = d; i < a.trunc_order(); ++i) b.push_back(a.coeff(i));
  return TruncatedSeries(a.ring(), a.context(), -d, inverse_recurrence(b, a.context().integer(1)));
}

DifferentialForm dlog(const TruncatedSeries& unit) {
  const UnitShape shape = unit_shape(unit);
  const TruncatedSeries a = trim_leading_zeros(unit, shape.lowest);
  if (shape.lowest == shape.lead_degree) return inverse(a) * derive(a);
  // The inverse reaches far into negative degrees with growing valuation;
  // pad the derivative's unknown tail so those products still count.
  const TruncatedSeries inv = inverse_dominant(a, shape, false);
  const int d = shape.lead_degree;
  const int pad = std::max(0, -d - inv.min_degree());
  const DifferentialForm da = derive(pad_unknown(a, pad, shape.min_val));
  return {trim_top(da.coefficient_series * inv, a.trunc_order() - d - 1, 0)};
}

int degree_of_unit(const TruncatedSeries& x) {
  require_padic(x, "degree_of_unit");
  for (int i = x.min_degree(); i < x.trunc_order(); ++i) {
    const PAdic& c = x.coeff(i).padic();
    if (!c.is_zero() && c.valuation() < 0) {
      throw Error(ErrorCode::NotIntegral, "coefficient of degree " + std::to_string(i) +
                                              " is not integral; no reduction mod p");
    }
    if (c.is_zero() && c.abs_prec() < 1) {
      throw Error(ErrorCode::CannotDetermineDegree,
                  "coefficient of degree " + std::to_string(i) + " is not known modulo p");
    }
    if (!c.is_zero() && c.valuation() == 0) return i;
  }
  throw Error(ErrorCode::CannotDetermineDegree,
              "every coefficient in the window reduces to zero mod p");
}

std::pair<Coefficient, TruncatedSeries> unit_decompose(const TruncatedSeries& a) {
  if (!is_nonnegative(a.ring())) {
    throw Error(ErrorCode::InvalidInput, "unit_decompose needs a power series ring");
  }
  if (a.trunc_order() < 1) throw Error(ErrorCode::InsufficientWindow, "constant term is unknown");
  const Coefficient c = a.coeff(0);
  if (c.is_zero() || (c.is_padic() && is_integral(a.ring()) && c.valuation() != 0)) {
    throw Error(ErrorCode::NonUnit, "constant term " + c.str() + " is not a unit");
  }
  const TruncatedSeries one = TruncatedSeries::constant(a.ring(), a.context(),
                                                        a.context().integer(1), a.trunc_order());
  TruncatedSeries w = one - a.map_coefficients([&](const Coefficient& x) { return x / c; });
  std::vector<Coefficient> coeffs = w.coefficients();
  coeffs[static_cast<std::size_t>(0 - w.min_degree())] = a.context().zero();
  return {c, TruncatedSeries(w.ring(), w.context(), w.min_degree(), std::move(coeffs))};
}

TruncatedSeries formal_log(const TruncatedSeries& a) {
  if (a.context().kind != CoeffKind::Rational) {
    throw Error(ErrorCode::InvalidInput, "formal_log works over rational coefficients; use plog");
  }
  const auto [c, w] = unit_decompose(a);
  (void)c;
  const int T = a.trunc_order();
  TruncatedSeries sum = TruncatedSeries::zero(a.ring(), a.context(), 0, T);
  TruncatedSeries power = w;
  // w has zero constant term, so w^n = O(t^n) and n >= T adds nothing.
  for (int n = 1; n < T; ++n) {
    if (n > 1) power = power * w;
    sum = sum + power.map_coefficients([n](const Coefficient& x) { return x.div_int(n); });
  }
  return -sum;
}

TruncatedSeries padic_log_onemius_py(const TruncatedSeries& y) {
  require_padic(y, "padic_log_onemius_py");
  for (int i = y.min_degree(); i < y.trunc_order(); ++i) {
    const auto& c = y.coeff(i);
    if (!c.is_zero() && c.valuation() < 0) {
      throw Error(ErrorCode::NotIntegral, "y must have integral coefficients");
    }
  }
  const int N = y.context().abs_prec;
  const int p = y.context().prime;
  // Stop at the first n with n - floor(log_p n) >= N: the tail is then O(p^N).
  int stop = 1;
  for (;; ++stop) {
    int lg = 0;
    for (long q = stop; q >= p; q /= p) ++lg;
    if (stop - lg >= N) break;
  }
  const int lowest = std::min(0, y.order().value_or(0));
  const TruncatedSeries py = pad_unknown(y, (stop - 1) * -lowest, 0)
                                 .map_coefficients([](const Coefficient& c) {
                                   return Coefficient(c.padic().shift(1));
                                 });
  TruncatedSeries sum = TruncatedSeries::zero(y.ring(), y.context(), std::min(0, y.min_degree()),
                                              py.trunc_order());
  TruncatedSeries power = py;
  for (int n = 1; n < stop; ++n) {
    if (n > 1) power = power * py;
    sum = sum + power.map_coefficients([n](const Coefficient& x) { return x.div_int(n); });
  }
  const TruncatedSeries z = (-sum).map_coefficients([N](const Coefficient& c) {
    return Coefficient(c.padic().capped(N));
  });
  return trim_top(z, y.trunc_order(), 0);
}

TruncatedSeries padic_log_dagger(const TruncatedSeries& v) {
  require_padic(v, "padic_log_dagger");
  if (!is_nonnegative(v.ring())) {
    throw Error(ErrorCode::InvalidInput, "log-dagger is defined for units of Gamma+");
  }
  for (const auto& c : v.coefficients()) {
    if (!c.is_zero() && c.valuation() < 0) {
      throw Error(ErrorCode::NonUnit, "v has non-integral coefficients; not a unit of Gamma+");
    }
  }
  if (v.trunc_order() < 1 || v.coeff(0).is_zero() || v.coeff(0).valuation() != 0) {
    throw Error(ErrorCode::NonUnit, "constant term of v is not a unit of O");
  }
  return antiderive(dlog(v), RingLabel::RobbaPlus);
}

// ---------------------------------------------------------------- diagnostics

std::vector<std::pair<int, int>> valuation_profile(const TruncatedSeries& s) {
  require_padic(s, "valuation_profile");
  std::vector<std::pair<int, int>> out;
  for (int i = s.min_degree(); i < s.trunc_order(); ++i) {
    const auto& c = s.coeff(i);
    if (!c.is_zero()) out.emplace_back(i, c.valuation());
  }
  return out;
}

bool unboundedness_witness(const TruncatedSeries& s, int m) {
  require_padic(s, "unboundedness_witness");
  if (m < 1) throw Error(ErrorCode::InvalidInput, "m must be a positive integer");
  const long p = s.context().prime;
  std::vector<std::pair<long, int>> probes;  // (degree, expected valuation)
  long deg = m * p;
  for (int i = 1; deg < s.trunc_order(); ++i, deg *= p) probes.emplace_back(deg, -i);
  if (probes.size() < 2) {
    throw Error(ErrorCode::InsufficientWindow,
                "window O(u^" + std::to_string(s.trunc_order()) + ") reaches fewer than two degrees m*p^i");
  }
  return std::all_of(probes.begin(), probes.end(), [&](const auto& probe) {
    const auto c = s.coeff(static_cast<int>(probe.first));
    return !c.is_zero() && c.valuation() == probe.second;
  });
}

}  // namespace robba
