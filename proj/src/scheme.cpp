#include "robba/scheme.hpp"

#include <algorithm>
#include <string>

namespace robba {

namespace {

std::size_t slot(int i, int j, int trunc_x) { return static_cast<std::size_t>(i * trunc_x + j); }

CoeffContext merged(const BiSeries& a, const BiSeries& b) {
  if (a.ring() != b.ring()) {
    throw Error(ErrorCode::InvalidInput, "ring mismatch: " + std::string(ring_name(a.ring())) +
                                             " vs " + std::string(ring_name(b.ring())));
  }
  if (a.context().kind != b.context().kind || a.context().prime != b.context().prime) {
    throw Error(ErrorCode::InvalidInput, "bivariate series over different coefficient domains");
  }
  CoeffContext c = a.context();
  c.abs_prec = std::min(c.abs_prec, b.context().abs_prec);
  return c;
}

// Smallest valuation among nonzero coefficients, capped above at 0.
int valuation_floor(const BiSeries& s) {
  int v = 0;
  if (s.context().kind != CoeffKind::PAdic) return v;
  for (int i = 0; i < s.trunc_u(); ++i) {
    for (int j = 0; j < s.trunc_x(); ++j) {
      const auto& c = s.coeff(i, j);
      if (!c.is_zero()) v = std::min(v, c.valuation());
    }
  }
  return v;
}

Matrix<BiSeries> component(const Matrix<BiForm>& c, bool du) {
  Matrix<BiSeries> out(c.rows(), c.cols());
  for (int i = 0; i < c.rows(); ++i) {
    for (int j = 0; j < c.cols(); ++j) out(i, j) = du ? c(i, j).du_part : c(i, j).dx_part;
  }
  return out;
}

Matrix<BiSeries> product(const Matrix<BiSeries>& a, const Matrix<BiSeries>& b) {
  Matrix<BiSeries> out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      BiSeries acc = a(i, 0) * b(0, j);
      for (int k = 1; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- BiSeries

BiSeries::BiSeries(RingLabel ring, CoeffContext ctx, int trunc_u, int trunc_x,
                   std::vector<Coefficient> coefficients)
    : ring_(ring), ctx_(ctx), trunc_u_(trunc_u), trunc_x_(trunc_x), coeffs_(std::move(coefficients)) {
  validate();
}

void BiSeries::validate() const {
  if (!is_nonnegative(ring_)) {
    throw Error(ErrorCode::InvalidInput, "bivariate series need a power-series base ring, not " +
                                             std::string(ring_name(ring_)));
  }
  if (coefficient_kind(ring_) != ctx_.kind) {
    throw Error(ErrorCode::InvalidInput, "ring does not match the coefficient kind");
  }
  if (trunc_u_ < 0 || trunc_x_ < 0) throw Error(ErrorCode::InvalidInput, "negative truncation");
  if (coeffs_.size() != static_cast<std::size_t>(trunc_u_ * trunc_x_)) {
    throw Error(ErrorCode::InvalidInput, "coefficient grid does not match the window");
  }
  for (const auto& c : coeffs_) {
    if (c.kind() != ctx_.kind) throw Error(ErrorCode::InvalidInput, "coefficient kind mismatch");
    if (is_integral(ring_) && !c.is_zero() && c.valuation() < 0) {
      throw Error(ErrorCode::Integrality, "coefficient is not integral in " + std::string(ring_name(ring_)));
    }
  }
}

BiSeries BiSeries::zero(RingLabel ring, CoeffContext ctx, int trunc_u, int trunc_x) {
  const int tu = std::max(0, trunc_u);
  const int tx = std::max(0, trunc_x);
  return BiSeries(ring, ctx, tu, tx, std::vector<Coefficient>(static_cast<std::size_t>(tu * tx), ctx.zero()));
}

BiSeries BiSeries::monomial(RingLabel ring, CoeffContext ctx, const Coefficient& c, int i, int j,
                            int trunc_u, int trunc_x) {
  BiSeries s = zero(ring, ctx, trunc_u, trunc_x);
  if (i < s.trunc_u_ && j < s.trunc_x_) s.set(i, j, c);
  return s;
}

const Coefficient& BiSeries::coeff(int i, int j) const {
  if (i < 0 || j < 0) throw Error(ErrorCode::ExponentOutOfWindow, "negative exponent in a bivariate series");
  if (i >= trunc_u_ || j >= trunc_x_) {
    throw Error(ErrorCode::InsufficientWindow, "u^" + std::to_string(i) + "*x^" + std::to_string(j) +
                                                   " lies outside the known window");
  }
  return coeffs_[slot(i, j, trunc_x_)];
}

void BiSeries::set(int i, int j, const Coefficient& c) {
  (void)coeff(i, j);
  if (c.kind() != ctx_.kind) throw Error(ErrorCode::InvalidInput, "coefficient kind mismatch");
  if (is_integral(ring_) && !c.is_zero() && c.valuation() < 0) {
    throw Error(ErrorCode::Integrality, "coefficient is not integral in " + std::string(ring_name(ring_)));
  }
  coeffs_[slot(i, j, trunc_x_)] = c;
}

bool BiSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Coefficient& c) { return c.is_zero(); });
}

BiSeries BiSeries::truncated(int trunc_u, int trunc_x) const {
  const int tu = std::clamp(trunc_u, 0, trunc_u_);
  const int tx = std::clamp(trunc_x, 0, trunc_x_);
  std::vector<Coefficient> c;
  c.reserve(static_cast<std::size_t>(tu * tx));
  for (int i = 0; i < tu; ++i) {
    for (int j = 0; j < tx; ++j) c.push_back(coeff(i, j));
  }
  return BiSeries(ring_, ctx_, tu, tx, std::move(c));
}

BiSeries BiSeries::relabeled(RingLabel ring) const { return BiSeries(ring, ctx_, trunc_u_, trunc_x_, coeffs_); }

BiSeries BiSeries::derive_u() const {
  const int tu = std::max(0, trunc_u_ - 1);
  std::vector<Coefficient> c;
  for (int i = 0; i < tu; ++i) {
    for (int j = 0; j < trunc_x_; ++j) c.push_back(coeff(i + 1, j).mul_int(i + 1));
  }
  return BiSeries(ring_, ctx_, tu, trunc_x_, std::move(c));
}

BiSeries BiSeries::derive_x() const {
  const int tx = std::max(0, trunc_x_ - 1);
  std::vector<Coefficient> c;
  for (int i = 0; i < trunc_u_; ++i) {
    for (int j = 0; j < tx; ++j) c.push_back(coeff(i, j + 1).mul_int(j + 1));
  }
  return BiSeries(ring_, ctx_, trunc_u_, tx, std::move(c));
}

TruncatedSeries BiSeries::fiber_coefficient(int j) const {
  std::vector<Coefficient> c;
  for (int i = 0; i < trunc_u_; ++i) c.push_back(coeff(i, j));
  return TruncatedSeries(ring_, ctx_, 0, std::move(c));
}

BiSeries BiSeries::operator-() const {
  std::vector<Coefficient> c;
  for (const auto& x : coeffs_) c.push_back(-x);
  return BiSeries(ring_, ctx_, trunc_u_, trunc_x_, std::move(c));
}

BiSeries BiSeries::operator+(const BiSeries& o) const {
  const CoeffContext ctx = merged(*this, o);
  const int tu = std::min(trunc_u_, o.trunc_u_);
  const int tx = std::min(trunc_x_, o.trunc_x_);
  std::vector<Coefficient> c;
  for (int i = 0; i < tu; ++i) {
    for (int j = 0; j < tx; ++j) c.push_back(coeff(i, j) + o.coeff(i, j));
  }
  return BiSeries(ring_, ctx, tu, tx, std::move(c));
}

BiSeries BiSeries::operator-(const BiSeries& o) const { return *this + (-o); }

BiSeries BiSeries::operator*(const BiSeries& o) const {
  const CoeffContext ctx = merged(*this, o);
  const int tu = std::min(trunc_u_, o.trunc_u_);
  const int tx = std::min(trunc_x_, o.trunc_x_);
  BiSeries out = zero(ring_, ctx, tu, tx);
  for (int i = 0; i < tu; ++i) {
    for (int j = 0; j < tx; ++j) {
      Coefficient acc = ctx.zero();
      for (int k = 0; k <= i; ++k) {
        for (int l = 0; l <= j; ++l) acc += coeff(k, l) * o.coeff(i - k, j - l);
      }
      out.coeffs_[slot(i, j, tx)] = acc;
    }
  }
  return out;
}

bool BiSeries::equals(const BiSeries& o) const {
  merged(*this, o);
  const int tu = std::min(trunc_u_, o.trunc_u_);
  const int tx = std::min(trunc_x_, o.trunc_x_);
  if (tu == 0 || tx == 0) {
    throw Error(ErrorCode::DisjointWindows, "bivariate windows do not overlap; comparison is undefined");
  }
  for (int i = 0; i < tu; ++i) {
    for (int j = 0; j < tx; ++j) {
      if (!coeff(i, j).equals(o.coeff(i, j))) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- forms

BiForm make_biform(const BiSeries& du_part, const BiSeries& dx_part) {
  const int tu = std::min(du_part.trunc_u(), dx_part.trunc_u());
  const int tx = std::min(du_part.trunc_x(), dx_part.trunc_x());
  return {du_part.truncated(tu, tx), dx_part.truncated(tu, tx)};
}

BiForm operator+(const BiForm& a, const BiForm& b) {
  return make_biform(a.du_part + b.du_part, a.dx_part + b.dx_part);
}

BiForm total_d(const BiSeries& s) { return make_biform(s.derive_u(), s.derive_x()); }

BiSeries exterior_d(const BiForm& f) { return f.dx_part.derive_u() - f.du_part.derive_x(); }

// ---------------------------------------------------------------- families

FramedFamily validate_family(const Signature& signature, const Matrix<BiForm>& connection,
                             std::string base_var, std::string fiber_var) {
  const int r = signature.total();
  if (connection.rows() != r || connection.cols() != r) {
    throw Error(ErrorCode::InvalidInput, "connection size does not match the signature");
  }
  if (base_var == fiber_var) throw Error(ErrorCode::InvalidInput, "base and fiber variables coincide");
  const RingLabel ring = connection(0, 0).du_part.ring();
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const auto& f = connection(i, j);
      if (f.du_part.ring() != ring || f.dx_part.ring() != ring) {
        throw Error(ErrorCode::InvalidInput, "connection entries mix rings");
      }
      const int bi = signature.block_of(i);
      const int bj = signature.block_of(j);
      if (bi >= bj && !f.is_zero()) {
        throw Error(ErrorCode::NotFramed,
                    "block (" + std::to_string(bi + 1) + "," + std::to_string(bj + 1) +
                        ") of the family connection is nonzero at entry (" + std::to_string(i + 1) +
                        "," + std::to_string(j + 1) + ")");
      }
    }
  }
  return {signature, connection, ring, std::move(base_var), std::move(fiber_var)};
}

Matrix<BiSeries> curvature(const FramedFamily& family) {
  const auto cu = component(family.connection, true);
  const auto cx = component(family.connection, false);
  const auto ux = product(cu, cx);
  const auto xu = product(cx, cu);
  Matrix<BiSeries> f(cu.rows(), cu.cols());
  for (int i = 0; i < f.rows(); ++i) {
    for (int j = 0; j < f.cols(); ++j) {
      f(i, j) = cx(i, j).derive_u() - cu(i, j).derive_x() + ux(i, j) - xu(i, j);
    }
  }
  return f;
}

TruncatedSeries substitute_section(const BiSeries& s, const TruncatedSeries& v) {
  if (!is_nonnegative(v.ring()) || v.context().kind != s.context().kind ||
      v.context().prime != s.context().prime) {
    throw Error(ErrorCode::InvalidInput, "the section must be a power series over the family's base");
  }
  const TruncatedSeries vv = v.relabeled(s.ring());
  const CoeffContext& ctx = s.context();
  const TruncatedSeries w = vv - TruncatedSeries::constant(s.ring(), ctx, ctx.integer(1), vv.trunc_order());
  const int out = std::min(s.trunc_u(), w.trunc_order());
  if (out < 1) throw Error(ErrorCode::InsufficientWindow, "the section has an empty window");
  if (s.trunc_x() < out) {
    throw Error(ErrorCode::InsufficientWindow,
                "fiber window O(x^" + std::to_string(s.trunc_x()) + ") is shorter than the base window O(u^" +
                    std::to_string(out) + ") the substitution has to fill");
  }

  int shift = 0;  // x-tail of degree >= trunc_x is divisible by p^(shift * (trunc_x - k)) at u^k
  const Coefficient w0 = w.coeff(0);
  if (ctx.kind == CoeffKind::Rational) {
    if (!w0.is_zero()) {
      throw Error(ErrorCode::InsufficientWindow,
                  "v(0) != 1: substituting x := v - 1 needs every power of x");
    }
  } else {
    for (const auto& c : w.coefficients()) {
      if (!c.is_zero() && c.valuation() < 0) {
        throw Error(ErrorCode::InvalidInput, "the section v - 1 must be integral");
      }
    }
    shift = w0.is_zero() ? w0.padic().abs_prec() : w0.valuation();
    if (shift < 1) {
      throw Error(ErrorCode::InsufficientWindow,
                  "v(0) is not 1 mod p: substituting x := v - 1 does not converge on the window");
    }
  }

  // Horner in x.
  TruncatedSeries acc = s.fiber_coefficient(s.trunc_x() - 1).truncated(out);
  for (int j = s.trunc_x() - 2; j >= 0; --j) {
    acc = (acc * w + s.fiber_coefficient(j)).truncated(out);
  }
  if (ctx.kind == CoeffKind::PAdic) {
    const int floor = valuation_floor(s);
    int k = acc.min_degree();
    acc = acc.map_coefficients([&](const Coefficient& c) {
      const long cap = static_cast<long>(shift) * (s.trunc_x() - k++) + floor;
      return Coefficient(c.padic().capped(static_cast<int>(std::min<long>(cap, c.padic().abs_prec()))));
    });
  }
  return acc;
}

FramedNablaModule section_pullback(const FramedFamily& family, const TruncatedSeries& v) {
  const auto& c = family.connection;
  const TruncatedSeries dv = derive(v.relabeled(family.ring)).coefficient_series;
  ConnectionMatrix out(c.rows(), c.cols());
  for (int i = 0; i < c.rows(); ++i) {
    for (int j = 0; j < c.cols(); ++j) {
      const TruncatedSeries du = substitute_section(c(i, j).du_part, v);
      const TruncatedSeries dx = substitute_section(c(i, j).dx_part, v);
      out(i, j) = {du + dx * dv};
    }
  }
  return validate_framed(family.signature, out);
}

InvariantRepresentative line_integral(const FramedFamily& family, const TruncatedSeries& v, int trunc) {
  const FramedNablaModule m = section_pullback(family, v);
  if (m.ring == RingLabel::FormalChar0) {
    UnipotentMatrix u = trivialize(m, trunc);
    const bool normalized = normalized_at_zero(u.entries);
    return {std::move(u), normalized};
  }
  return invariant(m, trunc);
}

InvariantRepresentative line_integral(const FramedFamily& family, const TruncatedSeries& v) {
  return line_integral(family, v, v.trunc_order());
}

namespace {

FramedFamily log_family(RingLabel ring, const CoeffContext& ctx, int trunc_u, int trunc_x,
                        std::string base_var) {
  BiSeries geometric = BiSeries::zero(ring, ctx, trunc_u, trunc_x);
  if (trunc_u > 0) {
    for (int j = 0; j < trunc_x; ++j) geometric.set(0, j, ctx.integer(j % 2 == 0 ? 1 : -1));
  }
  const BiSeries zero = BiSeries::zero(ring, ctx, trunc_u, trunc_x);
  Matrix<BiForm> c(2, 2, BiForm{zero, zero});
  c(0, 1) = BiForm{zero, geometric};
  return validate_family(Signature({1, 1}), c, std::move(base_var), "x");
}

}  // namespace

FramedFamily log_family_rational(int trunc_u, int trunc_x) {
  return log_family(RingLabel::FormalChar0, CoeffContext::rational(), trunc_u, trunc_x, "t");
}

FramedFamily log_family_padic(int prime, int abs_prec, int trunc_u, int trunc_x) {
  return log_family(RingLabel::GammaPlus, CoeffContext::padic(prime, abs_prec), trunc_u, trunc_x, "u");
}

}  // namespace robba
