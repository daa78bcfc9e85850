#include "robba/nabla.hpp"

#include <numeric>
#include <string>

namespace robba {

namespace {

CoeffContext connection_context(const ConnectionMatrix& c) {
  if (c.rows() == 0) return CoeffContext::rational();
  CoeffContext ctx = c(0, 0).coefficient_series.context();
  for (const auto& f : c.entries()) {
    ctx.abs_prec = std::min(ctx.abs_prec, f.coefficient_series.context().abs_prec);
  }
  return ctx;
}

int connection_trunc(const ConnectionMatrix& c) {
  int t = std::numeric_limits<int>::max();
  for (const auto& f : c.entries()) t = std::min(t, f.coefficient_series.trunc_order());
  return t;
}

ConnectionMatrix relabel(const ConnectionMatrix& c, RingLabel ring) {
  ConnectionMatrix out(c.rows(), c.cols());
  for (int i = 0; i < c.rows(); ++i) {
    for (int j = 0; j < c.cols(); ++j) out(i, j) = {c(i, j).coefficient_series.relabeled(ring)};
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- Signature

Signature::Signature(std::vector<int> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw Error(ErrorCode::InvalidInput, "signature must have at least one part");
  for (int r : parts_) {
    if (r < 1) throw Error(ErrorCode::InvalidInput, "signature parts must be positive");
  }
  total_ = std::accumulate(parts_.begin(), parts_.end(), 0);
}

int Signature::block_start(int block) const {
  return std::accumulate(parts_.begin(), parts_.begin() + block, 0);
}

int Signature::block_of(int index) const {
  int start = 0;
  for (int b = 0; b < blocks(); ++b) {
    start += parts_[static_cast<std::size_t>(b)];
    if (index < start) return b;
  }
  throw Error(ErrorCode::InvalidInput, "basis index outside the signature");
}

// ---------------------------------------------------------------- matrices

SeriesMatrix identity_matrix(int size, RingLabel ring, const CoeffContext& ctx, int trunc) {
  SeriesMatrix m(size, size, TruncatedSeries::zero(ring, ctx, 0, trunc));
  for (int i = 0; i < size; ++i) m(i, i) = TruncatedSeries::constant(ring, ctx, ctx.integer(1), trunc);
  return m;
}

SeriesMatrix matmul(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::InvalidInput, "matrix shapes do not match");
  SeriesMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      TruncatedSeries acc = a(i, 0) * b(0, j);
      for (int k = 1; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

Matrix<Coefficient> evaluate_at_zero(const SeriesMatrix& v) {
  Matrix<Coefficient> out(v.rows(), v.cols());
  for (int i = 0; i < v.rows(); ++i) {
    for (int j = 0; j < v.cols(); ++j) out(i, j) = v(i, j).coeff(0);
  }
  return out;
}

bool normalized_at_zero(const SeriesMatrix& v) {
  for (int i = 0; i < v.rows(); ++i) {
    for (int j = 0; j < v.cols(); ++j) {
      const Coefficient x = v(i, j).coeff(0);
      const Coefficient want = i == j ? v(i, j).context().integer(1) : v(i, j).context().zero();
      if (!x.equals(want)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- framed modules

FramedNablaModule validate_framed(const Signature& signature, const ConnectionMatrix& connection) {
  const int r = signature.total();
  if (connection.rows() != r || connection.cols() != r) {
    throw Error(ErrorCode::InvalidInput, "connection is " + std::to_string(connection.rows()) + "x" +
                                             std::to_string(connection.cols()) +
                                             " but the signature has rank " + std::to_string(r));
  }
  const RingLabel ring = connection(0, 0).ring();
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const auto& f = connection(i, j);
      if (f.ring() != ring) throw Error(ErrorCode::InvalidInput, "connection entries mix rings");
      const int bi = signature.block_of(i);
      const int bj = signature.block_of(j);
      if (bi >= bj && !f.is_zero()) {
        throw Error(ErrorCode::NotFramed,
                    "block (" + std::to_string(bi + 1) + "," + std::to_string(bj + 1) +
                        ") of the connection is nonzero at entry (" + std::to_string(i + 1) + "," +
                        std::to_string(j + 1) + "); frame is not compatible with the filtration");
      }
    }
  }
  return {signature, connection, ring};
}

SeriesMatrix fundamental_solution(const ConnectionMatrix& n, int trunc) {
  if (n.rows() != n.cols()) throw Error(ErrorCode::InvalidInput, "connection must be square");
  const int r = n.rows();
  if (r == 0) return {};
  const CoeffContext ctx = connection_context(n);
  if (ctx.kind != CoeffKind::Rational) {
    throw Error(ErrorCode::InvalidInput,
                "the recurrence needs characteristic-0 coefficients; over p-adic rings use trivialize");
  }
  const RingLabel ring = n(0, 0).ring();
  if (!is_nonnegative(ring)) {
    throw Error(ErrorCode::InvalidInput, "fundamental_solution works over k[[t]]");
  }
  // U_{i+1} needs N_0 .. N_i, so the forms' window bounds the solution's.
  const int t = std::min(trunc, connection_trunc(n) + 1);
  if (t < 1) throw Error(ErrorCode::InsufficientWindow, "connection window is empty");

  std::vector<Matrix<Rational>> nj;
  for (int j = 0; j + 1 < t; ++j) {
    Matrix<Rational> m(r, r);
    for (int a = 0; a < r; ++a) {
      for (int b = 0; b < r; ++b) m(a, b) = n(a, b).coefficient_series.coeff(j).rational();
    }
    nj.push_back(std::move(m));
  }
  std::vector<Matrix<Rational>> u;
  Matrix<Rational> id(r, r, Rational(0));
  for (int a = 0; a < r; ++a) id(a, a) = 1;
  u.push_back(id);
  for (int i = 0; i + 1 < t; ++i) {
    Matrix<Rational> next(r, r, Rational(0));
    for (int j = 0; j <= i; ++j) {
      const auto& nm = nj[static_cast<std::size_t>(j)];
      const auto& um = u[static_cast<std::size_t>(i - j)];
      for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) {
          Rational acc = 0;
          for (int c = 0; c < r; ++c) acc += nm(a, c) * um(c, b);
          next(a, b) += acc;
        }
      }
    }
    for (int a = 0; a < r; ++a) {
      for (int b = 0; b < r; ++b) next(a, b) /= i + 1;
    }
    u.push_back(std::move(next));
  }

  SeriesMatrix s(r, r);
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      std::vector<Coefficient> c;
      for (int i = 0; i < t; ++i) c.emplace_back(u[static_cast<std::size_t>(i)](a, b));
      s(a, b) = TruncatedSeries(ring, ctx, 0, std::move(c));
    }
  }
  return s;
}

SeriesMatrix horizontal_basis(const FramedNablaModule& module, int trunc) {
  const auto& c = module.connection;
  ConnectionMatrix neg(c.rows(), c.cols());
  for (int i = 0; i < c.rows(); ++i) {
    for (int j = 0; j < c.cols(); ++j) neg(i, j) = {-c(i, j).coefficient_series};
  }
  return fundamental_solution(neg, trunc);
}

UnipotentMatrix trivialize(const FramedNablaModule& module, int trunc) {
  const RingLabel ring = module.ring;
  // Over the Laurent rings integration can fail; the obstruction then
  // surfaces with its residue.
  if (ring != RingLabel::FormalChar0 && ring != RingLabel::FormalLaurentChar0 &&
      ring != RingLabel::RobbaPlus && ring != RingLabel::Robba) {
    throw Error(ErrorCode::InvalidInput,
                "trivialize works over k[[t]], k((t)), R+ or R; got " + std::string(ring_name(ring)));
  }
  const Signature& sig = module.signature;
  const auto& c = module.connection;
  const int r = sig.total();
  const CoeffContext ctx = connection_context(c);
  SeriesMatrix v = identity_matrix(r, ring, ctx, trunc);

  for (int offset = 1; offset < sig.blocks(); ++offset) {
    for (int bi = 0; bi + offset < sig.blocks(); ++bi) {
      const int bj = bi + offset;
      const int i0 = sig.block_start(bi);
      const int j0 = sig.block_start(bj);
      for (int i = i0; i < i0 + sig.parts()[static_cast<std::size_t>(bi)]; ++i) {
        for (int j = j0; j < j0 + sig.parts()[static_cast<std::size_t>(bj)]; ++j) {
          DifferentialForm integrand = c(i, j);
          for (int e = 1; e < offset; ++e) {
            const int mid = sig.block_start(bi + e);
            for (int k = mid; k < mid + sig.parts()[static_cast<std::size_t>(bi + e)]; ++k) {
              integrand = integrand + v(i, k) * c(k, j);
            }
          }
          v(i, j) = antiderive(integrand, ring).truncated(trunc);
        }
      }
    }
  }
  return {sig, ring, std::move(v)};
}

InvariantRepresentative invariant(const FramedNablaModule& module, int trunc) {
  const RingLabel ring = module.ring;
  if (ring != RingLabel::GammaPlus && ring != RingLabel::EPlus && ring != RingLabel::RobbaPlus) {
    throw Error(ErrorCode::InvalidInput, "invariant needs a module over Gamma+ or E+; got " +
                                             std::string(ring_name(ring)));
  }
  FramedNablaModule pulled{module.signature, relabel(module.connection, RingLabel::RobbaPlus),
                           RingLabel::RobbaPlus};
  UnipotentMatrix v = trivialize(pulled, trunc);
  const bool normalized = normalized_at_zero(v.entries);
  return {std::move(v), normalized};
}

bool matrix_residual(const FramedNablaModule& module, const SeriesMatrix& v, int trunc) {
  const auto& c = module.connection;
  if (v.rows() != c.rows() || v.cols() != c.cols()) {
    throw Error(ErrorCode::InvalidInput, "V and the connection have different sizes");
  }
  const int r = v.rows();
  if (r == 0) return true;
  const RingLabel ring = v(0, 0).ring();
  const ConnectionMatrix cc = relabel(c, ring);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      TruncatedSeries lhs = derive(v(i, j)).coefficient_series;
      TruncatedSeries rhs = (v(i, 0) * cc(0, j)).coefficient_series;
      for (int k = 1; k < r; ++k) rhs = rhs + (v(i, k) * cc(k, j)).coefficient_series;
      const TruncatedSeries diff = (lhs - rhs).truncated(trunc - 1);
      if (diff.coefficients().empty() || !diff.is_zero()) return false;
    }
  }
  return true;
}

}  // namespace robba
