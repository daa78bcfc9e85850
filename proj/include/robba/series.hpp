#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "robba/coeff.hpp"

namespace robba {

/// Which ring a series is meant to live in. The label fixes the coefficient
/// kind, whether negative degrees are allowed, and whether coefficients must
/// be p-adically integral. Growth conditions (Gamma-dagger, Robba) are not
/// decidable on a finite window and are not enforced.
enum class RingLabel {
  FormalChar0,         // k[[t]], k = Q
  FormalLaurentChar0,  // k((t)), k = Q
  GammaPlus,           // O[[u]]
  EPlus,               // O[[u]][1/p]
  Gamma,
  E,
  Dagger,
  RobbaPlus,
  Robba,
};

bool is_nonnegative(RingLabel ring);
bool is_integral(RingLabel ring);
CoeffKind coefficient_kind(RingLabel ring);
std::string_view ring_name(RingLabel ring);
RingLabel parse_ring(std::string_view name);

/// A Laurent-window series sum_{i = min_degree}^{trunc_order - 1} c_i u^i
/// + O(u^trunc_order). Coefficients below min_degree are zero; everything at
/// or above trunc_order is unknown. The stored leading coefficient may be zero.
class TruncatedSeries {
public:
  TruncatedSeries() = default;
  TruncatedSeries(RingLabel ring, CoeffContext ctx, int min_degree,
                  std::vector<Coefficient> coefficients);

  static TruncatedSeries zero(RingLabel ring, CoeffContext ctx, int min_degree, int trunc_order);
  static TruncatedSeries constant(RingLabel ring, CoeffContext ctx, const Coefficient& c,
                                  int trunc_order);
  static TruncatedSeries monomial(RingLabel ring, CoeffContext ctx, const Coefficient& c,
                                  int degree, int trunc_order);

  RingLabel ring() const { return ring_; }
  const CoeffContext& context() const { return ctx_; }
  int min_degree() const { return min_degree_; }
  int trunc_order() const { return min_degree_ + static_cast<int>(coeffs_.size()); }
  const std::vector<Coefficient>& coefficients() const { return coeffs_; }

  /// Coefficient of u^degree: zero below the window, an insufficient-window
  /// error at or beyond trunc_order.
  Coefficient coeff(int degree) const;
  /// True when every known coefficient is zero (at its precision).
  bool is_zero() const;
  /// Degree of the first coefficient that is not zero, if any.
  std::optional<int> order() const;

  TruncatedSeries truncated(int trunc_order) const;
  TruncatedSeries relabeled(RingLabel ring) const;
  /// Same value with the window widened downwards to start at `degree`.
  TruncatedSeries extended_down(int degree) const;
  /// Multiply by u^k.
  TruncatedSeries shifted(int k) const;
  TruncatedSeries scaled(const Coefficient& c) const;
  /// Apply f to each stored coefficient (window unchanged).
  template <class F>
  TruncatedSeries map_coefficients(F&& f) const {
    std::vector<Coefficient> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(f(c));
    return TruncatedSeries(ring_, ctx_, min_degree_, std::move(out));
  }

  TruncatedSeries operator-() const;
  TruncatedSeries operator+(const TruncatedSeries& o) const;
  TruncatedSeries operator-(const TruncatedSeries& o) const;
  TruncatedSeries operator*(const TruncatedSeries& o) const;

  /// Compares the overlapping known window at the smaller precision; an empty
  /// overlap is a disjoint-windows error rather than a vacuous "equal".
  bool equals(const TruncatedSeries& o) const;

private:
  void validate() const;

  RingLabel ring_ = RingLabel::FormalChar0;
  CoeffContext ctx_{};
  int min_degree_ = 0;
  std::vector<Coefficient> coeffs_;
};

/// A 1-form f du; the coefficient series carries ring and window.
struct DifferentialForm {
  TruncatedSeries coefficient_series;

  RingLabel ring() const { return coefficient_series.ring(); }
  bool is_zero() const { return coefficient_series.is_zero(); }
  bool equals(const DifferentialForm& o) const {
    return coefficient_series.equals(o.coefficient_series);
  }
};

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm operator*(const TruncatedSeries& s, const DifferentialForm& f);

DifferentialForm derive(const TruncatedSeries& s);
/// The antiderivative with zero constant term. Fails with an ObstructionError
/// when the u^-1 du coefficient is nonzero, and with an integrality error when
/// `target` is integral but the result leaves O.
TruncatedSeries antiderive(const DifferentialForm& f, RingLabel target);
Coefficient residue(const DifferentialForm& f);

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries inverse(const TruncatedSeries& a);
DifferentialForm dlog(const TruncatedSeries& a);

int degree_of_unit(const TruncatedSeries& x);
std::pair<Coefficient, TruncatedSeries> unit_decompose(const TruncatedSeries& a);
TruncatedSeries formal_log(const TruncatedSeries& a);
TruncatedSeries padic_log_onemius_py(const TruncatedSeries& y);
TruncatedSeries padic_log_dagger(const TruncatedSeries& v);

std::vector<std::pair<int, int>> valuation_profile(const TruncatedSeries& s);
bool unboundedness_witness(const TruncatedSeries& s, int m);

}  // namespace robba
