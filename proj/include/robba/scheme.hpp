#pragma once

#include <string>
#include <vector>

#include "robba/nabla.hpp"

namespace robba {

/// sum a_ij u^i x^j + O(u^trunc_u, x^trunc_x) over a base ring of
/// nonnegative-degree series (k[[t]], Gamma+, E+ or R+). The fiber variable
/// x is always a power-series variable.
class BiSeries {
public:
  BiSeries() = default;
  BiSeries(RingLabel ring, CoeffContext ctx, int trunc_u, int trunc_x,
           std::vector<Coefficient> coefficients);

  static BiSeries zero(RingLabel ring, CoeffContext ctx, int trunc_u, int trunc_x);
  /// c * u^i * x^j inside the given window.
  static BiSeries monomial(RingLabel ring, CoeffContext ctx, const Coefficient& c, int i, int j,
                           int trunc_u, int trunc_x);

  RingLabel ring() const { return ring_; }
  const CoeffContext& context() const { return ctx_; }
  int trunc_u() const { return trunc_u_; }
  int trunc_x() const { return trunc_x_; }
  const Coefficient& coeff(int i, int j) const;
  void set(int i, int j, const Coefficient& c);
  bool is_zero() const;

  BiSeries truncated(int trunc_u, int trunc_x) const;
  BiSeries relabeled(RingLabel ring) const;
  BiSeries derive_u() const;
  BiSeries derive_x() const;
  /// The coefficient of x^j as a series in u.
  TruncatedSeries fiber_coefficient(int j) const;

  BiSeries operator-() const;
  BiSeries operator+(const BiSeries& o) const;
  BiSeries operator-(const BiSeries& o) const;
  BiSeries operator*(const BiSeries& o) const;
  bool equals(const BiSeries& o) const;

private:
  void validate() const;

  RingLabel ring_ = RingLabel::FormalChar0;
  CoeffContext ctx_{};
  int trunc_u_ = 0;
  int trunc_x_ = 0;
  std::vector<Coefficient> coeffs_;  // row-major in (i, j)
};

/// f du + g dx. Both parts carry the same window.
struct BiForm {
  BiSeries du_part;
  BiSeries dx_part;

  bool is_zero() const { return du_part.is_zero() && dx_part.is_zero(); }
};

BiForm make_biform(const BiSeries& du_part, const BiSeries& dx_part);
BiForm operator+(const BiForm& a, const BiForm& b);

BiForm total_d(const BiSeries& s);
/// Coefficient of du ^ dx in d(f du + g dx) = (g_u - f_x) du ^ dx.
BiSeries exterior_d(const BiForm& f);

struct FramedFamily {
  Signature signature;
  Matrix<BiForm> connection;
  RingLabel ring = RingLabel::FormalChar0;
  std::string base_var = "t";
  std::string fiber_var = "x";
};

FramedFamily validate_family(const Signature& signature, const Matrix<BiForm>& connection,
                             std::string base_var = "t", std::string fiber_var = "x");

/// F = d_u C_x - d_x C_u + C_u C_x - C_x C_u, the du ^ dx coefficient matrix.
Matrix<BiSeries> curvature(const FramedFamily& family);

/// s(u, v(u) - 1) for a base series v; see section_pullback for the window rules.
TruncatedSeries substitute_section(const BiSeries& s, const TruncatedSeries& v);

/// Pullback along the section x := v - 1. The du parts are substituted, the
/// dx parts substituted and multiplied by v'.
FramedNablaModule section_pullback(const FramedFamily& family, const TruncatedSeries& v);

/// invariant(section_pullback(family, v)); over k[[t]] the normalized
/// trivialization plays the role of the invariant.
InvariantRepresentative line_integral(const FramedFamily& family, const TruncatedSeries& v,
                                      int trunc);
InvariantRepresentative line_integral(const FramedFamily& family, const TruncatedSeries& v);

/// Signature (1,1) with nabla(e_2) = e_1 (x) dx/(1+x) over k[[t, x]].
FramedFamily log_family_rational(int trunc_u, int trunc_x);
/// The same family over O[[u, x]].
FramedFamily log_family_padic(int prime, int abs_prec, int trunc_u, int trunc_x);

}  // namespace robba
