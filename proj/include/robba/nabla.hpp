#pragma once

#include <vector>

#include "robba/series.hpp"

namespace robba {

/// Dense row-major matrix over a value type.
template <class T>
class Matrix {
public:
  Matrix() = default;
  Matrix(int rows, int cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const std::vector<T>& entries() const { return data_; }

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using SeriesMatrix = Matrix<TruncatedSeries>;
/// C with nabla(e_j) = sum_i e_i (x) C(i, j).
using ConnectionMatrix = Matrix<DifferentialForm>;

/// Block sizes (r_1, ..., r_n) of a filtration.
class Signature {
public:
  Signature() = default;
  explicit Signature(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int blocks() const { return static_cast<int>(parts_.size()); }
  int total() const { return total_; }
  int block_start(int block) const;
  /// Which block the basis index `index` belongs to.
  int block_of(int index) const;

  bool operator==(const Signature&) const = default;

private:
  std::vector<int> parts_;
  int total_ = 0;
};

struct FramedNablaModule {
  Signature signature;
  ConnectionMatrix connection;
  RingLabel ring = RingLabel::FormalChar0;
};

/// An element of U_r(R): identity diagonal blocks, zero below.
struct UnipotentMatrix {
  Signature signature;
  RingLabel ring = RingLabel::FormalChar0;
  SeriesMatrix entries;
};

/// The double-coset representative attached to a framed module: the right
/// U_r(K) ambiguity is fixed by V(0) = I, the left U_r(E+) one is not.
struct InvariantRepresentative {
  UnipotentMatrix matrix;
  bool normalized = false;
};

SeriesMatrix identity_matrix(int size, RingLabel ring, const CoeffContext& ctx, int trunc);
SeriesMatrix matmul(const SeriesMatrix& a, const SeriesMatrix& b);
/// Entrywise V(0).
Matrix<Coefficient> evaluate_at_zero(const SeriesMatrix& v);
/// V(0) = I at the precision of each entry.
bool normalized_at_zero(const SeriesMatrix& v);

FramedNablaModule validate_framed(const Signature& signature, const ConnectionMatrix& connection);

/// Power-series solution S = sum U_i t^i, U_0 = I, of S' = N S via
/// (i+1) U_{i+1} = sum_{j<=i} N_j U_{i-j}. Rational coefficients only: over
/// p-adic rings the division by i+1 produces unbounded denominators.
SeriesMatrix fundamental_solution(const ConnectionMatrix& n, int trunc);

/// Columns span the horizontal sections: s is horizontal iff ds + C s = 0.
SeriesMatrix horizontal_basis(const FramedNablaModule& module, int trunc);

/// V in U_r with dV = V C and V(0) = I, built superdiagonal by superdiagonal:
/// V_{i,i+d} = integral of (C_{i,i+d} + sum_{0<e<d} V_{i,i+e} C_{i+e,i+d}).
/// Over k((t)) and R an entry with nonzero residue raises ObstructionError.
UnipotentMatrix trivialize(const FramedNablaModule& module, int trunc);

/// Pulls a module over Gamma+ / E+ back to R+ and returns its normalized
/// trivialization.
InvariantRepresentative invariant(const FramedNablaModule& module, int trunc);

/// True iff dV - V C vanishes on the provable window below `trunc`.
bool matrix_residual(const FramedNablaModule& module, const SeriesMatrix& v, int trunc);

}  // namespace robba
