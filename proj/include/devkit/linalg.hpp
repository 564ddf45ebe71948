#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "devkit/ring.hpp"

namespace devkit {

/// Exponent list of a module ⊕ R/r^{n_i}. The value ring.nilpotency() stands
/// for a free summand.
using Exps = std::vector<int>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(RingPtr ring, int rows, int cols);
  static Matrix identity(RingPtr ring, int n);
  static Matrix column(const std::vector<Element>& v);

  const RingPtr& ring() const { return ring_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Element& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Element& at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(const Element& c) const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }
  bool is_zero() const;

  Matrix transpose() const;
  Matrix block(int r0, int c0, int nr, int nc) const;
  Matrix col(int j) const { return block(0, j, rows_, 1); }
  Matrix hcat(const Matrix& o) const;
  Matrix vcat(const Matrix& o) const;
  Matrix select_cols(const std::vector<int>& idx) const;
  Matrix map(const std::function<Element(const Element&)>& f) const;

  void swap_rows(int a, int b);
  void swap_cols(int a, int b);
  /// row a += c * row b
  void add_row_multiple(int a, int b, const Element& c);
  /// col a += c * col b
  void add_col_multiple(int a, int b, const Element& c);
  void scale_row(int a, const Element& c);
  void scale_col(int a, const Element& c);

  std::string to_string() const;

 private:
  RingPtr ring_;
  int rows_ = 0, cols_ = 0;
  std::vector<Element> data_;
};

Matrix apply_endo(const RingEndo& e, const Matrix& m);
Matrix apply_morphism(const RingMorphism& a, const Matrix& m);
Matrix kronecker(const Matrix& a, const Matrix& b);
Matrix diag_r_powers(const RingPtr& ring, const Exps& exps);

/// Row i reduced modulo r^{exps[i]}.
Matrix reduce_rows(const Matrix& m, const Exps& exps);

/// P * A * Q == D with D[k][k] = r^{diag[k]} (diag[k] == nilpotency for zero).
struct SmithForm {
  Matrix P, Pinv, Q, Qinv;
  std::vector<int> diag;
};
SmithForm smith(const Matrix& a);

/// Some X with A X ≡ B in ⊕ R/r^{tgt} (columnwise), or nullopt.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b, const Exps& tgt);

/// Generators (columns, in R^cols) of {x : A x ≡ 0 in ⊕ R/r^{tgt}}.
Matrix kernel_generators(const Matrix& a, const Exps& tgt);

/// A submodule of ⊕ R/r^{ambient}, put in canonical shape: basis columns
/// with exponents sorted descending, zero summands dropped.
struct Submodule {
  Matrix basis;
  Exps exps;
};
Submodule submodule(const Matrix& gens, const Exps& ambient);

/// Cokernel of A : R^cols -> ⊕ R/r^{tgt}. `proj` maps target coordinates to
/// cokernel coordinates; `lift` has as columns lifts of the cokernel basis.
struct Quotient {
  Exps exps;
  Matrix proj, lift;
};
Quotient cokernel(const Matrix& a, const Exps& tgt);

/// Canonical echelon form of the span of `gens` inside ⊕ R/r^{ambient}
/// (rows, after embedding each summand into R by r^{N - n_i}).
Matrix howell_form(const Matrix& gens, const Exps& ambient);
bool same_span(const Matrix& a, const Matrix& b, const Exps& ambient);
bool in_span(const Matrix& v, const Matrix& gens, const Exps& ambient);

/// Flattening of R/r^n over the prime subring: the coefficient-table indices
/// that survive, each of the same order `exp` in the prime subring.
struct FlatLayout {
  std::vector<int> positions;
  int exp = 0;
};
FlatLayout flat_layout(const Ring& ring, int n);
/// Prime-subring matrix of the additive map f : ⊕R/r^{src} -> ⊕R/r^{tgt}
/// given by its action on coordinate columns (vectors over R).
struct FlatMap {
  Matrix matrix;  // over the prime subring
  Exps src_exps, tgt_exps;
};
FlatMap flatten_map(const RingPtr& ring, const Exps& src, const Exps& tgt,
                    const std::function<std::vector<Element>(const std::vector<Element>&)>& f);
/// Prime-subring coordinates of a vector in ⊕R/r^{exps}, and back.
std::vector<Int> flatten_vector(const std::vector<Element>& v, const Exps& exps);
std::vector<Element> unflatten_vector(const RingPtr& ring, const std::vector<Int>& c, const Exps& exps);

}  // namespace devkit
