#pragma once
// Brute-force reference computations. Nothing here calls the library's
// linear algebra; rings are used only for element arithmetic.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "devkit/semilinear.hpp"

namespace oracle {

using devkit::Element;
using devkit::Int;
using devkit::RingPtr;

inline Int ipow(Int b, int e) {
  Int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// Every element of a finite ring, in lexicographic coefficient order.
inline std::vector<Element> all_elements(const RingPtr& R) {
  const int dim = R->dim();
  const Int m = R->modulus();
  std::vector<Element> out;
  std::vector<Int> c(dim, 0);
  while (true) {
    out.emplace_back(R, c);
    int i = 0;
    while (i < dim && ++c[i] == m) c[i++] = 0;
    if (i == dim) break;
  }
  return out;
}

/// Residue-field size q, so that |R/r^n| = q^n.
inline Int residue_size(const RingPtr& R) {
  return R->r_is_x() ? ipow(R->p(), R->base()->degree()) : ipow(R->p(), R->degree());
}

using Vec = std::vector<std::vector<Int>>;  // one coefficient vector per coordinate

inline Vec key(const std::vector<Element>& v) {
  Vec k;
  for (const auto& x : v) k.push_back(x.coeffs());
  return k;
}

/// The R-span of `cols` inside R^g, by closure: S <- {s + r c}.
inline std::size_t span_size_enum(const RingPtr& R, const std::vector<std::vector<Element>>& cols, int g) {
  const auto elems = all_elements(R);
  std::set<Vec> span{key(std::vector<Element>(g, R->zero()))};
  for (const auto& c : cols) {
    std::set<Vec> next;
    for (const auto& s : span)
      for (const auto& r : elems) {
        std::vector<Element> v;
        for (int i = 0; i < g; ++i) v.push_back(Element(R, s[i]) + r * c[i]);
        next.insert(key(v));
      }
    span = std::move(next);
  }
  return span.size();
}

/// Dimension over F_p of the R-span of `cols` in R^g, for rings with
/// prime-field coefficients (N == 1): Gaussian elimination on the additive
/// generators t^a X^b · c.
inline int span_dim_fp(const RingPtr& R, const std::vector<std::vector<Element>>& cols, int g) {
  const Int p = R->p();
  const int dim = R->dim();
  std::vector<std::vector<Int>> rows;
  for (const auto& c : cols)
    for (int k = 0; k < dim; ++k) {
      std::vector<Int> mono(dim, 0);
      mono[k] = 1;
      Element m(R, mono);
      std::vector<Int> row;
      for (int i = 0; i < g; ++i) {
        auto x = (m * c[i]).coeffs();
        row.insert(row.end(), x.begin(), x.end());
      }
      rows.push_back(row);
    }
  const int ncols = g * dim;
  int rank = 0;
  for (int col = 0; col < ncols && rank < static_cast<int>(rows.size()); ++col) {
    int piv = -1;
    for (int i = rank; i < static_cast<int>(rows.size()); ++i)
      if (rows[i][col] % p != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rank]);
    Int inv = 1;
    while ((rows[rank][col] * inv) % p != 1) ++inv;
    for (auto& x : rows[rank]) x = (x * inv) % p;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      if (i != rank && rows[i][col] % p != 0) {
        const Int f = rows[i][col];
        for (int j = 0; j < ncols; ++j) rows[i][j] = ((rows[i][j] - f * rows[rank][j]) % p + p) % p;
      }
    ++rank;
  }
  return rank;
}

/// Elements of ⊕ R/p^{n_i} for a Galois ring or finite field (r = p):
/// coefficients in [0, p^{n_i}).
inline std::vector<std::vector<Element>> all_vectors(const RingPtr& R, const std::vector<int>& exps) {
  std::vector<std::vector<Element>> out{{}};
  for (int n : exps) {
    const Int m = ipow(R->p(), n);
    std::vector<Element> coord;
    std::vector<Int> c(R->dim(), 0);
    while (true) {
      coord.emplace_back(R, c);
      int i = 0;
      while (i < R->dim() && ++c[i] == m) c[i++] = 0;
      if (i == R->dim()) break;
    }
    std::vector<std::vector<Element>> next;
    for (const auto& v : out)
      for (const auto& x : coord) {
        auto w = v;
        w.push_back(x);
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
  return out;
}

/// v -> A·e(v) evaluated coordinatewise, reduced mod p^{n_i}.
inline std::vector<Element> semilinear(const devkit::Matrix& A, const devkit::RingEndo& e,
                                       const std::vector<Element>& v, const std::vector<int>& exps) {
  std::vector<Element> out;
  for (int i = 0; i < A.rows(); ++i) {
    Element acc = A.ring()->zero();
    for (int j = 0; j < A.cols(); ++j) acc += A.at(i, j) * devkit::apply_endo(e, v[j]);
    out.push_back(devkit::reduce_mod_r_power(acc, exps[i]));
  }
  return out;
}

/// {v : A_s s(v) = v for all s} by exhaustive search.
inline std::set<Vec> fixed_set(const devkit::SModule& d, const std::vector<std::string>& labels) {
  std::set<Vec> out;
  for (const auto& v : all_vectors(d.ring(), d.base.exponents)) {
    bool fixed = true;
    for (const auto& l : labels)
      if (key(semilinear(d.action(l), d.monoid.find(l).endo, v, d.base.exponents)) != key(v)) {
        fixed = false;
        break;
      }
    if (fixed) out.insert(key(v));
  }
  return out;
}

/// Is v -> A v a bijection of the finite module ⊕R/p^{n_i}?
inline bool linear_bijective(const devkit::Matrix& A, const std::vector<int>& exps) {
  std::set<Vec> image;
  const auto vs = all_vectors(A.ring(), exps);
  for (const auto& v : vs) image.insert(key(semilinear(A, devkit::RingEndo::identity(), v, exps)));
  return image.size() == vs.size();
}

/// Binomial coefficient C(n, k) mod m from Pascal's triangle.
inline Int binom_mod(int n, int k, Int m) {
  std::vector<Int> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<Int> next(i + 1, 1);
    for (int j = 1; j < i; ++j) next[j] = (row[j - 1] + row[j]) % m;
    row = std::move(next);
  }
  return k < 0 || k > n ? 0 : row[k] % m;
}

}  // namespace oracle
