#include "devkit/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace devkit {

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(RingPtr ring, int rows, int cols) : ring_(std::move(ring)), rows_(rows), cols_(cols) {
  data_.assign(static_cast<std::size_t>(rows) * cols, ring_->zero());
}

Matrix Matrix::identity(RingPtr ring, int n) {
  Matrix m(ring, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = ring->one();
  return m;
}

Matrix Matrix::column(const std::vector<Element>& v) {
  if (v.empty()) throw Error(ErrorKind::InvalidArgument, "empty column needs a ring");
  Matrix m(v[0].ring(), static_cast<int>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m.at(static_cast<int>(i), 0) = v[i];
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw Error(ErrorKind::InvalidArgument, "matrix shapes do not compose");
  require_same_ring(ring_, o.ring_, "matmul");
  Matrix r(ring_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Element& a = at(i, k);
      if (a.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j)
        if (!o.at(k, j).is_zero()) r.at(i, j) += a * o.at(k, j);
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::InvalidArgument, "matrix shapes differ");
  Matrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] += o.data_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::InvalidArgument, "matrix shapes differ");
  Matrix r = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] -= o.data_[i];
  return r;
}

Matrix Matrix::scaled(const Element& c) const {
  Matrix r = *this;
  for (auto& x : r.data_) x = x * c;
  return r;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Element& e) { return e.is_zero(); });
}

Matrix Matrix::transpose() const {
  Matrix r(ring_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

Matrix Matrix::block(int r0, int c0, int nr, int nc) const {
  Matrix r(ring_, nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) r.at(i, j) = at(r0 + i, c0 + j);
  return r;
}

Matrix Matrix::hcat(const Matrix& o) const {
  if (rows_ != o.rows_) throw Error(ErrorKind::InvalidArgument, "hcat: row counts differ");
  Matrix r(ring_, rows_, cols_ + o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
    for (int j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
  }
  return r;
}

Matrix Matrix::vcat(const Matrix& o) const {
  if (cols_ != o.cols_) throw Error(ErrorKind::InvalidArgument, "vcat: column counts differ");
  Matrix r(ring_, rows_ + o.rows_, cols_);
  for (int j = 0; j < cols_; ++j) {
    for (int i = 0; i < rows_; ++i) r.at(i, j) = at(i, j);
    for (int i = 0; i < o.rows_; ++i) r.at(rows_ + i, j) = o.at(i, j);
  }
  return r;
}

Matrix Matrix::select_cols(const std::vector<int>& idx) const {
  Matrix r(ring_, rows_, static_cast<int>(idx.size()));
  for (int i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) r.at(i, static_cast<int>(j)) = at(i, idx[j]);
  return r;
}

Matrix Matrix::map(const std::function<Element(const Element&)>& f) const {
  if (data_.empty()) return *this;
  std::vector<Element> out;
  out.reserve(data_.size());
  for (const auto& x : data_) out.push_back(f(x));
  Matrix r;
  r.ring_ = out[0].ring();
  r.rows_ = rows_;
  r.cols_ = cols_;
  r.data_ = std::move(out);
  return r;
}

void Matrix::swap_rows(int a, int b) {
  if (a == b) return;
  for (int j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
}

void Matrix::swap_cols(int a, int b) {
  if (a == b) return;
  for (int i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
}

void Matrix::add_row_multiple(int a, int b, const Element& c) {
  if (c.is_zero()) return;
  for (int j = 0; j < cols_; ++j)
    if (!at(b, j).is_zero()) at(a, j) += c * at(b, j);
}

void Matrix::add_col_multiple(int a, int b, const Element& c) {
  if (c.is_zero()) return;
  for (int i = 0; i < rows_; ++i)
    if (!at(i, b).is_zero()) at(i, a) += c * at(i, b);
}

void Matrix::scale_row(int a, const Element& c) {
  for (int j = 0; j < cols_; ++j) at(a, j) = c * at(a, j);
}

void Matrix::scale_col(int a, const Element& c) {
  for (int i = 0; i < rows_; ++i) at(i, a) = at(i, a) * c;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << at(i, j).to_string();
  }
  os << "]";
  return os.str();
}

Matrix apply_endo(const RingEndo& e, const Matrix& m) {
  if (e.kind == RingEndo::Kind::Identity) return m;
  Matrix r = m;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r.at(i, j) = apply_endo(e, m.at(i, j));
  return r;
}

Matrix apply_morphism(const RingMorphism& a, const Matrix& m) {
  Matrix r(a.target(), m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r.at(i, j) = apply_morphism(a, m.at(i, j));
  return r;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  require_same_ring(a.ring(), b.ring(), "kronecker");
  Matrix r(a.ring(), a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) r.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
  return r;
}

Matrix diag_r_powers(const RingPtr& ring, const Exps& exps) {
  const int n = static_cast<int>(exps.size());
  Matrix d(ring, n, n);
  for (int i = 0; i < n; ++i) d.at(i, i) = ring->r_pow(exps[i]);
  return d;
}

Matrix reduce_rows(const Matrix& m, const Exps& exps) {
  Matrix r = m;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r.at(i, j) = reduce_mod_r_power(m.at(i, j), exps[i]);
  return r;
}

// ---------------------------------------------------------------------------
// Smith form

SmithForm smith(const Matrix& a) {
  const RingPtr& R = a.ring();
  const int m = a.rows(), n = a.cols(), nil = R->nilpotency();
  SmithForm s{Matrix::identity(R, m), Matrix::identity(R, m), Matrix::identity(R, n), Matrix::identity(R, n), {}};
  Matrix w = a;
  const int len = std::min(m, n);
  for (int k = 0; k < len; ++k) {
    int best_v = nil, bi = -1, bj = -1;
    for (int i = k; i < m && best_v > 0; ++i)
      for (int j = k; j < n; ++j) {
        int v = valuation(w.at(i, j));
        if (v < best_v) {
          best_v = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    if (bi < 0) {
      s.diag.resize(len, nil);
      break;
    }
    w.swap_rows(k, bi);
    s.P.swap_rows(k, bi);
    s.Pinv.swap_cols(k, bi);
    w.swap_cols(k, bj);
    s.Q.swap_cols(k, bj);
    s.Qinv.swap_rows(k, bj);
    Element u = divide_by_r_power(w.at(k, k), best_v);
    Element uinv = invert(u);
    w.scale_row(k, uinv);
    s.P.scale_row(k, uinv);
    s.Pinv.scale_col(k, u);
    for (int i = k + 1; i < m; ++i) {
      if (w.at(i, k).is_zero()) continue;
      Element c = divide_by_r_power(w.at(i, k), best_v);
      w.add_row_multiple(i, k, -c);
      s.P.add_row_multiple(i, k, -c);
      s.Pinv.add_col_multiple(k, i, c);
    }
    for (int j = k + 1; j < n; ++j) {
      if (w.at(k, j).is_zero()) continue;
      Element c = divide_by_r_power(w.at(k, j), best_v);
      w.add_col_multiple(j, k, -c);
      s.Q.add_col_multiple(j, k, -c);
      s.Qinv.add_row_multiple(k, j, c);
    }
    s.diag.push_back(best_v);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Solving, kernels, submodules

std::optional<Matrix> solve(const Matrix& a, const Matrix& b, const Exps& tgt) {
  const RingPtr& R = a.ring();
  const int nil = R->nilpotency();
  if (a.rows() != b.rows() || static_cast<int>(tgt.size()) != a.rows())
    throw Error(ErrorKind::InvalidArgument, "solve: shape mismatch");
  Matrix aug = a.hcat(diag_r_powers(R, tgt));
  SmithForm s = smith(aug);
  Matrix pb = s.P * b;
  Matrix y(R, aug.cols(), b.cols());
  for (int c = 0; c < b.cols(); ++c)
    for (int k = 0; k < a.rows(); ++k) {
      const Element& v = pb.at(k, c);
      const int d = s.diag[k];
      if (d >= nil) {
        if (!v.is_zero()) return std::nullopt;
        continue;
      }
      if (valuation(v) < d) return std::nullopt;
      y.at(k, c) = divide_by_r_power(v, d);
    }
  Matrix x = (s.Q * y).block(0, 0, a.cols(), b.cols());
  if (!reduce_rows(a * x - b, tgt).is_zero())
    throw Error(ErrorKind::PrecisionExhausted, "solution check failed at this precision");
  return x;
}

Matrix kernel_generators(const Matrix& a, const Exps& tgt) {
  const RingPtr& R = a.ring();
  const int nil = R->nilpotency();
  Matrix aug = a.hcat(diag_r_powers(R, tgt));
  SmithForm s = smith(aug);
  std::vector<Matrix> gens;
  for (int k = 0; k < aug.cols(); ++k) {
    Element coef = R->one();
    if (k < static_cast<int>(s.diag.size())) {
      const int d = s.diag[k];
      if (d == 0) continue;
      if (d < nil) coef = R->r_pow(nil - d);
    }
    Matrix g = s.Q.col(k).scaled(coef).block(0, 0, a.cols(), 1);
    if (!g.is_zero()) gens.push_back(std::move(g));
  }
  Matrix out(R, a.cols(), 0);
  for (const auto& g : gens) out = out.hcat(g);
  return out;
}

namespace {

void sort_desc(Matrix& basis, Exps& exps, Matrix* rows_too = nullptr) {
  std::vector<int> order(exps.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return exps[x] > exps[y]; });
  Exps sorted;
  for (int i : order) sorted.push_back(exps[i]);
  basis = basis.select_cols(order);
  if (rows_too) *rows_too = rows_too->transpose().select_cols(order).transpose();
  exps = std::move(sorted);
}

}  // namespace

Submodule submodule(const Matrix& gens, const Exps& ambient) {
  const RingPtr& R = gens.ring();
  const int nil = R->nilpotency();
  Submodule out{Matrix(R, gens.rows(), 0), {}};
  if (gens.cols() == 0) return out;
  Matrix rel = kernel_generators(gens, ambient);
  SmithForm s = smith(rel);
  Matrix b = gens * s.Pinv;
  std::vector<int> keep;
  for (int k = 0; k < gens.cols(); ++k) {
    int e = k < static_cast<int>(s.diag.size()) ? s.diag[k] : nil;
    if (e == 0) continue;
    keep.push_back(k);
    out.exps.push_back(e);
  }
  out.basis = reduce_rows(b.select_cols(keep), ambient);
  sort_desc(out.basis, out.exps);
  return out;
}

Quotient cokernel(const Matrix& a, const Exps& tgt) {
  const RingPtr& R = a.ring();
  Matrix aug = a.hcat(diag_r_powers(R, tgt));
  SmithForm s = smith(aug);
  std::vector<int> keep;
  Quotient q;
  for (int k = 0; k < a.rows(); ++k) {
    if (s.diag[k] == 0) continue;
    keep.push_back(k);
    q.exps.push_back(s.diag[k]);
  }
  q.lift = s.Pinv.select_cols(keep);
  q.proj = s.P.transpose().select_cols(keep).transpose();
  sort_desc(q.lift, q.exps, &q.proj);
  q.proj = reduce_rows(q.proj, q.exps);
  return q;
}

// ---------------------------------------------------------------------------
// Howell form

Matrix howell_form(const Matrix& gens, const Exps& ambient) {
  const RingPtr& R = gens.ring();
  const int nil = R->nilpotency(), c = gens.rows();
  using Row = std::vector<Element>;
  std::vector<Row> rem;
  for (int j = 0; j < gens.cols(); ++j) {
    Row row(c, R->zero());
    bool nz = false;
    for (int i = 0; i < c; ++i) {
      row[i] = reduce_mod_r_power(gens.at(i, j), ambient[i]) * R->r_pow(nil - ambient[i]);
      nz = nz || !row[i].is_zero();
    }
    if (nz) rem.push_back(std::move(row));
  }
  auto is_zero_row = [](const Row& r) {
    return std::all_of(r.begin(), r.end(), [](const Element& e) { return e.is_zero(); });
  };
  struct Pivot {
    int col, v;
    Row row;
  };
  std::vector<Pivot> piv;
  for (int j = 0; j < c; ++j) {
    int best = -1, bv = nil;
    for (std::size_t q = 0; q < rem.size(); ++q) {
      int v = valuation(rem[q][j]);
      if (v < bv) {
        bv = v;
        best = static_cast<int>(q);
      }
    }
    if (best < 0) continue;
    Row row = std::move(rem[best]);
    rem.erase(rem.begin() + best);
    Element uinv = invert(divide_by_r_power(row[j], bv));
    for (auto& e : row) e = uinv * e;
    for (auto& other : rem) {
      if (other[j].is_zero()) continue;
      Element f = divide_by_r_power(other[j], bv);
      for (int i = 0; i < c; ++i) other[i] -= f * row[i];
    }
    Row sat(c, R->zero());
    Element rp = R->r_pow(nil - bv);
    for (int i = 0; i < c; ++i) sat[i] = rp * row[i];
    if (!is_zero_row(sat)) rem.push_back(std::move(sat));
    rem.erase(std::remove_if(rem.begin(), rem.end(), is_zero_row), rem.end());
    piv.push_back({j, bv, std::move(row)});
  }
  for (std::size_t p = 0; p < piv.size(); ++p)
    for (std::size_t q = 0; q < p; ++q) {
      const Element& a = piv[q].row[piv[p].col];
      Element rm = reduce_mod_r_power(a, piv[p].v);
      if (rm == a) continue;
      Element quo = divide_by_r_power(a - rm, piv[p].v);
      for (int i = 0; i < c; ++i) piv[q].row[i] -= quo * piv[p].row[i];
    }
  Matrix h(R, static_cast<int>(piv.size()), c);
  for (std::size_t p = 0; p < piv.size(); ++p)
    for (int i = 0; i < c; ++i) h.at(static_cast<int>(p), i) = piv[p].row[i];
  return h;
}

bool same_span(const Matrix& a, const Matrix& b, const Exps& ambient) {
  return howell_form(a, ambient) == howell_form(b, ambient);
}

bool in_span(const Matrix& v, const Matrix& gens, const Exps& ambient) {
  return solve(gens, v, ambient).has_value();
}

// ---------------------------------------------------------------------------
// Flattening over the prime subring

FlatLayout flat_layout(const Ring& ring, int n) {
  FlatLayout l;
  if (n <= 0) return l;
  if (ring.r_is_x()) {
    for (int t = 0; t < ring.degree(); ++t)
      for (int x = 0; x < std::min(n, ring.high()); ++x) l.positions.push_back(ring.index(t, x));
    std::sort(l.positions.begin(), l.positions.end());
    l.exp = 1;
  } else {
    l.positions.resize(ring.dim());
    std::iota(l.positions.begin(), l.positions.end(), 0);
    l.exp = std::min(n, ring.precision());
  }
  return l;
}

std::vector<Int> flatten_vector(const std::vector<Element>& v, const Exps& exps) {
  std::vector<Int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Ring& R = *v[i].ring();
    Element red = reduce_mod_r_power(v[i], exps[i]);
    for (int pos : flat_layout(R, exps[i]).positions) out.push_back(red.coeffs()[pos]);
  }
  return out;
}

std::vector<Element> unflatten_vector(const RingPtr& ring, const std::vector<Int>& c, const Exps& exps) {
  std::vector<Element> out;
  std::size_t at = 0;
  for (int e : exps) {
    std::vector<Int> coeffs(ring->dim(), 0);
    for (int pos : flat_layout(*ring, e).positions) coeffs[pos] = c.at(at++);
    out.push_back(reduce_mod_r_power(Element(ring, std::move(coeffs)), e));
  }
  return out;
}

FlatMap flatten_map(const RingPtr& ring, const Exps& src, const Exps& tgt,
                    const std::function<std::vector<Element>(const std::vector<Element>&)>& f) {
  FlatMap fm;
  for (int e : src) {
    auto l = flat_layout(*ring, e);
    fm.src_exps.insert(fm.src_exps.end(), l.positions.size(), l.exp);
  }
  for (int e : tgt) {
    auto l = flat_layout(*ring, e);
    fm.tgt_exps.insert(fm.tgt_exps.end(), l.positions.size(), l.exp);
  }
  RingPtr P = ring->prime_subring();
  const int ns = static_cast<int>(fm.src_exps.size()), nt = static_cast<int>(fm.tgt_exps.size());
  fm.matrix = Matrix(P, nt, ns);
  for (int j = 0; j < ns; ++j) {
    std::vector<Int> unit(ns, 0);
    unit[j] = 1;
    auto img = flatten_vector(f(unflatten_vector(ring, unit, src)), tgt);
    for (int i = 0; i < nt; ++i) fm.matrix.at(i, j) = P->from_int(img[i]);
  }
  return fm;
}

}  // namespace devkit
