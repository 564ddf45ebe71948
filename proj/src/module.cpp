#include "devkit/module.hpp"

#include <algorithm>
#include <sstream>

namespace devkit {

CanonicalModule CanonicalModule::free(const RingPtr& ring, int rank) {
  return {ring, Exps(rank, ring->nilpotency())};
}

bool CanonicalModule::operator==(const CanonicalModule& o) const {
  return same_ring(ring, o.ring) && exponents == o.exponents;
}

std::string CanonicalModule::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rank(); ++i) {
    os << (i ? "," : "");
    if (is_free_summand(i))
      os << "inf@" << infinity();
    else
      os << exponents[i];
  }
  os << "]";
  return os.str();
}

SmithDecomposition smith_decompose(const PresentedModule& m) {
  const int a = m.relations.rows();
  Exps free_exps(a, m.ring->nilpotency());
  Quotient q = cokernel(m.relations, free_exps);
  SmithDecomposition out{{m.ring, q.exps}, q.proj, q.lift, smith(m.relations)};
  return out;
}

std::vector<int> mu_devissage(const CanonicalModule& m) {
  std::vector<int> mu(m.infinity(), 0);
  for (int n = 0; n < m.infinity(); ++n)
    for (int e : m.exponents) mu[n] += e > n;
  return mu;
}

std::vector<int> tau_devissage(const CanonicalModule& m) {
  std::vector<int> tau(m.infinity(), 0);
  for (int n = 0; n < m.infinity(); ++n)
    for (int e : m.exponents) tau[n] += e < m.infinity() && e >= n + 1;
  return tau;
}

Exps exponents_from_mu(const std::vector<int>& mu, int nilpotency) {
  Exps out;
  for (int n = nilpotency; n >= 1; --n) {
    int here = n - 1 < static_cast<int>(mu.size()) ? mu[n - 1] : 0;
    int above = n < static_cast<int>(mu.size()) ? mu[n] : 0;
    if (n == nilpotency) above = 0;
    out.insert(out.end(), here - above, n);
  }
  return out;
}

int torsion_bound(const CanonicalModule& m) {
  int b = 0;
  for (int i = 0; i < m.rank(); ++i)
    if (!m.is_free_summand(i)) b = std::max(b, m.exponents[i]);
  return b;
}

GradedPieces graded_pieces(const CanonicalModule& m, int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "graded_pieces needs k >= 0");
  const RingPtr& R = m.ring;
  GradedPieces g{{R, {}}, Matrix(R, m.rank(), 0), {R, {}}, Matrix(R, m.rank(), 0)};
  std::vector<Matrix> rk_cols, tor_cols;
  for (int i = 0; i < m.rank(); ++i) {
    const int e = m.exponents[i];
    Matrix unit(R, m.rank(), 1);
    if (m.is_free_summand(i)) {
      if (k < m.infinity()) {
        g.rk.exponents.push_back(e);
        unit.at(i, 0) = R->r_pow(k);
        rk_cols.push_back(unit);
      }
      continue;
    }
    if (e > k) {
      g.rk.exponents.push_back(e - k);
      unit.at(i, 0) = R->r_pow(k);
      rk_cols.push_back(unit);
    }
    const int t = std::min(e, k);
    if (t > 0) {
      Matrix u2(R, m.rank(), 1);
      g.torsion.exponents.push_back(t);
      u2.at(i, 0) = R->r_pow(e - t);
      tor_cols.push_back(u2);
    }
  }
  for (const auto& c : rk_cols) g.rk_inclusion = g.rk_inclusion.hcat(c);
  for (const auto& c : tor_cols) g.torsion_inclusion = g.torsion_inclusion.hcat(c);
  return g;
}

CanonicalModule tensor_modules(const CanonicalModule& m1, const CanonicalModule& m2) {
  require_same_ring(m1.ring, m2.ring, "tensor_modules");
  CanonicalModule out{m1.ring, {}};
  for (int a : m1.exponents)
    for (int b : m2.exponents) out.exponents.push_back(std::min(a, b));
  return out;
}

CanonicalModule hom_modules(const CanonicalModule& m1, const CanonicalModule& m2) {
  require_same_ring(m1.ring, m2.ring, "hom_modules");
  CanonicalModule out{m1.ring, {}};
  for (int b : m2.exponents)
    for (int a : m1.exponents) out.exponents.push_back(std::min(a, b));
  return out;
}

void validate_hom(const ModuleHom& f) {
  require_same_ring(f.source.ring, f.target.ring, "module hom");
  if (f.matrix.rows() != f.target.rank() || f.matrix.cols() != f.source.rank())
    throw Error(ErrorKind::InvalidArgument, "hom matrix has the wrong shape",
                {{"rows", f.matrix.rows()}, {"cols", f.matrix.cols()}});
  for (int i = 0; i < f.target.rank(); ++i)
    for (int j = 0; j < f.source.rank(); ++j) {
      const int need = f.target.exponents[i] - f.source.exponents[j];
      if (need <= 0) continue;
      const Element x = reduce_mod_r_power(f.matrix.at(i, j), f.target.exponents[i]);
      if (valuation(x) < need)
        throw Error(ErrorKind::InvalidArgument, "entry violates the torsion column condition",
                    {{"row", i}, {"col", j}, {"entry", x.to_string()}, {"required_valuation", need}});
    }
}

ModuleHom normalize_hom(ModuleHom f) {
  f.matrix = reduce_rows(f.matrix, f.target.exponents);
  return f;
}

KernelCokernel kernel_cokernel(const ModuleHom& f) {
  validate_hom(f);
  const RingPtr& R = f.source.ring;
  KernelCokernel out;
  Matrix gens = kernel_generators(f.matrix, f.target.exponents);
  Submodule k = submodule(gens, f.source.exponents);
  out.kernel = {R, k.exps};
  out.kernel_basis = k.basis;
  Quotient q = cokernel(f.matrix, f.target.exponents);
  out.cokernel = {R, q.exps};
  out.cokernel_proj = q.proj;
  out.cokernel_lift = q.lift;
  out.iso = out.kernel.is_zero() && out.cokernel.is_zero();
  return out;
}

CanonicalModule lift_module(const CanonicalModule& residue_module, const RingPtr& ring, int n) {
  if (n < 0 || n > ring->nilpotency())
    throw Error(ErrorKind::LevelExceedsPrecision, "lift level exceeds the ring precision",
                {{"n", n}, {"nilpotency", ring->nilpotency()}});
  CanonicalModule out{ring, {}};
  if (n > 0) out.exponents.assign(residue_module.rank(), n);
  return out;
}

}  // namespace devkit
