#include "devkit/transfer.hpp"

#include <algorithm>
#include <numeric>

namespace devkit {

// ---------------------------------------------------------------------------
// Fixed subrings

std::vector<Element> FixedSubringEntry::to_relative(const Element& x) const {
  const RingPtr P = coord_inverse.ring();
  Matrix col(P, ambient->dim(), 1);
  for (int i = 0; i < ambient->dim(); ++i) col.at(i, 0) = P->from_int(x.coeffs()[i]);
  Matrix c = coord_inverse * col;
  const int fd = fixed->dim();
  std::vector<Element> out;
  for (std::size_t k = 0; k < omega.size(); ++k) {
    std::vector<Int> co(fd);
    for (int l = 0; l < fd; ++l) co[l] = c.at(static_cast<int>(k) * fd + l, 0).coeffs()[0];
    out.emplace_back(fixed, std::move(co));
  }
  return out;
}

Element FixedSubringEntry::from_relative(const std::vector<Element>& c) const {
  Element acc = ambient->zero();
  for (std::size_t k = 0; k < omega.size(); ++k) acc += apply_morphism(inclusion, c[k]) * omega[k];
  return acc;
}

Exps FixedSubringEntry::relative_exps(const Exps& exps) const {
  Exps out;
  for (int e : exps) {
    int f = e >= ambient->nilpotency() ? fixed->nilpotency() : e;
    out.insert(out.end(), omega.size(), f);
  }
  return out;
}

std::vector<Element> FixedSubringEntry::vector_to_relative(const std::vector<Element>& v) const {
  std::vector<Element> out;
  for (const auto& x : v) {
    auto c = to_relative(x);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

std::vector<Element> FixedSubringEntry::vector_from_relative(const std::vector<Element>& c) const {
  std::vector<Element> out;
  const std::size_t w = omega.size();
  for (std::size_t i = 0; i + w <= c.size(); i += w)
    out.push_back(from_relative(std::vector<Element>(c.begin() + i, c.begin() + i + w)));
  return out;
}

namespace {

[[noreturn]] void unsupported(const RingPtr& ring, const std::vector<std::string>& subgens, const std::string& why) {
  throw Error(ErrorKind::FixedSubringUnsupported, why, {{"ring", ring->name()}, {"subgens", subgens}});
}

void finish_entry(FixedSubringEntry& e) {
  const RingPtr& R = e.ambient;
  RingPtr P = R->prime_subring();
  const int fd = e.fixed->dim();
  const int n = R->dim();
  if (static_cast<int>(e.omega.size()) * fd != n) unsupported(R, e.subgens, "relative basis has the wrong size");
  Matrix m(P, n, n);
  auto fb = monomial_basis(e.fixed);
  for (std::size_t k = 0; k < e.omega.size(); ++k)
    for (int l = 0; l < fd; ++l) {
      Element x = apply_morphism(e.inclusion, fb[l]) * e.omega[k];
      for (int i = 0; i < n; ++i) m.at(i, static_cast<int>(k) * fd + l) = P->from_int(x.coeffs()[i]);
    }
  auto inv = solve(m, Matrix::identity(P, n), Exps(n, P->nilpotency()));
  if (!inv) unsupported(R, e.subgens, "relative basis is not a basis");
  e.coord_inverse = *inv;
}

}  // namespace

FixedSubringEntry fixed_subring(const RingPtr& ring, const MonoidSpec& monoid,
                                const std::vector<std::string>& subgens, RingPtr preferred) {
  using K = RingEndo::Kind;
  FixedSubringEntry e;
  e.ambient = ring;
  e.subgens = subgens;
  std::vector<RingEndo> endos;
  for (const auto& l : subgens) endos.push_back(monoid.find(l).endo);
  const bool all_identity =
      std::all_of(endos.begin(), endos.end(), [&](const RingEndo& x) { return endo_is_identity_on(x, ring); });
  if (all_identity) {
    e.fixed = ring;
    e.inclusion = RingMorphism::identity(ring);
    e.omega = {ring->one()};
  } else if (ring->is_laurent()) {
    if (ring->degree() != 1 || ring->r_is_x())
      unsupported(ring, subgens, "fixed subring only tabulated for Laurent rings over Z/p^N with r = p");
    for (const auto& x : endos)
      if (x.kind != K::LaurentSubst && x.kind != K::Identity) unsupported(ring, subgens, "unsupported generator kind");
    e.fixed = ring->base();
    e.inclusion = RingMorphism::constant_embedding(e.fixed, ring);
    for (int x = -ring->low(); x < ring->high(); ++x) e.omega.push_back(ring->monomial(0, x));
  } else {
    int g = ring->degree();
    for (const auto& x : endos) {
      if (x.kind == K::LaurentSubst) unsupported(ring, subgens, "substitution on a non-Laurent ring");
      if (x.kind != K::Identity) g = std::gcd(g, x.power);
    }
    if (g == 0) g = ring->degree();
    RingLimits lim;
    lim.max_degree = std::max(lim.max_degree, ring->degree());
    if (preferred) {
      if (preferred->is_laurent() || preferred->p() != ring->p() || preferred->precision() != ring->precision() ||
          preferred->degree() != g)
        unsupported(ring, subgens, "preferred fixed ring does not match");
      e.fixed = preferred;
    } else if (g == 1) {
      e.fixed = Ring::prime_power(ring->p(), ring->precision(), lim);
    } else {
      e.fixed = Ring::galois_ring(ring->p(), ring->precision(), g, {}, lim);
    }
    e.inclusion = RingMorphism::embedding(e.fixed, ring);
    Element tk = ring->one();
    for (int k = 0; k < ring->degree() / g; ++k) {
      e.omega.push_back(tk);
      tk = tk * ring->t();
    }
  }
  for (const auto& b : monomial_basis(e.fixed)) {
    Element img = apply_morphism(e.inclusion, b);
    for (std::size_t i = 0; i < endos.size(); ++i)
      if (apply_endo(endos[i], img) != img)
        unsupported(ring, subgens, "tabulated fixed subring is not fixed by " + subgens[i]);
  }
  finish_entry(e);
  return e;
}

// ---------------------------------------------------------------------------
// Base change

SModule extend_scalars(const SModule& d, const RingMorphism& a, const std::optional<MonoidSpec>& target_monoid) {
  if (!same_ring(d.ring(), a.source()))
    throw Error(ErrorKind::MorphismDomainMismatch, "module ring is not the source of the arrow",
                {{"module_ring", d.ring()->name()}, {"source", a.source()->name()}});
  const RingPtr& T = a.target();
  MonoidSpec m;
  auto basis = monomial_basis(a.source());
  for (const auto& g : d.monoid.generators) {
    std::optional<RingEndo> img;
    if (target_monoid) {
      if (target_monoid->has(g.label)) img = target_monoid->find(g.label).endo;
    } else {
      img = a.equivariant_image(g.endo);
    }
    if (!img)
      throw Error(ErrorKind::MissingEquivarianceTag, "no intertwined endo on the target",
                  {{"label", g.label}, {"arrow", a.to_string()}});
    check_endo_domain(*img, T);
    for (const auto& b : basis)
      if (apply_morphism(a, apply_endo(g.endo, b)) != apply_endo(*img, apply_morphism(a, b)))
        throw Error(ErrorKind::MissingEquivarianceTag, "arrow does not intertwine the generator",
                    {{"label", g.label}, {"arrow", a.to_string()}, {"basis_element", b.to_string()}});
    m.generators.push_back({g.label, *img});
  }
  m.commuting_pairs = d.monoid.commuting_pairs;
  m.normal_subsets = d.monoid.normal_subsets;
  CanonicalModule base{T, {}};
  for (int e : d.base.exponents)
    base.exponents.push_back(e >= d.base.infinity() ? T->nilpotency() : std::min(e, T->nilpotency()));
  std::map<std::string, Matrix> acts;
  for (const auto& [label, mat] : d.actions) acts[label] = apply_morphism(a, mat);
  return make_smodule(base, m, std::move(acts));
}

// ---------------------------------------------------------------------------
// Invariants

namespace {

RingEndo restrict_endo(const RingEndo& e, const FixedSubringEntry& entry, const std::string& label) {
  if (entry.inclusion.kind() == RingMorphism::Kind::Identity) return e;
  RingEndo r = RingEndo::identity();
  if (e.kind == RingEndo::Kind::FieldFrobenius || e.kind == RingEndo::Kind::WittFrobenius) r = e;
  check_endo_domain(r, entry.fixed);
  for (const auto& b : monomial_basis(entry.fixed))
    if (apply_morphism(entry.inclusion, apply_endo(r, b)) != apply_endo(e, apply_morphism(entry.inclusion, b)))
      throw Error(ErrorKind::FixedSubringUnsupported, "residual generator does not restrict to the fixed subring",
                  {{"label", label}, {"fixed", entry.fixed->name()}});
  return r;
}

Matrix vectors_to_matrix(const RingPtr& ring, int rows, const std::vector<std::vector<Element>>& vs) {
  Matrix m(ring, rows, static_cast<int>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j)
    for (int i = 0; i < rows; ++i) m.at(i, static_cast<int>(j)) = vs[j][i];
  return m;
}

std::vector<Element> column_vector(const Matrix& m, int j) {
  std::vector<Element> v;
  for (int i = 0; i < m.rows(); ++i) v.push_back(m.at(i, j));
  return v;
}

// Canonical fixed-ring structure on the span of `vectors` (fixed vectors of
// d over the prime subring), with the residual generators acting.
InvariantsResult build_invariants(const SModule& d, FixedSubringEntry entry,
                                  const std::vector<std::vector<Element>>& vectors) {
  const RingPtr F = entry.fixed;
  InvariantsResult out{std::move(entry), {}, {}, {}, {}};
  const FixedSubringEntry& e = out.entry;
  out.relative_exps = e.relative_exps(d.base.exponents);
  const int rrows = static_cast<int>(out.relative_exps.size());
  std::vector<std::vector<Element>> rel;
  for (const auto& v : vectors) rel.push_back(e.vector_to_relative(v));
  Submodule sub = submodule(vectors_to_matrix(F, rrows, rel), out.relative_exps);
  out.relative_basis = sub.basis;
  out.basis = Matrix(d.ring(), d.rank(), sub.basis.cols());
  for (int j = 0; j < sub.basis.cols(); ++j) {
    auto v = e.vector_from_relative(column_vector(sub.basis, j));
    for (int i = 0; i < d.rank(); ++i) out.basis.at(i, j) = reduce_mod_r_power(v[i], d.base.exponents[i]);
  }
  MonoidSpec m;
  std::map<std::string, Matrix> acts;
  for (const auto& g : d.monoid.generators) {
    if (std::find(e.subgens.begin(), e.subgens.end(), g.label) != e.subgens.end()) continue;
    m.generators.push_back({g.label, restrict_endo(g.endo, e, g.label)});
    Matrix a(F, sub.basis.cols(), sub.basis.cols());
    for (int j = 0; j < sub.basis.cols(); ++j) {
      Matrix w = act(d, {g.label}, out.basis.col(j));
      auto wr = e.vector_to_relative(column_vector(w, 0));
      Matrix wcol = wr.empty() ? Matrix(F, 0, 1) : Matrix::column(wr);
      auto y = solve(sub.basis, wcol, out.relative_exps);
      if (!y)
        throw Error(ErrorKind::ResidualActionEscapes, "residual generator does not stabilize the invariants",
                    {{"generator", g.label}, {"witness", w.to_string()}});
      for (int i = 0; i < sub.basis.cols(); ++i) a.at(i, j) = reduce_mod_r_power(y->at(i, 0), sub.exps[i]);
    }
    acts[g.label] = a;
  }
  for (const auto& pr : d.monoid.commuting_pairs)
    if (m.has(pr.first) && m.has(pr.second)) m.commuting_pairs.push_back(pr);
  out.module = make_smodule(CanonicalModule{F, sub.exps}, m, std::move(acts));
  return out;
}

}  // namespace

InvariantsResult invariants(const SModule& d, const std::vector<std::string>& subgens, std::size_t cap,
                            RingPtr preferred) {
  FixedSubringEntry entry = fixed_subring(d.ring(), d.monoid, subgens, std::move(preferred));
  PrimeSpan ps = fixed_points(d, subgens, cap);
  return build_invariants(d, std::move(entry), ps.vectors);
}

ComparisonResult comparison(const SModule& d, const InvariantsResult& inv) {
  const RingPtr& R = d.ring();
  CanonicalModule src{R, {}};
  for (int e : inv.module.base.exponents)
    src.exponents.push_back(e >= inv.entry.fixed->nilpotency() ? R->nilpotency() : e);
  ComparisonResult c{{src, d.base, inv.basis}, {}, false};
  c.kc = kernel_cokernel(c.map);
  c.iso = c.kc.iso;
  return c;
}

// ---------------------------------------------------------------------------
// Dévissage descent

DescentResult devissage_descent(const SModule& d, const std::vector<std::string>& subgens, bool strict,
                                bool cross_check, std::size_t cap, RingPtr preferred) {
  const RingPtr& R = d.ring();
  const RingPtr P = R->prime_subring();
  FixedSubringEntry entry = fixed_subring(R, d.monoid, subgens, preferred);
  for (const auto& l : subgens) (void)d.monoid.find(l);
  const int nil = R->nilpotency();
  int top = 0;
  for (int e : d.base.exponents) top = std::max(top, std::min(e, nil));

  std::size_t dim = 0;
  for (int e : d.base.exponents) dim += flat_layout(*R, e).positions.size();
  if (dim > cap) throw Error(ErrorKind::SizeGuard, "prime-subring dimension exceeds the cap", {{"dim", dim}, {"cap", cap}});

  DescentCertificate cert;
  cert.strict = strict;
  std::vector<std::vector<Element>> cur;
  const int rank = d.rank();
  for (int n = 0; n < top; ++n) {
    Exps ex1;
    for (int e : d.base.exponents) ex1.push_back(std::min(e, n + 1));
    Exps tgt;
    for (std::size_t s = 0; s < subgens.size(); ++s) tgt.insert(tgt.end(), ex1.begin(), ex1.end());
    auto err = [&](const std::vector<Element>& w) {
      std::vector<Element> out;
      Matrix col = Matrix::column(w);
      for (const auto& l : subgens) {
        Matrix img = act(d, {l}, col) - col;
        for (int i = 0; i < rank; ++i) out.push_back(img.at(i, 0));
      }
      return flatten_vector(out, tgt);
    };
    // Correction space r^n D / r^{n+1} D, coordinates over R/r.
    const FlatLayout k1 = flat_layout(*R, 1);
    std::vector<std::vector<Element>> kvecs;
    for (int i = 0; i < rank; ++i) {
      if (d.base.exponents[i] <= n) continue;
      for (int pos : k1.positions) {
        std::vector<Element> v(rank, R->zero());
        std::vector<Int> c(R->dim(), 0);
        c[pos] = 1;
        v[i] = Element(R, std::move(c)) * R->r_pow(n);
        kvecs.push_back(std::move(v));
      }
    }
    Exps tgt_flat;
    for (int e : tgt) {
      auto l = flat_layout(*R, e);
      tgt_flat.insert(tgt_flat.end(), l.positions.size(), l.exp);
    }
    const int trows = static_cast<int>(tgt_flat.size());
    auto to_cols = [&](const std::vector<std::vector<Element>>& vs) {
      Matrix m(P, trows, static_cast<int>(vs.size()));
      for (std::size_t j = 0; j < vs.size(); ++j) {
        auto f = err(vs[j]);
        for (int i = 0; i < trows; ++i) m.at(i, static_cast<int>(j)) = P->from_int(f[i]);
      }
      return m;
    };
    Matrix lmat = to_cols(kvecs);
    Matrix emat = to_cols(cur);

    DescentLevel lvl;
    lvl.level = n + 1;
    std::vector<std::vector<Element>> gens;
    auto combine = [&](const Matrix& coeffs, int j, int offset_k) {
      std::vector<Element> v(rank, R->zero());
      for (int c = 0; c < offset_k; ++c) {
        const Element& lam = coeffs.at(c, j);
        if (lam.is_zero()) continue;
        for (int i = 0; i < rank; ++i) v[i] += cur[c][i].scaled(lam.coeffs()[0]);
      }
      for (std::size_t c = 0; c < kvecs.size(); ++c) {
        const Element& kap = coeffs.at(offset_k + static_cast<int>(c), j);
        if (kap.is_zero()) continue;
        for (int i = 0; i < rank; ++i) v[i] += kvecs[c][i].scaled(kap.coeffs()[0]);
      }
      for (int i = 0; i < rank; ++i) v[i] = reduce_mod_r_power(v[i], ex1[i]);
      return v;
    };
    for (std::size_t j = 0; j < cur.size(); ++j) {
      Matrix rhs = emat.col(static_cast<int>(j)).scaled(P->from_int(-1));
      auto kappa = solve(lmat, rhs, tgt_flat);
      if (!kappa) {
        ++lvl.obstructions;
        if (strict)
          throw Error(ErrorKind::LiftObstruction, "fixed vector does not lift to the next level",
                      {{"level", n + 1}, {"basis_index", j}, {"residual", emat.col(static_cast<int>(j)).to_string()}});
        continue;
      }
      Matrix corr = Matrix(P, static_cast<int>(cur.size()), 1).vcat(*kappa);
      auto corr_vec = combine(corr, 0, static_cast<int>(cur.size()));
      Matrix unit(P, static_cast<int>(cur.size()), 1);
      unit.at(static_cast<int>(j), 0) = P->one();
      auto lifted = combine(unit.vcat(*kappa), 0, static_cast<int>(cur.size()));
      lvl.corrections.push_back(rank ? Matrix::column(corr_vec) : Matrix(R, 0, 1));
      lvl.lifts.push_back(rank ? Matrix::column(lifted) : Matrix(R, 0, 1));
      gens.push_back(lifted);
    }
    Matrix knew = kernel_generators(lmat, tgt_flat);
    std::vector<std::vector<Element>> fresh;
    for (int j = 0; j < knew.cols(); ++j) {
      Matrix full = Matrix(P, static_cast<int>(cur.size()), 1).vcat(knew.col(j));
      fresh.push_back(combine(full, 0, static_cast<int>(cur.size())));
    }
    if (lvl.obstructions > 0) {
      gens.clear();
      Matrix all = kernel_generators(emat.hcat(lmat), tgt_flat);
      for (int j = 0; j < all.cols(); ++j) gens.push_back(combine(all, j, static_cast<int>(cur.size())));
    } else {
      gens.insert(gens.end(), fresh.begin(), fresh.end());
    }
    // Canonical prime-subring basis of the level-(n+1) fixed vectors.
    Exps flat1;
    for (int e : ex1) {
      auto l = flat_layout(*R, e);
      flat1.insert(flat1.end(), l.positions.size(), l.exp);
    }
    Matrix g(P, static_cast<int>(flat1.size()), static_cast<int>(gens.size()));
    for (std::size_t j = 0; j < gens.size(); ++j) {
      auto f = flatten_vector(gens[j], ex1);
      for (std::size_t i = 0; i < f.size(); ++i) g.at(static_cast<int>(i), static_cast<int>(j)) = P->from_int(f[i]);
    }
    Submodule sub = submodule(g, flat1);
    if (!fresh.empty()) {
      Matrix fg(P, static_cast<int>(flat1.size()), static_cast<int>(fresh.size()));
      for (std::size_t j = 0; j < fresh.size(); ++j) {
        auto f = flatten_vector(fresh[j], ex1);
        for (std::size_t i = 0; i < f.size(); ++i) fg.at(static_cast<int>(i), static_cast<int>(j)) = P->from_int(f[i]);
      }
      lvl.new_generators = submodule(fg, flat1).basis.cols();
    }
    cur.clear();
    for (int j = 0; j < sub.basis.cols(); ++j) {
      std::vector<Int> c;
      for (int i = 0; i < sub.basis.rows(); ++i) c.push_back(sub.basis.at(i, j).coeffs()[0]);
      cur.push_back(unflatten_vector(R, c, ex1));
    }
    lvl.prime_orders = sub.exps;
    lvl.basis = vectors_to_matrix(R, rank, cur);
    // Comparison at this level.
    {
      SModule dn = d;
      dn.base.exponents = ex1;
      for (auto& [label, a] : dn.actions) a = reduce_rows(a, ex1);
      InvariantsResult ivn = build_invariants(dn, entry, cur);
      lvl.comparison_iso = comparison(dn, ivn).iso;
    }
    cert.levels.push_back(std::move(lvl));
  }
  DescentResult res{build_invariants(d, entry, cur), std::move(cert)};
  if (cross_check) {
    InvariantsResult direct = invariants(d, subgens, cap, preferred);
    res.certificate.cross_checked = true;
    res.certificate.agrees_with_direct =
        direct.module.base.exponents == res.inv.module.base.exponents &&
        same_span(direct.relative_basis, res.inv.relative_basis, res.inv.relative_exps);
  }
  return res;
}

}  // namespace devkit
