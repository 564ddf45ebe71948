#include "devkit/semilinear.hpp"

#include <algorithm>
#include <set>

namespace devkit {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Element random_element(const RingPtr& ring, std::uint64_t& state) {
  std::vector<Int> c(ring->dim());
  for (auto& x : c) x = static_cast<Int>(splitmix64(state) % static_cast<std::uint64_t>(ring->modulus()));
  return Element(ring, std::move(c));
}

// ---------------------------------------------------------------------------
// Monoids

bool MonoidSpec::has(const std::string& label) const {
  return std::any_of(generators.begin(), generators.end(), [&](const auto& g) { return g.label == label; });
}

const MonoidGenerator& MonoidSpec::find(const std::string& label) const {
  for (const auto& g : generators)
    if (g.label == label) return g;
  throw Error(ErrorKind::UnknownGenerator, "unknown monoid generator", {{"label", label}});
}

std::vector<std::string> MonoidSpec::labels() const {
  std::vector<std::string> out;
  for (const auto& g : generators) out.push_back(g.label);
  return out;
}

bool MonoidSpec::operator==(const MonoidSpec& o) const {
  if (generators.size() != o.generators.size()) return false;
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].label != o.generators[i].label || !(generators[i].endo == o.generators[i].endo)) return false;
  return true;
}

void validate_monoid(const MonoidSpec& monoid, const RingPtr& ring, std::uint64_t seed, int samples) {
  std::set<std::string> seen;
  for (const auto& g : monoid.generators) {
    if (!seen.insert(g.label).second)
      throw Error(ErrorKind::InvalidArgument, "duplicate generator label", {{"label", g.label}});
    check_endo_domain(g.endo, ring);
    if (ring->nilpotency() > 1 && valuation(apply_endo(g.endo, ring->r())) != 1)
      throw Error(ErrorKind::EndoDomainMismatch, "generator does not preserve the ideal rR",
                  {{"label", g.label}, {"endo", g.endo.to_string()}, {"ring", ring->name()}});
  }
  for (const auto& [a, b] : monoid.commuting_pairs) {
    const auto& ea = monoid.find(a).endo;
    const auto& eb = monoid.find(b).endo;
    std::uint64_t st = seed;
    for (int i = 0; i < samples; ++i) {
      Element x = random_element(ring, st);
      if (apply_endo(ea, apply_endo(eb, x)) != apply_endo(eb, apply_endo(ea, x)))
        throw Error(ErrorKind::InvalidArgument, "declared commuting generators do not commute on the ring",
                    {{"a", a}, {"b", b}, {"x", x.to_string()}});
    }
  }
  for (const auto& [name, subset] : monoid.normal_subsets)
    for (const auto& l : subset) (void)monoid.find(l);
}

// ---------------------------------------------------------------------------
// S-modules

const Matrix& SModule::action(const std::string& label) const {
  auto it = actions.find(label);
  if (it == actions.end()) throw Error(ErrorKind::UnknownGenerator, "no action for generator", {{"label", label}});
  return it->second;
}

SModule make_smodule(CanonicalModule base, MonoidSpec monoid, std::map<std::string, Matrix> actions) {
  SModule d{std::move(base), std::move(monoid), {}};
  for (const auto& g : d.monoid.generators) {
    auto it = actions.find(g.label);
    if (it == actions.end())
      throw Error(ErrorKind::UnknownGenerator, "missing action matrix for generator", {{"label", g.label}});
    require_same_ring(it->second.ring(), d.ring(), "action matrix");
    ModuleHom h{d.base, d.base, it->second};
    validate_hom(h);
    d.actions[g.label] = normalize_hom(h).matrix;
  }
  for (const auto& [label, m] : actions)
    if (!d.monoid.has(label)) throw Error(ErrorKind::UnknownGenerator, "action for undeclared generator", {{"label", label}});
  return d;
}

SModule unit_smodule(const RingPtr& ring, const MonoidSpec& monoid) {
  std::map<std::string, Matrix> acts;
  for (const auto& g : monoid.generators) acts[g.label] = Matrix::identity(ring, 1);
  return make_smodule(CanonicalModule::free(ring, 1), monoid, std::move(acts));
}

ModuleHom linearize(const SModule& d, const std::string& label) {
  (void)d.monoid.find(label);
  return {d.base, d.base, d.action(label)};
}

EtaleVerdict check_etale(const SModule& d) {
  EtaleVerdict v;
  const int n = d.rank();
  for (const auto& g : d.monoid.generators) {
    ModuleHom h = linearize(d, g.label);
    KernelCokernel kc = kernel_cokernel(h);
    if (!kc.iso) {
      v.etale = false;
      v.failing_generator = g.label;
      if (!kc.cokernel.is_zero()) {
        v.failure = "cokernel";
        v.witness = kc.cokernel_lift.col(0);
      } else {
        v.failure = "kernel";
        v.witness = kc.kernel_basis.col(0);
      }
      v.inverses.clear();
      return v;
    }
    auto inv = solve(h.matrix, Matrix::identity(d.ring(), n), d.base.exponents);
    if (!inv) throw Error(ErrorKind::PrecisionExhausted, "isomorphism without a solvable inverse");
    v.inverses[g.label] = reduce_rows(*inv, d.base.exponents);
  }
  return v;
}

Matrix act(const SModule& d, const std::vector<std::string>& word, const Matrix& v) {
  Matrix w = v;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const auto& g = d.monoid.find(*it);
    w = d.action(*it) * apply_endo(g.endo, w);
  }
  return reduce_rows(w, d.base.exponents);
}

namespace {

void require_same_monoid(const SModule& a, const SModule& b, const char* where) {
  require_same_ring(a.ring(), b.ring(), where);
  if (!(a.monoid == b.monoid))
    throw Error(ErrorKind::InvalidArgument, std::string(where) + ": monoids differ");
}

}  // namespace

SModule tensor_smod(const SModule& d1, const SModule& d2) {
  require_same_monoid(d1, d2, "tensor_smod");
  std::map<std::string, Matrix> acts;
  for (const auto& g : d1.monoid.generators) acts[g.label] = kronecker(d1.action(g.label), d2.action(g.label));
  return make_smodule(tensor_modules(d1.base, d2.base), d1.monoid, std::move(acts));
}

Matrix hom_vector_to_matrix(const CanonicalModule& m1, const CanonicalModule& m2, const std::vector<Element>& c) {
  const RingPtr& R = m1.ring;
  Matrix f(R, m2.rank(), m1.rank());
  for (int i = 0; i < m2.rank(); ++i)
    for (int j = 0; j < m1.rank(); ++j) {
      const int delta = std::max(0, m2.exponents[i] - m1.exponents[j]);
      f.at(i, j) = reduce_mod_r_power(c[i * m1.rank() + j] * R->r_pow(delta), m2.exponents[i]);
    }
  return f;
}

std::vector<Element> hom_matrix_to_vector(const CanonicalModule& m1, const CanonicalModule& m2, const Matrix& f) {
  std::vector<Element> c;
  for (int i = 0; i < m2.rank(); ++i)
    for (int j = 0; j < m1.rank(); ++j) {
      const int delta = std::max(0, m2.exponents[i] - m1.exponents[j]);
      const int order = std::min(m2.exponents[i], m1.exponents[j]);
      Element x = reduce_mod_r_power(f.at(i, j), m2.exponents[i]);
      if (valuation(x) < delta)
        throw Error(ErrorKind::InvalidArgument, "matrix is not a module homomorphism", {{"row", i}, {"col", j}});
      c.push_back(reduce_mod_r_power(divide_by_r_power(x, delta), order));
    }
  return c;
}

SModule internal_hom(const SModule& d1, const SModule& d2) {
  require_same_monoid(d1, d2, "internal_hom");
  EtaleVerdict ev = check_etale(d1);
  if (!ev.etale)
    throw Error(ErrorKind::NotEtale, "internal hom needs an etale source",
                {{"generator", ev.failing_generator}, {"failure", ev.failure},
                 {"witness", ev.witness ? ev.witness->to_string() : ""}});
  CanonicalModule hb = hom_modules(d1.base, d2.base);
  const RingPtr& R = d1.ring();
  std::map<std::string, Matrix> acts;
  for (const auto& g : d1.monoid.generators) {
    const Matrix& b = d2.action(g.label);
    const Matrix& ainv = ev.inverses.at(g.label);
    Matrix a(R, hb.rank(), hb.rank());
    for (int col = 0; col < hb.rank(); ++col) {
      std::vector<Element> unit(hb.rank(), R->zero());
      unit[col] = R->one();
      Matrix f = hom_vector_to_matrix(d1.base, d2.base, unit);
      Matrix img = b * apply_endo(g.endo, f) * ainv;
      auto c = hom_matrix_to_vector(d1.base, d2.base, img);
      for (int row = 0; row < hb.rank(); ++row) a.at(row, col) = c[row];
    }
    acts[g.label] = a;
  }
  return make_smodule(hb, d1.monoid, std::move(acts));
}

// ---------------------------------------------------------------------------
// Fixed points and equivariant maps

namespace {

PrimeSpan kernel_span(const RingPtr& ring, const Exps& src, const FlatMap& fm) {
  PrimeSpan ps;
  ps.prime = fm.matrix.ring();
  ps.ambient = fm.src_exps;
  Matrix gens = kernel_generators(fm.matrix, fm.tgt_exps);
  Submodule sub = submodule(gens, fm.src_exps);
  ps.flat = sub.basis;
  ps.orders = sub.exps;
  for (int j = 0; j < sub.basis.cols(); ++j) {
    std::vector<Int> c;
    for (int i = 0; i < sub.basis.rows(); ++i) c.push_back(sub.basis.at(i, j).coeffs()[0]);
    ps.vectors.push_back(unflatten_vector(ring, c, src));
  }
  return ps;
}

std::size_t flat_size(const Ring& ring, const Exps& exps) {
  std::size_t n = 0;
  for (int e : exps) n += flat_layout(ring, e).positions.size();
  return n;
}

}  // namespace

PrimeSpan fixed_points(const SModule& d, const std::vector<std::string>& labels, std::size_t cap) {
  const RingPtr& R = d.ring();
  const Exps& ex = d.base.exponents;
  const std::size_t dim = flat_size(*R, ex);
  if (dim > cap) throw Error(ErrorKind::SizeGuard, "prime-subring dimension exceeds the cap", {{"dim", dim}, {"cap", cap}});
  Exps tgt;
  for (std::size_t i = 0; i < labels.size(); ++i) tgt.insert(tgt.end(), ex.begin(), ex.end());
  auto f = [&](const std::vector<Element>& v) {
    std::vector<Element> out;
    Matrix col = v.empty() ? Matrix(R, 0, 1) : Matrix::column(v);
    for (const auto& l : labels) {
      Matrix img = act(d, {l}, col) - col;
      for (int i = 0; i < img.rows(); ++i) out.push_back(img.at(i, 0));
    }
    return out;
  };
  return kernel_span(R, ex, flatten_map(R, ex, tgt, f));
}

EquivariantHoms equivariant_homs(const SModule& d1, const SModule& d2, std::size_t cap) {
  require_same_monoid(d1, d2, "equivariant_homs");
  const RingPtr& R = d1.ring();
  CanonicalModule hb = hom_modules(d1.base, d2.base);
  const std::size_t dim = flat_size(*R, hb.exponents);
  if (dim > cap) throw Error(ErrorKind::SizeGuard, "prime-subring dimension exceeds the cap", {{"dim", dim}, {"cap", cap}});
  Exps tgt;
  for (std::size_t s = 0; s < d1.monoid.generators.size(); ++s)
    for (int k = 0; k < d2.rank(); ++k)
      for (int l = 0; l < d1.rank(); ++l) tgt.push_back(d2.base.exponents[k]);
  auto f = [&](const std::vector<Element>& c) {
    Matrix fm = hom_vector_to_matrix(d1.base, d2.base, c);
    std::vector<Element> out;
    for (const auto& g : d1.monoid.generators) {
      Matrix diff = d2.action(g.label) * apply_endo(g.endo, fm) - fm * d1.action(g.label);
      for (int k = 0; k < diff.rows(); ++k)
        for (int l = 0; l < diff.cols(); ++l) out.push_back(diff.at(k, l));
    }
    return out;
  };
  EquivariantHoms eh;
  eh.span = kernel_span(R, hb.exponents, flatten_map(R, hb.exponents, tgt, f));
  for (const auto& v : eh.span.vectors) eh.basis.push_back(hom_vector_to_matrix(d1.base, d2.base, v));
  return eh;
}

std::optional<Matrix> find_isomorphism(const SModule& d1, const SModule& d2, std::size_t cap) {
  if (d1.base.exponents != d2.base.exponents) {
    Exps a = d1.base.exponents, b = d2.base.exponents;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  EquivariantHoms eh = equivariant_homs(d1, d2);
  const RingPtr& R = d1.ring();
  const std::size_t k = eh.basis.size();
  std::vector<Int> limit(k), digit(k, 0);
  double total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    limit[i] = 1;
    for (int e = 0; e < eh.span.orders[i]; ++e) limit[i] *= R->p();
    total *= static_cast<double>(limit[i]);
  }
  if (total > static_cast<double>(cap))
    throw Error(ErrorKind::SizeGuard, "too many equivariant maps to search", {{"count", total}, {"cap", cap}});
  while (true) {
    Matrix f(R, d2.rank(), d1.rank());
    for (std::size_t i = 0; i < k; ++i)
      if (digit[i] != 0) f = f + eh.basis[i].scaled(R->from_int(digit[i]));
    f = reduce_rows(f, d2.base.exponents);
    if (kernel_cokernel({d1.base, d2.base, f}).iso) return f;
    std::size_t i = 0;
    while (i < k && ++digit[i] == limit[i]) digit[i++] = 0;
    if (i == k) return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Dévissage

namespace {

// φ(r^n) / r^n, a unit.
Element twist_unit(const RingEndo& e, const RingPtr& R, int n) {
  if (n <= 0 || n >= R->nilpotency()) return R->one();
  Element img = apply_endo(e, R->r_pow(n));
  return divide_by_r_power(img, n);
}

}  // namespace

SModule mu_subquotient(const SModule& d, int k) {
  const RingPtr& R = d.ring();
  RingMorphism red = RingMorphism::reduction_mod_r(R);
  const RingPtr& F = red.target();
  std::vector<int> idx;
  for (int i = 0; i < d.rank(); ++i)
    if (d.base.exponents[i] > k) idx.push_back(i);
  MonoidSpec m;
  for (const auto& g : d.monoid.generators) {
    auto img = red.equivariant_image(g.endo);
    if (!img) throw Error(ErrorKind::MissingEquivarianceTag, "generator has no image on the residue ring", {{"label", g.label}});
    m.generators.push_back({g.label, *img});
  }
  m.commuting_pairs = d.monoid.commuting_pairs;
  m.normal_subsets = d.monoid.normal_subsets;
  std::map<std::string, Matrix> acts;
  const int nn = static_cast<int>(idx.size());
  for (const auto& g : d.monoid.generators) {
    Element u = twist_unit(g.endo, R, k);
    const Matrix& a = d.action(g.label);
    Matrix s(F, nn, nn);
    for (int r = 0; r < nn; ++r)
      for (int c = 0; c < nn; ++c) s.at(r, c) = apply_morphism(red, u * a.at(idx[r], idx[c]));
    acts[g.label] = s;
  }
  return make_smodule(CanonicalModule::free(F, nn), m, std::move(acts));
}

DevissageRestriction restrict_devissage(const SModule& d, int n) {
  const RingPtr& R = d.ring();
  const Exps& ex = d.base.exponents;
  GradedPieces gp = graded_pieces(d.base, n);
  DevissageRestriction out;

  std::vector<int> rn_idx, tor_idx;
  for (int i = 0; i < d.rank(); ++i) {
    if (d.base.is_free_summand(i) ? n < d.base.infinity() : ex[i] > n) rn_idx.push_back(i);
    if (!d.base.is_free_summand(i) && std::min(ex[i], n) > 0) tor_idx.push_back(i);
  }
  std::map<std::string, Matrix> rn_acts, tor_acts;
  for (const auto& g : d.monoid.generators) {
    const Matrix& a = d.action(g.label);
    Element u = twist_unit(g.endo, R, n);
    Matrix ra(R, static_cast<int>(rn_idx.size()), static_cast<int>(rn_idx.size()));
    for (std::size_t r = 0; r < rn_idx.size(); ++r)
      for (std::size_t c = 0; c < rn_idx.size(); ++c)
        ra.at(static_cast<int>(r), static_cast<int>(c)) = u * a.at(rn_idx[r], rn_idx[c]);
    rn_acts[g.label] = ra;

    Matrix ta(R, static_cast<int>(tor_idx.size()), static_cast<int>(tor_idx.size()));
    for (std::size_t c = 0; c < tor_idx.size(); ++c) {
      const int i = tor_idx[c];
      const int shift_i = ex[i] - std::min(ex[i], n);
      Element ui = twist_unit(g.endo, R, shift_i) * R->r_pow(shift_i);
      for (std::size_t r = 0; r < tor_idx.size(); ++r) {
        const int k = tor_idx[r];
        const int shift_k = ex[k] - std::min(ex[k], n);
        Element x = reduce_mod_r_power(ui * a.at(k, i), ex[k]);
        if (x.is_zero()) continue;
        if (valuation(x) < shift_k)
          throw Error(ErrorKind::PrecisionExhausted, "torsion piece is not stable at this precision");
        ta.at(static_cast<int>(r), static_cast<int>(c)) = divide_by_r_power(x, shift_k);
      }
    }
    tor_acts[g.label] = ta;
  }
  out.rn = make_smodule(gp.rk, d.monoid, std::move(rn_acts));
  out.rn_inclusion = gp.rk_inclusion;
  out.torsion = make_smodule(gp.torsion, d.monoid, std::move(tor_acts));
  out.torsion_inclusion = gp.torsion_inclusion;
  for (int k = 0; k < R->nilpotency(); ++k) out.subquotients.push_back(mu_subquotient(d, k));
  return out;
}

RelationReport check_relations(const SModule& d, std::uint64_t seed, int samples) {
  RelationReport rep;
  const RingPtr& R = d.ring();
  for (const auto& [a, b] : d.monoid.commuting_pairs) {
    const auto& ga = d.monoid.find(a);
    const auto& gb = d.monoid.find(b);
    Matrix lhs = reduce_rows(d.action(a) * apply_endo(ga.endo, d.action(b)), d.base.exponents);
    Matrix rhs = reduce_rows(d.action(b) * apply_endo(gb.endo, d.action(a)), d.base.exponents);
    if (lhs != rhs) rep.violations.push_back({"commutation", a, b, reduce_rows(lhs - rhs, d.base.exponents)});
    std::uint64_t st = seed;
    for (int i = 0; i < samples; ++i) {
      Element x = random_element(R, st);
      Element l = apply_endo(ga.endo, apply_endo(gb.endo, x));
      Element r = apply_endo(gb.endo, apply_endo(ga.endo, x));
      if (l != r) {
        Matrix diff(R, 1, 1);
        diff.at(0, 0) = l - r;
        rep.violations.push_back({"endo_commutation", a, b, diff});
        break;
      }
    }
  }
  std::uint64_t st = seed ^ 0x5eedULL;
  for (const auto& g : d.monoid.generators) {
    if (d.rank() == 0) break;
    for (int i = 0; i < samples; ++i) {
      Element c = random_element(R, st);
      std::vector<Element> v;
      for (int k = 0; k < d.rank(); ++k) v.push_back(random_element(R, st));
      Matrix col = Matrix::column(v);
      Matrix lhs = act(d, {g.label}, col.scaled(c));
      Matrix rhs = reduce_rows(act(d, {g.label}, col).scaled(apply_endo(g.endo, c)), d.base.exponents);
      if (lhs != rhs) {
        rep.violations.push_back({"semilinearity", g.label, "", lhs - rhs});
        break;
      }
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

}  // namespace devkit
