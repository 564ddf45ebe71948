// Acceptance checks. One line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "devkit/cli.hpp"
#include "devkit/coinduction.hpp"
#include "devkit/fontaine.hpp"
#include "devkit/selftest.hpp"
#include "devkit/transfer.hpp"
#include "oracles.hpp"

using namespace devkit;

namespace {

// Collects failures with enough context to reproduce them.
struct Tally {
  int checks = 0;
  int failures = 0;
  std::string first;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok && failures++ == 0) first = what;
  }
};

Matrix one_by_one(const Element& x) {
  Matrix m(x.ring(), 1, 1);
  m.at(0, 0) = x;
  return m;
}

Matrix mat(const RingPtr& R, int rows, int cols, std::vector<Int> v) {
  Matrix m(R, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = R->from_int(v[i * cols + j]);
  return m;
}

MonoidSpec single(const std::string& label, RingEndo e) { return {{{label, std::move(e)}}, {}, {}}; }

RingEndo absolute_frobenius(const RingPtr& R) {
  return R->precision() == 1 ? RingEndo::field_frobenius(1) : RingEndo::witt_frobenius(1);
}

std::vector<std::vector<Element>> columns(const Matrix& m) {
  std::vector<std::vector<Element>> out;
  for (int j = 0; j < m.cols(); ++j) {
    std::vector<Element> c;
    for (int i = 0; i < m.rows(); ++i) c.push_back(m.at(i, j));
    out.push_back(c);
  }
  return out;
}

bool invertible(const CanonicalModule& b, const Matrix& A) { return kernel_cokernel({b, b, A}).iso; }

// An invertible matrix over a free module, by rejection sampling.
Matrix random_invertible(const RingPtr& R, int n, std::uint64_t& st) {
  auto base = CanonicalModule::free(R, n);
  while (true) {
    Matrix B = gen::random_matrix(R, n, n, st);
    if (invertible(base, B)) return B;
  }
}

// A = B·e(B)^{-1}: the columns of B are fixed by v -> A e(v).
Matrix trivialized(const Matrix& B, const RingEndo& e) {
  const RingPtr& R = B.ring();
  auto inv = solve(apply_endo(e, B), Matrix::identity(R, B.rows()), Exps(B.rows(), R->nilpotency()));
  if (!inv) throw std::logic_error("trivialized: B is not invertible");
  return B * *inv;
}

std::string str(const Exps& e) {
  std::string s = "[";
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
  return s + "]";
}

Exps sorted(Exps e) {
  std::sort(e.begin(), e.end());
  return e;
}

// Every prime-subring combination of a PrimeSpan, as coordinate keys.
std::set<oracle::Vec> span_set(const PrimeSpan& s, const RingPtr& R, int dim) {
  std::vector<std::vector<Element>> cur{std::vector<Element>(dim, R->zero())};
  for (std::size_t k = 0; k < s.vectors.size(); ++k) {
    std::vector<std::vector<Element>> next;
    const Int order = oracle::ipow(R->p(), s.orders[k]);
    for (const auto& v : cur)
      for (Int a = 0; a < order; ++a) {
        auto w = v;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += s.vectors[k][i].scaled(a);
        next.push_back(w);
      }
    cur = std::move(next);
  }
  std::set<oracle::Vec> out;
  for (const auto& v : cur) out.insert(oracle::key(v));
  return out;
}

// 1. Presentations decompose; brute-force cardinality matches the exponents.
Tally structure_theorem() {
  Tally t;
  std::uint64_t st = 1001;
  std::vector<RingPtr> rings{Ring::prime_power(2, 3), Ring::prime_power(3, 3), Ring::galois_ring(2, 2, 2),
                             Ring::truncated_laurent(Ring::finite_field(2, 2), 0, 6)};
  for (const auto& R : rings) {
    const Int q = oracle::residue_size(R);
    for (int i = 0; i < 500; ++i) {
      const int g = gen::uniform(st, 1, 4), b = gen::uniform(st, 1, 4);
      Matrix rel = gen::random_matrix(R, g, b, st);
      SmithDecomposition D = smith_decompose({R, rel});
      const Exps& e = D.module.exponents;
      const std::string ctx = R->name() + " #" + std::to_string(i) + " exps " + str(e);
      for (int n : e) t.expect(n >= 1 && n <= R->nilpotency(), "exponent out of range: " + ctx);
      if (g > 2) continue;
      // log_q |coker| from the exponents, against enumeration of R^g / span.
      int expected_log = 0;
      for (int n : e) expected_log += std::min(n, R->nilpotency());
      if (R->precision() == 1) {
        // F_p coefficients: count by elimination over F_p.
        const int dim_fp = g * R->dim() - oracle::span_dim_fp(R, columns(rel), g);
        int q_log = 0;
        for (Int x = q; x > 1; x /= R->p()) ++q_log;
        t.expect(dim_fp == expected_log * q_log, "cardinality: " + ctx);
      } else {
        const std::size_t total = static_cast<std::size_t>(oracle::ipow(R->modulus(), g * R->dim()));
        const std::size_t span = oracle::span_size_enum(R, columns(rel), g);
        t.expect(total / span == static_cast<std::size_t>(oracle::ipow(q, expected_log)), "cardinality: " + ctx);
      }
    }
  }
  return t;
}

// 2. Étale iff every mu-subquotient is étale; also against bijectivity by enumeration.
Tally devissage_consistency() {
  Tally t;
  std::uint64_t st = 2002;
  std::vector<RingPtr> rings{Ring::prime_power(2, 3), Ring::galois_ring(2, 2, 2), Ring::prime_power(3, 2),
                             Ring::finite_field(2, 2)};
  for (const auto& R : rings) {
    const RingEndo phi = R->precision() == 1 ? RingEndo::field_frobenius(1)
                                             : (R->degree() > 1 ? RingEndo::witt_frobenius(1) : RingEndo::identity());
    const MonoidSpec m = single("phi", phi);
    for (int i = 0; i < 60; ++i) {
      CanonicalModule b{R, gen::random_exps(R, gen::uniform(st, 1, R->dim() > 1 ? 2 : 3), st)};
      SModule d = gen::random_smodule(b, m, st);
      bool all = true;
      for (int k = 0; k < R->nilpotency(); ++k) all = all && check_etale(mu_subquotient(d, k)).etale;
      const bool etale = check_etale(d).etale;
      const std::string ctx = R->name() + " #" + std::to_string(i) + " exps " + str(b.exponents);
      t.expect(etale == all, "subquotients disagree: " + ctx);
      // φ is bijective on these rings, so v -> A φ(v) is bijective iff A is.
      t.expect(etale == oracle::linear_bijective(d.action("phi"), b.exponents), "enumeration disagrees: " + ctx);
    }
  }
  return t;
}

// Every étale rank-n module over a finite field for φ = Frobenius.
std::vector<SModule> all_etale(const RingPtr& F, int n) {
  const auto elems = oracle::all_elements(F);
  const auto base = CanonicalModule::free(F, n);
  std::vector<SModule> out;
  std::vector<std::size_t> idx(n * n, 0);
  while (true) {
    Matrix A(F, n, n);
    for (int k = 0; k < n * n; ++k) A.at(k / n, k % n) = elems[idx[k]];
    if (invertible(base, A)) out.push_back(make_smodule(base, single("phi", RingEndo::field_frobenius(1)), {{"phi", A}}));
    int k = 0;
    while (k < n * n && ++idx[k] == elems.size()) idx[k++] = 0;
    if (k == n * n) break;
  }
  return out;
}

// All equivariant hom coordinates D1 -> D2, by enumeration.
std::set<oracle::Vec> brute_equivariant(const SModule& d1, const SModule& d2) {
  const auto hm = hom_modules(d1.base, d2.base);
  std::set<oracle::Vec> out;
  for (const auto& c : oracle::all_vectors(d1.ring(), hm.exponents)) {
    Matrix F = hom_vector_to_matrix(d1.base, d2.base, c);
    const auto& g = d1.monoid.generators[0];
    if (d2.action(g.label) * apply_endo(g.endo, F) == F * d1.action(g.label)) out.insert(oracle::key(c));
  }
  return out;
}

bool is_equivariant(const SModule& d1, const SModule& d2, const Matrix& F) {
  for (const auto& g : d1.monoid.generators)
    if (reduce_rows(d2.action(g.label) * apply_endo(g.endo, F), d2.base.exponents) !=
        reduce_rows(F * d1.action(g.label), d2.base.exponents))
      return false;
  return true;
}

// f : D1 ⊗ D2 -> D3 (r3 × r1 r2) to D1 -> Hom(D2, D3), and back.
Matrix curry(const Matrix& f, const SModule& d1, const SModule& d2, const SModule& d3) {
  const int r1 = d1.rank(), r2 = d2.rank(), r3 = d3.rank();
  const RingPtr& R = f.ring();
  Matrix out(R, r2 * r3, r1);
  for (int a = 0; a < r1; ++a) {
    Matrix Fa(R, r3, r2);
    for (int k = 0; k < r3; ++k)
      for (int b = 0; b < r2; ++b) Fa.at(k, b) = f.at(k, a * r2 + b);
    auto v = hom_matrix_to_vector(d2.base, d3.base, Fa);
    for (int i = 0; i < r2 * r3; ++i) out.at(i, a) = v[i];
  }
  return out;
}

Matrix uncurry(const Matrix& g, const SModule& d1, const SModule& d2, const SModule& d3) {
  const int r1 = d1.rank(), r2 = d2.rank(), r3 = d3.rank();
  const RingPtr& R = g.ring();
  Matrix out(R, r3, r1 * r2);
  for (int a = 0; a < r1; ++a) {
    std::vector<Element> v;
    for (int i = 0; i < r2 * r3; ++i) v.push_back(g.at(i, a));
    Matrix Fa = hom_vector_to_matrix(d2.base, d3.base, v);
    for (int k = 0; k < r3; ++k)
      for (int b = 0; b < r2; ++b) out.at(k, a * r2 + b) = Fa.at(k, b);
  }
  return out;
}

// 3. Fixed points of the internal hom are the equivariant maps; the tensor-hom
// adjunction is a bijection on equivariant maps.
Tally monoidal_laws() {
  Tally t;
  std::uint64_t st = 3003;
  for (auto F : {Ring::finite_field(2, 1), Ring::finite_field(2, 2)}) {
    const std::vector<SModule> by_rank[2] = {all_etale(F, 1), all_etale(F, 2)};
    std::vector<SModule> mods = by_rank[0];
    mods.insert(mods.end(), by_rank[1].begin(), by_rank[1].end());
    auto pick = [&](int r) -> const SModule& {
      const auto& v = by_rank[r - 1];
      return v[gen::uniform(st, 0, static_cast<int>(v.size()) - 1)];
    };
    // Brute force is cheap except for rank-2 pairs over F_4 (4^8 candidates).
    for (std::size_t i = 0; i < mods.size(); ++i)
      for (std::size_t j = 0; j < mods.size(); ++j) {
        const auto& d1 = mods[i];
        const auto& d2 = mods[j];
        const int dim = d1.rank() * d2.rank();
        const std::string ctx = F->name() + " pair " + std::to_string(i) + "," + std::to_string(j);
        const auto eq = span_set(equivariant_homs(d1, d2).span, F, dim);
        const auto fx = span_set(fixed_points(internal_hom(d1, d2), {"phi"}), F, dim);
        t.expect(eq == fx, "fixed points of Hom differ: " + ctx);
        const bool brute = F->degree() == 1 || dim < 4 || gen::uniform(st, 0, 400) == 0;
        if (brute) t.expect(eq == brute_equivariant(d1, d2), "enumeration differs: " + ctx);
      }
    // Adjunction on triples with r1 r2 r3 <= 4.
    const std::vector<std::array<int, 3>> shapes{{1, 1, 1}, {2, 1, 1}, {1, 2, 1}, {1, 1, 2},
                                                 {2, 2, 1}, {2, 1, 2}, {1, 2, 2}};
    int triples = 0;
    for (int k = 0; k < 140; ++k) {
      const auto& sh = shapes[k % shapes.size()];
      const auto& d1 = pick(sh[0]);
      const auto& d2 = pick(sh[1]);
      const auto& d3 = pick(sh[2]);
      ++triples;
      const SModule T = tensor_smod(d1, d2);
      const SModule H = internal_hom(d2, d3);
      const auto left = equivariant_homs(T, d3);
      const auto right = equivariant_homs(d1, H);
      const int dim = d1.rank() * d2.rank() * d3.rank();
      const std::string ctx = F->name() + " triple " + std::to_string(k);
      t.expect(span_set(left.span, F, dim).size() == span_set(right.span, F, dim).size(), "dimensions: " + ctx);
      for (const auto& f : left.basis) {
        const Matrix g = curry(f, d1, d2, d3);
        t.expect(is_equivariant(d1, H, g), "curried map not equivariant: " + ctx);
        t.expect(uncurry(g, d1, d2, d3) == f, "curry not invertible: " + ctx);
      }
      for (const auto& g : right.basis) t.expect(is_equivariant(T, d3, uncurry(g, d1, d2, d3)), "uncurried: " + ctx);
    }
    t.expect(triples >= 50, "too few triples over " + F->name());
  }
  return t;
}

// 4. Comparison is an isomorphism on the corpus; the GR(4,2) basis by enumeration.
Tally comparison_morphisms() {
  Tally t;
  std::uint64_t st = 4004;
  std::vector<std::pair<std::string, SModule>> corpus;
  auto F4 = Ring::finite_field(2, 2), F8 = Ring::finite_field(2, 3), G = Ring::galois_ring(2, 2, 2);
  auto G9 = Ring::galois_ring(3, 2, 2), Z4 = Ring::prime_power(2, 2), Z8 = Ring::prime_power(2, 3);
  const auto frob = single("phi", RingEndo::field_frobenius(1));
  const auto witt = single("phi", RingEndo::witt_frobenius(1));
  const auto id = single("phi", RingEndo::identity());
  corpus.push_back({"F4 A=1", make_smodule(CanonicalModule::free(F4, 1), frob, {{"phi", one_by_one(F4->one())}})});
  corpus.push_back({"F4 A=t", make_smodule(CanonicalModule::free(F4, 1), frob, {{"phi", one_by_one(F4->t())}})});
  corpus.push_back({"GR(4,2) A=3", make_smodule(CanonicalModule::free(G, 1), witt, {{"phi", one_by_one(G->from_int(3))}})});
  corpus.push_back({"GR(4,2) unit", unit_smodule(G, witt)});
  corpus.push_back({"Z/4 torsion", make_smodule({Z4, {1}}, id, {{"phi", one_by_one(Z4->one())}})});
  corpus.push_back({"Z/8 mixed", make_smodule({Z8, {3, 1}}, id, {{"phi", Matrix::identity(Z8, 2)}})});
  for (auto R : {F4, F8, G, G9}) {
    const RingEndo phi = absolute_frobenius(R);
    for (int i = 0; i < 6; ++i) {
      const int n = gen::uniform(st, 1, 2);
      Matrix A = trivialized(random_invertible(R, n, st), phi);
      corpus.push_back({R->name() + " trivialized #" + std::to_string(i),
                        make_smodule(CanonicalModule::free(R, n), single("phi", phi), {{"phi", A}})});
    }
  }
  for (const auto& [name, d] : corpus) {
    auto inv = invariants(d, {"phi"});
    t.expect(comparison(d, inv).iso, "comparison not iso: " + name);
    t.expect(inv.module.base.exponents == d.base.exponents, "invariants lost exponents: " + name);
  }

  // Solutions of 3·φ(x) = x in GR(4,2), by enumerating all 16 elements.
  const Element three = G->from_int(3);
  std::set<std::vector<Int>> sols;
  for (const auto& x : oracle::all_elements(G))
    if (three * apply_endo(RingEndo::witt_frobenius(1), x) == x) sols.insert(x.coeffs());
  const Element b = invariants(corpus[2].second, {"phi"}).basis.at(0, 0);
  t.expect(b == Element(G, {1, 2}), "basis is " + b.to_string() + ", expected 1+2t");
  std::set<std::vector<Int>> generated;
  for (Int a = 0; a < 4; ++a) generated.insert(b.scaled(a).coeffs());
  t.expect(generated == sols, "basis does not generate the solution set");
  t.expect(sols.size() == 4, "expected 4 solutions");
  return t;
}

// 5. Dévissage descent against the direct solve.
Tally descent_vs_direct() {
  Tally t;
  std::uint64_t st = 5005;
  int done = 0;
  for (auto R : {Ring::galois_ring(2, 2, 1), Ring::galois_ring(2, 2, 2), Ring::galois_ring(2, 3, 1)}) {
    const RingEndo phi = R->degree() > 1 ? RingEndo::witt_frobenius(1) : RingEndo::identity();
    const auto m = single("phi", phi);
    int here = 0;
    for (int i = 0; i < 400 && here < 40; ++i) {
      CanonicalModule b{R, gen::random_exps(R, gen::uniform(st, 1, 2), st)};
      auto d = gen::random_etale(b, m, st);
      if (!d) continue;
      ++here;
      const std::string ctx = R->name() + " #" + std::to_string(i) + " exps " + str(b.exponents);
      auto res = devissage_descent(*d, {"phi"});
      auto direct = invariants(*d, {"phi"});
      t.expect(res.certificate.agrees_with_direct, "certificate disagrees: " + ctx);
      t.expect(sorted(res.inv.module.base.exponents) == sorted(direct.module.base.exponents), "exponents: " + ctx);
      t.expect(same_span(res.inv.basis, direct.basis, b.exponents), "spans differ: " + ctx);
    }
    done += here;
  }
  t.expect(done >= 100, "only " + std::to_string(done) + " modules");
  return t;
}

// 6. Both round trips on the same objects, with explicit isomorphisms.
void both_ways_module(Tally& t, const SModule& d, const std::string& ctx) {
  const TowerBudget budget;  // levels up to 12
  auto r = roundtrip_module(d, budget);
  t.expect(r.ok && r.iso && invertible(d.base, *r.iso), "D∘V not iso: " + ctx);
  t.expect(sorted(r.rep.base.exponents) == sorted(d.base.exponents), "V changed exponents: " + ctx);
  auto back = roundtrip_rep(r.rep, d.ring(), budget);
  t.expect(back.ok && back.iso && invertible(r.rep.base, *back.iso), "V∘D not iso: " + ctx);
}

void both_ways_rep(Tally& t, const GaloisRep& v, const RingPtr& target, const std::string& ctx) {
  const TowerBudget budget;
  auto r = roundtrip_rep(v, target, budget);
  t.expect(r.ok && r.iso && invertible(v.base, *r.iso), "V∘D not iso: " + ctx);
  t.expect(sorted(r.module.base.exponents) == sorted(v.base.exponents), "D changed exponents: " + ctx);
  auto back = roundtrip_module(r.module, budget);
  t.expect(back.ok && back.iso && invertible(r.module.base, *back.iso), "D∘V not iso: " + ctx);
}

Tally fontaine_roundtrip() {
  Tally t;
  std::uint64_t st = 6006;
  // (a) every rank-one étale module over F_2 and F_4.
  for (auto F : {Ring::finite_field(2, 1), Ring::finite_field(2, 2)})
    for (const auto& a : oracle::all_elements(F)) {
      if (a == F->zero()) continue;
      both_ways_module(t, phi_module(CanonicalModule::free(F, 1), one_by_one(a)), F->name() + " A=" + a.to_string());
    }
  // (b) random rank-two étale modules over F_2.
  auto F2 = Ring::finite_field(2, 1);
  for (int i = 0; i < 50; ++i) {
    Matrix A = random_invertible(F2, 2, st);
    both_ways_module(t, phi_module(CanonicalModule::free(F2, 2), A), "F2 rank 2 A=" + A.to_string());
  }
  // (c) representations over Z/4, torsion included.
  auto Z4 = Ring::prime_power(2, 2);
  both_ways_rep(t, {{Z4, {2, 1}}, mat(Z4, 2, 2, {1, 2, 1, 1})}, Ring::galois_ring(2, 2, 2), "non-split [2,1]");
  int reps = 1;
  for (int i = 0; reps < 24; ++i) {
    CanonicalModule b{Z4, gen::random_exps(Z4, gen::uniform(st, 1, 2), st)};
    Matrix f = gen::random_hom(b, b, st);
    if (!invertible(b, f)) continue;
    const RingPtr target = i % 2 ? Ring::galois_ring(2, 2, 2) : Z4;
    both_ways_rep(t, {b, f}, target, "Z/4 exps " + str(b.exponents) + " frob " + f.to_string() + " -> " + target->name());
    ++reps;
  }
  return t;
}

// S_3 as permutations of {0,1,2} in lexicographic order; element 0 is the identity.
std::vector<std::vector<int>> s3_table() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      std::array<int, 3> c;
      for (int k = 0; k < 3; ++k) c[k] = perms[i][perms[j][k]];
      t[i][j] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return t;
}

struct CoinductionCase {
  std::string name;
  SubmonoidData data;
  MonoidSpec ambient;
  // Builds ambient actions of the given rank.
  std::function<std::map<std::string, Matrix>(int, std::uint64_t&)> actions;
};

void check_coinduction(Tally& t, const CoinductionCase& c, const SModule& d, const std::string& ctx) {
  auto tc = check_tensor_coinduction(d, c.data);
  t.expect(tc.iso && tc.equivariant, "tensor-coinduction: " + ctx);
  const SModule x = restrict_to_submonoid(d, c.data);
  auto bij = invariants_bijection(x, c.data);
  const auto brute = oracle::fixed_set(x, x.monoid.labels());
  t.expect(bij.bijective, "invariants map not bijective: " + ctx);
  t.expect(bij.fixed == brute.size() && bij.coinduced_fixed == brute.size(), "invariant counts: " + ctx);
  auto cm = coinduce_module(x, c.data);
  auto ds = descend_from_coinduced(cm);
  t.expect(ds.witness_iso && ds.witness_equivariant, "descend∘coinduce witness: " + ctx);
  for (const auto& g : x.monoid.generators)
    t.expect(ds.module.action(g.label) == x.action(g.label), "descended action " + g.label + ": " + ctx);
  t.expect(coinduce_module(ds.module, c.data).blocks == cm.blocks, "coinduce again: " + ctx);
}

// 7. Invariants bijection, tensor-coinduction isomorphism, descend∘coinduce.
Tally coinduction() {
  Tally t;
  std::uint64_t st = 7007;
  auto F4 = Ring::finite_field(2, 2);
  const RingEndo frob = RingEndo::field_frobenius(1);
  auto random_etale_matrix = [&](int n, std::uint64_t& s) { return random_invertible(F4, n, s); };
  // Coboundaries B·g(B)^{-1} satisfy every group relation.
  auto coboundary = [&](const MonoidSpec& m) {
    return [&, m](int n, std::uint64_t& s) {
      Matrix B = random_invertible(F4, n, s);
      std::map<std::string, Matrix> acts;
      for (const auto& g : m.generators) acts[g.label] = trivialized(B, g.endo);
      return acts;
    };
  };
  std::vector<CoinductionCase> cases;
  {
    MonoidSpec m{{{"e1", frob}}, {}, {}};
    cases.push_back({"2N in N", SubmonoidData::numeric({2}), m,
                     [&](int n, std::uint64_t& s) { return std::map<std::string, Matrix>{{"e1", random_etale_matrix(n, s)}}; }});
  }
  {
    MonoidSpec m{{{"e1", frob}, {"e2", RingEndo::identity()}}, {{"e1", "e2"}}, {}};
    cases.push_back({"(2N)^2 in N^2", SubmonoidData::numeric({2, 2}), m, [&](int n, std::uint64_t& s) {
                       // e2 acts by an F_2-matrix commuting with the e1 action.
                       Matrix A = random_etale_matrix(n, s);
                       Matrix C = Matrix::identity(F4, n);
                       if (n == 2 && gen::uniform(s, 0, 1)) {
                         A = mat(F4, 2, 2, {1, 1, 0, 1});
                         C = A;
                       }
                       return std::map<std::string, Matrix>{{"e1", A}, {"e2", C}};
                     }});
  }
  {
    MonoidSpec m{{{"u", frob}}, {}, {}};
    cases.push_back({"1 in Z/2", SubmonoidData::group({{0, 1}, {1, 0}}, {0}, {{"u", 1}}, {}), m, coboundary(m)});
  }
  {
    MonoidSpec m{{{"a", frob}, {"b", RingEndo::identity()}}, {}, {}};
    cases.push_back({"A3 in S3", SubmonoidData::group(s3_table(), {0, 3, 4}, {{"a", 1}, {"b", 3}}, {{"c", 3}}), m,
                     coboundary(m)});
  }
  for (const auto& c : cases)
    for (int i = 0; i < 12; ++i) {
      const int n = 1 + i % 2;
      SModule d = make_smodule(CanonicalModule::free(F4, n), c.ambient, c.actions(n, st));
      check_coinduction(t, c, d, c.name + " #" + std::to_string(i));
    }
  return t;
}

// Coefficients of ((1+X)^a - 1)^j mod (p^N, X^high), by repeated convolution
// of Pascal rows.
std::vector<Int> binomial_power(int a, int j, Int mod, int high) {
  std::vector<Int> base(high, 0);
  for (int k = 1; k <= a && k < high; ++k) base[k] = oracle::binom_mod(a, k, mod);
  std::vector<Int> acc(high, 0);
  acc[0] = 1;
  for (int r = 0; r < j; ++r) {
    std::vector<Int> next(high, 0);
    for (int x = 0; x < high; ++x)
      for (int y = 0; x + y < high; ++y) next[x + y] = (next[x + y] + acc[x] * base[y]) % mod;
    acc = std::move(next);
  }
  return acc;
}

// 8. φ(X) = (1+X)^p - 1 and γ_a(X) = (1+X)^a - 1, on every power of X.
Tally ring_formulas() {
  Tally t;
  const int high = 16;
  for (Int p : {2, 3}) {
    auto L = Ring::truncated_laurent(Ring::prime_power(p, 3), 0, high);
    const Int mod = oracle::ipow(p, 3);
    std::vector<std::pair<std::string, std::pair<RingEndo, int>>> endos{
        {"phi", {RingEndo::cyclotomic_phi(L), static_cast<int>(p)}},
        {"gamma_3", {RingEndo::cyclotomic_gamma(L, 3), 3}},
        {"gamma_5", {RingEndo::cyclotomic_gamma(L, 5), 5}}};
    for (const auto& [name, ea] : endos)
      for (int j = 1; j < high; ++j) {
        const auto expect = binomial_power(ea.second, j, mod, high);
        const Element got = apply_endo(ea.first, L->monomial(0, j));
        for (int k = 0; k < high; ++k)
          t.expect(got.coeffs()[L->index(0, k)] == expect[k],
                   name + " on X^" + std::to_string(j) + " at p=" + std::to_string(p) + ", coefficient " +
                       std::to_string(k));
      }
  }
  return t;
}

std::string run_selftest_report() {
  const char* argv[] = {"devkit", "selftest", "--seed", "0", "--tier", "small"};
  std::ostringstream out, err;
  const int code = run_cli(6, argv, out, err);
  return std::to_string(code) + "\n" + out.str();
}

// 9. Two selftest runs give byte-identical reports.
Tally determinism() {
  Tally t;
  const std::string a = run_selftest_report(), b = run_selftest_report();
  t.expect(a.rfind("0\n", 0) == 0, "selftest exit code " + a.substr(0, a.find('\n')));
  t.expect(a == b, "reports differ");
  return t;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Tally()>>> criteria{
      {"1 structure theorem", structure_theorem},   {"2 devissage consistency", devissage_consistency},
      {"3 closed monoidal laws", monoidal_laws},    {"4 comparison morphisms", comparison_morphisms},
      {"5 descent equals direct", descent_vs_direct}, {"6 fontaine round trip", fontaine_roundtrip},
      {"7 coinduction", coinduction},                {"8 ring formulas", ring_formulas},
      {"9 determinism", determinism}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Tally t;
    try {
      t = run();
    } catch (const std::exception& e) {
      t.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = t.failures == 0;
    failed += !ok;
    std::printf("%s  %-26s %6d checks  %7.2fs", ok ? "PASS" : "FAIL", name.c_str(), t.checks, secs);
    if (!ok) std::printf("  (%d failed; first: %s)", t.failures, t.first.c_str());
    std::printf("\n");
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
