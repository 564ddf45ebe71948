#include "devkit/selftest.hpp"

#include <functional>

#include "devkit/serialize.hpp"

namespace devkit {

namespace gen {

std::uint64_t next(std::uint64_t& st) { return splitmix64(st); }

int uniform(std::uint64_t& st, int lo, int hi) {
  return lo + static_cast<int>(next(st) % static_cast<std::uint64_t>(hi - lo + 1));
}

Matrix random_matrix(const RingPtr& ring, int rows, int cols, std::uint64_t& st) {
  Matrix m(ring, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = random_element(ring, st);
  return m;
}

Exps random_exps(const RingPtr& ring, int rank, std::uint64_t& st) {
  Exps e;
  for (int i = 0; i < rank; ++i) e.push_back(uniform(st, 1, ring->nilpotency()));
  std::sort(e.rbegin(), e.rend());
  return e;
}

Matrix random_hom(const CanonicalModule& src, const CanonicalModule& tgt, std::uint64_t& st) {
  const RingPtr& R = src.ring;
  Matrix m(R, tgt.rank(), src.rank());
  for (int i = 0; i < tgt.rank(); ++i)
    for (int j = 0; j < src.rank(); ++j) {
      const int need = std::max(0, tgt.exponents[i] - src.exponents[j]);
      m.at(i, j) = reduce_mod_r_power(random_element(R, st) * R->r_pow(need), tgt.exponents[i]);
    }
  return m;
}

SModule random_smodule(const CanonicalModule& base, const MonoidSpec& monoid, std::uint64_t& st) {
  std::map<std::string, Matrix> acts;
  for (const auto& g : monoid.generators) acts[g.label] = random_hom(base, base, st);
  return make_smodule(base, monoid, std::move(acts));
}

std::optional<SModule> random_etale(const CanonicalModule& base, const MonoidSpec& monoid, std::uint64_t& st,
                                    int tries) {
  for (int i = 0; i < tries; ++i) {
    SModule d = random_smodule(base, monoid, st);
    if (check_etale(d).etale) return d;
  }
  return std::nullopt;
}

}  // namespace gen

namespace {

struct Ctx {
  std::uint64_t seed;
  int scale;
};

using Check = std::function<bool(std::uint64_t&, std::string&)>;

SuiteResult run_suite(const std::string& name, int cases, std::uint64_t seed, const Check& body) {
  SuiteResult r{name, 0, 0, {}};
  std::uint64_t st = seed;
  for (int i = 0; i < cases; ++i) {
    ++r.cases;
    std::string note;
    bool ok = false;
    try {
      ok = body(st, note);
    } catch (const Error& e) {
      note = std::string(to_string(e.kind())) + ": " + e.what();
    } catch (const std::exception& e) {
      note = e.what();
    }
    if (!ok) {
      ++r.failures;
      if (r.notes.size() < 3) r.notes.push_back("case " + std::to_string(i) + ": " + note);
    }
  }
  return r;
}

std::uint64_t suite_seed(std::uint64_t seed, int index) {
  std::uint64_t s = seed + 0x1000193ULL * static_cast<std::uint64_t>(index + 1);
  return splitmix64(s);
}

MonoidSpec one_gen(const std::string& label, RingEndo e) { return {{{label, std::move(e)}}, {}, {}}; }

bool endo_homomorphism(const RingPtr& R, const RingEndo& e, std::uint64_t& st, std::string& note) {
  Element x = random_element(R, st), y = random_element(R, st);
  if (apply_endo(e, x + y) != apply_endo(e, x) + apply_endo(e, y)) {
    note = "additivity fails on " + R->name();
    return false;
  }
  if (apply_endo(e, x * y) != apply_endo(e, x) * apply_endo(e, y)) {
    note = "multiplicativity fails on " + R->name() + " for " + x.to_string() + ", " + y.to_string();
    return false;
  }
  return apply_endo(e, R->one()) == R->one();
}

std::vector<SuiteResult> suites(const Ctx& c) {
  std::vector<SuiteResult> out;
  int idx = 0;
  auto add = [&](const std::string& name, int cases, const Check& body) {
    out.push_back(run_suite(name, cases * c.scale, suite_seed(c.seed, idx++), body));
  };

  const RingPtr F2 = Ring::finite_field(2, 1), F4 = Ring::finite_field(2, 2);
  const RingPtr Z4 = Ring::prime_power(2, 2), Z8 = Ring::prime_power(2, 3), Z27 = Ring::prime_power(3, 3);
  const RingPtr G42 = Ring::galois_ring(2, 2, 2);
  const RingPtr PS = Ring::truncated_laurent(F4, 0, 6);
  const RingPtr LZ = Ring::truncated_laurent(Z4, 0, 6);

  add("ring.endo_homomorphism", 1000, [&](std::uint64_t& st, std::string& note) {
    return endo_homomorphism(F4, RingEndo::field_frobenius(1), st, note) &&
           endo_homomorphism(G42, RingEndo::witt_frobenius(1), st, note) &&
           endo_homomorphism(PS, RingEndo::cyclotomic_phi(PS), st, note) &&
           endo_homomorphism(LZ, RingEndo::cyclotomic_gamma(LZ, 3), st, note) &&
           endo_homomorphism(LZ, RingEndo::cyclotomic_phi(LZ), st, note);
  });

  add("ring.inverse", 40, [&](std::uint64_t& st, std::string& note) {
    for (const RingPtr& R : {G42, Z27, PS, LZ}) {
      Element x = random_element(R, st);
      if (!is_unit(x)) continue;
      if (x * invert(x) != R->one()) {
        note = "x * x^-1 != 1 for " + x.to_string() + " in " + R->name();
        return false;
      }
    }
    return true;
  });

  add("linalg.smith", 30, [&](std::uint64_t& st, std::string& note) {
    for (const RingPtr& R : {Z8, G42, PS}) {
      Matrix a = gen::random_matrix(R, gen::uniform(st, 1, 4), gen::uniform(st, 1, 4), st);
      SmithForm s = smith(a);
      Matrix d = s.P * a * s.Q;
      for (int i = 0; i < d.rows(); ++i)
        for (int j = 0; j < d.cols(); ++j) {
          const bool diag = i == j && i < static_cast<int>(s.diag.size());
          const Element want = diag ? (s.diag[i] >= R->nilpotency() ? R->zero() : R->r_pow(s.diag[i])) : R->zero();
          if (d.at(i, j) != want) {
            note = "P A Q is not the Smith diagonal over " + R->name();
            return false;
          }
        }
      if (s.P * s.Pinv != Matrix::identity(R, a.rows()) || s.Q * s.Qinv != Matrix::identity(R, a.cols())) {
        note = "transform inverses wrong over " + R->name();
        return false;
      }
    }
    return true;
  });

  add("linalg.solve", 30, [&](std::uint64_t& st, std::string& note) {
    for (const RingPtr& R : {Z8, G42, PS}) {
      const int m = gen::uniform(st, 1, 4), n = gen::uniform(st, 1, 4);
      Matrix a = gen::random_matrix(R, m, n, st);
      Exps tgt = gen::random_exps(R, m, st);
      Matrix b = reduce_rows(a * gen::random_matrix(R, n, 1, st), tgt);
      auto x = solve(a, b, tgt);
      if (!x || reduce_rows(a * *x, tgt) != b) {
        note = "consistent system not solved over " + R->name();
        return false;
      }
    }
    return true;
  });

  add("module.decomposition", 30, [&](std::uint64_t& st, std::string& note) {
    for (const RingPtr& R : {Z8, Z27, G42, PS}) {
      Matrix rel = gen::random_matrix(R, gen::uniform(st, 1, 4), gen::uniform(st, 1, 4), st);
      SmithDecomposition sd = smith_decompose({R, rel});
      // The projection kills every relation and the lift is a section.
      Matrix killed = reduce_rows(sd.proj * rel, sd.module.exponents);
      Matrix round = reduce_rows(sd.proj * sd.lift, sd.module.exponents);
      if (!killed.is_zero() || round != reduce_rows(Matrix::identity(R, sd.module.rank()), sd.module.exponents)) {
        note = "decomposition maps inconsistent over " + R->name();
        return false;
      }
      if (exponents_from_mu(mu_devissage(sd.module), R->nilpotency()) != sd.module.exponents) {
        note = "mu invariants do not recover the exponents";
        return false;
      }
    }
    return true;
  });

  add("semilinear.etale_devissage", 30, [&](std::uint64_t& st, std::string& note) {
    const RingPtr R = gen::uniform(st, 0, 1) ? G42 : Z8;
    CanonicalModule base{R, gen::random_exps(R, gen::uniform(st, 1, 3), st)};
    SModule d = gen::random_smodule(base, one_gen("phi", RingEndo::witt_frobenius(1)), st);
    bool pieces = true;
    for (int k = 0; k < R->nilpotency(); ++k) pieces = pieces && check_etale(mu_subquotient(d, k)).etale;
    if (pieces != check_etale(d).etale) {
      note = "etale verdict differs from the subquotient verdicts";
      return false;
    }
    return true;
  });

  add("semilinear.internal_hom", 12, [&](std::uint64_t& st, std::string& note) {
    const RingPtr R = gen::uniform(st, 0, 1) ? F4 : F2;
    MonoidSpec m = one_gen("phi", RingEndo::field_frobenius(1));
    auto d1 = gen::random_etale(CanonicalModule::free(R, gen::uniform(st, 1, 2)), m, st);
    auto d2 = gen::random_etale(CanonicalModule::free(R, gen::uniform(st, 1, 2)), m, st);
    if (!d1 || !d2) return true;
    SModule h = internal_hom(*d1, *d2);
    PrimeSpan fp = fixed_points(h, {"phi"});
    EquivariantHoms eh = equivariant_homs(*d1, *d2);
    if (fp.orders.size() != eh.span.orders.size() || !same_span(fp.flat, eh.span.flat, fp.ambient)) {
      note = "fixed points of the internal hom differ from the equivariant maps";
      return false;
    }
    return true;
  });

  add("transfer.descent_agrees", 10, [&](std::uint64_t& st, std::string& note) {
    const RingPtr R = gen::uniform(st, 0, 1) ? G42 : Z8;
    auto d = gen::random_etale(CanonicalModule::free(R, gen::uniform(st, 1, 2)),
                               one_gen("phi", RingEndo::witt_frobenius(1)), st);
    if (!d) return true;
    DescentResult res = devissage_descent(*d, {"phi"}, false, true);
    if (!res.certificate.agrees_with_direct) {
      note = "descent disagrees with the direct solve over " + R->name();
      return false;
    }
    return true;
  });

  add("fontaine.roundtrip", 4, [&](std::uint64_t& st, std::string& note) {
    const RingPtr R = gen::uniform(st, 0, 1) ? F4 : F2;
    auto d = gen::random_etale(CanonicalModule::free(R, 1), phi_monoid(), st);
    if (!d) return true;
    if (!roundtrip_module(*d).ok) {
      note = "module roundtrip found no isomorphism";
      return false;
    }
    GaloisRep v{CanonicalModule::free(Z4, 1), Matrix(Z4, 1, 1)};
    v.frob.at(0, 0) = Z4->from_int(gen::uniform(st, 0, 1) ? 1 : 3);
    if (!roundtrip_rep(v, Z4).ok) {
      note = "representation roundtrip found no isomorphism";
      return false;
    }
    return true;
  });

  add("coinduction.bijection", 6, [&](std::uint64_t& st, std::string& note) {
    MonoidSpec t = one_gen("g1", RingEndo::field_frobenius(2));
    SubmonoidData data = SubmonoidData::numeric({2});
    SModule d = gen::random_smodule(CanonicalModule::free(F4, gen::uniform(st, 1, 2)), t, st);
    if (!invariants_bijection(d, data).bijective) {
      note = "evaluation at the identity is not a bijection";
      return false;
    }
    Descended back = descend_from_coinduced(coinduce_module(d, data));
    if (!back.witness_iso || !back.witness_equivariant || back.module.action("g1") != d.action("g1")) {
      note = "descending the coinduced module does not recover the input";
      return false;
    }
    return true;
  });

  // A fixture whose declared commutation is violated must be reported.
  add("negative_control.relations", 1, [&](std::uint64_t&, std::string& note) {
    MonoidSpec m{{{"phi", RingEndo::field_frobenius(1)}, {"gamma", RingEndo::identity()}}, {{"phi", "gamma"}}, {}};
    Matrix t(F4, 1, 1), one = Matrix::identity(F4, 1);
    t.at(0, 0) = F4->t();
    SModule good = make_smodule(CanonicalModule::free(F4, 1), m, {{"phi", t}, {"gamma", one}});
    SModule bad = make_smodule(CanonicalModule::free(F4, 1), m, {{"phi", t}, {"gamma", t}});
    if (!check_relations(good).ok) {
      note = "consistent fixture flagged";
      return false;
    }
    if (check_relations(bad).ok) {
      note = "corrupted fixture not flagged";
      return false;
    }
    return true;
  });
  return out;
}

}  // namespace

bool SelftestReport::ok() const {
  for (const auto& s : suites)
    if (s.failures) return false;
  return true;
}

nlohmann::json SelftestReport::to_json() const {
  nlohmann::json ss = nlohmann::json::array();
  int cases = 0, failures = 0;
  for (const auto& s : suites) {
    ss.push_back({{"name", s.name}, {"cases", s.cases}, {"failures", s.failures}, {"notes", s.notes}});
    cases += s.cases;
    failures += s.failures;
  }
  return {{"seed", seed}, {"tier", tier}, {"suites", ss}, {"cases", cases}, {"failures", failures}, {"ok", ok()}};
}

SelftestReport run_selftest(std::uint64_t seed, const std::string& tier) {
  SelftestReport r{seed, tier, {}};
  if (tier == "empty") return r;
  int scale = 0;
  if (tier == "small") scale = 1;
  else if (tier == "medium") scale = 4;
  else throw Error(ErrorKind::InvalidArgument, "unknown self-test tier", {{"tier", tier}});
  r.suites = suites({seed, scale});
  return r;
}

}  // namespace devkit
