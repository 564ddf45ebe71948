#include "devkit/fontaine.hpp"

#include <algorithm>

namespace devkit {

namespace {

void require_prime_coefficients(const RingPtr& R) {
  if (R->is_laurent() || R->degree() != 1)
    throw Error(ErrorKind::InvalidArgument, "Galois representations live over Z/p^N", {{"ring", R->name()}});
}

void require_unramified(const RingPtr& R) {
  if (R->is_laurent())
    throw Error(ErrorKind::InvalidArgument, "phi-modules live over a Galois ring or finite field", {{"ring", R->name()}});
}

Exps sorted(Exps e) {
  std::sort(e.begin(), e.end());
  return e;
}

RingPtr same_shape(const RingPtr& base, int degree, std::vector<Int> f, const RingLimits& lim) {
  if (base->precision() == 1) return Ring::finite_field(base->p(), degree, std::move(f), lim);
  if (degree == 1) return Ring::prime_power(base->p(), base->precision(), lim);
  return Ring::galois_ring(base->p(), base->precision(), degree, std::move(f), lim);
}

// Runs the descent over tower levels until the invariants span. `d` lives over
// `base` (degree d0); the tower is GR(p^N, tower_degree * m).
TowerSolution tower_solve(const SModule& d, int tower_degree, const std::vector<std::string>& subgens,
                          const RingPtr& preferred, const Exps& expected, const TowerBudget& budget) {
  const RingPtr& B = d.ring();
  const RingPtr unit_level = tower_degree == B->degree() ? B : preferred;
  TowerSolution out;
  for (int m = 1; m <= budget.max_level; ++m) {
    RingPtr T = m == 1 && unit_level ? unit_level : nullptr;
    if (!T) {
      RingLimits lim;
      lim.max_degree = std::max(lim.max_degree, tower_degree * budget.max_level);
      T = same_shape(B, tower_degree * m, {}, lim);
    }
    RingMorphism iota = same_ring(T, B) ? RingMorphism::identity(B) : RingMorphism::embedding(B, T);
    SModule x = extend_scalars(d, iota);
    DescentResult res = devissage_descent(x, subgens, false, true, budget.solve_cap, preferred);
    out.tried_ranks.push_back(res.inv.module.rank());
    const bool spans = expected.empty() ||
                       (!res.certificate.levels.empty() && res.certificate.levels.back().comparison_iso);
    const bool full = sorted(res.inv.module.base.exponents) == sorted(expected) && spans;
    if (full) {
      out.level = m;
      out.tower = T;
      out.inv = std::move(res.inv);
      out.certificate = std::move(res.certificate);
      return out;
    }
  }
  int best = 0;
  for (int r : out.tried_ranks) best = std::max(best, r);
  throw Error(ErrorKind::ExtensionBudgetExceeded, "no tower level trivializes the module",
              {{"budget", budget.max_level}, {"best_rank", best}, {"expected_rank", expected.size()},
               {"ranks_by_level", out.tried_ranks}});
}

void require_etale(const SModule& d) {
  EtaleVerdict v = check_etale(d);
  if (!v.etale)
    throw Error(ErrorKind::NotEtale, "module is not etale",
                {{"generator", v.failing_generator}, {"failure", v.failure},
                 {"witness", v.witness ? v.witness->to_string() : ""}});
}

}  // namespace

void validate_rep(const GaloisRep& v) {
  require_prime_coefficients(v.ring());
  require_same_ring(v.frob.ring(), v.ring(), "galois rep");
  KernelCokernel kc = kernel_cokernel({v.base, v.base, v.frob});
  if (!kc.iso) throw Error(ErrorKind::NotEtale, "Frobenius does not act invertibly", {{"frob", v.frob.to_string()}});
}

SModule rep_as_smodule(const GaloisRep& v) {
  MonoidSpec m{{{"frob", RingEndo::identity()}}, {}, {}};
  return make_smodule(v.base, m, {{"frob", v.frob}});
}

MonoidSpec phi_monoid() { return {{{"phi", RingEndo::witt_frobenius(1)}}, {}, {}}; }

SModule phi_module(const CanonicalModule& base, const Matrix& A) {
  require_unramified(base.ring);
  return make_smodule(base, phi_monoid(), {{"phi", A}});
}

RingPtr tower_ring(const RingPtr& base, int m, const TowerBudget& budget) {
  if (m == 1) return base;
  RingLimits lim;
  lim.max_degree = std::max(lim.max_degree, base->degree() * std::max(m, budget.max_level));
  return same_shape(base, base->degree() * m, {}, lim);
}

TowerSolution lang_solve(const SModule& d, const TowerBudget& budget) {
  require_unramified(d.ring());
  require_etale(d);
  return tower_solve(d, d.ring()->degree(), {"phi"}, nullptr, d.base.exponents, budget);
}

FontaineResult module_to_rep(const SModule& d, const TowerBudget& budget) {
  require_unramified(d.ring());
  if (d.monoid.generators.size() != 1 || !d.monoid.has("phi"))
    throw Error(ErrorKind::InvalidArgument, "expected a module for the monoid {phi: x -> x^p}");
  // Over a field the two Frobenius descriptors are the same map.
  const RingEndo& e = d.monoid.find("phi").endo;
  const bool absolute = e == RingEndo::witt_frobenius(1) ||
                        (d.ring()->precision() == 1 && e == RingEndo::field_frobenius(1));
  if (!absolute) throw Error(ErrorKind::InvalidArgument, "expected a module for the monoid {phi: x -> x^p}");
  require_etale(d);
  const RingPtr& B = d.ring();
  const int q_deg = B->degree();
  // sigma = Frob_q generates Gal(Fbar/F_q); on B itself it is the identity.
  MonoidSpec both{{{"phi", RingEndo::witt_frobenius(1)}, {"sigma", RingEndo::witt_frobenius(q_deg)}},
                  {{"phi", "sigma"}}, {}};
  SModule aug = make_smodule(d.base, both, {{"phi", d.action("phi")}, {"sigma", Matrix::identity(B, d.rank())}});
  FontaineResult out;
  out.solution = tower_solve(aug, q_deg, {"phi"}, nullptr, d.base.exponents, budget);
  const SModule& inv = out.solution.inv.module;
  out.rep = GaloisRep{inv.base, inv.action("sigma")};
  return out;
}

FontaineResult rep_to_module(const GaloisRep& v, const RingPtr& target, const TowerBudget& budget) {
  validate_rep(v);
  require_unramified(target);
  const RingPtr& Z = v.ring();
  if (target->p() != Z->p() || target->precision() != Z->precision())
    throw Error(ErrorKind::RingMismatch, "target ring has different coefficients",
                {{"rep_ring", Z->name()}, {"target", target->name()}});
  const int q_deg = target->degree();
  MonoidSpec both{{{"sigma", RingEndo::witt_frobenius(q_deg)}, {"phi", RingEndo::witt_frobenius(1)}},
                  {{"phi", "sigma"}}, {}};
  SModule aug = make_smodule(v.base, both, {{"sigma", v.frob}, {"phi", Matrix::identity(Z, v.rank())}});
  FontaineResult out;
  out.solution = tower_solve(aug, q_deg, {"sigma"}, target, v.base.exponents, budget);
  const SModule& inv = out.solution.inv.module;
  out.module = phi_module(inv.base, inv.action("phi"));
  return out;
}

RoundtripReport roundtrip_module(const SModule& d, const TowerBudget& budget) {
  RoundtripReport rep;
  rep.direction = "module";
  FontaineResult fwd = module_to_rep(d, budget);
  FontaineResult back = rep_to_module(fwd.rep, d.ring(), budget);
  rep.forward_level = fwd.solution.level;
  rep.backward_level = back.solution.level;
  rep.rep = fwd.rep;
  rep.module = back.module;
  rep.iso = find_isomorphism(back.module, phi_module(d.base, d.action("phi")), budget.search_cap);
  rep.ok = rep.iso.has_value();
  return rep;
}

RoundtripReport roundtrip_rep(const GaloisRep& v, const RingPtr& target, const TowerBudget& budget) {
  RoundtripReport rep;
  rep.direction = "rep";
  FontaineResult fwd = rep_to_module(v, target, budget);
  FontaineResult back = module_to_rep(fwd.module, budget);
  rep.forward_level = fwd.solution.level;
  rep.backward_level = back.solution.level;
  rep.module = fwd.module;
  rep.rep = back.rep;
  rep.iso = find_isomorphism(rep_as_smodule(back.rep), rep_as_smodule(v), budget.search_cap);
  rep.ok = rep.iso.has_value();
  return rep;
}

}  // namespace devkit
