#pragma once

#include <optional>

#include "devkit/transfer.hpp"

namespace devkit {

/// A finite Z/p^N[Gal]-module on which the Galois group acts through the
/// arithmetic Frobenius: base over Z/p^N and the matrix of Frob.
struct GaloisRep {
  CanonicalModule base;
  Matrix frob;

  const RingPtr& ring() const { return base.ring; }
  int rank() const { return base.rank(); }
};

/// Ring must be Z/p^N and frob an automorphism of the base module.
void validate_rep(const GaloisRep& v);
/// The rep as an S-module for the one-generator monoid {"frob": identity}.
SModule rep_as_smodule(const GaloisRep& v);

/// {"phi": Witt-Frobenius x -> x^p} on a Galois ring or finite field.
MonoidSpec phi_monoid();
/// D over GR(p^N, d) with absolute Frobenius acting through A.
SModule phi_module(const CanonicalModule& base, const Matrix& A);

struct TowerBudget {
  int max_level = 12;
  std::size_t solve_cap = 1u << 14;
  std::size_t search_cap = 1u << 16;
};

/// GR(p^N, d*m), built from the canonical irreducible (m == 1 returns `base`).
RingPtr tower_ring(const RingPtr& base, int m, const TowerBudget& budget);

struct TowerSolution {
  int level = 0;                 // m with the tower ring GR(p^N, d*m)
  RingPtr tower;
  InvariantsResult inv;
  DescentCertificate certificate;
  std::vector<int> tried_ranks;  // solution sizes seen at each level
};

/// Smallest level m at which the fixed points of A*phi on T_m ⊗ D are free of
/// the expected shape and span T_m ⊗ D.
TowerSolution lang_solve(const SModule& d, const TowerBudget& budget = {});

struct FontaineResult {
  GaloisRep rep;            // set by module_to_rep
  SModule module;           // set by rep_to_module
  TowerSolution solution;
};

/// D -> (W(Fbar) ⊗ D)^{phi = 1} with the residual Galois action.
FontaineResult module_to_rep(const SModule& d, const TowerBudget& budget = {});
/// V -> (W(Fbar) ⊗ V)^{Gal} as a phi-module over `target` (a Galois ring
/// over the rep's coefficient ring).
FontaineResult rep_to_module(const GaloisRep& v, const RingPtr& target, const TowerBudget& budget = {});

struct RoundtripReport {
  bool ok = false;
  std::string direction;  // "module" or "rep"
  int forward_level = 0, backward_level = 0;
  std::optional<Matrix> iso;  // from the roundtrip object to the original
  GaloisRep rep;
  SModule module;
};
RoundtripReport roundtrip_module(const SModule& d, const TowerBudget& budget = {});
RoundtripReport roundtrip_rep(const GaloisRep& v, const RingPtr& target, const TowerBudget& budget = {});

}  // namespace devkit
