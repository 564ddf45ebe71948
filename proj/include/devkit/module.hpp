#pragma once

#include "devkit/linalg.hpp"

namespace devkit {

/// ⊕ R/r^{n_i}; n_i == ring->nilpotency() is a free summand ("inf@N").
struct CanonicalModule {
  RingPtr ring;
  Exps exponents;

  static CanonicalModule free(const RingPtr& ring, int rank);
  int rank() const { return static_cast<int>(exponents.size()); }
  bool is_zero() const { return exponents.empty(); }
  int infinity() const { return ring->nilpotency(); }
  bool is_free_summand(int i) const { return exponents[i] >= infinity(); }
  bool operator==(const CanonicalModule& o) const;
  std::string to_string() const;
};

/// Cokernel of `relations` : R^b -> R^a (columns are relations).
struct PresentedModule {
  RingPtr ring;
  Matrix relations;
};

struct SmithDecomposition {
  CanonicalModule module;
  Matrix proj;  // presentation coordinates -> canonical coordinates
  Matrix lift;  // canonical generators as presentation vectors
  SmithForm form;
};
SmithDecomposition smith_decompose(const PresentedModule& m);

/// Ranks of r^n M / r^{n+1} M for n = 0 .. nilpotency-1.
std::vector<int> mu_devissage(const CanonicalModule& m);
/// Ranks of M[r^{n+1}] / M[r^n] for n = 0 .. nilpotency-1.
std::vector<int> tau_devissage(const CanonicalModule& m);
/// The exponent multiset (sorted descending) with the given μ-ranks.
Exps exponents_from_mu(const std::vector<int>& mu, int nilpotency);
int torsion_bound(const CanonicalModule& m);

struct GradedPieces {
  CanonicalModule rk;        // r^k M
  Matrix rk_inclusion;       // columns: generators of r^k M inside M
  CanonicalModule torsion;   // M[r^k]
  Matrix torsion_inclusion;
};
GradedPieces graded_pieces(const CanonicalModule& m, int k);

/// Kronecker-ordered pairwise minima (index i * |m2| + j).
CanonicalModule tensor_modules(const CanonicalModule& m1, const CanonicalModule& m2);
/// Hom(m1, m2), basis E_ij with i indexing m2 and j indexing m1 (index i * |m1| + j).
CanonicalModule hom_modules(const CanonicalModule& m1, const CanonicalModule& m2);

struct ModuleHom {
  CanonicalModule source, target;
  Matrix matrix;  // target.rank() x source.rank()
};
/// Throws InvalidArgument when an entry violates the torsion column condition.
void validate_hom(const ModuleHom& f);
ModuleHom normalize_hom(ModuleHom f);

struct KernelCokernel {
  CanonicalModule kernel;
  Matrix kernel_basis;  // columns in source coordinates
  CanonicalModule cokernel;
  Matrix cokernel_proj, cokernel_lift;
  bool iso = false;
};
KernelCokernel kernel_cokernel(const ModuleHom& f);

/// The free R/r^n-module lifting a module over the residue ring.
CanonicalModule lift_module(const CanonicalModule& residue_module, const RingPtr& ring, int n);

}  // namespace devkit
