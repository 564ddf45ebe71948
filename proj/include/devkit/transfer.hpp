#pragma once

#include <optional>

#include "devkit/semilinear.hpp"

namespace devkit {

/// The subring fixed by a set of generators, with a basis `omega` of the
/// ambient ring over it.
struct FixedSubringEntry {
  RingPtr ambient;
  std::vector<std::string> subgens;
  RingPtr fixed;
  RingMorphism inclusion;
  std::vector<Element> omega;
  Matrix coord_inverse;  // over the prime subring

  /// x = Σ inclusion(c_k) * omega_k
  std::vector<Element> to_relative(const Element& x) const;
  Element from_relative(const std::vector<Element>& c) const;
  /// Exponents of ⊕R/r^{n_i} viewed over the fixed ring.
  Exps relative_exps(const Exps& exps) const;
  std::vector<Element> vector_to_relative(const std::vector<Element>& v) const;
  std::vector<Element> vector_from_relative(const std::vector<Element>& c) const;
};

/// Supported: finite fields and Galois rings under Frobenius powers, and
/// Laurent rings over Z/p^N under substitutions. `preferred` replaces the
/// canonical descriptor of the fixed ring when it matches in size.
FixedSubringEntry fixed_subring(const RingPtr& ring, const MonoidSpec& monoid,
                                const std::vector<std::string>& subgens, RingPtr preferred = nullptr);

/// Base change along `a`. Generator endos are transported by the arrow's
/// equivariance rules unless `target_monoid` is given, in which case its
/// endos are checked against `a` on a basis.
SModule extend_scalars(const SModule& d, const RingMorphism& a,
                       const std::optional<MonoidSpec>& target_monoid = std::nullopt);

struct InvariantsResult {
  FixedSubringEntry entry;
  SModule module;          // over entry.fixed, acted on by the residual generators
  Matrix basis;            // columns in D coordinates (over the ambient ring)
  Matrix relative_basis;   // columns in relative coordinates (over the fixed ring)
  Exps relative_exps;
};
InvariantsResult invariants(const SModule& d, const std::vector<std::string>& subgens,
                            std::size_t cap = 1u << 14, RingPtr preferred = nullptr);

struct ComparisonResult {
  ModuleHom map;  // R ⊗ Inv(D) -> D
  KernelCokernel kc;
  bool iso = false;
};
ComparisonResult comparison(const SModule& d, const InvariantsResult& inv);

struct DescentLevel {
  int level = 0;
  Matrix basis;                     // fixed vectors modulo r^level, D coordinates
  Exps prime_orders;
  std::vector<Matrix> lifts;        // lifts of the previous basis
  std::vector<Matrix> corrections;  // the r^{level-1}-corrections used by those lifts
  int new_generators = 0;           // fixed vectors of r^{level-1}D / r^level D
  int obstructions = 0;             // previous basis vectors with no fixed lift
  bool comparison_iso = false;
};

struct DescentCertificate {
  std::vector<DescentLevel> levels;
  bool strict = false;
  bool cross_checked = false;
  bool agrees_with_direct = false;
};

struct DescentResult {
  InvariantsResult inv;
  DescentCertificate certificate;
};

/// Level-by-level fixed-point solve. In strict mode a basis vector without
/// a fixed lift raises LiftObstruction; otherwise the level is recomputed
/// from the kernel of the full correction system.
DescentResult devissage_descent(const SModule& d, const std::vector<std::string>& subgens, bool strict = false,
                                bool cross_check = true, std::size_t cap = 1u << 14, RingPtr preferred = nullptr);

}  // namespace devkit
