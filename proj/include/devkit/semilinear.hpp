#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "devkit/module.hpp"

namespace devkit {

struct MonoidGenerator {
  std::string label;
  RingEndo endo;
};

struct MonoidSpec {
  std::vector<MonoidGenerator> generators;
  std::vector<std::pair<std::string, std::string>> commuting_pairs;
  std::map<std::string, std::vector<std::string>> normal_subsets;

  bool has(const std::string& label) const;
  /// Throws UnknownGenerator.
  const MonoidGenerator& find(const std::string& label) const;
  std::vector<std::string> labels() const;
  bool operator==(const MonoidSpec& o) const;
};

/// Checks labels, endo domains, rR-stability and the declared commutations
/// (on `samples` random ring elements).
void validate_monoid(const MonoidSpec& monoid, const RingPtr& ring, std::uint64_t seed = 0, int samples = 32);

/// A module with one action matrix per generator. Convention: the generator
/// s sends the coordinate column v to A_s * s(v).
struct SModule {
  CanonicalModule base;
  MonoidSpec monoid;
  std::map<std::string, Matrix> actions;

  const RingPtr& ring() const { return base.ring; }
  int rank() const { return base.rank(); }
  const Matrix& action(const std::string& label) const;
};

/// Shape and torsion column conditions; normalizes rows.
SModule make_smodule(CanonicalModule base, MonoidSpec monoid, std::map<std::string, Matrix> actions);
/// The unit object R with identity matrices.
SModule unit_smodule(const RingPtr& ring, const MonoidSpec& monoid);

ModuleHom linearize(const SModule& d, const std::string& label);

struct EtaleVerdict {
  bool etale = true;
  std::map<std::string, Matrix> inverses;
  std::string failing_generator;
  std::string failure;              // "kernel" or "cokernel"
  std::optional<Matrix> witness;    // nonzero kernel vector or cokernel class lift
};
EtaleVerdict check_etale(const SModule& d);

/// Left-to-right word: A_{s1} s1(A_{s2} s2(... v)).
Matrix act(const SModule& d, const std::vector<std::string>& word, const Matrix& v);

SModule tensor_smod(const SModule& d1, const SModule& d2);
SModule internal_hom(const SModule& d1, const SModule& d2);

/// Coordinates in the hom_modules basis <-> |d2| x |d1| matrices.
Matrix hom_vector_to_matrix(const CanonicalModule& m1, const CanonicalModule& m2, const std::vector<Element>& c);
std::vector<Element> hom_matrix_to_vector(const CanonicalModule& m1, const CanonicalModule& m2, const Matrix& f);

/// A submodule over the prime subring, given by vectors (in module
/// coordinates over R) and their orders as prime-subring exponents.
struct PrimeSpan {
  RingPtr prime;
  std::vector<std::vector<Element>> vectors;
  Exps orders;
  Exps ambient;  // flattened ambient orders
  Matrix flat;   // flattened vectors as columns over the prime subring
};

/// {v : A_s s(v) = v for every listed generator}, over the prime subring.
PrimeSpan fixed_points(const SModule& d, const std::vector<std::string>& labels, std::size_t cap = 1u << 14);

struct EquivariantHoms {
  std::vector<Matrix> basis;
  PrimeSpan span;  // in hom_modules coordinates
};
EquivariantHoms equivariant_homs(const SModule& d1, const SModule& d2, std::size_t cap = 1u << 14);

/// An invertible equivariant map d1 -> d2, found by enumerating
/// prime-subring combinations of the equivariant basis (at most `cap` tries).
std::optional<Matrix> find_isomorphism(const SModule& d1, const SModule& d2, std::size_t cap = 1u << 16);

struct DevissageRestriction {
  SModule rn;                        // r^n D
  Matrix rn_inclusion;
  SModule torsion;                   // D[r^n]
  Matrix torsion_inclusion;
  std::vector<SModule> subquotients; // r^k D / r^{k+1} D over R/r, k = 0..nilpotency-1
};
DevissageRestriction restrict_devissage(const SModule& d, int n);
/// The μ-subquotient r^k D / r^{k+1} D over the residue ring.
SModule mu_subquotient(const SModule& d, int k);

struct RelationViolation {
  std::string kind;  // "commutation", "endo_commutation", "semilinearity"
  std::string a, b;
  Matrix difference;
};
struct RelationReport {
  bool ok = true;
  std::vector<RelationViolation> violations;
};
RelationReport check_relations(const SModule& d, std::uint64_t seed = 0, int samples = 8);

/// Uniform random element, for property tests and the self-test.
Element random_element(const RingPtr& ring, std::uint64_t& state);
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace devkit
