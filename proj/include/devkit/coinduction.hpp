#pragma once

#include <array>
#include <map>

#include "devkit/transfer.hpp"

namespace devkit {

/// An inclusion T ⊆ S: either a subgroup H of a finite group G given by its
/// multiplication table (element 0 is the identity), or
/// f_1N × ... × f_dN ⊆ N^d.
struct SubmonoidData {
  enum class Variant { FiniteGroup, Numeric };
  Variant variant = Variant::Numeric;

  std::vector<std::vector<int>> table;     // table[a][b] = a*b
  std::vector<int> subgroup;               // elements of H
  std::map<std::string, int> ambient_gens; // label -> element of G
  std::map<std::string, int> sub_gens;     // label -> element of H

  std::vector<int> moduli;
  std::vector<std::string> ambient_labels; // default e1..ed
  std::vector<std::string> sub_labels;     // default g1..gd; g_i = f_i e_i

  static SubmonoidData numeric(std::vector<int> moduli);
  static SubmonoidData group(std::vector<std::vector<int>> table, std::vector<int> subgroup,
                             std::map<std::string, int> ambient_gens, std::map<std::string, int> sub_gens);
  std::vector<std::string> ambient() const;
  std::vector<std::string> sub() const;
};

/// Component x of u·f is word·f(source), word acting rightmost first.
struct Transition {
  int source = 0;
  std::vector<std::string> word;
};

struct CosetEnumeration {
  std::vector<std::vector<int>> reps;  // numeric tuples, or {g} for groups; reps[0] is the identity coset
  std::vector<std::string> labels;
  int cofinality_bound = 0;            // numeric: every t in [0,B)^d lies in a listed coset
  std::vector<std::array<std::vector<int>, 4>> l_relations;  // (s1, s2, t1, t2) with s1 t1 = s2 t2
  std::map<std::string, std::vector<Transition>> transitions;  // per ambient generator
  std::map<std::string, std::vector<std::string>> sub_words;   // submonoid generator as an ambient word
  std::vector<std::vector<std::string>> rep_words;             // each representative as an ambient word
};

/// Throws NotSubtleFinite, InvalidArgument (malformed tables).
CosetEnumeration enumerate_cosets(const SubmonoidData& data);

/// Functions f : S -> R with f(ts) = t·f(s), stored by their values on the
/// coset representatives; S acts by (u·f)(x) = f(xu).
struct CoinducedRing {
  RingPtr base;
  MonoidSpec sub;  // the T-action on R
  SubmonoidData data;
  CosetEnumeration cosets;

  int size() const { return static_cast<int>(cosets.reps.size()); }
  std::vector<Element> act(const std::string& ambient_label, const std::vector<Element>& f) const;
  std::vector<Element> one() const;
  Element apply_word(const std::vector<std::string>& word, const Element& x) const;
};

/// Throws ActionMismatch when the T-action does not match the data's labels.
CoinducedRing coinduce_ring(const RingPtr& ring, const MonoidSpec& sub, const SubmonoidData& data);

/// A module over the coinduced ring: one R-module per component, and for each
/// ambient generator u, (u·m)_x = blocks[u][x] · word(m_source).
struct CoinducedModule {
  CoinducedRing ring;
  std::vector<CanonicalModule> components;
  std::map<std::string, std::vector<Matrix>> blocks;

  Exps exps() const;  // concatenated
  std::vector<std::vector<Element>> act(const std::string& label, const std::vector<std::vector<Element>>& m) const;
  std::vector<Element> act_flat(const std::string& label, const std::vector<Element>& m) const;
  std::vector<std::vector<Element>> split(const std::vector<Element>& m) const;
};

CoinducedModule coinduce_module(const SModule& d, const SubmonoidData& data);

/// Matrix M and endo word with word·v = M · word(v) for the T-module d.
Matrix word_matrix(const SModule& d, const std::vector<std::string>& word);

struct TensorCoinductionVerdict {
  bool iso = false;
  bool equivariant = false;
  std::vector<Matrix> component_maps;  // v -> f(x)·(x·v) linearized at each rep
  std::vector<bool> component_iso;
};
/// d is an S-module (labels = ambient generators). Checks
/// Coind(R) ⊗_R D -> Coind(Res D), f ⊗ v -> [x -> f(x)·(x·v)]. Throws NotEtale.
TensorCoinductionVerdict check_tensor_coinduction(const SModule& d, const SubmonoidData& data,
                                                  std::uint64_t seed = 0, int samples = 8);

/// Restriction of an S-module to T along the data's submonoid words.
SModule restrict_to_submonoid(const SModule& d, const SubmonoidData& data);

struct BijectionVerdict {
  bool bijective = false;
  std::size_t coinduced_fixed = 0;  // |Coind(X)^S|
  std::size_t fixed = 0;            // |X^T|
};
/// Evaluation at the identity, Coind(X)^S -> X^T, by explicit enumeration.
/// Throws SizeGuard above `cap` elements.
BijectionVerdict invariants_bijection(const SModule& x, const SubmonoidData& data, std::size_t cap = 1u << 16);

struct Descended {
  SModule module;                 // over R, with the T-action
  std::vector<Matrix> witness;    // component x of M -> component x of Coind(module), per component
  bool witness_iso = false;
  bool witness_equivariant = false;
};
Descended descend_from_coinduced(const CoinducedModule& m, std::uint64_t seed = 0, int samples = 8);

}  // namespace devkit
