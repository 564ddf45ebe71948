#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "devkit/error.hpp"

namespace devkit {

using Int = std::int64_t;

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

/// Size caps for user-supplied descriptors. Extension towers built by the
/// Fontaine solver raise `max_degree` internally.
struct RingLimits {
  int max_degree = 8;
  int max_precision = 16;
  int max_high = 64;
  int max_low = 16;
};

enum class RingKind { PrimePower, FiniteField, GaloisRing, TruncatedLaurent };

std::string_view to_string(RingKind kind);

/// An element of one of the coefficient rings. The coefficient table is laid
/// out t-degree major, X-degree minor: index = t * width + (x + low).
class Element {
 public:
  Element() = default;
  Element(RingPtr ring, std::vector<Int> coeffs);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Int>& coeffs() const { return coeffs_; }
  Int coeff(int t_deg, int x_deg) const;

  bool is_zero() const;
  bool is_one() const;

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator-() const;
  Element operator*(const Element& o) const;
  Element& operator+=(const Element& o) { return *this = *this + o; }
  Element& operator-=(const Element& o) { return *this = *this - o; }
  Element& operator*=(const Element& o) { return *this = *this * o; }
  Element scaled(Int s) const;

  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  RingPtr ring_;
  std::vector<Int> coeffs_;
};

/// Immutable ring descriptor. Every ring is Z/p^N[t]/(f) (f monic of degree d,
/// irreducible mod p), optionally with a Laurent window X^-low .. X^(high-1).
///
/// The distinguished element r is X for power series over a field (low == 0),
/// and p otherwise; over a field p == 0, so r^1 == 0 and the ring behaves as
/// a dévissage ring of nilpotency 1.
class Ring : public std::enable_shared_from_this<Ring> {
 public:
  static RingPtr prime_power(Int p, int N, const RingLimits& lim = {});
  static RingPtr finite_field(Int p, int d, std::vector<Int> f = {},
                              const RingLimits& lim = {});
  static RingPtr galois_ring(Int p, int N, int d, std::vector<Int> f = {},
                             const RingLimits& lim = {});
  static RingPtr truncated_laurent(const RingPtr& base, int low, int high,
                                   const RingLimits& lim = {});

  RingKind kind() const { return kind_; }
  Int p() const { return p_; }
  int precision() const { return N_; }  // coefficients live in Z/p^N
  int degree() const { return d_; }
  const std::vector<Int>& modulus_poly() const { return f_; }
  bool is_laurent() const { return kind_ == RingKind::TruncatedLaurent; }
  int low() const { return low_; }
  int high() const { return high_; }
  int width() const { return is_laurent() ? low_ + high_ : 1; }
  int dim() const { return d_ * width(); }
  Int modulus() const { return modulus_; }
  const RingPtr& base() const { return base_; }

  bool r_is_x() const { return r_is_x_; }
  /// Smallest n with r^n == 0.
  int nilpotency() const { return nilpotency_; }
  /// Cardinality of R/r, as a power of p.
  int residue_log_size() const;

  Element zero() const;
  Element one() const;
  Element from_int(Int v) const;
  Element monomial(int t_deg, int x_deg, Int c = 1) const;
  Element t() const { return monomial(1, 0); }
  Element X() const { return monomial(0, 1); }
  Element r() const;
  Element r_pow(int k) const;

  /// The canonical Frobenius image of t (Hensel-refined root of f for N > 1).
  const Element& frobenius_of_t() const { return frob_t_; }

  bool same_as(const Ring& o) const;
  std::string name() const;

  int index(int t_deg, int x_deg) const { return t_deg * width() + (x_deg + low_); }

  RingPtr residue_ring() const;
  RingPtr prime_subring() const;

 private:
  Ring() = default;
  void finish();

  RingKind kind_ = RingKind::PrimePower;
  Int p_ = 2;
  int N_ = 1;
  int d_ = 1;
  std::vector<Int> f_;
  int low_ = 0;
  int high_ = 1;
  Int modulus_ = 2;
  RingPtr base_;
  bool r_is_x_ = false;
  int nilpotency_ = 1;
  Element frob_t_;
};

bool same_ring(const RingPtr& a, const RingPtr& b);
void require_same_ring(const RingPtr& a, const RingPtr& b, const char* where);

Element pow(const Element& x, Int e);

/// Exact inverse; NotAUnit for non-units, PrecisionExhausted when the inverse
/// does not fit the Laurent window.
Element invert(const Element& x);
bool is_unit(const Element& x);

struct RSplit {
  Element unit;
  int k;
};
/// x = unit * r^k, or nullopt for the zero element.
std::optional<RSplit> r_split(const Element& x);
/// r-valuation; nilpotency() for zero.
int valuation(const Element& x);
/// Canonical representative of x modulo r^k.
Element reduce_mod_r_power(const Element& x, int k);
/// Some y with y * r^k == x; requires valuation(x) >= k.
Element divide_by_r_power(const Element& x, int k);

/// Computable ring endomorphisms.
struct RingEndo {
  enum class Kind { Identity, FieldFrobenius, WittFrobenius, LaurentSubst };
  Kind kind = Kind::Identity;
  int power = 0;                 // Frobenius power e: x -> x^(p^e)
  std::optional<Element> subst;  // LaurentSubst: image of X
  int base_power = 0;            // LaurentSubst: Witt-Frobenius power on the coefficients

  static RingEndo identity() { return {}; }
  static RingEndo field_frobenius(int e);
  static RingEndo witt_frobenius(int e);
  static RingEndo laurent_subst(Element u, int base_power = 0);
  /// X -> (1+X)^p - 1
  static RingEndo cyclotomic_phi(const RingPtr& ring);
  /// X -> (1+X)^a - 1
  static RingEndo cyclotomic_gamma(const RingPtr& ring, Int a);

  bool operator==(const RingEndo& o) const;
  std::string to_string() const;
};

void check_endo_domain(const RingEndo& e, const RingPtr& ring);
Element apply_endo(const RingEndo& e, const Element& x);
/// a∘b, for the kinds that compose in closed form.
RingEndo compose(const RingEndo& a, const RingEndo& b, const RingPtr& ring);
/// True when e fixes every monomial basis element of the ring.
bool endo_is_identity_on(const RingEndo& e, const RingPtr& ring);

/// Supported base-change arrows.
class RingMorphism {
 public:
  enum class Kind { Identity, PrecisionDrop, ReductionModR, Embedding, ConstantEmbedding };

  static RingMorphism identity(const RingPtr& ring);
  /// Z/p^N-style precision drop to N' <= N (same degree, polynomial and window).
  static RingMorphism precision_drop(const RingPtr& source, int new_precision);
  static RingMorphism reduction_mod_r(const RingPtr& source);
  /// GR(p^N, d) -> GR(p^N, dm); the image of t is the first root of f found.
  static RingMorphism embedding(const RingPtr& source, const RingPtr& target);
  /// base -> truncated Laurent ring over base.
  static RingMorphism constant_embedding(const RingPtr& source, const RingPtr& target);

  Kind kind() const { return kind_; }
  const RingPtr& source() const { return source_; }
  const RingPtr& target() const { return target_; }
  const std::optional<Element>& t_image() const { return t_image_; }

  /// The endo on the target intertwined with `e` by this arrow, per the
  /// equivariance rules of the arrow kind.
  std::optional<RingEndo> equivariant_image(const RingEndo& e) const;

  std::string to_string() const;

 private:
  Kind kind_ = Kind::Identity;
  RingPtr source_, target_;
  std::optional<Element> t_image_;
};

Element apply_morphism(const RingMorphism& a, const Element& x);

/// F_p polynomial helpers (coefficient vectors, low degree first).
namespace fp_poly {
bool is_irreducible(const std::vector<Int>& f, Int p);
/// Lexicographically smallest monic irreducible of the given degree.
std::vector<Int> canonical_irreducible(int degree, Int p);
}  // namespace fp_poly

/// A root of the monic polynomial g (coefficients in the prime ring) inside
/// `ring`, Hensel-lifted to full precision; nullopt when none exists.
std::optional<Element> find_root(const std::vector<Int>& g, const RingPtr& ring);

/// F_p- (or Z/p^N-) basis of the ring: the monomials t^i X^j in index order.
std::vector<Element> monomial_basis(const RingPtr& ring);

}  // namespace devkit
