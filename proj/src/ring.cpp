#include "devkit/ring.hpp"

#include <algorithm>
#include <sstream>

namespace devkit {

namespace {

Int mod_norm(Int v, Int m) {
  v %= m;
  return v < 0 ? v + m : v;
}

Int mulmod(Int a, Int b, Int m) {
  return static_cast<Int>((static_cast<__int128>(a) * b) % m);
}

Int ipow(Int b, int e) {
  Int r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

bool is_prime(Int p) {
  if (p < 2) return false;
  for (Int q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

Int inv_mod(Int a, Int m) {
  Int g = m, x = 0, x1 = 1, b = mod_norm(a, m);
  while (b != 0) {
    Int q = g / b;
    Int t = g - q * b;
    g = b;
    b = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) throw Error(ErrorKind::NotAUnit, "residue has no inverse");
  return mod_norm(x, m);
}

int vp(Int v, Int p, int cap) {
  if (v == 0) return cap;
  int k = 0;
  while (v % p == 0 && k < cap) {
    v /= p;
    ++k;
  }
  return k;
}

// Null space of a square matrix over F_p (rows of `a`), as a list of vectors.
std::vector<std::vector<Int>> fp_nullspace(std::vector<std::vector<Int>> a, Int p) {
  const std::size_t n = a.empty() ? 0 : a[0].size();
  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < a.size(); ++c) {
    std::size_t piv = row;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[row]);
    Int inv = inv_mod(a[row][c], p);
    for (auto& v : a[row]) v = mulmod(v, inv, p);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == row || a[i][c] == 0) continue;
      Int f = a[i][c];
      for (std::size_t j = 0; j < n; ++j) a[i][j] = mod_norm(a[i][j] - mulmod(f, a[row][j], p), p);
    }
    pivot_col.push_back(static_cast<int>(c));
    ++row;
  }
  std::vector<std::vector<Int>> basis;
  for (std::size_t c = 0; c < n; ++c) {
    if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(c)) != pivot_col.end()) continue;
    std::vector<Int> v(n, 0);
    v[c] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = mod_norm(-a[r][c], p);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

std::string_view to_string(RingKind kind) {
  switch (kind) {
    case RingKind::PrimePower: return "prime_power";
    case RingKind::FiniteField: return "finite_field";
    case RingKind::GaloisRing: return "galois_ring";
    case RingKind::TruncatedLaurent: return "truncated_laurent";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// F_p polynomials

namespace fp_poly {
namespace {

using Poly = std::vector<Int>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly sub(Poly a, const Poly& b, Int p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = mod_norm(a[i] - b[i], p);
  trim(a);
  return a;
}

Poly rem(Poly a, const Poly& m, Int p) {
  trim(a);
  const Int lead_inv = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    Int c = mulmod(a.back(), lead_inv, p);
    std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i)
      a[shift + i] = mod_norm(a[shift + i] - mulmod(c, m[i], p), p);
    trim(a);
  }
  return a;
}

Poly mulmod_poly(const Poly& a, const Poly& b, const Poly& m, Int p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  return rem(std::move(c), m, p);
}

Poly gcd(Poly a, Poly b, Int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

bool is_irreducible(const std::vector<Int>& f_in, Int p) {
  Poly f;
  for (Int c : f_in) f.push_back(mod_norm(c, p));
  trim(f);
  const int n = static_cast<int>(f.size()) - 1;
  if (n < 1) return false;
  if (n == 1) return true;
  // Ben-Or: f is irreducible iff gcd(x^(p^i) - x, f) = 1 for i <= n/2.
  Poly x = {0, 1};
  Poly h = x;
  for (int i = 1; i <= n / 2; ++i) {
    Poly acc = {1};
    Poly base = h;
    for (Int e = p; e > 0; e >>= 1) {
      if (e & 1) acc = mulmod_poly(acc, base, f, p);
      base = mulmod_poly(base, base, f, p);
    }
    h = acc;
    Poly g = gcd(f, sub(h, x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

std::vector<Int> canonical_irreducible(int degree, Int p) {
  if (degree == 1) return {0, 1};
  std::vector<Int> f(degree + 1, 0);
  f[degree] = 1;
  while (true) {
    if (f[0] != 0 && is_irreducible(f, p)) return f;
    int i = 0;
    while (i < degree) {
      if (++f[i] < p) break;
      f[i] = 0;
      ++i;
    }
    if (i == degree) throw Error(ErrorKind::InvalidArgument, "no irreducible polynomial found");
  }
}

}  // namespace fp_poly

// ---------------------------------------------------------------------------
// Ring

RingPtr Ring::prime_power(Int p, int N, const RingLimits& lim) {
  auto r = galois_ring(p, N, 1, {0, 1}, lim);
  auto* mut = const_cast<Ring*>(r.get());
  mut->kind_ = RingKind::PrimePower;
  return r;
}

RingPtr Ring::finite_field(Int p, int d, std::vector<Int> f, const RingLimits& lim) {
  auto r = galois_ring(p, 1, d, std::move(f), lim);
  auto* mut = const_cast<Ring*>(r.get());
  mut->kind_ = d == 1 ? RingKind::PrimePower : RingKind::FiniteField;
  return r;
}

RingPtr Ring::galois_ring(Int p, int N, int d, std::vector<Int> f, const RingLimits& lim) {
  if (!is_prime(p)) throw Error(ErrorKind::InvalidArgument, "p must be prime", {{"p", p}});
  if (N < 1 || N > lim.max_precision)
    throw Error(ErrorKind::InvalidArgument, "precision out of range", {{"N", N}});
  if (d < 1 || d > lim.max_degree)
    throw Error(ErrorKind::InvalidArgument, "degree out of range", {{"d", d}});
  __int128 m = 1;
  for (int i = 0; i < N; ++i) {
    m *= p;
    if (m > (static_cast<__int128>(1) << 62))
      throw Error(ErrorKind::InvalidArgument, "p^N too large", {{"p", p}, {"N", N}});
  }
  if (f.empty()) f = d == 1 ? std::vector<Int>{0, 1} : fp_poly::canonical_irreducible(d, p);
  if (static_cast<int>(f.size()) != d + 1 || mod_norm(f.back(), static_cast<Int>(m)) != 1)
    throw Error(ErrorKind::InvalidArgument, "modulus must be monic of degree d", {{"f", f}});
  if (!fp_poly::is_irreducible(f, p))
    throw Error(ErrorKind::InvalidArgument, "modulus is not irreducible mod p", {{"f", f}});
  std::shared_ptr<Ring> r(new Ring());
  r->kind_ = N == 1 ? (d == 1 ? RingKind::PrimePower : RingKind::FiniteField) : RingKind::GaloisRing;
  r->p_ = p;
  r->N_ = N;
  r->d_ = d;
  r->modulus_ = static_cast<Int>(m);
  for (auto& c : f) c = mod_norm(c, r->modulus_);
  r->f_ = std::move(f);
  r->low_ = 0;
  r->high_ = 1;
  r->finish();
  return r;
}

RingPtr Ring::truncated_laurent(const RingPtr& base, int low, int high, const RingLimits& lim) {
  if (!base || base->is_laurent())
    throw Error(ErrorKind::InvalidArgument, "Laurent base must be a prime power ring or field");
  if (low < 0 || low > lim.max_low || high < 1 || high > lim.max_high)
    throw Error(ErrorKind::InvalidArgument, "Laurent window out of range", {{"low", low}, {"high", high}});
  std::shared_ptr<Ring> r(new Ring());
  r->kind_ = RingKind::TruncatedLaurent;
  r->p_ = base->p_;
  r->N_ = base->N_;
  r->d_ = base->d_;
  r->f_ = base->f_;
  r->modulus_ = base->modulus_;
  r->low_ = low;
  r->high_ = high;
  r->base_ = base;
  r->finish();
  return r;
}

void Ring::finish() {
  r_is_x_ = is_laurent() && N_ == 1 && low_ == 0;
  nilpotency_ = r_is_x_ ? high_ : N_;
  auto self = shared_from_this();
  if (is_laurent()) {
    const Element& bt = base_->frobenius_of_t();
    std::vector<Int> c(dim(), 0);
    for (int i = 0; i < d_; ++i) c[index(i, 0)] = bt.coeffs()[i];
    frob_t_ = Element(self, std::move(c));
    return;
  }
  if (d_ == 1) {
    frob_t_ = zero();
    return;
  }
  // Canonical Frobenius lift: the root of f congruent to t^p.
  Element y = pow(t(), p_);
  auto eval = [&](const Element& x, bool derivative) {
    Element acc = zero();
    for (int i = d_; i >= (derivative ? 1 : 0); --i) {
      Int c = derivative ? mod_norm(f_[i] * i, modulus_) : f_[i];
      acc = acc * x + from_int(c);
    }
    return acc;
  };
  for (int it = 0; it < 2 * N_ + 2; ++it) {
    Element fy = eval(y, false);
    if (fy.is_zero()) break;
    y = y - fy * invert(eval(y, true));
  }
  frob_t_ = y;
}

int Ring::residue_log_size() const {
  if (r_is_x_) return d_;
  return dim();
}

Element Ring::zero() const {
  return Element(std::const_pointer_cast<Ring>(shared_from_this()), std::vector<Int>(dim(), 0));
}

Element Ring::one() const { return from_int(1); }

Element Ring::from_int(Int v) const {
  std::vector<Int> c(dim(), 0);
  if (!is_laurent() || high_ > 0) c[index(0, 0)] = mod_norm(v, modulus_);
  return Element(std::const_pointer_cast<Ring>(shared_from_this()), std::move(c));
}

Element Ring::monomial(int t_deg, int x_deg, Int c) const {
  std::vector<Int> v(dim(), 0);
  if (t_deg < 0 || t_deg >= d_) throw Error(ErrorKind::InvalidArgument, "t-degree outside basis");
  if (x_deg < -low_) throw Error(ErrorKind::PrecisionExhausted, "monomial below window", {{"x", x_deg}});
  if (x_deg < (is_laurent() ? high_ : 1)) v[index(t_deg, x_deg)] = mod_norm(c, modulus_);
  return Element(std::const_pointer_cast<Ring>(shared_from_this()), std::move(v));
}

Element Ring::r() const { return r_is_x_ ? X() : from_int(p_); }

Element Ring::r_pow(int k) const {
  if (k >= nilpotency_) return zero();
  if (k <= 0) return one();
  if (r_is_x_) return monomial(0, k);
  return from_int(ipow(p_, k));
}

bool Ring::same_as(const Ring& o) const {
  return is_laurent() == o.is_laurent() && p_ == o.p_ && N_ == o.N_ && d_ == o.d_ && f_ == o.f_ &&
         low_ == o.low_ && high_ == o.high_;
}

std::string Ring::name() const {
  std::ostringstream os;
  if (is_laurent()) {
    os << base_->name();
    if (low_ == 0)
      os << "[[X]]/X^" << high_;
    else
      os << "((X))[" << -low_ << "," << high_ << ")";
    return os.str();
  }
  Int q = ipow(p_, d_);
  if (N_ == 1) {
    os << "F_" << q;
  } else if (d_ == 1) {
    os << "Z/" << modulus_;
  } else {
    os << "GR(" << modulus_ << "," << d_ << ")";
  }
  return os.str();
}

namespace {
RingPtr with_precision(const Ring& r, int N) {
  RingLimits lim;
  lim.max_degree = std::max(lim.max_degree, r.degree());
  if (r.is_laurent()) {
    auto b = with_precision(*r.base(), N);
    lim.max_high = std::max(lim.max_high, r.high());
    lim.max_low = std::max(lim.max_low, r.low());
    return Ring::truncated_laurent(b, r.low(), r.high(), lim);
  }
  if (r.kind() == RingKind::PrimePower) return Ring::prime_power(r.p(), N, lim);
  std::vector<Int> f = r.modulus_poly();
  Int m = ipow(r.p(), N);
  for (auto& c : f) c = mod_norm(c, m);
  return Ring::galois_ring(r.p(), N, r.degree(), f, lim);
}
}  // namespace

RingPtr Ring::residue_ring() const {
  if (r_is_x_) return base_;
  if (N_ == 1) return std::const_pointer_cast<Ring>(shared_from_this());
  return with_precision(*this, 1);
}

RingPtr Ring::prime_subring() const { return Ring::prime_power(p_, N_); }

bool same_ring(const RingPtr& a, const RingPtr& b) {
  return a == b || (a && b && a->same_as(*b));
}

void require_same_ring(const RingPtr& a, const RingPtr& b, const char* where) {
  if (!same_ring(a, b))
    throw Error(ErrorKind::RingMismatch, std::string(where) + ": ring mismatch",
                {{"left", a ? a->name() : "null"}, {"right", b ? b->name() : "null"}});
}

// ---------------------------------------------------------------------------
// Element

Element::Element(RingPtr ring, std::vector<Int> coeffs) : ring_(std::move(ring)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != ring_->dim())
    throw Error(ErrorKind::InvalidArgument, "coefficient table has wrong length");
  for (auto& c : coeffs_) c = mod_norm(c, ring_->modulus());
}

Int Element::coeff(int t_deg, int x_deg) const { return coeffs_[ring_->index(t_deg, x_deg)]; }

bool Element::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Int c) { return c == 0; });
}

bool Element::is_one() const { return *this == ring_->one(); }

Element Element::operator+(const Element& o) const {
  require_same_ring(ring_, o.ring_, "add");
  Element r = *this;
  const Int m = ring_->modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    Int v = r.coeffs_[i] + o.coeffs_[i];
    r.coeffs_[i] = v >= m ? v - m : v;
  }
  return r;
}

Element Element::operator-(const Element& o) const {
  require_same_ring(ring_, o.ring_, "sub");
  Element r = *this;
  const Int m = ring_->modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    Int v = r.coeffs_[i] - o.coeffs_[i];
    r.coeffs_[i] = v < 0 ? v + m : v;
  }
  return r;
}

Element Element::operator-() const { return ring_->zero() - *this; }

Element Element::scaled(Int s) const {
  Element r = *this;
  const Int m = ring_->modulus();
  s = mod_norm(s, m);
  for (auto& c : r.coeffs_) c = mulmod(c, s, m);
  return r;
}

Element Element::operator*(const Element& o) const {
  require_same_ring(ring_, o.ring_, "mul");
  const Ring& R = *ring_;
  const int d = R.degree(), W = R.width(), low = R.low();
  const Int m = R.modulus();
  const int TW = 2 * d - 1, XW = 2 * W - 1;
  std::vector<__int128> tmp(static_cast<std::size_t>(TW) * XW, 0);
  for (int ta = 0; ta < d; ++ta)
    for (int xa = 0; xa < W; ++xa) {
      Int a = coeffs_[ta * W + xa];
      if (a == 0) continue;
      for (int tb = 0; tb < d; ++tb)
        for (int xb = 0; xb < W; ++xb) {
          Int b = o.coeffs_[tb * W + xb];
          if (b == 0) continue;
          auto& slot = tmp[(ta + tb) * XW + (xa + xb)];
          slot = (slot + static_cast<__int128>(a) * b) % m;
        }
    }
  // Window: exponent = xs - 2*low must lie in [-low, high).
  for (int t = 0; t < TW; ++t)
    for (int xs = 0; xs < XW; ++xs) {
      if (xs < low && tmp[t * XW + xs] != 0)
        throw Error(ErrorKind::PrecisionExhausted, "product leaves the Laurent window",
                    {{"ring", R.name()}, {"exponent", xs - 2 * low}});
    }
  const auto& f = R.modulus_poly();
  for (int t = TW - 1; t >= d; --t)
    for (int xs = 0; xs < XW; ++xs) {
      __int128 c = tmp[t * XW + xs];
      if (c == 0) continue;
      for (int i = 0; i < d; ++i) {
        auto& slot = tmp[(t - d + i) * XW + xs];
        slot = ((slot - c * f[i]) % m + m) % m;
      }
      tmp[t * XW + xs] = 0;
    }
  std::vector<Int> out(R.dim(), 0);
  for (int t = 0; t < d; ++t)
    for (int xi = 0; xi < W; ++xi) out[t * W + xi] = static_cast<Int>(tmp[t * XW + xi + low]);
  return Element(ring_, std::move(out));
}

bool Element::operator==(const Element& o) const {
  return same_ring(ring_, o.ring_) && coeffs_ == o.coeffs_;
}

std::string Element::to_string() const {
  const Ring& R = *ring_;
  std::ostringstream os;
  bool first = true;
  const int xlo = R.is_laurent() ? -R.low() : 0, xhi = R.is_laurent() ? R.high() : 1;
  for (int x = xlo; x < xhi; ++x)
    for (int t = 0; t < R.degree(); ++t) {
      Int c = coeff(t, x);
      if (c == 0) continue;
      if (!first) os << " + ";
      first = false;
      bool mono = t > 0 || x != 0;
      if (c != 1 || !mono) os << c;
      if (t > 0) os << (c != 1 ? "*" : "") << "t" << (t > 1 ? "^" + std::to_string(t) : "");
      if (x != 0)
        os << ((c != 1 || t > 0) ? "*" : "") << "X" << (x != 1 ? "^" + std::to_string(x) : "");
    }
  return first ? "0" : os.str();
}

// ---------------------------------------------------------------------------
// Unit arithmetic

Element pow(const Element& x, Int e) {
  Element acc = x.ring()->one();
  Element b = x;
  for (; e > 0; e >>= 1) {
    if (e & 1) acc = acc * b;
    if (e > 1) b = b * b;
  }
  return acc;
}

namespace {

// Inverse of a unit of Z/p^N[t]/(f) (no Laurent window).
Element invert_galois(const Element& x) {
  const Ring& R = *x.ring();
  const Int p = R.p();
  // Residue inverse via the extended Euclidean algorithm in F_p[t].
  std::vector<Int> a, b;
  for (Int c : x.coeffs()) a.push_back(c % p);
  for (Int c : R.modulus_poly()) b.push_back(c % p);
  auto trim = [](std::vector<Int>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  trim(a);
  if (a.empty()) throw Error(ErrorKind::NotAUnit, "element vanishes modulo r", {{"x", x.to_string()}});
  // Track s with s*x ≡ rem (mod f).
  std::vector<Int> r0 = b, r1 = a, s0 = {}, s1 = {1};
  auto submul = [&](std::vector<Int> u, const std::vector<Int>& v, Int c, int shift) {
    if (u.size() < v.size() + shift) u.resize(v.size() + shift, 0);
    for (std::size_t i = 0; i < v.size(); ++i)
      u[i + shift] = mod_norm(u[i + shift] - mulmod(c, v[i], p), p);
    trim(u);
    return u;
  };
  while (r1.size() > 1) {
    std::vector<Int> q(r0.size(), 0), rr = r0;
    Int li = inv_mod(r1.back(), p);
    std::vector<Int> s = s0;
    while (rr.size() >= r1.size() && !rr.empty()) {
      int shift = static_cast<int>(rr.size() - r1.size());
      Int c = mulmod(rr.back(), li, p);
      rr = submul(rr, r1, c, shift);
      s = submul(s, s1, c, shift);
    }
    r0 = std::move(r1);
    r1 = std::move(rr);
    s0 = std::move(s1);
    s1 = std::move(s);
    if (r1.empty()) throw Error(ErrorKind::NotAUnit, "element shares a factor with the modulus");
  }
  Int ci = inv_mod(r1[0], p);
  std::vector<Int> c(R.dim(), 0);
  for (std::size_t i = 0; i < s1.size() && i < c.size(); ++i) c[i] = mulmod(s1[i], ci, p);
  Element y(x.ring(), std::move(c));
  const Element two = R.from_int(2);
  for (int it = 0; it < 70; ++it) {
    Element e = x * y;
    if (e.is_one()) return y;
    y = y * (two - e);
  }
  throw Error(ErrorKind::NotAUnit, "Newton inversion did not converge", {{"x", x.to_string()}});
}

Element laurent_column(const Element& x, int xdeg) {
  const Ring& R = *x.ring();
  std::vector<Int> c(R.base()->dim(), 0);
  for (int t = 0; t < R.degree(); ++t) c[t] = x.coeff(t, xdeg);
  return Element(R.base(), std::move(c));
}

Element laurent_constant(const RingPtr& ring, const Element& b, int xdeg) {
  std::vector<Int> c(ring->dim(), 0);
  for (int t = 0; t < ring->degree(); ++t) c[ring->index(t, xdeg)] = b.coeffs()[t];
  return Element(ring, std::move(c));
}

Element invert_laurent(const Element& x) {
  const Ring& R = *x.ring();
  int lead = R.high();
  Element lead_inv;
  for (int xd = -R.low(); xd < R.high(); ++xd) {
    Element c = laurent_column(x, xd);
    bool unit = std::any_of(c.coeffs().begin(), c.coeffs().end(), [&](Int v) { return v % R.p() != 0; });
    if (unit) {
      lead = xd;
      lead_inv = invert_galois(c);
      break;
    }
  }
  if (lead == R.high()) throw Error(ErrorKind::NotAUnit, "element vanishes modulo r", {{"x", x.to_string()}});
  if (-lead < -R.low()) {
    if (R.low() == 0)
      throw Error(ErrorKind::NotAUnit, "positive X-valuation in a power series ring", {{"x", x.to_string()}});
    throw Error(ErrorKind::PrecisionExhausted, "inverse leaves the Laurent window", {{"x", x.to_string()}});
  }
  Element y0 = laurent_constant(x.ring(), lead_inv, -lead);
  Element e = R.one() - x * y0;
  Element term = R.one(), acc = R.one();
  const int guard = (R.low() + R.high() + 2) * (R.precision() + 1) + 4;
  int it = 0;
  for (; it < guard; ++it) {
    term = term * e;
    if (term.is_zero()) break;
    acc = acc + term;
  }
  if (it == guard) throw Error(ErrorKind::PrecisionExhausted, "inverse series did not terminate");
  Element y = y0 * acc;
  if (!(x * y).is_one())
    throw Error(ErrorKind::PrecisionExhausted, "inverse not exact at this window", {{"x", x.to_string()}});
  return y;
}

}  // namespace

Element invert(const Element& x) {
  return x.ring()->is_laurent() ? invert_laurent(x) : invert_galois(x);
}

bool is_unit(const Element& x) {
  try {
    (void)invert(x);
    return true;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotAUnit) return false;
    throw;
  }
}

int valuation(const Element& x) {
  const Ring& R = *x.ring();
  if (x.is_zero()) return R.nilpotency();
  if (R.r_is_x()) {
    for (int xd = 0; xd < R.high(); ++xd)
      for (int t = 0; t < R.degree(); ++t)
        if (x.coeff(t, xd) != 0) return xd;
  }
  int k = R.precision();
  for (Int c : x.coeffs()) k = std::min(k, vp(c, R.p(), R.precision()));
  return k;
}

std::optional<RSplit> r_split(const Element& x) {
  if (x.is_zero()) return std::nullopt;
  int k = valuation(x);
  return RSplit{divide_by_r_power(x, k), k};
}

Element reduce_mod_r_power(const Element& x, int k) {
  const Ring& R = *x.ring();
  if (k >= R.nilpotency()) return x;
  if (k <= 0) return R.zero();
  std::vector<Int> c = x.coeffs();
  if (R.r_is_x()) {
    for (int t = 0; t < R.degree(); ++t)
      for (int xd = k; xd < R.high(); ++xd) c[R.index(t, xd)] = 0;
  } else {
    Int m = ipow(R.p(), k);
    for (auto& v : c) v %= m;
  }
  return Element(x.ring(), std::move(c));
}

Element divide_by_r_power(const Element& x, int k) {
  const Ring& R = *x.ring();
  if (k <= 0) return x;
  if (valuation(x) < k) throw Error(ErrorKind::InvalidArgument, "element not divisible by r^k");
  if (x.is_zero()) return x;
  std::vector<Int> c(R.dim(), 0);
  if (R.r_is_x()) {
    for (int t = 0; t < R.degree(); ++t)
      for (int xd = k; xd < R.high(); ++xd) c[R.index(t, xd - k)] = x.coeff(t, xd);
  } else {
    Int m = ipow(R.p(), k);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = x.coeffs()[i] / m;
  }
  return Element(x.ring(), std::move(c));
}

// ---------------------------------------------------------------------------
// Endomorphisms

RingEndo RingEndo::field_frobenius(int e) {
  RingEndo r;
  r.kind = Kind::FieldFrobenius;
  r.power = e;
  return r;
}

RingEndo RingEndo::witt_frobenius(int e) {
  RingEndo r;
  r.kind = Kind::WittFrobenius;
  r.power = e;
  return r;
}

RingEndo RingEndo::laurent_subst(Element u, int base_power) {
  RingEndo r;
  r.kind = Kind::LaurentSubst;
  r.subst = std::move(u);
  r.base_power = base_power;
  return r;
}

RingEndo RingEndo::cyclotomic_phi(const RingPtr& ring) { return cyclotomic_gamma(ring, ring->p()); }

RingEndo RingEndo::cyclotomic_gamma(const RingPtr& ring, Int a) {
  if (!ring->is_laurent()) throw Error(ErrorKind::EndoDomainMismatch, "cyclotomic endos need a Laurent ring");
  Element one_plus_x = ring->one() + ring->X();
  return laurent_subst(pow(one_plus_x, a) - ring->one());
}

bool RingEndo::operator==(const RingEndo& o) const {
  if (kind != o.kind || power != o.power || base_power != o.base_power) return false;
  if (subst.has_value() != o.subst.has_value()) return false;
  return !subst || *subst == *o.subst;
}

std::string RingEndo::to_string() const {
  switch (kind) {
    case Kind::Identity: return "id";
    case Kind::FieldFrobenius: return "Frob^" + std::to_string(power);
    case Kind::WittFrobenius: return "WittFrob^" + std::to_string(power);
    case Kind::LaurentSubst:
      return "X->" + subst->to_string() + (base_power ? " (coeff Frob^" + std::to_string(base_power) + ")" : "");
  }
  return "?";
}

void check_endo_domain(const RingEndo& e, const RingPtr& ring) {
  switch (e.kind) {
    case RingEndo::Kind::Identity: return;
    case RingEndo::Kind::FieldFrobenius:
      if (ring->is_laurent() || ring->precision() != 1 || e.power < 0)
        throw Error(ErrorKind::EndoDomainMismatch, "field Frobenius needs a finite field", {{"ring", ring->name()}});
      return;
    case RingEndo::Kind::WittFrobenius:
      if (ring->is_laurent() || e.power < 0)
        throw Error(ErrorKind::EndoDomainMismatch, "Witt Frobenius needs a Galois ring", {{"ring", ring->name()}});
      return;
    case RingEndo::Kind::LaurentSubst: {
      if (!ring->is_laurent() || !e.subst || !same_ring(e.subst->ring(), ring))
        throw Error(ErrorKind::EndoDomainMismatch, "substitution needs a Laurent ring", {{"ring", ring->name()}});
      for (int xd = -ring->low(); xd <= 0; ++xd)
        for (int t = 0; t < ring->degree(); ++t)
          if (e.subst->coeff(t, xd) != 0)
            throw Error(ErrorKind::EndoDomainMismatch, "substituted series must have positive X-valuation",
                        {{"u", e.subst->to_string()}});
      return;
    }
  }
}

namespace {

// One Witt-Frobenius step on the t-coordinates of a Galois-ring element.
std::vector<Int> frob_step(const Ring& G, const std::vector<Int>& c, const std::vector<Element>& frob_pows) {
  const Int m = G.modulus();
  std::vector<Int> out(G.degree(), 0);
  for (int i = 0; i < G.degree(); ++i) {
    if (c[i] == 0) continue;
    const auto& row = frob_pows[i].coeffs();
    for (int k = 0; k < G.degree(); ++k) out[k] = (out[k] + mulmod(c[i], row[k], m)) % m;
  }
  return out;
}

std::vector<Element> frobenius_powers(const Ring& G) {
  std::vector<Element> pw;
  Element acc = G.one();
  for (int i = 0; i < G.degree(); ++i) {
    pw.push_back(acc);
    acc = acc * G.frobenius_of_t();
  }
  return pw;
}

Element galois_frobenius(const Element& x, int e) {
  const Ring& G = *x.ring();
  if (G.degree() == 1 || e == 0) return x;
  auto pw = frobenius_powers(G);
  std::vector<Int> c = x.coeffs();
  for (int k = 0; k < e; ++k) c = frob_step(G, c, pw);
  return Element(x.ring(), std::move(c));
}

}  // namespace

Element apply_endo(const RingEndo& e, const Element& x) {
  const RingPtr& ring = x.ring();
  check_endo_domain(e, ring);
  switch (e.kind) {
    case RingEndo::Kind::Identity: return x;
    case RingEndo::Kind::FieldFrobenius:
    case RingEndo::Kind::WittFrobenius: return galois_frobenius(x, e.power);
    case RingEndo::Kind::LaurentSubst: {
      const Ring& R = *ring;
      const Element& u = *e.subst;
      Element out = R.zero();
      Element upow = R.one();
      for (int xd = 0; xd < R.high(); ++xd) {
        Element c = laurent_column(x, xd);
        if (!c.is_zero()) out += laurent_constant(ring, galois_frobenius(c, e.base_power), 0) * upow;
        if (xd + 1 < R.high()) upow = upow * u;
      }
      if (R.low() > 0) {
        bool any_negative = false;
        for (int xd = -R.low(); xd < 0; ++xd)
          any_negative = any_negative || !laurent_column(x, xd).is_zero();
        if (any_negative) {
          Element uinv = invert(u);
          Element ipow_ = R.one();
          for (int xd = -1; xd >= -R.low(); --xd) {
            ipow_ = ipow_ * uinv;
            Element c = laurent_column(x, xd);
            if (!c.is_zero()) out += laurent_constant(ring, galois_frobenius(c, e.base_power), 0) * ipow_;
          }
        }
      }
      return out;
    }
  }
  return x;
}

RingEndo compose(const RingEndo& a, const RingEndo& b, const RingPtr& ring) {
  using K = RingEndo::Kind;
  if (a.kind == K::Identity) return b;
  if (b.kind == K::Identity) return a;
  auto frob_like = [](const RingEndo& e) { return e.kind == K::FieldFrobenius || e.kind == K::WittFrobenius; };
  if (frob_like(a) && frob_like(b)) {
    RingEndo r = a;
    r.power = a.power + b.power;
    if (b.kind == K::WittFrobenius) r.kind = K::WittFrobenius;
    return r;
  }
  if (a.kind == K::LaurentSubst && b.kind == K::LaurentSubst) {
    // (a∘b)(X) = a(b(X))
    return RingEndo::laurent_subst(apply_endo(a, *b.subst), a.base_power + b.base_power);
  }
  throw Error(ErrorKind::InvalidArgument, "endomorphisms do not compose in closed form",
              {{"a", a.to_string()}, {"b", b.to_string()}, {"ring", ring->name()}});
}

bool endo_is_identity_on(const RingEndo& e, const RingPtr& ring) {
  for (const auto& b : monomial_basis(ring))
    if (apply_endo(e, b) != b) return false;
  return true;
}

std::vector<Element> monomial_basis(const RingPtr& ring) {
  std::vector<Element> out;
  for (int i = 0; i < ring->dim(); ++i) {
    std::vector<Int> c(ring->dim(), 0);
    c[i] = 1;
    out.emplace_back(ring, std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Roots and morphisms

std::optional<Element> find_root(const std::vector<Int>& g, const RingPtr& ring) {
  if (ring->is_laurent()) throw Error(ErrorKind::InvalidArgument, "root finding needs a Galois ring");
  const int k = static_cast<int>(g.size()) - 1;
  if (k < 1) return std::nullopt;
  const Int p = ring->p();
  RingPtr F = ring->residue_ring();
  auto eval = [&](const Element& x, bool derivative) {
    const RingPtr& R = x.ring();
    Element acc = R->zero();
    for (int i = k; i >= (derivative ? 1 : 0); --i) acc = acc * x + R->from_int(derivative ? g[i] * i : g[i]);
    return acc;
  };
  const int D = F->degree();
  if (D % k != 0) return std::nullopt;
  // Subfield F_{p^k}: kernel of Frob^k - 1 acting F_p-linearly on F.
  std::vector<std::vector<Int>> mat(D, std::vector<Int>(D, 0));
  auto basis = monomial_basis(F);
  for (int j = 0; j < D; ++j) {
    Element img = apply_endo(RingEndo::field_frobenius(k), basis[j]) - basis[j];
    for (int i = 0; i < D; ++i) mat[i][j] = img.coeffs()[i];
  }
  auto ker = fp_nullspace(mat, p);
  double count = 1;
  for (std::size_t i = 0; i < ker.size(); ++i) count *= static_cast<double>(p);
  if (count > static_cast<double>(1 << 22))
    throw Error(ErrorKind::SizeGuard, "subfield too large to enumerate", {{"size", count}});
  std::vector<Int> digits(ker.size(), 0);
  std::optional<Element> root;
  while (true) {
    std::vector<Int> c(D, 0);
    for (std::size_t b = 0; b < ker.size(); ++b)
      for (int i = 0; i < D; ++i) c[i] = (c[i] + digits[b] * ker[b][i]) % p;
    Element cand(F, c);
    if (eval(cand, false).is_zero()) {
      root = cand;
      break;
    }
    std::size_t i = 0;
    while (i < digits.size()) {
      if (++digits[i] < p) break;
      digits[i] = 0;
      ++i;
    }
    if (i == digits.size()) break;
  }
  if (!root) return std::nullopt;
  Element y(ring, root->coeffs());
  for (int it = 0; it < 2 * ring->precision() + 2; ++it) {
    Element gy = eval(y, false);
    if (gy.is_zero()) return y;
    y = y - gy * invert(eval(y, true));
  }
  if (!eval(y, false).is_zero()) throw Error(ErrorKind::InvalidArgument, "Hensel lifting failed");
  return y;
}

RingMorphism RingMorphism::identity(const RingPtr& ring) {
  RingMorphism a;
  a.kind_ = Kind::Identity;
  a.source_ = a.target_ = ring;
  return a;
}

RingMorphism RingMorphism::precision_drop(const RingPtr& source, int new_precision) {
  if (new_precision < 1 || new_precision > source->precision())
    throw Error(ErrorKind::MorphismDomainMismatch, "precision drop must lower N",
                {{"from", source->precision()}, {"to", new_precision}});
  RingMorphism a;
  a.kind_ = Kind::PrecisionDrop;
  a.source_ = source;
  a.target_ = with_precision(*source, new_precision);
  return a;
}

RingMorphism RingMorphism::reduction_mod_r(const RingPtr& source) {
  if (!source->r_is_x()) {
    RingMorphism a = precision_drop(source, 1);
    a.kind_ = Kind::ReductionModR;
    return a;
  }
  RingMorphism a;
  a.kind_ = Kind::ReductionModR;
  a.source_ = source;
  a.target_ = source->base();
  return a;
}

RingMorphism RingMorphism::embedding(const RingPtr& source, const RingPtr& target) {
  if (source->is_laurent() || target->is_laurent() || source->p() != target->p() ||
      source->precision() != target->precision() || target->degree() % source->degree() != 0)
    throw Error(ErrorKind::MorphismDomainMismatch, "unsupported embedding",
                {{"source", source->name()}, {"target", target->name()}});
  RingMorphism a;
  a.kind_ = Kind::Embedding;
  a.source_ = source;
  a.target_ = target;
  a.t_image_ = find_root(source->modulus_poly(), target);
  if (!a.t_image_) throw Error(ErrorKind::MorphismDomainMismatch, "modulus has no root in the target");
  return a;
}

RingMorphism RingMorphism::constant_embedding(const RingPtr& source, const RingPtr& target) {
  if (!target->is_laurent() || !same_ring(target->base(), source))
    throw Error(ErrorKind::MorphismDomainMismatch, "constant embedding needs a Laurent ring over the source",
                {{"source", source->name()}, {"target", target->name()}});
  RingMorphism a;
  a.kind_ = Kind::ConstantEmbedding;
  a.source_ = source;
  a.target_ = target;
  return a;
}

Element apply_morphism(const RingMorphism& a, const Element& x) {
  if (!same_ring(x.ring(), a.source()))
    throw Error(ErrorKind::MorphismDomainMismatch, "element is not in the source ring",
                {{"element_ring", x.ring()->name()}, {"source", a.source()->name()}});
  const RingPtr& T = a.target();
  switch (a.kind()) {
    case RingMorphism::Kind::Identity: return Element(T, x.coeffs());
    case RingMorphism::Kind::PrecisionDrop: return Element(T, x.coeffs());
    case RingMorphism::Kind::ReductionModR:
      if (a.source()->r_is_x()) return laurent_column(x, 0);
      return Element(T, x.coeffs());
    case RingMorphism::Kind::Embedding: {
      Element acc = T->zero();
      Element tp = T->one();
      for (int i = 0; i < a.source()->degree(); ++i) {
        if (x.coeffs()[i] != 0) acc += tp.scaled(x.coeffs()[i]);
        tp = tp * *a.t_image();
      }
      return acc;
    }
    case RingMorphism::Kind::ConstantEmbedding: return laurent_constant(T, x, 0);
  }
  return x;
}

std::optional<RingEndo> RingMorphism::equivariant_image(const RingEndo& e) const {
  using K = RingEndo::Kind;
  if (e.kind == K::Identity) return RingEndo::identity();
  switch (kind_) {
    case Kind::Identity: return e;
    case Kind::PrecisionDrop:
      if (e.kind == K::LaurentSubst) return RingEndo::laurent_subst(apply_morphism(*this, *e.subst), e.base_power);
      return e;
    case Kind::ReductionModR:
      if (source_->r_is_x()) {
        if (e.kind == K::LaurentSubst)
          return e.base_power == 0 ? RingEndo::identity() : RingEndo::witt_frobenius(e.base_power);
        return std::nullopt;
      }
      if (e.kind == K::LaurentSubst) return RingEndo::laurent_subst(apply_morphism(*this, *e.subst), e.base_power);
      return e;
    case Kind::Embedding:
      if (e.kind == K::FieldFrobenius || e.kind == K::WittFrobenius) return e;
      return std::nullopt;
    case Kind::ConstantEmbedding:
      if (e.kind == K::FieldFrobenius || e.kind == K::WittFrobenius)
        return RingEndo::laurent_subst(target_->X(), e.power);
      return std::nullopt;
  }
  return std::nullopt;
}

std::string RingMorphism::to_string() const {
  static const char* names[] = {"identity", "precision_drop", "reduction_mod_r", "embedding", "constant_embedding"};
  return std::string(names[static_cast<int>(kind_)]) + ": " + source_->name() + " -> " + target_->name();
}

}  // namespace devkit
