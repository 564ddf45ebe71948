#include "devkit/coinduction.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace devkit {

SubmonoidData SubmonoidData::numeric(std::vector<int> moduli) {
  SubmonoidData d;
  d.variant = Variant::Numeric;
  d.moduli = std::move(moduli);
  return d;
}

SubmonoidData SubmonoidData::group(std::vector<std::vector<int>> table, std::vector<int> subgroup,
                                   std::map<std::string, int> ambient_gens, std::map<std::string, int> sub_gens) {
  SubmonoidData d;
  d.variant = Variant::FiniteGroup;
  d.table = std::move(table);
  d.subgroup = std::move(subgroup);
  d.ambient_gens = std::move(ambient_gens);
  d.sub_gens = std::move(sub_gens);
  return d;
}

std::vector<std::string> SubmonoidData::ambient() const {
  std::vector<std::string> out;
  if (variant == Variant::FiniteGroup) {
    for (const auto& [l, g] : ambient_gens) out.push_back(l);
    return out;
  }
  if (!ambient_labels.empty()) return ambient_labels;
  for (std::size_t i = 0; i < moduli.size(); ++i) out.push_back("e" + std::to_string(i + 1));
  return out;
}

std::vector<std::string> SubmonoidData::sub() const {
  std::vector<std::string> out;
  if (variant == Variant::FiniteGroup) {
    for (const auto& [l, g] : sub_gens) out.push_back(l);
    return out;
  }
  if (!sub_labels.empty()) return sub_labels;
  for (std::size_t i = 0; i < moduli.size(); ++i) out.push_back("g" + std::to_string(i + 1));
  return out;
}

namespace {

std::string tuple_label(const std::vector<int>& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s + ")";
}

CosetEnumeration numeric_cosets(const SubmonoidData& data) {
  const auto& f = data.moduli;
  const int d = static_cast<int>(f.size());
  if (d < 1 || d > 3)
    throw Error(ErrorKind::NotSubtleFinite, "numeric data needs 1 <= d <= 3", {{"d", d}});
  for (int m : f)
    if (m < 1 || m > 6)
      throw Error(ErrorKind::NotSubtleFinite, "modulus outside the searchable range 1..6", {{"moduli", f}});
  const auto amb = data.ambient(), sub = data.sub();
  if (static_cast<int>(amb.size()) != d || static_cast<int>(sub.size()) != d)
    throw Error(ErrorKind::InvalidArgument, "label count does not match the number of moduli");

  CosetEnumeration out;
  std::vector<int> x(d, 0);
  while (true) {
    out.reps.push_back(x);
    out.labels.push_back(tuple_label(x));
    std::vector<std::string> w;
    for (int i = 0; i < d; ++i) w.insert(w.end(), x[i], amb[i]);
    out.rep_words.push_back(w);
    int i = d - 1;
    while (i >= 0 && ++x[i] == f[i]) x[i--] = 0;
    if (i < 0) break;
  }
  auto index_of = [&](const std::vector<int>& y) {
    int idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * f[i] + y[i];
    return idx;
  };

  // Every t in [0,B)^d must reduce to a representative with t - x in the submonoid.
  const int B = 2 * *std::max_element(f.begin(), f.end());
  std::vector<int> t(d, 0);
  while (true) {
    std::vector<int> r(d);
    for (int i = 0; i < d; ++i) r[i] = t[i] % f[i];
    const auto& rep = out.reps[index_of(r)];
    for (int i = 0; i < d; ++i)
      if (rep[i] != r[i] || (t[i] - rep[i]) % f[i] != 0)
        throw Error(ErrorKind::NotSubtleFinite, "cofinality search failed", {{"t", t}});
    int i = d - 1;
    while (i >= 0 && ++t[i] == B) t[i--] = 0;
    if (i < 0) break;
  }
  out.cofinality_bound = B;

  for (int i = 0; i < d; ++i) {
    std::vector<int> g(d, 0);
    g[i] = f[i];
    out.sub_words[sub[i]] = std::vector<std::string>(f[i], amb[i]);
    for (const auto& rep : out.reps) {
      std::vector<int> t2 = rep;
      t2[i] += f[i];
      out.l_relations.push_back({g, std::vector<int>(d, 0), rep, t2});
    }
    std::vector<Transition> tr;
    for (const auto& rep : out.reps) {
      std::vector<int> y = rep;
      if (++y[i] < f[i]) {
        tr.push_back({index_of(y), {}});
      } else {
        y[i] = 0;
        tr.push_back({index_of(y), {sub[i]}});
      }
    }
    out.transitions[amb[i]] = std::move(tr);
  }
  return out;
}

struct Group {
  const std::vector<std::vector<int>>& t;
  int n;
  int mul(int a, int b) const { return t[a][b]; }
  int inv(int a) const {
    for (int b = 0; b < n; ++b)
      if (t[a][b] == 0) return b;
    return -1;
  }
};

void validate_group(const SubmonoidData& data) {
  const auto& t = data.table;
  const int n = static_cast<int>(t.size());
  if (n < 1 || n > 24) throw Error(ErrorKind::InvalidArgument, "group order must be in 1..24", {{"order", n}});
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(t[a].size()) != n) throw Error(ErrorKind::InvalidArgument, "table is not square");
    std::set<int> row(t[a].begin(), t[a].end());
    if (static_cast<int>(row.size()) != n || *row.begin() < 0 || *row.rbegin() >= n)
      throw Error(ErrorKind::InvalidArgument, "table row is not a permutation", {{"row", a}});
    if (t[0][a] != a || t[a][0] != a) throw Error(ErrorKind::InvalidArgument, "element 0 is not the identity");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (t[t[a][b]][c] != t[a][t[b][c]])
          throw Error(ErrorKind::InvalidArgument, "table is not associative", {{"a", a}, {"b", b}, {"c", c}});
  std::set<int> h(data.subgroup.begin(), data.subgroup.end());
  if (!h.count(0)) throw Error(ErrorKind::InvalidArgument, "subgroup must contain the identity");
  for (int a : h) {
    if (a < 0 || a >= n) throw Error(ErrorKind::InvalidArgument, "subgroup element out of range", {{"element", a}});
    for (int b : h)
      if (!h.count(t[a][b])) throw Error(ErrorKind::InvalidArgument, "subgroup is not closed", {{"a", a}, {"b", b}});
  }
  for (const auto& [l, g] : data.ambient_gens)
    if (g < 0 || g >= n) throw Error(ErrorKind::InvalidArgument, "generator out of range", {{"label", l}});
  for (const auto& [l, g] : data.sub_gens)
    if (!h.count(g)) throw Error(ErrorKind::InvalidArgument, "submonoid generator not in the subgroup", {{"label", l}});
}

// Shortest words w = [s1..sk] with s1*...*sk = g, over `gens`, for every g
// reachable from the identity; labels are tried in map order.
std::map<int, std::vector<std::string>> words_over(const Group& G, const std::map<std::string, int>& gens) {
  std::map<int, std::vector<std::string>> w{{0, {}}};
  std::deque<int> q{0};
  while (!q.empty()) {
    const int a = q.front();
    q.pop_front();
    for (const auto& [l, g] : gens) {
      const int b = G.mul(a, g);
      if (w.count(b)) continue;
      w[b] = w[a];
      w[b].push_back(l);
      q.push_back(b);
    }
  }
  return w;
}

CosetEnumeration group_cosets(const SubmonoidData& data) {
  validate_group(data);
  const Group G{data.table, static_cast<int>(data.table.size())};
  const std::set<int> H(data.subgroup.begin(), data.subgroup.end());
  auto amb_words = words_over(G, data.ambient_gens);
  if (static_cast<int>(amb_words.size()) != G.n)
    throw Error(ErrorKind::InvalidArgument, "ambient generators do not generate the group");
  auto sub_words = words_over(G, data.sub_gens);
  if (sub_words.size() != H.size())
    throw Error(ErrorKind::InvalidArgument, "submonoid generators do not generate the subgroup");

  // Right cosets Hg, each represented by its smallest element.
  std::vector<int> coset_rep(G.n);
  std::set<int> reps;
  for (int g = 0; g < G.n; ++g) {
    int m = g;
    for (int h : H) m = std::min(m, G.mul(h, g));
    coset_rep[g] = m;
    reps.insert(m);
  }
  CosetEnumeration out;
  std::map<int, int> index;
  for (int r : reps) {
    index[r] = static_cast<int>(out.reps.size());
    out.reps.push_back({r});
    out.labels.push_back("g" + std::to_string(r));
    out.rep_words.push_back(amb_words.at(r));
  }
  out.cofinality_bound = G.n;
  for (const auto& [l, s] : data.sub_gens) {
    out.sub_words[l] = amb_words.at(s);
    for (int r : reps) out.l_relations.push_back({std::vector<int>{s}, {0}, {r}, {G.mul(s, r)}});
  }
  for (const auto& [l, u] : data.ambient_gens) {
    std::vector<Transition> tr;
    for (int r : reps) {
      const int y = G.mul(r, u);
      const int z = coset_rep[y];
      const int h = G.mul(y, G.inv(z));
      tr.push_back({index.at(z), sub_words.at(h)});
    }
    out.transitions[l] = std::move(tr);
  }
  return out;
}

}  // namespace

CosetEnumeration enumerate_cosets(const SubmonoidData& data) {
  return data.variant == SubmonoidData::Variant::Numeric ? numeric_cosets(data) : group_cosets(data);
}

}  // namespace devkit

namespace devkit {

namespace {

std::vector<Element> apply_word_vec(const CoinducedRing& cr, const std::vector<std::string>& word,
                                    const std::vector<Element>& v) {
  std::vector<Element> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(cr.apply_word(word, x));
  return out;
}

std::vector<Element> column(const Matrix& m) {
  std::vector<Element> v;
  for (int i = 0; i < m.rows(); ++i) v.push_back(m.at(i, 0));
  return v;
}

std::vector<Element> random_vector(const CanonicalModule& m, std::uint64_t& st) {
  std::vector<Element> v;
  for (int i = 0; i < m.rank(); ++i) v.push_back(reduce_mod_r_power(random_element(m.ring, st), m.exponents[i]));
  return v;
}

// Pairs of T-words that must act identically: commutation of the numeric
// generators, or s·h = (sh) in the subgroup.
std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> submonoid_relations(
    const SubmonoidData& data) {
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> rel;
  const auto sub = data.sub();
  if (data.variant == SubmonoidData::Variant::Numeric) {
    for (std::size_t i = 0; i < sub.size(); ++i)
      for (std::size_t j = i + 1; j < sub.size(); ++j) rel.push_back({{sub[i], sub[j]}, {sub[j], sub[i]}});
    return rel;
  }
  const Group G{data.table, static_cast<int>(data.table.size())};
  auto words = words_over(G, data.sub_gens);
  for (const auto& [l, s] : data.sub_gens)
    for (const auto& [h, w] : words) {
      std::vector<std::string> lhs{l};
      lhs.insert(lhs.end(), w.begin(), w.end());
      rel.push_back({lhs, words.at(G.mul(s, h))});
    }
  return rel;
}

// Same for the ambient generators.
std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> ambient_relations(
    const SubmonoidData& data) {
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> rel;
  const auto amb = data.ambient();
  if (data.variant == SubmonoidData::Variant::Numeric) {
    for (std::size_t i = 0; i < amb.size(); ++i)
      for (std::size_t j = i + 1; j < amb.size(); ++j) rel.push_back({{amb[i], amb[j]}, {amb[j], amb[i]}});
    return rel;
  }
  const Group G{data.table, static_cast<int>(data.table.size())};
  auto words = words_over(G, data.ambient_gens);
  for (const auto& [l, s] : data.ambient_gens)
    for (const auto& [h, w] : words) {
      std::vector<std::string> lhs{l};
      lhs.insert(lhs.end(), w.begin(), w.end());
      rel.push_back({lhs, words.at(G.mul(s, h))});
    }
  return rel;
}

void require_relations(const SModule& d,
                       const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& rel) {
  std::uint64_t st = 0x5eed;
  for (const auto& [a, b] : rel) {
    for (const auto& x : monomial_basis(d.ring())) {
      Element ya = x, yb = x;
      for (auto it = a.rbegin(); it != a.rend(); ++it) ya = apply_endo(d.monoid.find(*it).endo, ya);
      for (auto it = b.rbegin(); it != b.rend(); ++it) yb = apply_endo(d.monoid.find(*it).endo, yb);
      if (ya != yb)
        throw Error(ErrorKind::ActionMismatch, "ring action violates a relation of the monoid",
                    {{"lhs", a}, {"rhs", b}, {"element", x.to_string()}});
    }
    for (int s = 0; s < 4 && d.rank() > 0; ++s) {
      Matrix v = Matrix::column(random_vector(d.base, st));
      if (act(d, a, v) != act(d, b, v))
        throw Error(ErrorKind::ActionMismatch, "module action violates a relation of the monoid",
                    {{"lhs", a}, {"rhs", b}});
    }
  }
}

void require_labels(const MonoidSpec& m, const std::vector<std::string>& want, const char* what) {
  std::vector<std::string> have = m.labels(), w = want;
  std::sort(have.begin(), have.end());
  std::sort(w.begin(), w.end());
  if (have != w)
    throw Error(ErrorKind::ActionMismatch, std::string(what) + " labels do not match the inclusion data",
                {{"have", have}, {"want", w}});
}

}  // namespace

Element CoinducedRing::apply_word(const std::vector<std::string>& word, const Element& x) const {
  Element y = x;
  for (auto it = word.rbegin(); it != word.rend(); ++it) y = apply_endo(sub.find(*it).endo, y);
  return y;
}

std::vector<Element> CoinducedRing::act(const std::string& label, const std::vector<Element>& f) const {
  auto it = cosets.transitions.find(label);
  if (it == cosets.transitions.end()) throw Error(ErrorKind::UnknownGenerator, "unknown ambient generator", {{"label", label}});
  std::vector<Element> out;
  for (const auto& tr : it->second) out.push_back(apply_word(tr.word, f.at(tr.source)));
  return out;
}

std::vector<Element> CoinducedRing::one() const { return std::vector<Element>(size(), base->one()); }

CoinducedRing coinduce_ring(const RingPtr& ring, const MonoidSpec& sub, const SubmonoidData& data) {
  require_labels(sub, data.sub(), "ring action");
  validate_monoid(sub, ring);
  CoinducedRing cr{ring, sub, data, enumerate_cosets(data)};
  for (const auto& [a, b] : submonoid_relations(data))
    for (const auto& x : monomial_basis(ring))
      if (cr.apply_word(a, x) != cr.apply_word(b, x))
        throw Error(ErrorKind::ActionMismatch, "ring action violates a relation of the submonoid",
                    {{"lhs", a}, {"rhs", b}, {"element", x.to_string()}});
  return cr;
}

Exps CoinducedModule::exps() const {
  Exps e;
  for (const auto& c : components) e.insert(e.end(), c.exponents.begin(), c.exponents.end());
  return e;
}

std::vector<std::vector<Element>> CoinducedModule::split(const std::vector<Element>& m) const {
  std::vector<std::vector<Element>> out;
  std::size_t at = 0;
  for (const auto& c : components) {
    out.emplace_back(m.begin() + at, m.begin() + at + c.rank());
    at += c.rank();
  }
  return out;
}

std::vector<std::vector<Element>> CoinducedModule::act(const std::string& label,
                                                       const std::vector<std::vector<Element>>& m) const {
  auto it = ring.cosets.transitions.find(label);
  if (it == ring.cosets.transitions.end())
    throw Error(ErrorKind::UnknownGenerator, "unknown ambient generator", {{"label", label}});
  const auto& bl = blocks.at(label);
  std::vector<std::vector<Element>> out;
  for (std::size_t x = 0; x < it->second.size(); ++x) {
    const auto& tr = it->second[x];
    if (components[x].rank() == 0) {
      out.emplace_back();
      continue;
    }
    if (components[tr.source].rank() == 0) {
      out.emplace_back(components[x].rank(), ring.base->zero());
      continue;
    }
    Matrix w = bl[x] * Matrix::column(apply_word_vec(ring, tr.word, m.at(tr.source)));
    out.push_back(column(reduce_rows(w, components[x].exponents)));
  }
  return out;
}

std::vector<Element> CoinducedModule::act_flat(const std::string& label, const std::vector<Element>& m) const {
  std::vector<Element> out;
  for (auto& c : act(label, split(m))) out.insert(out.end(), c.begin(), c.end());
  return out;
}

Matrix word_matrix(const SModule& d, const std::vector<std::string>& word) {
  Matrix m = Matrix::identity(d.ring(), d.rank());
  for (std::size_t j = 0; j < word.size(); ++j) {
    Matrix a = d.action(word[j]);
    for (std::size_t k = j; k-- > 0;) a = apply_endo(d.monoid.find(word[k]).endo, a);
    m = m * a;
  }
  return reduce_rows(m, d.base.exponents);
}

CoinducedModule coinduce_module(const SModule& d, const SubmonoidData& data) {
  CoinducedModule cm{coinduce_ring(d.ring(), d.monoid, data), {}, {}};
  require_relations(d, submonoid_relations(data));
  cm.components.assign(cm.ring.size(), d.base);
  for (const auto& [label, trs] : cm.ring.cosets.transitions) {
    std::vector<Matrix> bl;
    for (const auto& tr : trs) bl.push_back(word_matrix(d, tr.word));
    cm.blocks[label] = std::move(bl);
  }
  return cm;
}

}  // namespace devkit

namespace devkit {

namespace {

std::vector<Element> to_vec(const Matrix& m) {
  std::vector<Element> v;
  for (int i = 0; i < m.rows(); ++i) v.push_back(m.at(i, 0));
  return v;
}

Matrix apply_columns(const Matrix& a, const std::vector<Element>& v, const Exps& exps) {
  return reduce_rows(a * Matrix::column(v), exps);
}

Int int_pow(Int p, int e) {
  Int r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

// All elements Σ c_k col_k (0 <= c_k < p^{orders[k]}) reduced into ⊕Z/p^{amb_i},
// as prime-subring coordinate vectors.
std::set<std::vector<Int>> enumerate_span(const std::vector<std::vector<Int>>& cols, const Exps& orders,
                                          const Exps& amb, Int p, std::size_t cap) {
  double total = 1;
  for (int e : orders) total *= static_cast<double>(int_pow(p, e));
  if (total > static_cast<double>(cap))
    throw Error(ErrorKind::SizeGuard, "set too large to enumerate", {{"size", total}, {"cap", cap}});
  std::vector<Int> mod(amb.size());
  for (std::size_t i = 0; i < amb.size(); ++i) mod[i] = int_pow(p, amb[i]);
  std::set<std::vector<Int>> out;
  std::vector<Int> digit(cols.size(), 0), acc(amb.size(), 0);
  while (true) {
    out.insert(acc);
    std::size_t k = 0;
    for (; k < cols.size(); ++k) {
      const Int lim = int_pow(p, orders[k]);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = (acc[i] + cols[k][i]) % mod[i];
      if (++digit[k] < lim) break;
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = ((acc[i] - lim % mod[i] * cols[k][i]) % mod[i] + mod[i]) % mod[i];
      digit[k] = 0;
    }
    if (k == cols.size()) break;
  }
  return out;
}

std::vector<std::vector<Element>> zero_tuple(const CoinducedModule& m) {
  std::vector<std::vector<Element>> t;
  for (const auto& c : m.components) t.emplace_back(c.rank(), m.ring.base->zero());
  return t;
}

std::vector<std::vector<Element>> apply_ambient_word(const CoinducedModule& m, const std::vector<std::string>& w,
                                                     std::vector<std::vector<Element>> t) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) t = m.act(*it, t);
  return t;
}

}  // namespace

SModule restrict_to_submonoid(const SModule& d, const SubmonoidData& data) {
  require_labels(d.monoid, data.ambient(), "module action");
  require_relations(d, ambient_relations(data));
  const CosetEnumeration cos = enumerate_cosets(data);
  MonoidSpec t;
  std::map<std::string, Matrix> acts;
  for (const auto& g : data.sub()) {
    const auto& w = cos.sub_words.at(g);
    RingEndo e = RingEndo::identity();
    for (const auto& s : w) e = compose(e, d.monoid.find(s).endo, d.ring());
    t.generators.push_back({g, e});
    acts[g] = word_matrix(d, w);
  }
  if (data.variant == SubmonoidData::Variant::Numeric) {
    const auto sub = data.sub();
    for (std::size_t i = 0; i < sub.size(); ++i)
      for (std::size_t j = i + 1; j < sub.size(); ++j) t.commuting_pairs.push_back({sub[i], sub[j]});
  }
  return make_smodule(d.base, std::move(t), std::move(acts));
}

TensorCoinductionVerdict check_tensor_coinduction(const SModule& d, const SubmonoidData& data, std::uint64_t seed,
                                                  int samples) {
  require_labels(d.monoid, data.ambient(), "module action");
  EtaleVerdict ev = check_etale(d);
  if (!ev.etale)
    throw Error(ErrorKind::NotEtale, "tensor coinduction needs an etale module",
                {{"generator", ev.failing_generator}, {"failure", ev.failure}});
  const SModule dt = restrict_to_submonoid(d, data);
  const CoinducedModule cm = coinduce_module(dt, data);
  const CoinducedRing& cr = cm.ring;
  const auto& words = cr.cosets.rep_words;
  TensorCoinductionVerdict out;
  out.iso = true;
  for (const auto& w : words) {
    Matrix mx = word_matrix(d, w);
    const bool iso = kernel_cokernel({d.base, d.base, mx}).iso;
    out.component_maps.push_back(mx);
    out.component_iso.push_back(iso);
    out.iso = out.iso && iso;
  }
  auto psi = [&](const std::vector<Element>& f, const Matrix& v) {
    std::vector<std::vector<Element>> t;
    for (std::size_t x = 0; x < words.size(); ++x)
      t.push_back(to_vec(reduce_rows(act(d, words[x], v).scaled(f[x]), d.base.exponents)));
    return t;
  };
  out.equivariant = true;
  std::uint64_t st = seed;
  for (int s = 0; s < samples && d.rank() > 0; ++s) {
    std::vector<Element> f;
    for (int x = 0; x < cr.size(); ++x) f.push_back(random_element(cr.base, st));
    std::vector<Element> v0;
    for (int i = 0; i < d.rank(); ++i) v0.push_back(random_element(cr.base, st));
    Matrix v = reduce_rows(Matrix::column(v0), d.base.exponents);
    for (const auto& u : data.ambient()) {
      auto lhs = psi(cr.act(u, f), act(d, {u}, v));
      auto rhs = cm.act(u, psi(f, v));
      if (lhs != rhs) out.equivariant = false;
    }
  }
  return out;
}

BijectionVerdict invariants_bijection(const SModule& x, const SubmonoidData& data, std::size_t cap) {
  const CoinducedModule cm = coinduce_module(x, data);
  const RingPtr& R = x.ring();
  const Exps E = cm.exps();
  const Int p = R->p();
  BijectionVerdict out;

  // Coind(X)^S as the kernel of the stacked (u - 1) over the prime subring.
  Matrix stack;
  Exps tgt, src;
  for (const auto& u : data.ambient()) {
    FlatMap fm = flatten_map(R, E, E, [&](const std::vector<Element>& v) { return cm.act_flat(u, v); });
    Matrix diff = fm.matrix - Matrix::identity(fm.matrix.ring(), fm.matrix.rows());
    stack = stack.rows() == 0 && stack.cols() == 0 ? diff : stack.vcat(diff);
    tgt.insert(tgt.end(), fm.tgt_exps.begin(), fm.tgt_exps.end());
    src = fm.src_exps;
  }
  std::set<std::vector<Int>> coind_fixed, image;
  if (src.empty()) {
    coind_fixed.insert({});
  } else {
    Submodule k = submodule(kernel_generators(stack, tgt), src);
    std::vector<std::vector<Int>> cols;
    for (int j = 0; j < k.basis.cols(); ++j) {
      std::vector<Int> c;
      for (int i = 0; i < k.basis.rows(); ++i) c.push_back(k.basis.at(i, j).coeffs()[0]);
      cols.push_back(std::move(c));
    }
    coind_fixed = enumerate_span(cols, k.exps, src, p, cap);
  }
  for (const auto& c : coind_fixed) {
    std::vector<Element> full = src.empty() ? std::vector<Element>{} : unflatten_vector(R, c, E);
    std::vector<Element> comp0(full.begin(), full.begin() + x.rank());
    image.insert(flatten_vector(comp0, x.base.exponents));
  }

  std::set<std::vector<Int>> fixed;
  if (x.rank() == 0) {
    fixed.insert(flatten_vector({}, x.base.exponents));
  } else {
    PrimeSpan fp = fixed_points(x, x.monoid.labels());
    std::vector<std::vector<Int>> cols;
    for (const auto& v : fp.vectors) cols.push_back(flatten_vector(v, x.base.exponents));
    fixed = enumerate_span(cols, fp.orders, fp.ambient, p, cap);
  }
  out.coinduced_fixed = coind_fixed.size();
  out.fixed = fixed.size();
  out.bijective = image == fixed && image.size() == coind_fixed.size();
  return out;
}

Descended descend_from_coinduced(const CoinducedModule& m, std::uint64_t seed, int samples) {
  const RingPtr& R = m.ring.base;
  const CanonicalModule& base0 = m.components.at(0);
  const int n0 = base0.rank();
  std::map<std::string, Matrix> acts;
  for (const auto& g : m.ring.data.sub()) {
    Matrix a(R, n0, n0);
    for (int j = 0; j < n0; ++j) {
      auto t = zero_tuple(m);
      t[0][j] = R->one();
      t = apply_ambient_word(m, m.ring.cosets.sub_words.at(g), t);
      for (int i = 0; i < n0; ++i) a.at(i, j) = t[0][i];
    }
    acts[g] = a;
  }
  Descended out{make_smodule(base0, m.ring.sub, std::move(acts)), {}, true, true};
  const CoinducedModule back = coinduce_module(out.module, m.ring.data);

  // m -> [x -> (x·m)_0], one block per component.
  for (std::size_t x = 0; x < m.components.size(); ++x) {
    Matrix phi(R, n0, m.components[x].rank());
    for (int j = 0; j < m.components[x].rank(); ++j) {
      auto t = zero_tuple(m);
      t[x][j] = R->one();
      t = apply_ambient_word(m, m.ring.cosets.rep_words[x], t);
      for (int i = 0; i < n0; ++i) phi.at(i, j) = t[0][i];
    }
    try {
      if (!kernel_cokernel({m.components[x], base0, phi}).iso) out.witness_iso = false;
    } catch (const Error&) {
      out.witness_iso = false;
    }
    out.witness.push_back(phi);
  }
  auto apply_phi = [&](const std::vector<std::vector<Element>>& t) {
    std::vector<std::vector<Element>> r;
    for (std::size_t x = 0; x < t.size(); ++x)
      r.push_back(n0 == 0 ? std::vector<Element>{}
                          : m.components[x].rank() == 0 ? std::vector<Element>(n0, R->zero())
                                                          : to_vec(apply_columns(out.witness[x], t[x], base0.exponents)));
    return r;
  };
  std::uint64_t st = seed;
  for (int s = 0; s < samples; ++s) {
    std::vector<std::vector<Element>> t;
    for (const auto& c : m.components) t.push_back(random_vector(c, st));
    for (const auto& u : m.ring.data.ambient())
      if (apply_phi(m.act(u, t)) != back.act(u, apply_phi(t))) out.witness_equivariant = false;
  }
  return out;
}

}  // namespace devkit
