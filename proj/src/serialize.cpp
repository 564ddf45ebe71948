#include "devkit/serialize.hpp"

#include <set>

namespace devkit::io {

namespace {

[[noreturn]] void schema(const std::string& msg, json detail = json::object()) {
  throw Error(ErrorKind::SchemaError, msg, std::move(detail));
}

const json& field(const json& j, const char* key, const char* what) {
  if (!j.is_object()) schema(std::string(what) + " must be an object");
  auto it = j.find(key);
  if (it == j.end()) schema(std::string(what) + " is missing \"" + key + "\"");
  return *it;
}

template <class T>
T get(const json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    schema(std::string(what) + ": " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T dflt, const char* what) {
  auto it = j.find(key);
  return it == j.end() ? dflt : get<T>(*it, what);
}

json endo_kind_json(const RingEndo& e) {
  switch (e.kind) {
    case RingEndo::Kind::Identity: return {{"kind", "identity"}};
    case RingEndo::Kind::FieldFrobenius: return {{"kind", "field_frobenius"}, {"power", e.power}};
    case RingEndo::Kind::WittFrobenius: return {{"kind", "witt_frobenius"}, {"power", e.power}};
    case RingEndo::Kind::LaurentSubst:
      return {{"kind", "laurent_subst"}, {"image", to_json(*e.subst)}, {"base_power", e.base_power}};
  }
  return {};
}

}  // namespace

void require_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) schema(std::string(what) + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) schema(std::string(what) + " has unknown field \"" + k + "\"", {{"field", k}});
}

// ---------------------------------------------------------------------------
// Rings and elements

RingPtr ring_from_json(const json& j) {
  require_keys(j, {"variant", "p", "N", "d", "f", "base", "low", "high"}, "ring");
  const auto variant = get<std::string>(field(j, "variant", "ring"), "ring.variant");
  if (variant == "laurent") {
    RingPtr base = ring_from_json(field(j, "base", "ring"));
    return Ring::truncated_laurent(base, get_or<int>(j, "low", 0, "ring.low"),
                                   get<int>(field(j, "high", "ring"), "ring.high"));
  }
  const Int p = get<Int>(field(j, "p", "ring"), "ring.p");
  const auto f = get_or<std::vector<Int>>(j, "f", {}, "ring.f");
  if (variant == "prime_power") return Ring::prime_power(p, get<int>(field(j, "N", "ring"), "ring.N"));
  if (variant == "finite_field") return Ring::finite_field(p, get_or<int>(j, "d", 1, "ring.d"), f);
  if (variant == "galois_ring")
    return Ring::galois_ring(p, get<int>(field(j, "N", "ring"), "ring.N"), get<int>(field(j, "d", "ring"), "ring.d"), f);
  schema("unknown ring variant", {{"variant", variant}});
}

json to_json(const RingPtr& r) {
  if (r->is_laurent()) return {{"variant", "laurent"}, {"base", to_json(r->base())}, {"low", r->low()}, {"high", r->high()}};
  if (r->precision() == 1) return {{"variant", "finite_field"}, {"p", r->p()}, {"d", r->degree()}, {"f", r->modulus_poly()}};
  if (r->degree() == 1) return {{"variant", "prime_power"}, {"p", r->p()}, {"N", r->precision()}};
  return {{"variant", "galois_ring"}, {"p", r->p()}, {"N", r->precision()}, {"d", r->degree()}, {"f", r->modulus_poly()}};
}

Element element_from_json(const RingPtr& ring, const json& j) {
  if (j.is_number_integer()) return ring->from_int(j.get<Int>());
  auto c = get<std::vector<Int>>(j, "element");
  if (static_cast<int>(c.size()) > ring->dim())
    schema("element has too many coefficients", {{"ring", ring->name()}, {"length", c.size()}});
  c.resize(ring->dim(), 0);
  return Element(ring, std::move(c));
}

json to_json(const Element& x) { return x.coeffs(); }

Matrix matrix_from_json(const RingPtr& ring, const json& j) {
  if (!j.is_array()) schema("matrix must be an array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = rows ? static_cast<int>(j[0].size()) : 0;
  Matrix m(ring, rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols) schema("matrix rows differ in length", {{"row", i}});
    for (int k = 0; k < cols; ++k) m.at(i, k) = element_from_json(ring, j[i][k]);
  }
  return m;
}

json to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(to_json(m.at(i, k)));
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Modules

Exps exponents_from_json(const RingPtr& ring, const json& j) {
  if (!j.is_array()) schema("exponents must be an array");
  Exps e;
  const int inf = ring->nilpotency();
  for (const auto& x : j) {
    if (x.is_string()) {
      const auto s = x.get<std::string>();
      if (s != "inf" && s != "inf@" + std::to_string(inf)) schema("bad exponent token", {{"token", s}, {"infinity", inf}});
      e.push_back(inf);
    } else {
      const int v = get<int>(x, "exponent");
      if (v < 1 || v > inf) schema("exponent out of range", {{"exponent", v}, {"infinity", inf}});
      e.push_back(v);
    }
  }
  return e;
}

json exponents_to_json(const RingPtr& ring, const Exps& e) {
  json out = json::array();
  for (int v : e) {
    if (v == ring->nilpotency())
      out.push_back("inf@" + std::to_string(v));
    else
      out.push_back(v);
  }
  return out;
}

CanonicalModule module_from_json(const json& j) {
  require_keys(j, {"ring", "exponents"}, "module");
  RingPtr r = ring_from_json(field(j, "ring", "module"));
  return {r, exponents_from_json(r, field(j, "exponents", "module"))};
}

json to_json(const CanonicalModule& m) {
  return {{"ring", to_json(m.ring)}, {"exponents", exponents_to_json(m.ring, m.exponents)}};
}

PresentedModule presentation_from_json(const json& j) {
  require_keys(j, {"ring", "relations"}, "presentation");
  RingPtr r = ring_from_json(field(j, "ring", "presentation"));
  return {r, matrix_from_json(r, field(j, "relations", "presentation"))};
}

// ---------------------------------------------------------------------------
// Endomorphisms and monoids

RingEndo endo_from_json(const RingPtr& ring, const json& j) {
  if (j.is_string()) return endo_from_json(ring, json{{"kind", j.get<std::string>()}});
  require_keys(j, {"kind", "power", "image", "base_power", "a"}, "endo");
  const auto kind = get<std::string>(field(j, "kind", "endo"), "endo.kind");
  RingEndo e;
  if (kind == "identity") e = RingEndo::identity();
  else if (kind == "field_frobenius") e = RingEndo::field_frobenius(get_or<int>(j, "power", 1, "endo.power"));
  else if (kind == "witt_frobenius") e = RingEndo::witt_frobenius(get_or<int>(j, "power", 1, "endo.power"));
  else if (kind == "cyclotomic_phi") e = RingEndo::cyclotomic_phi(ring);
  else if (kind == "cyclotomic_gamma") e = RingEndo::cyclotomic_gamma(ring, get<Int>(field(j, "a", "endo"), "endo.a"));
  else if (kind == "laurent_subst")
    e = RingEndo::laurent_subst(element_from_json(ring, field(j, "image", "endo")),
                                get_or<int>(j, "base_power", 0, "endo.base_power"));
  else
    schema("unknown endo kind", {{"kind", kind}});
  check_endo_domain(e, ring);
  return e;
}

json to_json(const RingEndo& e) { return endo_kind_json(e); }

MonoidSpec monoid_from_json(const RingPtr& ring, const json& j) {
  require_keys(j, {"generators", "commuting", "normal_subsets"}, "monoid");
  MonoidSpec m;
  for (const auto& g : field(j, "generators", "monoid")) {
    require_keys(g, {"label", "endo"}, "generator");
    m.generators.push_back({get<std::string>(field(g, "label", "generator"), "generator.label"),
                            endo_from_json(ring, field(g, "endo", "generator"))});
  }
  if (j.contains("commuting"))
    for (const auto& pr : j["commuting"]) {
      auto v = get<std::vector<std::string>>(pr, "commuting pair");
      if (v.size() != 2) schema("commuting pairs have two labels");
      m.commuting_pairs.push_back({v[0], v[1]});
    }
  if (j.contains("normal_subsets"))
    m.normal_subsets = get<std::map<std::string, std::vector<std::string>>>(j["normal_subsets"], "normal_subsets");
  validate_monoid(m, ring);
  return m;
}

json to_json(const MonoidSpec& m) {
  json gens = json::array();
  for (const auto& g : m.generators) gens.push_back({{"label", g.label}, {"endo", to_json(g.endo)}});
  json out{{"generators", gens}};
  if (!m.commuting_pairs.empty()) {
    json c = json::array();
    for (const auto& [a, b] : m.commuting_pairs) c.push_back({a, b});
    out["commuting"] = c;
  }
  if (!m.normal_subsets.empty()) out["normal_subsets"] = m.normal_subsets;
  return out;
}

SModule smodule_from_json(const json& j) {
  require_keys(j, {"module", "monoid", "actions", "convention"}, "s-module");
  const auto conv = get_or<std::string>(j, "convention", "A-phi", "convention");
  if (conv != "A-phi") schema("only the A-phi action convention is supported", {{"convention", conv}});
  CanonicalModule base = module_from_json(field(j, "module", "s-module"));
  MonoidSpec mon = monoid_from_json(base.ring, field(j, "monoid", "s-module"));
  std::map<std::string, Matrix> acts;
  const json& a = field(j, "actions", "s-module");
  if (!a.is_object()) schema("actions must be an object");
  for (const auto& [label, m] : a.items()) acts[label] = matrix_from_json(base.ring, m);
  for (auto& [label, m] : acts)
    if (m.rows() == 0 && base.rank() == 0) m = Matrix(base.ring, 0, 0);
  return make_smodule(std::move(base), std::move(mon), std::move(acts));
}

json to_json(const SModule& d) {
  json acts = json::object();
  for (const auto& [l, m] : d.actions) acts[l] = to_json(m);
  return {{"module", to_json(d.base)}, {"monoid", to_json(d.monoid)}, {"actions", acts}, {"convention", "A-phi"}};
}

GaloisRep rep_from_json(const json& j) {
  require_keys(j, {"module", "frob"}, "representation");
  CanonicalModule base = module_from_json(field(j, "module", "representation"));
  Matrix f = matrix_from_json(base.ring, field(j, "frob", "representation"));
  if (base.rank() == 0) f = Matrix(base.ring, 0, 0);
  GaloisRep v{base, reduce_rows(f, base.exponents)};
  validate_rep(v);
  return v;
}

json to_json(const GaloisRep& v) { return {{"module", to_json(v.base)}, {"frob", to_json(v.frob)}}; }

// ---------------------------------------------------------------------------
// Coinduction data

SubmonoidData inclusion_from_json(const json& j) {
  require_keys(j, {"variant", "moduli", "ambient_labels", "sub_labels", "table", "subgroup", "ambient_generators",
                   "sub_generators"},
               "inclusion");
  const auto v = get<std::string>(field(j, "variant", "inclusion"), "inclusion.variant");
  if (v == "numeric") {
    SubmonoidData d = SubmonoidData::numeric(get<std::vector<int>>(field(j, "moduli", "inclusion"), "moduli"));
    d.ambient_labels = get_or<std::vector<std::string>>(j, "ambient_labels", {}, "ambient_labels");
    d.sub_labels = get_or<std::vector<std::string>>(j, "sub_labels", {}, "sub_labels");
    return d;
  }
  if (v == "group")
    return SubmonoidData::group(get<std::vector<std::vector<int>>>(field(j, "table", "inclusion"), "table"),
                                get<std::vector<int>>(field(j, "subgroup", "inclusion"), "subgroup"),
                                get<std::map<std::string, int>>(field(j, "ambient_generators", "inclusion"), "ambient_generators"),
                                get<std::map<std::string, int>>(field(j, "sub_generators", "inclusion"), "sub_generators"));
  schema("unknown inclusion variant", {{"variant", v}});
}

json to_json(const SubmonoidData& d) {
  if (d.variant == SubmonoidData::Variant::Numeric)
    return {{"variant", "numeric"}, {"moduli", d.moduli}, {"ambient_labels", d.ambient()}, {"sub_labels", d.sub()}};
  return {{"variant", "group"}, {"table", d.table}, {"subgroup", d.subgroup},
          {"ambient_generators", d.ambient_gens}, {"sub_generators", d.sub_gens}};
}

json to_json(const CosetEnumeration& c) {
  json tr = json::object();
  for (const auto& [l, ts] : c.transitions) {
    json a = json::array();
    for (const auto& t : ts) a.push_back({{"source", t.source}, {"word", t.word}});
    tr[l] = a;
  }
  json rel = json::array();
  for (const auto& q : c.l_relations) rel.push_back({q[0], q[1], q[2], q[3]});
  return {{"representatives", c.labels}, {"cofinality_bound", c.cofinality_bound}, {"l_relations", rel},
          {"transitions", tr}, {"sub_words", c.sub_words}, {"rep_words", c.rep_words}};
}

json to_json(const CoinducedModule& m) {
  json comps = json::array();
  for (const auto& c : m.components) comps.push_back(exponents_to_json(c.ring, c.exponents));
  json bl = json::object();
  for (const auto& [l, ms] : m.blocks) {
    json a = json::array();
    for (const auto& x : ms) a.push_back(to_json(x));
    bl[l] = a;
  }
  return {{"ring", to_json(m.ring.base)}, {"monoid", to_json(m.ring.sub)}, {"inclusion", to_json(m.ring.data)},
          {"components", comps}, {"blocks", bl}, {"cosets", to_json(m.ring.cosets)}};
}

CoinducedModule coinduced_from_json(const json& j) {
  require_keys(j, {"ring", "monoid", "inclusion", "components", "blocks", "cosets"}, "coinduced module");
  RingPtr r = ring_from_json(field(j, "ring", "coinduced module"));
  MonoidSpec sub = monoid_from_json(r, field(j, "monoid", "coinduced module"));
  SubmonoidData data = inclusion_from_json(field(j, "inclusion", "coinduced module"));
  CoinducedModule m{coinduce_ring(r, sub, data), {}, {}};
  for (const auto& c : field(j, "components", "coinduced module")) m.components.push_back({r, exponents_from_json(r, c)});
  if (static_cast<int>(m.components.size()) != m.ring.size())
    schema("component count does not match the cosets", {{"expected", m.ring.size()}});
  const json& bl = field(j, "blocks", "coinduced module");
  for (const auto& label : data.ambient()) {
    if (!bl.contains(label)) schema("missing blocks for generator", {{"label", label}});
    const auto& trs = m.ring.cosets.transitions.at(label);
    std::vector<Matrix> ms;
    for (std::size_t x = 0; x < trs.size(); ++x) {
      Matrix b = matrix_from_json(r, bl[label].at(x));
      const auto& src = m.components[trs[x].source];
      const auto& tgt = m.components[x];
      if (b.rows() == 0) b = Matrix(r, tgt.rank(), src.rank());
      ModuleHom h{src, tgt, b};
      validate_hom(h);
      ms.push_back(normalize_hom(h).matrix);
    }
    m.blocks[label] = std::move(ms);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Reports

json to_json(const PrimeSpan& s) {
  json vecs = json::array();
  for (const auto& v : s.vectors) {
    json col = json::array();
    for (const auto& x : v) col.push_back(to_json(x));
    vecs.push_back(col);
  }
  return {{"vectors", vecs}, {"orders", s.orders}};
}

json to_json(const DescentCertificate& c) {
  json levels = json::array();
  for (const auto& l : c.levels) {
    json lifts = json::array(), corr = json::array();
    for (const auto& m : l.lifts) lifts.push_back(to_json(m));
    for (const auto& m : l.corrections) corr.push_back(to_json(m));
    levels.push_back({{"level", l.level},
                      {"basis", to_json(l.basis)},
                      {"prime_orders", l.prime_orders},
                      {"lifts", lifts},
                      {"corrections", corr},
                      {"new_generators", l.new_generators},
                      {"obstructions", l.obstructions},
                      {"comparison_iso", l.comparison_iso}});
  }
  return {{"levels", levels}, {"strict", c.strict}, {"cross_checked", c.cross_checked},
          {"agrees_with_direct", c.agrees_with_direct}};
}

json to_json(const InvariantsResult& r) {
  return {{"fixed_ring", to_json(r.entry.fixed)},
          {"module", to_json(r.module)},
          {"basis", to_json(r.basis)},
          {"relative_basis", to_json(r.relative_basis)},
          {"relative_exponents", exponents_to_json(r.entry.fixed, r.relative_exps)}};
}

}  // namespace devkit::io
