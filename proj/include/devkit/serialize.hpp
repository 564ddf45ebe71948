#pragma once

#include <json.hpp>

#include "devkit/coinduction.hpp"
#include "devkit/fontaine.hpp"

namespace devkit::io {

using nlohmann::json;

// Readers throw SchemaError on malformed input or unknown fields.

RingPtr ring_from_json(const json& j);
json to_json(const RingPtr& ring);

/// Coefficient array (t-degree major, X-degree minor) or a plain integer.
Element element_from_json(const RingPtr& ring, const json& j);
json to_json(const Element& x);

Matrix matrix_from_json(const RingPtr& ring, const json& j);
json to_json(const Matrix& m);

/// Integers, "inf" or "inf@N" for a free summand.
Exps exponents_from_json(const RingPtr& ring, const json& j);
json exponents_to_json(const RingPtr& ring, const Exps& e);

CanonicalModule module_from_json(const json& j);  // {"ring", "exponents"}
json to_json(const CanonicalModule& m);
PresentedModule presentation_from_json(const json& j);  // {"ring", "relations"}

RingEndo endo_from_json(const RingPtr& ring, const json& j);
json to_json(const RingEndo& e);

MonoidSpec monoid_from_json(const RingPtr& ring, const json& j);
json to_json(const MonoidSpec& m);

/// {"module", "monoid", "actions", "convention": "A-phi"}
SModule smodule_from_json(const json& j);
json to_json(const SModule& d);

/// {"module" (over Z/p^N), "frob"}
GaloisRep rep_from_json(const json& j);
json to_json(const GaloisRep& v);

SubmonoidData inclusion_from_json(const json& j);
json to_json(const SubmonoidData& d);

json to_json(const PrimeSpan& s);
json to_json(const DescentCertificate& c);
json to_json(const InvariantsResult& r);
json to_json(const CosetEnumeration& c);
json to_json(const CoinducedModule& m);
/// Reads the coinduced module written by to_json(CoinducedModule).
CoinducedModule coinduced_from_json(const json& j);

/// Throws SchemaError when `j` has keys outside `allowed`.
void require_keys(const json& j, std::initializer_list<const char*> allowed, const char* what);

}  // namespace devkit::io
