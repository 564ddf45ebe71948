#pragma once

#include <json.hpp>

#include "devkit/coinduction.hpp"
#include "devkit/fontaine.hpp"

namespace devkit {

namespace gen {

std::uint64_t next(std::uint64_t& st);
int uniform(std::uint64_t& st, int lo, int hi);  // inclusive
Matrix random_matrix(const RingPtr& ring, int rows, int cols, std::uint64_t& st);
/// Exponents in 1..infinity, sorted descending.
Exps random_exps(const RingPtr& ring, int rank, std::uint64_t& st);
/// A random matrix satisfying the torsion column condition for src -> tgt.
Matrix random_hom(const CanonicalModule& src, const CanonicalModule& tgt, std::uint64_t& st);
SModule random_smodule(const CanonicalModule& base, const MonoidSpec& monoid, std::uint64_t& st);
/// Retries until the module is étale (at most `tries` draws; nullopt otherwise).
std::optional<SModule> random_etale(const CanonicalModule& base, const MonoidSpec& monoid, std::uint64_t& st,
                                    int tries = 64);

}  // namespace gen

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::vector<std::string> notes;  // first few failures
};

struct SelftestReport {
  std::uint64_t seed = 0;
  std::string tier;
  std::vector<SuiteResult> suites;

  bool ok() const;
  nlohmann::json to_json() const;
};

/// Tiers: "empty", "small", "medium". Deterministic in (seed, tier).
SelftestReport run_selftest(std::uint64_t seed, const std::string& tier);

}  // namespace devkit
