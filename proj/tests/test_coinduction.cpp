#include <doctest.h>

#include <array>

#include "devkit/selftest.hpp"
#include "oracles.hpp"

using namespace devkit;

namespace {

Matrix one_by_one(const Element& x) {
  Matrix m(x.ring(), 1, 1);
  m.at(0, 0) = x;
  return m;
}

// S_3 as permutations of {0,1,2} in lexicographic order; element 0 is the identity.
std::vector<std::vector<int>> s3_table() {
  std::vector<std::array<int, 3>> perms;
  std::array<int, 3> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      std::array<int, 3> c;
      for (int k = 0; k < 3; ++k) c[k] = perms[i][perms[j][k]];
      t[i][j] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return t;
}

MonoidSpec frob2() { return {{{"g1", RingEndo::field_frobenius(2)}}, {}, {}}; }

}  // namespace

TEST_CASE("enumerate_cosets: listed examples") {
  auto c1 = enumerate_cosets(SubmonoidData::numeric({2}));
  CHECK(c1.reps == std::vector<std::vector<int>>{{0}, {1}});
  CHECK(c1.cofinality_bound >= 2);
  auto c2 = enumerate_cosets(SubmonoidData::numeric({2, 2}));
  CHECK(c2.reps.size() == 4);
  for (const auto& rel : c2.l_relations)
    for (int i = 0; i < 2; ++i) CHECK(rel[0][i] + rel[2][i] == rel[1][i] + rel[3][i]);
  auto c3 = enumerate_cosets(SubmonoidData::group(s3_table(), {0, 3, 4}, {{"a", 1}, {"b", 3}}, {{"c", 3}}));
  CHECK(c3.reps.size() == 2);
  CHECK_THROWS_AS(enumerate_cosets(SubmonoidData::numeric({7})), Error);
  CHECK_THROWS_AS(enumerate_cosets(SubmonoidData::numeric({2, 2, 2, 2})), Error);
  // Not a subgroup: {0, 1, 3} is not closed.
  CHECK_THROWS_AS(enumerate_cosets(SubmonoidData::group(s3_table(), {0, 1, 3}, {{"a", 1}}, {{"c", 1}})), Error);
}

TEST_CASE("coinduce_ring: listed examples") {
  auto F4 = Ring::finite_field(2, 2);
  auto cr = coinduce_ring(F4, frob2(), SubmonoidData::numeric({2}));
  CHECK(cr.size() == 2);
  for (const auto& a : oracle::all_elements(F4))
    for (const auto& b : oracle::all_elements(F4)) {
      auto out = cr.act("e1", {a, b});
      CHECK(out[0] == b);
      CHECK(out[1] == apply_endo(RingEndo::field_frobenius(2), a));
    }

  auto F2 = Ring::finite_field(2, 1);
  auto z2 = SubmonoidData::group({{0, 1}, {1, 0}}, {0}, {{"u", 1}}, {});
  auto sw = coinduce_ring(F2, MonoidSpec{}, z2);
  CHECK(sw.size() == 2);
  auto o = sw.act("u", {F2->one(), F2->zero()});
  CHECK(o[0].is_zero());
  CHECK(o[1] == F2->one());

  auto whole = SubmonoidData::group({{0, 1}, {1, 0}}, {0, 1}, {{"u", 1}}, {{"v", 1}});
  MonoidSpec triv{{{"v", RingEndo::identity()}}, {}, {}};
  CHECK(coinduce_ring(F2, triv, whole).size() == 1);

  MonoidSpec wrong{{{"h1", RingEndo::field_frobenius(2)}}, {}, {}};
  CHECK_THROWS_AS(coinduce_ring(F4, wrong, SubmonoidData::numeric({2})), Error);
}

TEST_CASE("coinduce_module: listed examples") {
  auto F4 = Ring::finite_field(2, 2);
  auto D = make_smodule(CanonicalModule::free(F4, 1), frob2(), {{"g1", one_by_one(F4->t())}});
  auto cm = coinduce_module(D, SubmonoidData::numeric({2}));
  REQUIRE(cm.blocks.at("e1").size() == 2);
  CHECK(cm.blocks.at("e1")[0] == one_by_one(F4->one()));
  CHECK(cm.blocks.at("e1")[1] == one_by_one(F4->t()));
  // e1 twice is g1: (e1 e1 m)_0 = A·Frob²(m_0).
  std::vector<std::vector<Element>> m{{F4->t()}, {F4->one()}};
  auto twice = cm.act("e1", cm.act("e1", m));
  CHECK(twice[0][0] == F4->t() * apply_endo(RingEndo::field_frobenius(2), F4->t()));

  auto Z = coinduce_module(make_smodule({F4, {}}, frob2(), {{"g1", Matrix(F4, 0, 0)}}), SubmonoidData::numeric({2}));
  CHECK(Z.exps().empty());

  auto U = coinduce_module(unit_smodule(F4, frob2()), SubmonoidData::numeric({2}));
  CHECK(U.exps() == Exps{1, 1});
  for (const auto& a : oracle::all_elements(F4)) {
    auto want = U.ring.act("e1", {a, F4->one()});
    auto got = U.act("e1", {{a}, {F4->one()}});
    CHECK(got[0][0] == want[0]);
    CHECK(got[1][0] == want[1]);
  }
}

TEST_CASE("check_tensor_coinduction: listed examples") {
  auto F4 = Ring::finite_field(2, 2);
  MonoidSpec s1{{{"e1", RingEndo::field_frobenius(1)}}, {}, {}};
  auto DS = make_smodule(CanonicalModule::free(F4, 1), s1, {{"e1", one_by_one(F4->t())}});
  auto v = check_tensor_coinduction(DS, SubmonoidData::numeric({2}));
  CHECK(v.iso);
  CHECK(v.equivariant);
  CHECK(check_tensor_coinduction(unit_smodule(F4, s1), SubmonoidData::numeric({2})).iso);

  auto F2 = Ring::finite_field(2, 1);
  auto z2 = SubmonoidData::group({{0, 1}, {1, 0}}, {0}, {{"u", 1}}, {});
  MonoidSpec su{{{"u", RingEndo::identity()}}, {}, {}};
  auto DG = make_smodule(CanonicalModule::free(F2, 1), su, {{"u", one_by_one(F2->one())}});
  CHECK(check_tensor_coinduction(DG, z2).iso);

  auto Z8 = Ring::prime_power(2, 3);
  MonoidSpec sz{{{"e1", RingEndo::identity()}}, {}, {}};
  auto bad = make_smodule(CanonicalModule::free(Z8, 1), sz, {{"e1", one_by_one(Z8->from_int(2))}});
  try {
    check_tensor_coinduction(bad, SubmonoidData::numeric({2}));
    FAIL("expected NotEtale");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotEtale);
  }
}

TEST_CASE("invariants_bijection: listed examples against enumeration") {
  auto data = SubmonoidData::numeric({2});
  for (int deg : {2, 4}) {
    auto F = Ring::finite_field(2, deg);
    auto b = invariants_bijection(unit_smodule(F, frob2()), data);
    CHECK(b.bijective);
    // Pairs (a, b) fixed by (a, b) -> (b, Frob²(a)), and x with Frob²(x) = x.
    std::size_t pairs = 0, fixed = 0;
    const auto els = oracle::all_elements(F);
    for (const auto& x : els) {
      const Element y = apply_endo(RingEndo::field_frobenius(2), x);
      fixed += y == x;
      for (const auto& z : els) pairs += (z == x && y == z);
    }
    CHECK(b.coinduced_fixed == pairs);
    CHECK(b.fixed == fixed);
    CHECK(fixed == 4u);  // F_4 in both cases
  }
  auto F2 = Ring::finite_field(2, 1);
  auto whole = SubmonoidData::group({{0, 1}, {1, 0}}, {0, 1}, {{"u", 1}}, {{"v", 1}});
  MonoidSpec triv{{{"v", RingEndo::identity()}}, {}, {}};
  auto bt = invariants_bijection(unit_smodule(F2, triv), whole);
  CHECK(bt.bijective);
  CHECK(bt.fixed == 2);
}

TEST_CASE("descend_from_coinduced: listed examples") {
  auto F4 = Ring::finite_field(2, 2);
  auto D = make_smodule(CanonicalModule::free(F4, 1), frob2(), {{"g1", one_by_one(F4->t())}});
  auto ds = descend_from_coinduced(coinduce_module(D, SubmonoidData::numeric({2})));
  CHECK(ds.module.action("g1") == D.action("g1"));
  CHECK(ds.witness_iso);
  CHECK(ds.witness_equivariant);

  auto du = descend_from_coinduced(coinduce_module(unit_smodule(F4, frob2()), SubmonoidData::numeric({2})));
  CHECK(du.module.action("g1") == one_by_one(F4->one()));

  auto F2 = Ring::finite_field(2, 1);
  auto z2 = SubmonoidData::group({{0, 1}, {1, 0}}, {0}, {{"u", 1}}, {});
  auto cm = coinduce_module(make_smodule(CanonicalModule::free(F2, 2), MonoidSpec{}, {}), z2);
  CHECK(cm.exps() == Exps{1, 1, 1, 1});
  auto d2 = descend_from_coinduced(cm);
  CHECK(d2.module.rank() == 2);
  CHECK(d2.witness_iso);
}

TEST_CASE("S3 over A3 with odd permutations acting by Frobenius") {
  auto F4 = Ring::finite_field(2, 2);
  auto sd = SubmonoidData::group(s3_table(), {0, 3, 4}, {{"a", 1}, {"b", 3}}, {{"c", 3}});
  MonoidSpec sg{{{"a", RingEndo::field_frobenius(1)}, {"b", RingEndo::identity()}}, {}, {}};
  Matrix I = Matrix::identity(F4, 1);
  auto DG = make_smodule(CanonicalModule::free(F4, 1), sg, {{"a", I}, {"b", I}});
  auto tg = check_tensor_coinduction(DG, sd);
  CHECK(tg.iso);
  CHECK(tg.equivariant);
  auto rg = restrict_to_submonoid(DG, sd);
  auto bg = invariants_bijection(rg, sd);
  CHECK(bg.bijective);
  CHECK(bg.fixed == 4);
  auto back = descend_from_coinduced(coinduce_module(rg, sd));
  CHECK(back.module.action("c") == rg.action("c"));
  CHECK(back.witness_iso);
}

TEST_CASE("relation violations are reported") {
  auto F4 = Ring::finite_field(2, 2);
  MonoidSpec s2{{{"e1", RingEndo::field_frobenius(1)}, {"e2", RingEndo::identity()}}, {}, {}};
  Matrix A = one_by_one(F4->t());
  auto bad = make_smodule(CanonicalModule::free(F4, 1), s2, {{"e1", A}, {"e2", A}});
  try {
    check_tensor_coinduction(bad, SubmonoidData::numeric({2, 2}));
    FAIL("expected ActionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ActionMismatch);
  }
}

TEST_CASE("property: coinduce, descend, coinduce is stable") {
  std::uint64_t st = 55;
  auto F4 = Ring::finite_field(2, 2);
  for (auto moduli : std::vector<std::vector<int>>{{2}, {3}, {2, 2}}) {
    auto data = SubmonoidData::numeric(moduli);
    MonoidSpec sub;
    for (std::size_t i = 0; i < moduli.size(); ++i)
      sub.generators.push_back({"g" + std::to_string(i + 1), i == 0 ? RingEndo::field_frobenius(moduli[0]) : RingEndo::identity()});
    for (std::size_t i = 0; i < moduli.size(); ++i)
      for (std::size_t j = i + 1; j < moduli.size(); ++j)
        sub.commuting_pairs.push_back({sub.generators[i].label, sub.generators[j].label});
    for (int k = 0; k < 6; ++k) {
      std::map<std::string, Matrix> acts;
      // Commuting generators: the first is random, the rest are identity.
      for (std::size_t i = 0; i < moduli.size(); ++i)
        acts[sub.generators[i].label] = i == 0 ? gen::random_matrix(F4, 1, 1, st) : Matrix::identity(F4, 1);
      auto D = make_smodule(CanonicalModule::free(F4, 1), sub, acts);
      auto cm = coinduce_module(D, data);
      auto ds = descend_from_coinduced(cm);
      CHECK(ds.witness_iso);
      CHECK(ds.witness_equivariant);
      for (const auto& g : sub.generators) CHECK(ds.module.action(g.label) == D.action(g.label));
      auto again = coinduce_module(ds.module, data);
      CHECK(again.blocks == cm.blocks);
      CHECK(invariants_bijection(D, data).bijective);
    }
  }
}
