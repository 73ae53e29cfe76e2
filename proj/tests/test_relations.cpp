#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zk/algebra.hpp"
#include "zk/relations.hpp"

using namespace zk;

namespace {
TowerRef t24() { return Tower::make(2, 1, 2); }

CommPoly mono(TowerRef t, uint32_t n, std::vector<uint32_t> e, uint64_t c = 1) {
  return cp_make(t, n, {{e, c}});
}
}  // namespace

TEST_CASE("delta") {
  auto t = t24();
  // char 2: delta(L^2, a) = a^2, the linear part vanishes
  auto f = mono(t, 1, {2});
  auto d = delta(f, {3});
  CHECK(d == mono(t, 1, {0}, t->K()->mul(3, 3)));

  // delta(L, a) = a
  auto g = mono(t, 1, {1});
  CHECK(delta(g, {3}) == mono(t, 1, {0}, 3));

  // delta(L^q, a) = a^q by the freshman's dream
  auto h = mono(t, 1, {2});
  CHECK(delta(h, {2}) == mono(t, 1, {0}, t->qpow(2, 1)));

  // degree strictly drops for deg >= 1
  auto big = cp_make(t, 2, {{{3, 1}, 2}, {{1, 2}, 1}});
  auto db = delta(big, {2, 3});
  CHECK(db.total_degree() < big.total_degree());
}

TEST_CASE("nabla") {
  auto t = t24();
  // homogeneous of degree d: nabla = 0
  auto f = cp_make(t, 2, {{{2, 0}, 1}, {{1, 1}, 3}});
  CHECK(nabla(f, 2, 2).zero());

  // f = L1 + L1^2, alpha with alpha^2 != alpha, d = 2: (alpha - alpha^2) L1
  auto g = cp_make(t, 1, {{{1}, 1}, {{2}, 1}});
  auto r = nabla(g, 2, 2);
  uint64_t coef = t->K()->sub(2, t->K()->mul(2, 2));
  CHECK(r == mono(t, 1, {1}, coef));

  // a monomial is homogeneous: nabla = 0
  CHECK(nabla(mono(t, 2, {1, 1}), 2, 2).zero());
}

TEST_CASE("annihilator completeness and stabilization") {
  auto t = t24();
  // A = the graph {(a, a^2): a in GF(4)} as an F-space
  FSubspace A(t, 2);
  A.insert({1, 1});
  A.insert({2, 3});  // (w, w^2)
  auto mod = annihilator(A, 2);
  // kernel at level M equals A itself
  auto ker = kernel(mod, 2);
  CHECK(ker.same(A));
  // stabilization: bound E = M and E = M + 1 give the same kernels
  auto mod3 = annihilator(A, 3);
  CHECK(kernel(mod3, 2).same(ker));
  CHECK(kernel(mod3, 1).same(kernel(mod, 1)));
}

TEST_CASE("reduce_to_weak_frobenius") {
  auto t = t24();
  // A = GF(q) inside K0
  FSubspace A(t, 1);
  A.insert({1});
  // f = L^q - L
  auto f = cp_make(t, 1, {{{1}, 1}, {{2}, 1}});
  auto rels = reduce_to_weak_frobenius(f, A);
  REQUIRE(rels.size() == 1);
  CHECK(rels[0] == qp_make(t, 1, {{0, 0, 1}, {0, 1, 1}}));

  // f = (L2 - L1^2) * L1 on the graph of squaring over GF(4)
  FSubspace G(t, 2);
  G.insert({1, 1});
  G.insert({2, 3});
  auto graph_rel = cp_make(t, 2, {{{0, 1}, 1}, {{2, 0}, 1}});  // L2 - L1^2
  auto f2 = cp_mul(graph_rel, mono(t, 2, {1, 0}));
  DescentCertificate cert;
  auto rels2 = reduce_to_weak_frobenius(f2, G, 0, &cert);
  // the module of the output contains L2 - L1^q
  QPolynomial expect = qp_make(t, 2, {{0, 1, 1}, {1, 0, 1}});
  RelationModule as_mod{t, 2, rels2};
  CHECK(module_reduce_element(as_mod, expect).zero());
  CHECK(!cert.trail.empty());
  // descent terminates with strictly decreasing degree along delta steps
  for (size_t i = 1; i < cert.trail.size(); ++i)
    CHECK(cert.trail[i].total_degree() <= cert.trail[i - 1].total_degree());

  // f = 0 needs no certificate relations
  CHECK(reduce_to_weak_frobenius(cp_zero(t, 2), G).empty());

  // a non-relation is rejected
  CHECK_THROWS_AS(reduce_to_weak_frobenius(mono(t, 2, {1, 0}), G, 0, nullptr),
                  NotARelation);

  // soundness: every relation vanishes on A; f vanishes on the rational
  // kernel of the output at levels 1 and 2
  RelationModule mod{t, 2, rels2};
  for (uint32_t m : {1u, 2u}) {
    auto pts = kernel(mod, m).enumerate();
    // points live in GF(q^m) embedded in K0 when m divides M
    if (m == 2)
      for (auto& v : pts) CHECK(cp_eval(f2, v) == 0);
  }
}

TEST_CASE("finite generation: annihilator stabilizes in the phi-degree bound") {
  auto t = Tower::make(2, 1, 3);
  Rng rng(11);
  for (int iter = 0; iter < 5; ++iter) {
    FSubspace A(t, 2);
    size_t k = 1 + rng.below(3);
    for (size_t i = 0; i < k; ++i)
      A.insert({rng.below(8), rng.below(8)});
    uint32_t E = t->M() * A.ambient_n();
    auto m1 = annihilator(A, E);
    auto m2 = annihilator(A, E + 1);
    for (uint32_t m : {1u, 3u}) CHECK(kernel(m1, m).same(kernel(m2, m)));
  }
}

TEST_CASE("frobenius_type_normalize") {
  auto t = t24();
  FSubspace A(t, 2);
  A.insert({1, 1});

  // L1^2 - L2^4 -> L1 - L2^2 after one root step
  auto r1 = frobenius_type_normalize(
      cp_make(t, 2, {{{2, 0}, 1}, {{0, 4}, 1}}), A);
  CHECK(r1 == FrobRelation{FrobRelation::CrossPower, 0, 1, 2});

  // L1^q - L1 -> L1 - L1^q (type ii, order normalization)
  auto r2 = frobenius_type_normalize(cp_make(t, 2, {{{2, 0}, 1}, {{1, 0}, 1}}),
                                     A);
  CHECK(r2 == FrobRelation{FrobRelation::SelfPower, 0, 0, 2});

  // L1 - L2^3 with a twist prime to q degenerates to the single-variable
  // relation
  auto r3 = frobenius_type_normalize(cp_make(t, 2, {{{1, 0}, 1}, {{0, 3}, 1}}),
                                     A);
  CHECK(r3 == FrobRelation{FrobRelation::SingleVar, 0, 0, 1});

  // materialized forms evaluate as expected
  auto cp = r1.as_commpoly(t, 2);
  CHECK(cp_eval(cp, {3, t->K()->frobenius_inv(3, 1)}) == 0);
}

TEST_CASE("monoid_relations") {
  auto t = t24();
  const auto& K = *t->K();
  // S = (K0 x {0}) u ({0} x K0): exactly the vanishing product L1 L2
  std::vector<std::vector<uint64_t>> S;
  for (uint64_t a = 0; a < 4; ++a) {
    S.push_back({a, 0});
    S.push_back({0, a});
  }
  auto rel = monoid_relations(t, S, /*without_unit=*/true);
  REQUIRE(rel.zero_products.size() == 1);
  CHECK(rel.zero_products[0] == std::vector<uint32_t>{0, 1});
  CHECK(rel.binomials.empty());

  // diagonal: exactly L1 = L2
  std::vector<std::vector<uint64_t>> D;
  for (uint64_t a = 0; a < 4; ++a) D.push_back({a, a});
  auto rd = monoid_relations(t, D);
  CHECK(rd.zero_products.empty());
  REQUIRE(rd.binomials.size() == 1);
  CHECK(rd.binomials[0].first == std::vector<uint32_t>{0, 1});
  CHECK(rd.binomials[0].second == std::vector<uint32_t>{1, 0});

  // S = {(a, a^2): a in GF(4)*}: the squaring relation is among the output,
  // exponents bounded by the unit group exponent
  std::vector<std::vector<uint64_t>> G = {{1, 1}, {2, 3}, {3, 2}};
  auto rg = monoid_relations(t, G);
  CHECK(rg.zero_products.empty());
  bool squaring = false;
  for (auto& [u, v] : rg.binomials) {
    // L2 = L1^2 or the congruence-equivalent L1 = L2^2
    squaring |= (u == std::vector<uint32_t>{2, 0} && v == std::vector<uint32_t>{0, 1});
    squaring |= (u == std::vector<uint32_t>{0, 1} && v == std::vector<uint32_t>{2, 0});
    squaring |= (u == std::vector<uint32_t>{1, 0} && v == std::vector<uint32_t>{0, 2});
    squaring |= (u == std::vector<uint32_t>{0, 2} && v == std::vector<uint32_t>{1, 0});
  }
  CHECK(squaring);

  // every output relation is identically satisfied on S, and the zero set
  // of the output contains S
  for (auto& f : rg.as_polys(t, 2))
    for (auto& s : G) CHECK(cp_eval(f, s) == 0);
  for (auto& f : rel.as_polys(t, 2))
    for (auto& s : S) CHECK(cp_eval(f, s) == 0);

  // non-monoid input is rejected
  std::vector<std::vector<uint64_t>> bad = {{1, 1}, {2, 2}};
  CHECK_THROWS_AS(monoid_relations(t, bad), NotAMonoid);
  (void)K;
}

TEST_CASE("identity_to_relations") {
  auto t = t24();
  // T2(F): basis e11, e12, e22
  auto e = [&](uint32_t i, uint32_t j) {
    Mat m(t->K(), 2, 2);
    m.at(i, j) = 1;
    return m;
  };
  auto A = close_algebra_gens(t, 2, {e(0, 0), e(0, 1), e(1, 1)});
  auto sc_f = structure_constants(A);
  // lift structure constants into K0
  std::vector sc(A.dimF(), std::vector(A.dimF(), std::vector<uint64_t>(A.dimF())));
  for (size_t i = 0; i < A.dimF(); ++i)
    for (size_t j = 0; j < A.dimF(); ++j)
      for (size_t k = 0; k < A.dimF(); ++k)
        sc[i][j][k] = t->emb().to_sup(sc_f[i][j][k]);

  auto comm = parse_ncpoly("xy - yx", 2);
  std::vector<uint64_t> w2 = {1, 0, 1};  // witness = identity matrix coords
  auto hs = identity_to_relations(t, sc, comm, {w2});
  REQUIRE(hs.size() == 3);
  // [b, 1] = 0: all coordinate polynomials vanish
  for (auto& h : hs) CHECK(h.zero());

  // the displayed formula: h_k = sum alpha_ijk (c_j L_i - c_i L_j)
  std::vector<uint64_t> w3 = {0, 1, 0};  // witness = e12
  auto hs2 = identity_to_relations(t, sc, comm, {w3});
  const auto& K = *t->K();
  for (size_t k = 0; k < 3; ++k) {
    CommPoly expect = cp_zero(t, 3);
    for (uint32_t i = 0; i < 3; ++i)
      for (uint32_t j = 0; j < 3; ++j) {
        if (!sc[i][j][k]) continue;
        std::vector<uint32_t> ei(3, 0), ej(3, 0);
        ei[i] = 1;
        ej[j] = 1;
        expect = cp_add(
            expect, cp_make(t, 3, {{ei, K.mul(sc[i][j][k], w3[j])}}));
        expect = cp_add(
            expect,
            cp_make(t, 3, {{ej, K.neg(K.mul(sc[i][j][k], w3[i]))}}));
      }
    CHECK(hs2[k] == expect);
  }

  // f = x1: coordinate polynomials are the coordinates themselves
  auto id1 = parse_ncpoly("x", 2);
  auto hs3 = identity_to_relations(t, sc, id1, {});
  for (uint32_t k = 0; k < 3; ++k) {
    std::vector<uint32_t> ek(3, 0);
    ek[k] = 1;
    CHECK(hs3[k] == cp_make(t, 3, {{ek, 1}}));
  }

  // commutative algebra: all coordinate polynomials of a commutator vanish
  auto B = close_algebra_gens(t, 1, {Mat::identity(t->K(), 1),
                                     Mat::identity(t->K(), 1).scaled(2)});
  auto scB_f = structure_constants(B);
  std::vector scB(B.dimF(), std::vector(B.dimF(), std::vector<uint64_t>(B.dimF())));
  for (size_t i = 0; i < B.dimF(); ++i)
    for (size_t j = 0; j < B.dimF(); ++j)
      for (size_t k = 0; k < B.dimF(); ++k)
        scB[i][j][k] = t->emb().to_sup(scB_f[i][j][k]);
  auto hsB = identity_to_relations(t, scB, comm, {{1, 1}});
  for (auto& h : hsB) CHECK(h.zero());

  // broken structure constants are rejected
  auto bad = sc;
  bad[0][1][2] = 3;
  CHECK_THROWS_AS(identity_to_relations(t, bad, comm, {w2}), NonAssociative);
}
