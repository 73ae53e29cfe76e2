#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "zk/oracle.hpp"
#include "zk/pi.hpp"
#include "zk/generic.hpp"
#include "zk/structure.hpp"

using namespace zk;

namespace {

TowerRef t24() { return Tower::make(2, 1, 2); }
TowerRef t23() { return Tower::make(2, 1, 3); }

// parametrized pattern cell: coeff * param^(q^e) at entry (r, c)
struct Cell {
  uint32_t param, r, c, e;
  uint64_t coeff = 1;
};

// spanning matrices of the F-span of a pattern (params range over K0)
AlgebraPresentation from_pattern(TowerRef t, uint32_t n, uint32_t nparams,
                                 const std::vector<Cell>& cells) {
  std::vector<Mat> gens;
  const auto& K = *t->K();
  for (uint32_t pm = 0; pm < nparams; ++pm)
    for (uint32_t b = 0; b < t->M(); ++b) {
      uint64_t val = K.pow(K.gen(), b);
      Mat m(t->K(), n, n);
      for (auto& cl : cells)
        if (cl.param == pm)
          m.at(cl.r, cl.c) =
              K.add(m.at(cl.r, cl.c), K.mul(cl.coeff, t->qpow(val, cl.e)));
      gens.push_back(m);
    }
  bool closed = false;
  auto A = algebra_from_span(t, n, gens, &closed);
  REQUIRE(closed);
  return A;
}

// {[[a, b], [0, a]]}: the dual numbers
AlgebraPresentation dual_numbers(TowerRef t) {
  return from_pattern(t, 2, 2, {{0, 0, 0, 0}, {0, 1, 1, 0}, {1, 0, 1, 0}});
}

// 3x3: (1,1) = alpha, (2,2) = beta, (1,3) = x, (2,3) = y, (3,3) = alpha^q
AlgebraPresentation glued_3x3(TowerRef t) {
  return from_pattern(t, 3, 4,
                      {{0, 0, 0, 0},
                       {0, 2, 2, 1},
                       {1, 1, 1, 0},
                       {2, 0, 2, 0},
                       {3, 1, 2, 0}});
}

// 4x4 with diagonal (alpha, alpha^q, alpha, alpha^q) and a full strictly
// upper radical
AlgebraPresentation glued_4x4(TowerRef t) {
  std::vector<Cell> cells = {{0, 0, 0, 0}, {0, 1, 1, 1}, {0, 2, 2, 0},
                             {0, 3, 3, 1}};
  uint32_t pm = 1;
  for (uint32_t r = 0; r < 4; ++r)
    for (uint32_t c = r + 1; c < 4; ++c) cells.push_back({pm++, r, c, 0});
  return from_pattern(t, 4, pm, cells);
}

// the six-block example: diagonal (a, a, a^q, a, a^q, a) with glued radical
// entries x, y, x' and free stars
AlgebraPresentation six_blocks(TowerRef t, uint64_t alpha, uint64_t alpha2) {
  const auto& K = *t->K();
  std::vector<Cell> cells;
  // diagonal in one parameter
  cells.push_back({0, 0, 0, 0});
  cells.push_back({0, 1, 1, 0});
  cells.push_back({0, 2, 2, 1});
  cells.push_back({0, 3, 3, 0});
  cells.push_back({0, 4, 4, 1});
  cells.push_back({0, 5, 5, 0});
  // glued radical parameters: x at (2,3) and alpha x at (4,5)
  cells.push_back({1, 1, 2, 0});
  cells.push_back({1, 3, 4, 0, alpha});
  // y at (2,4) and alpha alpha' y at (4,6)
  cells.push_back({2, 1, 3, 0});
  cells.push_back({2, 3, 5, 0, K.mul(alpha, alpha2)});
  // x' at (3,4) and alpha' x' at (5,6)
  cells.push_back({3, 2, 3, 0});
  cells.push_back({3, 4, 5, 0, alpha2});
  // free stars
  uint32_t pm = 4;
  for (auto [r, c] : std::vector<std::pair<uint32_t, uint32_t>>{
           {0, 2}, {0, 3}, {0, 4}, {0, 5}, {1, 4}, {1, 5}, {2, 4}, {2, 5}})
    cells.push_back({pm++, r, c, 0});
  return from_pattern(t, 6, pm, cells);
}

std::set<std::vector<uint32_t>> member_set(const EquivClass& c) {
  return {c.members.begin(), c.members.end()};
}

}  // namespace

TEST_CASE("radical basics") {
  auto t = t24();
  auto e = [&](uint32_t i, uint32_t j, uint64_t c = 1) {
    Mat m(t->K(), 2, 2);
    m.at(i, j) = c;
    return m;
  };
  // upper triangular 2x2 over GF(2): J = span{e12}
  auto T2 = close_algebra_gens(t, 2, {e(0, 0), e(1, 1), e(0, 1)});
  auto J = radical(T2);
  REQUIRE(J.size() == 1);
  CHECK(J[0] == e(0, 1));

  // M2(GF(2)) is simple
  auto M2 = close_algebra_gens(t, 2, {e(0, 0), e(0, 1), e(1, 0), e(1, 1)});
  CHECK(radical(M2).empty());

  // scalars c I_2 over GF(4): semisimple even though the plain trace form
  // is identically zero
  auto scal = close_algebra_gens(
      t, 2, {Mat::identity(t->K(), 2), Mat::identity(t->K(), 2).scaled(2)});
  CHECK(radical(scal).empty());

  // dual numbers: J is the K0-line above the glued diagonal
  auto dn = dual_numbers(t);
  CHECK(radical(dn).size() == 2);
}

TEST_CASE("radical matches the subspace-enumeration oracle") {
  for (auto [p, qe] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 1}, {3, 1}}) {
    auto t = Tower::make(p, qe, 2);
    Rng rng(2024 + p);
    int done = 0;
    while (done < 25) {
      auto A = random_algebra(t, 3, 5, rng);
      auto fast = radical(A);
      auto slow = radical_oracle(A);
      FSubspace f1(t, 9), f2(t, 9);
      for (auto& m : fast) f1.insert(mat_flatten(m));
      for (auto& m : slow) f2.insert(mat_flatten(m));
      CHECK(f1.same(f2));
      ++done;
    }
  }
}

TEST_CASE("wedderburn_malcev on the dual numbers") {
  auto t = t24();
  auto wd = wedderburn_malcev(dual_numbers(t));
  CHECK(wd.nu == 2);
  CHECK(wd.S.size() == 2);   // S isomorphic to K0 on the glued diagonal
  CHECK(wd.J.size() == 2);   // J = K0 e12
  REQUIRE(wd.factors.size() == 1);
  CHECK(wd.factors[0].n_u == 1);
  CHECK(wd.factors[0].d_u == 2);
  // complement elements have equal diagonal entries
  for (auto& s : wd.S) CHECK(s.at(0, 0) == s.at(1, 1));
}

TEST_CASE("wedderburn_malcev on a semisimple glued field") {
  auto t = t24();
  // {diag(a, a^q)}: a field glued across two blocks
  std::vector<Mat> gens;
  for (uint32_t b = 0; b < 2; ++b) {
    uint64_t val = t->K()->pow(t->K()->gen(), b);
    Mat m(t->K(), 2, 2);
    m.at(0, 0) = val;
    m.at(1, 1) = t->qpow(val, 1);
    gens.push_back(m);
  }
  auto A = close_algebra_gens(t, 2, gens);
  auto wd = wedderburn_malcev(A);
  CHECK(wd.J.empty());
  CHECK(wd.nu == 1);
  REQUIRE(wd.factors.size() == 1);
  CHECK(wd.factors[0].d_u == 2);
  CHECK(wd.S.size() == 2);
}

TEST_CASE("wedderburn_malcev on a matrix algebra: matrix units recovered") {
  auto t = t24();
  auto e = [&](uint32_t i, uint32_t j) {
    Mat m(t->K(), 2, 2);
    m.at(i, j) = 1;
    return m;
  };
  auto M2 = close_algebra_gens(t, 2, {e(0, 0), e(0, 1), e(1, 0), e(1, 1)});
  auto wd = wedderburn_malcev(M2);
  REQUIRE(wd.factors.size() == 1);
  CHECK(wd.factors[0].n_u == 2);
  CHECK(wd.factors[0].d_u == 1);
  auto& U = wd.factors[0].units;
  for (uint32_t i = 0; i < 2; ++i)
    for (uint32_t j = 0; j < 2; ++j)
      for (uint32_t k = 0; k < 2; ++k)
        for (uint32_t l = 0; l < 2; ++l) {
          Mat prod = U[i][j] * U[k][l];
          if (j == k)
            CHECK(prod == U[i][l]);
          else
            CHECK(prod.is_zero());
        }
}

TEST_CASE("block form of the first 3x3 example: columns 2 and 3 swap") {
  auto t = t24();
  // entries (1,1), (1,2), (2,2), (3,2), (3,3) over K0
  auto A = from_pattern(t, 3, 5,
                        {{0, 0, 0, 0},
                         {1, 0, 1, 0},
                         {2, 1, 1, 0},
                         {3, 2, 1, 0},
                         {4, 2, 2, 0}});
  auto BF = block_form(A);
  CHECK(BF.m == 3);
  // the radical sits above the diagonal after conjugation; block order is
  // (1, 3, 2) as a permutation of the original diagonal
  CHECK(BF.block_size == std::vector<uint32_t>{1, 1, 1});
  std::vector<size_t> lead;
  for (uint32_t c = 0; c < 3; ++c) {
    for (uint32_t r = 0; r < 3; ++r)
      if (BF.U.at(r, c)) {
        lead.push_back(r);
        break;
      }
  }
  CHECK(lead == std::vector<size_t>{0, 2, 1});
}

TEST_CASE("block form of the glued 3x3: partition {1,3} {2}") {
  auto t = t24();
  auto BF = block_form(glued_3x3(t));
  CHECK(BF.m == 3);
  CHECK(BF.k == 2);
  auto T = BF.gluing_partition();
  std::set<std::set<uint32_t>> parts;
  for (auto& Tu : T) parts.insert(std::set<uint32_t>(Tu.begin(), Tu.end()));
  CHECK(parts.count({0, 2}) == 1);
  CHECK(parts.count({1}) == 1);
  // the glued component splits into two identical-gluing classes
  for (uint32_t u = 0; u < 2; ++u) {
    if (T[u].size() == 2) {
      CHECK(BF.exp_between(T[u][0], T[u][1]) == 1);
      CHECK(BF.identical_partition()[u].size() == 2);
    }
  }
}

TEST_CASE("block form of the 4x4 example and its exponent matrix") {
  auto t = t23();
  auto BF = block_form(glued_4x4(t));
  REQUIRE(BF.m == 4);
  REQUIRE(BF.k == 1);
  CHECK(BF.comp_d[0] == 3);
  CHECK(BF.block_exp == std::vector<uint32_t>{0, 1, 0, 1});
  // exponent matrix (0 1 0 1 / . 0 -1 0 / . . 0 1 / . . . 0), entries mod 3
  uint32_t d = BF.comp_d[0];
  auto expm = [&](uint32_t r, uint32_t s) { return BF.exp_between(r, s); };
  CHECK(expm(0, 1) == 1);
  CHECK(expm(0, 2) == 0);
  CHECK(expm(0, 3) == 1);
  CHECK(expm(1, 2) == (d - 1) % d);  // -1
  CHECK(expm(1, 3) == 0);
  CHECK(expm(2, 3) == 1);
  // antisymmetry and additivity
  for (uint32_t r = 0; r < 4; ++r)
    for (uint32_t s = 0; s < 4; ++s) {
      CHECK((expm(r, s) + expm(s, r)) % d == 0);
      for (uint32_t w = 0; w < 4; ++w)
        CHECK((expm(r, w)) == (expm(r, s) + expm(s, w)) % d);
    }
  // identical gluing: {1,3} and {2,4} in 1-based labels
  auto ip = BF.identical_partition()[0];
  REQUIRE(ip.size() == 2);
  CHECK(ip[0] == std::vector<uint32_t>{0, 2});
  CHECK(ip[1] == std::vector<uint32_t>{1, 3});
}

TEST_CASE("equivalence classes of the 4x4 example") {
  auto t = t23();
  auto BF = block_form(glued_4x4(t));
  auto classes = equiv_classes(BF, {0, 0});
  REQUIRE(classes.size() == 3);
  std::set<std::set<std::vector<uint32_t>>> sets;
  for (auto& c : classes)
    sets.insert(std::set<std::vector<uint32_t>>(c.members.begin(),
                                                c.members.end()));
  // {(1,2),(1,4),(3,4)}, {(2,3)}, and the 6-element exponent-0 class
  CHECK(sets.count({{0, 1}, {0, 3}, {2, 3}}) == 1);
  CHECK(sets.count({{1, 2}}) == 1);
  CHECK(sets.count({{0, 0}, {0, 2}, {1, 1}, {1, 3}, {2, 2}, {3, 3}}) == 1);
  // the classes partition T_(u,u)
  size_t total = 0;
  for (auto& c : classes) total += c.members.size();
  CHECK(total == 10);
}

TEST_CASE("the six-block example") {
  auto t = t23();
  const auto& K = *t->K();
  uint64_t alpha = 2, alpha2 = 4;  // nonzero constants
  auto A = six_blocks(t, alpha, alpha2);
  auto BF = block_form(A);
  REQUIRE(BF.m == 6);
  REQUIRE(BF.k == 1);
  CHECK(BF.block_exp == std::vector<uint32_t>{0, 0, 1, 0, 1, 0});
  // identical gluing: {1,2,4,6} u {3,5} in 1-based labels
  auto ip = BF.identical_partition()[0];
  REQUIRE(ip.size() == 2);
  CHECK(ip[0] == std::vector<uint32_t>{0, 1, 3, 5});
  CHECK(ip[1] == std::vector<uint32_t>{2, 4});

  // length-2 classes: gamma_1 (5), gamma_-1 (3), gamma_0 (13)
  auto classes = equiv_classes(BF, {0, 0});
  REQUIRE(classes.size() == 3);
  std::map<size_t, std::set<std::vector<uint32_t>>> by_size;
  for (auto& c : classes) by_size[c.members.size()] = member_set(c);
  REQUIRE(by_size.count(5));
  REQUIRE(by_size.count(3));
  REQUIRE(by_size.count(13));
  CHECK(by_size[5] ==
        std::set<std::vector<uint32_t>>(
            {{0, 2}, {0, 4}, {1, 2}, {1, 4}, {3, 4}}));
  CHECK(by_size[3] ==
        std::set<std::vector<uint32_t>>({{2, 3}, {2, 5}, {4, 5}}));

  // exactly 7 length-3 classes
  auto classes3 = equiv_classes(BF, {0, 0, 0});
  CHECK(classes3.size() == 7);
  size_t total = 0;
  for (auto& c : classes3) total += c.members.size();
  CHECK(total == 56);  // multiset triples over 6 blocks

  // composition: gamma_-1 o gamma_1 contains the class of (3,4,5)-type
  // triples whose component is K e35
  const EquivClass* g1 = nullptr;
  const EquivClass* gm1 = nullptr;
  for (auto& c : classes) {
    if (c.members.size() == 5) g1 = &c;
    if (c.members.size() == 3) gm1 = &c;
  }
  auto comp = compose_classes(BF, *gm1, *g1);
  REQUIRE(comp.size() >= 1);
  bool found345 = false;
  for (auto& c : comp)
    found345 |= member_set(c).count({2, 3, 4}) > 0;
  CHECK(found345);

  // Gamma_(-1,1) spans K e35
  const EquivClass* c_m1_1 = nullptr;
  const EquivClass* c_1_m1 = nullptr;
  const EquivClass* c_0_0 = nullptr;
  const EquivClass* c_0_m1 = nullptr;
  for (auto& c : classes3) {
    auto exp_of = [&](uint32_t r, uint32_t s) {
      uint32_t e = BF.exp_between(r, s);
      return e == 2 ? -1 : int(e);
    };
    auto& mem = c.members[0];
    int e1 = exp_of(mem[0], mem[1]), e2 = exp_of(mem[1], mem[2]);
    if (e1 == -1 && e2 == 1) c_m1_1 = &c;
    if (e1 == 1 && e2 == -1) c_1_m1 = &c;
    if (e1 == 0 && e2 == 0) c_0_0 = &c;
    if (e1 == 0 && e2 == -1) c_0_m1 = &c;
  }
  REQUIRE(c_m1_1 != nullptr);
  auto span_m11 = component_space(BF, *c_m1_1);
  REQUIRE(span_m11.dim() == 1);
  {
    Mat e35(t->K(), 6, 6);
    e35.at(2, 4) = 1;
    CHECK(span_m11.contains(mat_flatten(e35)));
  }

  // Gamma_(1,-1) has the 4-dimensional basis {e14, e16, e26, e24 + aa' e46}
  REQUIRE(c_1_m1 != nullptr);
  auto span_1m1 = component_space(BF, *c_1_m1);
  CHECK(span_1m1.dim() == 4);
  auto unit = [&](uint32_t r, uint32_t c, uint64_t v = 1) {
    Mat m(t->K(), 6, 6);
    m.at(r, c) = v;
    return m;
  };
  CHECK(span_1m1.contains(mat_flatten(unit(0, 3))));
  CHECK(span_1m1.contains(mat_flatten(unit(0, 5))));
  CHECK(span_1m1.contains(mat_flatten(unit(1, 5))));
  Mat mix = unit(1, 3) + unit(3, 5, K.mul(alpha, alpha2));
  CHECK(span_1m1.contains(mat_flatten(mix)));
  CHECK(!span_1m1.contains(mat_flatten(unit(1, 3))));

  // refinement of gamma_00: four sub-classes; the << one is {(146),(246)}
  REQUIRE(c_0_0 != nullptr);
  auto refined = refine_classes(BF, *c_0_0);
  CHECK(refined.size() == 4);
  for (auto& rc : refined) {
    if (rc.types == std::vector<uint8_t>{1, 1}) {
      CHECK(member_set(rc) ==
            std::set<std::vector<uint32_t>>({{0, 3, 5}, {1, 3, 5}}));
      CHECK(rc.weight == 2);
      auto sp = component_space(BF, rc);
      CHECK(sp.dim() == 2);  // K e16 + K e26
      CHECK(sp.contains(mat_flatten(unit(0, 5))));
      CHECK(sp.contains(mat_flatten(unit(1, 5))));
    }
  }

  // gamma_(0,-1) refines into =< and <<, with Gamma^(<<) = K e36
  REQUIRE(c_0_m1 != nullptr);
  auto refined2 = refine_classes(BF, *c_0_m1);
  CHECK(refined2.size() == 2);
  for (auto& rc : refined2)
    if (rc.types == std::vector<uint8_t>{1, 1}) {
      auto sp = component_space(BF, rc);
      CHECK(sp.dim() == 1);
      CHECK(sp.contains(mat_flatten(unit(2, 5))));
    }
}

TEST_CASE("class composition edges") {
  auto t = t24();
  // mismatched end components compose to nothing
  auto BF = block_form(glued_3x3(t));
  REQUIRE(BF.k == 2);
  auto c00 = equiv_classes(BF, {0, 0});
  auto c11 = equiv_classes(BF, {1, 1});
  REQUIRE(!c00.empty());
  REQUIRE(!c11.empty());
  CHECK(compose_classes(BF, c00[0], c11[0]).empty());

  // composing against the exponent-0 class keeps the refinements of gamma
  auto t3 = t23();
  auto A = six_blocks(t3, 2, 4);
  auto BF6 = block_form(A);
  auto classes = equiv_classes(BF6, {0, 0});
  const EquivClass *g1 = nullptr, *g0 = nullptr;
  for (auto& c : classes) {
    if (c.members.size() == 5) g1 = &c;
    if (c.members.size() == 13) g0 = &c;
  }
  auto comp = compose_classes(BF6, *g1, *g0);
  bool has_10 = false;
  for (auto& c : comp) {
    auto& mem = c.members[0];
    if (BF6.exp_between(mem[0], mem[1]) == 1 &&
        BF6.exp_between(mem[1], mem[2]) == 0)
      has_10 = true;
  }
  CHECK(has_10);

  // chain length must match the signature
  CHECK_THROWS_AS(component(BF6, {A.basis[0], A.basis[1]}, *g1),
                  SignatureMismatch);
}

TEST_CASE("components sum to the Peirce sandwich and lie in the closure") {
  auto t = t23();
  auto A = glued_4x4(t);
  auto BF = block_form(A);
  auto C = closure_of_algebra(A);
  auto classes = equiv_classes(BF, {0, 0});
  Rng rng(5);
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<uint64_t> coords(A.dimF());
    for (auto& c : coords) c = rng.below(t->q());
    Mat a = A.element(coords);
    Mat sum(t->K(), 4, 4);
    for (auto& cls : classes) {
      Mat part = component(BF, {a}, cls);
      sum = sum + part;
      // membership in the closure of A
      CHECK(member(mat_flatten(part), C));
    }
    Mat ehat = BF.e_hat(0);
    CHECK(sum == ehat * a * ehat);
  }
}

TEST_CASE("thick filtration: products of components") {
  auto t = t23();
  auto A = six_blocks(t, 2, 4);
  auto BF = block_form(A);
  auto classes = equiv_classes(BF, {0, 0});
  for (auto& c1 : classes)
    for (auto& c2 : classes) {
      auto comp = compose_classes(BF, c1, c2);
      // span of products is inside the sum of the composed components
      RowSpace allowed(t->K(), 36);
      for (auto& c3 : comp) {
        auto sp = component_space(BF, c3);
        for (auto& row : sp.rows()) allowed.insert(row);
      }
      for (auto& a : A.basis)
        for (auto& b : A.basis) {
          Mat prod = component(BF, {a}, c1) * component(BF, {b}, c2);
          CHECK(allowed.contains(mat_flatten(prod)));
        }
    }
}

TEST_CASE("refinement weight: components live in radical powers") {
  auto t = t23();
  auto A = six_blocks(t, 2, 4);
  auto BF = block_form(A);
  auto powers = radical_powers(A, BF.wd.J);
  auto classes3 = equiv_classes(BF, {0, 0, 0});
  for (auto& cls : classes3)
    for (auto& rc : refine_classes(BF, cls)) {
      if (rc.weight == 0 || rc.flagged_zero) continue;
      auto sp = component_space(BF, rc);
      for (auto& row : sp.rows())
        CHECK(powers[rc.weight - 1].contains(row));
    }
}

TEST_CASE("radical powers are sums of refined components") {
  // J^l = sum of the components of fully refined classes with weight >= l,
  // taken at any letter count >= l (tuple length letter count + 1)
  auto t = t23();
  auto A = six_blocks(t, 2, 4);
  auto BF = block_form(A);
  auto powers = radical_powers(A, BF.wd.J);
  for (uint32_t l : {1u, 2u}) {
    std::vector<uint32_t> sig(l + 2, 0);  // letters = l + 1 >= l
    RowSpace sum(t->K(), 36);
    for (auto& cls : equiv_classes(BF, sig))
      for (auto& rc : refine_classes(BF, cls)) {
        if (rc.weight < l) continue;
        auto sp = component_space(BF, rc);
        for (auto& row : sp.rows()) sum.insert(row);
      }
    // compare with J^l as a K0-space (the radical here is K0-stable)
    RowSpace jl(t->K(), 36);
    for (auto& row : powers[l - 1].basis_K0()) jl.insert(row);
    CHECK(sum.same(jl));
  }
}

TEST_CASE("refinement nesting: dropping an inner index lands in one class") {
  auto t = t23();
  auto A = six_blocks(t, 2, 4);
  auto BF = block_form(A);
  auto classes3 = equiv_classes(BF, {0, 0, 0});
  auto classes2 = equiv_classes(BF, {0, 0});
  for (auto& c3 : classes3) {
    // forget the middle entry
    std::set<int> hit;
    for (auto& mem : c3.members) {
      std::vector<uint32_t> pair = {mem[0], mem[2]};
      for (size_t i = 0; i < classes2.size(); ++i)
        if (member_set(classes2[i]).count(pair)) hit.insert(int(i));
    }
    CHECK(hit.size() == 1);
  }
}

TEST_CASE("non-unital algebras: empty blocks and pure radical") {
  auto t = t24();
  auto e = [&](uint32_t i, uint32_t j, uint64_t c = 1) {
    Mat m(t->K(), 2, 2);
    m.at(i, j) = c;
    return m;
  };
  // nilpotent of square zero: no semisimple part at all
  auto N = close_algebra_gens(t, 2, {e(0, 1)});
  CHECK(!N.unital);
  auto BF = block_form(N);
  CHECK(BF.k == 0);
  CHECK(BF.m == 2);
  CHECK(BF.block_comp == std::vector<int32_t>{-1, -1});
  CHECK(BF.wd.nu == 2);
  CHECK(BF.wd.S.empty());

  // unit of A differs from the ambient identity: one empty block remains
  auto t3 = t24();
  Mat a(t3->K(), 3, 3), b(t3->K(), 3, 3);
  a.at(0, 0) = 1;
  a.at(1, 1) = 1;
  b.at(0, 1) = 1;
  auto A = close_algebra_gens(t3, 3, {a, b});
  CHECK(A.unital);
  CHECK(!(A.unit == Mat::identity(t3->K(), 3)));
  auto BF2 = block_form(A);
  CHECK(BF2.m == 3);
  int empties = 0;
  for (auto c : BF2.block_comp) empties += c < 0;
  CHECK(empties == 1);
  // one base-field component identically glued across two blocks
  CHECK(BF2.k == 1);
  CHECK(BF2.gluing_partition()[0].size() == 2);
}

TEST_CASE("odd characteristic: structure pipeline over GF(9)/GF(3)") {
  auto t = Tower::make(3, 1, 2);  // F = GF(3), K0 = GF(9)
  const auto& K = *t->K();
  // glued triangular {[[a, b], [0, a^q]]} over GF(9), q = 3
  std::vector<Mat> gens;
  for (uint32_t s = 0; s < 2; ++s) {
    uint64_t val = K.pow(K.gen(), s);
    Mat m(t->K(), 2, 2);
    m.at(0, 0) = val;
    m.at(1, 1) = t->qpow(val, 1);
    gens.push_back(m);
    Mat r(t->K(), 2, 2);
    r.at(0, 1) = val;
    gens.push_back(r);
  }
  auto A = close_algebra_gens(t, 2, gens);
  CHECK(A.dimF() == 4);
  auto BF = block_form(A);  // internal conjugation checks run here
  CHECK(BF.m == 2);
  CHECK(BF.k == 1);
  CHECK(BF.comp_d[0] == 2);
  CHECK(BF.block_exp == std::vector<uint32_t>{0, 1});
  CHECK(BF.wd.nu == 2);
  // at M = 2 both twist orientations hold, since alpha^(q^2) = alpha
  auto f = parse_ncpoly("x^3[y,z] - [y,z]x", 3);
  CHECK(check_identity(A, f).holds);
  auto g = parse_ncpoly("x[y,z] - [y,z]x^3", 3);
  CHECK(check_identity(A, g).holds);
  CHECK(!check_identity(A, parse_ncpoly("[x,y]", 3)).holds);
  // generic generator over GF(9)
  auto G = build_generic(BF, 1);
  for (uint64_t a2 = 0; a2 < G.C.table_size; ++a2)
    CHECK(A.contains(G.gens[0].specialize(G.C, a2)));
}

TEST_CASE("block form battery on random algebras") {
  // the internal verifications inside block_form (diagonal complement,
  // strictly upper radical, consistent gluing exponents) run on every call
  for (auto [p, M] : std::vector<std::pair<uint32_t, uint32_t>>{
           {2, 2}, {2, 3}, {3, 2}}) {
    auto t = Tower::make(p, 1, M);
    Rng rng(500 + p * 10 + M);
    for (int iter = 0; iter < 12; ++iter) {
      auto A = random_algebra(t, 3, 6, rng);
      auto BF = block_form(A);
      uint32_t cols = 0;
      for (auto s : BF.block_size) cols += s;
      CHECK(cols == A.n);
      // every length-2 component of a random element stays in the closure
      if (BF.k >= 1) {
        auto C = closure_of_algebra(A);
        std::vector<uint64_t> coords(A.dimF());
        for (auto& c : coords) c = rng.below(t->q());
        Mat a = A.element(coords);
        for (uint32_t u = 0; u < BF.k; ++u)
          for (uint32_t v = 0; v < BF.k; ++v)
            for (auto& cls : equiv_classes(BF, {u, v}))
              CHECK(member(mat_flatten(component(BF, {a}, cls)), C));
      }
    }
  }
}

TEST_CASE("glued 2x2 matrix blocks: entry-wise Frobenius twist") {
  // A = {[[m, B], [0, m^[q]]] : m in M2(K0), B in M2(K0)} inside M4(K0),
  // where m^[q] is the entry-wise q-th power (a ring map on matrices)
  auto t = t24();
  const auto& K = *t->K();
  std::vector<Mat> gens;
  for (uint32_t i = 0; i < 2; ++i)
    for (uint32_t j = 0; j < 2; ++j)
      for (uint32_t b = 0; b < 2; ++b) {
        uint64_t v = K.pow(K.gen(), b);
        Mat m(t->K(), 4, 4);
        m.at(i, j) = v;
        m.at(2 + i, 2 + j) = t->qpow(v, 1);
        gens.push_back(m);
        Mat r(t->K(), 4, 4);
        r.at(i, 2 + j) = v;
        gens.push_back(r);
      }
  auto A = close_algebra_gens(t, 4, gens);
  CHECK(A.dimF() == 16);  // 8 for the glued copy of M2(GF(4)), 8 for B
  auto BF = block_form(A);
  REQUIRE(BF.k == 1);
  CHECK(BF.comp_n[0] == 2);
  CHECK(BF.comp_d[0] == 2);
  REQUIRE(BF.m == 2);
  CHECK(BF.block_size == std::vector<uint32_t>{2, 2});
  CHECK(BF.block_exp == std::vector<uint32_t>{0, 1});
  CHECK(BF.wd.nu == 2);
  // the complement is the glued copy of M2(GF(4)): in the conjugated frame
  // the two diagonal blocks of any s in S are entry-wise q-power related
  for (auto& s : BF.wd.S) {
    Mat c = BF.conjugated(s);
    for (uint32_t i = 0; i < 2; ++i)
      for (uint32_t j = 0; j < 2; ++j)
        CHECK(c.at(2 + i, 2 + j) == t->qpow(c.at(i, j), 1));
  }
  // classes: the diagonal pair class and the exponent-1 class
  auto classes = equiv_classes(BF, {0, 0});
  REQUIRE(classes.size() == 2);
  // components of random elements stay in the closure
  auto C = closure_of_algebra(A);
  Rng rng(77);
  for (int it = 0; it < 10; ++it) {
    std::vector<uint64_t> coords(A.dimF());
    for (auto& cc : coords) cc = rng.below(2);
    Mat a = A.element(coords);
    for (auto& cls : classes)
      CHECK(member(mat_flatten(component(BF, {a}, cls)), C));
  }
  // generic generator: per-entry variables, diagonal blocks glued entrywise
  auto G = build_generic(BF, 1);
  for (uint64_t asg = 0; asg < G.C.table_size; ++asg) {
    Mat y = G.gens[0].specialize(G.C, asg);
    CHECK(A.contains(y));
  }
  // surjectivity of the specialization map onto A
  auto rep = verify_relatively_free(G, A, 2, 1ull << 24);
  CHECK(rep.specializations_onto);
}

TEST_CASE("peirce decomposition") {
  auto t = t24();
  auto e = [&](uint32_t i, uint32_t j) {
    Mat m(t->K(), 2, 2);
    m.at(i, j) = 1;
    return m;
  };
  auto M2 = close_algebra_gens(t, 2, {e(0, 0), e(0, 1), e(1, 0), e(1, 1)});
  auto pd = peirce(M2, {e(0, 0), e(1, 1)});
  CHECK(!pd.formal_complement);
  for (uint32_t i = 0; i < 2; ++i)
    for (uint32_t j = 0; j < 2; ++j) CHECK(pd.comps[i][j].dim() == 1);

  // single idempotent 1: the whole algebra
  auto pd2 = peirce(M2, {Mat::identity(t->K(), 2)});
  CHECK(pd2.comps[0][0].dim() == 4);

  CHECK_THROWS_AS(peirce(M2, {e(0, 0), e(0, 0)}), NotOrthogonal);

  // non-unital: the formal complement e0 picks up the dangling radical
  auto corner = close_algebra_gens(t, 2, {e(0, 0), e(0, 1)});
  CHECK(!corner.unital);
  auto pd3 = peirce(corner, {e(0, 0)});
  CHECK(pd3.formal_complement);
  CHECK(pd3.comps[0][0].dim() == 1);  // e11 line
  CHECK(pd3.comps[0][1].dim() == 1);  // e12 line via e0 on the right
  CHECK(pd3.comps[1][0].dim() == 0);
  CHECK(pd3.comps[1][1].dim() == 0);
}

TEST_CASE("sub-Peirce of the 4x4 example") {
  auto t = t23();
  auto A = glued_4x4(t);
  auto BF = block_form(A);
  auto ebars = BF.e_bar(0);
  REQUIRE(ebars.size() == 2);
  // A_11^(21) = K e23 in 1-based labels
  auto c21 = sub_peirce(BF, ebars[1], ebars[0]);
  CHECK(c21.space.dim() == 1);
  Mat e23(t->K(), 4, 4);
  e23.at(1, 2) = 1;
  CHECK(c21.space.contains(mat_flatten(e23)));
  CHECK(c21.inside_A);
}

TEST_CASE("peirce components of the paired 4x4 example") {
  // entries: (1,1) = (3,3) = alpha, (2,2) = (4,4) = beta, (1,2) = x,
  // (1,4) = w x (a glued radical line), (1,3) = y, (2,3) = z
  auto t = t24();
  std::vector<Cell> cells = {{0, 0, 0, 0}, {0, 2, 2, 0}, {1, 1, 1, 0},
                             {1, 3, 3, 0}, {2, 0, 1, 0}, {2, 0, 3, 0, 2},
                             {3, 0, 2, 0}, {4, 1, 2, 0}};
  auto A = from_pattern(t, 4, 5, cells);
  CHECK(A.dimF() == 5 * 2);
  auto BF = block_form(A);
  CHECK(BF.m == 4);
  CHECK(BF.k == 2);
  // Peirce with respect to the component idempotents
  auto pd = peirce(A, {BF.e_hat(0), BF.e_hat(1)});
  CHECK(!pd.formal_complement);
  CHECK(pd.comps[0][0].dim() == 4);  // alpha line + y line
  CHECK(pd.comps[0][1].dim() == 2);  // the glued line K(e12 + w e14)
  CHECK(pd.comps[1][0].dim() == 2);  // K e23
  CHECK(pd.comps[1][1].dim() == 2);  // beta line
  Mat glued(t->K(), 4, 4);
  glued.at(0, 1) = 1;
  glued.at(0, 3) = 2;
  CHECK(pd.comps[0][1].contains(mat_flatten(glued)));
  Mat e12(t->K(), 4, 4);
  e12.at(0, 1) = 1;
  CHECK(!pd.comps[0][1].contains(mat_flatten(e12)));
}

TEST_CASE("semiprime closed algebras are semisimple with no upper part") {
  auto t = t24();
  auto e = [&](uint32_t i, uint32_t j, uint64_t c = 1) {
    Mat m(t->K(), 2, 2);
    m.at(i, j) = c;
    return m;
  };
  // M2(F) + a glued field on the diagonal of a bigger ambient
  auto M2 = close_algebra_gens(t, 2, {e(0, 0), e(0, 1), e(1, 0), e(1, 1)});
  auto BF = block_form(M2);
  CHECK(BF.wd.J.empty());
  CHECK(BF.wd.nu == 1);
  REQUIRE(BF.k == 1);
  CHECK(BF.comp_n[0] == 2);
  CHECK(BF.comp_d[0] == 1);  // M_2(GF(2)): finite center GF(2)
  CHECK(BF.m == 1);
  CHECK(BF.block_size[0] == 2);
}
