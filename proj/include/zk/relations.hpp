#pragma once

#include <cstdint>
#include <vector>

#include "zk/commpoly.hpp"
#include "zk/pi.hpp"
#include "zk/qpoly.hpp"

namespace zk {

// quasi-linearization operators
CommPoly delta(const CommPoly& f, const std::vector<uint64_t>& a);
CommPoly nabla(const CommPoly& f, uint64_t alpha, uint32_t d);

// all weak F-Frobenius relations with phi-degree < E vanishing on the
// F-subspace A (linear-algebra annihilator; complete for the given E)
RelationModule annihilator(const FSubspace& A, uint32_t E);

// the delta/nabla descent, kept as a certificate trail
struct DescentCertificate {
  std::vector<CommPoly> trail;     // successive reducts
  std::vector<QPolynomial> found;  // q-polynomial relations seen en route
};

// weak-Frobenius relations of A certifying the vanishing polynomial f;
// throws NotARelation if f does not vanish on A
std::vector<QPolynomial> reduce_to_weak_frobenius(
    const CommPoly& f, const FSubspace& A, uint32_t E = 0,
    DescentCertificate* cert = nullptr);

// Frobenius-type normal forms: lambda_i; lambda_i - lambda_i^s;
// lambda_i - lambda_j^s, s a p-power
struct FrobRelation {
  enum Kind { Zero = 0, SingleVar = 1, SelfPower = 2, CrossPower = 3 };
  Kind kind = Zero;
  uint32_t i = 0, j = 0;
  uint64_t s = 1;  // p-power for kinds 2 and 3
  CommPoly as_commpoly(TowerRef t, uint32_t n) const;
  bool operator==(const FrobRelation&) const = default;
};

// normalization of a one/two-variable binomial relation per the gluing
// case analysis; a non-p-power twist degenerates to the single-variable form
FrobRelation frobenius_type_normalize(const CommPoly& rel, const FSubspace& A);

// generators of the relations of a finite multiplicative submonoid of K0^n
struct MonoidRelations {
  // minimal index sets with identically zero product
  std::vector<std::vector<uint32_t>> zero_products;
  // exponent-vector pairs with equal value on every point of S
  std::vector<std::pair<std::vector<uint32_t>, std::vector<uint32_t>>> binomials;
  std::vector<CommPoly> as_polys(TowerRef t, uint32_t n) const;
};
MonoidRelations monoid_relations(TowerRef t,
                                 const std::vector<std::vector<uint64_t>>& S,
                                 bool without_unit = false,
                                 uint64_t budget = 1ull << 22);

// coordinate polynomials of b -> f(b, w2, ..., wm) for an algebra given by
// structure constants alpha[i][j][k] over K0
std::vector<CommPoly> identity_to_relations(
    TowerRef t, const std::vector<std::vector<std::vector<uint64_t>>>& sc,
    const NCPolynomial& f,
    const std::vector<std::vector<uint64_t>>& witnesses);

}  // namespace zk
