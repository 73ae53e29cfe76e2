#pragma once

#include <functional>

#include "zk/algebra.hpp"
#include "zk/qpoly.hpp"

namespace zk {

// Independent brute-force recomputations used to validate the optimized
// paths.  Deliberately naive; budget-guarded.

// visit every F-subspace of F^d (as reduced row lists)
void enumerate_subspaces(
    const FieldRef& F, uint32_t d,
    const std::function<void(const std::vector<std::vector<uint64_t>>&)>& fn);

// the radical as the sum of all nil ideals, by subspace enumeration
// (feasible for dimF(A) <= 5)
std::vector<Mat> radical_oracle(const AlgebraPresentation& A);

// all weak F-Frobenius relations with phi-degree < E vanishing on every
// given point (the pointwise annihilator solve)
RelationModule annihilator_points(TowerRef t, uint32_t n,
                                  const std::vector<std::vector<uint64_t>>& pts,
                                  uint32_t E);

}  // namespace zk
