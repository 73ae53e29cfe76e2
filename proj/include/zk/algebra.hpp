#pragma once

#include <cstdint>
#include <vector>

#include "zk/linalg.hpp"
#include "zk/rng.hpp"
#include "zk/tower.hpp"

namespace zk {

// An F-subalgebra of M_n(K0) presented by its canonical reduced F-basis
// (restriction of scalars).  The basis is always multiplicatively closed.
struct AlgebraPresentation {
  TowerRef t;
  uint32_t n = 0;
  std::vector<Mat> basis;  // canonical: rows of `space` reshaped
  FSubspace space;         // F-span of the flattened matrices
  bool unital = false;
  Mat unit;  // two-sided unit of A when unital (not necessarily I_n)

  size_t dimF() const { return basis.size(); }
  bool contains(const Mat& m) const;
  // F-coordinates w.r.t. the canonical basis; asserts membership
  std::vector<uint64_t> coords(const Mat& m) const;
  Mat element(const std::vector<uint64_t>& f_coords) const;
  // element count q^dimF as (q, exponent)
  std::pair<uint64_t, size_t> order() const { return {t->q(), dimF()}; }
  // enumerate all elements (budgeted)
  std::vector<Mat> elements(uint64_t budget = 1ull << 20) const;
  Mat element_by_index(uint64_t idx) const;
  uint64_t element_count_checked(uint64_t budget) const;
};

std::vector<uint64_t> mat_flatten(const Mat& m);
Mat mat_unflatten(TowerRef t, uint32_t n, const std::vector<uint64_t>& v);

// multiplicative closure of the F-span of the generators
AlgebraPresentation close_algebra_gens(TowerRef t, uint32_t n,
                                       const std::vector<Mat>& gens);
// presentation from an already multiplicatively closed spanning set;
// closes anyway and reports (via *was_closed) whether closing was a no-op
AlgebraPresentation algebra_from_span(TowerRef t, uint32_t n,
                                      const std::vector<Mat>& spanning,
                                      bool* was_closed = nullptr);

// c[i][j][k]: b_i b_j = sum_k c[i][j][k] b_k, coefficients in F
std::vector<std::vector<std::vector<uint64_t>>> structure_constants(
    const AlgebraPresentation& A);

// seeded random F-subalgebra with dimF <= max_dim (for oracle comparisons)
AlgebraPresentation random_algebra(TowerRef t, uint32_t n, size_t max_dim,
                                   Rng& rng);

}  // namespace zk
