#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zk/pi.hpp"
#include "zk/structure.hpp"

namespace zk {

// Generic coefficient ring: one variable per (generator, coordinate cell),
// each constrained to its subfield level.  Ring elements are stored
// extensionally by their full evaluation tables over the assignment space.
struct GenericCoefficientRing {
  TowerRef t;
  std::vector<uint32_t> constraints;  // d_i per variable
  std::vector<std::vector<uint64_t>> level_values;  // per var: GF(q^d) in K0
  uint64_t table_size = 1;

  using Elem = std::vector<uint64_t>;  // evaluation table, length table_size

  uint64_t value(uint32_t var, uint64_t assign) const;
  Elem variable(uint32_t var) const;
  Elem constant(uint64_t c) const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem qpow(const Elem& a, uint32_t e) const;
  bool is_zero(const Elem& a) const;
};

GenericCoefficientRing build_coeff_ring(TowerRef t,
                                        const std::vector<uint32_t>& ds,
                                        uint64_t budget = 1ull << 20);

// Generic elements are stored symbolically as variable placements; the
// specialization at an assignment is the corresponding member of A.
struct GenericGenerator {
  struct Part {
    uint32_t var;
    uint32_t e;  // twist: the value enters as value^(q^e)
    Mat pattern;
  };
  std::vector<Part> parts;
  Mat specialize(const GenericCoefficientRing& C, uint64_t assign) const;
};

struct GenericAlgebra {
  GenericCoefficientRing C;
  uint32_t n = 0;
  uint32_t mu = 0;
  std::vector<GenericGenerator> gens;  // one per k = 1..mu
  BlockForm source;
};

// generic elements read off the block/gluing structure: per component a
// constrained variable per matrix entry, Frobenius-twisted across the glued
// blocks; the radical parametrized by its K0-cells (or F-cells when the
// radical is not K0-stable)
GenericAlgebra build_generic(const BlockForm& BF, uint32_t mu,
                             uint64_t budget = 1ull << 20);

// upper bound mu_S + nu - 1 for the PI-generic rank
struct PiRankBound {
  uint32_t mu_S = 0;
  uint32_t nu = 1;
  uint32_t bound() const { return mu_S + nu - 1; }
};
PiRankBound pi_rank_bound(const AlgebraPresentation& A, uint64_t seed = 0,
                          uint64_t budget = 1ull << 20);

// search for a bound-many-generated subalgebra with the same identities as
// A up to degree D (in `vars` variables); empty tuple reported on failure
struct PiRankWitness {
  bool found = false;
  std::vector<std::vector<uint64_t>> tuple_coords;
};
PiRankWitness pi_rank_witness(const AlgebraPresentation& A, uint32_t mu,
                              uint32_t D, uint32_t vars = 2, uint64_t seed = 0,
                              uint64_t budget = 1ull << 22);

struct FreenessReport {
  uint64_t identities_checked = 0;  // dimension of id_<=D(A) in mu variables
  bool identities_hold = true;      // every one holds in the generic algebra
  bool specializations_onto = true;  // every generator map covers A
  std::vector<size_t> gen_rank;      // F-rank of each specialization map
  bool pass() const { return identities_hold && specializations_onto; }
};

// identity space of A in m variables up to total degree D (word length),
// as coefficient vectors over GF(p) in the word basis
std::vector<std::vector<uint32_t>> identity_space(const AlgebraPresentation& A,
                                                  uint32_t m, uint32_t D,
                                                  uint64_t budget = 1ull << 22,
                                                  Exec exec = default_exec());
std::vector<NCWord> word_basis(uint32_t m, uint32_t D);

FreenessReport verify_relatively_free(const GenericAlgebra& G,
                                      const AlgebraPresentation& A, uint32_t D,
                                      uint64_t budget = 1ull << 22);

}  // namespace zk
