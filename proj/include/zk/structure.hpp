#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "zk/algebra.hpp"
#include "zk/closure.hpp"

namespace zk {

// F-basis of the largest nil ideal, by the characteristic-p chain of
// semilinear characteristic-coefficient forms; certified nil-ideal on return
std::vector<Mat> radical(const AlgebraPresentation& A);

struct SimpleFactor {
  uint32_t n_u = 1;  // matrix size
  uint32_t d_u = 1;  // center degree over F
  // exact matrix units E[j][j'] inside the lifted complement
  std::vector<std::vector<Mat>> units;
  Mat field_gen;  // multiplicative lift of the center generator, (1,1) corner
  std::vector<uint64_t> field_min_poly;  // over F, degree d_u, irreducible
};

struct WedderburnData {
  std::vector<Mat> J;  // F-basis of the radical
  std::vector<Mat> S;  // F-basis of the complement subalgebra
  FSubspace J_space, S_space;
  uint32_t nu = 1;  // nilpotence index: J^nu = 0 and J^(nu-1) != 0
  std::vector<SimpleFactor> factors;
  uint32_t lifting_iterations = 0;  // max Newton iterations per idempotent
};

WedderburnData wedderburn_malcev(const AlgebraPresentation& A,
                                 uint64_t seed = 0);

// Wedderburn block form: U^(-1) A U has the complement in diagonal blocks
// and the radical strictly above them.
struct BlockForm {
  TowerRef t;
  uint32_t n = 0;
  AlgebraPresentation A;
  WedderburnData wd;
  Mat U, U_inv;

  uint32_t m = 0;                       // number of diagonal blocks
  std::vector<uint32_t> block_size;     // per block
  std::vector<uint32_t> block_offset;   // first column of each block
  std::vector<int32_t> block_comp;      // component index, -1 for empty
  std::vector<uint32_t> block_exp;      // relative Frobenius exponent
  uint32_t k = 0;                       // number of gluing components
  std::vector<uint32_t> comp_d;         // d_u per component
  std::vector<uint32_t> comp_n;         // n_u per component

  std::vector<std::vector<uint32_t>> gluing_partition() const;  // T_u lists
  // identical-gluing subpartition T_u^(mu)
  std::vector<std::vector<std::vector<uint32_t>>> identical_partition() const;
  // exp(B_rs) as the least nonnegative residue mod d_u; r, s glued
  uint32_t exp_between(uint32_t r, uint32_t s) const;

  // block projection idempotents, in the original coordinates
  Mat e_r(uint32_t r) const;
  Mat e_hat(uint32_t u) const;
  std::vector<Mat> e_bar(uint32_t u) const;  // one per identical class
  // the (r, s) block slice of a, in the original coordinates
  Mat slice(const Mat& a, uint32_t r, uint32_t s) const;
  Mat conjugated(const Mat& a) const {  // U^-1 a U
    return U_inv * a * U;
  }
};

BlockForm block_form(const AlgebraPresentation& A, uint64_t seed = 0);

struct EquivClass {
  std::vector<uint32_t> sig;  // component indices (0-based), length t
  std::vector<std::vector<uint32_t>> members;  // tuples, 0-based blocks
  // refinement data
  bool refined = false;
  std::vector<uint8_t> types;  // per adjacent index: 0 '=', 1 '<'
  uint32_t weight = 0;
  bool flagged_zero = false;
};

// partition of T_(u_1..u_t) by the congruence of relative exponents
std::vector<EquivClass> equiv_classes(const BlockForm& BF,
                                      const std::vector<uint32_t>& sig);
// classes of the concatenated signature contained in the junction product
std::vector<EquivClass> compose_classes(const BlockForm& BF,
                                        const EquivClass& a,
                                        const EquivClass& b);
// split by equality/strict-inequality of adjacent indices; members are
// filtered to chains whose block spaces are nonzero (others contribute 0)
std::vector<EquivClass> refine_classes(const BlockForm& BF,
                                       const EquivClass& c);

// gamma-component of a chain a_1 .. a_(t-1); pass one element for t = 2
Mat component(const BlockForm& BF, const std::vector<Mat>& chain,
              const EquivClass& cls);
// K0-span of all gamma-components over spanning chains
RowSpace component_space(const BlockForm& BF, const EquivClass& cls);

struct PeirceDecomposition {
  // component (i, j) = e_i A e_j; index idems.size() is the formal
  // complement e_0 when the idempotents do not sum to a unit of A
  std::vector<std::vector<FSubspace>> comps;
  bool formal_complement = false;
};
PeirceDecomposition peirce(const AlgebraPresentation& A,
                           const std::vector<Mat>& idems);

struct SubPeirceComponent {
  RowSpace space;  // K0-span of the sandwiches
  bool inside_A = false;
};
SubPeirceComponent sub_peirce(const BlockForm& BF, const Mat& left,
                              const Mat& right);

// J^t as F-subspaces of the flattened ambient, t = 1..nu
std::vector<FSubspace> radical_powers(const AlgebraPresentation& A,
                                      const std::vector<Mat>& J);

}  // namespace zk
