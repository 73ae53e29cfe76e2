#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zk/algebra.hpp"
#include "zk/qpoly.hpp"

namespace zk {

// One additive term c * xi_param^(q^e) inside a coordinate expression.
struct ParamTerm {
  uint32_t param;
  uint32_t e;
  uint64_t c;  // in K0
};

// F-additively parametrized subset of K0^n: coordinate i is the sum of its
// terms; parameter j ranges over GF(q^(d_j)).  d_j = M stands for "free over
// K0" (a stand-in for a parameter free over the algebraic closure), and its
// phi-exponents are treated formally, without folding.
struct LinearParametrization {
  struct Param {
    std::string name;
    uint32_t d = 1;
  };
  TowerRef t;
  uint32_t n = 0;
  std::vector<Param> params;
  std::vector<std::vector<ParamTerm>> coords;

  // evaluate at an assignment of parameter values (in K0, each inside its
  // level-d subfield)
  std::vector<uint64_t> image_point(const std::vector<uint64_t>& assign) const;
  // number of assignments, budget-checked
  uint64_t assignment_count(uint64_t budget = 1ull << 22) const;
  std::vector<uint64_t> assignment_by_index(uint64_t idx) const;
  // spanning image points (one per parameter per F-basis element of its level)
  std::vector<std::vector<uint64_t>> spanning_points() const;
};

// all weak F-Frobenius relations with phi-degree < E vanishing identically
// on the image; exact by construction for the given E
RelationModule image_relations(const LinearParametrization& P, uint32_t E);

struct ClosedSpace {
  RelationModule relations;                       // reduced
  uint32_t n = 0;
  TowerRef t;
  std::optional<LinearParametrization> parametrization;
};

// closure presented by its relation module at bound E = M
ClosedSpace closure(const LinearParametrization& P);
// "infinite F" mode: the closure of an F-space over an infinite field is its
// full K-span, so only e = 0 (linear) relations are emitted
ClosedSpace closure_assume_infinite(const LinearParametrization& P);

bool member(const std::vector<uint64_t>& v, const ClosedSpace& C);
// F-dimension of the rational point set at level m (point count = q^dim)
size_t point_count_exponent(const ClosedSpace& C, uint32_t m);

// K0-linear span of the image with its K0-dimension
RowSpace k_span(const LinearParametrization& P);
RowSpace k_span_points(TowerRef t, const std::vector<std::vector<uint64_t>>& pts);

// the canonical parametrization of an F-space given by its reduced basis:
// one level-1 parameter per basis vector
LinearParametrization canonical_parametrization(const FSubspace& A);

// multiplicative closure of the F-span of matrices, with its closure
std::pair<AlgebraPresentation, ClosedSpace> close_algebra(
    TowerRef t, uint32_t n, const std::vector<Mat>& gens);
// closure of an already-presented algebra
ClosedSpace closure_of_algebra(const AlgebraPresentation& A);

}  // namespace zk
