#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zk/linalg.hpp"
#include "zk/parallel.hpp"
#include "zk/tower.hpp"

namespace zk {

// word over x_1..x_m, letters carry positive exponents; normalized so that
// adjacent letters have distinct variables
using NCWord = std::vector<std::pair<uint32_t, uint32_t>>;

// Noncommutative polynomial with coefficients in the prime field GF(p).
struct NCPolynomial {
  uint32_t m = 0;       // variable count
  uint32_t p = 2;       // coefficient characteristic
  std::map<NCWord, uint32_t> terms;

  bool zero() const { return terms.empty(); }
  uint32_t degree() const;
  uint32_t degree_in(uint32_t var) const;
  std::string str(const std::vector<std::string>& names = {}) const;
};

NCPolynomial nc_make(uint32_t m, uint32_t p,
                     std::vector<std::pair<NCWord, uint32_t>> terms);
NCPolynomial nc_add(const NCPolynomial& a, const NCPolynomial& b);
NCPolynomial nc_scale(const NCPolynomial& a, uint32_t c);
NCPolynomial nc_mul(const NCPolynomial& a, const NCPolynomial& b);

// parse the small expression grammar: variables are letters, integer
// exponents, juxtaposition or * for products, commutator sugar [a,b]
NCPolynomial parse_ncpoly(const std::string& src, uint32_t p,
                          std::vector<std::string>* var_names = nullptr);

// evaluate on square matrices over K0 (one per variable)
Mat nc_eval(const NCPolynomial& f, const std::vector<Mat>& args,
            const TowerRef& t);

// partition of f into blended parts by variable support
std::vector<NCPolynomial> blend(const NCPolynomial& f);

// f(.., xi + x_new, ..) - f - f[xi -> x_new]; strictly lowers deg_xi
NCPolynomial multilinearize_step(const NCPolynomial& f, uint32_t xi);

struct AlgebraPresentation;  // algebra.hpp

struct IdentityWitness {
  std::vector<std::vector<uint64_t>> tuple;  // F-coordinates per variable
  std::vector<Mat> matrices;
};

struct IdentityReport {
  bool holds = false;
  std::optional<IdentityWitness> witness;
  uint64_t substitutions_checked = 0;
};

// exhaustive substitution search over |A|^m tuples
IdentityReport check_identity(const AlgebraPresentation& A,
                              const NCPolynomial& f,
                              uint64_t budget = 1ull << 20,
                              Exec exec = default_exec());

// split substitution per the additive decomposition A = A1 + A2: the
// polynomial and its iterated multilinearization differences are evaluated
// on tuples drawn from A1 or A2 only
IdentityReport check_identity_split(const AlgebraPresentation& A,
                                    const FSubspace& A1, const FSubspace& A2,
                                    const NCPolynomial& f,
                                    uint64_t budget = 1ull << 20,
                                    Exec exec = default_exec());

}  // namespace zk
