#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "zk/qpoly.hpp"
#include "zk/tower.hpp"

namespace zk {

// Commutative polynomial in n coordinate functions over K0, no implicit
// constant-term restriction (callers that use one enforce it).
struct CommPoly {
  TowerRef t;
  uint32_t n = 0;
  std::map<std::vector<uint32_t>, uint64_t> monomials;  // exponent vec -> coeff

  bool zero() const { return monomials.empty(); }
  uint32_t total_degree() const;
  size_t monomial_count() const { return monomials.size(); }
  bool operator==(const CommPoly& o) const {
    return n == o.n && monomials == o.monomials;
  }
  std::string str() const;
};

CommPoly cp_make(TowerRef t, uint32_t n,
                 std::vector<std::pair<std::vector<uint32_t>, uint64_t>> mons);
CommPoly cp_zero(TowerRef t, uint32_t n);
CommPoly cp_add(const CommPoly& a, const CommPoly& b);
CommPoly cp_scale(const CommPoly& a, uint64_t c);
CommPoly cp_mul(const CommPoly& a, const CommPoly& b);
uint64_t cp_eval(const CommPoly& f, const std::vector<uint64_t>& v);
// view a q-polynomial as a commutative polynomial (exponents q^e)
CommPoly cp_from_qpoly(const QPolynomial& f);
// recognize a commutative polynomial of weak F-Frobenius shape
bool cp_is_qpoly(const CommPoly& f, QPolynomial* out = nullptr);

// binomial coefficient modulo p (Lucas)
uint64_t binom_mod_p(uint64_t n, uint64_t k, uint32_t p);

}  // namespace zk
