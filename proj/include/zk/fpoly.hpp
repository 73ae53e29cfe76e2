#pragma once

#include <cstdint>
#include <vector>

#include "zk/field.hpp"

namespace zk {

// Dense univariate polynomials over a finite field, coefficients as field
// encodings, low-degree-first.  Small utility layer for minimal-polynomial
// factoring (Berlekamp) and CRT idempotents.
namespace fp {

using P = std::vector<uint64_t>;

void trim(const Field& F, P& f);
int deg(const P& f);  // -1 for zero
P add(const Field& F, P a, const P& b);
P sub(const Field& F, P a, const P& b);
P mul(const Field& F, const P& a, const P& b);
P scale(const Field& F, P a, uint64_t c);
P monic(const Field& F, P f);
// division with remainder: returns quotient, sets rem
P divmod(const Field& F, P a, const P& b, P* rem);
P mod(const Field& F, const P& a, const P& b);
P gcd(const Field& F, P a, P b);
// g = gcd(a, b) = s*a + t*b
P xgcd(const Field& F, P a, P b, P* s, P* t);
P powmod(const Field& F, P base, uint64_t e, const P& m);
P derivative(const Field& F, const P& f);
uint64_t eval(const Field& F, const P& f, uint64_t x);
bool is_irreducible(const Field& F, const P& f);

// full factorization into monic irreducibles with multiplicities
std::vector<std::pair<P, uint32_t>> factor(const Field& F, const P& f);

}  // namespace fp

}  // namespace zk
