#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zk/tower.hpp"

namespace zk {

// One term c * lambda_var^(q^e), coefficient in K0.
struct QTerm {
  uint32_t var;
  uint32_t e;
  uint64_t c;
  bool operator==(const QTerm&) const = default;
};

// A q-polynomial (relation of weak F-Frobenius type): a finite sum of terms
// c_ie * lambda_i^(q^e) with zero constant term.  As a function on K0^n it
// is F-linear.  phi-exponents are stored unreduced; they are only folded
// modulo the rationality level when evaluating over a fixed finite field.
struct QPolynomial {
  TowerRef t;
  uint32_t n = 0;
  std::vector<QTerm> terms;  // sorted by (var, e), unique, nonzero coeffs

  bool zero() const { return terms.empty(); }
  bool operator==(const QPolynomial& o) const {
    return n == o.n && terms == o.terms;
  }
  std::string str() const;
};

QPolynomial qp_make(TowerRef t, uint32_t n, std::vector<QTerm> terms);
QPolynomial qp_add(const QPolynomial& a, const QPolynomial& b);
QPolynomial qp_scale(const QPolynomial& a, uint64_t c);
// phi^s * f : exponents shift by s, coefficients get c -> c^(q^s)
QPolynomial qp_twist(const QPolynomial& a, uint32_t s);
// normalize so the lowest term has coefficient 1
QPolynomial qp_monic(const QPolynomial& a);

// exact evaluation at a point of K0^n (or GF(q^m)^n given in K0 encodings)
uint64_t evaluate(const QPolynomial& f, const std::vector<uint64_t>& v);

// repeatedly take q-th roots until some exponent is 0; same zero set
QPolynomial q_root_normalize(QPolynomial f);

// one Euclidean pass in K[phi] on variable i: returns a pair generating the
// same module in which lambda_i appears in at most one entry
std::pair<QPolynomial, QPolynomial> eliminate_variable(QPolynomial f1,
                                                       QPolynomial f2,
                                                       uint32_t i);

// Finitely generated module of q-polynomial relations over K[phi].
struct RelationModule {
  TowerRef t;
  uint32_t n = 0;
  std::vector<QPolynomial> gens;  // triangular: distinct leading variables

  std::string str() const;
};

// triangular generating set via elimination and q-root normalization;
// at most n generators; zero set unchanged at every rationality level
RelationModule module_reduce(TowerRef t, uint32_t n,
                             std::vector<QPolynomial> gens);

// reduce f against the triangular generators (normal form; 0 iff f visibly
// in the phi-saturated module)
QPolynomial module_reduce_element(const RelationModule& mod, QPolynomial f);

// GF(q^m)-rational common zeros as an F-subspace of GF(q^m)^n by restriction
// of scalars.  Coefficients must land in GF(q^lcm(m, M)); the kernel is the
// nullspace of the stacked F-linear evaluation maps.
FSubspace kernel(const RelationModule& mod, uint32_t m);

// convenience: F-dimension of the rational kernel at level m
size_t kernel_dim(const RelationModule& mod, uint32_t m);

}  // namespace zk
