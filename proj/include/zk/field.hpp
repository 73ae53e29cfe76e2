#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "zk/error.hpp"

namespace zk {

class Field;
using FieldRef = std::shared_ptr<const Field>;

// GF(p^k) presented by a monic irreducible modulus over GF(p).
// Elements are encoded as little-endian base-p integers of their coefficient
// vectors; the encoding of a polynomial c0 + c1*x + ... is c0 + c1*p + ... .
// All operations are exact. Fields are immutable and shared by reference.
class Field {
 public:
  // modulus from the built-in table (lexicographically smallest monic
  // irreducible of degree k over GF(p), by integer encoding)
  static FieldRef make(uint32_t p, uint32_t k);
  // explicit modulus override; low-degree-first, length k+1, monic
  static FieldRef make(uint32_t p, uint32_t k, std::vector<uint32_t> modulus);

  uint32_t p() const { return p_; }
  uint32_t k() const { return k_; }
  uint64_t size() const { return size_; }
  const std::vector<uint32_t>& modulus() const { return modulus_; }

  bool same(const Field& o) const {
    return p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_;
  }

  uint64_t add(uint64_t a, uint64_t b) const;
  uint64_t sub(uint64_t a, uint64_t b) const;
  uint64_t neg(uint64_t a) const;
  uint64_t mul(uint64_t a, uint64_t b) const;
  uint64_t inv(uint64_t a) const;  // throws DivisionByZero on 0
  uint64_t pow(uint64_t a, uint64_t e) const;
  // a^(p^t); bijective, t taken mod k
  uint64_t frobenius(uint64_t a, uint64_t t) const;
  // unique b with b^(p^t) = a
  uint64_t frobenius_inv(uint64_t a, uint64_t t) const;

  // scalar injection GF(p) -> field (digit 0 of the encoding)
  uint64_t from_prime(uint64_t c) const { return c % p_; }
  // class of x when k > 1, else the encoding 1
  uint64_t gen() const { return k_ > 1 ? p_ : 1; }
  // a multiplicative generator (smallest by encoding)
  uint64_t mult_gen() const { return mult_gen_; }

  std::vector<uint32_t> digits(uint64_t a) const;
  uint64_t from_digits(const std::vector<uint32_t>& d) const;

  // minimal polynomial of a over GF(p), monic, low-degree-first
  std::vector<uint32_t> min_poly(uint64_t a) const;

  // evaluate a polynomial over GF(p) (low-first coefficients) at a
  uint64_t eval_prime_poly(const std::vector<uint32_t>& f, uint64_t a) const;

  std::string str(uint64_t a) const;  // human-readable, e.g. "g^3+1" style

 private:
  Field(uint32_t p, uint32_t k, std::vector<uint32_t> modulus);
  void build_tables();

  uint32_t p_, k_;
  uint64_t size_;
  std::vector<uint32_t> modulus_;
  uint64_t mult_gen_ = 0;
  // discrete log/exp tables w.r.t. mult_gen_, built when size_ is small
  bool has_tables_ = false;
  std::vector<uint64_t> exp_, log_;

  uint64_t mul_generic(uint64_t a, uint64_t b) const;
};

// lexicographically smallest monic irreducible of degree k over GF(p)
std::vector<uint32_t> builtin_modulus(uint32_t p, uint32_t k);
bool is_irreducible_mod_p(const std::vector<uint32_t>& f, uint32_t p);

// A field element paired with its owner, for the checked operation surface.
// Mixing owners raises MixedFields; inversion of zero raises DivisionByZero.
struct FieldElem {
  FieldRef owner;
  uint64_t enc = 0;
  bool operator==(const FieldElem& o) const {
    return owner->same(*o.owner) && enc == o.enc;
  }
};

FieldElem ff_add(const FieldElem& a, const FieldElem& b);
FieldElem ff_mul(const FieldElem& a, const FieldElem& b);
FieldElem ff_inv(const FieldElem& a);
FieldElem ff_pow(const FieldElem& a, uint64_t e);
FieldElem ff_frobenius(const FieldElem& a, uint64_t t);

// Ring embedding of one finite field into another (sub.k | sup.k, same p),
// computed from the smallest root of sub's modulus in sup.  Also provides
// coordinates of sup over the embedded subfield w.r.t. the basis
// {1, g, ..., g^(m-1)}, g = sup.gen().
class SubfieldMap {
 public:
  SubfieldMap() = default;
  SubfieldMap(FieldRef sub, FieldRef sup);  // throws NoEmbedding

  const FieldRef& sub() const { return sub_; }
  const FieldRef& sup() const { return sup_; }
  uint32_t degree() const { return m_; }  // [sup : sub]
  uint64_t root() const { return root_; }

  uint64_t to_sup(uint64_t a) const;
  // a -> m coordinates over sub, basis {1, g, .., g^(m-1)}
  void coords(uint64_t a, uint64_t* out) const;
  std::vector<uint64_t> coords(uint64_t a) const;
  uint64_t from_coords(const uint64_t* c) const;
  // membership in the embedded subfield
  bool in_subfield(uint64_t a) const;
  // preimage (asserts membership)
  uint64_t to_sub(uint64_t a) const;

 private:
  FieldRef sub_, sup_;
  uint32_t m_ = 0;
  uint64_t root_ = 0;
  std::vector<uint64_t> root_pow_;  // root^i, i < sub.k
  std::vector<uint64_t> gen_pow_;   // g^i, i < m
  // GF(p)-matrix taking sup digits to (sub-digit blocks per basis power)
  std::vector<std::vector<uint32_t>> inv_mat_;
};

}  // namespace zk
