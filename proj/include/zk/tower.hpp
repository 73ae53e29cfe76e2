#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "zk/field.hpp"
#include "zk/linalg.hpp"

namespace zk {

class Tower;
using TowerRef = std::shared_ptr<const Tower>;

// The working pair F = GF(q) inside the field of definition K0 = GF(q^M),
// with the canonical embedding and restriction-of-scalars plumbing.
class Tower {
 public:
  static TowerRef make(FieldRef F, FieldRef K0);
  static TowerRef make(uint32_t p, uint32_t q_exp, uint32_t M);

  const FieldRef& F() const { return F_; }
  const FieldRef& K() const { return K0_; }
  const SubfieldMap& emb() const { return emb_; }
  uint32_t M() const { return M_; }
  uint64_t q() const { return F_->size(); }

  // y^(q^e) in K0
  uint64_t qpow(uint64_t a, uint64_t e) const {
    return K0_->frobenius(a, uint64_t(F_->k()) * e);
  }
  // unique y with y^(q^e) = given
  uint64_t qroot(uint64_t a, uint64_t e) const {
    uint64_t t = (uint64_t(F_->k()) * e) % K0_->k();
    return K0_->frobenius(a, (K0_->k() - t) % K0_->k());
  }
  // F-scalar action on K0
  uint64_t fmul(uint64_t f_scalar, uint64_t a) const {
    return K0_->mul(emb_.to_sup(f_scalar), a);
  }
  // the subfield GF(q^d) of K0 (d | M); all its elements
  std::vector<uint64_t> subfield_elements(uint32_t d) const;
  bool in_level(uint64_t a, uint32_t d) const {  // a in GF(q^d)
    return qpow(a, d) == a;
  }

  // restriction of scalars: K0^n vector -> F^(n*M) coordinates and back
  std::vector<uint64_t> down(const std::vector<uint64_t>& v) const;
  std::vector<uint64_t> up(const std::vector<uint64_t>& w) const;

 private:
  Tower(FieldRef F, FieldRef K0);
  FieldRef F_, K0_;
  SubfieldMap emb_;
  uint32_t M_;
};

// F-subspace of K0^n under restriction of scalars: row-reduced F-basis of
// the corresponding subspace of F^(n*M).
class FSubspace {
 public:
  FSubspace() = default;
  FSubspace(TowerRef t, uint32_t n)
      : t_(std::move(t)), n_(n), rs_(t_->F(), size_t(n) * t_->M()) {}

  const TowerRef& tower() const { return t_; }
  uint32_t ambient_n() const { return n_; }
  size_t dim() const { return rs_.dim(); }  // dimension over F

  bool insert(const std::vector<uint64_t>& v_K0);   // true if dim grew
  bool contains(const std::vector<uint64_t>& v_K0) const;
  bool insert_down(std::vector<uint64_t> w_F);      // already in F-coords

  // reduced basis mapped back to K0^n
  std::vector<std::vector<uint64_t>> basis_K0() const;
  const RowSpace& rows() const { return rs_; }
  RowSpace& rows() { return rs_; }

  FSubspace intersect(const FSubspace& o) const;
  bool same(const FSubspace& o) const { return rs_.same(o.rs_); }

  // enumerate all q^dim member vectors (use with care; budget-checked)
  std::vector<std::vector<uint64_t>> enumerate(uint64_t budget = 1u << 20) const;

 private:
  TowerRef t_;
  uint32_t n_ = 0;
  RowSpace rs_;
};

}  // namespace zk
