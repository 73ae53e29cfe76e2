#include "zk/tower.hpp"

#include <map>
#include <mutex>

namespace zk {

Tower::Tower(FieldRef F, FieldRef K0)
    : F_(std::move(F)), K0_(std::move(K0)), emb_(F_, K0_) {
  M_ = K0_->k() / F_->k();
}

TowerRef Tower::make(FieldRef F, FieldRef K0) {
  return TowerRef(new Tower(std::move(F), std::move(K0)));
}

TowerRef Tower::make(uint32_t p, uint32_t q_exp, uint32_t M) {
  auto F = Field::make(p, q_exp);
  auto K0 = Field::make(p, q_exp * M);
  return make(F, K0);
}

std::vector<uint64_t> Tower::subfield_elements(uint32_t d) const {
  std::vector<uint64_t> out;
  for (uint64_t a = 0; a < K0_->size(); ++a)
    if (in_level(a, d)) out.push_back(a);
  return out;
}

std::vector<uint64_t> Tower::down(const std::vector<uint64_t>& v) const {
  std::vector<uint64_t> w(v.size() * M_);
  for (size_t i = 0; i < v.size(); ++i) emb_.coords(v[i], w.data() + i * M_);
  return w;
}

std::vector<uint64_t> Tower::up(const std::vector<uint64_t>& w) const {
  check(w.size() % M_ == 0, "coordinate length");
  std::vector<uint64_t> v(w.size() / M_);
  for (size_t i = 0; i < v.size(); ++i)
    v[i] = emb_.from_coords(w.data() + i * M_);
  return v;
}

bool FSubspace::insert(const std::vector<uint64_t>& v_K0) {
  check(v_K0.size() == n_, "ambient dimension");
  return rs_.insert(t_->down(v_K0));
}

bool FSubspace::insert_down(std::vector<uint64_t> w_F) {
  return rs_.insert(std::move(w_F));
}

bool FSubspace::contains(const std::vector<uint64_t>& v_K0) const {
  check(v_K0.size() == n_, "ambient dimension");
  return rs_.contains(t_->down(v_K0));
}

std::vector<std::vector<uint64_t>> FSubspace::basis_K0() const {
  std::vector<std::vector<uint64_t>> out;
  out.reserve(rs_.dim());
  for (auto& r : rs_.rows()) out.push_back(t_->up(r));
  return out;
}

FSubspace FSubspace::intersect(const FSubspace& o) const {
  FSubspace r(t_, n_);
  r.rs_ = rs_.intersect(o.rs_);
  return r;
}

std::vector<std::vector<uint64_t>> FSubspace::enumerate(uint64_t budget) const {
  const uint64_t q = t_->q();
  uint64_t count = 1;
  for (size_t i = 0; i < dim(); ++i) {
    count *= q;
    if (count > budget) throw BudgetExceeded("subspace enumeration");
  }
  auto basis = basis_K0();
  std::vector<std::vector<uint64_t>> out;
  out.reserve(count);
  std::vector<uint64_t> idx(dim(), 0);
  std::vector<uint64_t> cur(n_, 0);
  const auto& K = *t_->K();
  for (uint64_t c = 0; c < count; ++c) {
    uint64_t t = c;
    std::fill(cur.begin(), cur.end(), 0);
    for (size_t i = 0; i < dim(); ++i) {
      uint64_t coef = t % q;
      t /= q;
      if (coef)
        for (uint32_t j = 0; j < n_; ++j)
          cur[j] = K.add(cur[j], t_->fmul(coef, basis[i][j]));
    }
    out.push_back(cur);
  }
  return out;
}

}  // namespace zk
