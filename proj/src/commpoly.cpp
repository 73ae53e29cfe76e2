#include "zk/commpoly.hpp"

#include <algorithm>
#include <sstream>

namespace zk {

uint32_t CommPoly::total_degree() const {
  uint32_t d = 0;
  for (auto& [e, c] : monomials) {
    uint32_t s = 0;
    for (auto x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

CommPoly cp_make(TowerRef t, uint32_t n,
                 std::vector<std::pair<std::vector<uint32_t>, uint64_t>> mons) {
  CommPoly f;
  f.t = t;
  f.n = n;
  const auto& K = *t->K();
  for (auto& [e, c] : mons) {
    check(e.size() == n, "exponent vector length");
    if (!c) continue;
    auto it = f.monomials.find(e);
    if (it == f.monomials.end())
      f.monomials[e] = c % K.size();
    else {
      it->second = K.add(it->second, c);
      if (!it->second) f.monomials.erase(it);
    }
  }
  return f;
}

CommPoly cp_zero(TowerRef t, uint32_t n) {
  CommPoly f;
  f.t = std::move(t);
  f.n = n;
  return f;
}

CommPoly cp_add(const CommPoly& a, const CommPoly& b) {
  check(a.n == b.n, "variable counts agree");
  CommPoly r = a;
  const auto& K = *a.t->K();
  for (auto& [e, c] : b.monomials) {
    auto it = r.monomials.find(e);
    if (it == r.monomials.end())
      r.monomials[e] = c;
    else {
      it->second = K.add(it->second, c);
      if (!it->second) r.monomials.erase(it);
    }
  }
  return r;
}

CommPoly cp_scale(const CommPoly& a, uint64_t c) {
  CommPoly r = cp_zero(a.t, a.n);
  if (!c) return r;
  const auto& K = *a.t->K();
  for (auto& [e, cc] : a.monomials) r.monomials[e] = K.mul(cc, c);
  return r;
}

CommPoly cp_mul(const CommPoly& a, const CommPoly& b) {
  check(a.n == b.n, "variable counts agree");
  CommPoly r = cp_zero(a.t, a.n);
  const auto& K = *a.t->K();
  for (auto& [ea, ca] : a.monomials)
    for (auto& [eb, cb] : b.monomials) {
      std::vector<uint32_t> e(a.n);
      for (uint32_t i = 0; i < a.n; ++i) e[i] = ea[i] + eb[i];
      uint64_t c = K.mul(ca, cb);
      auto it = r.monomials.find(e);
      if (it == r.monomials.end())
        r.monomials[e] = c;
      else {
        it->second = K.add(it->second, c);
        if (!it->second) r.monomials.erase(it);
      }
    }
  return r;
}

uint64_t cp_eval(const CommPoly& f, const std::vector<uint64_t>& v) {
  check(v.size() == f.n, "point dimension");
  const auto& K = *f.t->K();
  uint64_t acc = 0;
  for (auto& [e, c] : f.monomials) {
    uint64_t m = c;
    for (uint32_t i = 0; i < f.n && m; ++i)
      if (e[i]) m = K.mul(m, K.pow(v[i], e[i]));
    acc = K.add(acc, m);
  }
  return acc;
}

CommPoly cp_from_qpoly(const QPolynomial& f) {
  CommPoly r = cp_zero(f.t, f.n);
  const auto& K = *f.t->K();
  uint64_t q = f.t->q();
  for (auto& tm : f.terms) {
    uint64_t deg = 1;
    for (uint32_t i = 0; i < tm.e; ++i) deg *= q;
    std::vector<uint32_t> e(f.n, 0);
    e[tm.var] = uint32_t(deg);
    auto it = r.monomials.find(e);
    if (it == r.monomials.end())
      r.monomials[e] = tm.c;
    else
      it->second = K.add(it->second, tm.c);
  }
  return r;
}

bool cp_is_qpoly(const CommPoly& f, QPolynomial* out) {
  const uint64_t q = f.t->q();
  std::vector<QTerm> terms;
  for (auto& [e, c] : f.monomials) {
    int var = -1;
    for (uint32_t i = 0; i < f.n; ++i)
      if (e[i]) {
        if (var >= 0) return false;  // mixed monomial
        var = int(i);
      }
    if (var < 0) return false;  // constant term
    uint64_t d = e[var], qe = 0;
    while (d > 1) {
      if (d % q) return false;
      d /= q;
      ++qe;
    }
    terms.push_back({uint32_t(var), uint32_t(qe), c});
  }
  if (out) *out = qp_make(f.t, f.n, terms);
  return true;
}

uint64_t binom_mod_p(uint64_t n, uint64_t k, uint32_t p) {
  uint64_t r = 1;
  while (n || k) {
    uint64_t nd = n % p, kd = k % p;
    if (kd > nd) return 0;
    uint64_t c = 1;
    for (uint64_t i = 0; i < kd; ++i) c = c * (nd - i) / (i + 1);
    r = r * (c % p) % p;
    n /= p;
    k /= p;
  }
  return r;
}

std::string CommPoly::str() const {
  if (monomials.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [e, c] : monomials) {
    if (!first) os << " + ";
    bool any = false;
    if (c != 1) {
      os << t->K()->str(c);
      any = true;
    }
    for (uint32_t i = 0; i < n; ++i) {
      if (!e[i]) continue;
      if (any) os << "*";
      os << "L" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
      any = true;
    }
    if (!any) os << "1";
    first = false;
  }
  return os.str();
}

}  // namespace zk
