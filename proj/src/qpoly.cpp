#include "zk/qpoly.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace zk {

QPolynomial qp_make(TowerRef t, uint32_t n, std::vector<QTerm> terms) {
  std::map<std::pair<uint32_t, uint32_t>, uint64_t> acc;
  const auto& K = *t->K();
  for (auto& tm : terms) {
    check(tm.var < n, "term variable in range");
    auto key = std::make_pair(tm.var, tm.e);
    auto it = acc.find(key);
    if (it == acc.end())
      acc[key] = tm.c % K.size();
    else
      it->second = K.add(it->second, tm.c);
  }
  QPolynomial f;
  f.t = std::move(t);
  f.n = n;
  for (auto& [key, c] : acc)
    if (c) f.terms.push_back({key.first, key.second, c});
  return f;
}

QPolynomial qp_add(const QPolynomial& a, const QPolynomial& b) {
  check(a.n == b.n, "variable counts agree");
  auto terms = a.terms;
  terms.insert(terms.end(), b.terms.begin(), b.terms.end());
  return qp_make(a.t, a.n, std::move(terms));
}

QPolynomial qp_scale(const QPolynomial& a, uint64_t c) {
  QPolynomial r;
  r.t = a.t;
  r.n = a.n;
  if (!c) return r;
  const auto& K = *a.t->K();
  for (auto tm : a.terms) {
    tm.c = K.mul(tm.c, c);
    r.terms.push_back(tm);
  }
  return r;
}

QPolynomial qp_twist(const QPolynomial& a, uint32_t s) {
  QPolynomial r;
  r.t = a.t;
  r.n = a.n;
  for (auto tm : a.terms) {
    tm.c = a.t->qpow(tm.c, s);
    tm.e += s;
    r.terms.push_back(tm);
  }
  return r;
}

QPolynomial qp_monic(const QPolynomial& a) {
  if (a.zero()) return a;
  return qp_scale(a, a.t->K()->inv(a.terms.front().c));
}

uint64_t evaluate(const QPolynomial& f, const std::vector<uint64_t>& v) {
  if (v.size() != f.n) throw MixedFields("point dimension mismatch");
  const auto& K = *f.t->K();
  uint64_t acc = 0;
  for (auto& tm : f.terms)
    acc = K.add(acc, K.mul(tm.c, f.t->qpow(v[tm.var], tm.e)));
  return acc;
}

QPolynomial q_root_normalize(QPolynomial f) {
  check(!f.zero(), "q-root of nonzero polynomial");
  for (;;) {
    bool all_pos = true;
    for (auto& tm : f.terms)
      if (tm.e == 0) {
        all_pos = false;
        break;
      }
    if (!all_pos) return f;
    for (auto& tm : f.terms) {
      tm.e -= 1;
      tm.c = f.t->qroot(tm.c, 1);
    }
  }
}

namespace {

// largest phi-exponent of lambda_i in f, or -1
int top_exp(const QPolynomial& f, uint32_t i) {
  int e = -1;
  for (auto& tm : f.terms)
    if (tm.var == i) e = std::max(e, int(tm.e));
  return e;
}

uint64_t coeff_at(const QPolynomial& f, uint32_t i, uint32_t e) {
  for (auto& tm : f.terms)
    if (tm.var == i && tm.e == e) return tm.c;
  return 0;
}

int leading_var(const QPolynomial& f) {
  return f.zero() ? -1 : int(f.terms.front().var);
}

}  // namespace

std::pair<QPolynomial, QPolynomial> eliminate_variable(QPolynomial f1,
                                                       QPolynomial f2,
                                                       uint32_t i) {
  if (top_exp(f1, i) < 0 || top_exp(f2, i) < 0) return {f1, f2};
  const auto& K = *f1.t->K();
  for (;;) {
    int e1 = top_exp(f1, i), e2 = top_exp(f2, i);
    if (e1 < 0 || e2 < 0) break;
    bool first_high = e1 > e2;
    QPolynomial& hi = first_high ? f1 : f2;
    const QPolynomial& lo = first_high ? f2 : f1;
    uint32_t ehi = uint32_t(first_high ? e1 : e2);
    uint32_t elo = uint32_t(first_high ? e2 : e1);
    uint32_t s = ehi - elo;
    uint64_t chi = coeff_at(hi, i, ehi);
    uint64_t clo = coeff_at(lo, i, elo);
    uint64_t factor = K.mul(chi, K.inv(f1.t->qpow(clo, s)));
    hi = qp_add(hi, qp_scale(qp_twist(lo, s), K.neg(factor)));
  }
  return {f1, f2};
}

RelationModule module_reduce(TowerRef t, uint32_t n,
                             std::vector<QPolynomial> gens) {
  std::vector<QPolynomial> pool;
  for (auto& g : gens)
    if (!g.zero()) pool.push_back(g);
  std::vector<QPolynomial> pivots;
  for (uint32_t var = 0; var < n; ++var) {
    // bring the pool to a state where at most one entry involves lambda_var
    for (;;) {
      std::vector<size_t> holders;
      for (size_t j = 0; j < pool.size(); ++j)
        if (top_exp(pool[j], var) >= 0) holders.push_back(j);
      if (holders.size() <= 1) break;
      // deterministic: pair the largest top degree against the smallest
      size_t a = holders[0];
      for (size_t h : holders)
        if (top_exp(pool[h], var) < top_exp(pool[a], var)) a = h;
      size_t b = holders[0] == a ? holders[1] : holders[0];
      for (size_t h : holders)
        if (h != a && top_exp(pool[h], var) > top_exp(pool[b], var)) b = h;
      auto [ra, rb] = eliminate_variable(pool[a], pool[b], var);
      pool[a] = ra;
      pool[b] = rb;
      pool.erase(std::remove_if(pool.begin(), pool.end(),
                                [](const QPolynomial& f) { return f.zero(); }),
                 pool.end());
    }
    // extract the pivot for this variable, if any
    for (size_t j = 0; j < pool.size(); ++j)
      if (top_exp(pool[j], var) >= 0) {
        pivots.push_back(qp_monic(q_root_normalize(pool[j])));
        pool.erase(pool.begin() + j);
        break;
      }
  }
  check(pool.empty(), "module_reduce pool drained");
  std::sort(pivots.begin(), pivots.end(),
            [](const QPolynomial& a, const QPolynomial& b) {
              return leading_var(a) < leading_var(b);
            });
  RelationModule mod;
  mod.t = std::move(t);
  mod.n = n;
  mod.gens = std::move(pivots);
  check(mod.gens.size() <= n, "generator count bound");
  return mod;
}

QPolynomial module_reduce_element(const RelationModule& mod, QPolynomial f) {
  const auto& K = *mod.t->K();
  for (;;) {
    bool progressed = false;
    for (auto& p : mod.gens) {
      if (p.zero()) continue;
      uint32_t lv = uint32_t(leading_var(p));
      int etop_p = top_exp(p, lv);
      for (;;) {
        int e = top_exp(f, lv);
        if (e < etop_p) break;
        uint32_t s = uint32_t(e - etop_p);
        uint64_t cf = coeff_at(f, lv, uint32_t(e));
        uint64_t cp = f.t->qpow(coeff_at(p, lv, uint32_t(etop_p)), s);
        f = qp_add(f, qp_scale(qp_twist(p, s), K.neg(K.mul(cf, K.inv(cp)))));
        progressed = true;
      }
    }
    if (f.zero()) return f;
    bool all_pos = true;
    for (auto& tm : f.terms)
      if (tm.e == 0) all_pos = false;
    if (all_pos) {
      f = q_root_normalize(std::move(f));
      progressed = true;
    }
    if (!progressed) return f;
  }
}

FSubspace kernel(const RelationModule& mod, uint32_t m) {
  const auto& t = *mod.t;
  uint32_t M = t.M();
  uint32_t L = std::lcm(m, M);
  auto F = t.F();
  auto Km = m == M ? t.K() : Field::make(F->p(), F->k() * m);
  auto KL = L == M ? t.K() : (L == m ? Km : Field::make(F->p(), F->k() * L));
  auto tm_tower = m == M ? mod.t : Tower::make(F, Km);
  auto tL = L == M ? mod.t : (L == m ? tm_tower : Tower::make(F, KL));
  SubfieldMap m_to_L(Km, KL);
  SubfieldMap K0_to_L(t.K(), KL);

  const uint32_t n = mod.n;
  const size_t dom = size_t(n) * m;
  // stacked F-linear evaluation maps, one block of L rows per generator
  Mat sys(F, mod.gens.size() * L, dom);
  for (size_t col = 0; col < dom; ++col) {
    uint32_t var = uint32_t(col / m);
    uint32_t b = uint32_t(col % m);
    // basis point: g_m^b at coordinate var
    uint64_t val = Km->pow(Km->gen(), b);
    uint64_t val_L = m_to_L.to_sup(val);
    for (size_t gi = 0; gi < mod.gens.size(); ++gi) {
      uint64_t acc = 0;
      for (auto& tmq : mod.gens[gi].terms) {
        if (tmq.var != var) continue;
        uint64_t c_L = K0_to_L.to_sup(tmq.c);
        acc = KL->add(acc, KL->mul(c_L, tL->qpow(val_L, tmq.e)));
      }
      auto coords = tL->down({acc});
      for (uint32_t r = 0; r < L; ++r) sys.at(gi * L + r, col) = coords[r];
    }
  }
  Mat null = sys.kernel();
  FSubspace out(tm_tower, n);
  for (size_t i = 0; i < null.rows(); ++i) out.insert_down(null.row(i));
  return out;
}

size_t kernel_dim(const RelationModule& mod, uint32_t m) {
  return kernel(mod, m).dim();
}

std::string QPolynomial::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& tm : terms) {
    if (!first) os << " + ";
    if (tm.c != 1) os << t->K()->str(tm.c) << "*";
    os << "L" << (tm.var + 1);
    if (tm.e) os << "^(q^" << tm.e << ")";
    first = false;
  }
  return os.str();
}

std::string RelationModule::str() const {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < gens.size(); ++i)
    os << (i ? "; " : "") << gens[i].str();
  os << "}";
  return os.str();
}

}  // namespace zk
