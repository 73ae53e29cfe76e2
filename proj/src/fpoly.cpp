#include "zk/fpoly.hpp"

#include <algorithm>

namespace zk {
namespace fp {

void trim(const Field& F, P& f) {
  (void)F;
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int deg(const P& f) { return int(f.size()) - 1; }

P add(const Field& F, P a, const P& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = F.add(a[i], b[i]);
  trim(F, a);
  return a;
}

P sub(const Field& F, P a, const P& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
  trim(F, a);
  return a;
}

P mul(const Field& F, const P& a, const P& b) {
  if (a.empty() || b.empty()) return {};
  P c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (b[j]) c[i + j] = F.add(c[i + j], F.mul(a[i], b[j]));
  }
  trim(F, c);
  return c;
}

P scale(const Field& F, P a, uint64_t c) {
  for (auto& x : a) x = F.mul(x, c);
  trim(F, a);
  return a;
}

P monic(const Field& F, P f) {
  trim(F, f);
  if (f.empty()) return f;
  return scale(F, std::move(f), F.inv(f.back()));
}

P divmod(const Field& F, P a, const P& b, P* rem) {
  trim(F, a);
  check(!b.empty(), "division by zero polynomial");
  P q;
  uint64_t binv = F.inv(b.back());
  while (a.size() >= b.size() && !a.empty()) {
    size_t shift = a.size() - b.size();
    uint64_t c = F.mul(a.back(), binv);
    if (q.size() < shift + 1) q.resize(shift + 1, 0);
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i)
      a[shift + i] = F.sub(a[shift + i], F.mul(c, b[i]));
    trim(F, a);
  }
  if (rem) *rem = a;
  trim(F, q);
  return q;
}

P mod(const Field& F, const P& a, const P& b) {
  P r;
  divmod(F, a, b, &r);
  return r;
}

P gcd(const Field& F, P a, P b) {
  trim(F, a);
  trim(F, b);
  while (!b.empty()) {
    P r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(F, a);
}

P xgcd(const Field& F, P a, P b, P* s, P* t) {
  P s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
  trim(F, a);
  trim(F, b);
  while (!b.empty()) {
    P r;
    P q = divmod(F, a, b, &r);
    a = std::move(b);
    b = std::move(r);
    P s2 = sub(F, s0, mul(F, q, s1));
    P t2 = sub(F, t0, mul(F, q, t1));
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  // normalize to monic gcd
  if (!a.empty()) {
    uint64_t c = F.inv(a.back());
    a = scale(F, std::move(a), c);
    s0 = scale(F, std::move(s0), c);
    t0 = scale(F, std::move(t0), c);
  }
  if (s) *s = s0;
  if (t) *t = t0;
  return a;
}

P powmod(const Field& F, P base, uint64_t e, const P& m) {
  P r = {1};
  base = mod(F, base, m);
  while (e) {
    if (e & 1) r = mod(F, mul(F, r, base), m);
    base = mod(F, mul(F, base, base), m);
    e >>= 1;
  }
  return r;
}

P derivative(const Field& F, const P& f) {
  P d;
  for (size_t i = 1; i < f.size(); ++i) {
    uint64_t c = 0;
    for (uint64_t k = 0; k < i % F.p(); ++k) c = F.add(c, f[i]);
    d.push_back(c);
  }
  trim(F, d);
  return d;
}

uint64_t eval(const Field& F, const P& f, uint64_t x) {
  uint64_t r = 0;
  for (size_t i = f.size(); i-- > 0;) r = F.add(F.mul(r, x), f[i]);
  return r;
}

bool is_irreducible(const Field& F, const P& f0) {
  P f = monic(F, f0);
  int n = deg(f);
  if (n <= 0) return false;
  if (n == 1) return true;
  P x = {0, 1};
  // x^(q^n) == x mod f and gcd(x^(q^(n/l)) - x, f) = 1 for primes l | n
  auto qpow_x = [&](uint64_t e) {
    P r = x;
    for (uint64_t i = 0; i < e; ++i) r = powmod(F, r, F.size(), f);
    return r;
  };
  P xn = qpow_x(n);
  if (sub(F, xn, x) != P{}) return false;
  for (int l = 2; l <= n; ++l) {
    if (n % l) continue;
    bool prime = true;
    for (int d = 2; d * d <= l; ++d)
      if (l % d == 0) prime = false;
    if (!prime) continue;
    P g = gcd(F, sub(F, qpow_x(uint64_t(n / l)), x), f);
    if (deg(g) != 0) return false;
  }
  return true;
}

namespace {

// Berlekamp splitting of a monic squarefree polynomial
void factor_squarefree(const Field& F, const P& f,
                       std::vector<P>& out) {
  int n = deg(f);
  if (n <= 0) return;
  if (n == 1) {
    out.push_back(f);
    return;
  }
  // Berlekamp Q-matrix: rows are x^(q*i) mod f
  std::vector<P> rows;
  P xq = powmod(F, {0, 1}, F.size(), f);
  P cur = {1};
  for (int i = 0; i < n; ++i) {
    rows.push_back(cur);
    cur = mod(F, mul(F, cur, xq), f);
  }
  // kernel of (Q - I)^T acting on coefficient vectors
  // build matrix with columns = rows[i] - e_i
  std::vector<std::vector<uint64_t>> m(n, std::vector<uint64_t>(n, 0));
  for (int i = 0; i < n; ++i) {
    P r = rows[i];
    r.resize(n, 0);
    for (int j = 0; j < n; ++j) m[j][i] = r[j];
    m[i][i] = F.sub(m[i][i], 1);
  }
  // kernel via local elimination
  // reuse zk::Mat by copying (field handle needed)
  // columns are unknowns
  // -- fall through to simple elimination below
  std::vector<std::vector<uint64_t>> a = m;
  std::vector<int> pivot_col_of_row;
  std::vector<int> pivot_row_of_col(n, -1);
  int rr = 0;
  for (int c = 0; c < n && rr < n; ++c) {
    int piv = -1;
    for (int i = rr; i < n; ++i)
      if (a[i][c]) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[rr], a[piv]);
    uint64_t iv = F.inv(a[rr][c]);
    for (int j = 0; j < n; ++j) a[rr][j] = F.mul(a[rr][j], iv);
    for (int i = 0; i < n; ++i) {
      if (i == rr || !a[i][c]) continue;
      uint64_t fac = a[i][c];
      for (int j = 0; j < n; ++j)
        a[i][j] = F.sub(a[i][j], F.mul(fac, a[rr][j]));
    }
    pivot_row_of_col[c] = rr;
    pivot_col_of_row.push_back(c);
    ++rr;
  }
  std::vector<P> kernel;
  for (int c = 0; c < n; ++c) {
    if (pivot_row_of_col[c] >= 0) continue;
    P v(n, 0);
    v[c] = 1;
    for (int cc = 0; cc < n; ++cc) {
      int pr = pivot_row_of_col[cc];
      if (pr >= 0) v[cc] = F.neg(a[pr][c]);
    }
    trim(F, v);
    kernel.push_back(v);
  }
  if (kernel.size() <= 1) {
    out.push_back(f);  // irreducible
    return;
  }
  // split with a non-constant kernel element
  for (auto& v : kernel) {
    if (deg(v) < 1) continue;
    for (uint64_t c = 0; c < F.size(); ++c) {
      P shifted = v;
      if (shifted.empty()) shifted = {F.neg(c)};
      else
        shifted[0] = F.sub(shifted[0], c);
      P g = gcd(F, shifted, f);
      if (deg(g) > 0 && deg(g) < n) {
        factor_squarefree(F, monic(F, g), out);
        factor_squarefree(F, monic(F, divmod(F, f, g, nullptr)), out);
        return;
      }
    }
  }
  check(false, "berlekamp split found");
}

}  // namespace

std::vector<std::pair<P, uint32_t>> factor(const Field& F, const P& f0) {
  std::vector<std::pair<P, uint32_t>> out;
  P f = monic(F, f0);
  check(deg(f) >= 1, "factor nonconstant polynomial");
  // multiplicity-aware recursion
  std::vector<std::pair<P, uint32_t>> stack = {{f, 1}};
  while (!stack.empty()) {
    auto [g, mult] = stack.back();
    stack.pop_back();
    if (deg(g) < 1) continue;
    P d = derivative(F, g);
    if (d.empty()) {
      // g = h(x^p): p-th root of coefficients, h^p structure
      uint32_t p = F.p();
      P h;
      for (size_t i = 0; i < g.size(); i += p)
        h.push_back(F.frobenius_inv(g[i], 1));
      stack.push_back({monic(F, h), mult * p});
      continue;
    }
    P gg = gcd(F, g, d);
    if (deg(gg) == 0) {
      std::vector<P> irr;
      factor_squarefree(F, g, irr);
      for (auto& fi : irr) {
        bool merged = false;
        for (auto& [fo, mo] : out)
          if (fo == fi) {
            mo += mult;
            merged = true;
          }
        if (!merged) out.push_back({fi, mult});
      }
      continue;
    }
    stack.push_back({gg, mult});
    stack.push_back({monic(F, divmod(F, g, gg, nullptr)), mult});
  }
  // consolidate duplicates (from the a = gg * (g/gg) split)
  std::vector<std::pair<P, uint32_t>> res;
  for (auto& [fi, mi] : out) {
    bool merged = false;
    for (auto& [fr, mr] : res)
      if (fr == fi) {
        mr += mi;
        merged = true;
      }
    if (!merged) res.push_back({fi, mi});
  }
  std::sort(res.begin(), res.end());
  return res;
}

}  // namespace fp
}  // namespace zk
