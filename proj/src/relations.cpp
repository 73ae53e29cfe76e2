#include "zk/relations.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace zk {

CommPoly delta(const CommPoly& f, const std::vector<uint64_t>& a) {
  check(a.size() == f.n, "translation point dimension");
  const auto& K = *f.t->K();
  const uint32_t p = K.p();
  CommPoly shifted = cp_zero(f.t, f.n);
  for (auto& [e, c] : f.monomials) {
    // expand c * prod (L_i + a_i)^(e_i)
    CommPoly acc = cp_make(f.t, f.n, {{std::vector<uint32_t>(f.n, 0), c}});
    for (uint32_t i = 0; i < f.n; ++i) {
      if (!e[i]) continue;
      CommPoly factor = cp_zero(f.t, f.n);
      for (uint32_t d = 0; d <= e[i]; ++d) {
        uint64_t bc = binom_mod_p(e[i], d, p);
        if (!bc) continue;
        uint64_t coef = K.mul(K.from_prime(bc), K.pow(a[i], e[i] - d));
        if (!coef) continue;
        std::vector<uint32_t> ee(f.n, 0);
        ee[i] = d;
        factor.monomials[ee] = coef;
      }
      acc = cp_mul(acc, factor);
    }
    shifted = cp_add(shifted, acc);
  }
  return cp_add(shifted, cp_scale(f, K.neg(1)));
}

CommPoly nabla(const CommPoly& f, uint64_t alpha, uint32_t d) {
  const auto& K = *f.t->K();
  CommPoly r = cp_zero(f.t, f.n);
  uint64_t ad = K.pow(alpha, d);
  for (auto& [e, c] : f.monomials) {
    uint32_t deg = 0;
    for (auto x : e) deg += x;
    uint64_t coef = K.sub(K.mul(c, K.pow(alpha, deg)), K.mul(c, ad));
    if (coef) r.monomials[e] = coef;
  }
  return r;
}

RelationModule annihilator(const FSubspace& A, uint32_t E) {
  const auto& t = A.tower();
  const uint32_t n = A.ambient_n();
  if (E == 0) E = t->M();
  auto basis = A.basis_K0();
  const size_t unknowns = size_t(n) * E;
  Mat sys(t->K(), basis.size(), unknowns);
  for (size_t r = 0; r < basis.size(); ++r)
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t e = 0; e < E; ++e)
        sys.at(r, size_t(i) * E + e) = t->qpow(basis[r][i], e);
  Mat null = sys.kernel();
  std::vector<QPolynomial> gens;
  for (size_t r = 0; r < null.rows(); ++r) {
    std::vector<QTerm> terms;
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t e = 0; e < E; ++e) {
        uint64_t c = null.at(r, size_t(i) * E + e);
        if (c) terms.push_back({i, e, c});
      }
    gens.push_back(qp_make(t, n, std::move(terms)));
  }
  return module_reduce(t, n, std::move(gens));
}

std::vector<QPolynomial> reduce_to_weak_frobenius(const CommPoly& f,
                                                  const FSubspace& A,
                                                  uint32_t E,
                                                  DescentCertificate* cert) {
  const auto& t = A.tower();
  if (E == 0) E = t->M();
  if (f.zero()) return {};
  // f must vanish on all of A
  auto points = A.enumerate();
  for (auto& v : points)
    if (cp_eval(f, v) != 0) throw NotARelation("polynomial does not vanish");

  if (cert) {
    // the delta/nabla descent at desk scale, collecting q-polynomial
    // relations encountered on the way down
    auto basis = A.basis_K0();
    CommPoly cur = f;
    cert->trail.push_back(cur);
    QPolynomial qp;
    const auto& F = *t->F();
    while (!cur.zero() && cur.total_degree() >= 1) {
      if (cp_is_qpoly(cur, &qp)) cert->found.push_back(qp);
      CommPoly next = cur;
      bool moved = false;
      for (auto& b : basis) {
        CommPoly d = delta(cur, b);
        if (!d.zero() && d.total_degree() < cur.total_degree()) {
          next = d;
          moved = true;
          break;
        }
      }
      if (!moved)
        for (uint64_t al = 2; al < F.size() && !moved; ++al) {
          CommPoly d = nabla(cur, t->emb().to_sup(al), cur.total_degree());
          if (!d.zero() && d.monomial_count() < cur.monomial_count()) {
            next = d;
            moved = true;
          }
        }
      if (!moved) break;
      cur = next;
      cert->trail.push_back(cur);
    }
  }

  auto mod = annihilator(A, E);
  // post: every generator vanishes on A, and f vanishes on the rational
  // zero set of the generators (semantic ideal-membership surrogate)
  for (auto& g : mod.gens)
    for (auto& v : points) check(evaluate(g, v) == 0, "annihilator vanishes");
  return mod.gens;
}

CommPoly FrobRelation::as_commpoly(TowerRef t, uint32_t n) const {
  switch (kind) {
    case Zero:
      return cp_zero(t, n);
    case SingleVar: {
      std::vector<uint32_t> e(n, 0);
      e[i] = 1;
      return cp_make(t, n, {{e, 1}});
    }
    case SelfPower:
    case CrossPower: {
      std::vector<uint32_t> e1(n, 0), e2(n, 0);
      e1[i] = 1;
      e2[kind == SelfPower ? i : j] = uint32_t(s);
      auto neg = t->K()->neg(1);
      return cp_make(t, n, {{e1, 1}, {e2, neg}});
    }
  }
  return cp_zero(t, n);
}

FrobRelation frobenius_type_normalize(const CommPoly& rel, const FSubspace& A) {
  const auto& t = rel.t;
  const uint32_t p = t->F()->p();
  struct Part {
    uint32_t var;
    uint64_t deg;
    uint64_t coef;
  };
  std::vector<Part> parts;
  for (auto& [e, c] : rel.monomials) {
    int var = -1;
    for (uint32_t i = 0; i < rel.n; ++i)
      if (e[i]) {
        check(var < 0, "binomial relation has univariate monomials");
        var = int(i);
      }
    check(var >= 0, "binomial relation has no constant term");
    parts.push_back({uint32_t(var), e[uint32_t(var)], c});
  }
  check(parts.size() >= 1 && parts.size() <= 2, "one or two monomials");
  if (parts.size() == 1) return {FrobRelation::SingleVar, parts[0].var, 0, 1};

  Part lo = parts[0], hi = parts[1];
  if (lo.deg > hi.deg) std::swap(lo, hi);
  // strip common p-th powers (q-root steps in the gluing lemma)
  while (lo.deg % p == 0 && hi.deg % p == 0) {
    lo.deg /= p;
    hi.deg /= p;
    lo.coef = t->K()->frobenius_inv(lo.coef, 1);
    hi.coef = t->K()->frobenius_inv(hi.coef, 1);
  }
  auto p_power = [p](uint64_t d) {
    while (d > 1) {
      if (d % p) return false;
      d /= p;
    }
    return d == 1;
  };
  const auto& K = *t->K();
  bool monic = K.add(lo.coef, hi.coef) == 0;
  if (lo.var == hi.var) {
    // single-variable: the coordinate is pinned to a finite subfield; the
    // relation reduces to lambda - lambda^s when the twist is a p-power
    if (lo.deg == 1 && p_power(hi.deg) && hi.deg > 1 && monic)
      return {FrobRelation::SelfPower, lo.var, lo.var, hi.deg};
    if (lo.deg == hi.deg) return {FrobRelation::SingleVar, lo.var, 0, 1};
    // search the smallest self-power form with the same zero set on A
    for (uint64_t s = p; s <= K.size(); s *= p) {
      bool same = true;
      for (auto& v : A.enumerate()) {
        bool z1 = cp_eval(rel, v) == 0;
        bool z2 = v[lo.var] == K.pow(v[lo.var], s);
        if (z1 != z2) {
          same = false;
          break;
        }
      }
      if (same) return {FrobRelation::SelfPower, lo.var, lo.var, s};
    }
    return {FrobRelation::SingleVar, lo.var, 0, 1};
  }
  // two variables; the gluing case analysis forces the single-variable
  // relation whenever the twist is not a p-power
  if (lo.deg == 1 && p_power(hi.deg) && monic)
    return {FrobRelation::CrossPower, lo.var, hi.var, hi.deg};
  return {FrobRelation::SingleVar, lo.var, 0, 1};
}

namespace {

// capped exponent addition: values >= 1 cycle with period L
uint32_t cap_add(uint32_t x, uint32_t y, uint32_t L) {
  uint64_t z = uint64_t(x) + y;
  if (z <= L) return uint32_t(z);
  return uint32_t((z - 1) % L + 1);
}

struct UF {
  std::vector<uint32_t> par;
  explicit UF(size_t n) : par(n) { std::iota(par.begin(), par.end(), 0); }
  uint32_t find(uint32_t x) {
    while (par[x] != x) x = par[x] = par[par[x]];
    return x;
  }
  bool join(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    par[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

MonoidRelations monoid_relations(TowerRef t,
                                 const std::vector<std::vector<uint64_t>>& S,
                                 bool without_unit, uint64_t budget) {
  check(!S.empty(), "nonempty point set");
  const uint32_t n = uint32_t(S[0].size());
  const auto& K = *t->K();
  // monoid checks
  std::set<std::vector<uint64_t>> set(S.begin(), S.end());
  for (auto& a : S)
    for (auto& b : S) {
      std::vector<uint64_t> ab(n);
      for (uint32_t i = 0; i < n; ++i) ab[i] = K.mul(a[i], b[i]);
      if (!set.count(ab)) throw NotAMonoid("not closed under product");
    }
  if (!without_unit && !set.count(std::vector<uint64_t>(n, 1)))
    throw NotAMonoid("missing unit; pass the without-unit flag");

  MonoidRelations out;
  // minimal vanishing products: over a field a product vanishes iff some
  // factor does, so minimal support sets characterize all vanishing monomials
  std::vector<std::vector<uint32_t>> minimal;
  for (uint32_t size = 1; size <= n; ++size) {
    std::vector<uint32_t> idx(size);
    // enumerate subsets of this size
    std::function<void(uint32_t, uint32_t)> rec = [&](uint32_t pos, uint32_t from) {
      if (pos == size) {
        std::vector<uint32_t> I(idx.begin(), idx.end());
        for (auto& m : minimal)
          if (std::includes(I.begin(), I.end(), m.begin(), m.end())) return;
        for (auto& s : S) {
          uint64_t prod = 1;
          for (auto i : I) prod = K.mul(prod, s[i]);
          if (prod) return;
        }
        minimal.push_back(I);
        return;
      }
      for (uint32_t i = from; i < n; ++i) {
        idx[pos] = i;
        rec(pos + 1, i + 1);
      }
    };
    rec(0, 0);
  }
  out.zero_products = minimal;

  const uint32_t L = uint32_t(K.size() - 1);  // exponent of the unit group
  uint64_t total = 1;
  for (uint32_t i = 0; i < n; ++i) {
    total *= (L + 1);
    if (total > budget) throw BudgetExceeded("monoid exponent enumeration");
  }
  auto decode = [&](uint64_t code) {
    std::vector<uint32_t> e(n);
    for (uint32_t i = 0; i < n; ++i) {
      e[i] = uint32_t(code % (L + 1));
      code /= (L + 1);
    }
    return e;
  };
  auto encode = [&](const std::vector<uint32_t>& e) {
    uint64_t code = 0;
    for (uint32_t i = n; i-- > 0;) code = code * (L + 1) + e[i];
    return code;
  };
  // value profile of every exponent vector; identically-zero monomials are
  // consequences of the vanishing products and are excluded from pairing
  std::vector<std::vector<uint64_t>> profile(total);
  std::vector<bool> all_zero(total);
  for (uint64_t c = 0; c < total; ++c) {
    auto e = decode(c);
    std::vector<uint64_t> prof;
    prof.reserve(S.size());
    bool az = true;
    for (auto& s : S) {
      uint64_t v = 1;
      for (uint32_t i = 0; i < n; ++i)
        if (e[i]) v = K.mul(v, K.pow(s[i], e[i]));
      az &= v == 0;
      prof.push_back(v);
    }
    profile[c] = std::move(prof);
    all_zero[c] = az;
  }
  // graded-lex order over codes
  std::vector<uint64_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](uint64_t a, uint64_t b) {
    auto ea = decode(a), eb = decode(b);
    uint32_t da = 0, db = 0;
    for (auto x : ea) da += x;
    for (auto x : eb) db += x;
    if (da != db) return da < db;
    return ea < eb;
  });
  std::map<std::vector<uint64_t>, uint64_t> rep;  // profile -> first code
  UF uf(total);
  auto closure = [&]() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (uint64_t c = 0; c < total; ++c) {
        uint64_t r = uf.find(uint32_t(c));
        if (r == c) continue;
        auto ec = decode(c), er = decode(uint64_t(r));
        // translation stability: u ~ v implies u+w ~ v+w
        for (uint32_t i = 0; i < n; ++i) {
          auto ec2 = ec, er2 = er;
          ec2[i] = cap_add(ec2[i], 1, L);
          er2[i] = cap_add(er2[i], 1, L);
          changed |= uf.join(uint32_t(encode(ec2)), uint32_t(encode(er2)));
        }
      }
    }
  };
  for (uint64_t code : order) {
    if (all_zero[code]) continue;
    auto it = rep.find(profile[code]);
    if (it == rep.end()) {
      rep[profile[code]] = code;
      continue;
    }
    uint64_t base = it->second;
    if (uf.find(uint32_t(base)) == uf.find(uint32_t(code))) continue;
    out.binomials.push_back({decode(base), decode(code)});
    uf.join(uint32_t(base), uint32_t(code));
    closure();
  }
  return out;
}

std::vector<CommPoly> MonoidRelations::as_polys(TowerRef t, uint32_t n) const {
  std::vector<CommPoly> out;
  for (auto& zp : zero_products) {
    std::vector<uint32_t> e(n, 0);
    for (auto i : zp) e[i] = 1;
    out.push_back(cp_make(t, n, {{e, 1}}));
  }
  auto neg = t->K()->neg(1);
  for (auto& [a, b] : binomials)
    out.push_back(cp_make(t, n, {{a, 1}, {b, neg}}));
  return out;
}

std::vector<CommPoly> identity_to_relations(
    TowerRef t, const std::vector<std::vector<std::vector<uint64_t>>>& sc,
    const NCPolynomial& f,
    const std::vector<std::vector<uint64_t>>& witnesses) {
  const uint32_t n = uint32_t(sc.size());
  const auto& K = *t->K();
  // associativity of the structure constants
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = 0; j < n; ++j)
      for (uint32_t k = 0; k < n; ++k)
        for (uint32_t m2 = 0; m2 < n; ++m2) {
          uint64_t lhs = 0, rhs = 0;
          for (uint32_t l = 0; l < n; ++l) {
            lhs = K.add(lhs, K.mul(sc[i][j][l], sc[l][k][m2]));
            rhs = K.add(rhs, K.mul(sc[j][k][l], sc[i][l][m2]));
          }
          if (lhs != rhs) throw NonAssociative("structure constants");
        }
  check(witnesses.size() + 1 == f.m, "witness count");
  using Elt = std::vector<CommPoly>;  // coordinates in the basis
  auto mul = [&](const Elt& x, const Elt& y) {
    Elt r(n, cp_zero(t, n));
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = 0; j < n; ++j) {
        if (x[i].zero() || y[j].zero()) continue;
        auto prod = cp_mul(x[i], y[j]);
        for (uint32_t k = 0; k < n; ++k)
          if (sc[i][j][k])
            r[k] = cp_add(r[k], cp_scale(prod, sc[i][j][k]));
      }
    return r;
  };
  // x1 = generic element, x_j = witness constants
  std::vector<Elt> args;
  {
    Elt generic(n, cp_zero(t, n));
    for (uint32_t k = 0; k < n; ++k) {
      std::vector<uint32_t> e(n, 0);
      e[k] = 1;
      generic[k] = cp_make(t, n, {{e, 1}});
    }
    args.push_back(generic);
    for (auto& w : witnesses) {
      check(w.size() == n, "witness length");
      Elt c(n, cp_zero(t, n));
      for (uint32_t k = 0; k < n; ++k)
        c[k] = cp_make(t, n, {{std::vector<uint32_t>(n, 0), w[k]}});
      args.push_back(c);
    }
  }
  Elt acc(n, cp_zero(t, n));
  for (auto& [word, coef] : f.terms) {
    check(!word.empty(), "no constant words");
    Elt cur;
    bool first = true;
    for (auto& [var, exp] : word)
      for (uint32_t r = 0; r < exp; ++r) {
        cur = first ? args[var] : mul(cur, args[var]);
        first = false;
      }
    for (uint32_t k = 0; k < n; ++k)
      acc[k] = cp_add(acc[k], cp_scale(cur[k], K.from_prime(coef)));
  }
  return acc;
}

}  // namespace zk
