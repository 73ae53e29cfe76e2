#include "zk/pi.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <set>
#include <sstream>

#include "zk/algebra.hpp"
#include "zk/evalkernel.hpp"

namespace zk {

namespace {

NCWord normalize_word(const NCWord& w) {
  NCWord out;
  for (auto& [v, e] : w) {
    if (!e) continue;
    if (!out.empty() && out.back().first == v)
      out.back().second += e;
    else
      out.push_back({v, e});
  }
  return out;
}

}  // namespace

uint32_t NCPolynomial::degree() const {
  uint32_t d = 0;
  for (auto& [w, c] : terms) {
    uint32_t s = 0;
    for (auto& [v, e] : w) s += e;
    d = std::max(d, s);
  }
  return d;
}

uint32_t NCPolynomial::degree_in(uint32_t var) const {
  uint32_t d = 0;
  for (auto& [w, c] : terms) {
    uint32_t s = 0;
    for (auto& [v, e] : w)
      if (v == var) s += e;
    d = std::max(d, s);
  }
  return d;
}

NCPolynomial nc_make(uint32_t m, uint32_t p,
                     std::vector<std::pair<NCWord, uint32_t>> terms) {
  NCPolynomial f;
  f.m = m;
  f.p = p;
  for (auto& [w, c] : terms) {
    uint32_t cc = c % p;
    if (!cc) continue;
    auto key = normalize_word(w);
    auto it = f.terms.find(key);
    if (it == f.terms.end())
      f.terms[key] = cc;
    else {
      it->second = (it->second + cc) % p;
      if (!it->second) f.terms.erase(it);
    }
  }
  return f;
}

NCPolynomial nc_add(const NCPolynomial& a, const NCPolynomial& b) {
  check(a.p == b.p, "coefficient characteristic");
  NCPolynomial r = a;
  r.m = std::max(a.m, b.m);
  for (auto& [w, c] : b.terms) {
    auto it = r.terms.find(w);
    if (it == r.terms.end())
      r.terms[w] = c;
    else {
      it->second = (it->second + c) % a.p;
      if (!it->second) r.terms.erase(it);
    }
  }
  return r;
}

NCPolynomial nc_scale(const NCPolynomial& a, uint32_t c) {
  NCPolynomial r;
  r.m = a.m;
  r.p = a.p;
  c %= a.p;
  if (!c) return r;
  for (auto& [w, cc] : a.terms) r.terms[w] = (cc * c) % a.p;
  return r;
}

NCPolynomial nc_mul(const NCPolynomial& a, const NCPolynomial& b) {
  check(a.p == b.p, "coefficient characteristic");
  NCPolynomial r;
  r.m = std::max(a.m, b.m);
  r.p = a.p;
  for (auto& [wa, ca] : a.terms)
    for (auto& [wb, cb] : b.terms) {
      NCWord w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      w = normalize_word(w);
      uint32_t c = (ca * cb) % a.p;
      auto it = r.terms.find(w);
      if (it == r.terms.end())
        r.terms[w] = c;
      else {
        it->second = (it->second + c) % a.p;
        if (!it->second) r.terms.erase(it);
      }
    }
  return r;
}

// ---- parser ----

namespace {

struct Parser {
  const std::string& src;
  size_t pos = 0;
  uint32_t p;
  std::vector<std::string>* names;
  std::map<char, uint32_t> vars;

  explicit Parser(const std::string& s, uint32_t p_, std::vector<std::string>* nm)
      : src(s), p(p_), names(nm) {}

  void skip() {
    while (pos < src.size() && std::isspace((unsigned char)src[pos])) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skip();
    return pos < src.size() ? src[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) {
    throw SchemaError("polynomial syntax: " + what + " at position " +
                      std::to_string(pos));
  }

  uint32_t var_index(char c) {
    auto it = vars.find(c);
    if (it != vars.end()) return it->second;
    uint32_t idx = uint32_t(vars.size());
    vars[c] = idx;
    if (names) names->push_back(std::string(1, c));
    return idx;
  }

  uint64_t number() {
    skip();
    check(pos < src.size() && std::isdigit((unsigned char)src[pos]),
          "digit expected");
    uint64_t v = 0;
    while (pos < src.size() && std::isdigit((unsigned char)src[pos]))
      v = v * 10 + (src[pos++] - '0');
    return v;
  }

  NCPolynomial atom() {
    char c = peek();
    if (c == '(') {
      ++pos;
      auto e = expr();
      if (!eat(')')) fail("expected )");
      return e;
    }
    if (c == '[') {
      ++pos;
      auto a = expr();
      if (!eat(',')) fail("expected , in commutator");
      auto b = expr();
      if (!eat(']')) fail("expected ]");
      return nc_add(nc_mul(a, b), nc_scale(nc_mul(b, a), p - 1));
    }
    if (std::isdigit((unsigned char)c)) {
      uint64_t v = number();
      return nc_make(0, p, {{{}, uint32_t(v % p)}});
    }
    if (std::isalpha((unsigned char)c)) {
      ++pos;
      uint32_t idx = var_index(c);
      return nc_make(idx + 1, p, {{{{idx, 1}}, 1}});
    }
    fail("unexpected character");
  }

  NCPolynomial factor() {
    auto a = atom();
    if (eat('^')) {
      uint64_t e = number();
      if (e == 0) fail("zero exponent");
      NCPolynomial r = a;
      for (uint64_t i = 1; i < e; ++i) r = nc_mul(r, a);
      return r;
    }
    return a;
  }

  bool starts_atom() {
    char c = peek();
    return c == '(' || c == '[' || std::isalnum((unsigned char)c);
  }

  NCPolynomial term() {
    auto a = factor();
    for (;;) {
      if (eat('*')) {
        a = nc_mul(a, factor());
        continue;
      }
      if (starts_atom()) {
        a = nc_mul(a, factor());
        continue;
      }
      return a;
    }
  }

  NCPolynomial expr() {
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    auto a = term();
    if (neg) a = nc_scale(a, p - 1);
    for (;;) {
      if (eat('+')) {
        a = nc_add(a, term());
        continue;
      }
      if (eat('-')) {
        a = nc_add(a, nc_scale(term(), p - 1));
        continue;
      }
      return a;
    }
  }
};

}  // namespace

NCPolynomial parse_ncpoly(const std::string& src, uint32_t p,
                          std::vector<std::string>* var_names) {
  Parser ps(src, p, var_names);
  auto f = ps.expr();
  ps.skip();
  if (ps.pos != src.size()) ps.fail("trailing input");
  f.m = uint32_t(ps.vars.size());
  return f;
}

Mat nc_eval(const NCPolynomial& f, const std::vector<Mat>& args,
            const TowerRef& t) {
  check(args.size() >= f.m, "argument count");
  uint32_t n = args.empty() ? 1 : uint32_t(args[0].rows());
  Mat acc(t->K(), n, n);
  for (auto& [w, c] : f.terms) {
    Mat cur = Mat::identity(t->K(), n);
    for (auto& [v, e] : w) cur = cur * args[v].pow(e);
    acc = acc + cur.scaled(t->K()->from_prime(c));
  }
  return acc;
}

std::vector<NCPolynomial> blend(const NCPolynomial& f) {
  std::map<std::set<uint32_t>, NCPolynomial> parts;
  for (auto& [w, c] : f.terms) {
    std::set<uint32_t> support;
    for (auto& [v, e] : w) support.insert(v);
    auto it = parts.find(support);
    if (it == parts.end()) {
      NCPolynomial g;
      g.m = f.m;
      g.p = f.p;
      g.terms[w] = c;
      parts[support] = g;
    } else {
      it->second.terms[w] = c;
    }
  }
  std::vector<NCPolynomial> out;
  for (auto& [s, g] : parts) out.push_back(g);
  return out;
}

NCPolynomial multilinearize_step(const NCPolynomial& f, uint32_t xi) {
  if (f.degree_in(xi) < 2) throw DegreeTooLow("multilinearize_step");
  if (f.degree_in(xi) > 24)
    throw BudgetExceeded("multilinearization of a very high degree");
  const uint32_t z = f.m;  // fresh variable
  NCPolynomial mixed;
  mixed.m = f.m + 1;
  mixed.p = f.p;
  for (auto& [w, c] : f.terms) {
    // expand every xi letter into (xi + z), noncommutatively
    std::vector<NCWord> expansions = {NCWord{}};
    for (auto& [v, e] : w) {
      if (v != xi) {
        for (auto& x : expansions) x.push_back({v, e});
        continue;
      }
      std::vector<NCWord> next;
      for (auto& base : expansions) {
        // all 2^e choice sequences
        for (uint64_t mask = 0; mask < (1ull << e); ++mask) {
          NCWord x = base;
          for (uint32_t b = 0; b < e; ++b)
            x.push_back({(mask >> b) & 1 ? z : xi, 1});
          next.push_back(std::move(x));
        }
      }
      expansions = std::move(next);
    }
    for (auto& x : expansions) {
      auto key = normalize_word(x);
      auto it = mixed.terms.find(key);
      if (it == mixed.terms.end())
        mixed.terms[key] = c;
      else {
        it->second = (it->second + c) % f.p;
        if (!it->second) mixed.terms.erase(it);
      }
    }
  }
  // subtract the two pure restrictions
  NCPolynomial fx = f;
  fx.m = f.m + 1;
  NCPolynomial fz;
  fz.m = f.m + 1;
  fz.p = f.p;
  for (auto& [w, c] : f.terms) {
    NCWord re = w;
    for (auto& [v, e] : re)
      if (v == xi) v = z;
    fz.terms[normalize_word(re)] = c;
  }
  return nc_add(mixed, nc_scale(nc_add(fx, fz), f.p - 1));
}

namespace {

IdentityReport exhaustive_search(const AlgebraPresentation& A,
                                 const NCPolynomial& f, uint64_t budget,
                                 Exec exec) {
  const uint32_t m = f.m;
  uint64_t per_var = A.element_count_checked(budget);
  uint64_t total = 1;
  for (uint32_t i = 0; i < m; ++i) {
    if (per_var != 0 && total > budget / per_var)
      throw BudgetExceeded("identity substitution space");
    total *= per_var;
  }
  IdentityReport rep;
  rep.substitutions_checked = total;
  if (m == 0) {
    rep.holds = f.zero();
    return rep;
  }
  // cache all elements once, in flat storage for the lean kernel
  std::vector<Mat> elems;
  elems.reserve(per_var);
  for (uint64_t i = 0; i < per_var; ++i) elems.push_back(A.element_by_index(i));
  const size_t cell = size_t(A.n) * A.n;
  std::vector<uint64_t> flat(per_var * cell);
  for (uint64_t i = 0; i < per_var; ++i)
    std::copy(elems[i].data().begin(), elems[i].data().end(),
              flat.begin() + i * cell);
  uint64_t inner = total / per_var;
  const Field& K = *A.t->K();
  // partition by the first variable's value
  auto scan_block = [&](uint64_t first, uint64_t* hit_inner) {
    if (exec == Exec::Serial && hit_inner == nullptr) {
      // reference path: straightforward Mat evaluation
      std::vector<Mat> args(m, Mat(A.t->K(), A.n, A.n));
      args[0] = elems[first];
      for (uint64_t rest = 0; rest < inner; ++rest) {
        uint64_t idx = rest;
        for (uint32_t v = 1; v < m; ++v) {
          args[v] = elems[idx % per_var];
          idx /= per_var;
        }
        if (!nc_eval(f, args, A.t).is_zero()) return true;
      }
      return false;
    }
    static thread_local EvalScratch scratch;
    std::vector<const uint64_t*> args(m, flat.data() + first * cell);
    for (uint64_t rest = 0; rest < inner; ++rest) {
      uint64_t idx = rest;
      for (uint32_t v = 1; v < m; ++v) {
        args[v] = flat.data() + (idx % per_var) * cell;
        idx /= per_var;
      }
      if (!nc_eval_zero(K, f, A.n, args.data(), scratch)) {
        if (hit_inner) *hit_inner = rest;
        return true;
      }
    }
    return false;
  };
  uint64_t first_bad =
      parallel_find(per_var, exec, [&](uint64_t first) { return scan_block(first, nullptr); });
  if (first_bad == per_var) {
    rep.holds = true;
    return rep;
  }
  uint64_t rest_bad = 0;
  scan_block(first_bad, &rest_bad);
  IdentityWitness w;
  uint64_t idx = rest_bad;
  w.matrices.push_back(elems[first_bad]);
  std::vector<uint64_t> firsts = {first_bad};
  for (uint32_t v = 1; v < m; ++v) {
    firsts.push_back(idx % per_var);
    w.matrices.push_back(elems[idx % per_var]);
    idx /= per_var;
  }
  for (auto fi : firsts) {
    const uint64_t q = A.t->q();
    std::vector<uint64_t> coords(A.dimF());
    for (size_t i = 0; i < A.dimF(); ++i) {
      coords[i] = fi % q;
      fi /= q;
    }
    w.tuple.push_back(coords);
  }
  rep.witness = std::move(w);
  rep.holds = false;
  return rep;
}

}  // namespace

IdentityReport check_identity(const AlgebraPresentation& A,
                              const NCPolynomial& f, uint64_t budget,
                              Exec exec) {
  return exhaustive_search(A, f, budget, exec);
}

IdentityReport check_identity_split(const AlgebraPresentation& A,
                                    const FSubspace& A1, const FSubspace& A2,
                                    const NCPolynomial& f, uint64_t budget,
                                    Exec exec) {
  // A = A1 + A2 as F-spaces
  {
    FSubspace sum = A1;
    for (auto& row : A2.basis_K0()) sum.insert(row);
    check(sum.same(A.space), "split covers the algebra");
  }
  auto pts1 = A1.enumerate(budget);
  auto pts2 = A2.enumerate(budget);
  std::vector<Mat> m1, m2;
  for (auto& v : pts1) m1.push_back(mat_unflatten(A.t, A.n, v));
  for (auto& v : pts2) m2.push_back(mat_unflatten(A.t, A.n, v));
  const Field& K = *A.t->K();

  IdentityReport rep;
  rep.holds = true;
  // worklist of the polynomial and its multilinearization differences
  std::vector<NCPolynomial> work = {f};
  std::set<std::string> seen;
  while (!work.empty() && rep.holds) {
    NCPolynomial g = work.back();
    work.pop_back();
    std::ostringstream key;
    for (auto& [w, c] : g.terms) {
      key << c << ":";
      for (auto& [v, e] : w) key << v << "^" << e << ".";
      key << ";";
    }
    if (!seen.insert(key.str()).second) continue;
    if (g.zero()) continue;
    const uint32_t m = g.m;
    // pure tuples: every variable draws from A1 or from A2
    uint64_t combos = 1;
    for (uint32_t i = 0; i < m; ++i) combos *= 2;
    for (uint64_t mask = 0; mask < combos && rep.holds; ++mask) {
      std::vector<const std::vector<Mat>*> pool(m);
      uint64_t total = 1;
      for (uint32_t v = 0; v < m; ++v) {
        pool[v] = (mask >> v) & 1 ? &m2 : &m1;
        uint64_t sz = pool[v]->size();
        if (sz == 0) {
          total = 0;
          break;
        }
        if (total > budget / sz) throw BudgetExceeded("split substitution");
        total *= sz;
      }
      rep.substitutions_checked += total;
      uint64_t bad;
      if (exec == Exec::Serial) {
        // reference path
        bad = parallel_find(total, Exec::Serial, [&](uint64_t code) {
          std::vector<Mat> args(m, Mat(A.t->K(), A.n, A.n));
          uint64_t idx = code;
          for (uint32_t v = 0; v < m; ++v) {
            args[v] = (*pool[v])[idx % pool[v]->size()];
            idx /= pool[v]->size();
          }
          return !nc_eval(g, args, A.t).is_zero();
        });
      } else {
        std::vector<const std::vector<std::vector<uint64_t>>*> flat_pool(m);
        for (uint32_t v = 0; v < m; ++v)
          flat_pool[v] = (mask >> v) & 1 ? &pts2 : &pts1;
        bad = parallel_find(total, exec, [&](uint64_t code) {
          static thread_local EvalScratch scratch;
          std::vector<const uint64_t*> args(m);
          uint64_t idx = code;
          for (uint32_t v = 0; v < m; ++v) {
            args[v] = (*flat_pool[v])[idx % flat_pool[v]->size()].data();
            idx /= flat_pool[v]->size();
          }
          return !nc_eval_zero(K, g, A.n, args.data(), scratch);
        });
      }

      if (bad != total) {
        rep.holds = false;
        IdentityWitness w;
        uint64_t idx = bad;
        for (uint32_t v = 0; v < m; ++v) {
          w.matrices.push_back((*pool[v])[idx % pool[v]->size()]);
          idx /= pool[v]->size();
        }
        rep.witness = std::move(w);
      }
    }
    // push multilinearization differences
    for (uint32_t v = 0; v < m && rep.holds; ++v)
      if (g.degree_in(v) >= 2) work.push_back(multilinearize_step(g, v));
  }
  return rep;
}

std::string NCPolynomial::str(const std::vector<std::string>& names) const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [w, c] : terms) {
    if (!first) os << " + ";
    if (c != 1 || w.empty()) os << c;
    for (auto& [v, e] : w) {
      os << (v < names.size() ? names[v] : "x" + std::to_string(v + 1));
      if (e > 1) os << "^" << e;
    }
    first = false;
  }
  return os.str();
}

}  // namespace zk
