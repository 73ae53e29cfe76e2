#include "zk/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace zk {

void check(bool cond, const char* what) {
  if (!cond) throw Error(std::string("internal invariant violated: ") + what);
}

namespace {

// ---- polynomial helpers over GF(p), coefficients low-degree-first ----

using Poly = std::vector<uint32_t>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly pmul(const Poly& a, const Poly& b, uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + uint64_t(a[i]) * b[j]) % p;
  }
  trim(c);
  return c;
}

Poly pmod(Poly a, const Poly& f, uint32_t p) {
  trim(a);
  const size_t df = f.size() - 1;
  uint32_t lead_inv = 1;
  {  // inverse of f's leading coefficient mod p
    uint32_t l = f.back(), t = 1;
    for (uint32_t e = p - 2; e; e >>= 1) {
      if (e & 1) t = uint32_t(uint64_t(t) * l % p);
      l = uint32_t(uint64_t(l) * l % p);
    }
    lead_inv = t;
  }
  while (a.size() > df) {
    uint32_t c = uint32_t(uint64_t(a.back()) * lead_inv % p);
    size_t shift = a.size() - 1 - df;
    if (c)
      for (size_t i = 0; i <= df; ++i) {
        uint64_t sub = uint64_t(c) * f[i] % p;
        a[shift + i] = uint32_t((a[shift + i] + p - sub) % p);
      }
    trim(a);
    if (a.empty()) break;
  }
  return a;
}

Poly pgcd(Poly a, Poly b, uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = pmod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly ppowmod(Poly base, uint64_t e, const Poly& f, uint32_t p) {
  Poly r = {1};
  base = pmod(std::move(base), f, p);
  while (e) {
    if (e & 1) r = pmod(pmul(r, base, p), f, p);
    base = pmod(pmul(base, base, p), f, p);
    e >>= 1;
  }
  return r;
}

uint64_t ipow(uint64_t b, uint32_t e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
  std::vector<uint64_t> f;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      f.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) f.push_back(n);
  return f;
}

std::mutex cache_mu;

}  // namespace

bool is_irreducible_mod_p(const std::vector<uint32_t>& f, uint32_t p) {
  Poly g = f;
  trim(g);
  if (g.size() < 2) return false;
  const uint32_t k = uint32_t(g.size() - 1);
  if (k == 1) return true;
  // x^(p^k) == x mod f, and gcd(x^(p^(k/l)) - x, f) == 1 for primes l | k
  Poly x = {0, 1};
  Poly xq = ppowmod(x, ipow(p, k), g, p);
  Poly diff = xq;
  if (diff.size() < 2) diff.resize(2, 0);
  diff[1] = uint32_t((diff[1] + p - 1) % p);
  trim(diff);
  if (!diff.empty()) return false;
  for (uint64_t l : prime_factors(k)) {
    Poly xe = ppowmod(x, ipow(p, uint32_t(k / l)), g, p);
    Poly d = xe;
    if (d.size() < 2) d.resize(2, 0);
    d[1] = uint32_t((d[1] + p - 1) % p);
    trim(d);
    Poly gc = pgcd(g, d, p);
    if (gc.size() != 1) return false;
  }
  return true;
}

std::vector<uint32_t> builtin_modulus(uint32_t p, uint32_t k) {
  static std::map<std::pair<uint32_t, uint32_t>, Poly> cache;
  std::lock_guard<std::mutex> lk(cache_mu);
  auto it = cache.find({p, k});
  if (it != cache.end()) return it->second;
  // smallest lower part by integer encoding
  uint64_t bound = ipow(p, k);
  for (uint64_t low = 0; low < bound; ++low) {
    Poly f(k + 1, 0);
    uint64_t t = low;
    for (uint32_t i = 0; i < k; ++i) {
      f[i] = uint32_t(t % p);
      t /= p;
    }
    f[k] = 1;
    if (is_irreducible_mod_p(f, p)) {
      cache[{p, k}] = f;
      return f;
    }
  }
  throw Error("no irreducible polynomial found");  // unreachable
}

Field::Field(uint32_t p, uint32_t k, std::vector<uint32_t> modulus)
    : p_(p), k_(k), modulus_(std::move(modulus)) {
  if (p < 2 || k < 1 || k > 20) throw SchemaError("bad field parameters");
  for (uint32_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw SchemaError("characteristic must be prime");
  if (modulus_.size() != k + 1 || modulus_.back() != 1)
    throw SchemaError("modulus must be monic of degree k");
  for (auto& c : modulus_) c %= p;
  if (modulus_.back() != 1) throw SchemaError("modulus must be monic of degree k");
  if (!is_irreducible_mod_p(modulus_, p))
    throw SchemaError("modulus is reducible over GF(p)");
  size_ = ipow(p, k);
  build_tables();
}

FieldRef Field::make(uint32_t p, uint32_t k) {
  return make(p, k, builtin_modulus(p, k));
}

FieldRef Field::make(uint32_t p, uint32_t k, std::vector<uint32_t> modulus) {
  static std::map<std::tuple<uint32_t, uint32_t, std::vector<uint32_t>>,
                  std::weak_ptr<const Field>>
      cache;
  FieldRef f(new Field(p, k, modulus));
  std::lock_guard<std::mutex> lk(cache_mu);
  auto key = std::make_tuple(p, k, f->modulus());
  auto it = cache.find(key);
  if (it != cache.end())
    if (auto live = it->second.lock()) return live;
  cache[key] = f;
  return f;
}

std::vector<uint32_t> Field::digits(uint64_t a) const {
  std::vector<uint32_t> d(k_);
  for (uint32_t i = 0; i < k_; ++i) {
    d[i] = uint32_t(a % p_);
    a /= p_;
  }
  return d;
}

uint64_t Field::from_digits(const std::vector<uint32_t>& d) const {
  uint64_t a = 0;
  for (size_t i = d.size(); i-- > 0;) a = a * p_ + d[i] % p_;
  return a;
}

uint64_t Field::add(uint64_t a, uint64_t b) const {
  if (p_ == 2) return a ^ b;
  uint64_t r = 0, mult = 1;
  for (uint32_t i = 0; i < k_; ++i) {
    r += (a % p_ + b % p_) % p_ * mult;
    a /= p_;
    b /= p_;
    mult *= p_;
  }
  return r;
}

uint64_t Field::neg(uint64_t a) const {
  if (p_ == 2) return a;
  uint64_t r = 0, mult = 1;
  for (uint32_t i = 0; i < k_; ++i) {
    r += (p_ - a % p_) % p_ * mult;
    a /= p_;
    mult *= p_;
  }
  return r;
}

uint64_t Field::sub(uint64_t a, uint64_t b) const { return add(a, neg(b)); }

uint64_t Field::mul_generic(uint64_t a, uint64_t b) const {
  auto da = digits(a), db = digits(b);
  Poly pa(da.begin(), da.end()), pb(db.begin(), db.end());
  Poly c = pmod(pmul(pa, pb, p_), modulus_, p_);
  c.resize(k_, 0);
  uint64_t r = 0;
  for (size_t i = c.size(); i-- > 0;) r = r * p_ + c[i];
  return r;
}

void Field::build_tables() {
  // find a multiplicative generator (smallest encoding)
  const uint64_t n = size_ - 1;
  auto fac = prime_factors(n);
  auto pow_nolog = [&](uint64_t a, uint64_t e) {
    uint64_t r = 1;
    while (e) {
      if (e & 1) r = mul_generic(r, a);
      a = mul_generic(a, a);
      e >>= 1;
    }
    return r;
  };
  for (uint64_t g = 1; g < size_; ++g) {
    bool ok = g != 0;
    for (uint64_t q : fac)
      if (pow_nolog(g, n / q) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      mult_gen_ = g;
      break;
    }
  }
  check(mult_gen_ != 0 || size_ == 2, "multiplicative generator");
  if (size_ == 2) mult_gen_ = 1;
  if (size_ <= (1u << 16)) {
    exp_.assign(n, 0);
    log_.assign(size_, 0);
    uint64_t cur = 1;
    for (uint64_t i = 0; i < n; ++i) {
      exp_[i] = cur;
      log_[cur] = i;
      cur = mul_generic(cur, mult_gen_);
    }
    check(cur == 1, "generator order");
    has_tables_ = true;
  }
}

uint64_t Field::mul(uint64_t a, uint64_t b) const {
  if (a == 0 || b == 0) return 0;
  if (has_tables_) {
    uint64_t n = size_ - 1;
    uint64_t l = log_[a] + log_[b];
    if (l >= n) l -= n;
    return exp_[l];
  }
  return mul_generic(a, b);
}

uint64_t Field::inv(uint64_t a) const {
  if (a == 0) throw DivisionByZero("inv(0)");
  if (has_tables_) {
    uint64_t n = size_ - 1, l = log_[a];
    return exp_[l == 0 ? 0 : n - l];
  }
  return pow(a, size_ - 2);
}

uint64_t Field::pow(uint64_t a, uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (has_tables_) {
    uint64_t n = size_ - 1;
    return exp_[(unsigned __int128)(log_[a]) * (e % n) % n];
  }
  uint64_t r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

uint64_t Field::frobenius(uint64_t a, uint64_t t) const {
  t %= k_;
  if (t == 0 || a == 0) return a;
  if (has_tables_) {
    uint64_t n = size_ - 1;
    unsigned __int128 e = 1;
    for (uint64_t i = 0; i < t; ++i) e = e * p_ % n;
    return exp_[(unsigned __int128)(log_[a]) * e % n];
  }
  uint64_t r = a;
  for (uint64_t i = 0; i < t; ++i) r = pow(r, p_);
  return r;
}

uint64_t Field::frobenius_inv(uint64_t a, uint64_t t) const {
  t %= k_;
  return frobenius(a, (k_ - t) % k_);
}

uint64_t Field::eval_prime_poly(const std::vector<uint32_t>& f, uint64_t a) const {
  uint64_t r = 0;
  for (size_t i = f.size(); i-- > 0;) r = add(mul(r, a), from_prime(f[i]));
  return r;
}

std::vector<uint32_t> Field::min_poly(uint64_t a) const {
  // rows: digit vectors of 1, a, a^2, ... ; find first linear dependence
  std::vector<std::vector<uint32_t>> pows;
  uint64_t cur = 1;
  for (uint32_t d = 0; d <= k_; ++d) {
    pows.push_back(digits(cur));
    cur = mul(cur, a);
  }
  // Gaussian elimination over GF(p), tracking combinations
  auto modp = [&](int64_t x) { return uint32_t(((x % p_) + p_) % p_); };
  std::vector<std::vector<uint32_t>> rows, combo;
  std::vector<int> pivot_of_col(k_, -1);
  for (uint32_t d = 0;; ++d) {
    check(d <= k_, "min_poly degree bound");
    std::vector<uint32_t> r = pows[d];
    std::vector<uint32_t> c(k_ + 1, 0);
    c[d] = 1;
    for (uint32_t col = 0; col < k_; ++col) {
      if (!r[col]) continue;
      int piv = pivot_of_col[col];
      if (piv < 0) continue;
      uint32_t factor = r[col];  // pivot rows are normalized to leading 1
      for (uint32_t j = 0; j < k_; ++j)
        r[j] = modp(int64_t(r[j]) - int64_t(factor) * rows[piv][j]);
      for (uint32_t j = 0; j <= k_; ++j)
        c[j] = modp(int64_t(c[j]) - int64_t(factor) * combo[piv][j]);
    }
    uint32_t lead = k_;
    for (uint32_t col = 0; col < k_; ++col)
      if (r[col]) {
        lead = col;
        break;
      }
    if (lead == k_) {
      // dependence found: min poly = combo, normalized monic
      std::vector<uint32_t> f(c.begin(), c.begin() + d + 1);
      uint32_t l = f.back(), t = 1;
      for (uint32_t e = p_ - 2; e; e >>= 1) {
        if (e & 1) t = uint32_t(uint64_t(t) * l % p_);
        l = uint32_t(uint64_t(l) * l % p_);
      }
      for (auto& x : f) x = uint32_t(uint64_t(x) * t % p_);
      return f;
    }
    // normalize leading coefficient to 1
    uint32_t linv = 1;
    {
      uint32_t l = r[lead], t = 1;
      for (uint32_t e = p_ - 2; e; e >>= 1) {
        if (e & 1) t = uint32_t(uint64_t(t) * l % p_);
        l = uint32_t(uint64_t(l) * l % p_);
      }
      linv = t;
    }
    for (uint32_t j = 0; j < k_; ++j) r[j] = uint32_t(uint64_t(r[j]) * linv % p_);
    for (uint32_t j = 0; j <= k_; ++j) c[j] = uint32_t(uint64_t(c[j]) * linv % p_);
    pivot_of_col[lead] = int(rows.size());
    rows.push_back(std::move(r));
    combo.push_back(std::move(c));
  }
}

std::string Field::str(uint64_t a) const {
  if (k_ == 1) return std::to_string(a);
  std::ostringstream os;
  bool first = true;
  auto d = digits(a);
  for (uint32_t i = 0; i < k_; ++i) {
    if (!d[i]) continue;
    if (!first) os << "+";
    if (i == 0 || d[i] > 1) os << d[i];
    if (i >= 1) {
      if (d[i] > 1) os << "*";
      os << "g";
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

namespace {
void same_owner(const FieldElem& a, const FieldElem& b) {
  if (!a.owner->same(*b.owner)) throw MixedFields("operands differ in field");
}
}  // namespace

FieldElem ff_add(const FieldElem& a, const FieldElem& b) {
  same_owner(a, b);
  return {a.owner, a.owner->add(a.enc, b.enc)};
}

FieldElem ff_mul(const FieldElem& a, const FieldElem& b) {
  same_owner(a, b);
  return {a.owner, a.owner->mul(a.enc, b.enc)};
}

FieldElem ff_inv(const FieldElem& a) { return {a.owner, a.owner->inv(a.enc)}; }

FieldElem ff_pow(const FieldElem& a, uint64_t e) {
  return {a.owner, a.owner->pow(a.enc, e)};
}

FieldElem ff_frobenius(const FieldElem& a, uint64_t t) {
  return {a.owner, a.owner->frobenius(a.enc, t)};
}

SubfieldMap::SubfieldMap(FieldRef sub, FieldRef sup)
    : sub_(std::move(sub)), sup_(std::move(sup)) {
  if (sub_->p() != sup_->p() || sup_->k() % sub_->k() != 0)
    throw NoEmbedding("degree condition fails");
  m_ = sup_->k() / sub_->k();
  const uint32_t p = sub_->p();
  // smallest root of sub's modulus in sup (canonical integer encoding)
  root_ = sup_->size();
  for (uint64_t a = 0; a < sup_->size(); ++a)
    if (sup_->eval_prime_poly(sub_->modulus(), a) == 0) {
      root_ = a;
      break;
    }
  check(root_ < sup_->size(), "subfield root exists");
  root_pow_.assign(sub_->k(), 1);
  for (uint32_t i = 1; i < sub_->k(); ++i)
    root_pow_[i] = sup_->mul(root_pow_[i - 1], root_);
  gen_pow_.assign(m_, 1);
  for (uint32_t i = 1; i < m_; ++i)
    gen_pow_[i] = sup_->mul(gen_pow_[i - 1], sup_->gen());

  // GF(p)-matrix of (c_0..c_{m-1}) in sub^m  ->  sum to_sup(c_i) g^i in sup,
  // then invert it to recover coordinates.
  const uint32_t K = sup_->k();
  std::vector<std::vector<uint32_t>> mat(K, std::vector<uint32_t>(2 * K, 0));
  for (uint32_t i = 0; i < m_; ++i)
    for (uint32_t j = 0; j < sub_->k(); ++j) {
      // basis input: digit j of coordinate i
      uint64_t img = sup_->mul(gen_pow_[i], root_pow_[j]);
      auto dg = sup_->digits(img);
      uint32_t col = i * sub_->k() + j;
      for (uint32_t r = 0; r < K; ++r) mat[r][col] = dg[r];
    }
  for (uint32_t r = 0; r < K; ++r) mat[r][K + r] = 1;
  // invert over GF(p)
  auto modinv = [&](uint32_t x) {
    uint32_t l = x, t = 1;
    for (uint32_t e = p - 2; e; e >>= 1) {
      if (e & 1) t = uint32_t(uint64_t(t) * l % p);
      l = uint32_t(uint64_t(l) * l % p);
    }
    return t;
  };
  for (uint32_t col = 0; col < K; ++col) {
    uint32_t piv = K;
    for (uint32_t r = col; r < K; ++r)
      if (mat[r][col]) {
        piv = r;
        break;
      }
    check(piv < K, "subfield basis invertible");
    std::swap(mat[col], mat[piv]);
    uint32_t iv = modinv(mat[col][col]);
    for (auto& x : mat[col]) x = uint32_t(uint64_t(x) * iv % p);
    for (uint32_t r = 0; r < K; ++r) {
      if (r == col || !mat[r][col]) continue;
      uint32_t f = mat[r][col];
      for (uint32_t j = 0; j < 2 * K; ++j)
        mat[r][j] = uint32_t((mat[r][j] + uint64_t(p - f) * mat[col][j]) % p);
    }
  }
  inv_mat_.assign(K, std::vector<uint32_t>(K));
  for (uint32_t r = 0; r < K; ++r)
    for (uint32_t c = 0; c < K; ++c) inv_mat_[r][c] = mat[r][K + c];
}

uint64_t SubfieldMap::to_sup(uint64_t a) const {
  auto d = sub_->digits(a);
  uint64_t r = 0;
  for (uint32_t i = 0; i < sub_->k(); ++i)
    if (d[i]) r = sup_->add(r, sup_->mul(sup_->from_prime(d[i]), root_pow_[i]));
  return r;
}

void SubfieldMap::coords(uint64_t a, uint64_t* out) const {
  const uint32_t K = sup_->k(), p = sup_->p();
  auto dg = sup_->digits(a);
  std::vector<uint32_t> sol(K, 0);
  for (uint32_t r = 0; r < K; ++r) {
    uint64_t acc = 0;
    for (uint32_t c = 0; c < K; ++c) acc += uint64_t(inv_mat_[r][c]) * dg[c];
    sol[r] = uint32_t(acc % p);
  }
  for (uint32_t i = 0; i < m_; ++i) {
    std::vector<uint32_t> d(sol.begin() + i * sub_->k(),
                            sol.begin() + (i + 1) * sub_->k());
    out[i] = sub_->from_digits(d);
  }
}

std::vector<uint64_t> SubfieldMap::coords(uint64_t a) const {
  std::vector<uint64_t> out(m_);
  coords(a, out.data());
  return out;
}

uint64_t SubfieldMap::from_coords(const uint64_t* c) const {
  uint64_t r = 0;
  for (uint32_t i = 0; i < m_; ++i)
    if (c[i]) r = sup_->add(r, sup_->mul(to_sup(c[i]), gen_pow_[i]));
  return r;
}

bool SubfieldMap::in_subfield(uint64_t a) const {
  // fixed by x -> x^(p^sub.k)
  return sup_->frobenius(a, sub_->k()) == a;
}

uint64_t SubfieldMap::to_sub(uint64_t a) const {
  check(in_subfield(a), "to_sub on subfield element");
  auto c = coords(a);
  for (uint32_t i = 1; i < m_; ++i) check(c[i] == 0, "to_sub coordinates");
  return c[0];
}

}  // namespace zk
