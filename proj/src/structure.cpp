#include "zk/structure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <functional>

#include "zk/fpoly.hpp"
#include "zk/rng.hpp"

namespace zk {

namespace {

using Vec = std::vector<uint64_t>;

// ---------------------------------------------------------------- radical

// GF(p)-basis of A: F-basis elements scaled by a GF(p)-basis of F
std::vector<Mat> gfp_basis(const AlgebraPresentation& A) {
  std::vector<Mat> out;
  const auto& F = *A.t->F();
  for (auto& b : A.basis)
    for (uint32_t s = 0; s < F.k(); ++s) {
      uint64_t scalar = F.pow(F.gen(), s);
      out.push_back(b.scaled(A.t->emb().to_sup(scalar)));
    }
  return out;
}

// characteristic coefficient e_j of a matrix over K0 (sign dropped)
uint64_t char_coeff(const Mat& m, uint32_t j) {
  auto cp = m.charpoly();
  uint32_t n = uint32_t(m.rows());
  if (j > n) return 0;
  return cp[n - j];
}

uint64_t ipow64(uint64_t b, uint32_t e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

std::vector<Mat> radical(const AlgebraPresentation& A) {
  const auto& t = A.t;
  const uint32_t p = t->F()->p();
  const uint32_t n = A.n;
  auto Fp = Field::make(p, 1);
  const uint32_t kd = t->K()->k();  // GF(p)-digits per K0 value

  std::vector<Mat> cur = gfp_basis(A);
  uint32_t l = 0;
  while (ipow64(p, l + 1) <= n) ++l;  // p^l <= n < p^(l+1)

  for (uint32_t i = 0; i <= l && !cur.empty(); ++i) {
    uint32_t j = 1;
    for (uint32_t s = 0; s < i; ++s) j *= p;
    // GF(p)-linear conditions: every digit of e_(p^i)(x y) vanishes for all
    // y in the current chain member
    Mat sys(Fp, cur.size() * kd, cur.size());
    for (size_t yi = 0; yi < cur.size(); ++yi)
      for (size_t xi = 0; xi < cur.size(); ++xi) {
        uint64_t val = char_coeff(cur[xi] * cur[yi], j);
        auto digits = t->K()->digits(val);
        for (uint32_t d = 0; d < kd; ++d)
          sys.at(yi * kd + d, xi) = digits[d];
      }
    Mat null = sys.kernel();
    std::vector<Mat> next;
    for (size_t r = 0; r < null.rows(); ++r) {
      Mat acc(t->K(), n, n);
      for (size_t c = 0; c < cur.size(); ++c) {
        uint64_t coef = null.at(r, c);
        if (coef) acc = acc + cur[c].scaled(t->K()->from_prime(coef));
      }
      next.push_back(acc);
    }
    // guard: the semilinear form must vanish exactly on the kernel
    for (auto& x : next)
      for (auto& y : cur)
        check(char_coeff(x * y, j) == 0, "semilinear trace-form kernel");
    cur = std::move(next);
  }

  // reduce to an F-basis
  FSubspace Jspace(t, n * n);
  for (auto& m : cur) Jspace.insert(mat_flatten(m));
  std::vector<Mat> J;
  for (auto& row : Jspace.basis_K0()) J.push_back(mat_unflatten(t, n, row));

  // certification: J is a nil two-sided ideal
  for (auto& jm : J) {
    for (auto& b : A.basis) {
      check(Jspace.contains(mat_flatten(jm * b)), "radical is a right ideal");
      check(Jspace.contains(mat_flatten(b * jm)), "radical is a left ideal");
    }
    Mat pw = jm;
    for (uint32_t s = 0; s < n && !pw.is_zero(); ++s) pw = pw * jm;
    check(pw.is_zero(), "radical is nil");
  }
  return J;
}

std::vector<FSubspace> radical_powers(const AlgebraPresentation& A,
                                      const std::vector<Mat>& J) {
  std::vector<FSubspace> powers;
  FSubspace cur(A.t, A.n * A.n);
  for (auto& j : J) cur.insert(mat_flatten(j));
  while (cur.dim()) {
    powers.push_back(cur);
    FSubspace next(A.t, A.n * A.n);
    for (auto& row : cur.basis_K0())
      for (auto& j : J)
        next.insert(mat_flatten(mat_unflatten(A.t, A.n, row) * j));
    if (next.dim() == cur.dim()) {
      // a nonzero fixed point would contradict nilpotency
      check(next.dim() == 0, "radical powers descend");
    }
    cur = std::move(next);
  }
  return powers;
}

// ------------------------------------------------------------- quotient

namespace {

// the semisimple quotient A/J in explicit F-coordinates
struct QuotAlg {
  const AlgebraPresentation* A = nullptr;
  TowerRef t;
  RowSpace Jrows;           // F-rows of flattened J
  std::vector<Mat> reps;    // coset representatives
  Mat solve_mat;            // rows: J-rows then rep-rows (flattened, F-coords)
  size_t jdim = 0, dim = 0;
  std::vector<std::vector<Vec>> sc;  // structure constants
  Vec unit;                          // coords of 1_(A/J)

  const Field& F() const { return *t->F(); }

  Vec coords(const Mat& m) const {
    std::vector<uint64_t> sol;
    bool ok = solve_mat.solve_left(t->down(mat_flatten(m)), sol);
    check(ok, "quotient coordinates");
    return Vec(sol.begin() + jdim, sol.end());
  }
  Mat section(const Vec& x) const {
    Mat acc(t->K(), A->n, A->n);
    for (size_t i = 0; i < dim; ++i)
      if (x[i]) acc = acc + reps[i].scaled(t->emb().to_sup(x[i]));
    return acc;
  }
  Vec mul(const Vec& x, const Vec& y) const {
    Vec r(dim, 0);
    auto& Ff = F();
    for (size_t i = 0; i < dim; ++i) {
      if (!x[i]) continue;
      for (size_t j = 0; j < dim; ++j) {
        if (!y[j]) continue;
        uint64_t c = Ff.mul(x[i], y[j]);
        for (size_t k = 0; k < dim; ++k)
          if (sc[i][j][k]) r[k] = Ff.add(r[k], Ff.mul(c, sc[i][j][k]));
      }
    }
    return r;
  }
  Vec add(Vec x, const Vec& y) const {
    for (size_t i = 0; i < dim; ++i) x[i] = F().add(x[i], y[i]);
    return x;
  }
  Vec scale(Vec x, uint64_t c) const {
    for (auto& v : x) v = F().mul(v, c);
    return x;
  }
  bool is_zero(const Vec& x) const {
    for (auto v : x)
      if (v) return false;
    return true;
  }
  // minimal polynomial of w in the corner with unit e (e acts as 1)
  fp::P min_poly(const Vec& w, const Vec& e) const {
    RowSpace pow_space(t->F(), dim);
    std::vector<Vec> pows = {e};
    pow_space.insert(e);
    Vec cur = e;
    for (;;) {
      cur = mul(cur, w);
      std::vector<uint64_t> co;
      if (pow_space.coords(cur, co)) {
        // cur = sum co_i * reduced-row_i; we need coefficients over the
        // power sequence instead, so solve against the power matrix
        Mat pm(t->F(), pows.size(), dim);
        for (size_t i = 0; i < pows.size(); ++i)
          for (size_t j = 0; j < dim; ++j) pm.at(i, j) = pows[i][j];
        std::vector<uint64_t> sol;
        bool ok = pm.solve_left(cur, sol);
        check(ok, "min poly dependence");
        fp::P mu(pows.size() + 1, 0);
        for (size_t i = 0; i < pows.size(); ++i) mu[i] = F().neg(sol[i]);
        mu[pows.size()] = 1;
        return mu;
      }
      pows.push_back(cur);
      pow_space.insert(cur);
      check(pows.size() <= dim + 1, "min poly terminates");
    }
  }
  // evaluate a polynomial at w with unit e
  Vec eval_poly(const fp::P& f, const Vec& w, const Vec& e) const {
    Vec acc(dim, 0);
    for (size_t i = f.size(); i-- > 0;) {
      acc = mul(acc, w);
      if (f[i]) acc = add(acc, scale(e, f[i]));
    }
    return acc;
  }
};

QuotAlg make_quotient(const AlgebraPresentation& A, const std::vector<Mat>& J) {
  QuotAlg Q;
  Q.A = &A;
  Q.t = A.t;
  Q.Jrows = RowSpace(A.t->F(), size_t(A.n) * A.n * A.t->M());
  for (auto& j : J) Q.Jrows.insert(A.t->down(mat_flatten(j)));
  Q.jdim = Q.Jrows.dim();
  RowSpace combined = Q.Jrows;
  for (auto& b : A.basis)
    if (combined.insert(A.t->down(mat_flatten(b)))) Q.reps.push_back(b);
  Q.dim = Q.reps.size();
  // rows for coordinate solves: J rows then rep rows (unreduced reps)
  Q.solve_mat = Mat(A.t->F(), Q.jdim + Q.dim, combined.width());
  {
    size_t r = 0;
    for (auto& row : Q.Jrows.rows()) {
      for (size_t c = 0; c < row.size(); ++c) Q.solve_mat.at(r, c) = row[c];
      ++r;
    }
    for (auto& rep : Q.reps) {
      auto row = A.t->down(mat_flatten(rep));
      for (size_t c = 0; c < row.size(); ++c) Q.solve_mat.at(r, c) = row[c];
      ++r;
    }
  }
  Q.sc.assign(Q.dim, std::vector<Vec>(Q.dim));
  for (size_t i = 0; i < Q.dim; ++i)
    for (size_t j = 0; j < Q.dim; ++j)
      Q.sc[i][j] = Q.coords(Q.reps[i] * Q.reps[j]);
  // unit of the semisimple quotient: solve u * e_j = e_j = e_j * u
  if (Q.dim) {
    const auto& Ff = Q.F();
    Mat sys(A.t->F(), 2 * Q.dim * Q.dim, Q.dim);
    std::vector<uint64_t> rhs(2 * Q.dim * Q.dim, 0);
    for (size_t j = 0; j < Q.dim; ++j)
      for (size_t i = 0; i < Q.dim; ++i)
        for (size_t k = 0; k < Q.dim; ++k) {
          sys.at(j * Q.dim + k, i) = Q.sc[i][j][k];
          sys.at((Q.dim + j) * Q.dim + k, i) = Q.sc[j][i][k];
        }
    for (size_t j = 0; j < Q.dim; ++j) {
      rhs[j * Q.dim + j] = 1;
      rhs[(Q.dim + j) * Q.dim + j] = 1;
    }
    Mat aug(A.t->F(), 2 * Q.dim * Q.dim, Q.dim + 1);
    for (size_t r = 0; r < 2 * Q.dim * Q.dim; ++r) {
      for (size_t c = 0; c < Q.dim; ++c) aug.at(r, c) = sys.at(r, c);
      aug.at(r, Q.dim) = rhs[r];
    }
    auto piv = aug.rref();
    Q.unit.assign(Q.dim, 0);
    for (size_t i = 0; i < piv.size(); ++i) {
      check(piv[i] != Q.dim, "semisimple quotient is unital");
      Q.unit[piv[i]] = aug.at(i, Q.dim);
    }
    (void)Ff;
  }
  return Q;
}

// -------------------------------------------------- idempotent splitting

struct CornerRef {
  Vec e;                     // unit of the corner
  std::vector<Vec> basis;    // basis of e Q e
};

CornerRef corner_of(const QuotAlg& Q, const Vec& e) {
  CornerRef c;
  c.e = e;
  RowSpace rs(Q.t->F(), Q.dim);
  for (size_t i = 0; i < Q.dim; ++i) {
    Vec v(Q.dim, 0);
    v[i] = 1;
    Vec w = Q.mul(Q.mul(e, v), e);
    if (rs.insert(w)) c.basis.push_back(w);
  }
  return c;
}

// outcome of probing a corner: either a certified field (primitive) or a
// set of orthogonal idempotents summing to e
struct ProbeResult {
  bool is_field = false;
  fp::P field_min_poly;  // of the found generator
  Vec field_gen;
  std::vector<Vec> split;  // when not a field
};

ProbeResult probe_corner(const QuotAlg& Q, const CornerRef& C, Rng& rng) {
  const auto& F = Q.F();
  const size_t d = C.basis.size();
  check(d >= 1, "nonzero corner");
  auto consider = [&](const Vec& w) -> std::optional<ProbeResult> {
    if (Q.is_zero(w)) return std::nullopt;
    fp::P mu = Q.min_poly(w, C.e);
    auto factors = fp::factor(F, mu);
    if (factors.size() >= 2) {
      // CRT idempotents of F[w]
      ProbeResult r;
      fp::P muall = mu;
      for (auto& [fi, mi] : factors) {
        fp::P pw = {1};
        for (uint32_t s = 0; s < mi; ++s) pw = fp::mul(F, pw, fi);
        fp::P g = fp::divmod(F, muall, pw, nullptr);
        fp::P s, tt;
        fp::P gc = fp::xgcd(F, g, pw, &s, &tt);
        check(fp::deg(gc) == 0, "coprime CRT parts");
        // idempotent = (g * s)(w), with g*s = 1 mod pw and 0 mod muall/pw
        fp::P idem_poly = fp::mod(F, fp::mul(F, g, s), muall);
        Vec idem = Q.eval_poly(idem_poly, w, C.e);
        check(!Q.is_zero(idem), "CRT idempotent nonzero");
        check(Q.is_zero(Q.add(Q.mul(idem, idem), Q.scale(idem, F.neg(1)))),
              "CRT idempotent");
        r.split.push_back(idem);
      }
      return r;
    }
    auto& [f1, m1] = factors[0];
    if (m1 == 1 && size_t(fp::deg(f1)) == d) {
      ProbeResult r;
      r.is_field = true;
      r.field_min_poly = f1;
      r.field_gen = w;
      return r;
    }
    return std::nullopt;
  };
  // deterministic probes first: basis then basis sums
  for (auto& b : C.basis)
    if (auto r = consider(b)) return *r;
  for (size_t i = 0; i < d; ++i)
    for (size_t j = i + 1; j < d; ++j)
      if (auto r = consider(Q.add(C.basis[i], C.basis[j]))) return *r;
  // seeded random probes
  for (int tries = 0; tries < 800; ++tries) {
    Vec w(Q.dim, 0);
    for (auto& b : C.basis) w = Q.add(w, Q.scale(b, rng.below(F.size())));
    if (auto r = consider(w)) return *r;
  }
  throw Error("corner probing exhausted (increase tries or check input)");
}

// orthogonal primitive idempotents of the corner with unit e
void primitive_idempotents(const QuotAlg& Q, const Vec& e, Rng& rng,
                           std::vector<Vec>& out,
                           std::vector<std::pair<fp::P, Vec>>* field_data) {
  CornerRef C = corner_of(Q, e);
  ProbeResult r = probe_corner(Q, C, rng);
  if (r.is_field) {
    out.push_back(e);
    if (field_data) field_data->push_back({r.field_min_poly, r.field_gen});
    return;
  }
  for (auto& idem : r.split)
    primitive_idempotents(Q, idem, rng, out, field_data);
}

}  // namespace

WedderburnData wedderburn_malcev(const AlgebraPresentation& A, uint64_t seed) {
  WedderburnData wd;
  const auto& t = A.t;
  const auto& K = *t->K();
  wd.J = radical(A);
  wd.J_space = FSubspace(t, A.n * A.n);
  for (auto& j : wd.J) wd.J_space.insert(mat_flatten(j));
  auto powers = radical_powers(A, wd.J);
  wd.nu = uint32_t(powers.size()) + 1;
  wd.S_space = FSubspace(t, A.n * A.n);
  if (A.dimF() == 0) return wd;

  QuotAlg Q = make_quotient(A, wd.J);
  if (Q.dim == 0) {  // A is nil: S = 0
    return wd;
  }
  Rng rng(seed * 0x9e37 + 17);

  // center of the quotient
  Mat comm(t->F(), Q.dim * Q.dim, Q.dim);
  for (size_t j = 0; j < Q.dim; ++j)
    for (size_t i = 0; i < Q.dim; ++i)
      for (size_t k = 0; k < Q.dim; ++k)
        comm.at(j * Q.dim + k, i) =
            t->F()->sub(Q.sc[i][j][k], Q.sc[j][i][k]);
  Mat znull = comm.kernel();
  std::vector<Vec> zbasis;
  for (size_t r = 0; r < znull.rows(); ++r) zbasis.push_back(znull.row(r));

  // split the center into primitive idempotents
  std::vector<Vec> central = {Q.unit};
  for (;;) {
    bool changed = false;
    std::vector<Vec> next;
    for (auto& e : central) {
      // probe with z*e for z over the center basis
      bool split_done = false;
      for (auto& z : zbasis) {
        Vec w = Q.mul(Q.mul(e, z), e);
        if (Q.is_zero(w)) continue;
        fp::P mu = Q.min_poly(w, e);
        auto factors = fp::factor(*t->F(), mu);
        if (factors.size() < 2) continue;
        fp::P muall = mu;
        for (auto& [fi, mi] : factors) {
          fp::P pw = {1};
          for (uint32_t s = 0; s < mi; ++s) pw = fp::mul(*t->F(), pw, fi);
          fp::P g = fp::divmod(*t->F(), muall, pw, nullptr);
          fp::P s, tt;
          fp::xgcd(*t->F(), g, pw, &s, &tt);
          fp::P idem_poly = fp::mod(*t->F(), fp::mul(*t->F(), g, s), muall);
          next.push_back(Q.eval_poly(idem_poly, w, e));
        }
        split_done = true;
        changed = true;
        break;
      }
      if (!split_done) next.push_back(e);
    }
    central = std::move(next);
    if (!changed) break;
  }

  // per component: primitive idempotents, matrix units, field generator
  struct AbstractFactor {
    std::vector<Vec> prim;           // orthogonal primitive idempotents
    std::vector<Vec> x_links, y_links;  // x_j in e1 Q e_j, y_j in e_j Q e1
    fp::P field_mu;
    Vec field_gen;  // in the (1,1) corner
    uint32_t d_u = 1, n_u = 1;
  };
  std::vector<AbstractFactor> abstract;
  for (auto& zu : central) {
    AbstractFactor af;
    std::vector<std::pair<fp::P, Vec>> fdata;
    primitive_idempotents(Q, zu, rng, af.prim, &fdata);
    af.n_u = uint32_t(af.prim.size());
    // the corner fields of the primitive idempotents all have the same
    // degree; take the data of the first
    af.field_mu = fdata[0].first;
    af.field_gen = fdata[0].second;
    af.d_u = uint32_t(fp::deg(af.field_mu));
    for (auto& [mu, gen] : fdata)
      check(uint32_t(fp::deg(mu)) == af.d_u, "corner degrees agree");
    // links x_j, y_j with x_j y_j = e1
    af.x_links.resize(af.n_u);
    af.y_links.resize(af.n_u);
    af.x_links[0] = af.prim[0];
    af.y_links[0] = af.prim[0];
    for (uint32_t j = 1; j < af.n_u; ++j) {
      // sandwich spaces e1 Q e_j and e_j Q e1
      auto sandwich = [&](const Vec& l, const Vec& r) {
        RowSpace rs(t->F(), Q.dim);
        std::vector<Vec> basis;
        for (size_t i = 0; i < Q.dim; ++i) {
          Vec v(Q.dim, 0);
          v[i] = 1;
          Vec w = Q.mul(Q.mul(l, v), r);
          if (rs.insert(w)) basis.push_back(w);
        }
        return basis;
      };
      auto s1j = sandwich(af.prim[0], af.prim[j]);
      auto sj1 = sandwich(af.prim[j], af.prim[0]);
      check(!s1j.empty() && !sj1.empty(), "simple component links exist");
      af.x_links[j] = s1j[0];
      // solve x * y = e1 for y in the (j,1) sandwich
      Mat sys(t->F(), Q.dim, sj1.size());
      for (size_t c = 0; c < sj1.size(); ++c) {
        Vec prod = Q.mul(af.x_links[j], sj1[c]);
        for (size_t rr = 0; rr < Q.dim; ++rr) sys.at(rr, c) = prod[rr];
      }
      // find coefficients: sys * co = e1
      Mat aug(t->F(), Q.dim, sj1.size() + 1);
      for (size_t rr = 0; rr < Q.dim; ++rr) {
        for (size_t c = 0; c < sj1.size(); ++c) aug.at(rr, c) = sys.at(rr, c);
        aug.at(rr, sj1.size()) = af.prim[0][rr];
      }
      auto piv = aug.rref();
      Vec y(Q.dim, 0);
      std::vector<uint64_t> co(sj1.size(), 0);
      bool ok = true;
      for (size_t i = 0; i < piv.size(); ++i) {
        if (piv[i] == sj1.size()) {
          ok = false;
          break;
        }
        co[piv[i]] = aug.at(i, sj1.size());
      }
      check(ok, "link equation solvable");
      for (size_t c = 0; c < sj1.size(); ++c)
        y = Q.add(y, Q.scale(sj1[c], co[c]));
      af.y_links[j] = y;
      check(Q.is_zero(Q.add(Q.mul(af.x_links[j], y),
                            Q.scale(af.prim[0], t->F()->neg(1)))),
            "x y = e1");
    }
    abstract.push_back(std::move(af));
  }

  // ------- lift to A -------
  const Mat zero(A.t->K(), A.n, A.n);
  Mat fsum = zero;
  auto newton = [&](Mat a, uint32_t* iters) {
    uint32_t it = 0;
    while (!((a * a - a).is_zero())) {
      Mat a2 = a * a;
      a = a2.scaled(K.from_prime(3)) - (a2 * a).scaled(K.from_prime(2));
      ++it;
      check(it < 64, "idempotent lifting converges");
    }
    if (iters) *iters = std::max(*iters, it);
    return a;
  };
  std::vector<std::vector<Mat>> lifted_idem(abstract.size());
  for (size_t u = 0; u < abstract.size(); ++u) {
    for (uint32_t j = 0; j < abstract[u].n_u; ++j) {
      Mat a0 = Q.section(abstract[u].prim[j]);
      // orthogonalize against the accumulated sum: (1 - f) a (1 - f)
      Mat a = a0 - fsum * a0 - a0 * fsum + fsum * a0 * fsum;
      a = newton(a, &wd.lifting_iterations);
      check((a * fsum).is_zero() && (fsum * a).is_zero(),
            "orthogonal idempotent family");
      lifted_idem[u].push_back(a);
      fsum = fsum + a;
    }
  }

  for (size_t u = 0; u < abstract.size(); ++u) {
    auto& af = abstract[u];
    SimpleFactor sf;
    sf.n_u = af.n_u;
    sf.d_u = af.d_u;
    sf.field_min_poly = af.field_mu;
    const Mat& f1 = lifted_idem[u][0];
    // lift links
    std::vector<Mat> X(af.n_u), Y(af.n_u);
    X[0] = f1;
    Y[0] = f1;
    for (uint32_t j = 1; j < af.n_u; ++j) {
      const Mat& fj = lifted_idem[u][j];
      Mat x = f1 * Q.section(af.x_links[j]) * fj;
      Mat y = fj * Q.section(af.y_links[j]) * f1;
      Mat c = f1 - x * y;  // in J cap corner
      // y <- y (f1 - c)^(-1) via the geometric series
      Mat inv = f1, cp = c;
      for (uint32_t s = 1; s <= wd.nu && !cp.is_zero(); ++s) {
        inv = inv + cp;
        cp = cp * c;
      }
      y = y * inv;
      check((x * y) == f1, "lifted link x y = f1");
      check((y * x) == fj, "lifted link y x = fj");
      X[j] = x;
      Y[j] = y;
    }
    // Teichmueller lift of the corner field generator
    Mat g = f1;
    if (af.d_u >= 1) {
      uint64_t mord = ipow64(t->q(), af.d_u) - 1;
      Mat g0 = f1 * Q.section(af.field_gen) * f1;
      if (mord == 1) {
        g = f1;
      } else {
        // order of p modulo mord
        uint64_t ord = 1, pw = t->F()->p() % mord;
        while (pw != 1) {
          pw = pw * t->F()->p() % mord;
          ++ord;
        }
        uint64_t L = ord;
        // ensure p^L kills the unipotent part: p^L >= nu
        while (ipow64(t->F()->p(), uint32_t(L)) < wd.nu) L += ord;
        g = g0.pow(ipow64(t->F()->p(), uint32_t(L)));
      }
      check(g.pow(mord) == f1, "field lift has unit order");
      // g reduces to the abstract generator
      check(Q.Jrows.contains(
                t->down(mat_flatten(g - Q.section(af.field_gen)))),
            "field lift reduces correctly");
    }
    sf.field_gen = g;
    // matrix units and the semisimple basis
    sf.units.assign(af.n_u, std::vector<Mat>(af.n_u, zero));
    for (uint32_t j = 0; j < af.n_u; ++j)
      for (uint32_t j2 = 0; j2 < af.n_u; ++j2) sf.units[j][j2] = Y[j] * X[j2];
    std::vector<Mat> gpow = {f1};
    for (uint32_t i = 1; i < af.d_u; ++i) gpow.push_back(gpow.back() * g);
    for (uint32_t j = 0; j < af.n_u; ++j)
      for (uint32_t j2 = 0; j2 < af.n_u; ++j2)
        for (uint32_t i = 0; i < af.d_u; ++i) {
          Mat s = Y[j] * gpow[i] * X[j2];
          if (wd.S_space.insert(mat_flatten(s))) wd.S.push_back(s);
        }
    wd.factors.push_back(std::move(sf));
  }

  // S + J = A exactly, S cap J = 0, S closed under multiplication
  check(wd.S_space.dim() == Q.dim, "complement dimension");
  check(wd.S_space.intersect(wd.J_space).dim() == 0, "S cap J = 0");
  check(wd.S_space.dim() + wd.J_space.dim() == A.dimF(), "S + J = A");
  for (auto& s1 : wd.S)
    for (auto& s2 : wd.S)
      check(wd.S_space.contains(mat_flatten(s1 * s2)), "S is a subalgebra");
  return wd;
}

// ------------------------------------------------------------ block form

namespace {

// column space of a matrix as a RowSpace of (row-encoded) column vectors
RowSpace column_space(const Mat& m) {
  RowSpace rs(m.field(), m.rows());
  for (size_t c = 0; c < m.cols(); ++c) {
    std::vector<uint64_t> v(m.rows());
    for (size_t r = 0; r < m.rows(); ++r) v[r] = m.at(r, c);
    rs.insert(v);
  }
  return rs;
}

}  // namespace

BlockForm block_form(const AlgebraPresentation& A, uint64_t seed) {
  BlockForm BF;
  BF.t = A.t;
  BF.n = A.n;
  BF.A = A;
  BF.wd = wedderburn_malcev(A, seed);
  const auto& t = A.t;
  const auto& K = *t->K();
  const uint32_t n = A.n;

  // radical flag U_s = J^s V over K0
  std::vector<RowSpace> flag;  // flag[s] = J^s V, s = 0..nu
  {
    RowSpace full(t->K(), n);
    for (uint32_t i = 0; i < n; ++i) {
      std::vector<uint64_t> e(n, 0);
      e[i] = 1;
      full.insert(e);
    }
    flag.push_back(full);
    for (;;) {
      RowSpace next(t->K(), n);
      for (auto& v : flag.back().rows())
        for (auto& j : BF.wd.J) next.insert(j.apply(v));
      // K0-span of J also acts through K0-scaling of the image: the image
      // of a K0-space under K0-linear maps is already a K0-space
      if (next.dim() == 0) {
        flag.push_back(next);
        break;
      }
      check(next.dim() < flag.back().dim(), "flag strictly descends");
      flag.push_back(next);
    }
  }
  const uint32_t depth = uint32_t(flag.size()) - 1;  // deepest nonzero level is depth-1

  struct BlockSeed {
    uint32_t layer;  // in J^layer V, not in J^(layer+1) V
    int32_t comp;    // component or -1
    uint32_t expnt;  // relative exponent (vs the canonical base eigenvalue)
    uint32_t n_u;
    std::vector<std::vector<uint64_t>> columns;
    size_t position;  // leading pivot of the first column (tie-break)
  };
  std::vector<BlockSeed> seeds;

  // per component: eigen-analysis of the field generator on the (1,1) corner
  const uint32_t kcomp = uint32_t(BF.wd.factors.size());
  for (uint32_t u = 0; u < kcomp; ++u) {
    auto& sf = BF.wd.factors[u];
    // roots of the center minimal polynomial inside K0
    std::vector<uint64_t> mu_k0(sf.field_min_poly.size());
    for (size_t i = 0; i < sf.field_min_poly.size(); ++i)
      mu_k0[i] = t->emb().to_sup(sf.field_min_poly[i]);
    uint64_t rho0 = K.size();
    for (uint64_t a = 0; a < K.size(); ++a) {
      uint64_t v = 0;
      for (size_t i = mu_k0.size(); i-- > 0;) v = K.add(K.mul(v, a), mu_k0[i]);
      if (v == 0) {
        rho0 = a;
        break;
      }
    }
    if (rho0 == K.size())
      throw NeedLargerM("center field does not embed in K0");
    // all roots are q-power conjugates of rho0
    std::vector<uint64_t> roots;
    for (uint32_t d = 0; d < sf.d_u; ++d) roots.push_back(t->qpow(rho0, d));

    const Mat& E11 = sf.units[0][0];
    RowSpace W1 = column_space(E11);
    size_t found = 0;
    for (uint32_t d = 0; d < sf.d_u; ++d) {
      uint64_t rho = roots[d];
      // eigenspace of the field generator on W1
      Mat shifted = sf.field_gen - Mat::identity(t->K(), n).scaled(rho);
      Mat ker = shifted.kernel();
      RowSpace kr(t->K(), n);
      for (size_t r = 0; r < ker.rows(); ++r) kr.insert(ker.row(r));
      RowSpace eig = kr.intersect(W1);
      found += eig.dim();
      // layer refinement within the eigenspace
      for (uint32_t layer = depth; layer + 1 > 0; --layer) {
        if (layer >= flag.size()) continue;
        RowSpace deeper =
            layer + 1 < flag.size() ? flag[layer + 1] : RowSpace(t->K(), n);
        RowSpace here = eig.intersect(flag[layer]);
        RowSpace accum = deeper.intersect(eig);
        for (auto& w : here.rows()) {
          if (!accum.insert(w)) continue;
          // one block per complement vector
          BlockSeed bs;
          bs.layer = layer;
          bs.comp = int32_t(u);
          bs.expnt = d;
          bs.n_u = sf.n_u;
          for (uint32_t j = 0; j < sf.n_u; ++j) {
            // column j of the block: E_(j,0) w
            bs.columns.push_back(sf.units[j][0].apply(w));
          }
          size_t pos = n;
          for (size_t i = 0; i < n; ++i)
            if (bs.columns[0][i]) {
              pos = i;
              break;
            }
          bs.position = pos;
          seeds.push_back(std::move(bs));
        }
        if (layer == 0) break;
      }
    }
    check(found == column_space(E11).dim(), "eigen decomposition complete");
  }

  // empty-block columns: the part of V not seen by the complement's unit
  {
    Mat e_total(t->K(), n, n);
    for (uint32_t u = 0; u < kcomp; ++u)
      for (uint32_t j = 0; j < BF.wd.factors[u].n_u; ++j)
        e_total = e_total + BF.wd.factors[u].units[j][j];
    Mat rest = Mat::identity(t->K(), n) - e_total;
    RowSpace V0 = column_space(rest);
    for (uint32_t layer = depth; layer + 1 > 0; --layer) {
      if (layer >= flag.size()) continue;
      RowSpace deeper =
          layer + 1 < flag.size() ? flag[layer + 1] : RowSpace(t->K(), n);
      RowSpace here = V0.intersect(flag[layer]);
      RowSpace accum = deeper.intersect(V0);
      for (auto& w : here.rows()) {
        if (!accum.insert(w)) continue;
        BlockSeed bs;
        bs.layer = layer;
        bs.comp = -1;
        bs.expnt = 0;
        bs.n_u = 1;
        bs.columns.push_back(w);
        size_t pos = n;
        for (size_t i = 0; i < n; ++i)
          if (w[i]) {
            pos = i;
            break;
          }
        bs.position = pos;
        seeds.push_back(std::move(bs));
      }
      if (layer == 0) break;
    }
  }

  // deterministic block order: deepest layer first, then original position;
  // empty blocks after real ones within a layer
  std::stable_sort(seeds.begin(), seeds.end(),
                   [](const BlockSeed& a, const BlockSeed& b) {
                     if (a.layer != b.layer) return a.layer > b.layer;
                     if ((a.comp < 0) != (b.comp < 0)) return b.comp < 0;
                     if (a.position != b.position) return a.position < b.position;
                     return a.comp < b.comp;
                   });
  // renumber components in order of first appearance along the diagonal
  {
    std::vector<int32_t> remap(kcomp, -1);
    int32_t next_id = 0;
    for (auto& s : seeds)
      if (s.comp >= 0 && remap[s.comp] < 0) remap[s.comp] = next_id++;
    check(next_id == int32_t(kcomp), "every component has a block");
    std::vector<SimpleFactor> reordered(kcomp);
    for (uint32_t u = 0; u < kcomp; ++u)
      reordered[remap[u]] = BF.wd.factors[u];
    BF.wd.factors = std::move(reordered);
    for (auto& s : seeds)
      if (s.comp >= 0) s.comp = remap[s.comp];
  }

  // assemble U
  size_t total_cols = 0;
  for (auto& s : seeds) total_cols += s.columns.size();
  check(total_cols == n, "block columns span the space");
  BF.U = Mat(t->K(), n, n);
  {
    size_t c = 0;
    for (auto& s : seeds) {
      for (auto& col : s.columns) {
        for (uint32_t r = 0; r < n; ++r) BF.U.at(r, c) = col[r];
        ++c;
      }
    }
  }
  BF.U_inv = BF.U.inverse();

  BF.m = uint32_t(seeds.size());
  BF.k = kcomp;
  BF.comp_d.resize(kcomp);
  BF.comp_n.resize(kcomp);
  for (uint32_t u = 0; u < kcomp; ++u) {
    BF.comp_d[u] = BF.wd.factors[u].d_u;
    BF.comp_n[u] = BF.wd.factors[u].n_u;
  }
  {
    uint32_t off = 0;
    std::vector<int64_t> base_exp(kcomp, -1);
    for (auto& s : seeds) {
      BF.block_size.push_back(uint32_t(s.columns.size()));
      BF.block_offset.push_back(off);
      off += uint32_t(s.columns.size());
      BF.block_comp.push_back(s.comp);
      uint32_t e = 0;
      if (s.comp >= 0) {
        uint32_t d_u = BF.comp_d[s.comp];
        if (base_exp[s.comp] < 0) base_exp[s.comp] = s.expnt;
        e = uint32_t((s.expnt + d_u - uint64_t(base_exp[s.comp])) % d_u);
      }
      BF.block_exp.push_back(e);
    }
  }

  // structural verification: in the conjugated frame the complement is block
  // diagonal, the radical strictly upper, and the center acts by the
  // Frobenius-twisted scalars
  for (auto& s : BF.wd.S) {
    Mat c = BF.conjugated(s);
    for (uint32_t r = 0; r < BF.m; ++r)
      for (uint32_t s2 = 0; s2 < BF.m; ++s2) {
        if (r == s2) continue;
        for (uint32_t i = 0; i < BF.block_size[r]; ++i)
          for (uint32_t j = 0; j < BF.block_size[s2]; ++j)
            check(c.at(BF.block_offset[r] + i, BF.block_offset[s2] + j) == 0,
                  "complement is block diagonal");
      }
  }
  for (auto& jm : BF.wd.J) {
    Mat c = BF.conjugated(jm);
    for (uint32_t r = 0; r < BF.m; ++r)
      for (uint32_t s2 = 0; s2 <= r; ++s2)
        for (uint32_t i = 0; i < BF.block_size[r]; ++i)
          for (uint32_t j = 0; j < BF.block_size[s2]; ++j)
            check(c.at(BF.block_offset[r] + i, BF.block_offset[s2] + j) == 0,
                  "radical is strictly upper");
  }
  for (uint32_t u = 0; u < kcomp; ++u) {
    Mat g = BF.conjugated(BF.wd.factors[u].field_gen);
    // pick the first block of the component as reference
    int32_t first = -1;
    for (uint32_t r = 0; r < BF.m; ++r)
      if (BF.block_comp[r] == int32_t(u)) {
        if (first < 0) first = int32_t(r);
        uint64_t rho_first =
            g.at(BF.block_offset[first], BF.block_offset[first]);
        uint64_t rho_r = g.at(BF.block_offset[r], BF.block_offset[r]);
        if (rho_r != t->qpow(rho_first, BF.block_exp[r]))
          throw InconsistentGluing(
              "center projections are not related by a Frobenius power");
      }
  }
  return BF;
}

std::vector<std::vector<uint32_t>> BlockForm::gluing_partition() const {
  std::vector<std::vector<uint32_t>> T(k);
  for (uint32_t r = 0; r < m; ++r)
    if (block_comp[r] >= 0) T[block_comp[r]].push_back(r);
  return T;
}

std::vector<std::vector<std::vector<uint32_t>>> BlockForm::identical_partition()
    const {
  auto T = gluing_partition();
  std::vector<std::vector<std::vector<uint32_t>>> out(k);
  for (uint32_t u = 0; u < k; ++u) {
    std::map<uint32_t, std::vector<uint32_t>> by_exp;
    for (auto r : T[u]) by_exp[block_exp[r]].push_back(r);
    for (auto& [e, blocks] : by_exp) out[u].push_back(blocks);
  }
  return out;
}

uint32_t BlockForm::exp_between(uint32_t r, uint32_t s) const {
  check(block_comp[r] >= 0 && block_comp[r] == block_comp[s],
        "blocks glued in the same component");
  uint32_t d = comp_d[block_comp[r]];
  return uint32_t((uint64_t(block_exp[s]) + d - block_exp[r]) % d);
}

Mat BlockForm::e_r(uint32_t r) const {
  Mat mask(t->K(), n, n);
  for (uint32_t i = 0; i < block_size[r]; ++i)
    mask.at(block_offset[r] + i, block_offset[r] + i) = 1;
  return U * mask * U_inv;
}

Mat BlockForm::e_hat(uint32_t u) const {
  Mat mask(t->K(), n, n);
  for (uint32_t r = 0; r < m; ++r)
    if (block_comp[r] == int32_t(u))
      for (uint32_t i = 0; i < block_size[r]; ++i)
        mask.at(block_offset[r] + i, block_offset[r] + i) = 1;
  return U * mask * U_inv;
}

std::vector<Mat> BlockForm::e_bar(uint32_t u) const {
  std::vector<Mat> out;
  auto partition = identical_partition();
  for (auto& cls : partition[u]) {
    Mat mask(t->K(), n, n);
    for (auto r : cls)
      for (uint32_t i = 0; i < block_size[r]; ++i)
        mask.at(block_offset[r] + i, block_offset[r] + i) = 1;
    out.push_back(U * mask * U_inv);
  }
  return out;
}

Mat BlockForm::slice(const Mat& a, uint32_t r, uint32_t s) const {
  Mat c = conjugated(a);
  Mat mask(t->K(), n, n);
  for (uint32_t i = 0; i < block_size[r]; ++i)
    for (uint32_t j = 0; j < block_size[s]; ++j)
      mask.at(block_offset[r] + i, block_offset[s] + j) =
          c.at(block_offset[r] + i, block_offset[s] + j);
  return U * mask * U_inv;
}

// --------------------------------------------------------- equivalence

std::vector<EquivClass> equiv_classes(const BlockForm& BF,
                                      const std::vector<uint32_t>& sig) {
  check(sig.size() >= 2, "signature length at least 2");
  for (auto u : sig) check(u < BF.k, "component index");
  uint32_t g = 0;
  for (auto u : sig) g = uint32_t(std::gcd(uint64_t(g), uint64_t(BF.comp_d[u])));
  auto T = BF.gluing_partition();
  // enumerate ordered tuples r_1 <= ... <= r_t with r_i in T_(u_i)
  std::vector<std::vector<uint32_t>> members;
  std::vector<uint32_t> cur(sig.size());
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == sig.size()) {
      members.push_back(cur);
      return;
    }
    for (auto r : T[sig[i]]) {
      if (i && r < cur[i - 1]) continue;
      cur[i] = r;
      rec(i + 1);
    }
  };
  rec(0);
  // group by the normalized exponent profile modulo g
  std::map<std::vector<uint32_t>, EquivClass> classes;
  for (auto& mem : members) {
    std::vector<uint32_t> key(sig.size());
    for (size_t i = 0; i < sig.size(); ++i)
      key[i] = uint32_t((BF.block_exp[mem[i]] % g + g -
                         BF.block_exp[mem[0]] % g) %
                        g);
    auto it = classes.find(key);
    if (it == classes.end()) {
      EquivClass c;
      c.sig = sig;
      c.members.push_back(mem);
      classes[key] = std::move(c);
    } else {
      it->second.members.push_back(mem);
    }
  }
  std::vector<EquivClass> out;
  for (auto& [key, c] : classes) out.push_back(std::move(c));
  return out;
}

std::vector<EquivClass> compose_classes(const BlockForm& BF,
                                        const EquivClass& a,
                                        const EquivClass& b) {
  if (a.sig.empty() || b.sig.empty() || a.sig.back() != b.sig.front())
    return {};
  std::vector<uint32_t> sig = a.sig;
  sig.insert(sig.end(), b.sig.begin() + 1, b.sig.end());
  // the junction set gamma * gamma'
  std::set<std::vector<uint32_t>> star;
  for (auto& r : a.members)
    for (auto& s : b.members) {
      if (r.back() != s.front()) continue;
      std::vector<uint32_t> cat = r;
      cat.insert(cat.end(), s.begin() + 1, s.end());
      star.insert(cat);
    }
  std::vector<EquivClass> out;
  for (auto& cls : equiv_classes(BF, sig)) {
    bool contained = !cls.members.empty();
    for (auto& mem : cls.members)
      if (!star.count(mem)) {
        contained = false;
        break;
      }
    if (contained) out.push_back(cls);
  }
  return out;
}

namespace {

// is the block pair (r, s) supported by the radical (a nonzero J-slice)?
bool radical_slice_nonzero(const BlockForm& BF, uint32_t r, uint32_t s) {
  for (auto& jm : BF.wd.J) {
    Mat c = BF.conjugated(jm);
    for (uint32_t i = 0; i < BF.block_size[r]; ++i)
      for (uint32_t j = 0; j < BF.block_size[s]; ++j)
        if (c.at(BF.block_offset[r] + i, BF.block_offset[s] + j)) return true;
  }
  return false;
}

}  // namespace

std::vector<EquivClass> refine_classes(const BlockForm& BF,
                                       const EquivClass& c) {
  const size_t t = c.sig.size();
  std::map<std::vector<uint8_t>, EquivClass> parts;
  for (auto& mem : c.members) {
    std::vector<uint8_t> pattern(t - 1);
    bool supported = true;
    for (size_t i = 0; i + 1 < t; ++i) {
      pattern[i] = mem[i] < mem[i + 1] ? 1 : 0;
      if (pattern[i] == 1 && !radical_slice_nonzero(BF, mem[i], mem[i + 1]))
        supported = false;
    }
    if (!supported) continue;
    auto it = parts.find(pattern);
    if (it == parts.end()) {
      EquivClass sub;
      sub.sig = c.sig;
      sub.refined = true;
      sub.types = pattern;
      sub.weight = 0;
      for (auto b : pattern) sub.weight += b;
      sub.flagged_zero = sub.weight >= BF.wd.nu;
      sub.members.push_back(mem);
      parts[pattern] = std::move(sub);
    } else {
      it->second.members.push_back(mem);
    }
  }
  std::vector<EquivClass> out;
  for (auto& [pat, sub] : parts) out.push_back(std::move(sub));
  return out;
}

Mat component(const BlockForm& BF, const std::vector<Mat>& chain,
              const EquivClass& cls) {
  const size_t t = cls.sig.size();
  if (chain.size() + 1 != t) throw SignatureMismatch("chain length");
  Mat acc(BF.t->K(), BF.n, BF.n);
  auto mask = [&](const Mat& x, uint32_t r, uint32_t s) {
    Mat out(BF.t->K(), BF.n, BF.n);
    for (uint32_t i = 0; i < BF.block_size[r]; ++i)
      for (uint32_t j = 0; j < BF.block_size[s]; ++j)
        out.at(BF.block_offset[r] + i, BF.block_offset[s] + j) =
            x.at(BF.block_offset[r] + i, BF.block_offset[s] + j);
    return out;
  };
  std::vector<Mat> conj;
  for (auto& a : chain) conj.push_back(BF.conjugated(a));
  for (auto& mem : cls.members) {
    Mat term = mask(conj[0], mem[0], mem[1]);
    for (size_t i = 1; i < chain.size(); ++i)
      term = term * mask(conj[i], mem[i], mem[i + 1]);
    acc = acc + term;
  }
  return BF.U * acc * BF.U_inv;
}

RowSpace component_space(const BlockForm& BF, const EquivClass& cls) {
  const size_t t = cls.sig.size();
  const size_t letters = t - 1;
  RowSpace span(BF.t->K(), size_t(BF.n) * BF.n);
  const auto& basis = BF.A.basis;
  std::vector<size_t> idx(letters, 0);
  for (;;) {
    std::vector<Mat> chain;
    for (auto i : idx) chain.push_back(basis[i]);
    span.insert(mat_flatten(component(BF, chain, cls)));
    size_t pos = 0;
    while (pos < letters && ++idx[pos] == basis.size()) idx[pos++] = 0;
    if (pos == letters) break;
  }
  return span;
}

PeirceDecomposition peirce(const AlgebraPresentation& A,
                           const std::vector<Mat>& idems) {
  const auto& t = A.t;
  for (size_t i = 0; i < idems.size(); ++i) {
    if (!((idems[i] * idems[i]) == idems[i]))
      throw NotOrthogonal("not an idempotent");
    for (size_t j = 0; j < idems.size(); ++j)
      if (i != j && !(idems[i] * idems[j]).is_zero())
        throw NotOrthogonal("idempotents not orthogonal");
  }
  PeirceDecomposition out;
  Mat esum(t->K(), A.n, A.n);
  for (auto& e : idems) esum = esum + e;
  // formal complement: e_0 x = x - e x, x e_0 = x - x e
  bool formal = true;
  if (A.unital && (esum == A.unit)) formal = false;
  out.formal_complement = formal;
  size_t count = idems.size() + (formal ? 1 : 0);
  auto apply_left = [&](size_t i, const Mat& x) {
    return i < idems.size() ? idems[i] * x : x - esum * x;
  };
  auto apply_right = [&](size_t j, const Mat& x) {
    return j < idems.size() ? x * idems[j] : x - x * esum;
  };
  out.comps.assign(count, std::vector<FSubspace>(count));
  size_t dim_total = 0;
  for (size_t i = 0; i < count; ++i)
    for (size_t j = 0; j < count; ++j) {
      FSubspace comp(t, A.n * A.n);
      for (auto& b : A.basis)
        comp.insert(mat_flatten(apply_right(j, apply_left(i, b))));
      dim_total += comp.dim();
      out.comps[i][j] = std::move(comp);
    }
  // when the idempotents lie in A the components decompose A exactly
  bool inside = true;
  for (auto& e : idems) inside &= A.contains(e);
  if (inside) check(dim_total == A.dimF(), "Peirce components sum to A");
  return out;
}

SubPeirceComponent sub_peirce(const BlockForm& BF, const Mat& left,
                              const Mat& right) {
  SubPeirceComponent out;
  out.space = RowSpace(BF.t->K(), size_t(BF.n) * BF.n);
  out.inside_A = true;
  for (auto& b : BF.A.basis) {
    Mat s = left * b * right;
    out.space.insert(mat_flatten(s));
    out.inside_A &= BF.A.contains(s);
  }
  return out;
}

}  // namespace zk
