#include "zk/generic.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "zk/closure.hpp"
#include "zk/evalkernel.hpp"
#include "zk/rng.hpp"

namespace zk {

uint64_t GenericCoefficientRing::value(uint32_t var, uint64_t assign) const {
  for (uint32_t i = 0; i < var; ++i) assign /= level_values[i].size();
  return level_values[var][assign % level_values[var].size()];
}

GenericCoefficientRing::Elem GenericCoefficientRing::variable(
    uint32_t var) const {
  Elem e(table_size);
  for (uint64_t a = 0; a < table_size; ++a) e[a] = value(var, a);
  return e;
}

GenericCoefficientRing::Elem GenericCoefficientRing::constant(
    uint64_t c) const {
  return Elem(table_size, c);
}

GenericCoefficientRing::Elem GenericCoefficientRing::add(const Elem& a,
                                                         const Elem& b) const {
  Elem r(table_size);
  for (uint64_t i = 0; i < table_size; ++i) r[i] = t->K()->add(a[i], b[i]);
  return r;
}

GenericCoefficientRing::Elem GenericCoefficientRing::mul(const Elem& a,
                                                         const Elem& b) const {
  Elem r(table_size);
  for (uint64_t i = 0; i < table_size; ++i) r[i] = t->K()->mul(a[i], b[i]);
  return r;
}

GenericCoefficientRing::Elem GenericCoefficientRing::qpow(const Elem& a,
                                                          uint32_t e) const {
  Elem r(table_size);
  for (uint64_t i = 0; i < table_size; ++i) r[i] = t->qpow(a[i], e);
  return r;
}

bool GenericCoefficientRing::is_zero(const Elem& a) const {
  for (auto v : a)
    if (v) return false;
  return true;
}

GenericCoefficientRing build_coeff_ring(TowerRef t,
                                        const std::vector<uint32_t>& ds,
                                        uint64_t budget) {
  GenericCoefficientRing C;
  C.t = t;
  C.constraints = ds;
  for (auto d : ds) {
    check(d >= 1 && d <= t->M(), "constraint within the field of definition");
    auto sub = Field::make(t->F()->p(), t->F()->k() * d);
    SubfieldMap emb(sub, t->K());
    std::vector<uint64_t> vals;
    for (uint64_t a = 0; a < sub->size(); ++a) vals.push_back(emb.to_sup(a));
    if (C.table_size > budget / vals.size())
      throw BudgetExceeded("evaluation table size");
    C.table_size *= vals.size();
    C.level_values.push_back(std::move(vals));
  }
  return C;
}

Mat GenericGenerator::specialize(const GenericCoefficientRing& C,
                                 uint64_t assign) const {
  check(!parts.empty(), "generator has placements");
  Mat acc(C.t->K(), parts[0].pattern.rows(), parts[0].pattern.cols());
  for (auto& part : parts) {
    uint64_t v = C.t->qpow(C.value(part.var, assign), part.e);
    if (v) acc = acc + part.pattern.scaled(v);
  }
  return acc;
}

GenericAlgebra build_generic(const BlockForm& BF, uint32_t mu,
                             uint64_t budget) {
  GenericAlgebra G;
  G.n = BF.n;
  G.mu = mu;
  G.source = BF;
  const auto& t = BF.t;

  // one set of cells per generator, each cell one fresh variable
  struct CellSpec {
    uint32_t d;
    std::vector<std::pair<uint32_t, Mat>> placements;  // (twist, pattern)
  };
  std::vector<CellSpec> cells;
  auto T = BF.gluing_partition();
  for (uint32_t u = 0; u < BF.k; ++u) {
    uint32_t nu_sz = BF.comp_n[u];
    for (uint32_t j = 0; j < nu_sz; ++j)
      for (uint32_t j2 = 0; j2 < nu_sz; ++j2) {
        CellSpec cs;
        cs.d = BF.comp_d[u];
        for (auto r : T[u]) {
          Mat unit(t->K(), BF.n, BF.n);
          unit.at(BF.block_offset[r] + j, BF.block_offset[r] + j2) = 1;
          cs.placements.push_back(
              {BF.block_exp[r], BF.U * unit * BF.U_inv});
        }
        cells.push_back(std::move(cs));
      }
  }
  // the radical part: K0-cells when the radical is a K0-subspace, F-cells
  // otherwise
  {
    RowSpace k0span(t->K(), size_t(BF.n) * BF.n);
    for (auto& j : BF.wd.J) k0span.insert(mat_flatten(j));
    bool stable = k0span.dim() * t->M() == BF.wd.J_space.dim();
    if (stable) {
      for (auto& row : k0span.rows()) {
        CellSpec cs;
        cs.d = t->M();
        cs.placements.push_back({0, mat_unflatten(t, BF.n, row)});
        cells.push_back(std::move(cs));
      }
    } else {
      for (auto& j : BF.wd.J) {
        CellSpec cs;
        cs.d = 1;
        cs.placements.push_back({0, j});
        cells.push_back(std::move(cs));
      }
    }
  }

  std::vector<uint32_t> ds;
  for (uint32_t k2 = 0; k2 < mu; ++k2)
    for (auto& cs : cells) ds.push_back(cs.d);
  G.C = build_coeff_ring(t, ds, budget);
  for (uint32_t k2 = 0; k2 < mu; ++k2) {
    GenericGenerator gen;
    uint32_t v = uint32_t(k2 * cells.size());
    for (auto& cs : cells) {
      for (auto& [e, pat] : cs.placements) gen.parts.push_back({v, e, pat});
      ++v;
    }
    G.gens.push_back(std::move(gen));
  }
  return G;
}

std::vector<NCWord> word_basis(uint32_t m, uint32_t D) {
  std::vector<NCWord> words;
  std::vector<uint32_t> cur;
  std::function<void()> rec = [&]() {
    if (!cur.empty()) {
      NCWord w;
      for (auto v : cur) {
        if (!w.empty() && w.back().first == v)
          w.back().second++;
        else
          w.push_back({v, 1});
      }
      words.push_back(w);
    }
    if (cur.size() == D) return;
    for (uint32_t v = 0; v < m; ++v) {
      cur.push_back(v);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return words;
}

std::vector<std::vector<uint32_t>> identity_space(const AlgebraPresentation& A,
                                                  uint32_t m, uint32_t D,
                                                  uint64_t budget, Exec exec) {
  auto words = word_basis(m, D);
  const uint32_t p = A.t->F()->p();
  uint64_t per_var = A.element_count_checked(budget);
  uint64_t total = 1;
  for (uint32_t i = 0; i < m; ++i) {
    if (total > budget / per_var) throw BudgetExceeded("identity space");
    total *= per_var;
  }
  std::vector<Mat> elems;
  for (uint64_t i = 0; i < per_var; ++i) elems.push_back(A.element_by_index(i));
  const size_t cell = size_t(A.n) * A.n;
  std::vector<uint64_t> flat(per_var * cell);
  for (uint64_t i = 0; i < per_var; ++i)
    std::copy(elems[i].data().begin(), elems[i].data().end(),
              flat.begin() + i * cell);
  // evaluation matrix over GF(p): rows (tuple, matrix entry, digit),
  // columns words; built in parallel over tuples
  auto Fp = Field::make(p, 1);
  const Field& K = *A.t->K();
  const uint32_t kd = A.t->K()->k();
  size_t row_block = cell * kd;
  Mat sys(Fp, total * row_block, words.size());
  parallel_for(total, exec, [&](uint64_t tup) {
    if (exec == Exec::Serial) {
      // reference path
      std::vector<Mat> args(m, Mat(A.t->K(), A.n, A.n));
      uint64_t idx = tup;
      for (uint32_t v = 0; v < m; ++v) {
        args[v] = elems[idx % per_var];
        idx /= per_var;
      }
      for (size_t w = 0; w < words.size(); ++w) {
        Mat val = Mat::identity(A.t->K(), A.n);
        for (auto& [v, e] : words[w]) val = val * args[v].pow(e);
        for (uint32_t i = 0; i < A.n; ++i)
          for (uint32_t j = 0; j < A.n; ++j) {
            auto digits = A.t->K()->digits(val.at(i, j));
            for (uint32_t d = 0; d < kd; ++d)
              sys.at(tup * row_block + (size_t(i) * A.n + j) * kd + d, w) =
                  digits[d];
          }
      }
      return;
    }
    static thread_local EvalScratch scratch;
    std::vector<const uint64_t*> args(m);
    uint64_t idx = tup;
    for (uint32_t v = 0; v < m; ++v) {
      args[v] = flat.data() + (idx % per_var) * cell;
      idx /= per_var;
    }
    for (size_t w = 0; w < words.size(); ++w) {
      bool nonempty = word_eval(K, words[w], A.n, args.data(), scratch);
      check(nonempty, "word basis has no empty words");
      for (uint32_t i = 0; i < A.n; ++i)
        for (uint32_t j = 0; j < A.n; ++j) {
          auto digits = K.digits(scratch.cur[size_t(i) * A.n + j]);
          for (uint32_t d = 0; d < kd; ++d)
            sys.at(tup * row_block + (size_t(i) * A.n + j) * kd + d, w) =
                digits[d];
        }
    }
  });
  Mat null = sys.kernel();
  std::vector<std::vector<uint32_t>> out;
  for (size_t r = 0; r < null.rows(); ++r) {
    std::vector<uint32_t> coef(words.size());
    for (size_t w = 0; w < words.size(); ++w)
      coef[w] = uint32_t(null.at(r, w));
    out.push_back(std::move(coef));
  }
  return out;
}

FreenessReport verify_relatively_free(const GenericAlgebra& G,
                                      const AlgebraPresentation& A, uint32_t D,
                                      uint64_t budget) {
  FreenessReport rep;
  auto words = word_basis(G.mu, D);
  auto ids = identity_space(A, G.mu, D, budget);
  rep.identities_checked = ids.size();
  const auto& t = A.t;
  // (a) every identity of A holds in the generic algebra: evaluate the
  // word combination at every assignment of the coefficient ring
  for (auto& coef : ids) {
    for (uint64_t assign = 0; assign < G.C.table_size && rep.identities_hold;
         ++assign) {
      std::vector<Mat> ys;
      for (auto& g : G.gens) ys.push_back(g.specialize(G.C, assign));
      Mat acc(t->K(), G.n, G.n);
      for (size_t w = 0; w < words.size(); ++w) {
        if (!coef[w]) continue;
        Mat val = Mat::identity(t->K(), G.n);
        for (auto& [v, e] : words[w]) val = val * ys[v].pow(e);
        acc = acc + val.scaled(t->K()->from_prime(coef[w]));
      }
      if (!acc.is_zero()) rep.identities_hold = false;
    }
    if (!rep.identities_hold) break;
  }
  // (b) freeness surrogate: each generator's specialization map is an
  // F-linear map onto A, so mutually generic elements specialize to
  // arbitrary tuples of A-elements.  A variable's placements across glued
  // blocks are correlated and only their coherent sum lands in A.
  for (auto& g : G.gens) {
    FSubspace image(t, A.n * A.n);
    std::map<uint32_t, std::vector<const GenericGenerator::Part*>> by_var;
    for (auto& part : g.parts) by_var[part.var].push_back(&part);
    for (auto& [var, parts] : by_var) {
      uint32_t d = G.C.constraints[var];
      auto sub = Field::make(t->F()->p(), t->F()->k() * d);
      SubfieldMap emb(sub, t->K());
      for (uint32_t b = 0; b < d; ++b) {
        uint64_t val = emb.to_sup(sub->pow(sub->gen(), b));
        Mat img(t->K(), A.n, A.n);
        for (auto* part : parts)
          img = img + part->pattern.scaled(t->qpow(val, part->e));
        check(A.contains(img), "specializations land in A");
        image.insert(mat_flatten(img));
      }
    }
    rep.gen_rank.push_back(image.dim());
    if (image.dim() != A.dimF()) rep.specializations_onto = false;
  }
  return rep;
}

namespace {

bool generates(const AlgebraPresentation& A, const FSubspace& target,
               const std::vector<Mat>& tuple) {
  auto sub = close_algebra_gens(A.t, A.n, tuple);
  if (sub.dimF() != target.dim()) return false;
  for (auto& b : sub.basis)
    if (!target.contains(mat_flatten(b))) return false;
  return true;
}

}  // namespace

PiRankBound pi_rank_bound(const AlgebraPresentation& A, uint64_t seed,
                          uint64_t budget) {
  (void)budget;
  PiRankBound out;
  auto wd = wedderburn_malcev(A, seed);
  out.nu = wd.nu;
  if (wd.S.empty()) {
    out.mu_S = 0;
    return out;
  }
  FSubspace Starget = wd.S_space;
  // structured candidate: the "diagonal with distinct entries" plus the
  // shift, assembled across components from the lifted matrix units
  Rng rng(seed + 0xabcd);
  for (uint32_t mu = 1; mu <= uint32_t(wd.S.size()); ++mu) {
    // structured try: distribute field generators and shifts round-robin
    std::vector<Mat> structured(mu, Mat(A.t->K(), A.n, A.n));
    {
      uint32_t slot = 0;
      for (auto& f : wd.factors) {
        // a field generator on the diagonal of the factor
        Mat diag(A.t->K(), A.n, A.n);
        for (uint32_t j = 0; j < f.n_u; ++j)
          diag = diag + f.units[j][0] * f.field_gen.pow(j + 1) * f.units[0][j];
        structured[slot % mu] = structured[slot % mu] + diag;
        ++slot;
        if (f.n_u > 1) {
          Mat shift(A.t->K(), A.n, A.n);
          for (uint32_t j = 0; j + 1 < f.n_u; ++j)
            shift = shift + f.units[j][j + 1];
          structured[slot % mu] = structured[slot % mu] + shift;
          ++slot;
        }
      }
    }
    if (generates(A, Starget, structured)) {
      out.mu_S = mu;
      return out;
    }
    for (int tries = 0; tries < 60; ++tries) {
      std::vector<Mat> tuple;
      for (uint32_t i = 0; i < mu; ++i) {
        std::vector<uint64_t> coords(wd.S.size());
        for (auto& c : coords) c = rng.below(A.t->q());
        Mat m(A.t->K(), A.n, A.n);
        for (size_t s = 0; s < wd.S.size(); ++s)
          if (coords[s])
            m = m + wd.S[s].scaled(A.t->emb().to_sup(coords[s]));
        tuple.push_back(m);
      }
      if (generates(A, Starget, tuple)) {
        out.mu_S = mu;
        return out;
      }
    }
  }
  out.mu_S = uint32_t(wd.S.size());
  return out;
}

PiRankWitness pi_rank_witness(const AlgebraPresentation& A, uint32_t mu,
                              uint32_t D, uint32_t vars, uint64_t seed,
                              uint64_t budget) {
  PiRankWitness out;
  auto target_ids = identity_space(A, vars, D, budget);
  Rng rng(seed + 0x5eed);
  auto wd = wedderburn_malcev(A, seed);
  auto try_tuple = [&](const std::vector<Mat>& tuple) {
    auto B = close_algebra_gens(A.t, A.n, tuple);
    auto ids = identity_space(B, vars, D, budget);
    if (ids.size() != target_ids.size()) return false;
    out.found = true;
    out.tuple_coords.clear();
    for (auto& m : tuple) out.tuple_coords.push_back(A.coords(m));
    return true;
  };
  // structured candidate: semisimple generators plus one radical layer sum
  {
    auto pr = pi_rank_bound(A, seed);
    std::vector<Mat> tuple(mu, Mat(A.t->K(), A.n, A.n));
    uint32_t slot = 0;
    for (auto& f : wd.factors) {
      Mat diag(A.t->K(), A.n, A.n);
      for (uint32_t j = 0; j < f.n_u; ++j)
        diag = diag + f.units[j][0] * f.field_gen.pow(j + 1) * f.units[0][j];
      tuple[slot % mu] = tuple[slot % mu] + diag;
      ++slot;
      if (f.n_u > 1) {
        Mat shift(A.t->K(), A.n, A.n);
        for (uint32_t j = 0; j + 1 < f.n_u; ++j)
          shift = shift + f.units[j][j + 1];
        tuple[slot % mu] = tuple[slot % mu] + shift;
        ++slot;
      }
    }
    for (auto& jm : wd.J) {
      tuple[slot % mu] = tuple[slot % mu] + jm;
      ++slot;
    }
    if (try_tuple(tuple)) return out;
    (void)pr;
  }
  for (int tries = 0; tries < 40; ++tries) {
    std::vector<Mat> tuple;
    for (uint32_t i = 0; i < mu; ++i) {
      std::vector<uint64_t> coords(A.dimF());
      for (auto& c : coords) c = rng.below(A.t->q());
      tuple.push_back(A.element(coords));
    }
    if (try_tuple(tuple)) return out;
  }
  return out;
}

}  // namespace zk
