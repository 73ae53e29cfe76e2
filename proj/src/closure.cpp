#include "zk/closure.hpp"

#include <algorithm>
#include <map>

namespace zk {

std::vector<uint64_t> LinearParametrization::image_point(
    const std::vector<uint64_t>& assign) const {
  check(assign.size() == params.size(), "assignment length");
  const auto& K = *t->K();
  for (size_t j = 0; j < params.size(); ++j)
    check(t->in_level(assign[j], params[j].d), "assignment level");
  std::vector<uint64_t> v(n, 0);
  for (uint32_t i = 0; i < n; ++i)
    for (auto& tm : coords[i])
      v[i] = K.add(v[i], K.mul(tm.c, t->qpow(assign[tm.param], tm.e)));
  return v;
}

uint64_t LinearParametrization::assignment_count(uint64_t budget) const {
  uint64_t total = 1;
  for (auto& p : params) {
    uint64_t lvl = 1;
    for (uint32_t i = 0; i < p.d; ++i) lvl *= t->q();
    if (lvl != 0 && total > budget / lvl)
      throw BudgetExceeded("parameter assignment space");
    total *= lvl;
  }
  return total;
}

std::vector<uint64_t> LinearParametrization::assignment_by_index(
    uint64_t idx) const {
  std::vector<uint64_t> out(params.size());
  for (size_t j = 0; j < params.size(); ++j) {
    uint64_t lvl = 1;
    for (uint32_t i = 0; i < params[j].d; ++i) lvl *= t->q();
    uint64_t pick = idx % lvl;
    idx /= lvl;
    // enumerate the subfield GF(q^d) deterministically: F-combinations of
    // its power basis inside K0
    auto sub = Field::make(t->F()->p(), t->F()->k() * params[j].d);
    SubfieldMap emb(sub, t->K());
    out[j] = emb.to_sup(pick);
  }
  return out;
}

std::vector<std::vector<uint64_t>> LinearParametrization::spanning_points()
    const {
  std::vector<std::vector<uint64_t>> pts;
  for (size_t j = 0; j < params.size(); ++j) {
    auto sub = Field::make(t->F()->p(), t->F()->k() * params[j].d);
    SubfieldMap emb(sub, t->K());
    // F-basis of GF(q^d): powers of its generator
    for (uint32_t b = 0; b < params[j].d; ++b) {
      uint64_t val = emb.to_sup(sub->pow(sub->gen(), b));
      std::vector<uint64_t> assign(params.size(), 0);
      assign[j] = val;
      pts.push_back(image_point(assign));
    }
  }
  return pts;
}

RelationModule image_relations(const LinearParametrization& P, uint32_t E) {
  const auto& t = P.t;
  const auto& K = *t->K();
  check(E >= 1, "phi-degree bound positive");
  // unknowns c_(i,e); one linear equation per parameter per xi-power slot
  // after substituting the coordinates into the generic relation
  struct Slot {
    uint32_t param;
    uint32_t e;
  };
  std::map<std::pair<uint32_t, uint32_t>, size_t> slot_of;
  auto slot = [&](uint32_t j, uint32_t e) {
    // every parameter folds by its constraint xi^(q^d) = xi; a free
    // parameter (d = M) folds at the rationality level of K0, which is what
    // makes the result complete relative to (K0, E)
    uint32_t d = P.params[j].d;
    uint32_t folded = e % d;
    auto key = std::make_pair(j, folded);
    auto it = slot_of.find(key);
    if (it != slot_of.end()) return it->second;
    size_t idx = slot_of.size();
    slot_of[key] = idx;
    return idx;
  };
  // first pass: count slots
  for (uint32_t i = 0; i < P.n; ++i)
    for (auto& tm : P.coords[i])
      for (uint32_t e = 0; e < E; ++e) slot(tm.param, tm.e + e);
  const size_t rows = slot_of.size();
  const size_t cols = size_t(P.n) * E;
  Mat sys(t->K(), rows, cols);
  for (uint32_t i = 0; i < P.n; ++i)
    for (auto& tm : P.coords[i])
      for (uint32_t e = 0; e < E; ++e) {
        size_t r = slot(tm.param, tm.e + e);
        size_t c = size_t(i) * E + e;
        // (c' xi^(q^e'))^(q^e) = c'^(q^e) xi^(q^(e+e'))
        sys.at(r, c) = K.add(sys.at(r, c), t->qpow(tm.c, e));
      }
  Mat null = sys.kernel();
  std::vector<QPolynomial> gens;
  for (size_t r = 0; r < null.rows(); ++r) {
    std::vector<QTerm> terms;
    for (uint32_t i = 0; i < P.n; ++i)
      for (uint32_t e = 0; e < E; ++e) {
        uint64_t c = null.at(r, size_t(i) * E + e);
        if (c) terms.push_back({i, e, c});
      }
    gens.push_back(qp_make(t, P.n, std::move(terms)));
  }
  return module_reduce(t, P.n, std::move(gens));
}

ClosedSpace closure(const LinearParametrization& P) {
  ClosedSpace C;
  C.t = P.t;
  C.n = P.n;
  C.relations = image_relations(P, P.t->M());
  C.parametrization = P;
  return C;
}

ClosedSpace closure_assume_infinite(const LinearParametrization& P) {
  // K-span relations only: K0-linear forms vanishing on the image
  auto span = k_span(P);
  Mat m = span.as_matrix();
  Mat null = m.kernel();
  std::vector<QPolynomial> gens;
  for (size_t r = 0; r < null.rows(); ++r) {
    std::vector<QTerm> terms;
    for (uint32_t i = 0; i < P.n; ++i)
      if (null.at(r, i)) terms.push_back({i, 0, null.at(r, i)});
    gens.push_back(qp_make(P.t, P.n, std::move(terms)));
  }
  ClosedSpace C;
  C.t = P.t;
  C.n = P.n;
  C.relations = module_reduce(P.t, P.n, std::move(gens));
  C.parametrization = P;
  return C;
}

bool member(const std::vector<uint64_t>& v, const ClosedSpace& C) {
  if (v.size() != C.n) throw NoEmbedding("point dimension");
  for (auto& g : C.relations.gens)
    if (evaluate(g, v) != 0) return false;
  return true;
}

size_t point_count_exponent(const ClosedSpace& C, uint32_t m) {
  return kernel_dim(C.relations, m);
}

RowSpace k_span_points(TowerRef t,
                       const std::vector<std::vector<uint64_t>>& pts) {
  check(!pts.empty(), "nonempty point set");
  RowSpace span(t->K(), pts[0].size());
  for (auto& p : pts) span.insert(p);
  return span;
}

RowSpace k_span(const LinearParametrization& P) {
  // the K0-span of the image is spanned by single-parameter contributions
  // over all values of each parameter's subfield
  RowSpace span(P.t->K(), P.n);
  for (size_t j = 0; j < P.params.size(); ++j) {
    for (uint64_t val : P.t->subfield_elements(P.params[j].d)) {
      std::vector<uint64_t> assign(P.params.size(), 0);
      assign[j] = val;
      span.insert(P.image_point(assign));
    }
  }
  return span;
}

LinearParametrization canonical_parametrization(const FSubspace& A) {
  LinearParametrization P;
  P.t = A.tower();
  P.n = A.ambient_n();
  auto basis = A.basis_K0();
  P.coords.resize(P.n);
  for (size_t j = 0; j < basis.size(); ++j) {
    P.params.push_back({"c" + std::to_string(j + 1), 1});
    for (uint32_t i = 0; i < P.n; ++i)
      if (basis[j][i]) P.coords[i].push_back({uint32_t(j), 0, basis[j][i]});
  }
  return P;
}

std::pair<AlgebraPresentation, ClosedSpace> close_algebra(
    TowerRef t, uint32_t n, const std::vector<Mat>& gens) {
  auto A = close_algebra_gens(t, n, gens);
  return {A, closure_of_algebra(A)};
}

ClosedSpace closure_of_algebra(const AlgebraPresentation& A) {
  return closure(canonical_parametrization(A.space));
}

}  // namespace zk
