#include "zk/oracle.hpp"

#include <algorithm>

namespace zk {

void enumerate_subspaces(
    const FieldRef& F, uint32_t d,
    const std::function<void(const std::vector<std::vector<uint64_t>>&)>& fn) {
  const uint64_t q = F->size();
  // enumerate reduced echelon forms: pick pivot columns, fill free entries
  for (uint32_t r = 0; r <= d; ++r) {
    // all pivot-column subsets of size r
    std::vector<uint32_t> piv(r);
    std::function<void(uint32_t, uint32_t)> pick = [&](uint32_t pos,
                                                       uint32_t from) {
      if (pos == r) {
        // free entries: row i, column c with c > piv[i], c not a pivot
        std::vector<std::pair<uint32_t, uint32_t>> free_cells;
        for (uint32_t i = 0; i < r; ++i)
          for (uint32_t c = piv[i] + 1; c < d; ++c)
            if (std::find(piv.begin(), piv.end(), c) == piv.end())
              free_cells.push_back({i, c});
        uint64_t combos = 1;
        for (size_t i = 0; i < free_cells.size(); ++i) {
          check(combos <= (1ull << 40) / q, "subspace enumeration budget");
          combos *= q;
        }
        for (uint64_t code = 0; code < combos; ++code) {
          std::vector<std::vector<uint64_t>> rows(
              r, std::vector<uint64_t>(d, 0));
          for (uint32_t i = 0; i < r; ++i) rows[i][piv[i]] = 1;
          uint64_t t = code;
          for (auto& [i, c] : free_cells) {
            rows[i][c] = t % q;
            t /= q;
          }
          fn(rows);
        }
        return;
      }
      for (uint32_t c = from; c < d; ++c) {
        piv[pos] = c;
        pick(pos + 1, c + 1);
      }
    };
    pick(0, 0);
  }
}

std::vector<Mat> radical_oracle(const AlgebraPresentation& A) {
  check(A.dimF() <= 6, "oracle is for small algebras");
  const auto& t = A.t;
  const uint32_t d = uint32_t(A.dimF());
  FSubspace rad(t, A.n * A.n);

  auto is_nil_ideal = [&](const std::vector<std::vector<uint64_t>>& rows) {
    // rows are coordinates w.r.t. the canonical basis of A
    std::vector<Mat> mats;
    for (auto& rw : rows) mats.push_back(A.element(rw));
    FSubspace span(t, A.n * A.n);
    for (auto& m : mats) span.insert(mat_flatten(m));
    // two-sided ideal
    for (auto& m : mats)
      for (auto& b : A.basis) {
        if (!span.contains(mat_flatten(m * b))) return false;
        if (!span.contains(mat_flatten(b * m))) return false;
      }
    // nilpotent as a set: span powers descend to zero
    FSubspace cur = span;
    for (uint32_t s = 0; s <= A.n + 1 && cur.dim(); ++s) {
      FSubspace next(t, A.n * A.n);
      for (auto& rw : cur.basis_K0())
        for (auto& m : mats)
          next.insert(mat_flatten(mat_unflatten(t, A.n, rw) * m));
      if (next.dim() >= cur.dim() && next.dim() > 0) return false;
      cur = std::move(next);
    }
    return cur.dim() == 0;
  };

  enumerate_subspaces(t->F(), d,
                      [&](const std::vector<std::vector<uint64_t>>& rows) {
                        if (rows.empty()) return;
                        if (!is_nil_ideal(rows)) return;
                        for (auto& rw : rows)
                          rad.insert(mat_flatten(A.element(rw)));
                      });
  std::vector<Mat> out;
  for (auto& row : rad.basis_K0()) out.push_back(mat_unflatten(t, A.n, row));
  // the sum of all nil ideals is itself one
  std::vector<std::vector<uint64_t>> coords;
  for (auto& m : out) coords.push_back(A.coords(m));
  check(coords.empty() || is_nil_ideal(coords), "sum of nil ideals is nil");
  return out;
}

RelationModule annihilator_points(TowerRef t, uint32_t n,
                                  const std::vector<std::vector<uint64_t>>& pts,
                                  uint32_t E) {
  Mat sys(t->K(), pts.size(), size_t(n) * E);
  for (size_t r = 0; r < pts.size(); ++r)
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t e = 0; e < E; ++e)
        sys.at(r, size_t(i) * E + e) = t->qpow(pts[r][i], e);
  Mat null = sys.kernel();
  std::vector<QPolynomial> gens;
  for (size_t r = 0; r < null.rows(); ++r) {
    std::vector<QTerm> terms;
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t e = 0; e < E; ++e)
        if (null.at(r, size_t(i) * E + e))
          terms.push_back({i, e, null.at(r, size_t(i) * E + e)});
    gens.push_back(qp_make(t, n, std::move(terms)));
  }
  return module_reduce(t, n, std::move(gens));
}

}  // namespace zk
