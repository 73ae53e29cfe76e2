#include "zk/algebra.hpp"

#include <algorithm>

namespace zk {

std::vector<uint64_t> mat_flatten(const Mat& m) { return m.data(); }

Mat mat_unflatten(TowerRef t, uint32_t n, const std::vector<uint64_t>& v) {
  check(v.size() == size_t(n) * n, "flattened size");
  Mat m(t->K(), n, n);
  m.data() = v;
  return m;
}

bool AlgebraPresentation::contains(const Mat& m) const {
  return space.contains(mat_flatten(m));
}

std::vector<uint64_t> AlgebraPresentation::coords(const Mat& m) const {
  std::vector<uint64_t> out;
  bool ok = space.rows().coords(t->down(mat_flatten(m)), out);
  check(ok, "coords of member element");
  return out;
}

Mat AlgebraPresentation::element(const std::vector<uint64_t>& f_coords) const {
  check(f_coords.size() == basis.size(), "coordinate length");
  Mat acc(t->K(), n, n);
  for (size_t i = 0; i < basis.size(); ++i)
    if (f_coords[i])
      acc = acc + basis[i].scaled(t->emb().to_sup(f_coords[i]));
  return acc;
}

uint64_t AlgebraPresentation::element_count_checked(uint64_t budget) const {
  uint64_t count = 1;
  for (size_t i = 0; i < dimF(); ++i) {
    if (count > budget / t->q()) throw BudgetExceeded("algebra enumeration");
    count *= t->q();
  }
  return count;
}

Mat AlgebraPresentation::element_by_index(uint64_t idx) const {
  const uint64_t q = t->q();
  std::vector<uint64_t> c(dimF());
  for (size_t i = 0; i < dimF(); ++i) {
    c[i] = idx % q;
    idx /= q;
  }
  return element(c);
}

std::vector<Mat> AlgebraPresentation::elements(uint64_t budget) const {
  uint64_t count = element_count_checked(budget);
  std::vector<Mat> out;
  out.reserve(count);
  for (uint64_t i = 0; i < count; ++i) out.push_back(element_by_index(i));
  return out;
}

namespace {

void detect_unit(AlgebraPresentation& A) {
  // solve u b_i = b_i and b_i u = b_i over F in the canonical coordinates
  const size_t d = A.basis.size();
  A.unital = false;
  if (d == 0) return;
  const auto& F = A.t->F();
  Mat sys(F, 2 * d * d, d);
  Mat rhs_rows(F, 1, 2 * d * d);
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = 0; j < d; ++j) {
      // coefficient of u_j in coords(b_j * b_i) and coords(b_i * b_j)
      auto left = A.coords(A.basis[j] * A.basis[i]);
      auto right = A.coords(A.basis[i] * A.basis[j]);
      for (size_t k = 0; k < d; ++k) {
        sys.at(i * d + k, j) = left[k];
        sys.at((d + i) * d + k, j) = right[k];
      }
    }
  }
  // rhs: coords of b_i stacked twice
  std::vector<uint64_t> rhs(2 * d * d, 0);
  for (size_t i = 0; i < d; ++i) {
    std::vector<uint64_t> ci(d, 0);
    ci[i] = 1;
    for (size_t k = 0; k < d; ++k) {
      rhs[i * d + k] = ci[k];
      rhs[(d + i) * d + k] = ci[k];
    }
  }
  // solve sys * u = rhs
  Mat aug(F, 2 * d * d, d + 1);
  for (size_t r = 0; r < 2 * d * d; ++r) {
    for (size_t c = 0; c < d; ++c) aug.at(r, c) = sys.at(r, c);
    aug.at(r, d) = rhs[r];
  }
  auto piv = aug.rref();
  std::vector<uint64_t> u(d, 0);
  for (size_t i = 0; i < piv.size(); ++i) {
    if (piv[i] == d) return;  // inconsistent: no unit
    u[piv[i]] = aug.at(i, d);
  }
  A.unital = true;
  A.unit = A.element(u);
}

AlgebraPresentation finish(TowerRef t, uint32_t n, FSubspace space) {
  AlgebraPresentation A;
  A.t = t;
  A.n = n;
  A.space = std::move(space);
  for (auto& row : A.space.basis_K0()) A.basis.push_back(mat_unflatten(t, n, row));
  detect_unit(A);
  return A;
}

}  // namespace

AlgebraPresentation close_algebra_gens(TowerRef t, uint32_t n,
                                       const std::vector<Mat>& gens) {
  FSubspace space(t, n * n);
  std::vector<Mat> fresh;
  for (auto& g : gens) {
    check(g.rows() == n && g.cols() == n, "generator shape");
    if (space.insert(mat_flatten(g))) fresh.push_back(g);
  }
  // close under products: multiply new basis elements against everything
  while (!fresh.empty()) {
    std::vector<Mat> next;
    auto basis_now = space.basis_K0();
    for (auto& fm : fresh)
      for (auto& row : basis_now) {
        Mat b = mat_unflatten(t, n, row);
        for (Mat prod : {fm * b, b * fm})
          if (space.insert(mat_flatten(prod))) next.push_back(prod);
      }
    fresh = std::move(next);
  }
  return finish(t, n, std::move(space));
}

AlgebraPresentation algebra_from_span(TowerRef t, uint32_t n,
                                      const std::vector<Mat>& spanning,
                                      bool* was_closed) {
  FSubspace space(t, n * n);
  for (auto& g : spanning) space.insert(mat_flatten(g));
  size_t dim_before = space.dim();
  auto A = close_algebra_gens(t, n, spanning);
  if (was_closed) *was_closed = A.dimF() == dim_before;
  return A;
}

std::vector<std::vector<std::vector<uint64_t>>> structure_constants(
    const AlgebraPresentation& A) {
  const size_t d = A.dimF();
  std::vector sc(d, std::vector(d, std::vector<uint64_t>(d, 0)));
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) sc[i][j] = A.coords(A.basis[i] * A.basis[j]);
  return sc;
}

AlgebraPresentation random_algebra(TowerRef t, uint32_t n, size_t max_dim,
                                   Rng& rng) {
  const uint64_t K_size = t->K()->size();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    // sparse random generators keep the closure small
    std::vector<Mat> gens;
    size_t count = 1 + rng.below(2);
    for (size_t g = 0; g < count; ++g) {
      Mat m(t->K(), n, n);
      size_t entries = 1 + rng.below(3);
      for (size_t e = 0; e < entries; ++e)
        m.at(rng.below(n), rng.below(n)) = rng.below(K_size);
      gens.push_back(m);
    }
    auto A = close_algebra_gens(t, n, gens);
    if (A.dimF() >= 1 && A.dimF() <= max_dim) return A;
  }
  throw Error("random_algebra: no instance within the dimension bound");
}

}  // namespace zk
