#include "zk/linalg.hpp"

#include <algorithm>

namespace zk {

Mat Mat::identity(FieldRef f, size_t n) {
  Mat m(std::move(f), n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat Mat::operator+(const Mat& o) const {
  check(rows_ == o.rows_ && cols_ == o.cols_, "matrix shape");
  Mat r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_->add(a_[i], o.a_[i]);
  return r;
}

Mat Mat::operator-(const Mat& o) const {
  check(rows_ == o.rows_ && cols_ == o.cols_, "matrix shape");
  Mat r = *this;
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_->sub(a_[i], o.a_[i]);
  return r;
}

Mat Mat::operator*(const Mat& o) const {
  check(cols_ == o.rows_, "matrix shape");
  Mat r(f_, rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      uint64_t v = at(i, k);
      if (!v) continue;
      for (size_t j = 0; j < o.cols_; ++j) {
        uint64_t w = o.at(k, j);
        if (w) r.at(i, j) = f_->add(r.at(i, j), f_->mul(v, w));
      }
    }
  return r;
}

Mat Mat::scaled(uint64_t c) const {
  Mat r = *this;
  for (auto& x : r.a_) x = f_->mul(x, c);
  return r;
}

Mat Mat::transpose() const {
  Mat r(f_, cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
  return r;
}

bool Mat::is_zero() const {
  for (auto x : a_)
    if (x) return false;
  return true;
}

std::vector<uint64_t> Mat::apply(const std::vector<uint64_t>& v) const {
  check(v.size() == cols_, "matrix apply shape");
  std::vector<uint64_t> r(rows_, 0);
  for (size_t i = 0; i < rows_; ++i) {
    uint64_t acc = 0;
    for (size_t j = 0; j < cols_; ++j)
      if (at(i, j) && v[j]) acc = f_->add(acc, f_->mul(at(i, j), v[j]));
    r[i] = acc;
  }
  return r;
}

std::vector<size_t> Mat::rref() {
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < cols_ && r < rows_; ++c) {
    size_t piv = rows_;
    for (size_t i = r; i < rows_; ++i)
      if (at(i, c)) {
        piv = i;
        break;
      }
    if (piv == rows_) continue;
    if (piv != r)
      for (size_t j = 0; j < cols_; ++j) std::swap(at(r, j), at(piv, j));
    uint64_t iv = f_->inv(at(r, c));
    for (size_t j = c; j < cols_; ++j) at(r, j) = f_->mul(at(r, j), iv);
    for (size_t i = 0; i < rows_; ++i) {
      if (i == r || !at(i, c)) continue;
      uint64_t fac = at(i, c);
      for (size_t j = c; j < cols_; ++j)
        at(i, j) = f_->sub(at(i, j), f_->mul(fac, at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t Mat::rank() const {
  Mat m = *this;
  return m.rref().size();
}

Mat Mat::kernel() const {
  Mat m = *this;
  auto piv = m.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<size_t> free_cols;
  for (size_t c = 0; c < cols_; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Mat K(f_, free_cols.size(), cols_);
  for (size_t t = 0; t < free_cols.size(); ++t) {
    size_t fc = free_cols[t];
    K.at(t, fc) = 1;
    for (size_t i = 0; i < piv.size(); ++i)
      K.at(t, piv[i]) = f_->neg(m.at(i, fc));
  }
  return K;
}

Mat Mat::inverse() const {
  check(rows_ == cols_, "inverse of square matrix");
  Mat aug(f_, rows_, 2 * cols_);
  for (size_t i = 0; i < rows_; ++i) {
    for (size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_ + i) = 1;
  }
  auto piv = aug.rref();
  for (size_t i = 0; i < rows_; ++i)
    check(i < piv.size() && piv[i] == i, "matrix invertible");
  Mat r(f_, rows_, cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) r.at(i, j) = aug.at(i, cols_ + j);
  return r;
}

bool Mat::solve_left(const std::vector<uint64_t>& rhs,
                     std::vector<uint64_t>& sol) const {
  // x * this = rhs  <=>  this^T x^T = rhs^T
  Mat t = transpose();
  Mat aug(f_, t.rows(), t.cols() + 1);
  for (size_t i = 0; i < t.rows(); ++i) {
    for (size_t j = 0; j < t.cols(); ++j) aug.at(i, j) = t.at(i, j);
    aug.at(i, t.cols()) = rhs[i];
  }
  auto piv = aug.rref();
  sol.assign(rows_, 0);
  for (size_t i = 0; i < piv.size(); ++i) {
    if (piv[i] == t.cols()) return false;  // inconsistent
    sol[piv[i]] = aug.at(i, t.cols());
  }
  return true;
}

std::vector<uint64_t> Mat::charpoly() const {
  check(rows_ == cols_, "charpoly of square matrix");
  const size_t n = rows_;
  if (n == 0) return {1};
  // reduce to upper Hessenberg by similarity, then use the standard
  // leading-principal-minor recurrence
  Mat h = *this;
  for (size_t c = 0; c + 2 <= n; ++c) {
    size_t piv = n;
    for (size_t r = c + 1; r < n; ++r)
      if (h.at(r, c)) {
        piv = r;
        break;
      }
    if (piv == n) continue;
    if (piv != c + 1) {
      for (size_t j = 0; j < n; ++j) std::swap(h.at(c + 1, j), h.at(piv, j));
      for (size_t i = 0; i < n; ++i) std::swap(h.at(i, c + 1), h.at(i, piv));
    }
    uint64_t iv = f_->inv(h.at(c + 1, c));
    for (size_t r = c + 2; r < n; ++r) {
      uint64_t fac = f_->mul(h.at(r, c), iv);
      if (!fac) continue;
      for (size_t j = 0; j < n; ++j)
        h.at(r, j) = f_->sub(h.at(r, j), f_->mul(fac, h.at(c + 1, j)));
      for (size_t i = 0; i < n; ++i)
        h.at(i, c + 1) = f_->add(h.at(i, c + 1), f_->mul(fac, h.at(i, r)));
    }
  }
  // p_0 = 1; p_k(x) = (x - h[k-1][k-1]) p_{k-1}(x)
  //                  - sum_{i<k-1} h[i][k-1] (prod_{j=i+1..k-1} h[j][j-1]) p_i(x)
  std::vector<std::vector<uint64_t>> p(n + 1);
  p[0] = {1};
  for (size_t k = 1; k <= n; ++k) {
    std::vector<uint64_t> cur(k + 1, 0);
    // (x - h_{k-1,k-1}) * p_{k-1}
    for (size_t i = 0; i < p[k - 1].size(); ++i) {
      cur[i + 1] = f_->add(cur[i + 1], p[k - 1][i]);
      cur[i] = f_->sub(cur[i], f_->mul(h.at(k - 1, k - 1), p[k - 1][i]));
    }
    uint64_t beta = 1;
    for (size_t i = k - 1; i-- > 0;) {
      beta = f_->mul(beta, h.at(i + 1, i));
      if (!beta) break;
      uint64_t coef = f_->mul(h.at(i, k - 1), beta);
      if (!coef) continue;
      for (size_t j = 0; j < p[i].size(); ++j)
        cur[j] = f_->sub(cur[j], f_->mul(coef, p[i][j]));
    }
    p[k] = std::move(cur);
  }
  return p[n];
}

Mat Mat::pow(uint64_t e) const {
  check(rows_ == cols_, "pow of square matrix");
  Mat r = identity(f_, rows_), b = *this;
  while (e) {
    if (e & 1) r = r * b;
    b = b * b;
    e >>= 1;
  }
  return r;
}

std::vector<uint64_t> RowSpace::reduce(std::vector<uint64_t> v) const {
  for (size_t i = 0; i < rows_.size(); ++i) {
    uint64_t c = v[pivots_[i]];
    if (!c) continue;
    for (size_t j = pivots_[i]; j < width_; ++j)
      v[j] = f_->sub(v[j], f_->mul(c, rows_[i][j]));
  }
  return v;
}

bool RowSpace::contains(const std::vector<uint64_t>& v) const {
  auto r = reduce(v);
  for (auto x : r)
    if (x) return false;
  return true;
}

bool RowSpace::insert(std::vector<uint64_t> v) {
  check(v.size() == width_, "rowspace width");
  v = reduce(std::move(v));
  size_t lead = width_;
  for (size_t j = 0; j < width_; ++j)
    if (v[j]) {
      lead = j;
      break;
    }
  if (lead == width_) return false;
  uint64_t iv = f_->inv(v[lead]);
  for (size_t j = lead; j < width_; ++j) v[j] = f_->mul(v[j], iv);
  // back-substitute into existing rows
  for (size_t i = 0; i < rows_.size(); ++i) {
    uint64_t c = rows_[i][lead];
    if (!c) continue;
    for (size_t j = lead; j < width_; ++j)
      rows_[i][j] = f_->sub(rows_[i][j], f_->mul(c, v[j]));
  }
  size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] < lead) ++pos;
  rows_.insert(rows_.begin() + pos, std::move(v));
  pivots_.insert(pivots_.begin() + pos, lead);
  return true;
}

void RowSpace::insert_all(const Mat& m) {
  for (size_t i = 0; i < m.rows(); ++i) insert(m.row(i));
}

bool RowSpace::coords(const std::vector<uint64_t>& v,
                      std::vector<uint64_t>& out) const {
  out.assign(rows_.size(), 0);
  auto w = v;
  for (size_t i = 0; i < rows_.size(); ++i) {
    uint64_t c = w[pivots_[i]];
    out[i] = c;
    if (!c) continue;
    for (size_t j = pivots_[i]; j < width_; ++j)
      w[j] = f_->sub(w[j], f_->mul(c, rows_[i][j]));
  }
  for (auto x : w)
    if (x) return false;
  return true;
}

RowSpace RowSpace::intersect(const RowSpace& o) const {
  check(width_ == o.width_, "rowspace width");
  // Zassenhaus: rows [u|u] for u in this, [v|0] for v in o;
  // kernel-free version: echelonize [u|u; v|0], rows with zero left half
  // carry the intersection in the right half.
  size_t n1 = rows_.size(), n2 = o.rows_.size();
  Mat z(f_, n1 + n2, 2 * width_);
  for (size_t i = 0; i < n1; ++i)
    for (size_t j = 0; j < width_; ++j) {
      z.at(i, j) = rows_[i][j];
      z.at(i, width_ + j) = rows_[i][j];
    }
  for (size_t i = 0; i < n2; ++i)
    for (size_t j = 0; j < width_; ++j) z.at(n1 + i, j) = o.rows_[i][j];
  z.rref();
  RowSpace r(f_, width_);
  for (size_t i = 0; i < z.rows(); ++i) {
    bool left_zero = true;
    for (size_t j = 0; j < width_; ++j)
      if (z.at(i, j)) {
        left_zero = false;
        break;
      }
    if (!left_zero) continue;
    std::vector<uint64_t> v(width_);
    for (size_t j = 0; j < width_; ++j) v[j] = z.at(i, width_ + j);
    r.insert(std::move(v));
  }
  return r;
}

bool RowSpace::same(const RowSpace& o) const {
  if (dim() != o.dim()) return false;
  for (auto& r : rows_)
    if (!o.contains(r)) return false;
  return true;
}

Mat RowSpace::as_matrix() const {
  Mat m(f_, rows_.size(), width_);
  for (size_t i = 0; i < rows_.size(); ++i)
    for (size_t j = 0; j < width_; ++j) m.at(i, j) = rows_[i][j];
  return m;
}

}  // namespace zk
