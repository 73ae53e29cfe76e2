#pragma once

#include <cstdint>
#include <vector>

#include "zk/field.hpp"

namespace zk {

// Dense matrix over a finite field; entries are field encodings.
class Mat {
 public:
  Mat() = default;
  Mat(FieldRef f, size_t rows, size_t cols)
      : f_(std::move(f)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}
  static Mat identity(FieldRef f, size_t n);

  const FieldRef& field() const { return f_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  uint64_t& at(size_t r, size_t c) { return a_[r * cols_ + c]; }
  uint64_t at(size_t r, size_t c) const { return a_[r * cols_ + c]; }
  const std::vector<uint64_t>& data() const { return a_; }
  std::vector<uint64_t>& data() { return a_; }

  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat operator*(const Mat& o) const;
  Mat scaled(uint64_t c) const;
  Mat transpose() const;
  bool is_zero() const;
  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  std::vector<uint64_t> row(size_t r) const {
    return {a_.begin() + r * cols_, a_.begin() + (r + 1) * cols_};
  }
  std::vector<uint64_t> apply(const std::vector<uint64_t>& v) const;  // M v

  // in-place reduced row echelon form; returns pivot column list
  std::vector<size_t> rref();
  size_t rank() const;
  // basis of the right null space, as rows of the returned matrix
  Mat kernel() const;
  Mat inverse() const;  // throws on singular
  // solve x * this = rhs_row (row vector); empty result if unsolvable
  bool solve_left(const std::vector<uint64_t>& rhs, std::vector<uint64_t>& sol) const;
  // characteristic polynomial of a square matrix, monic, low-degree-first
  std::vector<uint64_t> charpoly() const;
  Mat pow(uint64_t e) const;

 private:
  FieldRef f_;
  size_t rows_ = 0, cols_ = 0;
  std::vector<uint64_t> a_;
};

// Row space in reduced echelon form over a field — the workhorse for
// span/membership/dimension bookkeeping.  Rows are kept fully reduced.
class RowSpace {
 public:
  RowSpace() = default;
  RowSpace(FieldRef f, size_t width) : f_(std::move(f)), width_(width) {}

  size_t dim() const { return rows_.size(); }
  size_t width() const { return width_; }
  const FieldRef& field() const { return f_; }
  const std::vector<std::vector<uint64_t>>& rows() const { return rows_; }

  // reduce v against the space; returns the residue
  std::vector<uint64_t> reduce(std::vector<uint64_t> v) const;
  bool contains(const std::vector<uint64_t>& v) const;
  // insert v; returns true if the dimension grew
  bool insert(std::vector<uint64_t> v);
  void insert_all(const Mat& m);

  // coordinates of v in terms of the ORIGINAL inserted generators are not
  // tracked; coords are w.r.t. the reduced rows
  bool coords(const std::vector<uint64_t>& v, std::vector<uint64_t>& out) const;

  RowSpace intersect(const RowSpace& o) const;
  bool same(const RowSpace& o) const;
  Mat as_matrix() const;

 private:
  FieldRef f_;
  size_t width_ = 0;
  std::vector<std::vector<uint64_t>> rows_;  // reduced, sorted by pivot
  std::vector<size_t> pivots_;
};

}  // namespace zk
