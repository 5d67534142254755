#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

namespace khb {

/// Dense integer matrix. Entry (i, j) maps basis element j of the source to
/// basis element i of the target, so a matrix acts on column vectors.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static IntegerMatrix identity(std::size_t n);
  static IntegerMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_zero() const;
  std::size_t nonzeros() const;
  IntegerMatrix transpose() const;
  IntegerMatrix operator-() const;

  friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// Product a*b; skips zero entries of `a`. Throws on dimension mismatch or
/// int64 overflow.
IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);
IntegerMatrix operator+(const IntegerMatrix& a, const IntegerMatrix& b);

/// [[a, 0], [0, b]].
IntegerMatrix block_diagonal(const IntegerMatrix& a, const IntegerMatrix& b);

std::ostream& operator<<(std::ostream& os, const IntegerMatrix& m);

}  // namespace khb
