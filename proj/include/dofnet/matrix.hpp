#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dofnet {

// Dense row-major matrix of doubles. Rows are observations.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const double* row(std::size_t r) const { return data_.data() + r * cols_; }
  double* row(std::size_t r) { return data_.data() + r * cols_; }

  const std::vector<double>& data() const { return data_; }

  // Row subset, preserving column order.
  Matrix take_rows(const std::vector<std::size_t>& idx) const {
    Matrix out(idx.size(), cols_);
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(idx[r], c);
    return out;
  }

  // Column subset, preserving row order.
  Matrix take_cols(const std::vector<std::size_t>& idx) const {
    Matrix out(rows_, idx.size());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) out(r, c) = (*this)(r, idx[c]);
    return out;
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Covariate matrix plus binary response.
struct Dataset {
  Matrix X;
  std::vector<double> y;  // entries exactly 0 or 1

  std::size_t n() const { return y.size(); }
  std::size_t p() const { return X.cols(); }

  std::size_t n1() const {
    std::size_t c = 0;
    for (double v : y) c += (v == 1.0);
    return c;
  }
  std::size_t n0() const { return n() - n1(); }

  void validate() const {
    if (X.rows() != y.size()) throw std::invalid_argument("Dataset: X rows != y length");
    if (!X.all_finite()) throw std::invalid_argument("Dataset: X has non-finite entries");
    for (double v : y)
      if (v != 0.0 && v != 1.0) throw std::invalid_argument("Dataset: y entries must be 0 or 1");
  }
};

}  // namespace dofnet
