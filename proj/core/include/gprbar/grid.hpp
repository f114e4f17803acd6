#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace gprbar {

// Dense row-major grid of doubles. Rows are time samples, columns are traces.
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), v_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return v_.empty(); }
  std::size_t size() const { return v_.size(); }

  double& at(int r, int c) {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return v_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double at(int r, int c) const {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return v_[static_cast<std::size_t>(r) * cols_ + c];
  }

  std::vector<double>& data() { return v_; }
  const std::vector<double>& data() const { return v_; }

  bool operator==(const Grid& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && v_ == o.v_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> v_;
};

}  // namespace gprbar
