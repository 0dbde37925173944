#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "horizon/error.hpp"

namespace horizon {

// Square n x n grid of pixel values. Pixel (i, j) is column i, row j and
// covers [i/n, (i+1)/n) x [j/n, (j+1)/n) of the unit square. Storage is
// row-major in j: element (i, j) lives at data[j * n + i].
class ImageGrid {
 public:
  ImageGrid() = default;
  explicit ImageGrid(int n, double fill = 0.0);
  ImageGrid(int n, std::vector<double> data);

  int n() const { return n_; }
  std::size_t size() const { return data_.size(); }

  double operator()(int i, int j) const { return data_[index(i, j)]; }
  double& operator()(int i, int j) { return data_[index(i, j)]; }

  // Bounds-checked access; throws IndexOutOfBounds.
  double at(int i, int j) const;

  // Periodic access: indices are reduced modulo n.
  double wrapped(int i, int j) const { return data_[index(wrap(i), wrap(j))]; }
  int wrap(int k) const {
    const int r = k % n_;
    return r < 0 ? r + n_ : r;
  }

  std::span<const double> values() const { return data_; }
  std::span<double> values() { return data_; }
  std::span<const double> row(int j) const {
    return std::span<const double>(data_).subspan(static_cast<std::size_t>(j) * n_, n_);
  }

  double mean() const;
  double min() const;
  double max() const;

  friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
  }

  int n_ = 0;
  std::vector<double> data_;
};

// (1/n^2) * sum of squared differences.
double mean_squared_error(const ImageGrid& a, const ImageGrid& b);

}  // namespace horizon
