#include "horizon/image.hpp"

#include <algorithm>
#include <string>

namespace horizon {

ImageGrid::ImageGrid(int n, double fill) : n_(n) {
  if (n < 1) throw InvalidArgument("ImageGrid: n must be positive");
  data_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill);
}

ImageGrid::ImageGrid(int n, std::vector<double> data) : n_(n), data_(std::move(data)) {
  if (n < 1) throw InvalidArgument("ImageGrid: n must be positive");
  if (data_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw InvalidArgument("ImageGrid: data size does not match n*n");
  }
}

double ImageGrid::at(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw IndexOutOfBounds("pixel (" + std::to_string(i) + ", " + std::to_string(j) +
                           ") outside " + std::to_string(n_) + "x" + std::to_string(n_) + " grid");
  }
  return (*this)(i, j);
}

double ImageGrid::mean() const {
  double s = 0.0;
  for (double v : data_) s += v;
  return s / static_cast<double>(data_.size());
}

double ImageGrid::min() const { return *std::min_element(data_.begin(), data_.end()); }
double ImageGrid::max() const { return *std::max_element(data_.begin(), data_.end()); }

double mean_squared_error(const ImageGrid& a, const ImageGrid& b) {
  if (a.n() != b.n()) throw InvalidArgument("mean_squared_error: size mismatch");
  const auto va = a.values();
  const auto vb = b.values();
  double s = 0.0;
  for (std::size_t k = 0; k < va.size(); ++k) {
    const double d = va[k] - vb[k];
    s += d * d;
  }
  return s / static_cast<double>(va.size());
}

}  // namespace horizon
