#pragma once

#include <string>
#include <vector>

#include "horizon/image.hpp"

namespace horizon {

enum class ContourKind { constant, polynomial, sinusoid };

std::string to_string(ContourKind kind);

// Edge contour h : [0,1] -> [0,1] of a Horizon image f(t1, t2) = 1{t2 < h(t1)}.
//
// Parameter layout per kind:
//   constant   {c}
//   polynomial {c0, c1, c2, ...}          h(t) = sum_k c_k t^k
//   sinusoid   {amplitude, freq, offset}  h(t) = offset + amplitude * sin(2 pi freq t + phase)
//              with an optional fourth entry for the phase (radians).
//
// The constructor only checks the parameter shape. Use make_contour() to get a
// contour that has also passed the range and smoothness checks.
class EdgeContour {
 public:
  EdgeContour(ContourKind kind, std::vector<double> params, double declared_alpha = 1.0,
              double declared_c = 1.0);

  static EdgeContour constant(double c) { return {ContourKind::constant, {c}}; }
  static EdgeContour polynomial(std::vector<double> coeffs) {
    return {ContourKind::polynomial, std::move(coeffs)};
  }
  static EdgeContour sinusoid(double amplitude, double freq, double offset, double phase = 0.0) {
    return {ContourKind::sinusoid, {amplitude, freq, offset, phase}};
  }

  ContourKind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  double declared_alpha() const { return alpha_; }
  double declared_c() const { return c_; }

  double operator()(double t) const { return derivative(t, 0); }
  // k-th derivative, evaluated analytically.
  double derivative(double t, int k) const;

  // True when h is the constant 1/2 (the half-plane image).
  bool is_half_plane() const;

  std::string describe() const;

 private:
  ContourKind kind_;
  std::vector<double> params_;
  double alpha_;
  double c_;
};

inline constexpr double kContourMargin = 0.1;

// Sampled checks behind make_contour(); exposed for diagnostics.
struct ContourCheck {
  double min_value;
  double max_value;
  double lipschitz;         // max difference quotient on the sampling grid
  double hoelder_seminorm;  // sampled seminorm of h^(floor(alpha))
};
ContourCheck check_contour(const EdgeContour& h);

// Validating factory. Throws ContourOutOfRange if h leaves
// [margin, 1 - margin], HoelderViolation if the sampled Lipschitz ratio
// exceeds 1 or the sampled Hoelder-alpha seminorm exceeds C.
EdgeContour make_contour(ContourKind kind, std::vector<double> params, double alpha, double c);

// Parses "const:0.5", "poly:0.4,0.2", "sin:0.05,1,0.5[,phase]".
EdgeContour parse_contour(const std::string& spec, double alpha, double c);

// Average of 1{t2 < h(t1)} over Pixel(i, j). The column slice is split at
// every point where h crosses j/n or (j+1)/n and each piece is integrated
// with 16-point Gauss-Legendre. `panels` subdivides the column first.
double pixel_average(const EdgeContour& h, int n, int i, int j, int panels = 1);

// Noise-free n x n Horizon image.
ImageGrid render(const EdgeContour& h, int n);

struct EdgeRow {
  int below;  // last row with noise-free value >= 0.5
  int above;  // below + 1, first row with value < 0.5
};
// One entry per column.
std::vector<EdgeRow> edge_rows(const EdgeContour& h, int n);
std::vector<EdgeRow> edge_rows(const ImageGrid& clean);

namespace quadrature {
// Nodes and weights of n-point Gauss-Legendre on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const Rule& gauss_legendre16();
Rule gauss_legendre(int points);
}  // namespace quadrature

}  // namespace horizon
