#include "horizon/horizon_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace horizon {

namespace {

constexpr int kCheckSamples = 4097;
constexpr int kPairSamples = 513;
constexpr int kRootScanPoints = 8;

double falling_factorial(int m, int k) {
  double r = 1.0;
  for (int q = 0; q < k; ++q) r *= static_cast<double>(m - q);
  return r;
}

}  // namespace

std::string to_string(ContourKind kind) {
  switch (kind) {
    case ContourKind::constant: return "const";
    case ContourKind::polynomial: return "poly";
    case ContourKind::sinusoid: return "sin";
  }
  return "unknown";
}

EdgeContour::EdgeContour(ContourKind kind, std::vector<double> params, double declared_alpha,
                         double declared_c)
    : kind_(kind), params_(std::move(params)), alpha_(declared_alpha), c_(declared_c) {
  for (double p : params_) {
    if (!std::isfinite(p)) throw InvalidArgument("contour parameters must be finite");
  }
  switch (kind_) {
    case ContourKind::constant:
      if (params_.size() != 1) throw InvalidArgument("constant contour takes one parameter");
      break;
    case ContourKind::polynomial:
      if (params_.empty()) throw InvalidArgument("polynomial contour needs coefficients");
      break;
    case ContourKind::sinusoid:
      if (params_.size() == 3) params_.push_back(0.0);
      if (params_.size() != 4) {
        throw InvalidArgument("sinusoid contour takes amplitude, freq, offset[, phase]");
      }
      break;
  }
}

double EdgeContour::derivative(double t, int k) const {
  switch (kind_) {
    case ContourKind::constant:
      return k == 0 ? params_[0] : 0.0;
    case ContourKind::polynomial: {
      // Horner on the k-th derivative coefficients.
      double acc = 0.0;
      for (int m = static_cast<int>(params_.size()) - 1; m >= k; --m) {
        acc = acc * t + params_[m] * falling_factorial(m, k);
      }
      return acc;
    }
    case ContourKind::sinusoid: {
      const double amp = params_[0];
      const double w = 2.0 * std::numbers::pi * params_[1];
      const double phase = params_[3];
      const double base = k == 0 ? params_[2] : 0.0;
      return base + amp * std::pow(w, k) * std::sin(w * t + phase + k * std::numbers::pi / 2.0);
    }
  }
  return 0.0;
}

bool EdgeContour::is_half_plane() const {
  return kind_ == ContourKind::constant && params_[0] == 0.5;
}

std::string EdgeContour::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << ':';
  const std::size_t count = kind_ == ContourKind::sinusoid && params_[3] == 0.0 ? 3 : params_.size();
  for (std::size_t k = 0; k < count; ++k) {
    if (k) os << ',';
    os << params_[k];
  }
  return os.str();
}

ContourCheck check_contour(const EdgeContour& h) {
  ContourCheck out{1e300, -1e300, 0.0, 0.0};
  const double dt = 1.0 / (kCheckSamples - 1);
  double prev = h(0.0);
  for (int s = 0; s < kCheckSamples; ++s) {
    const double v = h(s * dt);
    out.min_value = std::min(out.min_value, v);
    out.max_value = std::max(out.max_value, v);
    // Adjacent quotients bound the quotient of every sampled pair.
    if (s > 0) out.lipschitz = std::max(out.lipschitz, std::abs(v - prev) / dt);
    prev = v;
  }

  const int k = static_cast<int>(std::floor(h.declared_alpha()));
  const double expo = h.declared_alpha() - k;
  if (expo < 1e-12) {
    double lo = 1e300, hi = -1e300;
    for (int s = 0; s < kCheckSamples; ++s) {
      const double v = h.derivative(s * dt, k);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.hoelder_seminorm = hi - lo;
  } else {
    std::array<double, kPairSamples> d{};
    const double pdt = 1.0 / (kPairSamples - 1);
    for (int s = 0; s < kPairSamples; ++s) d[s] = h.derivative(s * pdt, k);
    for (int a = 0; a < kPairSamples; ++a) {
      for (int b = a + 1; b < kPairSamples; ++b) {
        const double q = std::abs(d[b] - d[a]) / std::pow((b - a) * pdt, expo);
        out.hoelder_seminorm = std::max(out.hoelder_seminorm, q);
      }
    }
  }
  return out;
}

EdgeContour make_contour(ContourKind kind, std::vector<double> params, double alpha, double c) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw InvalidArgument("alpha must be >= 1");
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("C must be > 0");
  EdgeContour h(kind, std::move(params), alpha, c);
  const ContourCheck chk = check_contour(h);
  constexpr double tol = 1e-12;
  if (chk.min_value < kContourMargin - tol || chk.max_value > 1.0 - kContourMargin + tol) {
    std::ostringstream os;
    os << "contour " << h.describe() << " leaves [" << kContourMargin << ", "
       << 1.0 - kContourMargin << "]: range [" << chk.min_value << ", " << chk.max_value << "]";
    throw ContourOutOfRange(os.str());
  }
  if (chk.lipschitz > 1.0 + 1e-9) {
    std::ostringstream os;
    os << "contour " << h.describe() << " has Lipschitz ratio " << chk.lipschitz << " > 1";
    throw HoelderViolation(os.str());
  }
  if (chk.hoelder_seminorm > c * (1.0 + 1e-9)) {
    std::ostringstream os;
    os << "contour " << h.describe() << " has Hoelder-" << alpha << " seminorm "
       << chk.hoelder_seminorm << " > C = " << c;
    throw HoelderViolation(os.str());
  }
  return h;
}

EdgeContour parse_contour(const std::string& spec, double alpha, double c) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidArgument("contour spec needs kind:params: " + spec);
  const std::string kind = spec.substr(0, colon);
  std::vector<double> params;
  std::stringstream ss(spec.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      params.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("bad contour parameter '" + item + "' in " + spec);
    }
  }
  ContourKind k;
  if (kind == "const" || kind == "constant") {
    k = ContourKind::constant;
  } else if (kind == "poly" || kind == "polynomial") {
    k = ContourKind::polynomial;
  } else if (kind == "sin" || kind == "sinusoid") {
    k = ContourKind::sinusoid;
  } else {
    throw InvalidArgument("unknown contour kind '" + kind + "'");
  }
  return make_contour(k, std::move(params), alpha, c);
}

namespace quadrature {

Rule gauss_legendre(int points) {
  Rule r;
  r.nodes.resize(points);
  r.weights.resize(points);
  for (int k = 0; k < points; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= points; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[k] = x;
    r.weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const Rule& gauss_legendre16() {
  static const Rule rule = gauss_legendre(16);
  return rule;
}

}  // namespace quadrature

namespace {

// Local coordinate s in [0,1] across the column: t = (i + s) / n.
struct ColumnSlice {
  const EdgeContour& h;
  int n;
  int i;
  int j;

  // n*h(t) - j, the edge height measured in pixel units from the row floor.
  double height(double s) const { return n * h((i + s) / n) - j; }
  double clamped(double s) const { return std::clamp(height(s), 0.0, 1.0); }
};

double bisect(const ColumnSlice& col, double level, double a, double b) {
  double fa = col.height(a) - level;
  for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = col.height(m) - level;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double pixel_average(const EdgeContour& h, int n, int i, int j, int panels) {
  if (n < 1) throw InvalidArgument("pixel_average: n must be positive");
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw IndexOutOfBounds("pixel_average: pixel (" + std::to_string(i) + ", " +
                           std::to_string(j) + ") outside grid of size " + std::to_string(n));
  }
  if (panels < 1) throw InvalidArgument("pixel_average: panels must be >= 1");
  const ColumnSlice col{h, n, i, j};
  const auto& rule = quadrature::gauss_legendre16();

  std::vector<double> breaks;
  breaks.reserve(8);
  for (int p = 0; p <= panels; ++p) breaks.push_back(static_cast<double>(p) / panels);
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels;
    const double b = static_cast<double>(p + 1) / panels;
    for (double level : {0.0, 1.0}) {
      double s0 = a;
      double f0 = col.height(s0) - level;
      for (int q = 1; q <= kRootScanPoints; ++q) {
        const double s1 = a + (b - a) * q / kRootScanPoints;
        const double f1 = col.height(s1) - level;
        if ((f0 > 0.0) != (f1 > 0.0)) breaks.push_back(bisect(col, level, s0, s1));
        s0 = s1;
        f0 = f1;
      }
    }
  }
  std::sort(breaks.begin(), breaks.end());

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k];
    const double b = breaks[k + 1];
    if (b <= a) continue;
    const double mid = col.clamped(0.5 * (a + b));
    if (mid == 0.0) continue;
    if (mid == 1.0) {
      total += b - a;
      continue;
    }
    const double half = 0.5 * (b - a);
    const double centre = 0.5 * (a + b);
    double piece = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      piece += rule.weights[q] * col.clamped(centre + half * rule.nodes[q]);
    }
    total += half * piece;
  }
  return std::clamp(total, 0.0, 1.0);
}

ImageGrid render(const EdgeContour& h, int n) {
  if (n < 2) throw InvalidArgument("render: n must be >= 2");
  ImageGrid img(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) img(i, j) = pixel_average(h, n, i, j);
  }
  return img;
}

std::vector<EdgeRow> edge_rows(const ImageGrid& clean) {
  const int n = clean.n();
  std::vector<EdgeRow> rows(n);
  for (int i = 0; i < n; ++i) {
    int below = -1;
    for (int j = 0; j < n; ++j) {
      if (clean(i, j) >= 0.5) below = j;
    }
    rows[i] = {below, below + 1};
  }
  return rows;
}

std::vector<EdgeRow> edge_rows(const EdgeContour& h, int n) { return edge_rows(render(h, n)); }

}  // namespace horizon
