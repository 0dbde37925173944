#include "horizon/report.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace horizon {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& row : rows) {
    const auto& e = row.estimate;
    os << e.n << ',' << e.denoiser << ',' << format_double(e.sigma) << ',' << e.trials << ','
       << format_double(e.mean_risk) << ',' << format_double(e.standard_error) << ',' << format_double(e.bias_sq)
       << ',' << format_double(e.variance) << ',' << format_double(row.slope_ref) << '\n';
  }
}

namespace {

double parse_double(const std::string& field, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size()) {
    throw InvalidArgument("csv line " + std::to_string(line) + ": not a number: '" + field + "'");
  }
  return v;
}

int parse_int(const std::string& field, int line) {
  const double v = parse_double(field, line);
  if (v != static_cast<int>(v)) {
    throw InvalidArgument("csv line " + std::to_string(line) + ": not an integer: '" + field + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

std::vector<SweepRow> read_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw InvalidArgument("csv: empty input");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header != kCsvHeader) throw InvalidArgument("csv: unexpected header '" + header + "'");
  std::vector<SweepRow> rows;
  std::string line;
  int number = 1;
  while (std::getline(is, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 9) {
      throw InvalidArgument("csv line " + std::to_string(number) + ": expected 9 fields, got " +
                            std::to_string(f.size()));
    }
    SweepRow row;
    auto& e = row.estimate;
    e.n = parse_int(f[0], number);
    e.denoiser = f[1];
    e.sigma = parse_double(f[2], number);
    e.trials = parse_int(f[3], number);
    e.mean_risk = parse_double(f[4], number);
    e.standard_error = parse_double(f[5], number);
    e.bias_sq = parse_double(f[6], number);
    e.variance = parse_double(f[7], number);
    row.slope_ref = parse_double(f[8], number);
    rows.push_back(row);
  }
  return rows;
}

void write_matrix_csv(std::ostream& os, const ImageGrid& image) {
  for (int j = 0; j < image.n(); ++j) {
    for (int i = 0; i < image.n(); ++i) os << (i ? "," : "") << format_double(image(i, j));
    os << '\n';
  }
}

void write_gnuplot(std::ostream& os, const std::string& csv_path, const std::vector<SweepRow>& rows,
                   const std::string& image_path) {
  // First row of each denoiser anchors its guide line.
  std::map<std::string, const SweepRow*> first;
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (first.emplace(r.estimate.denoiser, &r).second) order.push_back(r.estimate.denoiser);
  }
  os << "set terminal pngcairo size 900,650\n"
     << "set output '" << image_path << "'\n"
     << "set datafile separator ','\n"
     << "set logscale xy\n"
     << "set xlabel 'n'\n"
     << "set ylabel 'mean squared risk'\n"
     << "set key outside right\n"
     << "set grid\n";
  os << "plot ";
  bool comma = false;
  int k = 0;
  for (const auto& name : order) {
    const SweepRow& a = *first[name];
    const std::string n0 = format_double(a.estimate.n), r0 = format_double(a.estimate.mean_risk);
    if (comma) os << ", \\\n     ";
    comma = true;
    ++k;
    os << "'" << csv_path << "' using 1:(strcol(2) eq '" << name << "' ? $5 : 1/0):6 with yerrorlines lt " << k
       << " title '" << name << "'";
    os << ", \\\n     " << r0 << "*(x/" << n0 << ")**(" << format_double(a.slope_ref) << ") with lines dt 2 lt "
       << k << " title '" << name << " slope " << format_double(a.slope_ref) << "'";
  }
  if (!order.empty()) {
    const SweepRow& a = *first[order.front()];
    os << ", \\\n     " << format_double(a.estimate.mean_risk) << "*(x/" << format_double(a.estimate.n) << ")**("
       << format_double(kMinimaxSlope) << ") with lines dt 3 lc 'black' title 'minimax -4/3'";
  }
  os << '\n';
}

}  // namespace horizon
