#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "horizon/image.hpp"
#include "horizon/risk_lab.hpp"

namespace horizon {

struct SweepRow {
  RiskEstimate estimate;
  double slope_ref = 0.0;
};

inline constexpr const char* kCsvHeader = "n,denoiser,sigma,trials,mean_risk,stderr,bias_sq,variance,slope_ref";

// %.17g, so every double parses back to the same value.
std::string format_double(double v);

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
// Throws InvalidArgument on a bad header or malformed line.
std::vector<SweepRow> read_csv(std::istream& is);

// Grid values as n lines of n comma-separated numbers, row j = 0 first.
void write_matrix_csv(std::ostream& os, const ImageGrid& image);

// Gnuplot script drawing mean_risk against n on log-log axes, one curve per
// denoiser, with slope guide lines anchored at each curve's first point and
// the minimax reference slope.
void write_gnuplot(std::ostream& os, const std::string& csv_path, const std::vector<SweepRow>& rows,
                   const std::string& image_path);

}  // namespace horizon
