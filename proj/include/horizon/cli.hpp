#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace horizon {

enum class Command { render, denoise, sweep, fit, diagnose, selftest };
std::string to_string(Command command);

struct RunConfig {
  Command command = Command::selftest;
  std::string contour = "const:0.5";
  double alpha = 1.0;     // declared Hoelder exponent of the contour
  double holder_c = 1.0;  // declared Hoelder constant
  std::vector<std::string> denoisers{"box"};
  std::vector<int> n_list{64};
  double sigma = 0.5;
  int trials = 50;
  double epsilon = 0.1;
  std::uint64_t master_seed = 0;
  std::string output_path;
  std::string input_path;
  bool emit_plot = false;
  bool weighted = false;
  std::optional<int> window;
  // denoise / diagnose overrides
  int halfwidth = 1;
  std::optional<int> delta;
  std::optional<double> t;
  std::string oracle = "semi";
  bool allow_large_nlm = false;
};

// Parses argv into a config. Returns std::nullopt after printing help;
// throws InvalidArgument for unusable flags.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

// Checks every numeric field against the preconditions of the modules the
// command will call. Throws InvalidArgument.
void validate(const RunConfig& config);

// Runs the command. Exit status 0 ok, 1 config error, 2 computation error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run with the same exit-status convention.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace horizon
