#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "capsdp/rational.hpp"
#include "capsdp/relax.hpp"

namespace capsdp {

inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitCertification = 4;

/// cos of an angle given as "pi/3", "2pi/3", "2*pi/3", "pi", "0", or a
/// decimal in radians. Exact for multiples of pi whose cosine is rational.
struct ParsedAngle {
  Rational cos;
  bool exact = false;
  std::string text;
};

ParsedAngle parse_angle(const std::string& text);

/// "pi/3" for cosines of the special angles, otherwise "acos(c)".
std::string angle_name(const Rational& cos);

struct RunConfig {
  std::string command;  // bound, analytic, verify, codes, export
  int n = 3;
  std::string theta = "pi/3";
  std::string phi = "pi/2";
  std::optional<std::string> cos_theta;  // exact cosine, overrides theta
  std::optional<std::string> cos_phi;
  int d = 4;
  int N = 4;
  double tolerance = 1e-8;
  int max_iterations = 100;
  std::string backend = "ipm";
  bool symmetry = false;
  std::string basis = "monomial";
  std::string gram_rule = "match-zonal";
  std::string output;
  std::string format = "table";  // json, table, sdpa
  bool summary = false;
  bool timestamp = true;
  bool verbose = false;
  int example = 2;
  std::string suite = "all";
  std::uint64_t seed = 1;
  std::string family = "e8";
  std::string cap = "pi/2";
};

/// Parses argv into a RunConfig. Returns an exit code when the process should
/// stop (help printed or a parse error), nullopt otherwise.
std::optional<int> parse_command_line(int argc, const char* const* argv, RunConfig& config,
                                      std::ostream& out, std::ostream& err);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace capsdp
