#pragma once

// Command-line front end: zeros | eval | kernel | integral | verify | scan.

#include <optional>
#include <string>
#include <vector>

#include "tate/numerics.hpp"

namespace tate::cli {

enum ExitCode : int { kOk = 0, kClaimFailed = 1, kUsage = 2, kNumeric = 3 };

struct RunConfig {
  std::string subcommand;
  std::string stream = "zeta";
  std::optional<cplx> s;
  int zero_index = 1;
  std::optional<double> gamma;
  double T = 2000.0;
  double X = 5000.0;
  double eps = 0.01;
  double tol = 1e-9;
  int n_zeros = 10;
  std::string range = "0:50";
  std::string format = "json";
  std::string output;
  std::string claim;
  bool all = false;
  std::optional<double> line_re;
  std::optional<int> q;
  std::optional<cplx> w;
  std::optional<double> xi;
  std::string kind;    // kernel: tate | inverse_different | variance_sqrt | variance_unit
                       // integral: line | line_half | variance | norm | mellin | fourier
  std::string weight = "dx";

  /// key=value lines; unset optionals are omitted.
  [[nodiscard]] std::string serialize() const;
  /// Applies key=value lines on top of the current values. Blank lines and
  /// lines starting with '#' are skipped; unknown keys raise DomainError.
  void apply(const std::string& text);

  bool operator==(const RunConfig&) const = default;
};

int run(const std::vector<std::string>& args);

}  // namespace tate::cli
