#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "skilldiag/adam.hpp"
#include "skilldiag/tensor.hpp"

namespace skilldiag {

struct GradCheckOptions {
  double step = 1e-5;
  /// 0 checks every element; otherwise at most this many per parameter,
  /// evenly strided.
  std::size_t max_elements_per_param = 0;
  /// Test-only negative control: adds `corrupt_delta` to the first analytic
  /// gradient entry of the named parameter before comparing.
  std::string corrupt_param;
  double corrupt_delta = 1e-2;
};

struct GradCheckEntry {
  std::string name;
  std::size_t checked = 0;
  double max_rel_err = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_err = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Compares analytic gradients against central finite differences.
///
/// `forward` must rebuild the loss from current parameter values and be
/// deterministic for fixed inputs (reseed any internal noise per call). The
/// relative error per element is |a-n| / max(|a|, |n|, 1e-5); the floor
/// keeps finite-difference roundoff on near-zero gradients from drowning
/// the comparison while still flagging any wrong backward rule.
GradCheckReport finite_diff_check(ParameterMap& params,
                                  const std::function<Tensor()>& forward,
                                  double tolerance,
                                  const GradCheckOptions& options = {});

void print_report(const GradCheckReport& report, std::ostream& os);

}  // namespace skilldiag
