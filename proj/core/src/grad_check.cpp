#include "skilldiag/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "skilldiag/error.hpp"

namespace skilldiag {

namespace {

double relative_error(double analytic, double numeric) {
  const double denom =
      std::max({std::fabs(analytic), std::fabs(numeric), 1e-5});
  return std::fabs(analytic - numeric) / denom;
}

}  // namespace

GradCheckReport finite_diff_check(ParameterMap& params,
                                  const std::function<Tensor()>& forward,
                                  double tolerance,
                                  const GradCheckOptions& options) {
  GradCheckReport report;
  report.tolerance = tolerance;

  for (auto& [name, tensor] : params) tensor.zero_grad();
  Tensor loss = forward();
  if (!std::isfinite(loss.item())) {
    throw ContractError(
        msg("finite_diff_check: non-finite loss ", loss.item()));
  }
  loss.backward();

  // Snapshot analytic gradients before perturbing anything.
  std::vector<std::vector<double>> analytic;
  analytic.reserve(params.size());
  for (auto& [name, tensor] : params) {
    if (!tensor.has_grad()) {
      throw ContractError(msg(
          "finite_diff_check: parameter '", name,
          "' received no gradient; it is not reachable from the loss"));
    }
    analytic.push_back(tensor.grad());
  }

  if (!options.corrupt_param.empty()) {
    bool found = false;
    for (std::size_t p = 0; p < params.size(); ++p) {
      if (params[p].first == options.corrupt_param) {
        analytic[p][0] += options.corrupt_delta;
        found = true;
      }
    }
    if (!found) {
      throw ContractError(msg("finite_diff_check: unknown corrupt parameter '",
                              options.corrupt_param, "'"));
    }
  }

  const double h = options.step;
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto& [name, tensor] = params[p];
    GradCheckEntry entry;
    entry.name = name;
    auto& values = tensor.mutable_values();
    const std::size_t n = values.size();
    std::size_t stride = 1;
    if (options.max_elements_per_param > 0 &&
        n > options.max_elements_per_param) {
      stride = (n + options.max_elements_per_param - 1) /
               options.max_elements_per_param;
    }
    for (std::size_t i = 0; i < n; i += stride) {
      const double original = values[i];
      values[i] = original + h;
      double f_plus;
      {
        NoGradGuard no_grad;
        f_plus = forward().item();
      }
      values[i] = original - h;
      double f_minus;
      {
        NoGradGuard no_grad;
        f_minus = forward().item();
      }
      values[i] = original;
      const double numeric = (f_plus - f_minus) / (2.0 * h);
      const double rel = relative_error(analytic[p][i], numeric);
      entry.max_rel_err = std::max(entry.max_rel_err, rel);
      ++entry.checked;
    }
    report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
    report.entries.push_back(std::move(entry));
  }
  report.pass = report.max_rel_err <= tolerance;

  for (auto& [name, tensor] : params) tensor.zero_grad();
  return report;
}

void print_report(const GradCheckReport& report, std::ostream& os) {
  for (const auto& entry : report.entries) {
    os << "  " << entry.name << ": max_rel_err=" << entry.max_rel_err
       << " (checked " << entry.checked << " elements)\n";
  }
  os << (report.pass ? "PASS" : "FAIL")
     << " max_rel_err=" << report.max_rel_err
     << " tolerance=" << report.tolerance << "\n";
}

}  // namespace skilldiag
