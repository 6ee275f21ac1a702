#include "skilldiag/adam.hpp"

#include <cmath>

#include "skilldiag/error.hpp"

namespace skilldiag {

void Adam::step(ParameterMap& params) {
  for (auto& [name, tensor] : params) {
    if (!tensor.has_grad()) {
      throw ContractError(
          msg("adam_step: missing gradient for parameter '", name, "'"));
    }
  }
  ++step_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_));
  for (auto& [name, tensor] : params) {
    auto& slot = moments_[name];
    auto& values = tensor.mutable_values();
    const auto& grad = tensor.grad();
    if (slot.m.size() != values.size()) {
      slot.m.assign(values.size(), 0.0);
      slot.v.assign(values.size(), 0.0);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double g = grad[i];
      slot.m[i] = config_.beta1 * slot.m[i] + (1.0 - config_.beta1) * g;
      slot.v[i] = config_.beta2 * slot.v[i] + (1.0 - config_.beta2) * g * g;
      const double m_hat = slot.m[i] / bc1;
      const double v_hat = slot.v[i] / bc2;
      values[i] -=
          config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
    tensor.zero_grad();
  }
}

}  // namespace skilldiag
