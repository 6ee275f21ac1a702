#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "skilldiag/tensor.hpp"

namespace skilldiag {

/// Named trainable tensors in a fixed, deterministic order.
using ParameterMap = std::vector<std::pair<std::string, Tensor>>;

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias-corrected moments. Moment buffers are keyed by parameter
/// name and sized on first use; step() requires a populated gradient for
/// every parameter and zeroes gradients after the update.
class Adam {
 public:
  explicit Adam(AdamConfig config) : config_(config) {}

  void step(ParameterMap& params);

  std::int64_t step_count() const { return step_; }
  const AdamConfig& config() const { return config_; }

 private:
  struct Moments {
    std::vector<double> m;
    std::vector<double> v;
  };

  AdamConfig config_;
  std::map<std::string, Moments> moments_;
  std::int64_t step_ = 0;
};

}  // namespace skilldiag
