#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "skilldiag/rng.hpp"

namespace skilldiag {

using Shape = std::vector<std::size_t>;

std::string shape_str(const Shape& shape);

namespace detail {

struct Node {
  Shape shape;
  std::vector<double> values;
  std::vector<double> grad;  // empty until first accumulation
  bool requires_grad = false;
  const char* op = "leaf";
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void()> backprop;  // pushes this->grad into parents

  std::size_t size() const { return values.size(); }
  std::vector<double>& grad_buffer();  // allocates zero-filled on demand
};

}  // namespace detail

/// Dense row-major tensor of doubles, rank 1 or 2, participating in a
/// dynamically built compute graph. Copies share the underlying node.
///
/// Values are immutable once an op produces them; only gradient buffers
/// (during backward) and leaf values (during optimizer updates) mutate.
class Tensor {
 public:
  Tensor() = default;

  /// Trainable or constant leaf with explicit values.
  static Tensor leaf(Shape shape, std::vector<double> values,
                     bool requires_grad = false);
  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor scalar(double value);
  static Tensor vector(std::vector<double> values);
  static Tensor matrix(std::size_t rows, std::size_t cols,
                       std::vector<double> values);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t size() const;
  std::size_t rows() const;  // rank-2 only
  std::size_t cols() const;  // rank-2 only

  const std::vector<double>& values() const;
  /// Mutable access to leaf storage (optimizer updates). The compute graph
  /// built from the old values must not be reused afterwards.
  std::vector<double>& mutable_values();

  double item() const;  // scalar tensors only
  double at(std::size_t i) const { return values()[i]; }
  double at(std::size_t r, std::size_t c) const;

  bool requires_grad() const;
  void set_requires_grad(bool enabled);

  bool has_grad() const;
  const std::vector<double>& grad() const;
  void zero_grad();

  /// Reverse-mode sweep from a scalar. Gradients accumulate (sum) into every
  /// reachable requires_grad tensor; call zero_grad between steps.
  void backward() const;

  const char* op_name() const;

  std::shared_ptr<detail::Node> node() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<detail::Node> node_;

  friend Tensor make_op(const char* op, Shape shape, std::vector<double> values,
                        std::vector<Tensor> parents,
                        std::function<void(detail::Node&)> make_backprop);
};

/// Scoped switch that disables graph construction (inference paths).
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool grad_enabled();

// --- Primitive operations -------------------------------------------------
// Every primitive validates operand shapes and reports violations as
// ShapeError naming the op and the offending shapes. All are differentiable
// except sign(), which is treated as a constant during backward.

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor neg(const Tensor& a);

/// m×n + n-vector, broadcast across rows (bias add).
Tensor add_rowvec(const Tensor& m, const Tensor& v);
/// m×n ⊙ m-vector, broadcast across columns.
Tensor mul_colvec(const Tensor& m, const Tensor& v);

Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double slope);
Tensor exp(const Tensor& a);
Tensor log(const Tensor& a);
Tensor clamp_min(const Tensor& a, double lo);
Tensor sign(const Tensor& a);

Tensor softmax_rows(const Tensor& a);

Tensor sum(const Tensor& a);
Tensor mean(const Tensor& a);
Tensor l2_norm(const Tensor& a);

/// Per-row reductions over rank-2 operands; results are rank-1.
Tensor rowwise_dot(const Tensor& a, const Tensor& b);
Tensor norm_rows(const Tensor& a);
/// Cosine similarity per row. A zero-norm row yields similarity 0 (with a
/// structured warning) and contributes no gradient.
Tensor cosine_rows(const Tensor& a, const Tensor& b);

/// Row gather: out[i,:] = table[ids[i],:]. Backward scatter-adds.
Tensor rows(const Tensor& table, const std::vector<int>& ids);
/// Per-row column pick: out[i] = m[i, idx[i]].
Tensor select_cols(const Tensor& m, const std::vector<int>& idx);
/// Single column: out[i] = m[i, j].
Tensor col(const Tensor& m, std::size_t j);

/// Horizontal concatenation of rank-2 tensors with equal row counts.
Tensor concat_cols(const std::vector<Tensor>& parts);
/// Stacks equal-length rank-1 tensors as the columns of a matrix.
Tensor stack_cols(const std::vector<Tensor>& columns);

/// Generic sparse row aggregation: out[i,:] = Σ_t coeffs[t]·src[indices[t],:]
/// over t in [offsets[i], offsets[i+1]). Drives graph propagation.
struct AggregationMap {
  std::size_t out_rows = 0;
  std::vector<std::size_t> offsets;  // size out_rows + 1
  std::vector<int> indices;          // source row per entry
  std::vector<double> coeffs;        // weight per entry
};
Tensor neighbor_combine(const Tensor& src, const AggregationMap& map);

// --- Initialization ---------------------------------------------------------

/// n_in×n_out matrix with entries drawn uniformly from
/// [-sqrt(2/(n_in+n_out)), +sqrt(2/(n_in+n_out))]. Deterministic per seed.
Tensor xavier_init(std::size_t n_in, std::size_t n_out, Rng& rng,
                   bool requires_grad = true);
/// Same bound, arbitrary shape; used for vectors owned by a layer whose fan
/// dimensions are given explicitly.
Tensor xavier_init_shaped(Shape shape, std::size_t n_in, std::size_t n_out,
                          Rng& rng, bool requires_grad = true);

}  // namespace skilldiag
