#include "skilldiag/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "skilldiag/error.hpp"
#include "skilldiag/warnings.hpp"

namespace skilldiag {

namespace {

thread_local bool t_grad_enabled = true;

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

void require(bool ok, const char* op, const std::string& detail) {
  if (!ok) throw ShapeError(msg(op, ": ", detail));
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  require(a.shape() == b.shape(), op,
          msg("operand shapes differ (", shape_str(a.shape()), " vs ",
              shape_str(b.shape()), ")"));
}

void require_matrix(const char* op, const Tensor& t, const char* which) {
  require(t.rank() == 2, op,
          msg(which, " must be rank-2, got ", shape_str(t.shape())));
}

void require_vector(const char* op, const Tensor& t, const char* which) {
  require(t.rank() == 1, op,
          msg(which, " must be rank-1, got ", shape_str(t.shape())));
}

}  // namespace

std::string shape_str(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  out += "]";
  return out;
}

namespace detail {

std::vector<double>& Node::grad_buffer() {
  if (grad.size() != values.size()) grad.assign(values.size(), 0.0);
  return grad;
}

}  // namespace detail

// --- Tensor basics ----------------------------------------------------------

Tensor Tensor::leaf(Shape shape, std::vector<double> values,
                    bool requires_grad) {
  if (shape_numel(shape) != values.size()) {
    throw ShapeError(msg("leaf: value count ", values.size(),
                         " does not match shape ", shape_str(shape)));
  }
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  std::vector<double> values(shape_numel(shape), 0.0);
  return leaf(std::move(shape), std::move(values), requires_grad);
}

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  std::vector<double> values(shape_numel(shape), value);
  return leaf(std::move(shape), std::move(values), requires_grad);
}

Tensor Tensor::scalar(double value) { return leaf({1}, {value}); }

Tensor Tensor::vector(std::vector<double> values) {
  Shape shape{values.size()};
  return leaf(std::move(shape), std::move(values));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols,
                      std::vector<double> values) {
  return leaf({rows, cols}, std::move(values));
}

const Shape& Tensor::shape() const { return node_->shape; }
std::size_t Tensor::size() const { return node_->values.size(); }

std::size_t Tensor::rows() const {
  if (rank() != 2) throw ShapeError("rows(): tensor is not rank-2");
  return shape()[0];
}

std::size_t Tensor::cols() const {
  if (rank() != 2) throw ShapeError("cols(): tensor is not rank-2");
  return shape()[1];
}

const std::vector<double>& Tensor::values() const { return node_->values; }

std::vector<double>& Tensor::mutable_values() { return node_->values; }

double Tensor::item() const {
  if (size() != 1) {
    throw ContractError(
        msg("item(): tensor has ", size(), " elements, expected scalar"));
  }
  return node_->values[0];
}

double Tensor::at(std::size_t r, std::size_t c) const {
  return values()[r * cols() + c];
}

bool Tensor::requires_grad() const { return node_->requires_grad; }

void Tensor::set_requires_grad(bool enabled) {
  node_->requires_grad = enabled;
}

bool Tensor::has_grad() const {
  return node_->grad.size() == node_->values.size();
}

const std::vector<double>& Tensor::grad() const {
  if (!has_grad()) {
    throw ContractError(msg("grad(): no gradient populated for '",
                            node_->op, "' tensor"));
  }
  return node_->grad;
}

void Tensor::zero_grad() { node_->grad.clear(); }

const char* Tensor::op_name() const { return node_->op; }

void Tensor::backward() const {
  if (size() != 1) {
    throw ContractError(msg("backward: loss must be scalar, got shape ",
                            shape_str(shape())));
  }
  // Iterative post-order topological sort over the parent DAG.
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> visited;
  std::vector<std::pair<detail::Node*, std::size_t>> stack;
  stack.emplace_back(node_.get(), 0);
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      detail::Node* parent = node->parents[next++].get();
      if (visited.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  // Op-node gradient buffers are transient per sweep; only leaves keep
  // accumulating across repeated backward calls.
  for (detail::Node* node : order) {
    if (node->backprop) node->grad.assign(node->values.size(), 0.0);
  }
  node_->grad_buffer()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* node = *it;
    if (node->backprop) node->backprop();
  }
}

NoGradGuard::NoGradGuard() : previous_(t_grad_enabled) {
  t_grad_enabled = false;
}

NoGradGuard::~NoGradGuard() { t_grad_enabled = previous_; }

bool grad_enabled() { return t_grad_enabled; }

// --- Op construction --------------------------------------------------------

using detail::Node;

Tensor make_op(const char* op, Shape shape, std::vector<double> values,
               std::vector<Tensor> parents,
               std::function<void(Node&)> make_backprop) {
  if (shape_numel(shape) != values.size()) {
    throw ShapeError(msg(op, ": internal result size mismatch"));
  }
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->values = std::move(values);
  node->op = op;

  bool needs_grad = false;
  if (t_grad_enabled) {
    for (const Tensor& p : parents) {
      if (p.defined() && p.requires_grad()) {
        needs_grad = true;
        break;
      }
    }
  }
  if (needs_grad) {
    node->requires_grad = true;
    for (const Tensor& p : parents) node->parents.push_back(p.node());
    make_backprop(*node);  // installs node->backprop; must capture &*node
  }
  return Tensor(std::move(node));
}

namespace {

// Accumulates into a parent's gradient buffer when that parent requires grad.
// The buffer is allocated (zero-filled) even when the pushed contribution is
// zero, so downstream consumers observe a populated gradient.
std::vector<double>* parent_grad(Node* self, std::size_t i) {
  Node* parent = self->parents[i].get();
  if (!parent->requires_grad) return nullptr;
  return &parent->grad_buffer();
}

}  // namespace

// --- Arithmetic -------------------------------------------------------------

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_matrix("matmul", a, "lhs");
  require_matrix("matmul", b, "rhs");
  require(a.cols() == b.rows(), "matmul",
          msg("inner dimensions mismatch (", shape_str(a.shape()), " vs ",
              shape_str(b.shape()), ")"));
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = av.data() + i * k;
    double* orow = out.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double s = arow[p];
      if (s == 0.0) continue;
      const double* brow = bv.data() + p * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += s * brow[j];
    }
  }
  return make_op("matmul", {m, n}, std::move(out), {a, b},
                 [m, k, n](Node& node) {
    Node* self = &node;
    node.backprop = [self, m, k, n]() {
      const auto& dy = self->grad;
      const auto& av = self->parents[0]->values;
      const auto& bv = self->parents[1]->values;
      if (auto* da = parent_grad(self, 0)) {
        // dA[i,p] += Σ_j dY[i,j]·B[p,j]
        for (std::size_t i = 0; i < m; ++i) {
          const double* dyrow = dy.data() + i * n;
          double* darow = da->data() + i * k;
          for (std::size_t p = 0; p < k; ++p) {
            const double* brow = bv.data() + p * n;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += dyrow[j] * brow[j];
            darow[p] += acc;
          }
        }
      }
      if (auto* db = parent_grad(self, 1)) {
        // dB[p,j] += Σ_i A[i,p]·dY[i,j]
        for (std::size_t i = 0; i < m; ++i) {
          const double* arow = av.data() + i * k;
          const double* dyrow = dy.data() + i * n;
          for (std::size_t p = 0; p < k; ++p) {
            const double s = arow[p];
            if (s == 0.0) continue;
            double* dbrow = db->data() + p * n;
            for (std::size_t j = 0; j < n; ++j) dbrow[j] += s * dyrow[j];
          }
        }
      }
    };
  });
}

namespace {

template <typename Fwd, typename Bwd>
Tensor binary_elementwise(const char* op, const Tensor& a, const Tensor& b,
                          Fwd fwd, Bwd bwd) {
  require_same_shape(op, a, b);
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(av[i], bv[i]);
  return make_op(op, a.shape(), std::move(out), {a, b}, [bwd](Node& node) {
    Node* self = &node;
    node.backprop = [self, bwd]() {
      const auto& dy = self->grad;
      const auto& av = self->parents[0]->values;
      const auto& bv = self->parents[1]->values;
      auto* da = parent_grad(self, 0);
      auto* db = parent_grad(self, 1);
      for (std::size_t i = 0; i < dy.size(); ++i) {
        double ga, gb;
        bwd(av[i], bv[i], ga, gb);
        if (da) (*da)[i] += dy[i] * ga;
        if (db) (*db)[i] += dy[i] * gb;
      }
    };
  });
}

template <typename Fwd, typename Bwd>
Tensor unary_elementwise(const char* op, const Tensor& a, Fwd fwd, Bwd bwd) {
  const auto& av = a.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(av[i]);
  return make_op(op, a.shape(), std::move(out), {a}, [bwd](Node& node) {
    Node* self = &node;
    node.backprop = [self, bwd]() {
      auto* da = parent_grad(self, 0);
      if (!da) return;
      const auto& dy = self->grad;
      const auto& av = self->parents[0]->values;
      const auto& yv = self->values;
      for (std::size_t i = 0; i < dy.size(); ++i) {
        (*da)[i] += dy[i] * bwd(av[i], yv[i]);
      }
    };
  });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  return binary_elementwise(
      "add", a, b, [](double x, double y) { return x + y; },
      [](double, double, double& ga, double& gb) { ga = 1.0; gb = 1.0; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary_elementwise(
      "sub", a, b, [](double x, double y) { return x - y; },
      [](double, double, double& ga, double& gb) { ga = 1.0; gb = -1.0; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return binary_elementwise(
      "mul", a, b, [](double x, double y) { return x * y; },
      [](double x, double y, double& ga, double& gb) { ga = y; gb = x; });
}

Tensor div(const Tensor& a, const Tensor& b) {
  return binary_elementwise(
      "div", a, b, [](double x, double y) { return x / y; },
      [](double x, double y, double& ga, double& gb) {
        ga = 1.0 / y;
        gb = -x / (y * y);
      });
}

Tensor scale(const Tensor& a, double factor) {
  return unary_elementwise(
      "scale", a, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Tensor neg(const Tensor& a) { return scale(a, -1.0); }

Tensor add_rowvec(const Tensor& m, const Tensor& v) {
  require_matrix("add_rowvec", m, "lhs");
  require_vector("add_rowvec", v, "rhs");
  require(m.cols() == v.size(), "add_rowvec",
          msg("column count ", m.cols(), " vs vector length ", v.size()));
  const std::size_t r = m.rows(), c = m.cols();
  const auto& mv = m.values();
  const auto& vv = v.values();
  std::vector<double> out(mv.size());
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = mv[i * c + j] + vv[j];
  }
  return make_op("add_rowvec", m.shape(), std::move(out), {m, v},
                 [r, c](Node& node) {
    Node* self = &node;
    node.backprop = [self, r, c]() {
      const auto& dy = self->grad;
      if (auto* dm = parent_grad(self, 0)) {
        for (std::size_t i = 0; i < dy.size(); ++i) (*dm)[i] += dy[i];
      }
      if (auto* dv = parent_grad(self, 1)) {
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < c; ++j) (*dv)[j] += dy[i * c + j];
      }
    };
  });
}

Tensor mul_colvec(const Tensor& m, const Tensor& v) {
  require_matrix("mul_colvec", m, "lhs");
  require_vector("mul_colvec", v, "rhs");
  require(m.rows() == v.size(), "mul_colvec",
          msg("row count ", m.rows(), " vs vector length ", v.size()));
  const std::size_t r = m.rows(), c = m.cols();
  const auto& mv = m.values();
  const auto& vv = v.values();
  std::vector<double> out(mv.size());
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = mv[i * c + j] * vv[i];
  }
  return make_op("mul_colvec", m.shape(), std::move(out), {m, v},
                 [r, c](Node& node) {
    Node* self = &node;
    node.backprop = [self, r, c]() {
      const auto& dy = self->grad;
      const auto& mv = self->parents[0]->values;
      const auto& vv = self->parents[1]->values;
      auto* dm = parent_grad(self, 0);
      auto* dv = parent_grad(self, 1);
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
          const std::size_t k = i * c + j;
          if (dm) (*dm)[k] += dy[k] * vv[i];
          if (dv) (*dv)[i] += dy[k] * mv[k];
        }
      }
    };
  });
}

// --- Nonlinearities -----------------------------------------------------------

Tensor sigmoid(const Tensor& a) {
  return unary_elementwise(
      "sigmoid", a,
      [](double x) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor tanh(const Tensor& a) {
  return unary_elementwise(
      "tanh", a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor leaky_relu(const Tensor& a, double slope) {
  return unary_elementwise(
      "leaky_relu", a,
      [slope](double x) { return x > 0.0 ? x : slope * x; },
      [slope](double x, double) { return x > 0.0 ? 1.0 : slope; });
}

Tensor exp(const Tensor& a) {
  return unary_elementwise(
      "exp", a, [](double x) { return std::exp(x); },
      [](double, double y) { return y; });
}

Tensor log(const Tensor& a) {
  return unary_elementwise(
      "log", a, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Tensor clamp_min(const Tensor& a, double lo) {
  return unary_elementwise(
      "clamp_min", a, [lo](double x) { return x > lo ? x : lo; },
      [lo](double x, double) { return x > lo ? 1.0 : 0.0; });
}

Tensor sign(const Tensor& a) {
  // Constant during backward: the result has no parents.
  const auto& av = a.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = av[i] > 0.0 ? 1.0 : (av[i] < 0.0 ? -1.0 : 0.0);
  }
  return Tensor::leaf(a.shape(), std::move(out));
}

Tensor softmax_rows(const Tensor& a) {
  require_matrix("softmax_rows", a, "operand");
  const std::size_t r = a.rows(), c = a.cols();
  require(c >= 1, "softmax_rows", "needs at least one column");
  const auto& av = a.values();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < r; ++i) {
    const double* row = av.data() + i * c;
    double* orow = out.data() + i * c;
    double hi = row[0];
    for (std::size_t j = 1; j < c; ++j) hi = std::max(hi, row[j]);
    double total = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      orow[j] = std::exp(row[j] - hi);
      total += orow[j];
    }
    for (std::size_t j = 0; j < c; ++j) orow[j] /= total;
  }
  return make_op("softmax_rows", a.shape(), std::move(out), {a},
                 [r, c](Node& node) {
    Node* self = &node;
    node.backprop = [self, r, c]() {
      auto* da = parent_grad(self, 0);
      if (!da) return;
      const auto& dy = self->grad;
      const auto& yv = self->values;
      for (std::size_t i = 0; i < r; ++i) {
        const double* yrow = yv.data() + i * c;
        const double* dyrow = dy.data() + i * c;
        double inner = 0.0;
        for (std::size_t j = 0; j < c; ++j) inner += dyrow[j] * yrow[j];
        double* darow = da->data() + i * c;
        for (std::size_t j = 0; j < c; ++j)
          darow[j] += (dyrow[j] - inner) * yrow[j];
      }
    };
  });
}

// --- Reductions -----------------------------------------------------------------

Tensor sum(const Tensor& a) {
  double total = 0.0;
  for (double x : a.values()) total += x;
  return make_op("sum", {1}, {total}, {a}, [](Node& node) {
    Node* self = &node;
    node.backprop = [self]() {
      if (auto* da = parent_grad(self, 0)) {
        const double g = self->grad[0];
        for (double& d : *da) d += g;
      }
    };
  });
}

Tensor mean(const Tensor& a) {
  const std::size_t n = a.size();
  require(n > 0, "mean", "empty tensor");
  double total = 0.0;
  for (double x : a.values()) total += x;
  return make_op("mean", {1}, {total / static_cast<double>(n)}, {a},
                 [n](Node& node) {
    Node* self = &node;
    node.backprop = [self, n]() {
      if (auto* da = parent_grad(self, 0)) {
        const double g = self->grad[0] / static_cast<double>(n);
        for (double& d : *da) d += g;
      }
    };
  });
}

Tensor l2_norm(const Tensor& a) {
  double sq = 0.0;
  for (double x : a.values()) sq += x * x;
  const double norm = std::sqrt(sq);
  return make_op("l2_norm", {1}, {norm}, {a}, [](Node& node) {
    Node* self = &node;
    node.backprop = [self]() {
      auto* da = parent_grad(self, 0);
      if (!da) return;
      const double n = self->values[0];
      if (n == 0.0) return;
      const double g = self->grad[0] / n;
      const auto& av = self->parents[0]->values;
      for (std::size_t i = 0; i < av.size(); ++i) (*da)[i] += g * av[i];
    };
  });
}

Tensor rowwise_dot(const Tensor& a, const Tensor& b) {
  require_matrix("rowwise_dot", a, "lhs");
  require_same_shape("rowwise_dot", a, b);
  const std::size_t r = a.rows(), c = a.cols();
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(r, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < c; ++j) acc += av[i * c + j] * bv[i * c + j];
    out[i] = acc;
  }
  return make_op("rowwise_dot", {r}, std::move(out), {a, b},
                 [r, c](Node& node) {
    Node* self = &node;
    node.backprop = [self, r, c]() {
      const auto& dy = self->grad;
      const auto& av = self->parents[0]->values;
      const auto& bv = self->parents[1]->values;
      auto* da = parent_grad(self, 0);
      auto* db = parent_grad(self, 1);
      for (std::size_t i = 0; i < r; ++i) {
        const double g = dy[i];
        for (std::size_t j = 0; j < c; ++j) {
          const std::size_t k = i * c + j;
          if (da) (*da)[k] += g * bv[k];
          if (db) (*db)[k] += g * av[k];
        }
      }
    };
  });
}

Tensor norm_rows(const Tensor& a) {
  require_matrix("norm_rows", a, "operand");
  const std::size_t r = a.rows(), c = a.cols();
  const auto& av = a.values();
  std::vector<double> out(r, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    double sq = 0.0;
    for (std::size_t j = 0; j < c; ++j) sq += av[i * c + j] * av[i * c + j];
    out[i] = std::sqrt(sq);
  }
  return make_op("norm_rows", {r}, std::move(out), {a}, [r, c](Node& node) {
    Node* self = &node;
    node.backprop = [self, r, c]() {
      auto* da = parent_grad(self, 0);
      if (!da) return;
      const auto& av = self->parents[0]->values;
      for (std::size_t i = 0; i < r; ++i) {
        const double n = self->values[i];
        if (n == 0.0) continue;
        const double g = self->grad[i] / n;
        for (std::size_t j = 0; j < c; ++j) {
          (*da)[i * c + j] += g * av[i * c + j];
        }
      }
    };
  });
}

Tensor cosine_rows(const Tensor& a, const Tensor& b) {
  require_matrix("cosine_rows", a, "lhs");
  require_same_shape("cosine_rows", a, b);
  const std::size_t r = a.rows(), c = a.cols();
  const auto& av = a.values();
  const auto& bv = b.values();
  std::vector<double> out(r, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      const double x = av[i * c + j], y = bv[i * c + j];
      dot += x * y;
      na += x * x;
      nb += y * y;
    }
    if (na == 0.0 || nb == 0.0) {
      warnings::emit("cosine_zero_norm",
                     "cosine similarity of a zero-norm vector treated as 0");
      out[i] = 0.0;
    } else {
      out[i] = dot / (std::sqrt(na) * std::sqrt(nb));
    }
  }
  return make_op("cosine_rows", {r}, std::move(out), {a, b},
                 [r, c](Node& node) {
    Node* self = &node;
    node.backprop = [self, r, c]() {
      const auto& av = self->parents[0]->values;
      const auto& bv = self->parents[1]->values;
      auto* da = parent_grad(self, 0);
      auto* db = parent_grad(self, 1);
      if (!da && !db) return;
      for (std::size_t i = 0; i < r; ++i) {
        const double g = self->grad[i];
        if (g == 0.0) continue;
        double dot = 0.0, na2 = 0.0, nb2 = 0.0;
        for (std::size_t j = 0; j < c; ++j) {
          const double x = av[i * c + j], y = bv[i * c + j];
          dot += x * y;
          na2 += x * x;
          nb2 += y * y;
        }
        if (na2 == 0.0 || nb2 == 0.0) continue;  // similarity pinned to 0
        const double na = std::sqrt(na2), nb = std::sqrt(nb2);
        const double inv = 1.0 / (na * nb);
        const double phi = dot * inv;
        for (std::size_t j = 0; j < c; ++j) {
          const std::size_t k = i * c + j;
          if (da) (*da)[k] += g * (bv[k] * inv - phi * av[k] / na2);
          if (db) (*db)[k] += g * (av[k] * inv - phi * bv[k] / nb2);
        }
      }
    };
  });
}

// --- Indexing --------------------------------------------------------------------

Tensor rows(const Tensor& table, const std::vector<int>& ids) {
  require_matrix("rows", table, "table");
  const std::size_t n = table.rows(), c = table.cols();
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= n) {
      throw LookupError(msg("rows: id ", id, " out of range [0,", n, ")"));
    }
  }
  const auto& tv = table.values();
  std::vector<double> out(ids.size() * c);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const double* src = tv.data() + static_cast<std::size_t>(ids[i]) * c;
    std::copy(src, src + c, out.data() + i * c);
  }
  return make_op("rows", {ids.size(), c}, std::move(out), {table},
                 [ids, c](Node& node) {
    Node* self = &node;
    node.backprop = [self, ids, c]() {
      auto* dt = parent_grad(self, 0);
      if (!dt) return;
      const auto& dy = self->grad;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        double* dst = dt->data() + static_cast<std::size_t>(ids[i]) * c;
        const double* src = dy.data() + i * c;
        for (std::size_t j = 0; j < c; ++j) dst[j] += src[j];
      }
    };
  });
}

Tensor select_cols(const Tensor& m, const std::vector<int>& idx) {
  require_matrix("select_cols", m, "operand");
  require(idx.size() == m.rows(), "select_cols",
          msg("index count ", idx.size(), " vs rows ", m.rows()));
  const std::size_t c = m.cols();
  for (int j : idx) {
    if (j < 0 || static_cast<std::size_t>(j) >= c) {
      throw LookupError(
          msg("select_cols: column ", j, " out of range [0,", c, ")"));
    }
  }
  const auto& mv = m.values();
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out[i] = mv[i * c + static_cast<std::size_t>(idx[i])];
  }
  return make_op("select_cols", {idx.size()}, std::move(out), {m},
                 [idx, c](Node& node) {
    Node* self = &node;
    node.backprop = [self, idx, c]() {
      auto* dm = parent_grad(self, 0);
      if (!dm) return;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        (*dm)[i * c + static_cast<std::size_t>(idx[i])] += self->grad[i];
      }
    };
  });
}

Tensor col(const Tensor& m, std::size_t j) {
  require_matrix("col", m, "operand");
  require(j < m.cols(), "col",
          msg("column ", j, " out of range [0,", m.cols(), ")"));
  const std::size_t r = m.rows(), c = m.cols();
  const auto& mv = m.values();
  std::vector<double> out(r);
  for (std::size_t i = 0; i < r; ++i) out[i] = mv[i * c + j];
  return make_op("col", {r}, std::move(out), {m}, [r, c, j](Node& node) {
    Node* self = &node;
    node.backprop = [self, r, c, j]() {
      auto* dm = parent_grad(self, 0);
      if (!dm) return;
      for (std::size_t i = 0; i < r; ++i) (*dm)[i * c + j] += self->grad[i];
    };
  });
}

Tensor concat_cols(const std::vector<Tensor>& parts) {
  require(!parts.empty(), "concat_cols", "needs at least one operand");
  require_matrix("concat_cols", parts[0], "operand");
  const std::size_t r = parts[0].rows();
  std::size_t total = 0;
  std::vector<std::size_t> widths;
  for (const Tensor& p : parts) {
    require_matrix("concat_cols", p, "operand");
    require(p.rows() == r, "concat_cols",
            msg("row counts differ (", r, " vs ", p.rows(), ")"));
    widths.push_back(p.cols());
    total += p.cols();
  }
  std::vector<double> out(r * total);
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& pv = parts[k].values();
    for (std::size_t i = 0; i < r; ++i) {
      std::copy(pv.data() + i * widths[k], pv.data() + (i + 1) * widths[k],
                out.data() + i * total + offset);
    }
    offset += widths[k];
  }
  return make_op("concat_cols", {r, total}, std::move(out), parts,
                 [r, total, widths](Node& node) {
    Node* self = &node;
    node.backprop = [self, r, total, widths]() {
      std::size_t offset = 0;
      for (std::size_t k = 0; k < widths.size(); ++k) {
        if (auto* dp = parent_grad(self, k)) {
          for (std::size_t i = 0; i < r; ++i) {
            const double* src = self->grad.data() + i * total + offset;
            double* dst = dp->data() + i * widths[k];
            for (std::size_t j = 0; j < widths[k]; ++j) dst[j] += src[j];
          }
        }
        offset += widths[k];
      }
    };
  });
}

Tensor stack_cols(const std::vector<Tensor>& columns) {
  require(!columns.empty(), "stack_cols", "needs at least one operand");
  require_vector("stack_cols", columns[0], "operand");
  const std::size_t r = columns[0].size();
  for (const Tensor& c : columns) {
    require_vector("stack_cols", c, "operand");
    require(c.size() == r, "stack_cols",
            msg("lengths differ (", r, " vs ", c.size(), ")"));
  }
  const std::size_t n = columns.size();
  std::vector<double> out(r * n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& cv = columns[k].values();
    for (std::size_t i = 0; i < r; ++i) out[i * n + k] = cv[i];
  }
  return make_op("stack_cols", {r, n}, std::move(out), columns,
                 [r, n](Node& node) {
    Node* self = &node;
    node.backprop = [self, r, n]() {
      for (std::size_t k = 0; k < n; ++k) {
        if (auto* dc = parent_grad(self, k)) {
          for (std::size_t i = 0; i < r; ++i)
            (*dc)[i] += self->grad[i * n + k];
        }
      }
    };
  });
}

Tensor neighbor_combine(const Tensor& src, const AggregationMap& map) {
  require_matrix("neighbor_combine", src, "source");
  require(map.offsets.size() == map.out_rows + 1, "neighbor_combine",
          "offsets must have out_rows+1 entries");
  require(map.indices.size() == map.coeffs.size(), "neighbor_combine",
          "indices and coeffs length mismatch");
  const std::size_t c = src.cols();
  const auto& sv = src.values();
  std::vector<double> out(map.out_rows * c, 0.0);
  for (std::size_t i = 0; i < map.out_rows; ++i) {
    double* orow = out.data() + i * c;
    for (std::size_t t = map.offsets[i]; t < map.offsets[i + 1]; ++t) {
      const double w = map.coeffs[t];
      const double* srow =
          sv.data() + static_cast<std::size_t>(map.indices[t]) * c;
      for (std::size_t j = 0; j < c; ++j) orow[j] += w * srow[j];
    }
  }
  return make_op("neighbor_combine", {map.out_rows, c}, std::move(out), {src},
                 [map, c](Node& node) {
    Node* self = &node;
    node.backprop = [self, map, c]() {
      auto* ds = parent_grad(self, 0);
      if (!ds) return;
      for (std::size_t i = 0; i < map.out_rows; ++i) {
        const double* grow = self->grad.data() + i * c;
        for (std::size_t t = map.offsets[i]; t < map.offsets[i + 1]; ++t) {
          const double w = map.coeffs[t];
          double* drow =
              ds->data() + static_cast<std::size_t>(map.indices[t]) * c;
          for (std::size_t j = 0; j < c; ++j) drow[j] += w * grow[j];
        }
      }
    };
  });
}

// --- Initialization -----------------------------------------------------------

Tensor xavier_init(std::size_t n_in, std::size_t n_out, Rng& rng,
                   bool requires_grad) {
  return xavier_init_shaped({n_in, n_out}, n_in, n_out, rng, requires_grad);
}

Tensor xavier_init_shaped(Shape shape, std::size_t n_in, std::size_t n_out,
                          Rng& rng, bool requires_grad) {
  if (n_in == 0 || n_out == 0) {
    throw ContractError(
        msg("xavier_init: fan dimensions must be positive, got n_in=", n_in,
            " n_out=", n_out));
  }
  for (std::size_t d : shape) {
    if (d == 0) throw ContractError("xavier_init: zero dimension in shape");
  }
  const double bound = std::sqrt(2.0 / static_cast<double>(n_in + n_out));
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  std::vector<double> values(n);
  for (double& x : values) x = rng.uniform(-bound, bound);
  return Tensor::leaf(std::move(shape), std::move(values), requires_grad);
}

}  // namespace skilldiag
