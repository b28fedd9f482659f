// Copyright 2026 The zxrl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <unordered_set>
#include <utility>
#include <vector>

#include "zxrl/error.hpp"

namespace zxrl::nn {

using Index = Eigen::Index;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace detail {

struct Node {
  Mat value;
  Mat grad;  // empty until something flows back
  bool requires_grad = false;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward;

  Mat& grad_buffer() {
    if (grad.size() == 0) grad = Mat::Zero(value.rows(), value.cols());
    return grad;
  }
};

inline bool& grad_enabled() {
  thread_local bool enabled = true;
  return enabled;
}

}  // namespace detail

/// Disables graph recording on the current thread while alive.
class NoGradGuard {
 public:
  NoGradGuard() : prev_(detail::grad_enabled()) { detail::grad_enabled() = false; }
  ~NoGradGuard() { detail::grad_enabled() = prev_; }
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool prev_;
};

/// Dense rank-2 array of doubles with reverse-mode differentiation.
/// Vectors are 1 x n or n x 1 matrices. Copies share the same node.
class Tensor {
 public:
  Tensor() = default;

  static Tensor constant(Mat v) { return Tensor(std::move(v), false); }
  static Tensor parameter(Mat v) { return Tensor(std::move(v), true); }
  static Tensor scalar(double x) {
    Mat m(1, 1);
    m(0, 0) = x;
    return constant(std::move(m));
  }

  [[nodiscard]] bool defined() const { return node_ != nullptr; }
  [[nodiscard]] const Mat& value() const { return node_->value; }
  /// Direct access for optimizers and checkpoint loading.
  [[nodiscard]] Mat& mutable_value() { return node_->value; }
  [[nodiscard]] Index rows() const { return node_->value.rows(); }
  [[nodiscard]] Index cols() const { return node_->value.cols(); }
  [[nodiscard]] std::vector<Index> shape() const { return {rows(), cols()}; }
  [[nodiscard]] Index size() const { return node_->value.size(); }
  [[nodiscard]] double item() const {
    if (size() != 1) throw ShapeMismatch("item() on a non-scalar tensor");
    return node_->value(0, 0);
  }
  [[nodiscard]] bool requires_grad() const { return node_->requires_grad; }

  /// Accumulated gradient; zeros if nothing has flowed back yet.
  [[nodiscard]] Mat grad() const {
    if (node_->grad.size() == 0) return Mat::Zero(rows(), cols());
    return node_->grad;
  }
  void zero_grad() { node_->grad.resize(0, 0); }

  /// Back-propagates from a scalar with seed gradient 1 (or `seed`).
  void backward(double seed = 1.0) const {
    if (size() != 1) throw ShapeMismatch("backward() needs a scalar");
    std::vector<detail::Node*> order;
    std::unordered_set<detail::Node*> seen;
    // Iterative post-order DFS.
    std::vector<std::pair<detail::Node*, std::size_t>> stack{{node_.get(), 0}};
    seen.insert(node_.get());
    while (!stack.empty()) {
      auto& [n, i] = stack.back();
      if (i < n->parents.size()) {
        detail::Node* p = n->parents[i++].get();
        if (p->requires_grad && seen.insert(p).second) stack.emplace_back(p, 0);
      } else {
        order.push_back(n);
        stack.pop_back();
      }
    }
    node_->grad_buffer()(0, 0) += seed;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      detail::Node* n = *it;
      if (n->backward && n->grad.size() != 0) n->backward(*n);
    }
  }

  /// Builds a result node; `bw` runs during backward with the node itself.
  static Tensor make(Mat value, std::vector<Tensor> inputs, std::function<void(detail::Node&)> bw) {
    Tensor t(std::move(value), false);
    if (!detail::grad_enabled()) return t;
    bool any = false;
    for (const auto& in : inputs) any |= in.node_->requires_grad;
    if (!any) return t;
    t.node_->requires_grad = true;
    for (auto& in : inputs) t.node_->parents.push_back(in.node_);
    t.node_->backward = std::move(bw);
    return t;
  }

  [[nodiscard]] detail::Node* node() const { return node_.get(); }

 private:
  Tensor(Mat v, bool requires_grad) : node_(std::make_shared<detail::Node>()) {
    node_->value = std::move(v);
    node_->requires_grad = requires_grad;
  }

  std::shared_ptr<detail::Node> node_;
};

namespace detail {

inline void accumulate(Node& n, std::size_t parent, const auto& g) {
  Node& p = *n.parents[parent];
  if (!p.requires_grad) return;
  if (p.grad.size() == 0) {
    p.grad = g;
  } else {
    p.grad += g;
  }
}

inline void same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeMismatch(std::string(op) + ": shape mismatch");
  }
}

}  // namespace detail

// -- elementwise and linear algebra ---------------------------------------------

inline Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) throw ShapeMismatch("matmul: inner dimensions differ");
  Mat out = a.value() * b.value();
  return Tensor::make(std::move(out), {a, b}, [](detail::Node& n) {
    const Mat& A = n.parents[0]->value;
    const Mat& B = n.parents[1]->value;
    detail::Node& pa = *n.parents[0];
    detail::Node& pb = *n.parents[1];
    if (pa.requires_grad) {
      if (pa.grad.size() == 0) {
        pa.grad.noalias() = n.grad * B.transpose();
      } else {
        pa.grad.noalias() += n.grad * B.transpose();
      }
    }
    if (pb.requires_grad) {
      if (pb.grad.size() == 0) {
        pb.grad.noalias() = A.transpose() * n.grad;
      } else {
        pb.grad.noalias() += A.transpose() * n.grad;
      }
    }
  });
}

inline Tensor add(const Tensor& a, const Tensor& b) {
  detail::same_shape(a, b, "add");
  return Tensor::make(a.value() + b.value(), {a, b}, [](detail::Node& n) {
    detail::accumulate(n, 0, n.grad);
    detail::accumulate(n, 1, n.grad);
  });
}

inline Tensor sub(const Tensor& a, const Tensor& b) {
  detail::same_shape(a, b, "sub");
  return Tensor::make(a.value() - b.value(), {a, b}, [](detail::Node& n) {
    detail::accumulate(n, 0, n.grad);
    detail::accumulate(n, 1, -n.grad);
  });
}

inline Tensor mul(const Tensor& a, const Tensor& b) {
  detail::same_shape(a, b, "mul");
  return Tensor::make(a.value().cwiseProduct(b.value()), {a, b}, [](detail::Node& n) {
    detail::accumulate(n, 0, n.grad.cwiseProduct(n.parents[1]->value));
    detail::accumulate(n, 1, n.grad.cwiseProduct(n.parents[0]->value));
  });
}

/// a (n x m) plus a 1 x m row broadcast over all rows.
inline Tensor add_row(const Tensor& a, const Tensor& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) throw ShapeMismatch("add_row: bad row shape");
  Mat out = a.value().rowwise() + row.value().row(0);
  return Tensor::make(std::move(out), {a, row}, [](detail::Node& n) {
    detail::accumulate(n, 0, n.grad);
    detail::accumulate(n, 1, n.grad.colwise().sum());
  });
}

inline Tensor scale(const Tensor& a, double s) {
  return Tensor::make(a.value() * s, {a}, [s](detail::Node& n) { detail::accumulate(n, 0, n.grad * s); });
}

inline Tensor add_scalar(const Tensor& a, double s) {
  Mat out = a.value().array() + s;
  return Tensor::make(std::move(out), {a}, [](detail::Node& n) { detail::accumulate(n, 0, n.grad); });
}

inline Tensor leaky_relu(const Tensor& a, double slope) {
  Mat out = a.value().unaryExpr([slope](double x) { return x > 0 ? x : slope * x; });
  return Tensor::make(std::move(out), {a}, [slope](detail::Node& n) {
    const Mat& x = n.parents[0]->value;
    Mat g = n.grad.binaryExpr(x, [slope](double gy, double xv) { return xv > 0 ? gy : slope * gy; });
    detail::accumulate(n, 0, g);
  });
}

inline Tensor exp(const Tensor& a) {
  Mat out = a.value().array().exp();
  return Tensor::make(out, {a}, [](detail::Node& n) { detail::accumulate(n, 0, n.grad.cwiseProduct(n.value)); });
}

/// Clamps into [lo, hi]; gradient passes only where the input is inside.
inline Tensor clamp(const Tensor& a, double lo, double hi) {
  Mat out = a.value().cwiseMax(lo).cwiseMin(hi);
  return Tensor::make(std::move(out), {a}, [lo, hi](detail::Node& n) {
    const Mat& x = n.parents[0]->value;
    Mat g = n.grad.binaryExpr(x, [lo, hi](double gy, double xv) { return xv >= lo && xv <= hi ? gy : 0.0; });
    detail::accumulate(n, 0, g);
  });
}

/// Elementwise max; ties send the gradient to the first argument.
inline Tensor maximum(const Tensor& a, const Tensor& b) {
  detail::same_shape(a, b, "maximum");
  Mat out = a.value().cwiseMax(b.value());
  return Tensor::make(std::move(out), {a, b}, [](detail::Node& n) {
    const Mat& x = n.parents[0]->value;
    const Mat& y = n.parents[1]->value;
    const Mat mask = (x.array() >= y.array()).cast<double>();
    detail::accumulate(n, 0, n.grad.cwiseProduct(mask));
    detail::accumulate(n, 1, n.grad.cwiseProduct((1.0 - mask.array()).matrix()));
  });
}

inline Tensor sum(const Tensor& a) {
  Mat out(1, 1);
  out(0, 0) = a.value().sum();
  return Tensor::make(std::move(out), {a}, [](detail::Node& n) {
    const detail::Node* p = n.parents[0].get();
    detail::accumulate(n, 0, Mat::Constant(p->value.rows(), p->value.cols(), n.grad(0, 0)));
  });
}

inline Tensor mean(const Tensor& a) { return scale(sum(a), 1.0 / static_cast<double>(a.size())); }

// -- indexing -------------------------------------------------------------------

/// out[k] = a[idx[k]] row-wise.
inline Tensor gather_rows(const Tensor& a, std::vector<Index> idx) {
  Mat out(static_cast<Index>(idx.size()), a.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= a.rows()) throw ShapeMismatch("gather_rows: index out of range");
    out.row(static_cast<Index>(k)) = a.value().row(idx[k]);
  }
  return Tensor::make(std::move(out), {a}, [idx = std::move(idx)](detail::Node& n) {
    detail::Node& p = *n.parents[0];
    if (!p.requires_grad) return;
    Mat& g = p.grad_buffer();
    for (std::size_t k = 0; k < idx.size(); ++k) g.row(idx[k]) += n.grad.row(static_cast<Index>(k));
  });
}

/// Rows of a followed by rows of b.
inline Tensor vstack(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.cols()) throw ShapeMismatch("vstack: column counts differ");
  Mat out(a.rows() + b.rows(), a.cols());
  out.topRows(a.rows()) = a.value();
  out.bottomRows(b.rows()) = b.value();
  const Index ra = a.rows(), rb = b.rows();
  return Tensor::make(std::move(out), {a, b}, [ra, rb](detail::Node& n) {
    detail::accumulate(n, 0, n.grad.topRows(ra));
    detail::accumulate(n, 1, n.grad.bottomRows(rb));
  });
}

// -- segment reductions ------------------------------------------------------------

/// Softmax of a column vector within groups: entries sharing `seg[k]` are
/// normalized together. Returns the same shape.
inline Tensor segment_softmax(const Tensor& logits, std::vector<Index> seg, Index n_segments) {
  if (logits.cols() != 1 || logits.rows() != static_cast<Index>(seg.size())) {
    throw ShapeMismatch("segment_softmax: expects a column vector matching seg");
  }
  const Mat& x = logits.value();
  std::vector<double> mx(static_cast<std::size_t>(n_segments), -INFINITY), den(static_cast<std::size_t>(n_segments), 0.0);
  for (std::size_t k = 0; k < seg.size(); ++k) mx[seg[k]] = std::max(mx[seg[k]], x(static_cast<Index>(k), 0));
  Mat out(x.rows(), 1);
  for (std::size_t k = 0; k < seg.size(); ++k) {
    out(static_cast<Index>(k), 0) = std::exp(x(static_cast<Index>(k), 0) - mx[seg[k]]);
    den[seg[k]] += out(static_cast<Index>(k), 0);
  }
  for (std::size_t k = 0; k < seg.size(); ++k) out(static_cast<Index>(k), 0) /= den[seg[k]];
  return Tensor::make(std::move(out), {logits}, [seg = std::move(seg), n_segments](detail::Node& n) {
    // d x_k = y_k (g_k - sum_{j in seg} g_j y_j)
    std::vector<double> dot(static_cast<std::size_t>(n_segments), 0.0);
    for (std::size_t k = 0; k < seg.size(); ++k) {
      dot[seg[k]] += n.grad(static_cast<Index>(k), 0) * n.value(static_cast<Index>(k), 0);
    }
    Mat g(n.value.rows(), 1);
    for (std::size_t k = 0; k < seg.size(); ++k) {
      const Index r = static_cast<Index>(k);
      g(r, 0) = n.value(r, 0) * (n.grad(r, 0) - dot[seg[k]]);
    }
    detail::accumulate(n, 0, g);
  });
}

/// out[s] = sum over k with seg[k] == s of w[k] * v[k]; w is a column.
inline Tensor segment_weighted_sum(const Tensor& w, const Tensor& v, std::vector<Index> seg, Index n_segments) {
  if (w.cols() != 1 || w.rows() != v.rows() || v.rows() != static_cast<Index>(seg.size())) {
    throw ShapeMismatch("segment_weighted_sum: shape mismatch");
  }
  Mat out = Mat::Zero(n_segments, v.cols());
  for (std::size_t k = 0; k < seg.size(); ++k) {
    const Index r = static_cast<Index>(k);
    out.row(seg[k]) += w.value()(r, 0) * v.value().row(r);
  }
  return Tensor::make(std::move(out), {w, v}, [seg = std::move(seg)](detail::Node& n) {
    detail::Node& pw = *n.parents[0];
    detail::Node& pv = *n.parents[1];
    if (pw.requires_grad) {
      Mat& g = pw.grad_buffer();
      for (std::size_t k = 0; k < seg.size(); ++k) {
        const Index r = static_cast<Index>(k);
        g(r, 0) += n.grad.row(seg[k]).dot(pv.value.row(r));
      }
    }
    if (pv.requires_grad) {
      Mat& g = pv.grad_buffer();
      for (std::size_t k = 0; k < seg.size(); ++k) {
        const Index r = static_cast<Index>(k);
        g.row(r) += pw.value(r, 0) * n.grad.row(seg[k]);
      }
    }
  });
}

/// Log-softmax of a column vector within groups sharing `seg[k]`.
inline Tensor segment_log_softmax(const Tensor& logits, std::vector<Index> seg, Index n_segments) {
  if (logits.cols() != 1 || logits.rows() != static_cast<Index>(seg.size())) {
    throw ShapeMismatch("segment_log_softmax: expects a column vector matching seg");
  }
  const Mat& x = logits.value();
  const auto ns = static_cast<std::size_t>(n_segments);
  std::vector<double> mx(ns, -INFINITY), den(ns, 0.0);
  for (std::size_t k = 0; k < seg.size(); ++k) mx[seg[k]] = std::max(mx[seg[k]], x(static_cast<Index>(k), 0));
  for (std::size_t k = 0; k < seg.size(); ++k) den[seg[k]] += std::exp(x(static_cast<Index>(k), 0) - mx[seg[k]]);
  Mat out(x.rows(), 1);
  for (std::size_t k = 0; k < seg.size(); ++k) {
    out(static_cast<Index>(k), 0) = x(static_cast<Index>(k), 0) - mx[seg[k]] - std::log(den[seg[k]]);
  }
  return Tensor::make(std::move(out), {logits}, [seg = std::move(seg), ns](detail::Node& n) {
    // d x_k = g_k - p_k * sum_{j in seg} g_j
    std::vector<double> gs(ns, 0.0);
    for (std::size_t k = 0; k < seg.size(); ++k) gs[seg[k]] += n.grad(static_cast<Index>(k), 0);
    Mat g(n.value.rows(), 1);
    for (std::size_t k = 0; k < seg.size(); ++k) {
      const Index r = static_cast<Index>(k);
      g(r, 0) = n.grad(r, 0) - std::exp(n.value(r, 0)) * gs[seg[k]];
    }
    detail::accumulate(n, 0, g);
  });
}

/// Log-softmax over all entries of a column vector.
inline Tensor log_softmax(const Tensor& logits) {
  if (logits.cols() != 1) throw ShapeMismatch("log_softmax: expects a column vector");
  const Mat& x = logits.value();
  const double mx = x.maxCoeff();
  const double lse = mx + std::log((x.array() - mx).exp().sum());
  Mat out = x.array() - lse;
  return Tensor::make(std::move(out), {logits}, [](detail::Node& n) {
    // d x = g - softmax * sum(g)
    const Mat p = n.value.array().exp();
    detail::accumulate(n, 0, n.grad - p * n.grad.sum());
  });
}

}  // namespace zxrl::nn
