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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "zxrl/tensor.hpp"

namespace zxrl::nn {

/// Directed message-passing structure. An undirected edge {u, v} becomes
/// the two directed edges u->v and v->u; a self-loop {i, i} stays single.
struct GraphIndex {
  Index n_nodes = 0;
  std::vector<Index> src;
  std::vector<Index> dst;
  Mat edge_features;  // one row per directed edge

  static GraphIndex from_undirected(Index n_nodes, const std::vector<std::array<Index, 2>>& edges,
                                    const Mat& features) {
    if (features.rows() != static_cast<Index>(edges.size())) {
      throw ShapeMismatch("graph: one feature row per edge expected");
    }
    GraphIndex g;
    g.n_nodes = n_nodes;
    std::size_t directed = 0;
    for (const auto& e : edges) directed += e[0] == e[1] ? 1 : 2;
    g.edge_features.resize(static_cast<Index>(directed), features.cols());
    Index row = 0;
    auto push = [&](Index s, Index d, Index f) {
      if (s < 0 || d < 0 || s >= n_nodes || d >= n_nodes) throw ShapeMismatch("graph: node id out of range");
      g.src.push_back(s);
      g.dst.push_back(d);
      g.edge_features.row(row++) = features.row(f);
    };
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto [u, v] = edges[k];
      push(u, v, static_cast<Index>(k));
      if (u != v) push(v, u, static_cast<Index>(k));
    }
    return g;
  }

  /// Places the graphs side by side; node ids of part k shift by the total
  /// node count of the parts before it.
  static GraphIndex disjoint_union(const std::vector<const GraphIndex*>& parts) {
    GraphIndex g;
    std::size_t ne = 0;
    Index cols = 0;
    for (const GraphIndex* p : parts) {
      ne += p->src.size();
      cols = std::max(cols, p->edge_features.cols());
    }
    g.src.reserve(ne);
    g.dst.reserve(ne);
    g.edge_features = Mat::Zero(static_cast<Index>(ne), cols);
    Index off = 0, row = 0;
    for (const GraphIndex* p : parts) {
      if (p->edge_features.cols() != cols && !p->src.empty()) throw ShapeMismatch("graph union: edge widths differ");
      for (std::size_t e = 0; e < p->src.size(); ++e) {
        g.src.push_back(p->src[e] + off);
        g.dst.push_back(p->dst[e] + off);
        g.edge_features.row(row++) = p->edge_features.row(static_cast<Index>(e));
      }
      off += p->n_nodes;
    }
    g.n_nodes = off;
    return g;
  }

  friend bool operator==(const GraphIndex&, const GraphIndex&) = default;
};

/// Glorot-style uniform init: U(-s, s) with s = sqrt(6 / (fan_in + fan_out)).
inline Mat glorot(Index fan_in, Index fan_out, std::mt19937_64& rng) {
  const double s = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> u(-s, s);
  Mat m(fan_in, fan_out);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

namespace detail {

/// z = s_dst + t_src + e_feat Te for directed edge `e`.
inline void gatv2_pre_activation(const Mat& S, const Mat& T, const Mat& TE, const GraphIndex& g, std::size_t e,
                                 Eigen::RowVectorXd& z) {
  z = S.row(g.dst[e]) + T.row(g.src[e]);
  for (Index k = 0; k < TE.rows(); ++k) {
    const double f = g.edge_features(static_cast<Index>(e), k);
    if (f != 0.0) z += f * TE.row(k);
  }
}

/// Fused attention and aggregation of one GATv2 layer, given the projected
/// node features s = x Ts and t = x Tt. Edge projections are recomputed per
/// edge instead of stored.
inline Tensor gatv2_aggregate(const Tensor& s, const Tensor& t, const Tensor& theta_e, const Tensor& att,
                              const GraphIndex& g, double slope, std::vector<double>* alpha_out) {
  const Index n = g.n_nodes;
  const Index h = s.cols();
  const auto ne = g.src.size();
  const Mat& S = s.value();
  const Mat& T = t.value();
  const Mat& TE = theta_e.value();
  const Eigen::RowVectorXd a = att.value().col(0).transpose();

  std::vector<double> alpha(ne), mx(static_cast<std::size_t>(n), -INFINITY), den(static_cast<std::size_t>(n), 0.0);
  Eigen::RowVectorXd z(h);
  for (std::size_t e = 0; e < ne; ++e) {
    gatv2_pre_activation(S, T, TE, g, e, z);
    double l = 0;
    for (Index c = 0; c < h; ++c) l += a[c] * (z[c] > 0 ? z[c] : slope * z[c]);
    alpha[e] = l;
    auto& m = mx[static_cast<std::size_t>(g.dst[e])];
    m = std::max(m, l);
  }
  for (std::size_t e = 0; e < ne; ++e) {
    const auto i = static_cast<std::size_t>(g.dst[e]);
    alpha[e] = std::exp(alpha[e] - mx[i]);
    den[i] += alpha[e];
  }
  Mat out = Mat::Zero(n, h);
  for (std::size_t e = 0; e < ne; ++e) {
    const Index i = g.dst[e];
    alpha[e] /= den[static_cast<std::size_t>(i)];
    const Index j = g.src[e];
    if (i == j) {
      out.row(i) += alpha[e] * S.row(i);
    } else {
      out.row(i) += alpha[e] * T.row(j);
    }
  }
  if (alpha_out) *alpha_out = alpha;

  if (!grad_enabled()) return Tensor::constant(std::move(out));
  return Tensor::make(std::move(out), {s, t, theta_e, att}, [alpha = std::move(alpha), g, slope](Node& node) {
    const Mat& G = node.grad;
    const Mat& S = node.parents[0]->value;
    const Mat& T = node.parents[1]->value;
    const Mat& TE = node.parents[2]->value;
    const Eigen::RowVectorXd a = node.parents[3]->value.col(0).transpose();
    const Index n = g.n_nodes, h = S.cols(), de = TE.rows();
    const Mat& EF = g.edge_features;
    const auto ne = alpha.size();
    std::vector<double> dl(ne), seg(static_cast<std::size_t>(n), 0.0);
    Mat dS = Mat::Zero(n, h), dT = Mat::Zero(n, h), dTE = Mat::Zero(de, h);
    Eigen::RowVectorXd dA = Eigen::RowVectorXd::Zero(h);
    for (std::size_t e = 0; e < ne; ++e) {
      const Index i = g.dst[e], j = g.src[e];
      const double da = i == j ? G.row(i).dot(S.row(i)) : G.row(i).dot(T.row(j));
      dl[e] = da;
      seg[static_cast<std::size_t>(i)] += alpha[e] * da;
      if (i == j) {
        dS.row(i) += alpha[e] * G.row(i);
      } else {
        dT.row(j) += alpha[e] * G.row(i);
      }
    }
    Eigen::RowVectorXd z(h), dz(h);
    for (std::size_t e = 0; e < ne; ++e) {
      const Index i = g.dst[e], j = g.src[e];
      const double d = alpha[e] * (dl[e] - seg[static_cast<std::size_t>(i)]);
      if (d == 0.0) continue;
      gatv2_pre_activation(S, T, TE, g, e, z);
      for (Index c = 0; c < h; ++c) {
        const bool pos = z[c] > 0;
        dA[c] += d * (pos ? z[c] : slope * z[c]);
        dz[c] = d * a[c] * (pos ? 1.0 : slope);
      }
      dS.row(i) += dz;
      dT.row(j) += dz;
      for (Index k = 0; k < de; ++k) {
        const double f = EF(static_cast<Index>(e), k);
        if (f != 0.0) dTE.row(k) += f * dz;
      }
    }
    accumulate(node, 0, dS);
    accumulate(node, 1, dT);
    accumulate(node, 2, dTE);
    accumulate(node, 3, dA.transpose());
  });
}

}  // namespace detail

/// One single-head GATv2 layer:
///   x_i' = a_ii Ts x_i + sum_j a_ij Tt x_j
///   a_ij = softmax_j( a . LeakyReLU(Ts x_i + Tt x_j + Te e_ij) ),
/// with the softmax taken over N(i) and i itself. Weights act on row
/// vectors, so Ts is d_in x d_hid.
struct Gatv2Layer {
  Tensor theta_s;
  Tensor theta_t;
  Tensor theta_e;
  Tensor att;  // d_hid x 1
  double leaky_slope = 0.2;

  static Gatv2Layer init(Index d_in, Index d_hid, Index d_edge, std::mt19937_64& rng,
                         double slope = 0.2) {
    Gatv2Layer l;
    l.theta_s = Tensor::parameter(glorot(d_in, d_hid, rng));
    l.theta_t = Tensor::parameter(glorot(d_in, d_hid, rng));
    l.theta_e = Tensor::parameter(glorot(d_edge, d_hid, rng));
    l.att = Tensor::parameter(glorot(d_hid, 1, rng));
    l.leaky_slope = slope;
    return l;
  }

  [[nodiscard]] Index d_in() const { return theta_s.rows(); }
  [[nodiscard]] Index d_hid() const { return theta_s.cols(); }

  /// `alpha_out`, when given, receives the attention coefficient of every
  /// directed edge in GraphIndex order.
  Tensor forward(const Tensor& x, const GraphIndex& g, std::vector<double>* alpha_out = nullptr) const {
    if (x.cols() != d_in()) throw ShapeMismatch("gatv2: feature width does not match layer");
    if (x.rows() != g.n_nodes) throw ShapeMismatch("gatv2: node count does not match graph");
    if (g.edge_features.cols() != theta_e.rows()) throw ShapeMismatch("gatv2: edge feature width");
    return detail::gatv2_aggregate(matmul(x, theta_s), matmul(x, theta_t), theta_e, att, g, leaky_slope,
                                   alpha_out);
  }

  void collect(const std::string& prefix, std::vector<NamedTensor>& out) const {
    out.push_back({prefix + ".theta_s", theta_s});
    out.push_back({prefix + ".theta_t", theta_t});
    out.push_back({prefix + ".theta_e", theta_e});
    out.push_back({prefix + ".att", att});
  }
};

/// Softmax-gated sum over the nodes of each graph: score_i = x_i . gate.
/// `seg[i]` names the graph of node i; one output row per graph.
inline Tensor global_attention_pool(const Tensor& x, const Tensor& gate, const std::vector<Index>& seg,
                                    Index n_graphs) {
  if (x.rows() < 1) throw ShapeMismatch("global_attention_pool: empty graph");
  const Tensor w = segment_softmax(matmul(x, gate), seg, n_graphs);
  return segment_weighted_sum(w, x, seg, n_graphs);
}

inline Tensor global_attention_pool(const Tensor& x, const Tensor& gate) {
  return global_attention_pool(x, gate, std::vector<Index>(static_cast<std::size_t>(x.rows()), 0), 1);
}

struct NetConfig {
  Index actor_features = 7;
  Index critic_features = 3;
  Index edge_features = 3;
  Index hidden = 64;
  int layers = 3;
  double leaky_slope = 0.2;
  friend bool operator==(const NetConfig&, const NetConfig&) = default;
};

namespace detail {

inline std::vector<Gatv2Layer> make_stack(Index d_in, const NetConfig& cfg, std::mt19937_64& rng) {
  std::vector<Gatv2Layer> ls;
  for (int i = 0; i < cfg.layers; ++i) {
    ls.push_back(Gatv2Layer::init(i == 0 ? d_in : cfg.hidden, cfg.hidden, cfg.edge_features, rng,
                                  cfg.leaky_slope));
  }
  return ls;
}

/// Runs the stack with LeakyReLU between consecutive layers.
inline Tensor run_stack(const std::vector<Gatv2Layer>& ls, Tensor x, const GraphIndex& g,
                        std::vector<std::vector<double>>* alphas) {
  for (std::size_t i = 0; i < ls.size(); ++i) {
    std::vector<double> a;
    x = ls[i].forward(x, g, alphas ? &a : nullptr);
    if (alphas) alphas->push_back(std::move(a));
    if (i + 1 < ls.size()) x = leaky_relu(x, ls[i].leaky_slope);
  }
  return x;
}

}  // namespace detail

/// Policy network: GATv2 stack, then a linear logit per action node and a
/// softmax over the action nodes of each graph.
struct ActorNet {
  std::vector<Gatv2Layer> layers;
  Tensor head_w;  // hidden x 1

  static ActorNet init(const NetConfig& cfg, std::mt19937_64& rng) {
    ActorNet a;
    a.layers = detail::make_stack(cfg.actor_features, cfg, rng);
    a.head_w = Tensor::parameter(glorot(cfg.hidden, 1, rng));
    return a;
  }

  /// Log-probabilities, one row per entry of `action_nodes`, normalized
  /// within each group of `action_seg`.
  Tensor log_probs(const Mat& features, const GraphIndex& g, const std::vector<Index>& action_nodes,
                   const std::vector<Index>& action_seg, Index n_graphs,
                   std::vector<std::vector<double>>* alphas = nullptr) const {
    if (action_nodes.empty()) throw ShapeMismatch("actor: no action nodes");
    const Tensor h = detail::run_stack(layers, Tensor::constant(features), g, alphas);
    const Tensor logits = matmul(gather_rows(h, action_nodes), head_w);
    return segment_log_softmax(logits, action_seg, n_graphs);
  }

  Tensor log_probs(const Mat& features, const GraphIndex& g, const std::vector<Index>& action_nodes,
                   std::vector<std::vector<double>>* alphas = nullptr) const {
    return log_probs(features, g, action_nodes, std::vector<Index>(action_nodes.size(), 0), 1, alphas);
  }

  [[nodiscard]] std::vector<NamedTensor> parameters() const {
    std::vector<NamedTensor> out;
    for (std::size_t i = 0; i < layers.size(); ++i) layers[i].collect("actor.gat" + std::to_string(i), out);
    out.push_back({"actor.head_w", head_w});
    return out;
  }
};

/// Value network: GATv2 stack, global attention pooling, linear output.
struct CriticNet {
  std::vector<Gatv2Layer> layers;
  Tensor gate;   // hidden x 1
  Tensor out_w;  // hidden x 1
  Tensor out_b;  // 1 x 1

  static CriticNet init(const NetConfig& cfg, std::mt19937_64& rng) {
    CriticNet c;
    c.layers = detail::make_stack(cfg.critic_features, cfg, rng);
    c.gate = Tensor::parameter(glorot(cfg.hidden, 1, rng));
    c.out_w = Tensor::parameter(glorot(cfg.hidden, 1, rng));
    c.out_b = Tensor::parameter(Mat::Zero(1, 1));
    return c;
  }

  /// One value per graph; `node_seg[i]` is the graph of node i.
  Tensor values(const Mat& features, const GraphIndex& g, const std::vector<Index>& node_seg,
                Index n_graphs) const {
    const Tensor h = detail::run_stack(layers, Tensor::constant(features), g, nullptr);
    return add_row(matmul(global_attention_pool(h, gate, node_seg, n_graphs), out_w), out_b);
  }

  Tensor value(const Mat& features, const GraphIndex& g) const {
    return values(features, g, std::vector<Index>(static_cast<std::size_t>(features.rows()), 0), 1);
  }

  [[nodiscard]] std::vector<NamedTensor> parameters() const {
    std::vector<NamedTensor> out;
    for (std::size_t i = 0; i < layers.size(); ++i) layers[i].collect("critic.gat" + std::to_string(i), out);
    out.push_back({"critic.gate", gate});
    out.push_back({"critic.out_w", out_w});
    out.push_back({"critic.out_b", out_b});
    return out;
  }
};

/// Adam with bias correction.
class Adam {
 public:
  explicit Adam(std::vector<Tensor> params, double lr, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : params_(std::move(params)), lr_(lr), b1_(beta1), b2_(beta2), eps_(eps) {
    for (const auto& p : params_) {
      m_.push_back(Mat::Zero(p.rows(), p.cols()));
      v_.push_back(Mat::Zero(p.rows(), p.cols()));
    }
  }

  void zero_grad() {
    for (auto& p : params_) p.zero_grad();
  }

  void step() {
    ++t_;
    const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params_.size(); ++i) {
      const Mat g = params_[i].grad();
      m_[i] = b1_ * m_[i] + (1.0 - b1_) * g;
      v_[i] = b2_ * v_[i] + (1.0 - b2_) * g.cwiseProduct(g);
      Mat& w = params_[i].mutable_value();
      w.array() -= lr_ * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps_);
    }
  }

  [[nodiscard]] long steps() const { return t_; }
  void set_lr(double lr) { lr_ = lr; }

 private:
  std::vector<Tensor> params_;
  std::vector<Mat> m_, v_;
  double lr_, b1_, b2_, eps_;
  long t_ = 0;
};

/// Rescales gradients so their global L2 norm is at most `max_norm`.
/// Returns the norm before clipping.
inline double clip_grad_norm(const std::vector<Tensor>& params, double max_norm) {
  double sq = 0;
  for (const auto& p : params) sq += p.grad().squaredNorm();
  const double norm = std::sqrt(sq);
  if (max_norm > 0 && norm > max_norm) {
    const double s = max_norm / (norm + 1e-12);
    for (const auto& p : params) {
      if (p.node()->grad.size() != 0) p.node()->grad *= s;
    }
  }
  return norm;
}

}  // namespace zxrl::nn
