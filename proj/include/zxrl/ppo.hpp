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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "zxrl/checkpoint.hpp"
#include "zxrl/env.hpp"
#include "zxrl/nn.hpp"
#include "zxrl/peephole.hpp"
#include "zxrl/simplify.hpp"

namespace zxrl {

class NonFiniteLoss : public Error {
 public:
  using Error::Error;
};

struct PpoConfig {
  int num_steps = 512;
  int num_envs = 8;
  double learning_rate = 2e-4;
  int num_epochs = 8;
  int minibatch_size = 512;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double vf_coef = 0.5;
  double entropy_coef = 0.01;
  double clip_epsilon = 0.1;
  long total_steps = 200000;
  double grad_clip_norm = 0.5;  // 0 disables
  bool normalize_advantages = true;
  std::uint64_t seed = 0;
  int workers = 1;       // rollout threads; results do not depend on it
  int chunk_size = 8;    // graphs per forward pass during optimization

  void validate() const {
    if (num_steps < 1 || num_envs < 1 || num_epochs < 1 || minibatch_size < 1 || total_steps < 1) {
      throw Error("ppo: sizes must be positive");
    }
    if (!(learning_rate > 0) || !(gamma > 0) || !(gae_lambda > 0) || !(vf_coef > 0) || !(clip_epsilon > 0)) {
      throw Error("ppo: coefficients must be positive");
    }
    if (entropy_coef < 0 || grad_clip_norm < 0) throw Error("ppo: entropy_coef and grad_clip_norm must be >= 0");
    if ((static_cast<long>(num_steps) * num_envs) % minibatch_size != 0) {
      throw Error("ppo: minibatch_size must divide num_steps * num_envs");
    }
    if (workers < 1 || chunk_size < 1) throw Error("ppo: workers and chunk_size must be positive");
  }

  [[nodiscard]] long batch_size() const { return static_cast<long>(num_steps) * num_envs; }
  [[nodiscard]] long num_updates() const { return std::max(1L, total_steps / batch_size()); }
  friend bool operator==(const PpoConfig&, const PpoConfig&) = default;
};

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> targets;
};

/// `values` has one entry more than `rewards`: the last one bootstraps the
/// state after the final step. dones[t] marks that the episode ended with
/// step t.
[[nodiscard]] inline GaeResult compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                                           const std::vector<bool>& dones, double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n + 1 || dones.size() != n) throw Error("compute_gae: length mismatch");
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.targets.assign(n, 0.0);
  double next = 0;
  for (std::size_t k = n; k-- > 0;) {
    const double live = dones[k] ? 0.0 : 1.0;
    const double delta = rewards[k] + gamma * values[k + 1] * live - values[k];
    next = delta + gamma * lambda * live * next;
    out.advantages[k] = next;
    out.targets[k] = next + values[k];
  }
  return out;
}

/// One collected step.
struct Transition {
  std::shared_ptr<const PolicyGraph> obs;
  int action = 0;  // index into obs->actions
  double logp_old = 0;
  double value_old = 0;
  double reward = 0;
  bool done = false;
  double advantage = 0;
  double target = 0;
};

namespace detail {

/// max(-rho A, -clip(rho, 1-eps, 1+eps) A) per sample, rho = exp(logp - logp_old).
inline nn::Tensor clipped_actor_loss(const nn::Tensor& logp, const nn::Mat& logp_old, const nn::Mat& adv, double eps) {
  const nn::Tensor rho = nn::exp(nn::sub(logp, nn::Tensor::constant(logp_old)));
  const nn::Tensor a = nn::Tensor::constant(adv);
  return nn::maximum(nn::scale(nn::mul(rho, a), -1.0), nn::scale(nn::mul(nn::clamp(rho, 1 - eps, 1 + eps), a), -1.0));
}

/// max((V - T)^2, (V_old + clip(V - V_old, -eps, eps) - T)^2) per sample.
inline nn::Tensor clipped_value_loss(const nn::Tensor& v, const nn::Mat& v_old, const nn::Mat& target, double eps) {
  const nn::Tensor old = nn::Tensor::constant(v_old);
  const nn::Tensor t = nn::Tensor::constant(target);
  const nn::Tensor d1 = nn::sub(v, t);
  const nn::Tensor d2 = nn::sub(nn::add(old, nn::clamp(nn::sub(v, old), -eps, eps)), t);
  return nn::maximum(nn::mul(d1, d1), nn::mul(d2, d2));
}

/// Per-state entropy -sum p log p of grouped log-probabilities.
inline nn::Tensor entropy_per_state(const nn::Tensor& logp, const std::vector<nn::Index>& seg, nn::Index n) {
  return nn::scale(nn::segment_weighted_sum(nn::exp(logp), logp, seg, n), -1.0);
}

}  // namespace detail

struct LossTerms {
  nn::Tensor actor;    // weighted sums; means when weight = 1 / batch size
  nn::Tensor critic;
  nn::Tensor entropy;
  nn::Tensor total;
  int clipped = 0;     // samples with |rho - 1| > eps
};

/// Losses over `batch` with `adv` the (possibly normalized) advantages:
///   total = actor + c1 critic - c2 entropy,
/// each term summed over the batch and multiplied by `weight`.
[[nodiscard]] inline LossTerms ppo_losses(const nn::ActorNet& actor, const nn::CriticNet& critic,
                                          const std::vector<const Transition*>& batch, const std::vector<double>& adv,
                                          const PpoConfig& cfg, double weight) {
  if (batch.empty() || adv.size() != batch.size()) throw Error("ppo_losses: bad batch");
  std::vector<const PolicyGraph*> graphs;
  for (const Transition* t : batch) graphs.push_back(t->obs.get());
  const PolicyBatch pb = make_batch(graphs);
  const nn::Index n = pb.n_graphs;
  const nn::Tensor logp_all = actor.log_probs(pb.actor_features, pb.actor_graph, pb.action_nodes, pb.action_seg, n);
  std::vector<nn::Index> chosen;
  nn::Mat logp_old(n, 1), a(n, 1), v_old(n, 1), target(n, 1);
  for (nn::Index k = 0; k < n; ++k) {
    const Transition& t = *batch[static_cast<std::size_t>(k)];
    chosen.push_back(static_cast<nn::Index>(pb.action_offset[static_cast<std::size_t>(k)]) + t.action);
    logp_old(k, 0) = t.logp_old;
    a(k, 0) = adv[static_cast<std::size_t>(k)];
    v_old(k, 0) = t.value_old;
    target(k, 0) = t.target;
  }
  const nn::Tensor logp = nn::gather_rows(logp_all, chosen);
  const nn::Tensor v = critic.values(pb.critic_features, pb.critic_graph, pb.critic_seg, n);
  LossTerms out;
  out.actor = nn::scale(nn::sum(detail::clipped_actor_loss(logp, logp_old, a, cfg.clip_epsilon)), weight);
  out.critic = nn::scale(nn::sum(detail::clipped_value_loss(v, v_old, target, cfg.clip_epsilon)), 0.5 * weight);
  out.entropy = nn::scale(nn::sum(detail::entropy_per_state(logp_all, pb.action_seg, n)), weight);
  out.total = nn::sub(nn::add(out.actor, nn::scale(out.critic, cfg.vf_coef)), nn::scale(out.entropy, cfg.entropy_coef));
  for (nn::Index k = 0; k < n; ++k) {
    if (std::abs(std::exp(logp.value()(k, 0) - logp_old(k, 0)) - 1.0) > cfg.clip_epsilon) ++out.clipped;
  }
  return out;
}

struct UpdateMetrics {
  long update = 0;
  long step = 0;
  double mean_return = 0;  // over episodes finished during this update's rollout
  double mean_length = 0;
  int episodes = 0;
  double l_actor = 0;
  double l_critic = 0;
  double entropy = 0;
  double clip_frac = 0;
  double grad_norm = 0;
  friend bool operator==(const UpdateMetrics&, const UpdateMetrics&) = default;
};

struct EpisodeRecord {
  long index = 0;
  int env = 0;
  long end_step = 0;
  double ret = 0;  // sum of normalized rewards
  int length = 0;
  int gates_initial = 0;
  int gates_final = 0;
  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<UpdateMetrics> metrics;
  std::vector<EpisodeRecord> episodes;
};

struct TrainHooks {
  std::function<void(const UpdateMetrics&, const Checkpoint&)> on_update;
  std::function<void(const EpisodeRecord&)> on_episode;
};

namespace detail {

struct Policy {
  const nn::ActorNet* actor;
  const nn::CriticNet* critic;

  /// Action probabilities and value for one observation.
  std::pair<std::vector<double>, double> evaluate(const PolicyGraph& g) const {
    nn::NoGradGuard guard;
    const nn::Tensor lp = actor->log_probs(g.actor_features, g.actor_graph, g.action_nodes());
    std::vector<double> logp(lp.value().data(), lp.value().data() + lp.size());
    const double v = g.num_spider_nodes() > 0 ? critic->value(g.critic_features, g.critic_graph).item() : 0.0;
    return {std::move(logp), v};
  }
};

inline int sample_index(const std::vector<double>& logp, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng), acc = 0;
  for (std::size_t i = 0; i < logp.size(); ++i) {
    acc += std::exp(logp[i]);
    if (r < acc) return static_cast<int>(i);
  }
  return static_cast<int>(logp.size()) - 1;
}

inline int argmax_index(const std::vector<double>& logp) {
  return static_cast<int>(std::max_element(logp.begin(), logp.end()) - logp.begin());
}

/// Runs `fn(i)` for i in [0, n) on up to `workers` threads.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// PPO with GAE over `num_envs` environments. Each environment draws its
/// circuits and its sampled actions from its own generator, so results do
/// not depend on the number of rollout workers.
inline TrainResult train(const PpoConfig& cfg, const EnvConfig& env_cfg, const nn::NetConfig& net = {},
                         const TrainHooks& hooks = {}) {
  cfg.validate();
  env_cfg.validate();
  TrainResult res;
  res.checkpoint = Checkpoint::fresh(net, cfg.seed);
  Checkpoint& ck = res.checkpoint;
  std::vector<nn::Tensor> params;
  for (const auto& p : ck.parameters()) params.push_back(p.tensor);
  nn::Adam opt(params, cfg.learning_rate);

  EnvConfig ec = env_cfg;
  ec.seed = cfg.seed;
  VecEnv envs(ec, cfg.num_envs);
  std::vector<std::mt19937_64> action_rngs;
  for (int i = 0; i < cfg.num_envs; ++i) action_rngs.emplace_back(cfg.seed ^ (0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(i)));
  std::mt19937_64 shuffle_rng(cfg.seed + 0x5bd1e995ULL);
  std::vector<double> running_return(static_cast<std::size_t>(cfg.num_envs), 0.0);
  std::vector<int> running_length(static_cast<std::size_t>(cfg.num_envs), 0);
  long step = 0;
  long episode_index = 0;

  for (long update = 0; update < cfg.num_updates(); ++update) {
    // -- collection on a fixed parameter snapshot
    const detail::Policy policy{&ck.actor, &ck.critic};
    std::vector<std::vector<Transition>> traj(static_cast<std::size_t>(cfg.num_envs));
    std::vector<double> bootstrap(static_cast<std::size_t>(cfg.num_envs), 0.0);
    std::vector<std::vector<EpisodeRecord>> finished(static_cast<std::size_t>(cfg.num_envs));
    detail::parallel_for(cfg.num_envs, cfg.workers, [&](int i) {
      const auto ui = static_cast<std::size_t>(i);
      auto& out = traj[ui];
      for (int t = 0; t < cfg.num_steps; ++t) {
        auto obs = std::make_shared<const PolicyGraph>(envs.current(i).observation);
        const auto [logp, value] = policy.evaluate(*obs);
        const int a = detail::sample_index(logp, action_rngs[ui]);
        const StepResult r = envs.step(i, obs->action_node(static_cast<std::size_t>(a)));
        Transition tr;
        tr.obs = obs;
        tr.action = a;
        tr.logp_old = logp[static_cast<std::size_t>(a)];
        tr.value_old = value;
        tr.reward = r.reward;
        tr.done = r.done;
        out.push_back(std::move(tr));
        running_return[ui] += r.reward;
        ++running_length[ui];
        if (r.done) {
          EpisodeRecord e;
          e.env = i;
          e.end_step = t;
          e.ret = running_return[ui];
          e.length = running_length[ui];
          e.gates_initial = r.info.gates_initial;
          e.gates_final = r.info.gates_now;
          finished[ui].push_back(e);
          running_return[ui] = 0;
          running_length[ui] = 0;
        }
      }
      bootstrap[ui] = policy.evaluate(envs.current(i).observation).second;
    });
    step += cfg.batch_size();

    // Episodes are logged in (step within rollout, env) order.
    std::vector<EpisodeRecord> eps;
    for (const auto& f : finished) eps.insert(eps.end(), f.begin(), f.end());
    std::stable_sort(eps.begin(), eps.end(), [](const EpisodeRecord& a, const EpisodeRecord& b) {
      return a.end_step != b.end_step ? a.end_step < b.end_step : a.env < b.env;
    });
    UpdateMetrics m;
    m.update = update;
    m.step = step;
    for (auto& e : eps) {
      e.index = episode_index++;
      e.end_step = step - cfg.batch_size() + (e.end_step + 1) * cfg.num_envs;
      m.mean_return += e.ret;
      m.mean_length += e.length;
      if (hooks.on_episode) hooks.on_episode(e);
      res.episodes.push_back(e);
    }
    m.episodes = static_cast<int>(eps.size());
    if (m.episodes > 0) {
      m.mean_return /= m.episodes;
      m.mean_length /= m.episodes;
    }

    // -- advantages
    std::vector<const Transition*> flat;
    for (int i = 0; i < cfg.num_envs; ++i) {
      auto& tr = traj[static_cast<std::size_t>(i)];
      std::vector<double> r, v;
      std::vector<bool> d;
      for (const auto& x : tr) {
        r.push_back(x.reward);
        v.push_back(x.value_old);
        d.push_back(x.done);
      }
      v.push_back(bootstrap[static_cast<std::size_t>(i)]);
      const GaeResult g = compute_gae(r, v, d, cfg.gamma, cfg.gae_lambda);
      for (std::size_t k = 0; k < tr.size(); ++k) {
        tr[k].advantage = g.advantages[k];
        tr[k].target = g.targets[k];
        flat.push_back(&tr[k]);
      }
    }

    // -- optimization
    std::vector<std::size_t> order(flat.size());
    double sum_actor = 0, sum_critic = 0, sum_entropy = 0, sum_norm = 0;
    long clipped = 0, seen = 0, n_mb = 0;
    for (int epoch = 0; epoch < cfg.num_epochs; ++epoch) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::shuffle(order.begin(), order.end(), shuffle_rng);
      for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.minibatch_size)) {
        const std::size_t mb = static_cast<std::size_t>(cfg.minibatch_size);
        std::vector<double> adv(mb);
        for (std::size_t k = 0; k < mb; ++k) adv[k] = flat[order[start + k]]->advantage;
        if (cfg.normalize_advantages && mb > 1) {
          const double mean = std::accumulate(adv.begin(), adv.end(), 0.0) / static_cast<double>(mb);
          double var = 0;
          for (double x : adv) var += (x - mean) * (x - mean);
          const double sd = std::sqrt(var / static_cast<double>(mb));
          for (double& x : adv) x = (x - mean) / (sd + 1e-8);
        }
        opt.zero_grad();
        const double w = 1.0 / static_cast<double>(mb);
        for (std::size_t c = 0; c < mb; c += static_cast<std::size_t>(cfg.chunk_size)) {
          const std::size_t end = std::min(mb, c + static_cast<std::size_t>(cfg.chunk_size));
          std::vector<const Transition*> chunk;
          std::vector<double> chunk_adv;
          for (std::size_t k = c; k < end; ++k) {
            chunk.push_back(flat[order[start + k]]);
            chunk_adv.push_back(adv[k]);
          }
          const LossTerms lt = ppo_losses(ck.actor, ck.critic, chunk, chunk_adv, cfg, w);
          if (!std::isfinite(lt.total.item())) {
            std::ostringstream os;
            os << "non-finite loss at update " << update << " epoch " << epoch << ": actor " << lt.actor.item()
               << " critic " << lt.critic.item() << " entropy " << lt.entropy.item();
            throw NonFiniteLoss(os.str());
          }
          lt.total.backward();
          sum_actor += lt.actor.item();
          sum_critic += lt.critic.item();
          sum_entropy += lt.entropy.item();
          clipped += lt.clipped;
          seen += static_cast<long>(chunk.size());
        }
        sum_norm += nn::clip_grad_norm(params, cfg.grad_clip_norm);
        opt.step();
        ++n_mb;
      }
    }
    m.l_actor = sum_actor / static_cast<double>(n_mb);
    m.l_critic = sum_critic / static_cast<double>(n_mb);
    m.entropy = sum_entropy / static_cast<double>(n_mb);
    m.clip_frac = static_cast<double>(clipped) / static_cast<double>(seen);
    m.grad_norm = sum_norm / static_cast<double>(n_mb);
    res.metrics.push_back(m);
    if (hooks.on_update) hooks.on_update(m, ck);
  }
  return res;
}

// -- evaluation ----------------------------------------------------------------

enum class EvalMode : std::uint8_t { Greedy, Sample, Random, Stop };

inline EvalMode eval_mode_from_name(const std::string& s) {
  if (s == "greedy") return EvalMode::Greedy;
  if (s == "sample") return EvalMode::Sample;
  if (s == "random") return EvalMode::Random;
  if (s == "stop") return EvalMode::Stop;
  throw Error("unknown eval mode '" + s + "'");
}

struct EvalRow {
  long episode = 0;
  std::uint64_t seed = 0;  // circuit seed
  int initial_total = 0;   // extraction right after graph-like conversion
  int steps = 0;
  int agent_total = 0;
  int agent_2q = 0;
  int agent_pp_total = 0;
  int agent_pp_2q = 0;
  int baseline_total = 0;
  int baseline_2q = 0;
  int baseline_pp_total = 0;
  int baseline_pp_2q = 0;
  double agent_ms = 0;     // wall clock, kept out of the deterministic report
  double baseline_ms = 0;
};

struct EvalSummary {
  long episodes = 0;
  double agent_mean = 0;
  double agent_2q_mean = 0;
  double baseline_mean = 0;
  double baseline_2q_mean = 0;
  double initial_mean = 0;
  double win = 0;  // agent strictly fewer gates than the baseline
  double loss = 0;
  double tie = 0;
};

/// Circuit seeds for evaluation episodes, drawn sequentially from `seed`.
inline std::vector<std::uint64_t> episode_seeds(std::uint64_t seed, long n) {
  std::mt19937_64 rng(seed ^ 0xa0761d6478bd642fULL);
  std::vector<std::uint64_t> out;
  for (long i = 0; i < n; ++i) out.push_back(rng());
  return out;
}

/// Optimizes `c` with a policy and returns the final diagram; `steps`
/// receives the episode length. `actor` may be null for Random and Stop.
inline ZxDiagram agent_optimize(const nn::ActorNet* actor, const Circuit& c, const EnvConfig& env_cfg, EvalMode mode,
                                std::uint64_t action_seed, int* steps = nullptr) {
  Env env(env_cfg);
  StepResult r = env.reset(c);
  std::mt19937_64 rng(action_seed);
  while (!r.done) {
    const PolicyGraph& g = r.observation;
    int a = 0;
    switch (mode) {
      case EvalMode::Stop: a = static_cast<int>(g.actions.size()) - 1; break;
      case EvalMode::Random: {
        std::uniform_int_distribution<int> u(0, static_cast<int>(g.actions.size()) - 1);
        a = u(rng);
        break;
      }
      case EvalMode::Greedy:
      case EvalMode::Sample: {
        if (!actor) throw Error("agent modes need a checkpoint");
        nn::NoGradGuard guard;
        const nn::Tensor lp = actor->log_probs(g.actor_features, g.actor_graph, g.action_nodes());
        const std::vector<double> logp(lp.value().data(), lp.value().data() + lp.size());
        a = mode == EvalMode::Greedy ? detail::argmax_index(logp) : detail::sample_index(logp, rng);
        break;
      }
    }
    r = env.step(g.action_node(static_cast<std::size_t>(a)));
  }
  if (steps) *steps = env.steps();
  return env.diagram();
}

/// Runs one agent episode on `c` and the reduce-all baseline on the same
/// circuit. `actor` may be null for the Random and Stop modes.
inline EvalRow evaluate_circuit(const nn::ActorNet* actor, const Circuit& c, const EnvConfig& env_cfg,
                                EvalMode mode, std::uint64_t action_seed) {
  EvalRow row;
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  row.initial_total = static_cast<int>(extract(to_graph_like(circuit_to_diagram(c))).gates.size());
  const ZxDiagram final_diagram = agent_optimize(actor, c, env_cfg, mode, action_seed, &row.steps);
  const Circuit agent = extract(final_diagram);
  const auto t1 = clock::now();
  const Circuit base = extract(reduce_all(to_graph_like(circuit_to_diagram(c))));
  const auto t2 = clock::now();
  const GateCount ga = count_gates(agent), gb = count_gates(base);
  const GateCount pa = count_gates(peephole_optimize(agent)), pb = count_gates(peephole_optimize(base));
  row.agent_total = static_cast<int>(ga.total);
  row.agent_2q = static_cast<int>(ga.two_qubit);
  row.agent_pp_total = static_cast<int>(pa.total);
  row.agent_pp_2q = static_cast<int>(pa.two_qubit);
  row.baseline_total = static_cast<int>(gb.total);
  row.baseline_2q = static_cast<int>(gb.two_qubit);
  row.baseline_pp_total = static_cast<int>(pb.total);
  row.baseline_pp_2q = static_cast<int>(pb.two_qubit);
  row.agent_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  row.baseline_ms = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return row;
}

/// `n_episodes` random circuits from `env_cfg`; rows come back in episode
/// order whatever the number of workers.
inline std::vector<EvalRow> evaluate(const nn::ActorNet* actor, const EnvConfig& env_cfg, long n_episodes,
                                     EvalMode mode, std::uint64_t seed, int workers = 1) {
  env_cfg.validate();
  const auto seeds = episode_seeds(seed, n_episodes);
  std::vector<EvalRow> rows(static_cast<std::size_t>(n_episodes));
  detail::parallel_for(static_cast<int>(n_episodes), workers, [&](int k) {
    const auto uk = static_cast<std::size_t>(k);
    const Circuit c = random_circuit(env_cfg.n_qubits, env_cfg.n_gates, env_cfg.gate_set, seeds[uk]);
    rows[uk] = evaluate_circuit(actor, c, env_cfg, mode, seeds[uk] ^ 0x2545f4914f6cdd1dULL);
    rows[uk].episode = k;
    rows[uk].seed = seeds[uk];
  });
  return rows;
}

inline EvalSummary summarize(const std::vector<EvalRow>& rows) {
  EvalSummary s;
  s.episodes = static_cast<long>(rows.size());
  if (rows.empty()) return s;
  for (const EvalRow& r : rows) {
    s.agent_mean += r.agent_total;
    s.agent_2q_mean += r.agent_2q;
    s.baseline_mean += r.baseline_total;
    s.baseline_2q_mean += r.baseline_2q;
    s.initial_mean += r.initial_total;
    if (r.agent_total < r.baseline_total) {
      s.win += 1;
    } else if (r.agent_total > r.baseline_total) {
      s.loss += 1;
    } else {
      s.tie += 1;
    }
  }
  const double n = static_cast<double>(rows.size());
  s.agent_mean /= n;
  s.agent_2q_mean /= n;
  s.baseline_mean /= n;
  s.baseline_2q_mean /= n;
  s.initial_mean /= n;
  s.win /= n;
  s.loss /= n;
  s.tie /= n;
  return s;
}

}  // namespace zxrl
