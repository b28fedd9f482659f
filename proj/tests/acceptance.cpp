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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gradcheck.hpp"
#include "test_util.hpp"
#include "zxrl/zxrl.hpp"

namespace fs = std::filesystem;
using namespace zxrl;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << x;
  return os.str();
}

// 1 ---------------------------------------------------------------------------

Outcome semantic_preservation() {
  std::mt19937_64 rng(101);
  const auto t0 = Clock::now();
  int ok = 0;
  for (int i = 0; i < 500; ++i) {
    const int q = std::uniform_int_distribution<int>(3, 5)(rng);
    const int g = std::uniform_int_distribution<int>(10, 40)(rng);
    const int k = std::uniform_int_distribution<int>(0, 15)(rng);
    const Circuit c = random_circuit(q, g, GateSet::Clifford, rng());
    try {
      const Circuit e = extract(testing::random_rewrites(testing::graph_like_of(c), k, rng()));
      ok += equivalent_clifford(c, e);
    } catch (const Error&) {
    }
  }
  const double secs = seconds_since(t0);
  int ok_t = 0;
  for (int i = 0; i < 200; ++i) {
    const int q = std::uniform_int_distribution<int>(2, 4)(rng);
    const int g = std::uniform_int_distribution<int>(10, 40)(rng);
    const int k = std::uniform_int_distribution<int>(0, 15)(rng);
    const Circuit c = random_circuit(q, g, GateSet::CliffordT, rng());
    try {
      const Circuit e = extract(testing::random_rewrites(testing::graph_like_of(c), k, rng(), true));
      ok_t += equivalent_dense(c, e, 1e-9);
    } catch (const Error&) {
    }
  }
  return {ok == 500 && ok_t == 200 && secs < 120,
          "Clifford " + std::to_string(ok) + "/500 tableau-equivalent in " + fmt(secs, 3) +
              " s (< 120 s); Clifford+T " + std::to_string(ok_t) + "/200 dense-equivalent (tol 1e-9)"};
}

// 2 ---------------------------------------------------------------------------

Outcome clifford_terminal_form() {
  std::mt19937_64 rng(202);
  int clean = 0;
  std::size_t worst = 0;
  for (int i = 0; i < 200; ++i) {
    const int q = std::uniform_int_distribution<int>(5, 20)(rng);
    const int g = std::uniform_int_distribution<int>(q, 20 * q)(rng);
    const ZxDiagram d = reduce_all(testing::graph_like_of(random_circuit(q, g, GateSet::Clifford, rng())));
    const std::size_t interior = d.num_interior_spiders();
    worst = std::max(worst, interior);
    clean += interior == 0;
  }
  return {clean == 200, std::to_string(clean) + "/200 reduced diagrams with 0 interior spiders (max " +
                            std::to_string(worst) + "; 100% required)"};
}

// 3 ---------------------------------------------------------------------------

Outcome saturation() {
  const Sweep s = gate_sweep(10, {50, 100, 200, 400}, GateSet::Clifford, 100, 303);
  const double m200 = s.rows[2].methods[2].total, m400 = s.rows[3].methods[2].total;
  const double rel = std::abs(m400 - m200) / m200;
  std::ostringstream os;
  os << "10q reduce-all means";
  for (const auto& r : s.rows) os << " " << r.gates << ":" << fmt(r.methods[2].total, 5);
  os << "; |m400-m200|/m200 = " << fmt(rel, 3) << " (< 0.10); m400 < 400";
  return {rel < 0.10 && m400 < 400, os.str()};
}

// 4 ---------------------------------------------------------------------------

std::vector<Transition> loss_batch(const Checkpoint& ck, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.3, 0.3), t(-2, 2);
  std::vector<Transition> out;
  for (int i = 0; i < n; ++i) {
    const Circuit c = random_circuit(3, 12, GateSet::Clifford, rng());
    const ZxDiagram d = testing::random_rewrites(testing::graph_like_of(c), i % 3, rng());
    auto pg = std::make_shared<const PolicyGraph>(build_policy_graph(d, enumerate_actions(d)));
    Transition tr;
    tr.obs = pg;
    tr.action = std::uniform_int_distribution<int>(0, static_cast<int>(pg->actions.size()) - 1)(rng);
    nn::NoGradGuard guard;
    tr.logp_old = ck.actor.log_probs(pg->actor_features, pg->actor_graph, pg->action_nodes()).value()(tr.action, 0) + u(rng);
    tr.value_old = ck.critic.value(pg->critic_features, pg->critic_graph).item() + u(rng);
    tr.target = t(rng);
    tr.advantage = t(rng);
    out.push_back(tr);
  }
  return out;
}

Outcome gradient_correctness() {
  const Checkpoint ck = Checkpoint::fresh(nn::NetConfig{}, 404);
  const ZxDiagram d = testing::random_rewrites(testing::graph_like_of(random_circuit(4, 20, GateSet::Clifford, 4)), 2, 4);
  const PolicyGraph g = build_policy_graph(d, enumerate_actions(d));
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  nn::Mat w(static_cast<nn::Index>(g.actions.size()), 1);
  for (nn::Index i = 0; i < w.rows(); ++i) w(i, 0) = nd(rng);

  constexpr double h = 1e-6;
  const auto actor_errs = testing::gradcheck(ck.actor.parameters(), [&] {
    return nn::sum(nn::mul(ck.actor.log_probs(g.actor_features, g.actor_graph, g.action_nodes()),
                           nn::Tensor::constant(w)));
  }, h);
  const auto critic_errs = testing::gradcheck(ck.critic.parameters(), [&] {
    return ck.critic.value(g.critic_features, g.critic_graph);
  }, h);

  const auto batch = loss_batch(ck, 8, 44);
  std::vector<const Transition*> ptrs;
  std::vector<double> adv;
  for (const auto& t : batch) {
    ptrs.push_back(&t);
    adv.push_back(t.advantage);
  }
  const PpoConfig cfg;
  const auto loss_errs = testing::gradcheck(ck.parameters(), [&] {
    return ppo_losses(ck.actor, ck.critic, ptrs, adv, cfg, 1.0 / 8).total;
  }, h);
  const double a = testing::worst(actor_errs), c = testing::worst(critic_errs), l = testing::worst(loss_errs);
  std::size_t n_params = 0;
  for (const auto& p : ck.parameters()) n_params += static_cast<std::size_t>(p.tensor.size());
  return {a < 1e-4 && c < 1e-4 && l < 1e-4,
          "max relative error actor " + fmt(a, 3) + ", critic " + fmt(c, 3) + ", PPO loss (8 samples) " + fmt(l, 3) +
              " over " + std::to_string(n_params) + " parameters (< 1e-4)"};
}

// 5 ---------------------------------------------------------------------------

Outcome gae_oracle() {
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> u(-3, 3), coef(0.0, 1.0);
  std::bernoulli_distribution ends(0.2);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 32)(rng);
    std::vector<double> r(n), v(n + 1);
    std::vector<bool> done(n);
    for (auto& x : r) x = u(rng);
    for (auto& x : v) x = u(rng);
    for (int i = 0; i < n; ++i) done[i] = ends(rng);
    const double gamma = coef(rng), lambda = coef(rng);
    const GaeResult got = compute_gae(r, v, done, gamma, lambda);
    for (int t = 0; t < n; ++t) {
      double want = 0, w = 1;
      for (int k = t; k < n; ++k) {
        want += w * (r[k] + (done[k] ? 0.0 : gamma * v[k + 1]) - v[k]);
        if (done[k]) break;
        w *= gamma * lambda;
      }
      worst = std::max(worst, std::abs(got.advantages[t] - want));
    }
  }
  return {worst < 1e-10, "max |recursive - nested sum| = " + fmt(worst, 3) + " over 100 sequences (< 1e-10)"};
}

// 6 ---------------------------------------------------------------------------

Outcome softmax_invariants() {
  const Checkpoint ck = Checkpoint::fresh(nn::NetConfig{}, 606);
  std::mt19937_64 rng(606);
  double att_err = 0, dist_err = 0;
  int outside = 0;
  for (int i = 0; i < 1000; ++i) {
    const int q = std::uniform_int_distribution<int>(2, 6)(rng);
    const int gates = std::uniform_int_distribution<int>(0, 40)(rng);
    const int k = std::uniform_int_distribution<int>(0, 8)(rng);
    const ZxDiagram d =
        testing::random_rewrites(testing::graph_like_of(random_circuit(q, gates, GateSet::Clifford, rng())), k, rng());
    const auto actions = enumerate_actions(d);
    const PolicyGraph g = build_policy_graph(d, actions);
    std::vector<std::vector<double>> alphas;
    nn::NoGradGuard guard;
    const nn::Mat lp = ck.actor.log_probs(g.actor_features, g.actor_graph, g.action_nodes(), &alphas).value();
    for (const auto& layer : alphas) {
      std::vector<double> per_node(static_cast<std::size_t>(g.actor_graph.n_nodes), 0.0);
      for (std::size_t e = 0; e < layer.size(); ++e) per_node[static_cast<std::size_t>(g.actor_graph.dst[e])] += layer[e];
      for (double s : per_node) att_err = std::max(att_err, std::abs(s - 1.0));
    }
    dist_err = std::max(dist_err, std::abs(lp.array().exp().sum() - 1.0));
    // Mass only on feasible actions: one entry per enumerated action, each applicable.
    if (lp.rows() != static_cast<nn::Index>(actions.size())) ++outside;
    for (const auto& a : actions) {
      if (a.tag != RuleTag::Stop && !is_applicable(d, a)) ++outside;
    }
  }
  return {att_err <= 1e-12 && dist_err <= 1e-12 && outside == 0,
          "1000 graphs: max |sum attention - 1| = " + fmt(att_err, 3) + ", max |sum pi - 1| = " + fmt(dist_err, 3) +
              " (<= 1e-12); infeasible support " + std::to_string(outside)};
}

// 7 ---------------------------------------------------------------------------

Outcome training_proxy() {
  const auto t0 = Clock::now();
  RunConfig rc;
  rc.ppo.seed = 707;
  rc.env.seed = 707;
  rc.env.n_qubits = 5;
  rc.env.n_gates = 25;
  rc.env.normalizer.entries[{5, 25}] = calibrate_normalizer(5, 25, GateSet::Clifford, 100, 0);
  const TrainResult r = train(rc.ppo, rc.env, rc.net);
  const double train_s = seconds_since(t0);
  const std::size_t n = r.episodes.size();
  double first = 0, last = 0;
  for (std::size_t i = 0; i < 50 && i < n; ++i) {
    first += r.episodes[i].ret;
    last += r.episodes[n - 1 - i].ret;
  }
  first /= 50;
  last /= 50;
  const EvalSummary agent = summarize(evaluate(&r.checkpoint.actor, rc.env, 200, EvalMode::Greedy, 7070));
  const EvalSummary random = summarize(evaluate(nullptr, rc.env, 200, EvalMode::Random, 7070));
  const double total_s = seconds_since(t0);
  const bool a = n >= 100 && last > first;
  const bool b = agent.agent_mean <= random.agent_mean && agent.agent_mean <= 1.10 * agent.baseline_mean;
  return {a && b && total_s <= 45 * 60,
          "(a) return first 50 " + fmt(first) + " -> last 50 " + fmt(last) + "; (b) agent " + fmt(agent.agent_mean) +
              " vs random " + fmt(random.agent_mean) + " and 1.10 x reduce-all " +
              fmt(1.10 * agent.baseline_mean) + " (reduce-all " + fmt(agent.baseline_mean) + "); " +
              fmt(train_s / 60, 3) + " min training, " + fmt(total_s / 60, 3) + " min total (<= 45)"};
}

// 8 ---------------------------------------------------------------------------

Outcome reward_telescoping() {
  EnvConfig cfg;
  cfg.n_qubits = 5;
  cfg.n_gates = 25;
  cfg.normalizer.entries[{5, 25}] = calibrate_normalizer(5, 25, GateSet::Clifford, 20, 1);
  const double norm = cfg.normalizer.lookup(5, 25);
  Env env(cfg);
  std::mt19937_64 rng(808);
  int exact = 0, episodes = 0;
  while (episodes < 100) {
    StepResult r = env.reset(rng());
    if (r.done) continue;
    ++episodes;
    long sum = 0;
    bool scaled_ok = true;
    while (!r.done) {
      const auto n = r.observation.actions.size();
      const std::size_t a = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      r = env.step(r.observation.action_node(a));
      sum += r.info.gate_delta;
      scaled_ok = scaled_ok && std::abs(r.reward * norm - r.info.gate_delta) <= 1e-9;
    }
    exact += sum == env.gates_initial() - env.gates_now() && scaled_ok &&
             env.gates_now() == static_cast<int>(extract(env.diagram()).gates.size());
  }
  return {exact == 100, std::to_string(exact) + "/100 random-policy episodes with sum of gate drops = initial - final"};
}

// 9 ---------------------------------------------------------------------------

Outcome baseline_envelope() {
  auto time_one = [](int q, int g, std::uint64_t seed) {
    const Circuit c = random_circuit(q, g, GateSet::Clifford, seed);
    const auto t0 = Clock::now();
    const Circuit out = extract(reduce_all(to_graph_like(circuit_to_diagram(c))));
    (void)out;
    return seconds_since(t0);
  };
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  };
  std::vector<double> big;
  for (std::uint64_t s = 0; s < 21; ++s) big.push_back(time_one(20, 450, 9000 + s));
  const double med = median(big);
  // Log-log slope of median time against initial gates at 20 qubits.
  const std::vector<int> sizes = {100, 200, 450, 900};
  std::vector<double> lx, ly;
  for (int g : sizes) {
    std::vector<double> ts;
    for (std::uint64_t s = 0; s < 11; ++s) ts.push_back(time_one(20, g, 9100 + s));
    lx.push_back(std::log(g));
    ly.push_back(std::log(median(ts)));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  return {med <= 2.0 && slope > 1.0, "20q/450g median " + fmt(med * 1e3, 4) + " ms (<= 2 s); time ~ gates^" +
                                         fmt(slope, 3) + " over 100..900 gates (exponent > 1)"};
}

// 10 --------------------------------------------------------------------------

int run(const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); }

std::map<std::string, std::string> files_under(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string name = fs::relative(e.path(), dir).string();
    if (name.find(".timing.csv") != std::string::npos) continue;
    out[name] = read_file(e.path().string());
  }
  return out;
}

Outcome determinism(const std::string& cli) {
  if (cli.empty() || !fs::exists(cli)) return {false, "CLI binary not found: '" + cli + "'"};
  const fs::path root = fs::temp_directory_path() / ("zxrl_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const fs::path cfg = root / "run.cfg";
  fs::create_directories(root);
  {
    std::ofstream f(cfg);
    f << "n_qubits = 3\nn_gates = 12\nnum_steps = 32\nnum_envs = 2\nminibatch_size = 32\nnum_epochs = 2\n"
         "total_steps = 128\nhidden = 16\nseed = 10\n";
  }
  int failures = 0;
  for (const char* tag : {"a", "b"}) {
    const fs::path d = root / tag;
    const std::string q = "\"" + cli + "\"";
    failures += run(q + " train --quiet --config " + cfg.string() + " --out-dir " + (d / "train").string()) != 0;
    const std::string ck = (d / "train" / "checkpoint.bin").string();
    fs::create_directories(d / "eval");
    failures += run(q + " eval --checkpoint " + ck + " --qubits 3 --gates 12 --episodes 20 --mode sample --seed 3 --out " +
                    (d / "eval" / "report.csv").string()) != 0;
    failures += run(q + " bench fig2 --qubits 4 --gates 10,20,40 --samples 10 --seed 4 --out " +
                    (d / "bench").string()) != 0;
    failures += run(q + " bench fig6 --checkpoint " + ck + " --qubits 4 --gates 10,20 --samples 5 --seed 4 --out " +
                    (d / "bench").string()) != 0;
  }
  if (failures) return {false, std::to_string(failures) + " CLI invocations failed"};
  const auto a = files_under(root / "a"), b = files_under(root / "b");
  int differing = 0;
  for (const auto& [name, bytes] : a) {
    auto it = b.find(name);
    differing += it == b.end() || it->second != bytes;
  }
  differing += static_cast<int>(b.size() != a.size());
  fs::remove_all(root);
  return {differing == 0 && a.size() >= 8, std::to_string(a.size()) + " output files from train/eval/bench, " +
                                               std::to_string(differing) + " differ between two runs"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string cli;
  std::vector<int> only;
  app.add_option("--cli", cli, "path to the zxrl executable");
  app.add_option("--only", only, "criteria to run")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, semantic_preservation},
      {2, clifford_terminal_form},
      {3, saturation},
      {4, gradient_correctness},
      {5, gae_oracle},
      {6, softmax_invariants},
      {7, training_proxy},
      {8, reward_telescoping},
      {9, baseline_envelope},
      {10, [&] { return determinism(cli); }},
  };
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "criterion " << std::setw(2) << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << "  ["
              << fmt(seconds_since(t0), 3) << " s]" << std::endl;
  }
  return failed ? 1 : 0;
}
