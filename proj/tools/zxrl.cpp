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

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "zxrl/zxrl.hpp"

namespace fs = std::filesystem;
using namespace zxrl;

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  return read_file(path);
}

void spit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("failed writing " + path);
}

GateSet gate_set_arg(const std::string& s) { return detail::parse_gate_set(s, "--set"); }

Checkpoint load_or_throw(const std::string& path) {
  if (path.empty()) throw Error("--checkpoint is required for this mode");
  return load_checkpoint(path);
}

// -- gen / zx / extract / apply / peephole ------------------------------------

struct GenArgs {
  int qubits = 5, gates = 25;
  std::string set = "clifford", out;
  std::uint64_t seed = 0;
};

struct IoArgs {
  std::string in, out;
  bool peephole = false;
  bool raw = false;
};

struct ApplyArgs {
  std::string in, out, rule;
  std::vector<int> vertices;
};

// -- simplify ----------------------------------------------------------------

struct SimplifyArgs {
  std::string in, out, method = "reduce-all", checkpoint, mode = "greedy";
  bool peephole = false, gadgets = false;
  std::int64_t shuffle_seed = -1;
  std::uint64_t seed = 0;
  int max_steps = 200;
};

int run_simplify(const SimplifyArgs& a) {
  const Circuit c = parse_circuit(slurp(a.in));
  Circuit out;
  if (a.method == "reduce-all") {
    ReduceOptions opt;
    opt.gadgets = a.gadgets;
    if (a.shuffle_seed >= 0) opt.shuffle_seed = static_cast<std::uint64_t>(a.shuffle_seed);
    out = extract(reduce_all(to_graph_like(circuit_to_diagram(c)), opt));
  } else if (a.method == "agent") {
    if (a.gadgets) throw Error("the agent does not use gadget rules");
    const EvalMode mode = eval_mode_from_name(a.mode);
    std::optional<Checkpoint> ck;
    if (mode == EvalMode::Greedy || mode == EvalMode::Sample) ck = load_or_throw(a.checkpoint);
    EnvConfig env;
    env.n_qubits = c.n_qubits;
    env.n_gates = static_cast<int>(c.gates.size());
    env.max_steps = a.max_steps;
    out = extract(agent_optimize(ck ? &ck->actor : nullptr, c, env, mode, a.seed));
  } else {
    throw Error("unknown method '" + a.method + "'");
  }
  if (a.peephole) out = peephole_optimize(out);
  spit(a.out, emit_circuit(out));
  const GateCount before = count_gates(c), after = count_gates(out);
  std::cerr << "gates " << before.total << " -> " << after.total << ", two-qubit " << before.two_qubit << " -> "
            << after.two_qubit << "\n";
  return 0;
}

// -- verify ------------------------------------------------------------------

struct VerifyArgs {
  std::string a, b, mode = "auto";
};

int run_verify(const VerifyArgs& v) {
  const Circuit a = parse_circuit(slurp(v.a));
  const Circuit b = parse_circuit(slurp(v.b));
  if (a.n_qubits != b.n_qubits) {
    std::cout << "not equivalent (width " << a.n_qubits << " vs " << b.n_qubits << ")\n";
    return 1;
  }
  std::string mode = v.mode;
  if (mode == "auto") mode = is_clifford(a) && is_clifford(b) ? "tableau" : "dense";
  bool eq = false;
  if (mode == "tableau") {
    eq = equivalent_clifford(a, b);
  } else if (mode == "dense") {
    eq = equivalent_dense(a, b);
  } else {
    throw Error("unknown verify mode '" + mode + "'");
  }
  std::cout << (eq ? "equivalent" : "not equivalent") << " (" << mode << ")\n";
  return eq ? 0 : 1;
}

// -- calibrate ---------------------------------------------------------------

struct CalibrateArgs {
  int qubits = 5;
  std::vector<int> gates{25};
  int samples = 100;
  std::string set = "clifford", out;
  std::uint64_t seed = 0;
};

int run_calibrate(const CalibrateArgs& a) {
  std::ostringstream os;
  os << std::setprecision(10);
  for (int g : a.gates) {
    const double x = calibrate_normalizer(a.qubits, g, gate_set_arg(a.set), a.samples, a.seed);
    os << NormalizerTable::key(a.qubits, g) << " = " << x << "\n";
  }
  spit(a.out, os.str());
  return 0;
}

// -- train -------------------------------------------------------------------

struct TrainArgs {
  std::string config, out_dir = "run", normalizers, seed;
  std::vector<std::string> overrides;
  bool quiet = false;
};

std::string metrics_header() {
  return "update,step,mean_return,mean_length,episodes,l_actor,l_critic,entropy,clip_frac,grad_norm\n";
}

std::string metrics_line(const UpdateMetrics& m) {
  std::ostringstream os;
  os << std::setprecision(10) << m.update << "," << m.step << "," << m.mean_return << "," << m.mean_length << ","
     << m.episodes << "," << m.l_actor << "," << m.l_critic << "," << m.entropy << "," << m.clip_frac << ","
     << m.grad_norm << "\n";
  return os.str();
}

std::string episode_line(const EpisodeRecord& e) {
  std::ostringstream os;
  os << std::setprecision(10) << e.index << "," << e.env << "," << e.end_step << "," << e.ret << "," << e.length
     << "," << e.gates_initial << "," << e.gates_final << "\n";
  return os.str();
}

int run_train(const TrainArgs& a) {
  std::string text = a.config.empty() ? std::string() : slurp(a.config);
  for (const auto& kv : a.overrides) text += "\n" + kv;
  text += "\n";
  const char* env_seed = std::getenv("ZXRL_SEED");
  RunConfig rc = parse_run_config(text, a.seed.empty() ? env_seed : a.seed.c_str());
  if (!a.normalizers.empty()) {
    for (const auto& [k, v] : parse_normalizer_table(slurp(a.normalizers)).entries) {
      rc.env.normalizer.entries.emplace(k, v);
    }
  }
  fs::create_directories(a.out_dir);
  const std::string canonical = emit_run_config(rc);
  spit((fs::path(a.out_dir) / "config.cfg").string(), canonical);

  std::ofstream metrics(fs::path(a.out_dir) / "metrics.csv", std::ios::binary);
  std::ofstream episodes(fs::path(a.out_dir) / "episodes.csv", std::ios::binary);
  if (!metrics || !episodes) throw Error("cannot write into " + a.out_dir);
  metrics << metrics_header();
  episodes << "index,env,end_step,return,length,gates_initial,gates_final\n";
  const std::string ck_path = (fs::path(a.out_dir) / "checkpoint.bin").string();

  TrainHooks hooks;
  hooks.on_episode = [&](const EpisodeRecord& e) { episodes << episode_line(e); };
  hooks.on_update = [&](const UpdateMetrics& m, const Checkpoint& ck) {
    metrics << metrics_line(m);
    metrics.flush();
    episodes.flush();
    Checkpoint copy = ck;
    copy.hyper = {{"config", canonical}, {"update", m.update}, {"step", m.step}};
    save_checkpoint(copy, ck_path);
    if (!a.quiet) {
      std::cerr << "update " << m.update + 1 << "/" << rc.ppo.num_updates() << " step " << m.step << " return "
                << m.mean_return << " entropy " << m.entropy << "\n";
    }
  };
  (void)train(rc.ppo, rc.env, rc.net, hooks);
  return 0;
}

// -- eval --------------------------------------------------------------------

struct EvalArgs {
  std::string checkpoint, out, mode = "greedy", set = "clifford";
  int qubits = 5, gates = 25, max_steps = 200, jobs = 1;
  long episodes = 200;
  std::uint64_t seed = 12345;
};

int run_eval(const EvalArgs& a) {
  const EvalMode mode = eval_mode_from_name(a.mode);
  std::optional<Checkpoint> ck;
  if (mode == EvalMode::Greedy || mode == EvalMode::Sample) ck = load_or_throw(a.checkpoint);
  EnvConfig env;
  env.n_qubits = a.qubits;
  env.n_gates = a.gates;
  env.gate_set = gate_set_arg(a.set);
  env.max_steps = a.max_steps;
  const auto rows = evaluate(ck ? &ck->actor : nullptr, env, a.episodes, mode, a.seed, a.jobs);

  std::ostringstream report, timing;
  report << "episode,seed,initial_total,steps,agent_total,agent_2q,agent_pp_total,agent_pp_2q,"
            "baseline_total,baseline_2q,baseline_pp_total,baseline_pp_2q\n";
  timing << "episode,agent_ms,baseline_ms\n" << std::fixed << std::setprecision(3);
  for (const EvalRow& r : rows) {
    report << r.episode << "," << r.seed << "," << r.initial_total << "," << r.steps << "," << r.agent_total << ","
           << r.agent_2q << "," << r.agent_pp_total << "," << r.agent_pp_2q << "," << r.baseline_total << ","
           << r.baseline_2q << "," << r.baseline_pp_total << "," << r.baseline_pp_2q << "\n";
    timing << r.episode << "," << r.agent_ms << "," << r.baseline_ms << "\n";
  }
  spit(a.out, report.str());
  if (!a.out.empty() && a.out != "-") spit(a.out + ".timing.csv", timing.str());

  const EvalSummary s = summarize(rows);
  std::cerr << std::fixed << std::setprecision(3) << "episodes " << s.episodes << "  agent " << s.agent_mean
            << " (2q " << s.agent_2q_mean << ")  reduce-all " << s.baseline_mean << " (2q " << s.baseline_2q_mean
            << ")  win/loss/tie " << s.win << "/" << s.loss << "/" << s.tie << "\n";
  return 0;
}

// -- bench -------------------------------------------------------------------

struct BenchArgs {
  std::string figure, out_dir = "bench", checkpoint, mode = "greedy", set = "both";
  int qubits = 10, samples = 0, jobs = 1, max_steps = 200;
  std::vector<int> gates;
  std::uint64_t seed = 0;
};

int run_bench(const BenchArgs& a) {
  fs::create_directories(a.out_dir);
  if (a.figure == "fig2") {
    const std::vector<int> gates = a.gates.empty() ? std::vector<int>{25, 50, 100, 150, 200, 300, 400} : a.gates;
    const int samples = a.samples > 0 ? a.samples : 100;
    std::vector<GateSet> sets;
    if (a.set == "both" || a.set == "clifford") sets.push_back(GateSet::Clifford);
    if (a.set == "both" || a.set == "cliffordt") sets.push_back(GateSet::CliffordT);
    if (sets.empty()) throw Error("--set must be clifford, cliffordt or both");
    for (GateSet gs : sets) {
      const Sweep s = gate_sweep(a.qubits, gates, gs, samples, a.seed, a.jobs);
      const auto path = fs::path(a.out_dir) / (std::string("fig2_") + detail::gate_set_name(gs) + ".csv");
      spit(path.string(), sweep_csv(s));
      std::cerr << "wrote " << path.string() << "\n";
    }
  } else if (a.figure == "fig6") {
    const Checkpoint ck = load_or_throw(a.checkpoint);
    const std::vector<int> gates = a.gates.empty() ? std::vector<int>{25, 50, 75, 100, 125, 150} : a.gates;
    const int samples = a.samples > 0 ? a.samples : 50;
    EnvConfig env;
    env.n_qubits = a.qubits;
    env.max_steps = a.max_steps;
    const Sweep s = agent_sweep(ck.actor, env, gates, samples, a.seed, eval_mode_from_name(a.mode), a.jobs);
    const auto path = fs::path(a.out_dir) / "fig6_clifford.csv";
    spit(path.string(), sweep_csv(s));
    std::cerr << "wrote " << path.string() << "\n";
  } else {
    throw Error("unknown figure '" + a.figure + "' (fig2 or fig6)");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ZX-diagram circuit optimizer with a learned rewrite policy"};
  app.require_subcommand(1);
  int rc = 0;

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "random circuit");
  g->add_option("--qubits", gen.qubits)->check(CLI::PositiveNumber);
  g->add_option("--gates", gen.gates)->check(CLI::NonNegativeNumber);
  g->add_option("--set", gen.set)->check(CLI::IsMember({"clifford", "cliffordt"}));
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out, "output file (stdout if omitted)");
  g->callback([&] { spit(gen.out, emit_circuit(random_circuit(gen.qubits, gen.gates, gate_set_arg(gen.set), gen.seed))); });

  IoArgs zx;
  auto* z = app.add_subcommand("zx", "circuit to diagram (graph-like unless --raw)");
  z->add_option("--in", zx.in)->required();
  z->add_option("--out", zx.out);
  z->add_flag("--raw", zx.raw);
  z->callback([&] {
    const ZxDiagram d = circuit_to_diagram(parse_circuit(slurp(zx.in)));
    spit(zx.out, serialize(zx.raw ? d : to_graph_like(d)));
  });

  SimplifyArgs simp;
  auto* s = app.add_subcommand("simplify", "optimize a circuit through ZX rewriting");
  s->add_option("--in", simp.in)->required();
  s->add_option("--out", simp.out);
  s->add_option("--method", simp.method)->check(CLI::IsMember({"reduce-all", "agent"}));
  s->add_option("--checkpoint", simp.checkpoint);
  s->add_option("--mode", simp.mode, "agent policy: greedy, sample, random or stop");
  s->add_option("--seed", simp.seed, "action seed for sample/random");
  s->add_option("--max-steps", simp.max_steps)->check(CLI::PositiveNumber);
  s->add_option("--shuffle-seed", simp.shuffle_seed);
  s->add_flag("--peephole", simp.peephole);
  s->add_flag("--gadgets", simp.gadgets);
  s->callback([&] { rc = run_simplify(simp); });

  IoArgs ex;
  auto* e = app.add_subcommand("extract", "diagram to circuit");
  e->add_option("--in", ex.in)->required();
  e->add_option("--out", ex.out);
  e->add_flag("--peephole", ex.peephole);
  e->callback([&] {
    Circuit c = extract(deserialize(slurp(ex.in)));
    if (ex.peephole) c = peephole_optimize(c);
    spit(ex.out, emit_circuit(c));
  });

  ApplyArgs ap;
  auto* a = app.add_subcommand("apply", "apply one rewrite to a diagram");
  a->add_option("--in", ap.in)->required();
  a->add_option("--out", ap.out);
  a->add_option("--rule", ap.rule)->required();
  a->add_option("--vertices", ap.vertices)->delimiter(',');
  a->callback([&] {
    const auto tag = rule_from_name(ap.rule);
    if (!tag) throw Error("unknown rule '" + ap.rule + "'");
    RewriteAction act{*tag, ap.vertices.size() > 0 ? ap.vertices[0] : -1, ap.vertices.size() > 1 ? ap.vertices[1] : -1};
    if (static_cast<int>(ap.vertices.size()) != act.arity()) {
      throw Error("rule '" + ap.rule + "' takes " + std::to_string(act.arity()) + " vertices");
    }
    const ZxDiagram d = deserialize(slurp(ap.in));
    if (!is_applicable(d, act)) throw Error("rule does not apply to these vertices");
    spit(ap.out, serialize(apply(d, act)));
  });

  IoArgs pp;
  auto* p = app.add_subcommand("peephole", "gate-level cancellation pass");
  p->add_option("--in", pp.in)->required();
  p->add_option("--out", pp.out);
  p->callback([&] { spit(pp.out, emit_circuit(peephole_optimize(parse_circuit(slurp(pp.in))))); });

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "check two circuits for equivalence (exit 1 if not)");
  v->add_option("a", ver.a)->required();
  v->add_option("b", ver.b)->required();
  v->add_option("--mode", ver.mode)->check(CLI::IsMember({"auto", "tableau", "dense"}));
  v->callback([&] { rc = run_verify(ver); });

  CalibrateArgs cal;
  auto* c = app.add_subcommand("calibrate", "reward normalizers");
  c->add_option("--qubits", cal.qubits)->check(CLI::PositiveNumber);
  c->add_option("--gates", cal.gates)->delimiter(',');
  c->add_option("--samples", cal.samples)->check(CLI::PositiveNumber);
  c->add_option("--set", cal.set)->check(CLI::IsMember({"clifford", "cliffordt"}));
  c->add_option("--seed", cal.seed);
  c->add_option("--out", cal.out);
  c->callback([&] { rc = run_calibrate(cal); });

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "PPO training");
  t->add_option("--config", tr.config, "key = value file");
  t->add_option("--set", tr.overrides, "extra key=value lines")->allow_extra_args(false);
  t->add_option("--normalizers", tr.normalizers, "file written by calibrate");
  t->add_option("--seed", tr.seed, "overrides the config and ZXRL_SEED");
  t->add_option("--out-dir", tr.out_dir);
  t->add_flag("--quiet", tr.quiet);
  t->callback([&] { rc = run_train(tr); });

  EvalArgs ev;
  auto* ee = app.add_subcommand("eval", "per-episode comparison against reduce-all");
  ee->add_option("--checkpoint", ev.checkpoint);
  ee->add_option("--qubits", ev.qubits)->check(CLI::PositiveNumber);
  ee->add_option("--gates", ev.gates)->check(CLI::NonNegativeNumber);
  ee->add_option("--set", ev.set)->check(CLI::IsMember({"clifford", "cliffordt"}));
  ee->add_option("--episodes", ev.episodes)->check(CLI::NonNegativeNumber);
  ee->add_option("--mode", ev.mode)->check(CLI::IsMember({"greedy", "sample", "random", "stop"}));
  ee->add_option("--seed", ev.seed);
  ee->add_option("--max-steps", ev.max_steps)->check(CLI::PositiveNumber);
  ee->add_option("--jobs", ev.jobs)->check(CLI::PositiveNumber);
  ee->add_option("--out", ev.out, "report csv; timings go to <out>.timing.csv");
  ee->callback([&] { rc = run_eval(ev); });

  BenchArgs be;
  auto* b = app.add_subcommand("bench", "gate-count sweeps as csv tables");
  b->add_option("figure", be.figure, "fig2 or fig6")->required();
  b->add_option("--out", be.out_dir);
  b->add_option("--checkpoint", be.checkpoint);
  b->add_option("--mode", be.mode)->check(CLI::IsMember({"greedy", "sample", "random", "stop"}));
  b->add_option("--qubits", be.qubits)->check(CLI::PositiveNumber);
  b->add_option("--gates", be.gates)->delimiter(',');
  b->add_option("--samples", be.samples)->check(CLI::NonNegativeNumber);
  b->add_option("--set", be.set)->check(CLI::IsMember({"clifford", "cliffordt", "both"}));
  b->add_option("--seed", be.seed);
  b->add_option("--max-steps", be.max_steps)->check(CLI::PositiveNumber);
  b->add_option("--jobs", be.jobs)->check(CLI::PositiveNumber);
  b->callback([&] { rc = run_bench(be); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return rc;
}
