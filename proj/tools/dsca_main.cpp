// Command-line harness: validate configs, run experiment sweeps, and dump
// solver diagnostics for a single slot.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "dsca/config.hpp"
#include "dsca/rng.hpp"
#include "dsca/scheduler.hpp"

namespace fs = std::filesystem;
using namespace dsca;

namespace {

std::string default_out_dir() {
  const char* env = std::getenv("DSCA_OUT_DIR");
  return env ? env : "";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::string run_stem(AlgorithmTag tag, double alpha, uint64_t seed) {
  std::ostringstream os;
  os << to_string(tag) << "_a" << alpha << "_s" << seed;
  return os.str();
}

struct RunJob {
  AlgorithmTag tag;
  double alpha;
  uint64_t seed;
};

struct RunOutcome {
  RunJob job;
  bool ok = false;
  double utility = 0.0;
  Eigen::VectorXd throughput;
  std::string error;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void write_throughput_csv(const fs::path& path, const Eigen::VectorXd& w) {
  std::ofstream f(path);
  f.precision(17);
  f << "user,throughput\n";
  for (int i = 0; i < w.size(); ++i) f << i << "," << w(i) << "\n";
}

void write_cdf_csv(const fs::path& path, const Eigen::VectorXd& w) {
  std::ofstream f(path);
  f.precision(17);
  f << "throughput,cumulative_fraction\n";
  for (auto [v, c] : export_cdf(w)) f << v << "," << c << "\n";
}

int cmd_run(const ExperimentConfig& cfg, const std::string& out_override,
            int workers) {
  fs::path out = !out_override.empty()  ? fs::path(out_override)
                 : !default_out_dir().empty() ? fs::path(default_out_dir())
                                              : fs::path(cfg.out_dir);
  fs::create_directories(out);

  std::vector<RunJob> jobs;
  for (AlgorithmTag tag : cfg.algorithms)
    for (double alpha : cfg.alphas)
      for (uint64_t seed : cfg.seeds) jobs.push_back({tag, alpha, seed});

  InstanceParams ip = cfg.instance_params();
  std::vector<RunOutcome> results(jobs.size());
  std::atomic<size_t> next{0};
  std::mutex io;

  auto worker = [&] {
    for (size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      const RunJob& job = jobs[j];
      RunOutcome& r = results[j];
      r.job = job;
      try {
        UtilityConfig u{job.alpha,
                        Eigen::VectorXd::Constant(ip.num_users(), cfg.qos_weight)};
        HorizonResult h = run_horizon(ip, cfg.algorithm_config(job.tag),
                                      cfg.horizon, u, job.seed);
        r.utility = h.utility;
        r.throughput = h.throughput;
        r.ok = true;
        std::string stem = run_stem(job.tag, job.alpha, job.seed);
        write_throughput_csv(out / (stem + "_throughput.csv"), h.throughput);
        write_cdf_csv(out / (stem + "_cdf.csv"), h.throughput);
        std::lock_guard<std::mutex> lk(io);
        std::cout << "done " << stem << " utility=" << fmt(h.utility) << "\n";
      } catch (const std::exception& e) {
        r.error = e.what();
        std::lock_guard<std::mutex> lk(io);
        std::cerr << "FAILED " << run_stem(job.tag, job.alpha, job.seed) << ": "
                  << e.what() << "\n";
      }
    }
  };

  workers = std::max(1, workers);
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // Per-run record file.
  {
    std::ofstream f(out / "runs.csv");
    f.precision(17);
    f << "algorithm,alpha,seed,total_utility,status\n";
    for (const auto& r : results)
      f << to_string(r.job.tag) << "," << r.job.alpha << "," << r.job.seed << ","
        << (r.ok ? std::to_string(r.utility) : "") << ","
        << (r.ok ? "ok" : "error: " + r.error) << "\n";
  }

  // Headline table: rows = algorithms, columns = alpha, cells = median
  // utility over the seeds that completed.
  std::ostringstream table;
  table << "algorithm";
  for (double a : cfg.alphas) table << "\talpha=" << a;
  table << "\n";
  for (AlgorithmTag tag : cfg.algorithms) {
    table << to_string(tag);
    for (double a : cfg.alphas) {
      std::vector<double> us;
      for (const auto& r : results)
        if (r.ok && r.job.tag == tag && r.job.alpha == a) us.push_back(r.utility);
      table << "\t" << (us.empty() ? "n/a" : fmt(median(us)));
    }
    table << "\n";
  }

  // Paired-seed dominance: how often each distributed algorithm beats the
  // sequential baseline on the same channel draws.
  auto find_utility = [&](AlgorithmTag tag, double a, uint64_t s, double* u) {
    for (const auto& r : results)
      if (r.ok && r.job.tag == tag && r.job.alpha == a && r.job.seed == s) {
        *u = r.utility;
        return true;
      }
    return false;
  };
  bool have_sc = std::find(cfg.algorithms.begin(), cfg.algorithms.end(),
                           AlgorithmTag::SC) != cfg.algorithms.end();
  if (have_sc) {
    table << "\npaired seeds beating sc:\n";
    for (AlgorithmTag tag : cfg.algorithms) {
      if (tag == AlgorithmTag::SC) continue;
      for (double a : cfg.alphas) {
        int wins = 0, total = 0;
        for (uint64_t s : cfg.seeds) {
          double u1, u2;
          if (find_utility(tag, a, s, &u1) &&
              find_utility(AlgorithmTag::SC, a, s, &u2)) {
            ++total;
            if (u1 > u2) ++wins;
          }
        }
        if (total > 0)
          table << to_string(tag) << " alpha=" << a << ": " << wins << "/"
                << total << "\n";
      }
    }
  }

  std::cout << "\n" << table.str();
  std::ofstream(out / "summary.txt") << table.str();

  for (const auto& r : results)
    if (!r.ok) return 1;
  return 0;
}

// Central finite-difference check of the one-shot objective gradients at the
// solver's initial point.
std::string gradient_check_report(const ProblemInstance& inst, AlgorithmTag tag,
                                  const AlgorithmConfig& cfg) {
  const int B = inst.num_bs();
  const int K = inst.num_channels();
  Eigen::MatrixXd p(B, K);
  std::vector<Eigen::MatrixXd> x(B);
  Rng rng(7);
  for (int b = 0; b < B; ++b) {
    for (int k = 0; k < K; ++k)
      p(b, k) = rng.next_uniform() * inst.power_budget(b) / K;
    x[b].resize(inst.users_of(b).size(), K);
    for (int r = 0; r < x[b].rows(); ++r)
      for (int k = 0; k < K; ++k) x[b](r, k) = 0.1 + 0.8 * rng.next_uniform() / x[b].rows();
  }
  (void)cfg;

  const double h = 1e-6;
  double max_rel = 0.0;
  auto update = [&](double analytic, double vp, double vm) {
    double fd = (vp - vm) / (2.0 * h);
    double rel = std::abs(analytic - fd) / std::max(1.0, std::abs(fd));
    max_rel = std::max(max_rel, rel);
  };

  std::vector<int> all(B);
  for (int b = 0; b < B; ++b) all[b] = b;
  bool rm = tag == AlgorithmTag::LXGP_RM || tag == AlgorithmTag::LXLP_RM;
  for (int b = 0; b < B; ++b) {
    if (rm) {
      RmEval e = f_rm_value_and_grad(inst, b, all, p, x[b]);
      for (int r = 0; r < B; ++r)
        for (int k = 0; k < K; ++k) {
          Eigen::MatrixXd pp = p, pm = p;
          pp(r, k) += h;
          pm(r, k) -= h;
          update(e.dp(r, k), f_rm_value_and_grad(inst, b, all, pp, x[b]).value,
                 f_rm_value_and_grad(inst, b, all, pm, x[b]).value);
        }
    } else {
      CmEval e = f_cm_value_and_grad(inst, b, p, x);
      for (int r = 0; r < B; ++r)
        for (int k = 0; k < K; ++k) {
          Eigen::MatrixXd pp = p, pm = p;
          pp(r, k) += h;
          pm(r, k) -= h;
          update(e.dp(r, k), f_cm_value_and_grad(inst, b, pp, x).value,
                 f_cm_value_and_grad(inst, b, pm, x).value);
        }
    }
  }
  std::ostringstream os;
  os << "gradient check (" << (rm ? "direct" : "decomposed")
     << " objective): max rel. err = " << max_rel << "\n";
  return os.str();
}

int cmd_diagnose(const ExperimentConfig& cfg, const std::string& alg,
                 uint64_t seed, int slot, const std::string& out_override) {
  AlgorithmTag tag = algorithm_from_string(alg);
  InstanceParams ip = cfg.instance_params();
  double alpha = cfg.alphas.front();
  UtilityConfig u{alpha, Eigen::VectorXd::Constant(ip.num_users(), cfg.qos_weight)};
  AlgorithmConfig acfg = cfg.algorithm_config(tag);

  // Replay the horizon up to the requested slot so the weights are the ones
  // the scheduler would actually use there.
  ThroughputState state = ThroughputState::init(ip.num_users());
  for (int t = 0; t < slot; ++t) {
    ProblemInstance inst = sample_instance(
        ip.topo, ip.channels, ip.users_per_bs, ip.noise, ip.budgets,
        ip.sig_scale, ip.intf_scale, Rng::derive_seed(seed, t));
    inst.set_weights(scheduling_weights(state, u));
    update_throughput(state,
                      realized_user_rates(inst, run_one_shot(inst, acfg).alloc));
  }
  ProblemInstance inst = sample_instance(
      ip.topo, ip.channels, ip.users_per_bs, ip.noise, ip.budgets, ip.sig_scale,
      ip.intf_scale, Rng::derive_seed(seed, slot));
  inst.set_weights(scheduling_weights(state, u));
  SolveResult res = run_one_shot(inst, acfg);

  fs::path out = !out_override.empty()  ? fs::path(out_override)
                 : !default_out_dir().empty() ? fs::path(default_out_dir())
                                              : fs::path(cfg.out_dir);
  fs::create_directories(out);
  std::string stem = "diagnose_" + run_stem(tag, alpha, seed) + "_t" +
                     std::to_string(slot);
  {
    std::ofstream f(out / (stem + "_trajectory.csv"));
    res.trajectory.write_csv(f);
  }

  std::cout << "algorithm " << to_string(tag) << ", seed " << seed << ", slot "
            << slot << "\n";
  std::cout << "iterations: " << res.trajectory.rows.back().n << "\n";
  std::cout << "final objective: " << fmt(res.trajectory.rows.back().objective)
            << "\n";
  std::cout << "final consensus residual: "
            << fmt(res.trajectory.rows.back().consensus) << "\n";
  std::cout << "final stationarity residual: "
            << fmt(res.trajectory.rows.back().stationarity) << "\n";
  std::cout << "achieved weighted sum rate: "
            << fmt(weighted_sum_rate(inst, res.alloc)) << "\n";
  std::cout << "allocation feasible: "
            << (res.alloc.feasible(inst) ? "yes" : "no") << "\n";
  if (tag != AlgorithmTag::SC && tag != AlgorithmTag::SC_NI)
    std::cout << gradient_check_report(inst, tag, acfg);
  std::cout << "trajectory written to " << (out / (stem + "_trajectory.csv"))
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributed resource allocation experiments"};
  app.require_subcommand(1);

  std::string cfg_path, out_dir, alg = "lxgp-rm";
  uint64_t seed = 1;
  int slot = 0;
  int workers = static_cast<int>(std::thread::hardware_concurrency());

  CLI::App* validate = app.add_subcommand("validate", "check a config file");
  validate->add_option("config", cfg_path, "config file")->required();

  CLI::App* run = app.add_subcommand("run", "run the configured experiment sweep");
  run->add_option("config", cfg_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory (default: config/env)");
  run->add_option("--workers", workers, "parallel runs");

  CLI::App* diag = app.add_subcommand("diagnose", "dump one solve in detail");
  diag->add_option("config", cfg_path, "config file")->required();
  diag->add_option("--algorithm", alg, "algorithm name");
  diag->add_option("--seed", seed, "master seed");
  diag->add_option("--slot", slot, "scheduling slot to diagnose");
  diag->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = parse_config_file(cfg_path);
    if (validate->parsed()) {
      std::cout << "config ok: " << cfg.nodes << " BS, " << cfg.channels
                << " channels, " << cfg.algorithms.size() << " algorithms, "
                << cfg.alphas.size() << " alpha values, " << cfg.seeds.size()
                << " seeds, T=" << cfg.horizon << "\n";
      return 0;
    }
    if (run->parsed()) return cmd_run(cfg, out_dir, workers);
    return cmd_diagnose(cfg, alg, seed, slot, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
