#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmimo/metrics.hpp"
#include "dmimo/qos.hpp"
#include "dmimo/scenario.hpp"

namespace {

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw CLI::ValidationError("--values", "expected a comma-separated list");
  return out;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void print_summary(const dmimo::ScenarioConfig& cfg, const dmimo::RunResult& r) {
  std::printf("scheme %s on %s (%ld train + %ld eval frames, seed %llu)\n", r.scheme.c_str(),
              cfg.deployment_name.c_str(), cfg.train_frames, cfg.eval_frames,
              (unsigned long long)r.seed);
  if (r.infeasible) {
    std::printf("  infeasible: QoS cannot be met at full BS usage\n");
    for (std::size_t u = 0; u < r.max_effective_capacity.size(); ++u)
      std::printf("  user %zu: max effective capacity %.1f nats/frame, load %.1f nats/frame\n",
                  u + 1, r.max_effective_capacity[u], cfg.arrival_rate(int(u)));
    return;
  }
  std::printf("  avg BS usage        %.4f\n", r.avg_usage);
  std::printf("  avg interfering area %.1f m^2\n", r.avg_area);
  for (std::size_t u = 0; u < r.residual.size(); ++u)
    std::printf("  user %zu: residual %.3e, effective capacity %.1f nats/frame (load %.1f)\n",
                u + 1, r.residual[u], r.effcap[u], cfg.arrival_rate(int(u)));
  if (r.fixed_cardinality >= 0) std::printf("  fixed cardinality %d\n", r.fixed_cardinality);
  if (!r.tracking.lambda.empty()) {
    std::printf("  multipliers:");
    for (double l : r.tracking.lambda) std::printf(" %.6g", l);
    std::printf("  (%ld iterations, %s)\n", r.tracking.iterations,
                r.converged ? "converged" : "not converged");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QoS-aware base-station selection simulator for distributed MIMO downlinks"};
  app.require_subcommand(1);

  std::string config_path, scheme_override, out_path, axis, values_csv;
  long queue_frames = 1000000;

  auto* run = app.add_subcommand("run", "run one scheme end to end and report metrics");
  run->add_option("--config", config_path, "scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--scheme", scheme_override, "override the configured scheme");
  run->add_option("--out", out_path, "write the CSV here (default: stdout summary only)");

  auto* sw = app.add_subcommand("sweep", "run a parameter sweep and emit one CSV row per value");
  sw->add_option("--config", config_path, "scenario file")->required()->check(CLI::ExistingFile);
  sw->add_option("--axis", axis, "load | kappa | delay-bound | xi")->required();
  sw->add_option("--values", values_csv, "comma-separated axis values")->required();
  sw->add_option("--scheme", scheme_override, "override the configured scheme");
  sw->add_option("--out", out_path, "write the CSV here (default: stdout)");

  auto* vq = app.add_subcommand("validate-queue",
                                "solve the policy, then drive a FIFO queue with its service trace");
  vq->add_option("--config", config_path, "scenario file")->required()->check(CLI::ExistingFile);
  vq->add_option("--scheme", scheme_override, "override the configured scheme");
  vq->add_option("--frames", queue_frames, "trace length (default 1e6)");

  auto* sc = app.add_subcommand("scenarios", "built-in deployments");
  auto* sc_list = sc->add_subcommand("list", "list built-in deployment geometries");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sc_list->parsed() || sc->parsed()) {
      std::cout << dmimo::scenario_listing();
      return 0;
    }
    dmimo::ScenarioConfig cfg = dmimo::load_scenario_file(config_path);
    if (!scheme_override.empty()) cfg.scheme = scheme_override;

    if (run->parsed()) {
      const dmimo::RunResult r = dmimo::run_experiment(cfg);
      print_summary(cfg, r);
      if (!out_path.empty()) write_output(out_path, dmimo::run_csv(cfg, r));
      return r.infeasible ? 2 : 0;
    }
    if (sw->parsed()) {
      const std::vector<double> values = parse_values(values_csv);
      const dmimo::SweepResult result = dmimo::sweep(cfg, axis, values);
      write_output(out_path, dmimo::sweep_csv(cfg, result));
      return 0;
    }
    if (vq->parsed()) {
      const dmimo::PolicyTraces traces = dmimo::policy_service_traces(cfg, queue_frames);
      print_summary(cfg, traces.run);
      if (traces.run.infeasible) return 2;
      for (std::size_t u = 0; u < traces.service.size(); ++u) {
        const dmimo::QoSSpec q = cfg.qos(int(u));
        const dmimo::QueueStats st =
            dmimo::simulate_queue(q.arrival_rate, traces.service[u], q.delay_bound);
        std::printf(
            "queue user %zu: frames %ld, Pr{D > %g} = %.3e (target %.1e), tail slope %.4e "
            "(theta %.4e), %s\n",
            u + 1, st.frames, q.delay_bound, st.violation_prob, q.violation_prob, st.tail_slope,
            q.exponent, st.stable ? "stable" : "UNSTABLE");
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
