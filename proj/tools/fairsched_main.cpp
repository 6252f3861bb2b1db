#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairsched/experiment.hpp"
#include "json.hpp"

namespace {

using fairsched::experiment::ExperimentConfig;
using fairsched::experiment::PolicyKind;
using fairsched::experiment::WorkloadSource;

fairsched::workload::MachineDist parse_machine_dist(const std::string& spec) {
  fairsched::workload::MachineDist dist;
  if (spec == "uniform") return dist;
  dist.kind = fairsched::workload::MachineDist::Kind::Zipf;
  if (spec == "zipf") return dist;
  if (spec.rfind("zipf:", 0) == 0) {
    const std::string theta = spec.substr(5);
    std::size_t consumed = 0;
    try {
      dist.theta = std::stod(theta, &consumed);
    } catch (const std::exception&) {
      throw fairsched::ConfigError("bad zipf exponent '" + theta + "'");
    }
    if (consumed != theta.size()) {
      throw fairsched::ConfigError("bad zipf exponent '" + theta + "'");
    }
    return dist;
  }
  throw fairsched::ConfigError("unknown machine distribution '" + spec +
                               "' (expected uniform, zipf, or zipf:THETA)");
}

// Inline JSON, or the contents of a file when the argument starts with '@'.
std::string json_text(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  const std::string path = arg.substr(1);
  std::ifstream in(path);
  if (!in) throw fairsched::ConfigError("cannot open synthetic spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// [{"org": 0, "count": 8, "release": [0, 30], "processing": [1, 4]}, ...]
std::vector<fairsched::workload::SynthOrgTemplate> parse_synth_spec(const std::string& arg) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text(arg));
  } catch (const nlohmann::json::exception& e) {
    throw fairsched::ConfigError(std::string("bad synthetic spec: ") + e.what());
  }
  if (!doc.is_array()) throw fairsched::ConfigError("synthetic spec must be a JSON array");
  std::vector<fairsched::workload::SynthOrgTemplate> templates;
  for (const nlohmann::json& item : doc) {
    try {
      fairsched::workload::SynthOrgTemplate t;
      t.org = item.at("org").get<int>();
      t.count = item.at("count").get<int>();
      const auto& release = item.at("release");
      const auto& processing = item.at("processing");
      t.release_lo = release.at(0).get<std::int64_t>();
      t.release_hi = release.at(1).get<std::int64_t>();
      t.processing_lo = processing.at(0).get<std::int64_t>();
      t.processing_hi = processing.at(1).get<std::int64_t>();
      templates.push_back(t);
    } catch (const nlohmann::json::exception& e) {
      throw fairsched::ConfigError(std::string("bad synthetic template: ") + e.what());
    }
  }
  return templates;
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> items;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

struct CommonArgs {
  std::string workload_path;
  std::string synth_spec;
  int orgs = 1;
  int machines = 1;
  std::string machine_dist = "uniform";
  double release_scale = 1.0;
  double epsilon = 0.1;
  double lambda = 0.95;
  std::int64_t rand_n = 0;
  std::int64_t t_end = 0;
  std::string out_path;
};

void add_common_flags(CLI::App* cmd, CommonArgs& args) {
  CLI::Option_group* source = cmd->add_option_group("source", "workload source");
  source->add_option("--workload", args.workload_path, "workload trace file (SWF format)");
  source->add_option("--synthetic", args.synth_spec,
                     "synthetic workload templates as JSON (inline, or @file)");
  source->require_option(1);
  cmd->add_option("--orgs", args.orgs, "number of organizations")->required();
  cmd->add_option("--machines", args.machines, "total machines in the shared pool")->required();
  cmd->add_option("--machine-dist", args.machine_dist,
                  "machine split across orgs: uniform, zipf, or zipf:THETA");
  cmd->add_option("--release-scale", args.release_scale,
                  "multiply release times by this factor (floored)");
  cmd->add_option("--epsilon", args.epsilon, "accuracy target for the sampling policy");
  cmd->add_option("--lambda", args.lambda, "confidence target for the sampling policy");
  cmd->add_option("--rand-n", args.rand_n,
                  "override the sampled ordering count (0 = use the formula)");
  cmd->add_option("--t-end", args.t_end, "simulation horizon (inclusive)")->required();
  cmd->add_option("--out", args.out_path, "write the summary CSV here instead of stdout");
}

ExperimentConfig base_config(const CommonArgs& args) {
  ExperimentConfig config;
  if (!args.workload_path.empty()) {
    config.source.kind = WorkloadSource::Kind::SwfFile;
    config.source.path = args.workload_path;
  } else {
    config.source.kind = WorkloadSource::Kind::Synthetic;
    config.source.synth = parse_synth_spec(args.synth_spec);
  }
  config.orgs = args.orgs;
  config.machines = args.machines;
  config.dist = parse_machine_dist(args.machine_dist);
  config.release_scale = args.release_scale;
  config.epsilon = args.epsilon;
  config.lambda = args.lambda;
  config.rand_n = args.rand_n;
  config.t_end = args.t_end;
  return config;
}

template <class WriteFn>
void write_csv_output(const std::string& out_path, WriteFn&& write) {
  if (out_path.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw fairsched::ConfigError("cannot open output file '" + out_path + "'");
  write(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-organization fair scheduling simulator"};
  app.require_subcommand(1);

  CommonArgs run_args;
  std::string run_policy = "exact";
  std::uint64_t run_seed = 1;
  std::string run_trace;
  CLI::App* run = app.add_subcommand("run", "run one policy and report its unfairness");
  add_common_flags(run, run_args);
  run->add_option("--policy", run_policy, "scheduling policy: exact, rand, direct, or rr");
  run->add_option("--seed", run_seed, "seed for workload assignment and sampling");
  run->add_option("--trace", run_trace, "write a per-step trace CSV here");

  CommonArgs sweep_args;
  std::string sweep_policies = "exact,rand,direct,rr";
  std::string sweep_seeds = "1";
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a policy/seed grid and aggregate per-policy unfairness");
  add_common_flags(sweep, sweep_args);
  sweep->add_option("--policies", sweep_policies, "comma-separated policy list");
  sweep->add_option("--seeds", sweep_seeds, "comma-separated seed list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      ExperimentConfig config = base_config(run_args);
      config.policy = fairsched::experiment::policy_from_name(run_policy);
      config.seed = run_seed;
      config.trace_path = run_trace;
      const fairsched::experiment::ExperimentResult result =
          fairsched::experiment::run_experiment(config);
      write_csv_output(run_args.out_path, [&](std::ostream& out) {
        fairsched::experiment::write_summary_csv(out, config, result);
      });
    } else {
      ExperimentConfig config = base_config(sweep_args);
      std::vector<PolicyKind> policies;
      for (const std::string& name : split_list(sweep_policies)) {
        policies.push_back(fairsched::experiment::policy_from_name(name));
      }
      std::vector<std::uint64_t> seeds;
      for (const std::string& s : split_list(sweep_seeds)) {
        try {
          seeds.push_back(std::stoull(s));
        } catch (const std::exception&) {
          throw fairsched::ConfigError("bad seed '" + s + "'");
        }
      }
      const fairsched::experiment::SweepResult result =
          fairsched::experiment::run_sweep(config, seeds, policies);
      write_csv_output(sweep_args.out_path, [&](std::ostream& out) {
        fairsched::experiment::write_sweep_csv(out, result);
      });
    }
  } catch (const fairsched::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
