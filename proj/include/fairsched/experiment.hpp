#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairsched/metrics.hpp"
#include "fairsched/schedulers.hpp"
#include "fairsched/types.hpp"
#include "fairsched/workload.hpp"

namespace fairsched::experiment {

enum class PolicyKind { ExactFair, Rand, DirectContr, RoundRobin };

const char* policy_name(PolicyKind p);
PolicyKind policy_from_name(const std::string& name);  // ConfigError if unknown

struct WorkloadSource {
  enum class Kind { SwfFile, Synthetic };
  Kind kind = Kind::Synthetic;
  std::string path;  // SwfFile
  std::vector<workload::SynthOrgTemplate> synth;
};

struct ExperimentConfig {
  WorkloadSource source;
  int orgs = 1;
  int machines = 1;
  workload::MachineDist dist;
  double release_scale = 1.0;
  PolicyKind policy = PolicyKind::ExactFair;
  std::int64_t rand_n = 0;  // > 0 overrides the computed sample size
  double epsilon = 0.1;
  double lambda = 0.95;
  std::uint64_t seed = 1;
  Time t_end = 0;
  std::string trace_path;  // per-step trace CSV; empty = none
};

struct ExperimentResult {
  metrics::FairnessReport report;
  std::vector<std::int64_t> psi_policy;
  std::vector<std::int64_t> psi_reference;
  std::int64_t jobs_total = 0;    // jobs in play after t_end truncation
  std::int64_t jobs_dropped = 0;  // trace lines removed by cleaning filters
  double wall_ms = 0.0;
};

// Builds the workload (trace or synthetic), distributes machines, runs the
// exact-fair reference and the configured policy on identical inputs, and
// reports the unfairness of the policy. Jobs released after t_end are
// ignored. Deterministic under (config, seed) except for wall_ms.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Summary CSV: header plus one row. Fields containing separators are quoted.
void write_summary_csv(std::ostream& out, const ExperimentConfig& config,
                       const ExperimentResult& result);

struct SweepRow {
  PolicyKind policy;
  int seeds = 0;
  double mean_per_job_unfairness = 0.0;
  double stddev_per_job_unfairness = 0.0;  // population standard deviation
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by policy name
};

// Runs every (policy, seed) cell of the grid on the config template.
SweepResult run_sweep(const ExperimentConfig& base, const std::vector<std::uint64_t>& seeds,
                      const std::vector<PolicyKind>& policies);

void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace fairsched::experiment
