#include "fairsched/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>

namespace fairsched::experiment {

const char* policy_name(PolicyKind p) {
  switch (p) {
    case PolicyKind::ExactFair: return "exact";
    case PolicyKind::Rand: return "rand";
    case PolicyKind::DirectContr: return "direct";
    case PolicyKind::RoundRobin: return "rr";
  }
  throw ContractViolation("unknown policy kind");
}

PolicyKind policy_from_name(const std::string& name) {
  if (name == "exact") return PolicyKind::ExactFair;
  if (name == "rand") return PolicyKind::Rand;
  if (name == "direct") return PolicyKind::DirectContr;
  if (name == "rr") return PolicyKind::RoundRobin;
  throw ConfigError("unknown policy '" + name + "' (expected exact, rand, direct, or rr)");
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::vector<Job> build_jobs(const ExperimentConfig& config, std::int64_t& dropped) {
  dropped = 0;
  std::vector<Job> jobs;
  if (config.source.kind == WorkloadSource::Kind::SwfFile) {
    workload::ParseResult parsed = workload::parse_swf_file(config.source.path);
    dropped = parsed.dropped;
    if (config.release_scale != 1.0) {
      workload::scale_releases(parsed.jobs, config.release_scale);
    }
    jobs = workload::assign_orgs(workload::sequentialize(parsed.jobs), config.orgs, config.seed);
  } else {
    jobs = workload::synth_workload(config.source.synth, config.seed);
    if (config.release_scale != 1.0) {
      if (!(config.release_scale > 0.0)) throw ConfigError("release scale must be > 0");
      // floor of a monotone map keeps per-org release order, so seq stays valid
      for (Job& j : jobs) {
        j.release = static_cast<Time>(
            std::floor(static_cast<double>(j.release) * config.release_scale));
      }
    }
  }
  // Jobs released after the horizon never start under any policy; dropping
  // them up front removes a per-org seq suffix (releases non-decreasing in
  // seq), so the remaining lists stay FIFO-valid.
  std::erase_if(jobs, [&](const Job& j) { return j.release > config.t_end; });
  return jobs;
}

void write_trace_csv(const std::string& path, const std::vector<schedulers::TraceRow>& trace,
                     int k) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open trace file '" + path + "'");
  out << "t";
  for (int u = 0; u < k; ++u) out << ",psi_" << u;
  for (int u = 0; u < k; ++u) out << ",phi_" << u;
  out << ",started\n";
  for (const schedulers::TraceRow& row : trace) {
    out << row.t;
    for (std::int64_t v : row.psi) out << ',' << v;
    for (double v : row.phi) out << ',' << fmt_double(v);
    out << ',' << row.started << '\n';
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.orgs < 1) throw ConfigError("at least one organization required");
  if (config.t_end < 0) throw ConfigError("t_end must be >= 0");
  if (config.rand_n < 0) throw ConfigError("sample size override must be >= 0");

  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult result;
  const std::vector<Job> jobs = build_jobs(config, result.jobs_dropped);
  result.jobs_total = static_cast<std::int64_t>(jobs.size());
  const MachineAllocation alloc =
      workload::distribute_machines(config.machines, config.orgs, config.dist);

  const bool want_trace = !config.trace_path.empty();

  schedulers::ExactFairOptions ref_opt;
  ref_opt.keep_trace = want_trace && config.policy == PolicyKind::ExactFair;
  schedulers::ExactFairResult reference =
      schedulers::exact_fair_run(jobs, alloc, config.t_end, ref_opt);

  std::vector<schedulers::TraceRow> trace;
  switch (config.policy) {
    case PolicyKind::ExactFair: {
      result.psi_policy = reference.final_psi;
      trace = std::move(reference.trace);
      break;
    }
    case PolicyKind::Rand: {
      schedulers::RandOptions opt;
      opt.epsilon = config.epsilon;
      opt.lambda = config.lambda;
      opt.n_override = config.rand_n;
      opt.keep_trace = want_trace;
      schedulers::RandResult run =
          schedulers::rand_run(jobs, alloc, config.t_end, config.seed, opt);
      result.psi_policy = std::move(run.final_psi);
      trace = std::move(run.trace);
      break;
    }
    case PolicyKind::DirectContr: {
      schedulers::DirectOptions opt;
      opt.keep_trace = want_trace;
      schedulers::DirectResult run =
          schedulers::direct_contr_run(jobs, alloc, config.t_end, config.seed, opt);
      result.psi_policy = std::move(run.final_psi);
      trace = std::move(run.trace);
      break;
    }
    case PolicyKind::RoundRobin: {
      schedulers::RoundRobinOptions opt;
      opt.keep_trace = want_trace;
      schedulers::RunResult run = schedulers::round_robin_run(jobs, alloc, config.t_end, opt);
      result.psi_policy = std::move(run.final_psi);
      trace = std::move(run.trace);
      break;
    }
  }

  result.psi_reference = reference.final_psi;
  result.report = metrics::fairness_report(result.psi_policy, result.psi_reference,
                                           reference.schedule, config.t_end);
  const auto t1 = std::chrono::steady_clock::now();
  result.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  if (want_trace) write_trace_csv(config.trace_path, trace, config.orgs);
  return result;
}

void write_summary_csv(std::ostream& out, const ExperimentConfig& config,
                       const ExperimentResult& result) {
  out << "policy,workload,orgs,machines,machine_dist,release_scale,seed,t_end,"
         "rand_n,epsilon,lambda,jobs,dropped,delta_psi,p_tot,per_job_unfairness,"
         "relative_unfairness,wall_ms\n";
  const std::string workload_name =
      config.source.kind == WorkloadSource::Kind::SwfFile ? config.source.path : "synthetic";
  std::string dist = config.dist.kind == workload::MachineDist::Kind::Uniform
                         ? "uniform"
                         : "zipf:" + fmt_double(config.dist.theta);
  out << policy_name(config.policy) << ',' << csv_field(workload_name) << ',' << config.orgs
      << ',' << config.machines << ',' << dist << ',' << fmt_double(config.release_scale) << ','
      << config.seed << ',' << config.t_end << ',' << config.rand_n << ','
      << fmt_double(config.epsilon) << ',' << fmt_double(config.lambda) << ','
      << result.jobs_total << ',' << result.jobs_dropped << ',' << result.report.delta_psi << ','
      << result.report.p_tot << ','
      << fmt_double(result.report.per_job_unfairness.convert_to<double>()) << ','
      << fmt_double(result.report.relative_unfairness.convert_to<double>()) << ','
      << fmt_double(result.wall_ms) << '\n';
}

SweepResult run_sweep(const ExperimentConfig& base, const std::vector<std::uint64_t>& seeds,
                      const std::vector<PolicyKind>& policies) {
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
  SweepResult result;
  for (PolicyKind policy : policies) {
    std::vector<double> xs;
    xs.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
      ExperimentConfig config = base;
      config.policy = policy;
      config.seed = seed;
      config.trace_path.clear();
      xs.push_back(run_experiment(config).report.per_job_unfairness.convert_to<double>());
    }
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
    result.rows.push_back(SweepRow{policy, static_cast<int>(seeds.size()), mean,
                                   std::sqrt(var)});
  }
  std::sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::string(policy_name(a.policy)) < std::string(policy_name(b.policy));
  });
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "policy,seeds,mean_per_job_unfairness,stddev_per_job_unfairness\n";
  for (const SweepRow& row : result.rows) {
    out << policy_name(row.policy) << ',' << row.seeds << ','
        << fmt_double(row.mean_per_job_unfairness) << ','
        << fmt_double(row.stddev_per_job_unfairness) << '\n';
  }
}

}  // namespace fairsched::experiment
