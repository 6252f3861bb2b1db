#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fairsched/core.hpp"
#include "fairsched/shapley.hpp"
#include "fairsched/types.hpp"
#include "fairsched/utility.hpp"

namespace fairsched::schedulers {

using shapley::Rational;

// End-of-step snapshot: utilities at horizon t, the contribution vector used
// for that step's decisions (exact values rendered to double; zeros for
// policies without a contribution model), and the number of jobs started at t.
struct TraceRow {
  Time t = 0;
  std::vector<std::int64_t> psi;
  std::vector<double> phi;
  std::int64_t started = 0;
};

struct RunResult {
  core::Schedule schedule;              // grand-coalition schedule
  std::vector<std::int64_t> final_psi;  // per org, at horizon t_end
  std::vector<TraceRow> trace;          // filled when keep_trace
};

// One scheduling decision inside the exact policy, exposed for verification:
// the eligible orgs (waiting jobs), the distance score of each, the chosen org.
struct ExactFairDecision {
  Coalition coalition;
  Time t = 0;
  OrgId chosen = -1;
  std::vector<OrgId> eligible;
  std::vector<Rational> distances;  // aligned with eligible
};

struct ExactFairOptions {
  bool keep_trace = false;
  bool keep_exact_phi = false;  // per-step exact grand-coalition contributions
  std::function<void(const ExactFairDecision&)> on_decision;
  // When set, selection minimizes `distance` under this utility instead of
  // the built-in strategy-proof utility's max-deficit rule.
  utility::UtilityFn custom_utility;
};

struct ExactFairResult : RunResult {
  std::vector<Rational> final_phi;                // grand coalition, at t_end
  std::vector<std::vector<Rational>> phi_exact;   // per step, when keep_exact_phi
};

// The exact fair policy. Maintains, for every non-empty subcoalition, its own
// greedy schedule and utilities; each step recomputes every coalition's value
// and exact contributions (smallest coalitions first), then fills free
// machines with the head job of the org whose deficit (phi - psi) is largest,
// ties to the lowest org id. CapacityError if org count > kMaxEnumOrgs.
ExactFairResult exact_fair_run(const std::vector<Job>& jobs, const MachineAllocation& alloc,
                               Time t_end, const ExactFairOptions& opt = {});

// Distance of the utility vector from the contribution vector if `candidate`
// received its head job now: the candidate's utility rises by delta_psi and
// every member's contribution by delta_psi / |members|.
// |phi_c + d/n - psi_c - d| + sum over other members |phi_u + d/n - psi_u|.
Rational distance(const std::vector<OrgId>& members, const std::vector<Rational>& phi,
                  const std::vector<std::int64_t>& psi, OrgId candidate,
                  const Rational& delta_psi);

// argmax over eligible orgs of phi - psi, ties to the lowest org id.
// ContractViolation if eligible is empty. Under the strategy-proof utility a
// newly started job is worth the same one-step-ahead gain for every
// candidate, so this org also minimizes `distance`.
OrgId sp_select(const std::vector<OrgId>& eligible, const std::vector<Rational>& phi,
                const std::vector<std::int64_t>& psi);

struct RandOptions {
  double epsilon = 0.1;
  double lambda = 0.95;
  std::int64_t n_override = 0;  // > 0: use exactly this many orderings
  bool enumerate_all = false;   // test mode: every ordering once
  bool keep_trace = false;
};

struct RandResult : RunResult {
  std::int64_t n = 0;                      // orderings used
  std::vector<double> final_phi_hat;       // estimated contributions at t_end
  // Value counter per sampled coalition at t_end, sorted by (size, bits).
  std::vector<std::pair<Coalition, std::int64_t>> final_counters;
};

// Sampling-based approximation of the exact policy. Coalition values are kept
// as plain counters updated by the unit-capacity rule (each step a coalition
// finishes min(its machines, its waiting jobs) jobs); contributions are
// estimated from N sampled orderings; free machines go to the eligible org
// with the largest estimated deficit.
RandResult rand_run(const std::vector<Job>& jobs, const MachineAllocation& alloc,
                    Time t_end, std::uint64_t seed, const RandOptions& opt = {});

struct DirectOptions {
  bool keep_trace = false;
};

struct DirectResult : RunResult {
  std::vector<std::int64_t> final_phi;  // accumulated machine-owner credit
};

// Direct-contribution heuristic. Per step, machines are visited in a fresh
// random order: a busy machine credits one finished unit to the running job's
// owner (finUt) and to the machine's owner (finCon); a free machine starts
// the head job of the org with the largest deficit, crediting both counters.
// psi and phi integrate finUt / finCon one step later, so psi matches the
// strategy-proof utility of the produced schedule exactly.
DirectResult direct_contr_run(const std::vector<Job>& jobs, const MachineAllocation& alloc,
                              Time t_end, std::uint64_t seed, const DirectOptions& opt = {});

struct RoundRobinOptions {
  bool keep_trace = false;
};

// Contribution-blind baseline: a rotating pointer gives each scheduling slot
// to the next org in cyclic order that has a waiting job.
RunResult round_robin_run(const std::vector<Job>& jobs, const MachineAllocation& alloc,
                          Time t_end, const RoundRobinOptions& opt = {});

}  // namespace fairsched::schedulers
