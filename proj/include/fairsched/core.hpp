#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "fairsched/types.hpp"

namespace fairsched::core {

struct ScheduleEntry {
  Job job;
  Time start = 0;
  int machine = 0;

  Time end() const { return start + job.processing; }
  bool operator==(const ScheduleEntry&) const = default;
};

// A (partial) assignment of jobs to machines over discrete time. Entries are
// appended in start order. horizon is the last simulated time instant.
struct Schedule {
  std::vector<ScheduleEntry> entries;
  Time horizon = 0;
};

// Discrete-time scheduling state over a fixed machine pool. Jobs never
// preempt or migrate once started. Time advances one step at a time through
// release_arrivals; within a step, start_head places the head job of an org
// on the lowest-id free machine.
class SimState {
 public:
  // machine_ids: the (sorted) global ids of the machines available here.
  // Throws ContractViolation if jobs break the FIFO invariants (seq unique
  // and release non-decreasing in seq within an org) or have processing < 1.
  SimState(const std::vector<Job>& jobs, int org_count, std::vector<int> machine_ids);

  // Moves the release pointer to time t. Must be called with t = 0, 1, 2, ...
  void release_arrivals(Time t);

  int org_count() const { return static_cast<int>(queues_.size()); }
  int machine_count() const { return static_cast<int>(machine_ids_.size()); }

  // Lowest-id free machine at time t, or -1.
  int free_machine(Time t) const;
  bool is_free(int machine_id, Time t) const;

  bool queue_empty(OrgId u) const;
  std::int64_t waiting_count(OrgId u) const;
  bool any_waiting() const { return total_waiting_ > 0; }
  const Job& head(OrgId u) const;  // ContractViolation if queue empty

  // Starts the head job of org u at time t on the lowest free machine
  // (start_head) or on an explicit free machine (start_head_on).
  const ScheduleEntry& start_head(OrgId u, Time t);
  const ScheduleEntry& start_head_on(OrgId u, int machine_id, Time t);

  const Schedule& schedule() const { return schedule_; }
  Schedule take_schedule(Time horizon);

 private:
  void reclaim(Time t) const;

  std::vector<std::vector<Job>> queues_;      // per org, seq order
  std::vector<std::size_t> released_;         // per org: jobs with release <= clock
  std::vector<std::size_t> started_;          // per org: prefix of queue already started
  std::int64_t total_waiting_ = 0;
  Time clock_ = -1;

  std::vector<int> machine_ids_;
  mutable std::set<int> free_;                                        // free machine ids
  mutable std::priority_queue<std::pair<Time, int>,
                              std::vector<std::pair<Time, int>>,
                              std::greater<>> busy_;                  // (end, machine)
  Schedule schedule_;
};

// Chooses which organization takes the next free machine at time t. Called
// only while a machine is free and at least one queue is non-empty; must
// return an org with a waiting job.
using Policy = std::function<OrgId(const SimState&, Time)>;

// Invoked once per time step after all of the step's scheduling decisions.
using StepObserver = std::function<void(const SimState&, Time)>;

// Runs the release/schedule loop from t = 0 to t_end inclusive: at each step,
// jobs with release == t join their org queue, then free machines are filled
// one at a time by the policy. Jobs releasing after t_end never start.
Schedule simulate(const std::vector<Job>& jobs, const MachineAllocation& alloc,
                  const Policy& policy, Time t_end,
                  const StepObserver& observer = nullptr);

enum class ViolationKind {
  Overlap,     // two jobs share a machine at the same time
  FifoOrder,   // an org's jobs started out of seq order (or skipped a seq)
  Greediness,  // a machine sat idle while a released job waited
  EarlyStart,  // a job started before its release
  Malformed,   // duplicate/unknown job, bad machine id, inconsistent fields
};

struct Violation {
  ViolationKind kind;
  Time time = 0;
  int machine = -1;
  OrgId org = -1;
  int seq = -1;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(ViolationKind k) const {
    for (const auto& v : violations) {
      if (v.kind == k) return true;
    }
    return false;
  }
};

// Checks a schedule against the full job list: no machine overlap, per-org
// FIFO order, greediness (no idle machine while a released job waits, at any
// t <= horizon), and start >= release. Violations are reported, not thrown.
ValidationReport validate_schedule(const Schedule& schedule, const std::vector<Job>& jobs,
                                   const MachineAllocation& alloc);

// All 2^|c| subsets of c, ordered by size then by bitmask value.
// CapacityError if |c| > kMaxEnumOrgs.
std::vector<Coalition> enumerate_subcoalitions(Coalition c);

}  // namespace fairsched::core
