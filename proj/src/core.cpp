#include "fairsched/core.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace fairsched::core {

SimState::SimState(const std::vector<Job>& jobs, int org_count, std::vector<int> machine_ids)
    : machine_ids_(std::move(machine_ids)) {
  if (org_count < 1) throw ContractViolation("org count must be >= 1");
  queues_.resize(static_cast<std::size_t>(org_count));
  released_.assign(static_cast<std::size_t>(org_count), 0);
  started_.assign(static_cast<std::size_t>(org_count), 0);
  for (const Job& j : jobs) {
    if (j.org < 0 || j.org >= org_count) throw ContractViolation("job org out of range");
    if (j.processing < 1) throw ContractViolation("job processing must be >= 1");
    if (j.release < 0) throw ContractViolation("job release must be >= 0");
    queues_[static_cast<std::size_t>(j.org)].push_back(j);
  }
  for (auto& q : queues_) {
    std::sort(q.begin(), q.end(), [](const Job& a, const Job& b) { return a.seq < b.seq; });
    for (std::size_t i = 1; i < q.size(); ++i) {
      if (q[i].seq == q[i - 1].seq) throw ContractViolation("duplicate seq within org");
      if (q[i].release < q[i - 1].release) {
        throw ContractViolation("release times must be non-decreasing in seq");
      }
    }
  }
  std::sort(machine_ids_.begin(), machine_ids_.end());
  for (std::size_t i = 1; i < machine_ids_.size(); ++i) {
    if (machine_ids_[i] == machine_ids_[i - 1]) throw ContractViolation("duplicate machine id");
  }
  for (int id : machine_ids_) free_.insert(id);
}

void SimState::release_arrivals(Time t) {
  if (t != clock_ + 1) throw ContractViolation("release_arrivals must advance t by exactly 1");
  clock_ = t;
  for (std::size_t u = 0; u < queues_.size(); ++u) {
    auto& q = queues_[u];
    while (released_[u] < q.size() && q[released_[u]].release <= t) {
      ++released_[u];
      ++total_waiting_;
    }
  }
}

void SimState::reclaim(Time t) const {
  while (!busy_.empty() && busy_.top().first <= t) {
    free_.insert(busy_.top().second);
    busy_.pop();
  }
}

int SimState::free_machine(Time t) const {
  reclaim(t);
  return free_.empty() ? -1 : *free_.begin();
}

bool SimState::is_free(int machine_id, Time t) const {
  reclaim(t);
  return free_.count(machine_id) > 0;
}

bool SimState::queue_empty(OrgId u) const {
  return started_.at(static_cast<std::size_t>(u)) >= released_[static_cast<std::size_t>(u)];
}

std::int64_t SimState::waiting_count(OrgId u) const {
  return static_cast<std::int64_t>(released_.at(static_cast<std::size_t>(u)) -
                                   started_[static_cast<std::size_t>(u)]);
}

const Job& SimState::head(OrgId u) const {
  if (queue_empty(u)) throw ContractViolation("head of empty queue");
  return queues_[static_cast<std::size_t>(u)][started_[static_cast<std::size_t>(u)]];
}

const ScheduleEntry& SimState::start_head(OrgId u, Time t) {
  int m = free_machine(t);
  if (m < 0) throw ContractViolation("no free machine");
  return start_head_on(u, m, t);
}

const ScheduleEntry& SimState::start_head_on(OrgId u, int machine_id, Time t) {
  if (t != clock_) throw ContractViolation("start time must equal the current step");
  if (queue_empty(u)) throw ContractViolation("org has no waiting job");
  if (!is_free(machine_id, t)) throw ContractViolation("machine is not free");
  const Job job = queues_[static_cast<std::size_t>(u)][started_[static_cast<std::size_t>(u)]];
  ++started_[static_cast<std::size_t>(u)];
  --total_waiting_;
  free_.erase(machine_id);
  busy_.emplace(t + job.processing, machine_id);
  schedule_.entries.push_back(ScheduleEntry{job, t, machine_id});
  return schedule_.entries.back();
}

Schedule SimState::take_schedule(Time horizon) {
  schedule_.horizon = horizon;
  return schedule_;
}

Schedule simulate(const std::vector<Job>& jobs, const MachineAllocation& alloc,
                  const Policy& policy, Time t_end, const StepObserver& observer) {
  if (t_end < 0) throw ContractViolation("t_end must be >= 0");
  std::vector<int> ids(static_cast<std::size_t>(alloc.total()));
  std::iota(ids.begin(), ids.end(), 0);
  SimState st(jobs, alloc.org_count(), std::move(ids));
  for (Time t = 0; t <= t_end; ++t) {
    st.release_arrivals(t);
    while (st.free_machine(t) >= 0 && st.any_waiting()) {
      OrgId u = policy(st, t);
      if (u < 0 || u >= st.org_count() || st.queue_empty(u)) {
        throw ContractViolation("policy chose an org without a waiting job");
      }
      st.start_head(u, t);
    }
    if (observer) observer(st, t);
  }
  return st.take_schedule(t_end);
}

namespace {

// Greediness sweep helper: values change only at event times.
std::int64_t count_leq(const std::vector<Time>& sorted, Time t) {
  return static_cast<std::int64_t>(
      std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
}

}  // namespace

ValidationReport validate_schedule(const Schedule& schedule, const std::vector<Job>& jobs,
                                   const MachineAllocation& alloc) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, Time time, int machine, OrgId org, int seq,
                 std::string detail) {
    report.violations.push_back(Violation{kind, time, machine, org, seq, std::move(detail)});
  };

  // Index the job list, then tie every entry to a known job.
  std::map<std::pair<OrgId, int>, const Job*> by_key;
  for (const Job& j : jobs) {
    if (!by_key.emplace(std::make_pair(j.org, j.seq), &j).second) {
      add(ViolationKind::Malformed, 0, -1, j.org, j.seq, "duplicate job in job list");
    }
  }
  std::map<std::pair<OrgId, int>, const ScheduleEntry*> started;
  for (const ScheduleEntry& e : schedule.entries) {
    auto key = std::make_pair(e.job.org, e.job.seq);
    auto it = by_key.find(key);
    if (it == by_key.end()) {
      add(ViolationKind::Malformed, e.start, e.machine, e.job.org, e.job.seq,
          "entry references unknown job");
      continue;
    }
    if (*it->second != e.job) {
      add(ViolationKind::Malformed, e.start, e.machine, e.job.org, e.job.seq,
          "entry fields disagree with the job list");
    }
    if (!started.emplace(key, &e).second) {
      add(ViolationKind::Malformed, e.start, e.machine, e.job.org, e.job.seq,
          "job started more than once");
    }
    if (e.machine < 0 || e.machine >= alloc.total()) {
      add(ViolationKind::Malformed, e.start, e.machine, e.job.org, e.job.seq,
          "machine id out of range");
    }
    if (e.start > schedule.horizon) {
      add(ViolationKind::Malformed, e.start, e.machine, e.job.org, e.job.seq,
          "start beyond the schedule horizon");
    }
    if (e.start < e.job.release) {
      add(ViolationKind::EarlyStart, e.start, e.machine, e.job.org, e.job.seq,
          "start before release");
    }
  }

  // Overlap: per machine, entries sorted by start must not intersect.
  std::map<int, std::vector<const ScheduleEntry*>> per_machine;
  for (const ScheduleEntry& e : schedule.entries) per_machine[e.machine].push_back(&e);
  for (auto& [machine, list] : per_machine) {
    std::sort(list.begin(), list.end(), [](const ScheduleEntry* a, const ScheduleEntry* b) {
      return a->start < b->start;
    });
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i]->start < list[i - 1]->end()) {
        add(ViolationKind::Overlap, list[i]->start, machine, list[i]->job.org, list[i]->job.seq,
            "two jobs share the machine");
      }
    }
  }

  // FIFO: per org, starts must be non-decreasing in seq, with no seq skipped.
  std::map<OrgId, std::vector<const ScheduleEntry*>> per_org;
  for (const ScheduleEntry& e : schedule.entries) per_org[e.job.org].push_back(&e);
  for (auto& [org, list] : per_org) {
    std::sort(list.begin(), list.end(), [](const ScheduleEntry* a, const ScheduleEntry* b) {
      return a->job.seq < b->job.seq;
    });
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i]->start < list[i - 1]->start) {
        add(ViolationKind::FifoOrder, list[i]->start, list[i]->machine, org, list[i]->job.seq,
            "started before an earlier-seq job of the same org");
      }
    }
    if (!list.empty()) {
      int max_seq = list.back()->job.seq;
      for (const Job& j : jobs) {
        if (j.org == org && j.seq < max_seq && started.find({org, j.seq}) == started.end()) {
          add(ViolationKind::FifoOrder, list.back()->start, -1, org, j.seq,
              "seq skipped while later jobs started");
        }
      }
    }
  }

  // Greediness: no time t <= horizon may have an idle machine and a released,
  // unstarted job. Both counts are step functions of t; check event points.
  std::vector<Time> starts, ends, releases;
  for (const ScheduleEntry& e : schedule.entries) {
    starts.push_back(e.start);
    ends.push_back(e.end());
  }
  for (const Job& j : jobs) {
    if (j.release <= schedule.horizon) releases.push_back(j.release);
  }
  std::sort(starts.begin(), starts.end());
  std::sort(ends.begin(), ends.end());
  std::sort(releases.begin(), releases.end());
  std::vector<Time> events = releases;
  events.insert(events.end(), starts.begin(), starts.end());
  events.insert(events.end(), ends.begin(), ends.end());
  events.push_back(schedule.horizon);
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  bool violating = false;
  for (Time t : events) {
    if (t < 0 || t > schedule.horizon) continue;
    std::int64_t busy = count_leq(starts, t) - count_leq(ends, t);
    std::int64_t idle = alloc.total() - busy;
    std::int64_t waiting = count_leq(releases, t) - count_leq(starts, t);
    bool bad = idle > 0 && waiting > 0;
    if (bad && !violating) {
      add(ViolationKind::Greediness, t, -1, -1, -1,
          std::to_string(idle) + " idle machine(s) while " + std::to_string(waiting) +
              " released job(s) wait");
    }
    violating = bad;
  }

  return report;
}

std::vector<Coalition> enumerate_subcoalitions(Coalition c) {
  if (c.size() > kMaxEnumOrgs) throw CapacityError("coalition too large to enumerate");
  std::vector<Coalition> out;
  out.reserve(1u << c.size());
  std::uint32_t sub = c.bits;
  while (true) {
    out.push_back(Coalition(sub));
    if (sub == 0) break;
    sub = (sub - 1) & c.bits;
  }
  std::sort(out.begin(), out.end(), [](Coalition a, Coalition b) {
    int sa = a.size(), sb = b.size();
    return sa != sb ? sa < sb : a.bits < b.bits;
  });
  return out;
}

}  // namespace fairsched::core
