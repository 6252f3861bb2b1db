#include "fairsched/utility.hpp"

#include <algorithm>

namespace fairsched::utility {

std::int64_t psi_sp_single(Time start, Time processing, Time t) {
  if (processing < 1) throw ContractViolation("processing must be >= 1");
  if (start > t) return 0;
  // q executed unit parts occupy slots start .. start+q-1; the part at slot
  // tau is worth t - tau, so the sum telescopes to q*(t-start) - q*(q-1)/2.
  const Time q = std::min<Time>(processing, t - start);
  return q * (t - start) - q * (q - 1) / 2;
}

std::int64_t psi_sp(std::span<const Placed> placed, Time t) {
  std::int64_t total = 0;
  for (const Placed& p : placed) total += psi_sp_single(p.start, p.processing, t);
  return total;
}

std::int64_t psi_sp(std::span<const core::ScheduleEntry> entries, Time t) {
  std::int64_t total = 0;
  for (const core::ScheduleEntry& e : entries) {
    total += psi_sp_single(e.start, e.job.processing, t);
  }
  return total;
}

std::int64_t flow_time(std::span<const core::ScheduleEntry> entries, Time t) {
  std::int64_t total = 0;
  for (const core::ScheduleEntry& e : entries) {
    if (e.start > t || e.end() > t) {
      throw DomainError("flow time is undefined while a job is unfinished");
    }
    total += e.end() - e.job.release;
  }
  return total;
}

std::int64_t coalition_value(const core::Schedule& schedule, Coalition c, Time t) {
  std::int64_t total = 0;
  for (const core::ScheduleEntry& e : schedule.entries) {
    if (c.contains(e.job.org)) total += psi_sp_single(e.start, e.job.processing, t);
  }
  return total;
}

UtilityTracker::UtilityTracker(int org_count) {
  if (org_count < 1) throw ContractViolation("org count must be >= 1");
  psi_.assign(static_cast<std::size_t>(org_count), 0);
  units_.assign(static_cast<std::size_t>(org_count), 0);
  running_.assign(static_cast<std::size_t>(org_count), 0);
}

void UtilityTracker::on_start(OrgId org, Time processing, Time now) {
  if (org < 0 || static_cast<std::size_t>(org) >= psi_.size()) {
    throw ContractViolation("org out of range");
  }
  if (processing < 1) throw ContractViolation("processing must be >= 1");
  if (now != clock_) throw ContractViolation("jobs must start at the tracker's clock");
  ++running_[static_cast<std::size_t>(org)];
  ends_.emplace(now + processing, org);
}

void UtilityTracker::advance() {
  const Time t = clock_;
  // Jobs ending at t do not occupy slot [t, t+1).
  while (!ends_.empty() && ends_.top().first <= t) {
    --running_[static_cast<std::size_t>(ends_.top().second)];
    ends_.pop();
  }
  for (std::size_t u = 0; u < psi_.size(); ++u) {
    units_[u] += running_[u];
    psi_[u] += units_[u];
  }
  ++clock_;
}

void UtilityTracker::advance_to(Time t) {
  if (t < clock_) throw ContractViolation("tracker cannot move backwards");
  while (clock_ < t) advance();
}

std::int64_t UtilityTracker::total_psi() const {
  std::int64_t total = 0;
  for (std::int64_t v : psi_) total += v;
  return total;
}

}  // namespace fairsched::utility
