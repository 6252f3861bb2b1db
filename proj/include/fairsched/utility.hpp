#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "fairsched/core.hpp"
#include "fairsched/types.hpp"

namespace fairsched::utility {

// A started job, reduced to what the utility of a schedule depends on.
struct Placed {
  Time start = 0;
  Time processing = 1;
};

// Utility of one organization's started jobs at horizon t: every executed
// unit part at slot tau < t is worth t - tau. Jobs starting at or after t
// contribute nothing; partially executed jobs count only their executed
// parts. Always an exact integer.
std::int64_t psi_sp(std::span<const Placed> placed, Time t);
std::int64_t psi_sp(std::span<const core::ScheduleEntry> entries, Time t);
std::int64_t psi_sp_single(Time start, Time processing, Time t);

// Sum of (start + processing - release) over the entries. DomainError if any
// entry is unfinished at t (start + processing > t) or starts after t.
std::int64_t flow_time(std::span<const core::ScheduleEntry> entries, Time t);

// Sum of psi_sp over the coalition's members, from one shared schedule.
std::int64_t coalition_value(const core::Schedule& schedule, Coalition c, Time t);

// Signature for a pluggable utility: value of one org's entries at horizon t.
using UtilityFn =
    std::function<std::int64_t(std::span<const core::ScheduleEntry>, Time)>;

// Incremental per-org psi_sp over a growing schedule. Invariant: after
// advance_to(t), psi(u) equals psi_sp of u's started jobs at horizon t.
// advance() moves the clock from t to t+1 by first crediting one new unit
// part per machine slot occupied during [t, t+1), then adding each org's
// executed-part count to its utility.
class UtilityTracker {
 public:
  explicit UtilityTracker(int org_count);

  // Registers a job starting now; now must equal clock(). processing >= 1.
  void on_start(OrgId org, Time processing, Time now);
  void advance();
  void advance_to(Time t);

  Time clock() const { return clock_; }
  std::int64_t psi(OrgId u) const { return psi_.at(static_cast<std::size_t>(u)); }
  std::int64_t units(OrgId u) const { return units_.at(static_cast<std::size_t>(u)); }
  const std::vector<std::int64_t>& psi_all() const { return psi_; }
  std::int64_t total_psi() const;

 private:
  Time clock_ = 0;
  std::vector<std::int64_t> psi_;
  std::vector<std::int64_t> units_;    // executed unit parts (slots < clock)
  std::vector<std::int64_t> running_;  // jobs currently occupying a machine
  std::priority_queue<std::pair<Time, OrgId>, std::vector<std::pair<Time, OrgId>>,
                      std::greater<>> ends_;
};

}  // namespace fairsched::utility
