#pragma once

// Independent reference implementations used only by tests. Each recomputes a
// library quantity from first principles by a different method, so agreement
// is meaningful evidence rather than a tautology.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <vector>

#include "fairsched/core.hpp"
#include "fairsched/shapley.hpp"
#include "fairsched/types.hpp"
#include "fairsched/utility.hpp"

namespace oracles {

using fairsched::Coalition;
using fairsched::OrgId;
using fairsched::Time;

// Utility by unit-slot enumeration: every executed slot tau < t is worth t - tau.
inline std::int64_t brute_psi(Time start, Time processing, Time t) {
  std::int64_t sum = 0;
  for (Time tau = start; tau < start + processing; ++tau) {
    if (tau < t) sum += t - tau;
  }
  return sum;
}

inline std::int64_t brute_psi(const std::vector<fairsched::core::ScheduleEntry>& entries,
                              Time t, OrgId org = -1) {
  std::int64_t sum = 0;
  for (const auto& e : entries) {
    if (org >= 0 && e.job.org != org) continue;
    sum += brute_psi(e.start, e.job.processing, t);
  }
  return sum;
}

// Shapley value by materializing every ordering with std::next_permutation and
// summing each member's marginal over it (the library walks orderings with a
// different iteration scheme and arbitrary-precision sums).
inline std::vector<fairsched::shapley::Rational> perm_shapley(
    const std::map<std::uint32_t, std::int64_t>& v, Coalition c, int org_count) {
  std::vector<OrgId> order = c.members();  // ascending, so the loop sees every permutation
  std::vector<__int128> sums(static_cast<std::size_t>(org_count), 0);
  std::int64_t fact = 0;
  do {
    ++fact;
    std::uint32_t prefix = 0;
    std::int64_t before = 0;
    for (const OrgId u : order) {
      prefix |= 1u << u;
      const std::int64_t after = v.at(prefix);
      sums[static_cast<std::size_t>(u)] += after - before;
      before = after;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  std::vector<fairsched::shapley::Rational> phi(static_cast<std::size_t>(org_count), 0);
  for (std::size_t u = 0; u < phi.size(); ++u) {
    phi[u] = fairsched::shapley::Rational(static_cast<std::int64_t>(sums[u]), fact);
  }
  return phi;
}

// Value of a coalition of unit jobs run greedily on m machines, at horizon t,
// by direct recurrence over arrival counts (no scheduling code involved).
inline std::int64_t greedy_unit_value(const std::vector<Time>& releases, std::int64_t m,
                                      Time t) {
  std::vector<Time> sorted = releases;
  std::sort(sorted.begin(), sorted.end());
  std::size_t next = 0;
  std::int64_t waiting = 0;
  std::int64_t value = 0;
  for (Time tau = 0; tau < t; ++tau) {
    while (next < sorted.size() && sorted[next] == tau) {
      ++waiting;
      ++next;
    }
    const std::int64_t started = std::min<std::int64_t>(m, waiting);
    waiting -= started;
    value += started * (t - tau);
  }
  return value;
}

// Policy that replays a fixed org sequence, one entry per scheduling decision.
inline fairsched::core::Policy scripted_policy(std::vector<OrgId> script) {
  auto pos = std::make_shared<std::size_t>(0);
  auto owned = std::make_shared<std::vector<OrgId>>(std::move(script));
  return [pos, owned](const fairsched::core::SimState&, Time) -> OrgId {
    if (*pos >= owned->size()) throw fairsched::ContractViolation("script exhausted");
    return (*owned)[(*pos)++];
  };
}

}  // namespace oracles
