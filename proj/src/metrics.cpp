#include "fairsched/metrics.hpp"

#include <algorithm>
#include <cstdlib>

#include "fairsched/utility.hpp"

namespace fairsched::metrics {

std::int64_t manhattan(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.size() != b.size()) throw ContractViolation("utility vectors differ in length");
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += a[i] >= b[i] ? a[i] - b[i] : b[i] - a[i];
  }
  return sum;
}

std::int64_t p_tot(const core::Schedule& schedule, Time t_end) {
  std::int64_t parts = 0;
  for (const core::ScheduleEntry& e : schedule.entries) {
    if (e.start > t_end) continue;
    parts += std::min<Time>(e.job.processing, t_end - e.start);
  }
  return parts;
}

FairnessReport fairness_report(const std::vector<std::int64_t>& psi_policy,
                               const std::vector<std::int64_t>& psi_reference,
                               const core::Schedule& reference, Time t_end) {
  if (psi_policy.size() != psi_reference.size()) {
    throw ContractViolation("utility vectors differ in length");
  }
  std::int64_t ref_value = 0;
  for (std::int64_t v : psi_reference) ref_value += v;
  const int k = static_cast<int>(psi_reference.size());
  const std::int64_t recomputed =
      utility::coalition_value(reference, Coalition::grand(k), t_end);
  if (ref_value != recomputed) {
    throw ContractViolation("reference utilities do not match the reference schedule");
  }

  FairnessReport r;
  r.delta_psi = manhattan(psi_policy, psi_reference);
  r.p_tot = p_tot(reference, t_end);
  r.per_job_unfairness =
      r.p_tot > 0 ? shapley::Rational(r.delta_psi, r.p_tot) : shapley::Rational(0);
  r.relative_unfairness =
      ref_value > 0 ? shapley::Rational(r.delta_psi, ref_value) : shapley::Rational(0);
  return r;
}

}  // namespace fairsched::metrics
