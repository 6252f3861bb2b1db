#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fairsched/core.hpp"
#include "fairsched/shapley.hpp"
#include "fairsched/types.hpp"

namespace fairsched::metrics {

// Sum of absolute per-org differences. ContractViolation on size mismatch.
std::int64_t manhattan(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

// Total executed unit parts of a schedule by t_end:
// sum over entries with start <= t_end of min(processing, t_end - start).
std::int64_t p_tot(const core::Schedule& schedule, Time t_end);

struct FairnessReport {
  std::int64_t delta_psi = 0;            // Manhattan distance to the reference
  std::int64_t p_tot = 0;                // executed parts of the reference
  shapley::Rational per_job_unfairness;  // delta_psi / p_tot (0 if p_tot = 0)
  shapley::Rational relative_unfairness; // delta_psi / v(reference) (0 if v = 0)
};

// Compares a policy's final utilities against the exact-fair reference run on
// the same inputs. ContractViolation if the vectors disagree in size or
// psi_reference does not sum to the reference schedule's value at t_end.
FairnessReport fairness_report(const std::vector<std::int64_t>& psi_policy,
                               const std::vector<std::int64_t>& psi_reference,
                               const core::Schedule& reference, Time t_end);

}  // namespace fairsched::metrics
