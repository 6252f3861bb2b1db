#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fairsched/types.hpp"

namespace fairsched::workload {

// One accepted line of a standard workload format (SWF) trace.
struct RawJob {
  std::int64_t job_id = 0;
  Time submit = 0;
  Time run_time = 0;
  int proc_count = 0;
  std::int64_t user_id = 0;

  bool operator==(const RawJob&) const = default;
};

struct ParseResult {
  std::vector<RawJob> jobs;   // trace order
  std::int64_t dropped = 0;   // lines removed by the cleaning filters below
};

// Parses an SWF stream: ';' lines are comments, data lines carry exactly the
// standard 18 whitespace-separated integer fields. Lines with run_time <= 0,
// proc_count <= 0, or submit < 0 are dropped and counted, not errors.
// Throws ParseError (with line number) on any malformed line.
ParseResult parse_swf(std::istream& in);
ParseResult parse_swf_file(const std::string& path);  // ConfigError if unreadable

// Replaces every job that asks for p processors with p adjacent single-processor
// copies of the same length. Total work (sum of run_time * proc_count) is kept.
std::vector<RawJob> sequentialize(const std::vector<RawJob>& jobs);

// submit := floor(submit * factor). ConfigError if factor <= 0.
void scale_releases(std::vector<RawJob>& jobs, double factor);

// Maps each distinct user (in order of first appearance) to one of k
// organizations uniformly at random, then builds per-org FIFO job lists:
// seq increases with release time, ties kept in trace order.
std::vector<Job> assign_orgs(const std::vector<RawJob>& jobs, int k, std::uint64_t seed);

struct MachineDist {
  enum class Kind { Uniform, Zipf };
  Kind kind = Kind::Uniform;
  double theta = 1.0;  // Zipf exponent; ConfigError if <= 0 when kind == Zipf
};

// Splits `total` machines over k organizations.
// Uniform: floor(total/k) each, remainder one-by-one to the lowest org ids.
// Zipf: one machine per org, then the remaining total-k seats by largest
// remainder under weights (i+1)^-theta; remainder ties go to the lowest id.
// ConfigError if k < 1 or total < k.
MachineAllocation distribute_machines(int total, int k, const MachineDist& dist);

// Synthetic workload template for one organization: `count` jobs with release
// and processing drawn uniformly from the inclusive ranges. Multiple templates
// may target the same org; their jobs are merged before seq assignment.
struct SynthOrgTemplate {
  OrgId org = 0;
  int count = 0;
  Time release_lo = 0;
  Time release_hi = 0;
  Time processing_lo = 1;
  Time processing_hi = 1;
};

// Deterministic under seed. ConfigError on empty ranges, processing < 1,
// count < 0, or org < 0.
std::vector<Job> synth_workload(const std::vector<SynthOrgTemplate>& templates,
                                std::uint64_t seed);

}  // namespace fairsched::workload
