#include "fairsched/workload.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "fairsched/rng.hpp"

namespace fairsched::workload {

namespace {

constexpr int kSwfFieldCount = 18;

// Seed streams so the independent random decisions of one experiment
// never share an engine state.
constexpr std::uint64_t kStreamAssignOrgs = 0xa551u;
constexpr std::uint64_t kStreamSynth = 0x517fu;

bool parse_int_field(const std::string& token, std::int64_t& out) {
  if (token.empty()) return false;
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  long long value = std::strtoll(begin, &end, 10);
  if (errno != 0 || end != begin + token.size()) return false;
  out = value;
  return true;
}

}  // namespace

ParseResult parse_swf(std::istream& in) {
  ParseResult result;
  std::string line;
  std::int64_t line_no = 0;
  std::vector<std::string> fields;
  fields.reserve(kSwfFieldCount);
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;  // blank
    if (line[first] == ';') continue;          // comment
    fields.clear();
    std::istringstream split(line);
    std::string token;
    while (split >> token) fields.push_back(token);
    if (static_cast<int>(fields.size()) != kSwfFieldCount) {
      throw ParseError("expected " + std::to_string(kSwfFieldCount) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    }
    std::int64_t values[kSwfFieldCount];
    for (int i = 0; i < kSwfFieldCount; ++i) {
      if (!parse_int_field(fields[static_cast<std::size_t>(i)], values[i])) {
        throw ParseError("field " + std::to_string(i + 1) + " is not an integer: '" +
                             fields[static_cast<std::size_t>(i)] + "'",
                         line_no);
      }
    }
    RawJob job;
    job.job_id = values[0];
    job.submit = values[1];
    job.run_time = values[3];
    job.proc_count = static_cast<int>(values[4]);
    job.user_id = values[11];
    if (job.run_time <= 0 || job.proc_count <= 0 || job.submit < 0) {
      ++result.dropped;
      continue;
    }
    result.jobs.push_back(job);
  }
  return result;
}

ParseResult parse_swf_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open workload file: " + path);
  return parse_swf(in);
}

std::vector<RawJob> sequentialize(const std::vector<RawJob>& jobs) {
  std::vector<RawJob> out;
  std::size_t total = 0;
  for (const RawJob& j : jobs) total += static_cast<std::size_t>(j.proc_count);
  out.reserve(total);
  for (const RawJob& j : jobs) {
    RawJob copy = j;
    copy.proc_count = 1;
    for (int i = 0; i < j.proc_count; ++i) out.push_back(copy);
  }
  return out;
}

void scale_releases(std::vector<RawJob>& jobs, double factor) {
  if (!(factor > 0.0)) throw ConfigError("release scale factor must be > 0");
  for (RawJob& j : jobs) {
    j.submit = static_cast<Time>(std::floor(static_cast<double>(j.submit) * factor));
  }
}

std::vector<Job> assign_orgs(const std::vector<RawJob>& jobs, int k, std::uint64_t seed) {
  if (k < 1) throw ConfigError("org count must be >= 1");
  for (const RawJob& j : jobs) {
    if (j.proc_count != 1) {
      throw ContractViolation("assign_orgs expects sequentialized jobs (proc_count == 1)");
    }
  }
  rng::Engine eng = rng::make_engine(seed, kStreamAssignOrgs);
  // Users draw their org in order of first appearance.
  std::unordered_map<std::int64_t, OrgId> org_of;
  org_of.reserve(jobs.size());
  for (const RawJob& j : jobs) {
    if (org_of.find(j.user_id) == org_of.end()) {
      org_of.emplace(j.user_id, static_cast<OrgId>(rng::uniform_below(eng, static_cast<std::uint64_t>(k))));
    }
  }
  // Per-org FIFO lists: non-decreasing release, ties in trace order.
  std::vector<std::vector<std::size_t>> per_org(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    per_org[static_cast<std::size_t>(org_of.at(jobs[i].user_id))].push_back(i);
  }
  std::vector<Job> out;
  out.reserve(jobs.size());
  for (OrgId u = 0; u < k; ++u) {
    auto& idx = per_org[static_cast<std::size_t>(u)];
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return jobs[a].submit < jobs[b].submit;
    });
    int seq = 0;
    for (std::size_t i : idx) {
      out.push_back(Job{u, seq++, jobs[i].submit, jobs[i].run_time});
    }
  }
  return out;
}

MachineAllocation distribute_machines(int total, int k, const MachineDist& dist) {
  if (k < 1) throw ConfigError("org count must be >= 1");
  if (total < k) throw ConfigError("need at least one machine per organization");
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  if (dist.kind == MachineDist::Kind::Uniform) {
    int base = total / k;
    int rem = total % k;
    for (int u = 0; u < k; ++u) counts[static_cast<std::size_t>(u)] = base + (u < rem ? 1 : 0);
  } else {
    if (!(dist.theta > 0.0)) throw ConfigError("zipf theta must be > 0");
    // One machine each, then the rest by largest remainder under rank weights.
    for (int u = 0; u < k; ++u) counts[static_cast<std::size_t>(u)] = 1;
    int rest = total - k;
    if (rest > 0) {
      std::vector<long double> w(static_cast<std::size_t>(k));
      long double wsum = 0.0L;
      for (int u = 0; u < k; ++u) {
        w[static_cast<std::size_t>(u)] = std::pow(static_cast<long double>(u + 1),
                                                  -static_cast<long double>(dist.theta));
        wsum += w[static_cast<std::size_t>(u)];
      }
      std::vector<long double> remainder(static_cast<std::size_t>(k));
      int assigned = 0;
      for (int u = 0; u < k; ++u) {
        long double quota = static_cast<long double>(rest) * w[static_cast<std::size_t>(u)] / wsum;
        long double fl = std::floor(quota);
        counts[static_cast<std::size_t>(u)] += static_cast<int>(fl);
        assigned += static_cast<int>(fl);
        remainder[static_cast<std::size_t>(u)] = quota - fl;
      }
      std::vector<int> by_rem(static_cast<std::size_t>(k));
      std::iota(by_rem.begin(), by_rem.end(), 0);
      std::stable_sort(by_rem.begin(), by_rem.end(), [&](int a, int b) {
        return remainder[static_cast<std::size_t>(a)] > remainder[static_cast<std::size_t>(b)];
      });
      for (int i = 0; i < rest - assigned; ++i) {
        ++counts[static_cast<std::size_t>(by_rem[static_cast<std::size_t>(i)])];
      }
    }
  }
  return MachineAllocation(counts);
}

std::vector<Job> synth_workload(const std::vector<SynthOrgTemplate>& templates,
                                std::uint64_t seed) {
  for (const SynthOrgTemplate& t : templates) {
    if (t.org < 0) throw ConfigError("synthetic template org must be >= 0");
    if (t.count < 0) throw ConfigError("synthetic template count must be >= 0");
    if (t.release_hi < t.release_lo || t.release_lo < 0) {
      throw ConfigError("synthetic template release range is empty or negative");
    }
    if (t.processing_hi < t.processing_lo || t.processing_lo < 1) {
      throw ConfigError("synthetic template processing range is empty or below 1");
    }
  }
  rng::Engine eng = rng::make_engine(seed, kStreamSynth);
  std::unordered_map<OrgId, std::vector<std::pair<Time, Time>>> per_org;  // (release, processing)
  for (const SynthOrgTemplate& t : templates) {
    auto& list = per_org[t.org];
    for (int i = 0; i < t.count; ++i) {
      Time release = rng::uniform_range(eng, t.release_lo, t.release_hi);
      Time processing = rng::uniform_range(eng, t.processing_lo, t.processing_hi);
      list.emplace_back(release, processing);
    }
  }
  std::vector<OrgId> orgs;
  orgs.reserve(per_org.size());
  for (const auto& [u, list] : per_org) orgs.push_back(u);
  std::sort(orgs.begin(), orgs.end());
  std::vector<Job> out;
  for (OrgId u : orgs) {
    auto& list = per_org[u];
    std::stable_sort(list.begin(), list.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    int seq = 0;
    for (const auto& [release, processing] : list) {
      out.push_back(Job{u, seq++, release, processing});
    }
  }
  return out;
}

}  // namespace fairsched::workload
