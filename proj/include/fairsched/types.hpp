#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairsched {

using Time = std::int64_t;
using OrgId = int;

// Hard cap for algorithms that enumerate all subsets of the organization set.
inline constexpr int kMaxEnumOrgs = 20;
// Hard cap for algorithms that enumerate all orderings of the organization set.
inline constexpr int kMaxPermOrgs = 8;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user-supplied configuration (flags, spec strings, distribution params).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input data; carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::int64_t line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::int64_t line() const { return line_; }

 private:
  std::int64_t line_;
};

// Problem size exceeds a hard cap of an exponential or factorial algorithm.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// A value is undefined for the given inputs (e.g. flow time of an unfinished job).
class DomainError : public Error {
 public:
  using Error::Error;
};

// One job owned by an organization. seq is the job's FIFO position within its
// organization: jobs of one org must start in increasing seq order, and release
// times are non-decreasing in seq.
struct Job {
  OrgId org = 0;
  int seq = 0;
  Time release = 0;
  Time processing = 1;

  bool operator==(const Job&) const = default;
};

// How many machines each organization contributes to the shared pool.
// Machines get global ids 0..total()-1, laid out org 0 first, then org 1, etc.
// Counts of zero are representable (an org may own no machines); the
// distribution routines in workload:: always grant at least one per org.
class MachineAllocation {
 public:
  MachineAllocation() = default;
  explicit MachineAllocation(std::vector<int> counts) : counts_(std::move(counts)) {
    offsets_.reserve(counts_.size() + 1);
    offsets_.push_back(0);
    for (int c : counts_) {
      if (c < 0) throw ConfigError("machine count must be >= 0");
      offsets_.push_back(offsets_.back() + c);
    }
  }

  int org_count() const { return static_cast<int>(counts_.size()); }
  int total() const { return offsets_.empty() ? 0 : offsets_.back(); }
  int count(OrgId u) const { return counts_.at(static_cast<std::size_t>(u)); }
  const std::vector<int>& counts() const { return counts_; }

  // First global machine id owned by org u.
  int first_machine_of(OrgId u) const { return offsets_.at(static_cast<std::size_t>(u)); }

  OrgId owner_of(int machine) const {
    if (machine < 0 || machine >= total()) throw ContractViolation("machine id out of range");
    for (OrgId u = 0; u < org_count(); ++u) {
      if (machine < offsets_[static_cast<std::size_t>(u) + 1]) return u;
    }
    throw ContractViolation("machine id out of range");
  }

 private:
  std::vector<int> counts_;
  std::vector<int> offsets_;
};

// A set of organizations, stored as a bitmask over org ids 0..31.
struct Coalition {
  std::uint32_t bits = 0;

  Coalition() = default;
  explicit Coalition(std::uint32_t b) : bits(b) {}

  static Coalition grand(int k) {
    if (k < 0 || k > 32) throw ContractViolation("org count out of range");
    return Coalition(k == 32 ? ~0u : ((1u << k) - 1u));
  }

  bool contains(OrgId u) const { return (bits >> u) & 1u; }
  Coalition with(OrgId u) const { return Coalition(bits | (1u << u)); }
  Coalition without(OrgId u) const { return Coalition(bits & ~(1u << u)); }
  int size() const { return std::popcount(bits); }
  bool empty() const { return bits == 0; }

  std::vector<OrgId> members() const {
    std::vector<OrgId> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (OrgId u = 0; u < 32; ++u) {
      if (contains(u)) out.push_back(u);
    }
    return out;
  }

  bool operator==(const Coalition&) const = default;
};

}  // namespace fairsched
