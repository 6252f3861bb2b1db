#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "fairsched/rng.hpp"
#include "fairsched/types.hpp"

namespace fairsched::shapley {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// A characteristic function: integer value per coalition. The empty coalition
// is always worth 0. Reading an unset non-empty coalition is a contract
// violation, not a default.
class CoalitionValues {
 public:
  explicit CoalitionValues(int org_count) : k_(org_count) {
    if (org_count < 0 || org_count > 32) throw ContractViolation("org count out of range");
  }

  int org_count() const { return k_; }

  void set(Coalition c, std::int64_t value) { v_[c.bits] = value; }

  bool has(Coalition c) const { return c.bits == 0 || v_.count(c.bits) > 0; }

  std::int64_t at(Coalition c) const {
    if (c.bits == 0) return 0;
    auto it = v_.find(c.bits);
    if (it == v_.end()) {
      throw ContractViolation("missing coalition value for mask " + std::to_string(c.bits));
    }
    return it->second;
  }

 private:
  int k_;
  std::unordered_map<std::uint32_t, std::int64_t> v_;
};

// Exact fair contributions for the members of c: a weighted sum of marginal
// values over all subsets, with weights |S'|! (|c|-|S'|-1)! / |c|!. Returned
// org-indexed (size org_count), zero for non-members. The member values sum
// exactly to v(c). CapacityError if |c| > kMaxEnumOrgs.
std::vector<Rational> exact_shapley(const CoalitionValues& v, Coalition c);

// Same computation with values supplied as an array indexed by bitmask
// (values_by_mask[s.bits] = v(s)); the array must cover every subset of c.
std::vector<Rational> exact_shapley(std::span<const std::int64_t> values_by_mask, Coalition c);

// The same quantity computed as the average over all |c|! orderings of the
// marginal value each member adds to the set of its predecessors.
// CapacityError if |c| > kMaxPermOrgs.
std::vector<Rational> shapley_by_permutations(const CoalitionValues& v, Coalition c);

// Number of sampled orderings needed so every estimated contribution is
// within epsilon * v(grand) with confidence lambda:
// ceil((k^2 / epsilon^2) * ln(k / (1 - lambda))), at least 1.
// ConfigError if k < 1, epsilon <= 0, or lambda outside [0, 1).
std::int64_t sample_size(int k, double epsilon, double lambda);

// N orderings of all k orgs drawn with replacement, plus the deduplicated set
// of every ordering prefix (with and without the next org).
struct PrefixSample {
  int k = 0;
  std::vector<std::vector<OrgId>> orderings;
  std::vector<Coalition> distinct;  // sorted by (size, bits); includes empty and grand
};

PrefixSample sample_prefixes(int k, std::int64_t n, std::uint64_t seed);

// All k! orderings, each once, with the same derived structures (test mode).
PrefixSample all_orderings(int k);

// Estimated contribution per org: (1/N) * sum over orderings of
// v(prefix + org) - v(prefix). Marginals accumulate in exact integers before
// the single division, so results are deterministic and order-independent.
// ContractViolation if a needed coalition value is missing.
std::vector<double> estimate_contributions(const PrefixSample& sample,
                                           const CoalitionValues& v);

}  // namespace fairsched::shapley
