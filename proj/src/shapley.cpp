#include "fairsched/shapley.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

namespace fairsched::shapley {

namespace {

constexpr std::uint64_t kStreamOrderings = 0x0bdeu;

// 20! fits in int64, and (|S|-1)! * (|c|-|S|)! is maximal at the ends of the
// range, so every weight numerator below stays within int64 for |c| <= 20.
constexpr int kMaxFact = kMaxEnumOrgs;

const std::int64_t* factorials() {
  static const auto table = [] {
    std::array<std::int64_t, kMaxFact + 1> f{};
    f[0] = 1;
    for (int i = 1; i <= kMaxFact; ++i) f[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i - 1)] * i;
    return f;
  }();
  return table.data();
}

template <class ValueAt>
std::vector<Rational> exact_shapley_impl(int org_count, Coalition c, ValueAt&& value_at) {
  if (c.size() > kMaxEnumOrgs) throw CapacityError("coalition too large for exact contributions");
  const std::int64_t* fact = factorials();
  const int n = c.size();
  std::vector<BigInt> num(static_cast<std::size_t>(org_count), BigInt(0));
  // Every non-empty subset S contributes weight * (v(S) - v(S \ u)) to each
  // of its members u, with weight (|S|-1)! (n-|S|)!; denominators are n!.
  std::uint32_t sub = c.bits;
  while (sub != 0) {
    const int s = std::popcount(sub);
    const std::int64_t weight = fact[s - 1] * fact[n - s];
    const std::int64_t v_s = value_at(Coalition(sub));
    std::uint32_t rest = sub;
    while (rest != 0) {
      const int u = std::countr_zero(rest);
      rest &= rest - 1;
      const std::int64_t marg = v_s - value_at(Coalition(sub).without(u));
      num[static_cast<std::size_t>(u)] += BigInt(weight) * marg;
    }
    sub = (sub - 1) & c.bits;
  }
  std::vector<Rational> phi(static_cast<std::size_t>(org_count), Rational(0));
  for (OrgId u : c.members()) {
    phi[static_cast<std::size_t>(u)] = Rational(num[static_cast<std::size_t>(u)], BigInt(fact[n]));
  }
  return phi;
}

}  // namespace

std::vector<Rational> exact_shapley(const CoalitionValues& v, Coalition c) {
  return exact_shapley_impl(v.org_count(), c, [&](Coalition s) { return v.at(s); });
}

std::vector<Rational> exact_shapley(std::span<const std::int64_t> values_by_mask, Coalition c) {
  if (values_by_mask.size() < (std::size_t{1} << c.size())) {
    throw ContractViolation("value array does not cover all subsets");
  }
  const int org_count = c.empty() ? 1 : (31 - std::countl_zero(c.bits | 1u)) + 1;
  return exact_shapley_impl(org_count, c, [&](Coalition s) {
    if (s.bits >= values_by_mask.size()) throw ContractViolation("value array too small");
    return values_by_mask[s.bits];
  });
}

std::vector<Rational> shapley_by_permutations(const CoalitionValues& v, Coalition c) {
  if (c.size() > kMaxPermOrgs) {
    throw CapacityError("coalition too large to enumerate orderings");
  }
  std::vector<OrgId> members = c.members();
  const int n = static_cast<int>(members.size());
  std::vector<BigInt> sum(static_cast<std::size_t>(v.org_count()), BigInt(0));
  if (n == 0) return std::vector<Rational>(static_cast<std::size_t>(v.org_count()), Rational(0));
  std::sort(members.begin(), members.end());
  do {
    Coalition prefix;
    for (OrgId u : members) {
      const Coalition next = prefix.with(u);
      sum[static_cast<std::size_t>(u)] += v.at(next) - v.at(prefix);
      prefix = next;
    }
  } while (std::next_permutation(members.begin(), members.end()));
  std::vector<Rational> phi(static_cast<std::size_t>(v.org_count()), Rational(0));
  for (OrgId u : c.members()) {
    phi[static_cast<std::size_t>(u)] =
        Rational(sum[static_cast<std::size_t>(u)], BigInt(factorials()[n]));
  }
  return phi;
}

std::int64_t sample_size(int k, double epsilon, double lambda) {
  if (k < 1) throw ConfigError("org count must be >= 1");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(lambda >= 0.0) || lambda >= 1.0) throw ConfigError("lambda must be in [0, 1)");
  const double kk = static_cast<double>(k);
  const double n = std::ceil((kk * kk) / (epsilon * epsilon) * std::log(kk / (1.0 - lambda)));
  if (!std::isfinite(n)) throw ConfigError("sample size overflows");
  if (n > 1e8) throw CapacityError("sample size too large: " + std::to_string(n));
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(n));
}

namespace {

void finish_sample(PrefixSample& sample) {
  std::set<std::uint32_t> seen;
  for (const auto& ord : sample.orderings) {
    std::uint32_t prefix = 0;
    seen.insert(prefix);
    for (OrgId u : ord) {
      prefix |= 1u << u;
      seen.insert(prefix);
    }
  }
  sample.distinct.reserve(seen.size());
  for (std::uint32_t bits : seen) sample.distinct.push_back(Coalition(bits));
  std::sort(sample.distinct.begin(), sample.distinct.end(), [](Coalition a, Coalition b) {
    int sa = a.size(), sb = b.size();
    return sa != sb ? sa < sb : a.bits < b.bits;
  });
}

}  // namespace

PrefixSample sample_prefixes(int k, std::int64_t n, std::uint64_t seed) {
  if (k < 1 || k > 32) throw ConfigError("org count out of range");
  if (n < 1) throw ConfigError("need at least one ordering");
  PrefixSample sample;
  sample.k = k;
  sample.orderings.reserve(static_cast<std::size_t>(n));
  rng::Engine eng = rng::make_engine(seed, kStreamOrderings);
  std::vector<OrgId> base(static_cast<std::size_t>(k));
  std::iota(base.begin(), base.end(), 0);
  for (std::int64_t i = 0; i < n; ++i) {
    std::vector<OrgId> ord = base;
    rng::shuffle(ord, eng);
    sample.orderings.push_back(std::move(ord));
  }
  finish_sample(sample);
  return sample;
}

PrefixSample all_orderings(int k) {
  if (k < 1 || k > kMaxPermOrgs) throw CapacityError("org count too large to enumerate orderings");
  PrefixSample sample;
  sample.k = k;
  std::vector<OrgId> ord(static_cast<std::size_t>(k));
  std::iota(ord.begin(), ord.end(), 0);
  do {
    sample.orderings.push_back(ord);
  } while (std::next_permutation(ord.begin(), ord.end()));
  finish_sample(sample);
  return sample;
}

std::vector<double> estimate_contributions(const PrefixSample& sample,
                                           const CoalitionValues& v) {
  if (sample.k < 1 || sample.orderings.empty()) {
    throw ContractViolation("sample holds no orderings");
  }
  // Marginals are integers; sum exactly, divide once.
  std::vector<__int128> sum(static_cast<std::size_t>(sample.k), 0);
  for (const auto& ord : sample.orderings) {
    Coalition prefix;
    std::int64_t v_prefix = 0;
    for (OrgId u : ord) {
      const Coalition next = prefix.with(u);
      const std::int64_t v_next = v.at(next);
      sum[static_cast<std::size_t>(u)] += v_next - v_prefix;
      prefix = next;
      v_prefix = v_next;
    }
  }
  const double n = static_cast<double>(sample.orderings.size());
  std::vector<double> phi(static_cast<std::size_t>(sample.k));
  for (std::size_t u = 0; u < phi.size(); ++u) {
    phi[u] = static_cast<double>(static_cast<long double>(sum[u])) / n;
  }
  return phi;
}

}  // namespace fairsched::shapley
