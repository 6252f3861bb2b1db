#include "fairsched/schedulers.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <utility>

#include "fairsched/rng.hpp"

namespace fairsched::schedulers {

namespace {

constexpr std::uint64_t kStreamDirectPerm = 0xd1c7;

void check_run_args(int k, Time t_end) {
  if (k < 1) throw ConfigError("at least one organization required");
  if (t_end < 0) throw ConfigError("t_end must be >= 0");
}

void check_job_orgs(const std::vector<Job>& jobs, int k) {
  for (const Job& j : jobs) {
    if (j.org < 0 || j.org >= k) {
      throw ContractViolation("job org " + std::to_string(j.org) + " outside [0, " +
                              std::to_string(k) + ")");
    }
  }
}

std::vector<int> all_machine_ids(const MachineAllocation& alloc) {
  std::vector<int> ids(static_cast<std::size_t>(alloc.total()));
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

std::vector<int> member_machine_ids(const MachineAllocation& alloc, Coalition c) {
  std::vector<int> ids;
  for (OrgId u : c.members()) {
    const int first = alloc.first_machine_of(u);
    for (int i = 0; i < alloc.count(u); ++i) ids.push_back(first + i);
  }
  return ids;
}

std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].convert_to<double>();
  return out;
}

std::vector<double> to_doubles(const std::vector<std::int64_t>& v) {
  return std::vector<double>(v.begin(), v.end());
}

}  // namespace

Rational distance(const std::vector<OrgId>& members, const std::vector<Rational>& phi,
                  const std::vector<std::int64_t>& psi, OrgId candidate,
                  const Rational& delta_psi) {
  if (members.empty()) throw ContractViolation("distance over an empty coalition");
  if (std::find(members.begin(), members.end(), candidate) == members.end()) {
    throw ContractViolation("distance candidate is not a coalition member");
  }
  const Rational share = delta_psi / static_cast<std::int64_t>(members.size());
  Rational total = 0;
  for (OrgId u : members) {
    const std::size_t i = static_cast<std::size_t>(u);
    Rational term = phi.at(i) + share - psi.at(i);
    if (u == candidate) term -= delta_psi;
    total += boost::multiprecision::abs(term);
  }
  return total;
}

OrgId sp_select(const std::vector<OrgId>& eligible, const std::vector<Rational>& phi,
                const std::vector<std::int64_t>& psi) {
  if (eligible.empty()) throw ContractViolation("sp_select with no eligible org");
  OrgId best = -1;
  Rational best_deficit = 0;
  for (OrgId u : eligible) {
    const std::size_t i = static_cast<std::size_t>(u);
    Rational deficit = phi.at(i) - psi.at(i);
    if (best < 0 || deficit > best_deficit || (deficit == best_deficit && u < best)) {
      best = u;
      best_deficit = std::move(deficit);
    }
  }
  return best;
}

ExactFairResult exact_fair_run(const std::vector<Job>& jobs, const MachineAllocation& alloc,
                               Time t_end, const ExactFairOptions& opt) {
  const int k = alloc.org_count();
  check_run_args(k, t_end);
  if (k > kMaxEnumOrgs) {
    throw CapacityError("exact policy supports at most " + std::to_string(kMaxEnumOrgs) +
                        " organizations");
  }
  check_job_orgs(jobs, k);

  const Coalition grand = Coalition::grand(k);

  struct CoalState {
    Coalition c;
    core::SimState sim;
    utility::UtilityTracker tracker;
    // one entry list per org, maintained only under a custom utility
    std::vector<std::vector<core::ScheduleEntry>> entries;
  };

  // size-then-bits order: every proper subset precedes its superset
  std::vector<CoalState> states;
  for (const Coalition c : core::enumerate_subcoalitions(grand)) {
    if (c.bits == 0) continue;
    std::vector<Job> member_jobs;
    for (const Job& j : jobs) {
      if (c.contains(j.org)) member_jobs.push_back(j);
    }
    states.push_back(CoalState{c, core::SimState(member_jobs, k, member_machine_ids(alloc, c)),
                               utility::UtilityTracker(k),
                               {}});
    if (opt.custom_utility) states.back().entries.assign(static_cast<std::size_t>(k), {});
  }

  std::vector<std::int64_t> v_by_mask(std::size_t{1} << k, 0);
  std::vector<Rational> grand_phi(static_cast<std::size_t>(k), Rational(0));

  ExactFairResult result;
  for (Time t = 0; t <= t_end; ++t) {
    std::int64_t started_grand = 0;
    for (CoalState& cs : states) {
      cs.sim.release_arrivals(t);

      // horizon-t utilities per member; their sum is this coalition's value
      std::vector<std::int64_t> psi(static_cast<std::size_t>(k), 0);
      if (opt.custom_utility) {
        for (OrgId u : cs.c.members()) {
          psi[static_cast<std::size_t>(u)] =
              opt.custom_utility(cs.entries[static_cast<std::size_t>(u)], t);
        }
      } else {
        cs.tracker.advance_to(t);
        for (OrgId u : cs.c.members()) psi[static_cast<std::size_t>(u)] = cs.tracker.psi(u);
      }
      std::int64_t v = 0;
      for (OrgId u : cs.c.members()) v += psi[static_cast<std::size_t>(u)];
      v_by_mask[cs.c.bits] = v;

      // all strict subsets were refreshed earlier this step
      std::vector<Rational> phi = shapley::exact_shapley(v_by_mask, cs.c);

      while (cs.sim.free_machine(t) != -1 && cs.sim.any_waiting()) {
        std::vector<OrgId> eligible;
        for (OrgId u : cs.c.members()) {
          if (cs.sim.waiting_count(u) > 0) eligible.push_back(u);
        }

        OrgId chosen = -1;
        std::vector<Rational> dists;
        if (opt.custom_utility) {
          const std::vector<OrgId> members = cs.c.members();
          dists.reserve(eligible.size());
          std::size_t best = 0;
          for (std::size_t i = 0; i < eligible.size(); ++i) {
            const OrgId u = eligible[i];
            auto& ent = cs.entries[static_cast<std::size_t>(u)];
            // gain of the head job evaluated one step ahead
            const std::int64_t before = opt.custom_utility(ent, t + 1);
            ent.push_back(core::ScheduleEntry{cs.sim.head(u), t, 0});
            const std::int64_t after = opt.custom_utility(ent, t + 1);
            ent.pop_back();
            dists.push_back(distance(members, phi, psi, u, Rational(after - before)));
            if (dists[i] < dists[best]) best = i;
          }
          chosen = eligible[best];
        } else {
          chosen = sp_select(eligible, phi, psi);
          if (opt.on_decision) {
            // under the built-in utility every candidate's head job gains
            // exactly 1 one step ahead
            const std::vector<OrgId> members = cs.c.members();
            dists.reserve(eligible.size());
            for (OrgId u : eligible) dists.push_back(distance(members, phi, psi, u, Rational(1)));
          }
        }

        const core::ScheduleEntry& entry = cs.sim.start_head(chosen, t);
        if (opt.custom_utility) {
          cs.entries[static_cast<std::size_t>(chosen)].push_back(entry);
        } else {
          cs.tracker.on_start(chosen, entry.job.processing, t);
        }
        if (cs.c.bits == grand.bits) ++started_grand;

        if (opt.on_decision) {
          ExactFairDecision d;
          d.coalition = cs.c;
          d.t = t;
          d.chosen = chosen;
          d.eligible = std::move(eligible);
          d.distances = std::move(dists);
          opt.on_decision(d);
        }
      }

      if (cs.c.bits == grand.bits) grand_phi = std::move(phi);
    }

    if (opt.keep_trace) {
      CoalState& gs = states.back();
      TraceRow row;
      row.t = t;
      if (opt.custom_utility) {
        row.psi.assign(static_cast<std::size_t>(k), 0);
        for (OrgId u = 0; u < k; ++u) {
          row.psi[static_cast<std::size_t>(u)] =
              opt.custom_utility(gs.entries[static_cast<std::size_t>(u)], t);
        }
      } else {
        row.psi = gs.tracker.psi_all();
      }
      row.phi = to_doubles(grand_phi);
      row.started = started_grand;
      result.trace.push_back(std::move(row));
    }
    if (opt.keep_exact_phi) result.phi_exact.push_back(grand_phi);
  }

  CoalState& gs = states.back();
  if (opt.custom_utility) {
    result.final_psi.assign(static_cast<std::size_t>(k), 0);
    for (OrgId u = 0; u < k; ++u) {
      result.final_psi[static_cast<std::size_t>(u)] =
          opt.custom_utility(gs.entries[static_cast<std::size_t>(u)], t_end);
    }
  } else {
    result.final_psi = gs.tracker.psi_all();
  }
  result.final_phi = std::move(grand_phi);
  result.schedule = gs.sim.take_schedule(t_end);
  return result;
}

RandResult rand_run(const std::vector<Job>& jobs, const MachineAllocation& alloc,
                    Time t_end, std::uint64_t seed, const RandOptions& opt) {
  const int k = alloc.org_count();
  check_run_args(k, t_end);

  shapley::PrefixSample sample;
  if (opt.enumerate_all) {
    sample = shapley::all_orderings(k);
  } else {
    const std::int64_t n = opt.n_override > 0
                               ? opt.n_override
                               : shapley::sample_size(k, opt.epsilon, opt.lambda);
    sample = shapley::sample_prefixes(k, n, seed);
  }

  // Per sampled coalition: jobs not yet started, unit parts finished so far,
  // and the value of its hypothetical unit-capacity schedule. Ageing first
  // (v += fin) keeps v equal to that schedule's utility at the current step.
  struct Counter {
    std::int64_t machines = 0;
    std::int64_t waiting = 0;
    std::int64_t fin = 0;
    std::int64_t v = 0;
  };
  std::unordered_map<std::uint32_t, Counter> counters;
  for (const Coalition c : sample.distinct) {
    if (c.bits == 0) continue;
    Counter cnt;
    for (OrgId u : c.members()) cnt.machines += alloc.count(u);
    counters.emplace(c.bits, cnt);
  }

  core::SimState sim(jobs, k, all_machine_ids(alloc));
  utility::UtilityTracker tracker(k);
  shapley::CoalitionValues values(k);

  std::vector<std::vector<Time>> releases(static_cast<std::size_t>(k));
  for (const Job& j : jobs) releases[static_cast<std::size_t>(j.org)].push_back(j.release);
  for (auto& r : releases) std::sort(r.begin(), r.end());
  std::vector<std::size_t> rel_ptr(static_cast<std::size_t>(k), 0);

  RandResult result;
  result.n = static_cast<std::int64_t>(sample.orderings.size());
  std::vector<double> phi_hat(static_cast<std::size_t>(k), 0.0);

  for (Time t = 0; t <= t_end; ++t) {
    sim.release_arrivals(t);
    tracker.advance_to(t);

    std::vector<std::int64_t> arrived(static_cast<std::size_t>(k), 0);
    for (OrgId u = 0; u < k; ++u) {
      auto& r = releases[static_cast<std::size_t>(u)];
      auto& p = rel_ptr[static_cast<std::size_t>(u)];
      while (p < r.size() && r[p] == t) {
        ++arrived[static_cast<std::size_t>(u)];
        ++p;
      }
    }
    for (auto& [bits, cnt] : counters) {
      const Coalition c{bits};
      for (OrgId u : c.members()) cnt.waiting += arrived[static_cast<std::size_t>(u)];
      cnt.v += cnt.fin;
      values.set(c, cnt.v);
    }

    phi_hat = shapley::estimate_contributions(sample, values);

    std::int64_t started = 0;
    while (sim.free_machine(t) != -1 && sim.any_waiting()) {
      OrgId chosen = -1;
      double best = 0.0;
      for (OrgId u = 0; u < k; ++u) {
        if (sim.waiting_count(u) <= 0) continue;
        const double deficit = phi_hat[static_cast<std::size_t>(u)] -
                               static_cast<double>(tracker.psi(u));
        if (chosen < 0 || deficit > best) {
          chosen = u;
          best = deficit;
        }
      }
      const core::ScheduleEntry& e = sim.start_head(chosen, t);
      tracker.on_start(chosen, e.job.processing, t);
      ++started;
    }

    // hypothetical unit-capacity step: every started job finishes in one step
    for (auto& [bits, cnt] : counters) {
      const std::int64_t n_sched = std::min(cnt.machines, cnt.waiting);
      cnt.waiting -= n_sched;
      cnt.fin += n_sched;
    }

    if (opt.keep_trace) {
      result.trace.push_back(TraceRow{t, tracker.psi_all(), phi_hat, started});
    }
  }

  result.schedule = sim.take_schedule(t_end);
  result.final_psi = tracker.psi_all();
  result.final_phi_hat = std::move(phi_hat);
  for (const Coalition c : sample.distinct) {
    if (c.bits == 0) continue;
    result.final_counters.emplace_back(c, counters.at(c.bits).v);
  }
  return result;
}

DirectResult direct_contr_run(const std::vector<Job>& jobs, const MachineAllocation& alloc,
                              Time t_end, std::uint64_t seed, const DirectOptions& opt) {
  const int k = alloc.org_count();
  check_run_args(k, t_end);
  const int m_total = alloc.total();

  core::SimState sim(jobs, k, all_machine_ids(alloc));
  std::vector<std::int64_t> psi(static_cast<std::size_t>(k), 0);
  std::vector<std::int64_t> phi(static_cast<std::size_t>(k), 0);
  std::vector<std::int64_t> fin_ut(static_cast<std::size_t>(k), 0);
  std::vector<std::int64_t> fin_con(static_cast<std::size_t>(k), 0);
  std::vector<OrgId> running_org(static_cast<std::size_t>(m_total), -1);
  std::vector<Time> running_end(static_cast<std::size_t>(m_total), 0);

  auto eng = rng::make_engine(seed, kStreamDirectPerm);
  std::vector<int> perm(static_cast<std::size_t>(m_total));
  std::iota(perm.begin(), perm.end(), 0);

  DirectResult result;
  for (Time t = 0; t <= t_end; ++t) {
    sim.release_arrivals(t);
    // integrate last step's unit parts: each executed part ages by one
    for (OrgId u = 0; u < k; ++u) {
      psi[static_cast<std::size_t>(u)] += fin_ut[static_cast<std::size_t>(u)];
      phi[static_cast<std::size_t>(u)] += fin_con[static_cast<std::size_t>(u)];
    }

    rng::shuffle(perm, eng);
    std::int64_t started = 0;
    for (const int m : perm) {
      const std::size_t mi = static_cast<std::size_t>(m);
      if (running_org[mi] >= 0 && running_end[mi] <= t) running_org[mi] = -1;
      if (running_org[mi] >= 0) {
        // busy during [t, t+1): one unit part for job owner and machine owner
        ++fin_ut[static_cast<std::size_t>(running_org[mi])];
        ++fin_con[static_cast<std::size_t>(alloc.owner_of(m))];
      } else if (sim.any_waiting()) {
        OrgId chosen = -1;
        std::int64_t best = 0;
        for (OrgId u = 0; u < k; ++u) {
          if (sim.waiting_count(u) <= 0) continue;
          const std::int64_t deficit = phi[static_cast<std::size_t>(u)] -
                                       psi[static_cast<std::size_t>(u)];
          if (chosen < 0 || deficit > best) {
            chosen = u;
            best = deficit;
          }
        }
        const core::ScheduleEntry& e = sim.start_head_on(chosen, m, t);
        running_org[mi] = chosen;
        running_end[mi] = e.end();
        ++fin_ut[static_cast<std::size_t>(chosen)];
        ++fin_con[static_cast<std::size_t>(alloc.owner_of(m))];
        ++started;
      }
    }

    if (opt.keep_trace) {
      result.trace.push_back(TraceRow{t, psi, to_doubles(phi), started});
    }
  }

  result.schedule = sim.take_schedule(t_end);
  result.final_psi = psi;
  result.final_phi = std::move(phi);
  return result;
}

RunResult round_robin_run(const std::vector<Job>& jobs, const MachineAllocation& alloc,
                          Time t_end, const RoundRobinOptions& opt) {
  const int k = alloc.org_count();
  check_run_args(k, t_end);

  core::SimState sim(jobs, k, all_machine_ids(alloc));
  utility::UtilityTracker tracker(k);

  RunResult result;
  OrgId ptr = 0;
  for (Time t = 0; t <= t_end; ++t) {
    sim.release_arrivals(t);
    tracker.advance_to(t);
    std::int64_t started = 0;
    while (sim.free_machine(t) != -1 && sim.any_waiting()) {
      OrgId u = ptr;
      while (sim.waiting_count(u) <= 0) u = (u + 1) % k;
      const core::ScheduleEntry& e = sim.start_head(u, t);
      tracker.on_start(u, e.job.processing, t);
      ptr = (u + 1) % k;
      ++started;
    }
    if (opt.keep_trace) {
      result.trace.push_back(TraceRow{t, tracker.psi_all(),
                                      std::vector<double>(static_cast<std::size_t>(k), 0.0),
                                      started});
    }
  }

  result.schedule = sim.take_schedule(t_end);
  result.final_psi = tracker.psi_all();
  return result;
}

}  // namespace fairsched::schedulers
