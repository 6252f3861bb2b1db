#include <cstdint>
#include <map>
#include <vector>

#include "doctest.h"
#include "fairsched/core.hpp"
#include "fairsched/types.hpp"
#include "oracles.hpp"

using namespace fairsched;
using core::Schedule;
using core::ScheduleEntry;
using core::SimState;
using core::ViolationKind;

namespace {

std::vector<Time> starts_by_seq(const Schedule& s, OrgId org) {
  std::map<int, Time> by_seq;
  for (const auto& e : s.entries) {
    if (e.job.org == org) by_seq[e.job.seq] = e.start;
  }
  std::vector<Time> out;
  out.reserve(by_seq.size());
  for (const auto& [seq, start] : by_seq) out.push_back(start);
  return out;
}

// Two orgs, ten jobs, three machines: the worked example used throughout the
// scheduler tests. Org 0 has nine jobs, org 1 a single five-step job.
std::vector<Job> example_jobs(bool with_org1) {
  const std::vector<Time> proc = {3, 4, 4, 2, 5, 6, 4, 3, 4};
  std::vector<Job> jobs;
  for (int s = 0; s < 9; ++s) jobs.push_back(Job{0, s, 0, proc[static_cast<std::size_t>(s)]});
  if (with_org1) jobs.push_back(Job{1, 0, 0, 5});
  return jobs;
}

}  // namespace

TEST_SUITE_BEGIN("core");

TEST_CASE("jobs start on the lowest free machine and never preempt") {
  const std::vector<Job> jobs = {
      Job{0, 0, 0, 2}, Job{0, 1, 0, 2}, Job{1, 0, 1, 3}};
  SimState sim(jobs, 2, {0, 1});

  sim.release_arrivals(0);
  CHECK(sim.waiting_count(0) == 2);
  CHECK(sim.queue_empty(1));
  CHECK(sim.any_waiting());
  CHECK(sim.head(0).seq == 0);
  CHECK(sim.free_machine(0) == 0);

  const ScheduleEntry& first = sim.start_head(0, 0);
  CHECK(first.machine == 0);
  CHECK(first.start == 0);
  CHECK_FALSE(sim.is_free(0, 0));
  CHECK(sim.free_machine(0) == 1);
  CHECK(sim.head(0).seq == 1);

  const ScheduleEntry& second = sim.start_head(0, 0);
  CHECK(second.machine == 1);
  CHECK(sim.waiting_count(0) == 0);
  CHECK_FALSE(sim.any_waiting());

  sim.release_arrivals(1);
  CHECK(sim.waiting_count(1) == 1);
  CHECK(sim.free_machine(1) == -1);  // both machines run until 2

  sim.release_arrivals(2);
  CHECK(sim.is_free(0, 2));
  CHECK(sim.is_free(1, 2));
  const ScheduleEntry& third = sim.start_head(1, 2);
  CHECK(third.machine == 0);
  CHECK(third.start == 2);

  const Schedule s = sim.take_schedule(5);
  CHECK(s.horizon == 5);
  CHECK(s.entries.size() == 3);
}

TEST_CASE("queues keep seq order regardless of input order") {
  const std::vector<Job> jobs = {Job{0, 1, 0, 1}, Job{0, 0, 0, 1}};
  SimState sim(jobs, 1, {0});
  sim.release_arrivals(0);
  CHECK(sim.head(0).seq == 0);
}

TEST_CASE("machine ids may be sparse") {
  const std::vector<Job> jobs = {Job{0, 0, 0, 1}, Job{0, 1, 0, 1}};
  SimState sim(jobs, 1, {3, 7});
  sim.release_arrivals(0);
  CHECK(sim.free_machine(0) == 3);
  CHECK(sim.start_head(0, 0).machine == 3);
  CHECK(sim.start_head(0, 0).machine == 7);
}

TEST_CASE("state transitions enforce their preconditions") {
  const std::vector<Job> jobs = {Job{0, 0, 2, 1}};
  SimState sim(jobs, 1, {0});
  CHECK_THROWS_AS(sim.release_arrivals(1), ContractViolation);  // must begin at 0
  sim.release_arrivals(0);
  CHECK_THROWS_AS(sim.release_arrivals(2), ContractViolation);  // must advance by 1
  CHECK_THROWS_AS(sim.head(0), ContractViolation);              // nothing released yet
  CHECK_THROWS_AS(sim.start_head(0, 0), ContractViolation);
  sim.release_arrivals(1);
  sim.release_arrivals(2);
  CHECK_THROWS_AS(sim.start_head(0, 1), ContractViolation);  // wrong step
  const ScheduleEntry& e = sim.start_head(0, 2);
  CHECK(e.start == 2);
  CHECK_THROWS_AS(sim.start_head(0, 2), ContractViolation);  // queue now empty
}

TEST_CASE("start_head_on rejects busy machines and wrong steps") {
  const std::vector<Job> jobs = {Job{0, 0, 0, 3}, Job{0, 1, 0, 1}};
  SimState sim(jobs, 1, {0, 1});
  sim.release_arrivals(0);
  sim.start_head_on(0, 1, 0);
  CHECK_THROWS_AS(sim.start_head_on(0, 1, 0), ContractViolation);  // machine busy
  const ScheduleEntry& e = sim.start_head_on(0, 0, 0);
  CHECK(e.machine == 0);
}

TEST_CASE("constructor rejects malformed job lists") {
  CHECK_THROWS_AS(SimState({Job{0, 0, 0, 0}}, 1, {0}), ContractViolation);   // processing < 1
  CHECK_THROWS_AS(SimState({Job{0, 0, -1, 1}}, 1, {0}), ContractViolation);  // negative release
  CHECK_THROWS_AS(SimState({Job{1, 0, 0, 1}}, 1, {0}), ContractViolation);   // org out of range
  CHECK_THROWS_AS(SimState({Job{0, 0, 0, 1}, Job{0, 0, 1, 1}}, 1, {0}),
                  ContractViolation);  // duplicate seq
  CHECK_THROWS_AS(SimState({Job{0, 0, 5, 1}, Job{0, 1, 2, 1}}, 1, {0}),
                  ContractViolation);  // release decreases in seq
  CHECK_THROWS_AS(SimState({Job{0, 0, 0, 1}}, 1, {0, 0}), ContractViolation);  // dup machine
  CHECK_THROWS_AS(SimState({Job{0, 0, 0, 1}}, 0, {0}), ContractViolation);     // no orgs
}

TEST_CASE("a scripted policy reproduces the worked example layout") {
  const std::vector<Job> jobs = example_jobs(true);
  const MachineAllocation alloc({2, 1});
  const Schedule s =
      core::simulate(jobs, alloc, oracles::scripted_policy({0, 0, 0, 0, 0, 0, 0, 1, 0, 0}), 14);

  const std::vector<ScheduleEntry> expected = {
      {Job{0, 0, 0, 3}, 0, 0},  {Job{0, 1, 0, 4}, 0, 1}, {Job{0, 2, 0, 4}, 0, 2},
      {Job{0, 3, 0, 2}, 3, 0},  {Job{0, 4, 0, 5}, 4, 1}, {Job{0, 5, 0, 6}, 4, 2},
      {Job{0, 6, 0, 4}, 5, 0},  {Job{1, 0, 0, 5}, 9, 0}, {Job{0, 7, 0, 3}, 9, 1},
      {Job{0, 8, 0, 4}, 10, 2},
  };
  CHECK(s.entries == expected);
  CHECK(s.horizon == 14);
  CHECK(starts_by_seq(s, 0) == std::vector<Time>{0, 0, 0, 3, 4, 4, 5, 9, 10});
  CHECK(core::validate_schedule(s, jobs, alloc).ok());
}

TEST_CASE("removing the single outside job moves the last job one step earlier") {
  const std::vector<Job> jobs = example_jobs(false);
  const MachineAllocation alloc({2, 1});
  const Schedule s =
      core::simulate(jobs, alloc, oracles::scripted_policy(std::vector<OrgId>(9, 0)), 14);
  CHECK(starts_by_seq(s, 0) == std::vector<Time>{0, 0, 0, 3, 4, 4, 5, 9, 9});
  CHECK(core::validate_schedule(s, jobs, alloc).ok());
}

TEST_CASE("jobs released after the horizon never start") {
  const std::vector<Job> jobs = {Job{0, 0, 4, 1}, Job{0, 1, 5, 1}};
  const MachineAllocation alloc({1});
  const auto fifo = [](const SimState&, Time) { return 0; };
  const Schedule s = core::simulate(jobs, alloc, fifo, 4);
  REQUIRE(s.entries.size() == 1);
  CHECK(s.entries[0].job.seq == 0);
  CHECK(s.entries[0].start == 4);
  CHECK(core::validate_schedule(s, jobs, alloc).ok());
}

TEST_CASE("simulate rejects a policy that names an org with nothing waiting") {
  const std::vector<Job> jobs = {Job{0, 0, 0, 1}};
  const MachineAllocation alloc({1, 1});
  const auto bad = [](const SimState&, Time) { return 1; };
  CHECK_THROWS_AS(core::simulate(jobs, alloc, bad, 3), ContractViolation);
}

TEST_CASE("the step observer sees every step once, after its decisions") {
  const std::vector<Job> jobs = {Job{0, 0, 0, 2}, Job{0, 1, 1, 2}};
  const MachineAllocation alloc({1});
  std::vector<Time> steps;
  std::vector<std::int64_t> waiting;
  const auto fifo = [](const SimState&, Time) { return 0; };
  core::simulate(jobs, alloc, fifo, 3, [&](const SimState& sim, Time t) {
    steps.push_back(t);
    waiting.push_back(sim.waiting_count(0));
  });
  CHECK(steps == std::vector<Time>{0, 1, 2, 3});
  // seq 1 arrives at 1 but the machine is busy until 2
  CHECK(waiting == std::vector<std::int64_t>{0, 1, 0, 0});
}

TEST_CASE("validation flags each kind of defect") {
  const MachineAllocation alloc({2});

  SUBCASE("overlap") {
    const std::vector<Job> jobs = {Job{0, 0, 0, 3}, Job{0, 1, 0, 3}};
    Schedule s;
    s.horizon = 6;
    s.entries = {{jobs[0], 0, 0}, {jobs[1], 2, 0}};
    const auto report = core::validate_schedule(s, jobs, alloc);
    CHECK(report.has(ViolationKind::Overlap));
  }

  SUBCASE("fifo order") {
    const std::vector<Job> jobs = {Job{0, 0, 0, 1}, Job{0, 1, 0, 1}};
    Schedule s;
    s.horizon = 2;
    s.entries = {{jobs[1], 0, 0}, {jobs[0], 1, 0}};
    const auto report = core::validate_schedule(s, jobs, alloc);
    CHECK(report.has(ViolationKind::FifoOrder));
    CHECK_FALSE(report.has(ViolationKind::Overlap));
  }

  SUBCASE("skipped seq counts as a fifo violation") {
    const std::vector<Job> jobs = {Job{0, 0, 0, 1}, Job{0, 1, 0, 1}};
    Schedule s;
    s.horizon = 1;
    s.entries = {{jobs[1], 0, 0}};
    const auto report = core::validate_schedule(s, jobs, alloc);
    CHECK(report.has(ViolationKind::FifoOrder));
  }

  SUBCASE("greediness") {
    const std::vector<Job> jobs = {Job{0, 0, 0, 1}, Job{0, 1, 0, 1}};
    Schedule s;
    s.horizon = 4;
    s.entries = {{jobs[0], 0, 0}, {jobs[1], 2, 0}};
    const auto report = core::validate_schedule(s, jobs, alloc);
    CHECK(report.has(ViolationKind::Greediness));
    CHECK_FALSE(report.has(ViolationKind::FifoOrder));
  }

  SUBCASE("early start") {
    const std::vector<Job> jobs = {Job{0, 0, 3, 1}};
    Schedule s;
    s.horizon = 4;
    s.entries = {{jobs[0], 2, 0}};
    const auto report = core::validate_schedule(s, jobs, alloc);
    CHECK(report.has(ViolationKind::EarlyStart));
    CHECK_FALSE(report.has(ViolationKind::Greediness));
  }

  SUBCASE("malformed entries") {
    const std::vector<Job> jobs = {Job{0, 0, 0, 2}};
    Schedule s;
    s.horizon = 4;

    s.entries = {{Job{0, 7, 0, 2}, 0, 0}};  // unknown seq
    CHECK(core::validate_schedule(s, jobs, alloc).has(ViolationKind::Malformed));

    s.entries = {{Job{0, 0, 0, 9}, 0, 0}};  // processing disagrees with the list
    CHECK(core::validate_schedule(s, jobs, alloc).has(ViolationKind::Malformed));

    s.entries = {{jobs[0], 0, 0}, {jobs[0], 2, 1}};  // started twice
    CHECK(core::validate_schedule(s, jobs, alloc).has(ViolationKind::Malformed));

    s.entries = {{jobs[0], 0, 5}};  // machine id out of range
    CHECK(core::validate_schedule(s, jobs, alloc).has(ViolationKind::Malformed));

    s.entries = {{jobs[0], 6, 0}};  // start beyond horizon
    CHECK(core::validate_schedule(s, jobs, alloc).has(ViolationKind::Malformed));
  }

  SUBCASE("a clean schedule passes") {
    const std::vector<Job> jobs = {Job{0, 0, 0, 2}, Job{0, 1, 1, 2}};
    Schedule s;
    s.horizon = 4;
    s.entries = {{jobs[0], 0, 0}, {jobs[1], 1, 1}};
    const auto report = core::validate_schedule(s, jobs, alloc);
    CHECK(report.ok());
    CHECK(report.violations.empty());
  }
}

TEST_CASE("subcoalition enumeration is ordered by size then bitmask") {
  std::vector<std::uint32_t> bits;
  for (const Coalition c : core::enumerate_subcoalitions(Coalition::grand(3))) {
    bits.push_back(c.bits);
  }
  CHECK(bits == std::vector<std::uint32_t>{0, 1, 2, 4, 3, 5, 6, 7});

  bits.clear();
  for (const Coalition c : core::enumerate_subcoalitions(Coalition{0b101})) {
    bits.push_back(c.bits);
  }
  CHECK(bits == std::vector<std::uint32_t>{0, 1, 4, 5});

  CHECK_THROWS_AS(core::enumerate_subcoalitions(Coalition::grand(21)), CapacityError);
}

TEST_SUITE_END();
