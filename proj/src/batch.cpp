#include "chainloc/batch.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <optional>
#include <thread>

namespace chainloc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Slot {
  std::optional<PlacedPlan> placed;
  PersonOutcome outcome;
  std::optional<Failure> failure;
};

void solve_into(const PersonPlan& plan, const LocationIndex& index, const SolverConfig& config,
                Slot& slot) {
  slot.outcome.person_id = plan.person_id;
  const auto start = Clock::now();
  try {
    slot.placed = solve_plan(plan, index, config);
    slot.outcome.wall_time_s = seconds_since(start);
    slot.outcome.total_deviation = slot.placed->total_deviation;
    slot.outcome.total_score = slot.placed->total_score;
  } catch (const std::exception& e) {
    slot.failure = Failure{plan.person_id, e.what()};
  }
}

}  // namespace

void compute_aggregates(RunReport& report) {
  std::vector<double> values;
  values.reserve(report.persons.size());
  for (const auto& p : report.persons) values.push_back(p.total_deviation);
  if (values.empty()) {
    report.mean_deviation = report.median_deviation = report.p95_deviation = 0.0;
  } else {
    report.mean_deviation =
        std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    report.median_deviation =
        n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    report.p95_deviation = values[std::max<std::size_t>(rank, 1) - 1];
  }
  report.persons_per_second = report.total_runtime_s > 0.0
                                  ? static_cast<double>(report.persons.size()) / report.total_runtime_s
                                  : 0.0;
}

BatchResult run_batch(std::span<const PersonPlan> plans, const LocationIndex& index,
                      const SolverConfig& config, std::size_t threads) {
  config.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(plans.size(), 1));

  std::vector<Slot> slots(plans.size());
  const auto start = Clock::now();
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < plans.size(); i = next++) {
      solve_into(plans[i], index, config, slots[i]);
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  std::vector<std::size_t> order(plans.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return plans[a].person_id < plans[b].person_id;
  });

  BatchResult result;
  result.report.total_runtime_s = seconds_since(start);
  for (std::size_t i : order) {
    Slot& slot = slots[i];
    if (slot.failure) {
      result.report.failures.push_back(std::move(*slot.failure));
    } else {
      result.report.persons.push_back(slot.outcome);
      result.placed.push_back(std::move(*slot.placed));
    }
  }
  compute_aggregates(result.report);
  return result;
}

}  // namespace chainloc
