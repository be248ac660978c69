#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chainloc/model.hpp"
#include "chainloc/solver.hpp"
#include "chainloc/spatial_index.hpp"

namespace chainloc {

struct PersonOutcome {
  std::string person_id;
  double total_deviation = 0.0;
  double total_score = 0.0;
  double wall_time_s = 0.0;  // solve_plan only, no I/O
};

struct Failure {
  std::string person_id;
  std::string reason;
};

struct RunReport {
  std::vector<PersonOutcome> persons;  // solved persons, ordered by person_id
  std::vector<Failure> failures;       // ordered by person_id
  double mean_deviation = 0.0;
  double median_deviation = 0.0;
  double p95_deviation = 0.0;
  double total_runtime_s = 0.0;
  double persons_per_second = 0.0;
};

/// Fills the aggregate fields from `persons`. The median averages the two
/// middle values; p95 is the nearest-rank percentile.
void compute_aggregates(RunReport& report);

struct BatchResult {
  std::vector<PlacedPlan> placed;  // ordered by person_id
  RunReport report;
};

/// Solves every plan; failures are collected, never thrown. `threads` of 0
/// means hardware concurrency. The output does not depend on `threads`.
BatchResult run_batch(std::span<const PersonPlan> plans, const LocationIndex& index,
                      const SolverConfig& config, std::size_t threads = 1);

}  // namespace chainloc
