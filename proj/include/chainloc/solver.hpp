#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chainloc/model.hpp"
#include "chainloc/rng.hpp"
#include "chainloc/selection.hpp"
#include "chainloc/spatial_index.hpp"

namespace chainloc {

enum class AnchorStrategy { LowerMiddle };

struct SolverConfig {
  double alpha = 0.0;  // weight of location potential
  double beta = 1.0;   // weight of distance deviation
  std::size_t number_of_branches = 50;
  std::size_t min_candidates_complex_case = 10;
  std::size_t candidates_two_trip_case = 20;
  AnchorStrategy anchor_strategy = AnchorStrategy::LowerMiddle;
  SelectionStrategy selection_strategy_complex_case = SelectionStrategy::top_k_monte_carlo();
  SelectionStrategy selection_strategy_two_trip_case = SelectionStrategy::top_k();
  double expansion_factor = 1.5;
  std::size_t max_expansions = 20;
  std::uint64_t master_seed = 0;

  /// Throws Error{InvalidConfig}.
  void validate() const;

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct PlacedSegment {
  Segment segment;
  std::vector<Location> placements;     // one per inner activity
  std::vector<double> trip_deviations;  // one per trip
  double total_score = 0.0;
  double total_deviation = 0.0;
};

struct BranchResult {
  PlacedSegment placed;
  double score = 0.0;
};

struct TwoTripChoice {
  ScoredCandidate candidate;
  double deviation = 0.0;
};

ScoredCandidate evaluate(const Location& candidate, double deviation, const SolverConfig& config);

/// Index of the inner activity that splits a segment with `inner_count`
/// unplaced activities. Throws Error{InvalidCall} below two.
std::size_t choose_anchor(std::size_t inner_count, AnchorStrategy strategy);
std::size_t choose_anchor(const Segment& segment, AnchorStrategy strategy);

/// Places one activity between two fixed points.
TwoTripChoice solve_two_trip(Point2D start, Point2D end, double d1, double d2,
                             const ActivityType& type, const LocationIndex& index,
                             const SolverConfig& config, SeededRng& rng);

/// Recursive anchor search over one segment. The returned score is
/// alpha * sum(potentials) - beta * sum(trip deviations) of the chosen
/// placement, including trips whose both ends were already fixed.
BranchResult solve_segment(const Segment& segment, const LocationIndex& index,
                           const SolverConfig& config, SeededRng& rng);

/// Solves every segment of the plan with the person's own random stream.
PlacedPlan solve_plan(const PersonPlan& plan, const LocationIndex& index,
                      const SolverConfig& config);

}  // namespace chainloc
