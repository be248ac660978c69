#pragma once

// Brute-force references for checking the solver. Nothing in here calls into
// the solver or the spatial index.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "chainloc/model.hpp"
#include "chainloc/rng.hpp"

namespace chainloc::oracle {

inline constexpr double kMaxAssignments = 1e7;

struct BruteForceResult {
  std::vector<LocationId> placement_ids;  // one per inner activity
  double score = 0.0;
};

/// Exact maximizer of alpha * sum(P) - beta * sum(|observed - realized|)
/// over every type-compatible assignment. Ties go to the lexicographically
/// smallest id tuple. Throws Error{TooLarge} past 1e7 assignments and
/// Error{NoLocationOfType} when an activity has no compatible location.
BruteForceResult brute_force_segment(const Segment& segment, std::span<const Location> locations,
                                     double alpha, double beta);

/// End-to-end distances of polylines with uniformly random joint angles.
std::vector<double> sample_polyline_endpoints(std::span<const double> trip_distances,
                                              std::size_t samples, SeededRng& rng);

struct Box {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;
};

struct FieldSample {
  double x = 0.0;
  double y = 0.0;
  double deviation = 0.0;
};

/// Two-trip deviation evaluated on a regular grid, row-major from (min_x, min_y).
std::vector<FieldSample> deviation_field(Point2D start, double d1, Point2D end, double d2,
                                         const Box& box, double resolution);

struct GridMinimum {
  Point2D point;
  double deviation = 0.0;
};

GridMinimum grid_min_deviation(Point2D start, double d1, Point2D end, double d2, const Box& box,
                               double resolution);

/// Writes `x,y,deviation` with a header line.
void write_field_csv(std::ostream& out, std::span<const FieldSample> field);

}  // namespace chainloc::oracle
