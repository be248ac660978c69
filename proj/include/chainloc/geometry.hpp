#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "chainloc/model.hpp"

namespace chainloc {

/// Set of points whose distance from `center` lies in [r_min, r_max].
struct Annulus {
  Point2D center;
  double r_min = 0.0;
  double r_max = 0.0;

  bool contains(Point2D p) const;
};

struct RingBounds {
  double r_min = 0.0;
  double r_max = 0.0;
};

/// Rings around the start and end point that a split-off anchor must lie in.
struct SegmentRings {
  RingBounds from_start;  // trips 0..anchor
  RingBounds to_end;      // trips anchor+1..end
};

/// Zero-deviation positions for a single activity between two fixed points.
///
/// feasible: the two distance circles meet; `points` holds the one
/// (tangent) or two intersections.
/// !feasible: `points` holds one position minimizing the summed deviation.
/// degenerate: start and end coincide with equal radii, so every point on
/// the circle is ideal; a representative on the +x axis is returned.
struct IdealPoints {
  std::vector<Point2D> points;
  bool feasible = false;
  bool degenerate = false;
};

IdealPoints circle_intersections(Point2D start, double d1, Point2D end, double d2);

double trip_deviation(Point2D from, Point2D to, double observed);

/// |d1 - |start - c|| + |d2 - |c - end||
double total_deviation_two_trip(Point2D c, Point2D start, double d1, Point2D end, double d2);

/// Range of end-to-end distances a polyline with the given leg lengths can
/// span. Throws Error{InvalidSegment} on an empty list.
RingBounds reachability_annulus(std::span<const double> trip_distances);

SegmentRings segment_ring_bounds(std::span<const Trip> trips, std::size_t anchor_index);
SegmentRings segment_ring_bounds(const Segment& segment, std::size_t anchor_index);

/// True when a chain with these trips can connect start and end exactly.
bool segment_is_realizable(const Segment& segment);

}  // namespace chainloc
