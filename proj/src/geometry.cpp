#include "chainloc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chainloc/error.hpp"

namespace chainloc {

namespace {

Point2D along(Point2D origin, Point2D unit, double t) {
  return {origin.x + unit.x * t, origin.y + unit.y * t};
}

double tangency_tolerance(double d1, double d2) { return 1e-9 * std::max(1.0, d1 + d2); }

}  // namespace

bool Annulus::contains(Point2D p) const {
  const double r = distance(center, p);
  return r_min <= r && r <= r_max;
}

IdealPoints circle_intersections(Point2D start, double d1, Point2D end, double d2) {
  const double gap = distance(start, end);
  const double tol = tangency_tolerance(d1, d2);

  if (gap <= 1e-12 * std::max(1.0, d1 + d2)) {
    // Coincident centers: either the same circle or two concentric ones.
    if (std::abs(d1 - d2) <= tol) {
      return {{{start.x + d1, start.y}}, true, d1 > 0.0};
    }
    return {{{start.x + 0.5 * (d1 + d2), start.y}}, false, false};
  }

  const Point2D u{(end.x - start.x) / gap, (end.y - start.y) / gap};
  const double outer_slack = gap - (d1 + d2);  // > 0: circles apart
  const double inner_slack = std::abs(d1 - d2) - gap;  // > 0: one encloses the other

  if (outer_slack > tol) {
    return {{along(start, u, d1 + 0.5 * outer_slack)}, false, false};
  }
  if (inner_slack > tol) {
    // Midpoint between the two circles on the far side of the smaller one.
    if (d1 >= d2) return {{along(start, u, 0.5 * (gap + d1 + d2))}, false, false};
    const Point2D back{-u.x, -u.y};
    return {{along(end, back, 0.5 * (gap + d1 + d2))}, false, false};
  }
  if (outer_slack >= -tol) {
    return {{along(start, u, d1 + 0.5 * outer_slack)}, true, false};
  }
  if (inner_slack >= -tol) {
    if (d1 >= d2) return {{along(start, u, 0.5 * (gap + d1 + d2))}, true, false};
    const Point2D back{-u.x, -u.y};
    return {{along(end, back, 0.5 * (gap + d1 + d2))}, true, false};
  }

  const double a = (d1 * d1 - d2 * d2 + gap * gap) / (2.0 * gap);
  const double h = std::sqrt(std::max(0.0, d1 * d1 - a * a));
  const Point2D base = along(start, u, a);
  const Point2D normal{-u.y, u.x};
  return {{along(base, normal, h), along(base, normal, -h)}, true, false};
}

double trip_deviation(Point2D from, Point2D to, double observed) {
  return std::abs(observed - distance(from, to));
}

double total_deviation_two_trip(Point2D c, Point2D start, double d1, Point2D end, double d2) {
  return trip_deviation(start, c, d1) + trip_deviation(c, end, d2);
}

RingBounds reachability_annulus(std::span<const double> trip_distances) {
  if (trip_distances.empty()) {
    throw Error(ErrorKind::InvalidSegment, "reachability of an empty trip list");
  }
  const double total = std::accumulate(trip_distances.begin(), trip_distances.end(), 0.0);
  const double longest = *std::max_element(trip_distances.begin(), trip_distances.end());
  return {std::max(0.0, longest - (total - longest)), total};
}

SegmentRings segment_ring_bounds(std::span<const Trip> trips, std::size_t anchor_index) {
  if (anchor_index + 1 >= trips.size()) {
    throw Error(ErrorKind::InvalidSegment, "anchor index " + std::to_string(anchor_index) +
                                               " out of range for " +
                                               std::to_string(trips.size()) + " trips");
  }
  std::vector<double> distances(trips.size());
  std::transform(trips.begin(), trips.end(), distances.begin(),
                 [](const Trip& t) { return t.distance; });
  const std::span<const double> all(distances);
  return {reachability_annulus(all.first(anchor_index + 1)),
          reachability_annulus(all.subspan(anchor_index + 1))};
}

SegmentRings segment_ring_bounds(const Segment& segment, std::size_t anchor_index) {
  if (anchor_index >= segment.inner_activities.size()) {
    throw Error(ErrorKind::InvalidSegment, "anchor index " + std::to_string(anchor_index) +
                                               " out of range for " +
                                               std::to_string(segment.inner_activities.size()) +
                                               " inner activities");
  }
  return segment_ring_bounds(segment.trips, anchor_index);
}

bool segment_is_realizable(const Segment& segment) {
  std::vector<double> distances;
  distances.reserve(segment.trips.size());
  for (const auto& t : segment.trips) distances.push_back(t.distance);
  const RingBounds ring = reachability_annulus(distances);
  const double gap = distance(segment.start, segment.end);
  const double tol = tangency_tolerance(ring.r_max, 0.0);
  return ring.r_min - tol <= gap && gap <= ring.r_max + tol;
}

}  // namespace chainloc
