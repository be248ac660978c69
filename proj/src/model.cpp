#include "chainloc/model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "chainloc/error.hpp"

namespace chainloc {

double distance(Point2D a, Point2D b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

bool is_finite(Point2D p) { return std::isfinite(p.x) && std::isfinite(p.y); }

ActivityType::ActivityType(std::string name) : name_(std::move(name)) {}

bool Location::supports(const ActivityType& type) const {
  return std::find(types.begin(), types.end(), type) != types.end();
}

void validate_plan(const PersonPlan& plan) {
  const auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::InvalidPlan, "person '" + plan.person_id + "': " + what);
  };
  if (plan.trips.empty()) fail("plan has no trips");
  if (plan.activities.size() != plan.trips.size() + 1) {
    fail("expected " + std::to_string(plan.trips.size() + 1) + " activities, got " +
         std::to_string(plan.activities.size()));
  }
  if (!plan.activities.front().is_fixed() || !plan.activities.back().is_fixed()) {
    fail("first and last activity must have a fixed location");
  }
  for (std::size_t i = 0; i < plan.activities.size(); ++i) {
    const Activity& activity = plan.activities[i];
    if (activity.index_in_chain != i) fail("activity " + std::to_string(i) + " is out of order");
    if (activity.type.name().empty()) fail("activity with empty type");
    if (activity.fixed && !is_finite(*activity.fixed)) fail("non-finite fixed position");
  }
  for (std::size_t i = 0; i < plan.trips.size(); ++i) {
    const Trip& trip = plan.trips[i];
    if (trip.index_in_chain != i) fail("trip " + std::to_string(i) + " is out of order");
    if (!std::isfinite(trip.distance) || trip.distance < 0.0) {
      fail("trip " + std::to_string(trip.index_in_chain) + " has an invalid distance");
    }
  }
}

std::vector<Segment> split_into_segments(const PersonPlan& plan) {
  validate_plan(plan);

  std::vector<Segment> segments;
  Segment current;
  current.start = *plan.activities.front().fixed;
  for (std::size_t i = 0; i < plan.trips.size(); ++i) {
    current.trips.push_back(plan.trips[i]);
    const Activity& next = plan.activities[i + 1];
    if (next.is_fixed()) {
      current.end = *next.fixed;
      segments.push_back(std::move(current));
      current = Segment{};
      current.start = *next.fixed;
    } else {
      current.inner_activities.push_back(next);
    }
  }
  return segments;
}

}  // namespace chainloc
