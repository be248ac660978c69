#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chainloc {

/// Planar projected coordinate in meters.
struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

double distance(Point2D a, Point2D b);
bool is_finite(Point2D p);

/// Activity purpose such as "shopping" or "leisure". Compared case-sensitively.
class ActivityType {
 public:
  ActivityType() = default;
  explicit ActivityType(std::string name);

  const std::string& name() const noexcept { return name_; }

  friend auto operator<=>(const ActivityType&, const ActivityType&) = default;
  friend bool operator==(const ActivityType&, const ActivityType&) = default;

 private:
  std::string name_;
};

using LocationId = std::int64_t;

/// A discrete target that activities can be assigned to.
struct Location {
  LocationId id = 0;
  Point2D position;
  std::vector<ActivityType> types;
  double potential = 0.0;

  bool supports(const ActivityType& type) const;
};

struct Trip {
  std::size_t index_in_chain = 0;
  double distance = 0.0;  // observed, meters
  std::optional<std::string> mode;
};

struct Activity {
  std::size_t index_in_chain = 0;
  ActivityType type;
  std::optional<Point2D> fixed;  // empty when the activity still needs a location

  bool is_fixed() const noexcept { return fixed.has_value(); }
};

/// Trips between two fixed points with the unplaced activities in between.
/// Holds trips.size() == inner_activities.size() + 1.
struct Segment {
  Point2D start;
  Point2D end;
  std::vector<Trip> trips;
  std::vector<Activity> inner_activities;
};

/// Scored option for one activity. `deviation` is the distance term that
/// entered the score, so score == alpha * potential - beta * deviation.
struct ScoredCandidate {
  const Location* location = nullptr;
  double deviation = 0.0;
  double score = 0.0;
};

struct PersonPlan {
  std::string person_id;
  std::vector<Activity> activities;
  std::vector<Trip> trips;
};

struct PlacedPlan {
  std::string person_id;
  std::vector<Activity> activities;
  std::vector<Trip> trips;
  std::vector<Point2D> positions;                    // one per activity
  std::vector<std::optional<LocationId>> location_ids;  // empty for fixed activities
  std::vector<double> model_distances;               // one per trip
  std::vector<double> trip_deviations;               // |observed - model| per trip
  double total_deviation = 0.0;
  double total_score = 0.0;
};

/// Checks the chain shape (activity/trip counts, fixed endpoints, finite
/// non-negative distances). Throws Error{InvalidPlan}.
void validate_plan(const PersonPlan& plan);

/// Cuts a chain at every fixed activity. Throws Error{InvalidPlan}.
std::vector<Segment> split_into_segments(const PersonPlan& plan);

}  // namespace chainloc
