#pragma once

#include <cmath>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "chainloc/model.hpp"

namespace chainloc::test {

inline Location make_location(LocationId id, double x, double y,
                              std::initializer_list<const char*> types, double potential = 0.0) {
  Location loc;
  loc.id = id;
  loc.position = {x, y};
  for (const char* t : types) loc.types.emplace_back(t);
  loc.potential = potential;
  return loc;
}

inline Activity fixed(std::size_t index, const char* type, double x, double y) {
  return {index, ActivityType(type), Point2D{x, y}};
}

inline Activity open(std::size_t index, const char* type) {
  return {index, ActivityType(type), std::nullopt};
}

inline PersonPlan make_plan(std::string id, std::vector<Activity> activities,
                            std::vector<double> distances) {
  PersonPlan plan;
  plan.person_id = std::move(id);
  plan.activities = std::move(activities);
  for (std::size_t i = 0; i < distances.size(); ++i) plan.trips.push_back({i, distances[i], {}});
  return plan;
}

inline Segment make_segment(Point2D start, Point2D end, std::vector<double> distances,
                            std::vector<const char*> inner_types) {
  Segment seg;
  seg.start = start;
  seg.end = end;
  for (std::size_t i = 0; i < distances.size(); ++i) seg.trips.push_back({i, distances[i], {}});
  for (std::size_t j = 0; j < inner_types.size(); ++j) {
    seg.inner_activities.push_back({j + 1, ActivityType(inner_types[j]), std::nullopt});
  }
  return seg;
}

// Fresh scratch directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("chainloc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace chainloc::test
