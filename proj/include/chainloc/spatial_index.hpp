#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "chainloc/geometry.hpp"
#include "chainloc/model.hpp"

namespace chainloc {

struct ExpandedQuery {
  std::vector<const Location*> locations;
  std::size_t expansions_used = 0;
};

/// Read-only uniform-grid index with one grid per activity type.
///
/// Every query returns pointers into the index's own location storage, so
/// results stay valid for the lifetime of the index. All queries are const
/// and safe to run concurrently.
class LocationIndex {
 public:
  static constexpr double kDefaultCellSize = 500.0;

  /// Throws Error{EmptyUniverse} for an empty set, Error{InvalidInput} for
  /// duplicate ids or malformed locations, Error{InvalidConfig} for a
  /// non-positive cell size.
  explicit LocationIndex(std::vector<Location> locations, double cell_size = kDefaultCellSize);

  /// Locations of `type` inside both annuli, boundaries inclusive, ascending id.
  std::vector<const Location*> query_ring_overlap(const ActivityType& type, const Annulus& a,
                                                  const Annulus& b) const;

  /// Up to k closest locations of `type`, ordered by distance then id.
  std::vector<const Location*> query_k_nearest(const ActivityType& type, Point2D p,
                                               std::size_t k) const;

  /// Ring overlap query that widens both annuli (r_min / factor, r_max * factor)
  /// until at least `min_count` locations are found or `max_expansions` is hit.
  /// Falls back to k-nearest around the midpoint of the two centers if nothing
  /// was found. Throws Error{NoLocationOfType} if the type has no locations.
  ExpandedQuery query_ring_overlap_with_expansion(const ActivityType& type, Annulus a, Annulus b,
                                                  std::size_t min_count, double expansion_factor,
                                                  std::size_t max_expansions) const;

  std::size_t count(const ActivityType& type) const;
  std::span<const Location> locations() const { return locations_; }
  double cell_size() const noexcept { return cell_size_; }

 private:
  struct TypeGrid {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double cell = 0.0;
    std::int64_t nx = 0;
    std::int64_t ny = 0;
    std::vector<std::uint32_t> cell_start;  // CSR offsets, nx * ny + 1
    std::vector<std::uint32_t> entries;     // indices into locations_
  };

  const TypeGrid* grid_for(const ActivityType& type) const;

  std::vector<Location> locations_;  // ascending id
  std::map<ActivityType, TypeGrid> grids_;
  double cell_size_;
};

inline LocationIndex build_index(std::vector<Location> locations,
                                 double cell_size = LocationIndex::kDefaultCellSize) {
  return LocationIndex(std::move(locations), cell_size);
}

}  // namespace chainloc
