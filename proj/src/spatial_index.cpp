#include "chainloc/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <unordered_set>
#include <utility>

#include "chainloc/error.hpp"

namespace chainloc {

namespace {

// Grids never hold more cells than this multiple of their entry count
// (plus a small floor); sparse, wide data gets coarser cells instead.
constexpr double kMaxCellsPerEntry = 4.0;
constexpr double kMinCellBudget = 1024.0;

double squared_distance(Point2D a, Point2D b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

struct CellRect {
  double x0, y0, x1, y1;
};

double min_distance(const CellRect& r, Point2D p) {
  const double dx = std::max({r.x0 - p.x, 0.0, p.x - r.x1});
  const double dy = std::max({r.y0 - p.y, 0.0, p.y - r.y1});
  return std::sqrt(dx * dx + dy * dy);
}

double max_distance(const CellRect& r, Point2D p) {
  const double dx = std::max(std::abs(p.x - r.x0), std::abs(p.x - r.x1));
  const double dy = std::max(std::abs(p.y - r.y0), std::abs(p.y - r.y1));
  return std::sqrt(dx * dx + dy * dy);
}

bool rect_may_touch(const CellRect& r, const Annulus& a) {
  return min_distance(r, a.center) <= a.r_max && max_distance(r, a.center) >= a.r_min;
}

}  // namespace

LocationIndex::LocationIndex(std::vector<Location> locations, double cell_size)
    : locations_(std::move(locations)), cell_size_(cell_size) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw Error(ErrorKind::InvalidConfig, "cell size must be positive");
  }
  if (locations_.empty()) throw Error(ErrorKind::EmptyUniverse, "no locations to index");
  if (locations_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::TooLarge, "too many locations");
  }

  std::sort(locations_.begin(), locations_.end(),
            [](const Location& a, const Location& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < locations_.size(); ++i) {
    const Location& loc = locations_[i];
    const std::string where = "location " + std::to_string(loc.id);
    if (i > 0 && locations_[i - 1].id == loc.id) {
      throw Error(ErrorKind::InvalidInput, "duplicate " + where);
    }
    if (!is_finite(loc.position)) throw Error(ErrorKind::InvalidInput, where + ": bad position");
    if (!std::isfinite(loc.potential) || loc.potential < 0.0) {
      throw Error(ErrorKind::InvalidInput, where + ": potential must be >= 0");
    }
    if (loc.types.empty()) throw Error(ErrorKind::InvalidInput, where + ": no types");
  }

  std::map<ActivityType, std::vector<std::uint32_t>> members;
  for (std::size_t i = 0; i < locations_.size(); ++i) {
    std::set<ActivityType> seen;
    for (const auto& type : locations_[i].types) {
      if (seen.insert(type).second) members[type].push_back(static_cast<std::uint32_t>(i));
    }
  }

  for (auto& [type, idx] : members) {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = min_x;
    double max_x = -min_x;
    double max_y = -min_x;
    for (auto i : idx) {
      const Point2D p = locations_[i].position;
      min_x = std::min(min_x, p.x);
      min_y = std::min(min_y, p.y);
      max_x = std::max(max_x, p.x);
      max_y = std::max(max_y, p.y);
    }

    TypeGrid grid;
    grid.origin_x = min_x;
    grid.origin_y = min_y;
    grid.cell = cell_size;
    const double budget = std::max(kMinCellBudget, kMaxCellsPerEntry * double(idx.size()));
    for (;;) {
      const double nx = std::floor((max_x - min_x) / grid.cell) + 1.0;
      const double ny = std::floor((max_y - min_y) / grid.cell) + 1.0;
      if (nx * ny <= budget) {
        grid.nx = static_cast<std::int64_t>(nx);
        grid.ny = static_cast<std::int64_t>(ny);
        break;
      }
      grid.cell *= std::sqrt(nx * ny / budget) * 1.01;
    }

    const auto cell_of = [&](Point2D p) {
      const auto cx = std::min<std::int64_t>(
          grid.nx - 1, static_cast<std::int64_t>(std::floor((p.x - grid.origin_x) / grid.cell)));
      const auto cy = std::min<std::int64_t>(
          grid.ny - 1, static_cast<std::int64_t>(std::floor((p.y - grid.origin_y) / grid.cell)));
      return static_cast<std::size_t>(cy * grid.nx + cx);
    };

    const auto cells = static_cast<std::size_t>(grid.nx * grid.ny);
    grid.cell_start.assign(cells + 1, 0);
    for (auto i : idx) ++grid.cell_start[cell_of(locations_[i].position) + 1];
    for (std::size_t c = 0; c < cells; ++c) grid.cell_start[c + 1] += grid.cell_start[c];
    grid.entries.resize(idx.size());
    std::vector<std::uint32_t> fill(grid.cell_start.begin(), grid.cell_start.end() - 1);
    for (auto i : idx) grid.entries[fill[cell_of(locations_[i].position)]++] = i;

    grids_.emplace(type, std::move(grid));
  }
}

const LocationIndex::TypeGrid* LocationIndex::grid_for(const ActivityType& type) const {
  const auto it = grids_.find(type);
  return it == grids_.end() ? nullptr : &it->second;
}

std::size_t LocationIndex::count(const ActivityType& type) const {
  const TypeGrid* grid = grid_for(type);
  return grid ? grid->entries.size() : 0;
}

std::vector<const Location*> LocationIndex::query_ring_overlap(const ActivityType& type,
                                                               const Annulus& a,
                                                               const Annulus& b) const {
  std::vector<const Location*> out;
  const TypeGrid* grid = grid_for(type);
  if (!grid) return out;
  if (a.r_min > a.r_max || b.r_min > b.r_max) return out;

  // Cell rectangles are widened slightly before pruning.
  const double slack = 1e-7 * grid->cell;

  const auto clamp_cell = [](double v, std::int64_t n) {
    if (!(v > 0.0)) return std::int64_t{0};  // also catches NaN and -inf
    if (v >= double(n - 1)) return n - 1;
    return static_cast<std::int64_t>(v);
  };
  const double lo_x = std::max(a.center.x - a.r_max, b.center.x - b.r_max);
  const double hi_x = std::min(a.center.x + a.r_max, b.center.x + b.r_max);
  const double lo_y = std::max(a.center.y - a.r_max, b.center.y - b.r_max);
  const double hi_y = std::min(a.center.y + a.r_max, b.center.y + b.r_max);
  if (lo_x > hi_x || lo_y > hi_y) return out;
  const double grid_hi_x = grid->origin_x + double(grid->nx) * grid->cell;
  const double grid_hi_y = grid->origin_y + double(grid->ny) * grid->cell;
  if (hi_x < grid->origin_x - slack || lo_x > grid_hi_x + slack) return out;
  if (hi_y < grid->origin_y - slack || lo_y > grid_hi_y + slack) return out;

  const auto cx0 = clamp_cell(std::floor((lo_x - grid->origin_x) / grid->cell) - 1, grid->nx);
  const auto cx1 = clamp_cell(std::floor((hi_x - grid->origin_x) / grid->cell) + 1, grid->nx);
  const auto cy0 = clamp_cell(std::floor((lo_y - grid->origin_y) / grid->cell) - 1, grid->ny);
  const auto cy1 = clamp_cell(std::floor((hi_y - grid->origin_y) / grid->cell) + 1, grid->ny);

  std::vector<std::uint32_t> hits;
  for (auto cy = cy0; cy <= cy1; ++cy) {
    for (auto cx = cx0; cx <= cx1; ++cx) {
      const std::size_t cell = static_cast<std::size_t>(cy * grid->nx + cx);
      const auto first = grid->cell_start[cell];
      const auto last = grid->cell_start[cell + 1];
      if (first == last) continue;
      const CellRect rect{grid->origin_x + double(cx) * grid->cell - slack,
                          grid->origin_y + double(cy) * grid->cell - slack,
                          grid->origin_x + double(cx + 1) * grid->cell + slack,
                          grid->origin_y + double(cy + 1) * grid->cell + slack};
      if (!rect_may_touch(rect, a) || !rect_may_touch(rect, b)) continue;
      for (auto e = first; e < last; ++e) {
        const auto i = grid->entries[e];
        const Point2D p = locations_[i].position;
        if (a.contains(p) && b.contains(p)) hits.push_back(i);
      }
    }
  }
  std::sort(hits.begin(), hits.end());
  out.reserve(hits.size());
  for (auto i : hits) out.push_back(&locations_[i]);
  return out;
}

std::vector<const Location*> LocationIndex::query_k_nearest(const ActivityType& type, Point2D p,
                                                            std::size_t k) const {
  std::vector<const Location*> out;
  const TypeGrid* grid = grid_for(type);
  if (!grid || k == 0) return out;

  // Max-heap on (squared distance, index); index order equals id order.
  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry> best;
  const auto offer = [&](std::uint32_t i) {
    const Entry e{squared_distance(locations_[i].position, p), i};
    if (best.size() < k) {
      best.push(e);
    } else if (e < best.top()) {
      best.pop();
      best.push(e);
    }
  };

  // Small universes: a scan is cheaper than ring walking.
  if (grid->entries.size() <= 64) {
    for (auto i : grid->entries) offer(i);
  } else {
    const double limit = 1e15;
    const auto px = static_cast<std::int64_t>(
        std::clamp(std::floor((p.x - grid->origin_x) / grid->cell), -limit, limit));
    const auto py = static_cast<std::int64_t>(
        std::clamp(std::floor((p.y - grid->origin_y) / grid->cell), -limit, limit));
    const auto cheb = [&](std::int64_t x, std::int64_t y) {
      return std::max(std::abs(x - px), std::abs(y - py));
    };
    const std::int64_t gx1 = grid->nx - 1;
    const std::int64_t gy1 = grid->ny - 1;
    const std::int64_t dx_near = px < 0 ? -px : (px > gx1 ? px - gx1 : 0);
    const std::int64_t dy_near = py < 0 ? -py : (py > gy1 ? py - gy1 : 0);
    const std::int64_t r_first = std::max(dx_near, dy_near);
    const std::int64_t r_last =
        std::max({cheb(0, 0), cheb(gx1, 0), cheb(0, gy1), cheb(gx1, gy1)});

    const auto visit = [&](std::int64_t cx, std::int64_t cy) {
      if (cx < 0 || cy < 0 || cx > gx1 || cy > gy1) return;
      const std::size_t cell = static_cast<std::size_t>(cy * grid->nx + cx);
      for (auto e = grid->cell_start[cell]; e < grid->cell_start[cell + 1]; ++e) {
        offer(grid->entries[e]);
      }
    };

    for (std::int64_t r = r_first; r <= r_last; ++r) {
      if (r == 0) {
        visit(px, py);
      } else {
        const std::int64_t y_lo = std::max(py - r, std::int64_t{0});
        const std::int64_t y_hi = std::min(py + r, gy1);
        const std::int64_t x_lo = std::max(px - r, std::int64_t{0});
        const std::int64_t x_hi = std::min(px + r, gx1);
        for (std::int64_t y = y_lo; y <= y_hi; ++y) {
          if (y == py - r || y == py + r) {
            for (std::int64_t x = x_lo; x <= x_hi; ++x) visit(x, y);
          } else {
            visit(px - r, y);
            visit(px + r, y);
          }
        }
      }
      // Every unvisited cell is at least r whole cells away from p.
      if (best.size() == k) {
        const double reach = double(r) * grid->cell * (1.0 - 1e-9);
        if (best.top().first < reach * reach) break;
      }
    }
  }

  std::vector<Entry> sorted;
  sorted.reserve(best.size());
  while (!best.empty()) {
    sorted.push_back(best.top());
    best.pop();
  }
  std::sort(sorted.begin(), sorted.end());
  out.reserve(sorted.size());
  for (const auto& e : sorted) out.push_back(&locations_[e.second]);
  return out;
}

ExpandedQuery LocationIndex::query_ring_overlap_with_expansion(const ActivityType& type, Annulus a,
                                                               Annulus b, std::size_t min_count,
                                                               double expansion_factor,
                                                               std::size_t max_expansions) const {
  const std::size_t universe = count(type);
  if (universe == 0) {
    throw Error(ErrorKind::NoLocationOfType, "no location supports '" + type.name() + "'");
  }
  if (min_count == 0) throw Error(ErrorKind::InvalidCall, "min_count must be positive");
  if (!(expansion_factor > 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "expansion factor must exceed 1");
  }

  const double floor_radius = cell_size_ / 10.0;
  const auto widen = [&](Annulus& ring) {
    ring.r_min /= expansion_factor;
    if (ring.r_min < floor_radius) ring.r_min = 0.0;
    ring.r_max = std::max(ring.r_max * expansion_factor, floor_radius);
  };

  ExpandedQuery result;
  result.locations = query_ring_overlap(type, a, b);
  while (result.locations.size() < min_count && result.locations.size() < universe &&
         result.expansions_used < max_expansions) {
    widen(a);
    widen(b);
    ++result.expansions_used;
    result.locations = query_ring_overlap(type, a, b);
  }
  if (result.locations.empty()) {
    const Point2D mid{0.5 * (a.center.x + b.center.x), 0.5 * (a.center.y + b.center.y)};
    result.locations = query_k_nearest(type, mid, min_count);
  }
  return result;
}

}  // namespace chainloc
