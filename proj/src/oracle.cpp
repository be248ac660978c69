#include "chainloc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "chainloc/error.hpp"
#include "chainloc/io.hpp"

namespace chainloc::oracle {

namespace {

double gap(double ax, double ay, double bx, double by) { return std::hypot(bx - ax, by - ay); }

double two_circle_deviation(double x, double y, Point2D s, double d1, Point2D e, double d2) {
  return std::fabs(gap(s.x, s.y, x, y) - d1) + std::fabs(gap(x, y, e.x, e.y) - d2);
}

}  // namespace

BruteForceResult brute_force_segment(const Segment& segment, std::span<const Location> locations,
                                     double alpha, double beta) {
  const std::size_t n = segment.inner_activities.size();
  if (segment.trips.size() != n + 1) {
    throw Error(ErrorKind::InvalidSegment, "segment needs one more trip than inner activities");
  }

  // Per activity, the compatible locations in ascending id order.
  std::vector<std::vector<const Location*>> options(n);
  double assignments = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const ActivityType& wanted = segment.inner_activities[j].type;
    for (const Location& loc : locations) {
      if (std::find(loc.types.begin(), loc.types.end(), wanted) != loc.types.end()) {
        options[j].push_back(&loc);
      }
    }
    if (options[j].empty()) {
      throw Error(ErrorKind::NoLocationOfType, "no location supports '" + wanted.name() + "'");
    }
    std::sort(options[j].begin(), options[j].end(),
              [](const Location* a, const Location* b) { return a->id < b->id; });
    assignments *= double(options[j].size());
    if (assignments > kMaxAssignments) {
      throw Error(ErrorKind::TooLarge, "more than 1e7 assignments to enumerate");
    }
  }

  std::vector<std::size_t> pick(n, 0);
  BruteForceResult best;
  bool have_best = false;
  for (;;) {
    double potential = 0.0;
    double deviation = 0.0;
    double px = segment.start.x;
    double py = segment.start.y;
    for (std::size_t i = 0; i <= n; ++i) {
      const double qx = i < n ? options[i][pick[i]]->position.x : segment.end.x;
      const double qy = i < n ? options[i][pick[i]]->position.y : segment.end.y;
      deviation += std::fabs(segment.trips[i].distance - gap(px, py, qx, qy));
      if (i < n) potential += options[i][pick[i]]->potential;
      px = qx;
      py = qy;
    }
    const double score = alpha * potential - beta * deviation;
    // Odometer order is lexicographic in ids; strict > keeps the smallest tuple.
    if (!have_best || score > best.score) {
      best.score = score;
      best.placement_ids.clear();
      for (std::size_t i = 0; i < n; ++i) best.placement_ids.push_back(options[i][pick[i]]->id);
      have_best = true;
    }

    std::size_t digit = n;
    while (digit > 0) {
      --digit;
      if (++pick[digit] < options[digit].size()) break;
      pick[digit] = 0;
      if (digit == 0) return best;
    }
    if (n == 0) return best;
  }
}

std::vector<double> sample_polyline_endpoints(std::span<const double> trip_distances,
                                              std::size_t samples, SeededRng& rng) {
  std::vector<double> out;
  out.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    double x = 0.0;
    double y = 0.0;
    for (double leg : trip_distances) {
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      x += leg * std::cos(angle);
      y += leg * std::sin(angle);
    }
    out.push_back(std::hypot(x, y));
  }
  return out;
}

std::vector<FieldSample> deviation_field(Point2D start, double d1, Point2D end, double d2,
                                         const Box& box, double resolution) {
  if (!(resolution > 0.0)) throw Error(ErrorKind::InvalidConfig, "resolution must be positive");
  const auto nx = static_cast<std::size_t>(std::floor((box.max_x - box.min_x) / resolution + 1e-9)) + 1;
  const auto ny = static_cast<std::size_t>(std::floor((box.max_y - box.min_y) / resolution + 1e-9)) + 1;
  if (double(nx) * double(ny) > 1e8) throw Error(ErrorKind::TooLarge, "field grid too large");

  std::vector<FieldSample> field;
  field.reserve(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    const double y = box.min_y + double(iy) * resolution;
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double x = box.min_x + double(ix) * resolution;
      field.push_back({x, y, two_circle_deviation(x, y, start, d1, end, d2)});
    }
  }
  return field;
}

GridMinimum grid_min_deviation(Point2D start, double d1, Point2D end, double d2, const Box& box,
                               double resolution) {
  const auto field = deviation_field(start, d1, end, d2, box, resolution);
  const auto best = std::min_element(
      field.begin(), field.end(),
      [](const FieldSample& a, const FieldSample& b) { return a.deviation < b.deviation; });
  return {{best->x, best->y}, best->deviation};
}

void write_field_csv(std::ostream& out, std::span<const FieldSample> field) {
  out << "x,y,deviation\n";
  for (const auto& s : field) {
    out << io::format_double(s.x) << ',' << io::format_double(s.y) << ','
        << io::format_double(s.deviation) << '\n';
  }
}

}  // namespace chainloc::oracle
