#include "chainloc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <unordered_set>

#include "chainloc/error.hpp"
#include "chainloc/geometry.hpp"

namespace chainloc {

namespace {

// Distance from p to the band [r_min, r_max] around the ring's center.
double ring_slack(Point2D p, const Annulus& ring) {
  const double r = distance(ring.center, p);
  return std::max(0.0, ring.r_min - r) + std::max(0.0, r - ring.r_max);
}

struct Partial {
  std::vector<const Location*> placements;
  double score = 0.0;
};

class SegmentSearch {
 public:
  SegmentSearch(const LocationIndex& index, const SolverConfig& config, SeededRng& rng)
      : index_(index), config_(config), rng_(rng) {}

  Partial solve(Point2D start, Point2D end, std::span<const Trip> trips,
                std::span<const Activity> inner) {
    if (inner.empty()) {
      return {{}, -config_.beta * trip_deviation(start, end, trips.front().distance)};
    }
    if (inner.size() == 1) {
      const TwoTripChoice choice = solve_two_trip(start, end, trips[0].distance, trips[1].distance,
                                                  inner[0].type, index_, config_, rng_);
      return {{choice.candidate.location}, choice.candidate.score};
    }
    return solve_recursive(start, end, trips, inner);
  }

 private:
  Partial solve_recursive(Point2D start, Point2D end, std::span<const Trip> trips,
                          std::span<const Activity> inner) {
    const std::size_t anchor = choose_anchor(inner.size(), config_.anchor_strategy);
    const SegmentRings rings = segment_ring_bounds(trips, anchor);
    const Annulus around_start{start, rings.from_start.r_min, rings.from_start.r_max};
    const Annulus around_end{end, rings.to_end.r_min, rings.to_end.r_max};
    const ActivityType& type = inner[anchor].type;

    const ExpandedQuery found = index_.query_ring_overlap_with_expansion(
        type, around_start, around_end, config_.min_candidates_complex_case,
        config_.expansion_factor, config_.max_expansions);

    // The anchor's own trips are scored inside the two halves; here the
    // distance term only measures how far outside the original rings it lies.
    std::vector<ScoredCandidate> scored;
    scored.reserve(found.locations.size());
    for (const Location* loc : found.locations) {
      const double slack = ring_slack(loc->position, around_start) +
                           ring_slack(loc->position, around_end);
      scored.push_back(evaluate(*loc, slack, config_));
    }
    const auto branches =
        select(scored, config_.number_of_branches, config_.selection_strategy_complex_case, rng_);

    Partial best;
    bool have_best = false;
    for (const ScoredCandidate& candidate : branches) {
      const Point2D at = candidate.location->position;
      Partial left = solve(start, at, trips.first(anchor + 1), inner.first(anchor));
      Partial right = solve(at, end, trips.subspan(anchor + 1), inner.subspan(anchor + 1));
      const double score =
          left.score + right.score + config_.alpha * candidate.location->potential;
      if (!have_best || score > best.score) {
        best.placements = std::move(left.placements);
        best.placements.push_back(candidate.location);
        best.placements.insert(best.placements.end(), right.placements.begin(),
                               right.placements.end());
        best.score = score;
        have_best = true;
      }
    }
    return best;
  }

  const LocationIndex& index_;
  const SolverConfig& config_;
  SeededRng& rng_;
};

}  // namespace

void SolverConfig::validate() const {
  const auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); };
  if (!std::isfinite(alpha) || alpha < 0.0) fail("alpha must be finite and >= 0");
  if (!std::isfinite(beta) || beta < 0.0) fail("beta must be finite and >= 0");
  if (number_of_branches == 0) fail("number_of_branches must be positive");
  if (min_candidates_complex_case == 0) fail("min_candidates_complex_case must be positive");
  if (candidates_two_trip_case == 0) fail("candidates_two_trip_case must be positive");
  if (!std::isfinite(expansion_factor) || expansion_factor <= 1.0) {
    fail("expansion_factor must be > 1");
  }
  if (max_expansions == 0) fail("max_expansions must be positive");
  selection_strategy_complex_case.validate();
  selection_strategy_two_trip_case.validate();
}

ScoredCandidate evaluate(const Location& candidate, double deviation, const SolverConfig& config) {
  return {&candidate, deviation, config.alpha * candidate.potential - config.beta * deviation};
}

std::size_t choose_anchor(std::size_t inner_count, AnchorStrategy strategy) {
  if (inner_count < 2) {
    throw Error(ErrorKind::InvalidCall, "anchor needs at least two unplaced activities");
  }
  switch (strategy) {
    case AnchorStrategy::LowerMiddle:
      return (inner_count - 1) / 2;
  }
  return 0;
}

std::size_t choose_anchor(const Segment& segment, AnchorStrategy strategy) {
  return choose_anchor(segment.inner_activities.size(), strategy);
}

TwoTripChoice solve_two_trip(Point2D start, Point2D end, double d1, double d2,
                             const ActivityType& type, const LocationIndex& index,
                             const SolverConfig& config, SeededRng& rng) {
  if (index.count(type) == 0) {
    throw Error(ErrorKind::NoLocationOfType, "no location supports '" + type.name() + "'");
  }
  std::vector<ScoredCandidate> scored;
  const auto add = [&](const Location* loc) {
    scored.push_back(
        evaluate(*loc, total_deviation_two_trip(loc->position, start, d1, end, d2), config));
  };

  if (distance(start, end) <= 1e-12 * std::max(1.0, d1 + d2)) {
    // Same center: every radius in [lo, hi] is ideal. Widen a band around
    // that range until it holds enough candidates.
    const double lo = std::min(d1, d2);
    const double hi = std::max(d1, d2);
    const std::size_t wanted = std::min(config.candidates_two_trip_case, index.count(type));
    std::vector<const Location*> band;
    for (double w = index.cell_size() / 10.0; band.size() < wanted; w *= 2.0) {
      const Annulus ring{start, std::max(0.0, lo - w), hi + w};
      band = index.query_ring_overlap(type, ring, ring);
    }
    for (const Location* loc : band) add(loc);
  } else {
    const IdealPoints ideal = circle_intersections(start, d1, end, d2);
    std::unordered_set<const Location*> seen;
    for (const Point2D& p : ideal.points) {
      for (const Location* loc : index.query_k_nearest(type, p, config.candidates_two_trip_case)) {
        if (seen.insert(loc).second) add(loc);
      }
    }
  }

  const auto picked = select(scored, 1, config.selection_strategy_two_trip_case, rng);
  // KeepAll ignores the count; take the best of what was kept.
  const auto best = std::min_element(picked.begin(), picked.end(),
                                     [](const ScoredCandidate& a, const ScoredCandidate& b) {
                                       if (a.score != b.score) return a.score > b.score;
                                       return a.location->id < b.location->id;
                                     });
  return {*best, best->deviation};
}

BranchResult solve_segment(const Segment& segment, const LocationIndex& index,
                           const SolverConfig& config, SeededRng& rng) {
  if (segment.trips.size() != segment.inner_activities.size() + 1) {
    throw Error(ErrorKind::InvalidSegment, "segment needs one more trip than inner activities");
  }
  config.validate();

  SegmentSearch search(index, config, rng);
  Partial best = search.solve(segment.start, segment.end, segment.trips, segment.inner_activities);

  BranchResult result;
  result.score = best.score;
  PlacedSegment& placed = result.placed;
  placed.segment = segment;
  placed.total_score = best.score;
  Point2D from = segment.start;
  for (std::size_t i = 0; i < segment.trips.size(); ++i) {
    const Point2D to =
        i < best.placements.size() ? best.placements[i]->position : segment.end;
    placed.trip_deviations.push_back(trip_deviation(from, to, segment.trips[i].distance));
    placed.total_deviation += placed.trip_deviations.back();
    from = to;
  }
  placed.placements.reserve(best.placements.size());
  for (const Location* loc : best.placements) placed.placements.push_back(*loc);
  return result;
}

PlacedPlan solve_plan(const PersonPlan& plan, const LocationIndex& index,
                      const SolverConfig& config) {
  const std::vector<Segment> segments = split_into_segments(plan);
  SeededRng rng = SeededRng::for_person(config.master_seed, plan.person_id);

  PlacedPlan placed;
  placed.person_id = plan.person_id;
  placed.activities = plan.activities;
  placed.trips = plan.trips;
  placed.positions.resize(plan.activities.size());
  placed.location_ids.resize(plan.activities.size());

  for (std::size_t i = 0; i < plan.activities.size(); ++i) {
    if (plan.activities[i].fixed) placed.positions[i] = *plan.activities[i].fixed;
  }
  for (const Segment& segment : segments) {
    const BranchResult solved = solve_segment(segment, index, config, rng);
    for (std::size_t j = 0; j < segment.inner_activities.size(); ++j) {
      const std::size_t at = segment.inner_activities[j].index_in_chain;
      placed.positions[at] = solved.placed.placements[j].position;
      placed.location_ids[at] = solved.placed.placements[j].id;
    }
    placed.total_score += solved.score;
  }

  for (std::size_t i = 0; i < plan.trips.size(); ++i) {
    const double model = distance(placed.positions[i], placed.positions[i + 1]);
    placed.model_distances.push_back(model);
    placed.trip_deviations.push_back(std::abs(plan.trips[i].distance - model));
    placed.total_deviation += placed.trip_deviations.back();
  }
  return placed;
}

}  // namespace chainloc
