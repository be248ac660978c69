#include "chainloc/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "chainloc/error.hpp"
#include "chainloc/geometry.hpp"
#include "chainloc/rng.hpp"

namespace chainloc::synth {

namespace {

constexpr std::size_t kMaxAttemptsPerPerson = 1000;

double round_to(double v, double step) { return std::round(v / step) * step; }

Point2D random_point(const BoundingBox& box, SeededRng& rng) {
  return {round_to(rng.uniform(box.min_x, box.max_x), 0.1),
          round_to(rng.uniform(box.min_y, box.max_y), 0.1)};
}

double draw_potential(const PotentialLaw& law, SeededRng& rng) {
  switch (law.kind) {
    case PotentialLaw::Kind::Constant:
      return law.a;
    case PotentialLaw::Kind::Uniform:
      return rng.uniform(law.a, law.b);
    case PotentialLaw::Kind::Pareto:
      return law.a * std::pow(1.0 - rng.uniform(), -1.0 / law.b);
  }
  return 0.0;
}

std::string person_id(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%06zu", i + 1);
  return buf;
}

// Location of the type whose distance from `from` is closest to `wanted`.
const Location* closest_to_radius(const std::vector<const Location*>& pool, Point2D from,
                                  double wanted) {
  const Location* best = nullptr;
  double best_err = 0.0;
  for (const Location* loc : pool) {
    const double err = std::abs(distance(from, loc->position) - wanted);
    if (!best || err < best_err) {
      best = loc;
      best_err = err;
    }
  }
  return best;
}

// Rewrites the trips of one segment so its endpoints cannot be connected.
bool break_segment(PersonPlan& plan, std::size_t first_trip, std::size_t trip_count, Point2D start,
                   Point2D end, double max_trip, SeededRng& rng) {
  const double gap = distance(start, end);
  double sum = 0.0;
  for (std::size_t i = 0; i < trip_count; ++i) sum += plan.trips[first_trip + i].distance;

  const bool shrink = gap >= 50.0 && sum > 0.0 && rng.uniform() < 0.5;
  if (shrink) {
    const double factor = rng.uniform(0.3, 0.8) * gap / sum;
    for (std::size_t i = 0; i < trip_count; ++i) plan.trips[first_trip + i].distance *= factor;
    return true;
  }
  const auto pick = static_cast<std::size_t>(rng.uniform_int(0, std::int64_t(trip_count) - 1));
  const double others = sum - plan.trips[first_trip + pick].distance;
  const double stretched = gap + others + rng.uniform(500.0, 3000.0);
  if (stretched > max_trip) return false;
  plan.trips[first_trip + pick].distance = stretched;
  return true;
}

}  // namespace

std::vector<Location> generate_locations(std::size_t count, const BoundingBox& box,
                                         const TypeMix& type_mix, const PotentialLaw& potential,
                                         std::uint64_t seed) {
  if (type_mix.empty()) throw Error(ErrorKind::InvalidConfig, "empty type mix");
  double total = 0.0;
  for (const auto& [name, share] : type_mix) {
    if (name.empty() || !(share >= 0.0)) {
      throw Error(ErrorKind::InvalidConfig, "type mix needs named types with shares >= 0");
    }
    total += share;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidConfig, "type shares sum to " + std::to_string(total));
  }
  if (!(box.max_x > box.min_x) || !(box.max_y > box.min_y)) {
    throw Error(ErrorKind::InvalidConfig, "empty bounding box");
  }
  const bool bad_law =
      (potential.kind == PotentialLaw::Kind::Constant && !(potential.a >= 0.0)) ||
      (potential.kind == PotentialLaw::Kind::Uniform &&
       !(potential.a >= 0.0 && potential.b >= potential.a)) ||
      (potential.kind == PotentialLaw::Kind::Pareto && !(potential.a > 0.0 && potential.b > 0.0));
  if (bad_law) throw Error(ErrorKind::InvalidConfig, "invalid potential law");

  SeededRng rng(mix_seed(seed, "locations"));
  std::vector<Location> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Location loc;
    loc.id = static_cast<LocationId>(i + 1);
    loc.position = random_point(box, rng);
    const double u = rng.uniform();
    double acc = 0.0;
    std::string type = type_mix.back().first;
    for (const auto& [name, share] : type_mix) {
      acc += share;
      if (u < acc) {
        type = name;
        break;
      }
    }
    loc.types.emplace_back(type);
    loc.potential = draw_potential(potential, rng);
    out.push_back(std::move(loc));
  }
  return out;
}

bool plan_is_feasible(const PersonPlan& plan) {
  for (const Segment& segment : split_into_segments(plan)) {
    if (!segment_is_realizable(segment)) return false;
  }
  return true;
}

Population generate_population(const PopulationSpec& spec,
                               const std::vector<Location>& locations) {
  if (!(spec.infeasible_share >= 0.0 && spec.infeasible_share <= 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "infeasible_share must lie in [0, 1]");
  }
  if (spec.chain_length.min_trips < 2 || spec.chain_length.max_trips < spec.chain_length.min_trips) {
    throw Error(ErrorKind::InvalidConfig, "chains need between 2 and max_trips trips");
  }
  if (spec.secondary_types.empty()) {
    throw Error(ErrorKind::InvalidConfig, "no secondary activity types");
  }

  std::map<std::string, std::vector<const Location*>> by_type;
  for (const Location& loc : locations) {
    for (const auto& t : loc.types) by_type[t.name()].push_back(&loc);
  }
  for (const auto& t : spec.secondary_types) {
    if (by_type[t].empty()) throw Error(ErrorKind::InvalidConfig, "no location of type " + t);
  }
  if (by_type[spec.main_type].empty()) {
    throw Error(ErrorKind::InvalidConfig, "no location of type " + spec.main_type);
  }

  SeededRng pick_rng(mix_seed(spec.seed, "infeasible"));
  const auto n_infeasible =
      static_cast<std::size_t>(std::floor(spec.infeasible_share * double(spec.n_persons) + 1e-9));
  std::vector<std::size_t> order(spec.n_persons);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[pick_rng.uniform_int(0, std::int64_t(i) - 1)]);
  }

  Population population;
  population.infeasible.assign(spec.n_persons, false);
  for (std::size_t k = 0; k < n_infeasible; ++k) population.infeasible[order[k]] = true;

  for (std::size_t p = 0; p < spec.n_persons; ++p) {
    const std::string id = person_id(p);
    SeededRng rng(mix_seed(spec.seed, id));
    bool done = false;
    for (std::size_t attempt = 0; attempt < kMaxAttemptsPerPerson && !done; ++attempt) {
      PersonPlan plan;
      plan.person_id = id;
      const Point2D home = random_point(spec.area, rng);
      const auto trips = static_cast<std::size_t>(rng.uniform_int(
          std::int64_t(spec.chain_length.min_trips), std::int64_t(spec.chain_length.max_trips)));
      const std::size_t middle = trips - 1;
      const std::size_t main_at =
          middle >= 2 ? static_cast<std::size_t>(rng.uniform_int(1, std::int64_t(middle))) : 0;

      plan.activities.push_back({0, ActivityType(spec.home_type), home});
      std::vector<Point2D> truth{home};
      Point2D at = home;
      for (std::size_t k = 1; k <= middle; ++k) {
        Activity activity;
        activity.index_in_chain = k;
        const Location* target = nullptr;
        if (k == main_at) {
          activity.type = ActivityType(spec.main_type);
          const auto& pool = by_type[spec.main_type];
          target = pool[rng.uniform_int(0, std::int64_t(pool.size()) - 1)];
          if (spec.fix_main_activity) activity.fixed = target->position;
        } else {
          const auto& name = spec.secondary_types[rng.uniform_int(
              0, std::int64_t(spec.secondary_types.size()) - 1)];
          activity.type = ActivityType(name);
          const double wanted = std::min(
              spec.trip_distance.max_m,
              spec.trip_distance.median_m * std::exp(spec.trip_distance.sigma * rng.normal()));
          target = closest_to_radius(by_type[name], at, wanted);
        }
        plan.activities.push_back(activity);
        at = target->position;
        truth.push_back(at);
      }
      plan.activities.push_back({trips, ActivityType(spec.home_type), home});
      truth.push_back(home);

      bool too_long = false;
      for (std::size_t i = 0; i < trips; ++i) {
        const double d = distance(truth[i], truth[i + 1]);
        too_long = too_long || d > spec.trip_distance.max_m;
        plan.trips.push_back({i, d, std::nullopt});
      }
      if (too_long || !plan_is_feasible(plan)) continue;

      if (population.infeasible[p]) {
        // Break one segment that has something to place.
        const auto segments = split_into_segments(plan);
        std::vector<std::size_t> open;
        for (std::size_t s = 0; s < segments.size(); ++s) {
          if (!segments[s].inner_activities.empty()) open.push_back(s);
        }
        const std::size_t s = open[rng.uniform_int(0, std::int64_t(open.size()) - 1)];
        std::size_t first_trip = 0;
        for (std::size_t q = 0; q < s; ++q) first_trip += segments[q].trips.size();
        if (!break_segment(plan, first_trip, segments[s].trips.size(), segments[s].start,
                           segments[s].end, spec.trip_distance.max_m, rng)) {
          continue;
        }
        if (plan_is_feasible(plan)) continue;
      }
      population.plans.push_back(std::move(plan));
      done = true;
    }
    if (!done) {
      throw Error(ErrorKind::InvalidConfig, "could not generate a plan for " + id +
                                                "; check the distance law against the area");
    }
  }
  return population;
}

Scenario parse_scenario(const std::string& text) {
  if (text == "1") return {true, true};
  if (text == "2") return {true, false};
  if (text == "3") return {false, true};
  if (text == "4") return {false, false};
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::string main = text.substr(0, slash);
    const std::string feas = text.substr(slash + 1);
    const bool main_ok = main == "fixed-main" || main == "free-main";
    const bool feas_ok = feas == "feasible-only" || feas == "all";
    if (main_ok && feas_ok) return {main == "fixed-main", feas == "feasible-only"};
  }
  throw Error(ErrorKind::InvalidConfig,
              "scenario must be 1-4 or <fixed-main|free-main>/<feasible-only|all>: " + text);
}

std::string to_string(const Scenario& scenario) {
  return std::string(scenario.fix_main_activity ? "fixed-main" : "free-main") + "/" +
         (scenario.feasible_only ? "feasible-only" : "all");
}

Dataset generate_dataset(std::size_t n_persons, std::size_t n_locations, const Scenario& scenario,
                         std::uint64_t seed, double extent_m) {
  const BoundingBox box{0.0, 0.0, extent_m, extent_m};
  const TypeMix mix{{"shopping", 0.35}, {"leisure", 0.30}, {"errand", 0.20}, {"work", 0.15}};
  Dataset data;
  data.locations = generate_locations(n_locations, box, mix, PotentialLaw::pareto(1.0, 1.5), seed);

  PopulationSpec spec;
  spec.n_persons = n_persons;
  spec.infeasible_share = scenario.feasible_only ? 0.0 : 0.3;
  spec.fix_main_activity = scenario.fix_main_activity;
  spec.area = box;
  spec.seed = seed;
  data.population = generate_population(spec, data.locations);
  return data;
}

SegmentInstance generate_segment_instance(std::size_t inner_count, std::size_t location_count,
                                          std::uint64_t seed, double extent_m) {
  if (location_count < 2) throw Error(ErrorKind::InvalidConfig, "need at least two locations");
  SeededRng rng(mix_seed(seed, "segment-instance"));
  const BoundingBox box{0.0, 0.0, extent_m, extent_m};
  const std::vector<ActivityType> kinds{ActivityType("a"), ActivityType("b")};

  SegmentInstance inst;
  for (std::size_t i = 0; i < location_count; ++i) {
    Location loc;
    loc.id = static_cast<LocationId>(i + 1);
    loc.position = random_point(box, rng);
    // First two locations pin one type each; the rest get one or both.
    if (i < 2) {
      loc.types.push_back(kinds[i]);
    } else {
      const double u = rng.uniform();
      if (u < 0.4) loc.types.push_back(kinds[0]);
      else if (u < 0.8) loc.types.push_back(kinds[1]);
      else loc.types = {kinds[1], kinds[0]};
    }
    loc.potential = round_to(rng.uniform(0.0, 3.0), 0.001);
    inst.locations.push_back(std::move(loc));
  }

  Segment& seg = inst.segment;
  seg.start = random_point(box, rng);
  seg.end = rng.uniform() < 0.3 ? seg.start : random_point(box, rng);
  for (std::size_t j = 0; j < inner_count; ++j) {
    seg.inner_activities.push_back(
        {j + 1, kinds[rng.uniform_int(0, 1)], std::nullopt});
  }

  // Distances from a random realized chain, jittered so most instances have
  // no zero-deviation answer.
  Point2D at = seg.start;
  for (std::size_t i = 0; i <= inner_count; ++i) {
    const Point2D next = i < inner_count
                             ? inst.locations[rng.uniform_int(0, std::int64_t(location_count) - 1)]
                                   .position
                             : seg.end;
    const double jitter = rng.uniform() < 0.7 ? rng.normal() * 200.0 : rng.uniform(-1.0, 1.0) * 2000.0;
    seg.trips.push_back({i, std::max(0.0, round_to(distance(at, next) + jitter, 1.0)), std::nullopt});
    at = next;
  }
  return inst;
}

}  // namespace chainloc::synth
