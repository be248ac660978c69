// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chainloc/batch.hpp"
#include "chainloc/cli.hpp"
#include "chainloc/geometry.hpp"
#include "chainloc/io.hpp"
#include "chainloc/oracle.hpp"
#include "chainloc/rng.hpp"
#include "chainloc/solver.hpp"
#include "chainloc/spatial_index.hpp"
#include "chainloc/synthgen.hpp"

using namespace chainloc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Location make_location(LocationId id, Point2D p, const std::string& type, double potential = 0.0) {
  Location loc;
  loc.id = id;
  loc.position = p;
  loc.types = {ActivityType(type)};
  loc.potential = potential;
  return loc;
}

double dist(Point2D a, Point2D b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string fmt(double v) { return io::format_double(v); }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("chainloc_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int cli(std::vector<std::string> args, std::string* out = nullptr) {
  args.insert(args.begin(), "chainloc");
  std::ostringstream o;
  std::ostringstream e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  return code;
}

Outcome oracle_equivalence() {
  SeededRng rng(20240101);
  int mismatches = 0;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto inner = static_cast<std::size_t>(i % 3 + 1);
    const auto count = static_cast<std::size_t>(rng.uniform_int(10, 30));
    const auto inst = synth::generate_segment_instance(inner, count, rng.next_u64());
    SolverConfig config;
    config.alpha = i % 2 == 0 ? 0.0 : 1.0;
    config.beta = 1.0;
    config.selection_strategy_complex_case = SelectionStrategy::keep_all();
    config.selection_strategy_two_trip_case = SelectionStrategy::keep_all();
    config.candidates_two_trip_case = count;
    config.min_candidates_complex_case = count;
    const LocationIndex index(inst.locations);
    SeededRng solver_rng(static_cast<std::uint64_t>(i));
    const double solved = solve_segment(inst.segment, index, config, solver_rng).score;
    const double best =
        oracle::brute_force_segment(inst.segment, inst.locations, config.alpha, 1.0).score;
    const double diff = std::abs(solved - best);
    worst = std::max(worst, diff);
    if (diff > 1e-9 * std::max(1.0, std::abs(best))) ++mismatches;
  }
  return {mismatches == 0,
          "200 instances, " + std::to_string(mismatches) + " mismatches, max |diff| " + fmt(worst)};
}

Outcome two_trip_exactness() {
  SeededRng rng(7);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Point2D s{rng.uniform(0, 10000), rng.uniform(0, 10000)};
    const Point2D e{rng.uniform(0, 10000), rng.uniform(0, 10000)};
    const double gap = dist(s, e);
    // d1 + d2 > gap > |d1 - d2|: two proper intersections.
    const double d1 = rng.uniform(0.2 * gap, 1.5 * gap);
    const double d2 = rng.uniform(std::abs(gap - d1) + 1.0, gap + d1 - 1.0);
    const double ux = (e.x - s.x) / gap;
    const double uy = (e.y - s.y) / gap;
    const double along = (d1 * d1 - d2 * d2 + gap * gap) / (2 * gap);
    const double side = std::sqrt(d1 * d1 - along * along) * (i % 2 == 0 ? 1.0 : -1.0);
    const Point2D exact{s.x + along * ux - side * uy, s.y + along * uy + side * ux};

    std::vector<Location> locs{make_location(1, exact, "shop")};
    for (int k = 0; k < 300; ++k) {
      locs.push_back(make_location(k + 2, {rng.uniform(0, 10000), rng.uniform(0, 10000)}, "shop"));
    }
    const LocationIndex index(locs);
    SeededRng solver_rng(1);
    const auto choice =
        solve_two_trip(s, e, d1, d2, ActivityType("shop"), index, SolverConfig{}, solver_rng);
    worst = std::max(worst, choice.deviation);
  }
  return {worst <= 1e-6, "100 instances, max deviation " + fmt(worst) + " m"};
}

Outcome infeasible_lower_bound() {
  SeededRng rng(3);
  double worst_below = 0.0;
  double worst_excess = 0.0;
  const double spacing = 10.0;
  for (int i = 0; i < 100; ++i) {
    const Point2D s{rng.uniform(0, 5000), rng.uniform(0, 5000)};
    const double angle = rng.uniform(0, 2 * M_PI);
    const double gap = rng.uniform(1000, 5000);
    const Point2D e{s.x + gap * std::cos(angle), s.y + gap * std::sin(angle)};
    const double d1 = rng.uniform(0, 0.45 * gap);
    const double d2 = rng.uniform(0, 0.45 * gap);
    const double bound = gap - d1 - d2;

    std::vector<Location> scattered;
    for (int k = 0; k < 200; ++k) {
      scattered.push_back(make_location(k + 1, {rng.uniform(-5000, 10000), rng.uniform(-5000, 10000)}, "x"));
    }
    SeededRng solver_rng(1);
    const LocationIndex loose(scattered);
    const auto free_choice =
        solve_two_trip(s, e, d1, d2, ActivityType("x"), loose, SolverConfig{}, solver_rng);
    worst_below = std::max(worst_below, bound - free_choice.deviation);

    auto grid = scattered;
    const auto steps = static_cast<int>(gap / spacing);
    for (int k = 0; k <= steps; ++k) {
      const double t = k * spacing / gap;
      grid.push_back(make_location(1000 + k, {s.x + t * (e.x - s.x), s.y + t * (e.y - s.y)}, "x"));
    }
    const LocationIndex dense(grid);
    const auto grid_choice =
        solve_two_trip(s, e, d1, d2, ActivityType("x"), dense, SolverConfig{}, solver_rng);
    worst_below = std::max(worst_below, bound - grid_choice.deviation);
    worst_excess = std::max(worst_excess, grid_choice.deviation - bound);
  }
  return {worst_below <= 1e-6 && worst_excess <= 2 * spacing,
          "100 instances, max shortfall below bound " + fmt(std::max(0.0, worst_below)) +
              " m, max excess on grid " + fmt(worst_excess) + " m (s=" + fmt(spacing) + ")"};
}

// Vertices of a polyline with the given legs that starts at the origin and
// ends `target_distance` away on +x, built leg by leg from triangles.
std::vector<Point2D> realize(const std::vector<double>& legs, double target_distance) {
  std::vector<Point2D> pts{{0, 0}};
  const Point2D target{target_distance, 0};
  for (std::size_t i = 0; i < legs.size(); ++i) {
    const Point2D from = pts.back();
    const double l = legs[i];
    if (i + 1 == legs.size()) {
      pts.push_back(target);
      break;
    }
    double rest_sum = 0.0;
    double rest_max = 0.0;
    for (std::size_t j = i + 1; j < legs.size(); ++j) {
      rest_sum += legs[j];
      rest_max = std::max(rest_max, legs[j]);
    }
    const double rest_min = std::max(0.0, 2 * rest_max - rest_sum);
    const double t = dist(from, target);
    const double u = std::max(rest_min, std::abs(l - t));
    if (t == 0.0) {
      pts.push_back({from.x + l, from.y});
      continue;
    }
    const double ux = (target.x - from.x) / t;
    const double uy = (target.y - from.y) / t;
    const double a = (l * l - u * u + t * t) / (2 * t);
    const double h = std::sqrt(std::max(0.0, l * l - a * a));
    pts.push_back({from.x + a * ux - h * uy, from.y + a * uy + h * ux});
  }
  return pts;
}

Outcome annulus_soundness() {
  {
    const std::vector<double> long_then_short{5, 1, 1};
    const auto r = reachability_annulus(long_then_short);
    if (r.r_min != 3.0 || r.r_max != 7.0) return {false, "[5,1,1] gave (" + fmt(r.r_min) + "," + fmt(r.r_max) + ")"};
  }
  SeededRng rng(99);
  std::size_t outside = 0;
  double worst_attain = 0.0;
  for (int list = 0; list < 50; ++list) {
    std::vector<double> legs(static_cast<std::size_t>(rng.uniform_int(1, 6)));
    for (auto& d : legs) d = rng.uniform(0, 100);
    if (list % 5 == 0) legs[0] = 400;  // long first leg keeps r_min positive
    const auto ring = reachability_annulus(legs);
    for (double e : oracle::sample_polyline_endpoints(legs, 100000, rng)) {
      const double tol = 1e-9 * std::max(1.0, ring.r_max);
      if (e < ring.r_min - tol || e > ring.r_max + tol) ++outside;
    }

    // Collinear extremes: every leg forward, or the longest against the rest.
    const double longest = *std::max_element(legs.begin(), legs.end());
    {
      Point2D p{0, 0};
      for (double d : legs) p.x += d;
      worst_attain = std::max(worst_attain, std::abs(dist({0, 0}, p) - ring.r_max));
    }
    if (ring.r_min > 0.0) {
      Point2D p{0, 0};
      bool flipped = false;
      for (double d : legs) {
        if (!flipped && d == longest) {
          p.x += d;
          flipped = true;
        } else {
          p.x -= d;
        }
      }
      worst_attain = std::max(worst_attain, std::abs(dist({0, 0}, p) - ring.r_min));
    } else {
      const auto pts = realize(legs, 0.0);
      for (std::size_t i = 0; i < legs.size(); ++i) {
        worst_attain = std::max(worst_attain, std::abs(dist(pts[i], pts[i + 1]) - legs[i]));
      }
      worst_attain = std::max(worst_attain, dist(pts.front(), pts.back()));
    }
  }
  return {outside == 0 && worst_attain <= 1e-9,
          "50 lists x 1e5 samples, " + std::to_string(outside) +
              " outside; bounds attained within " + fmt(worst_attain) + "; [5,1,1] -> (3,7)"};
}

synth::Dataset scenario_dataset(std::size_t persons, double infeasible_share, bool fixed_main,
                                std::uint64_t seed) {
  synth::Dataset data;
  data.locations = synth::generate_locations(
      5000, {0, 0, 15000, 15000},
      {{"shopping", 0.35}, {"leisure", 0.30}, {"errand", 0.20}, {"work", 0.15}},
      synth::PotentialLaw::pareto(1.0, 1.5), seed);
  synth::PopulationSpec spec;
  spec.n_persons = persons;
  spec.infeasible_share = infeasible_share;
  spec.fix_main_activity = fixed_main;
  spec.area = {0, 0, 15000, 15000};
  spec.seed = seed + 1;
  data.population = synth::generate_population(spec, data.locations);
  return data;
}

Outcome branch_monotonicity() {
  const auto data = scenario_dataset(200, 0.0, false, 555);
  const LocationIndex index(data.locations);
  SolverConfig config;
  config.selection_strategy_complex_case = SelectionStrategy::top_k();
  config.selection_strategy_two_trip_case = SelectionStrategy::top_k();
  std::map<std::string, double> previous;
  std::size_t violations = 0;
  std::size_t improved = 0;
  std::string means;
  for (std::size_t branches : {1, 2, 5, 10, 20, 50}) {
    config.number_of_branches = branches;
    const auto result = run_batch(data.population.plans, index, config, 1);
    if (!result.report.failures.empty()) return {false, "failures at branches=" + std::to_string(branches)};
    double sum = 0.0;
    for (const auto& p : result.report.persons) {
      sum += p.total_score;
      const auto it = previous.find(p.person_id);
      if (it != previous.end()) {
        if (p.total_score < it->second - 1e-9) ++violations;
        if (p.total_score > it->second + 1e-9) ++improved;
      }
      previous[p.person_id] = p.total_score;
    }
    means += (means.empty() ? "" : " ") + std::to_string(branches) + ":" +
             fmt(std::round(sum / double(result.report.persons.size()) * 1000) / 1000);
  }
  return {violations == 0, "200 persons, " + std::to_string(violations) + " decreases, " +
                               std::to_string(improved) + " improvements; mean score " + means};
}

Outcome determinism() {
  const auto dir = scratch("determinism");
  const auto locs = (dir / "locs.csv").string();
  const auto plans = (dir / "plans.txt").string();
  if (cli({"generate", "--locations", locs, "--plans", plans, "--persons", "300", "--scenario",
           "4", "--seed", "12"}) != cli::kExitOk) {
    return {false, "generate failed"};
  }
  std::vector<std::string> outputs;
  for (const char* threads : {"1", "4", "3"}) {
    const auto out = (dir / (std::string("placed_") + threads + ".csv")).string();
    const int code = cli({"solve", "--locations", locs, "--plans", plans, "--out", out,
                          "--threads", threads, "--seed", "42"});
    if (code != cli::kExitOk) return {false, "solve exited with " + std::to_string(code)};
    outputs.push_back(slurp(out));
  }
  const bool same = outputs[0] == outputs[1] && outputs[1] == outputs[2];
  return {same && !outputs[0].empty(),
          "300 persons, threads 1/4/3 outputs " + std::string(same ? "byte-identical" : "differ") +
              " (" + std::to_string(outputs[0].size()) + " bytes)"};
}

Outcome robustness() {
  const auto data = scenario_dataset(1000, 0.3, false, 77);
  const LocationIndex index(data.locations);
  const auto result = run_batch(data.population.plans, index, SolverConfig{}, 0);
  std::size_t unplaced = 0;
  std::size_t infeasible_placed = 0;
  std::map<std::string, bool> infeasible;
  for (std::size_t i = 0; i < data.population.plans.size(); ++i) {
    infeasible[data.population.plans[i].person_id] = data.population.infeasible[i];
  }
  for (const auto& placed : result.placed) {
    bool complete = true;
    for (std::size_t i = 0; i < placed.activities.size(); ++i) {
      if (!placed.activities[i].is_fixed() && !placed.location_ids[i]) {
        ++unplaced;
        complete = false;
      }
    }
    if (complete && infeasible[placed.person_id]) ++infeasible_placed;
  }
  const auto labelled = std::count(data.population.infeasible.begin(),
                                   data.population.infeasible.end(), true);
  const bool ok = result.report.failures.empty() && unplaced == 0 &&
                  result.placed.size() == 1000 && infeasible_placed == std::size_t(labelled);
  return {ok, "1000 persons, " + std::to_string(result.report.failures.size()) + " failures, " +
                  std::to_string(unplaced) + " unplaced activities, " +
                  std::to_string(infeasible_placed) + "/" + std::to_string(labelled) +
                  " infeasible chains fully placed"};
}

Outcome throughput() {
  const auto data = synth::generate_dataset(693, 5000, synth::parse_scenario("3"), 2024);
  const LocationIndex index(data.locations);
  const auto start = std::chrono::steady_clock::now();
  const auto result = run_batch(data.population.plans, index, SolverConfig{}, 1);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {seconds <= 300.0 && result.report.failures.empty(),
          "693 persons single-threaded in " + fmt(std::round(seconds * 100) / 100) +
              " s (limit 300 s), mean deviation " +
              fmt(std::round(result.report.mean_deviation * 100) / 100) + " m"};
}

Outcome deviation_field() {
  const double res = 0.05;
  std::string csv;
  if (cli({"field", "--d1", "1", "--d2", "6", "--start", "0,0", "--end", "6,0", "--resolution",
           "0.05", "--out", "-"},
          &csv) != cli::kExitOk) {
    return {false, "field command failed"};
  }
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  if (line != "x,y,deviation") return {false, "bad header"};
  std::map<std::pair<long, long>, double> grid;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string x, y, d;
    std::getline(row, x, ',');
    std::getline(row, y, ',');
    std::getline(row, d, ',');
    grid[{std::lround(std::stod(x) / res), std::lround(std::stod(y) / res)}] = std::stod(d);
  }
  // Local minima over the 8-neighbourhood that dip below the resolution.
  std::vector<std::pair<Point2D, double>> minima;
  for (const auto& [key, value] : grid) {
    if (value >= res) continue;
    bool lowest = true;
    for (long dx = -1; dx <= 1 && lowest; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy == 0) continue;
        const auto it = grid.find({key.first + dx, key.second + dy});
        if (it != grid.end() && it->second < value) {
          lowest = false;
          break;
        }
      }
    }
    if (lowest) minima.push_back({{key.first * res, key.second * res}, value});
  }
  // Expected at x = 1/12, y = +-sqrt(1 - 1/144).
  const double iy = std::sqrt(1.0 - 1.0 / 144.0);
  bool upper = false;
  bool lower = false;
  for (const auto& [p, v] : minima) {
    upper = upper || dist(p, {1.0 / 12.0, iy}) < 2 * res;
    lower = lower || dist(p, {1.0 / 12.0, -iy}) < 2 * res;
  }
  std::string detail = std::to_string(grid.size()) + " samples, " + std::to_string(minima.size()) +
                       " minima below " + fmt(res) + ":";
  for (const auto& [p, v] : minima) {
    detail += " (" + fmt(std::round(p.x * 100) / 100) + "," + fmt(std::round(p.y * 100) / 100) +
              ")=" + fmt(std::round(v * 1e4) / 1e4);
  }
  return {minima.size() == 2 && upper && lower, detail};
}

Outcome spatial_index() {
  SeededRng rng(31337);
  std::size_t mismatches = 0;
  std::size_t queries = 0;
  const ActivityType a("a");
  for (int universe = 0; universe < 10; ++universe) {
    const double extent = rng.uniform(1000, 20000);
    std::vector<Location> locs;
    const auto n = static_cast<std::size_t>(rng.uniform_int(50, 3000));
    for (std::size_t i = 0; i < n; ++i) {
      Point2D p{rng.uniform(0, extent), rng.uniform(0, extent)};
      if (rng.uniform() < 0.1) p = {std::round(p.x / 50) * 50, std::round(p.y / 50) * 50};
      locs.push_back(make_location(LocationId(i * 2 + 5), p, rng.uniform() < 0.7 ? "a" : "b"));
    }
    const LocationIndex index(locs, rng.uniform(100, 2000));
    for (int q = 0; q < 50; ++q) {
      const auto ring = [&] {
        const double r1 = rng.uniform(0, extent * 0.8);
        return Annulus{{rng.uniform(-0.2, 1.2) * extent, rng.uniform(-0.2, 1.2) * extent},
                       rng.uniform() < 0.3 ? 0.0 : r1, r1 + rng.uniform(0, extent * 0.5)};
      };
      const Annulus r1 = ring();
      const Annulus r2 = ring();
      std::vector<LocationId> expected;
      for (const auto& l : locs) {
        if (!l.supports(a)) continue;
        const double d1 = dist(l.position, r1.center);
        const double d2 = dist(l.position, r2.center);
        if (d1 >= r1.r_min && d1 <= r1.r_max && d2 >= r2.r_min && d2 <= r2.r_max) {
          expected.push_back(l.id);
        }
      }
      std::sort(expected.begin(), expected.end());
      std::vector<LocationId> got;
      for (const Location* l : index.query_ring_overlap(a, r1, r2)) got.push_back(l->id);
      mismatches += got == expected ? 0 : 1;

      const Point2D p{rng.uniform(-0.3, 1.3) * extent, rng.uniform(-0.3, 1.3) * extent};
      const auto k = static_cast<std::size_t>(rng.uniform_int(1, 50));
      std::vector<std::pair<double, LocationId>> ranked;
      for (const auto& l : locs) {
        if (!l.supports(a)) continue;
        const double dx = l.position.x - p.x;
        const double dy = l.position.y - p.y;
        ranked.push_back({dx * dx + dy * dy, l.id});
      }
      std::sort(ranked.begin(), ranked.end());
      ranked.resize(std::min(k, ranked.size()));
      std::vector<LocationId> nearest_expected;
      for (const auto& [d, id] : ranked) nearest_expected.push_back(id);
      std::vector<LocationId> nearest;
      for (const Location* l : index.query_k_nearest(a, p, k)) nearest.push_back(l->id);
      mismatches += nearest == nearest_expected ? 0 : 1;
      queries += 2;
    }
  }
  return {mismatches == 0, std::to_string(queries) + " queries (" + std::to_string(queries / 2) +
                               " ring + " + std::to_string(queries / 2) + " k-nearest), " +
                               std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"two-trip exactness", two_trip_exactness},
      {"infeasible lower bound", infeasible_lower_bound},
      {"annulus soundness", annulus_soundness},
      {"branch monotonicity", branch_monotonicity},
      {"determinism", determinism},
      {"robustness", robustness},
      {"throughput", throughput},
      {"deviation field", deviation_field},
      {"spatial index correctness", spatial_index},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += outcome.pass ? 0 : 1;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first
              << ": " << outcome.detail << std::endl;
  }
  std::cout << (criteria.size() - std::size_t(failed)) << "/" << criteria.size() << " passed\n";
  return failed == 0 ? 0 : 1;
}
