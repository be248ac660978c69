#include "chainloc/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "chainloc/batch.hpp"
#include "chainloc/error.hpp"
#include "chainloc/io.hpp"
#include "chainloc/oracle.hpp"
#include "chainloc/solver.hpp"
#include "chainloc/spatial_index.hpp"
#include "chainloc/synthgen.hpp"

namespace chainloc::cli {

namespace {

struct GenerateArgs {
  std::string locations;
  std::string plans;
  std::size_t persons = 693;
  std::size_t location_count = 5000;
  std::string scenario = "3";
  std::uint64_t seed = 1;
  double extent = 15000.0;
  std::optional<double> infeasible_share;
};

struct SolveArgs {
  std::string config;
  std::string locations;
  std::string plans;
  std::string out;
  std::string report;
  std::size_t threads = 1;
  std::optional<std::uint64_t> seed;
  double cell_size = LocationIndex::kDefaultCellSize;
};

struct ValidateArgs {
  std::size_t instances = 50;
  std::uint64_t seed = 1;
  std::size_t min_locations = 10;
  std::size_t max_locations = 30;
  std::size_t max_inner = 3;
};

struct SweepArgs {
  std::string config;
  std::string locations;
  std::string plans;
  std::string out;
  std::vector<std::size_t> branches{1, 5, 20, 50};
  std::size_t threads = 1;
  std::optional<std::uint64_t> seed;
};

struct FieldArgs {
  double d1 = 1.0;
  double d2 = 6.0;
  std::vector<double> start{0.0, 0.0};
  std::vector<double> end{6.0, 0.0};
  std::vector<double> bbox;
  double resolution = 0.05;
  std::string out;
};

SolverConfig load_config(const std::string& path, const std::optional<std::uint64_t>& seed) {
  SolverConfig config = path.empty() ? SolverConfig{} : io::read_config_file(path);
  if (seed) config.master_seed = *seed;
  return config;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    io::write_text_file(path, content);
  }
}

int run_generate(const GenerateArgs& a, std::ostream& out) {
  synth::Scenario scenario = synth::parse_scenario(a.scenario);
  synth::Dataset data;
  if (a.infeasible_share) {
    const synth::BoundingBox box{0.0, 0.0, a.extent, a.extent};
    data = synth::generate_dataset(0, a.location_count, scenario, a.seed, a.extent);
    synth::PopulationSpec spec;
    spec.n_persons = a.persons;
    spec.infeasible_share = *a.infeasible_share;
    spec.fix_main_activity = scenario.fix_main_activity;
    spec.area = box;
    spec.seed = a.seed;
    data.population = synth::generate_population(spec, data.locations);
  } else {
    data = synth::generate_dataset(a.persons, a.location_count, scenario, a.seed, a.extent);
  }

  std::ostringstream locs;
  io::write_locations(locs, data.locations);
  io::write_text_file(a.locations, locs.str());
  std::ostringstream plans;
  io::write_plans(plans, data.population.plans);
  io::write_text_file(a.plans, plans.str());

  std::size_t infeasible = 0;
  for (bool b : data.population.infeasible) infeasible += b ? 1 : 0;
  out << "generated " << data.locations.size() << " locations and "
      << data.population.plans.size() << " plans (" << infeasible << " infeasible, scenario "
      << synth::to_string(scenario) << ")\n";
  return kExitOk;
}

int run_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const SolverConfig config = load_config(a.config, a.seed);
  const LocationIndex index(io::read_locations_file(a.locations), a.cell_size);
  const auto plans = io::read_plans_file(a.plans);

  const BatchResult result = run_batch(plans, index, config, a.threads);

  std::ostringstream placed;
  io::write_placed(placed, result.placed);
  emit(a.out, placed.str(), out);
  if (!a.report.empty()) {
    std::ostringstream report;
    io::write_report(report, result.report);
    emit(a.report, report.str(), out);
  }
  err << "solved " << result.report.persons.size() << " of " << plans.size()
      << " persons, mean deviation " << io::format_double(result.report.mean_deviation) << " m, "
      << result.report.failures.size() << " failed\n";
  return result.report.failures.empty() ? kExitOk : kExitPartialFailure;
}

int run_validate(const ValidateArgs& a, std::ostream& out) {
  if (a.min_locations < 2 || a.max_locations < a.min_locations) {
    throw Error(ErrorKind::InvalidConfig, "need 2 <= min-locations <= max-locations");
  }
  std::size_t mismatches = 0;
  SeededRng rng(mix_seed(a.seed, "validate"));
  for (std::size_t i = 0; i < a.instances; ++i) {
    const auto inner = static_cast<std::size_t>(rng.uniform_int(1, std::int64_t(a.max_inner)));
    const auto count = static_cast<std::size_t>(
        rng.uniform_int(std::int64_t(a.min_locations), std::int64_t(a.max_locations)));
    const auto inst = synth::generate_segment_instance(inner, count, rng.next_u64());

    SolverConfig config;
    config.alpha = rng.uniform() < 0.5 ? 0.0 : 1.0;
    config.beta = 1.0;
    config.selection_strategy_complex_case = SelectionStrategy::keep_all();
    config.selection_strategy_two_trip_case = SelectionStrategy::keep_all();
    config.candidates_two_trip_case = count;
    config.min_candidates_complex_case = count;

    const LocationIndex index(inst.locations);
    SeededRng solver_rng(i);
    const BranchResult solved = solve_segment(inst.segment, index, config, solver_rng);
    const auto best = oracle::brute_force_segment(inst.segment, inst.locations, config.alpha,
                                                  config.beta);
    const double tol = 1e-9 * std::max(1.0, std::abs(best.score));
    if (std::abs(solved.score - best.score) > tol) {
      ++mismatches;
      out << "mismatch instance=" << i << " n=" << inner << " locations=" << count
          << " alpha=" << config.alpha << " solver=" << io::format_double(solved.score)
          << " oracle=" << io::format_double(best.score) << '\n';
    }
  }
  out << "instances=" << a.instances << " mismatches=" << mismatches << '\n';
  return mismatches == 0 ? kExitOk : kExitPartialFailure;
}

int run_sweep(const SweepArgs& a, std::ostream& out) {
  const SolverConfig base = load_config(a.config, a.seed);
  const LocationIndex index(io::read_locations_file(a.locations));
  const auto plans = io::read_plans_file(a.plans);

  std::ostringstream csv;
  csv << "number_of_branches,mean_deviation_m,mean_score,runtime_s,persons_solved,persons_failed\n";
  bool any_failed = false;
  for (std::size_t branches : a.branches) {
    SolverConfig config = base;
    config.number_of_branches = branches;
    const BatchResult result = run_batch(plans, index, config, a.threads);
    double score_sum = 0.0;
    for (const auto& p : result.report.persons) score_sum += p.total_score;
    const double mean_score =
        result.report.persons.empty() ? 0.0 : score_sum / double(result.report.persons.size());
    csv << branches << ',' << io::format_double(result.report.mean_deviation) << ','
        << io::format_double(mean_score) << ',' << io::format_double(result.report.total_runtime_s)
        << ',' << result.report.persons.size() << ',' << result.report.failures.size() << '\n';
    any_failed = any_failed || !result.report.failures.empty();
  }
  emit(a.out, csv.str(), out);
  return any_failed ? kExitPartialFailure : kExitOk;
}

int run_field(const FieldArgs& a, std::ostream& out) {
  const Point2D start{a.start.at(0), a.start.at(1)};
  const Point2D end{a.end.at(0), a.end.at(1)};
  oracle::Box box;
  if (a.bbox.empty()) {
    const double pad = 1.0;
    box = {std::min(start.x - a.d1, end.x - a.d2) - pad, std::min(start.y - a.d1, end.y - a.d2) - pad,
           std::max(start.x + a.d1, end.x + a.d2) + pad, std::max(start.y + a.d1, end.y + a.d2) + pad};
  } else {
    box = {a.bbox.at(0), a.bbox.at(1), a.bbox.at(2), a.bbox.at(3)};
  }
  const auto field = oracle::deviation_field(start, a.d1, end, a.d2, box, a.resolution);
  std::ostringstream csv;
  oracle::write_field_csv(csv, field);
  emit(a.out, csv.str(), out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Anchor-based recursive location assignment for activity chains"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic location set and population");
  generate->add_option("--locations", gen.locations, "Output locations CSV")->required();
  generate->add_option("--plans", gen.plans, "Output plans file")->required();
  generate->add_option("--persons", gen.persons, "Number of persons");
  generate->add_option("--location-count", gen.location_count, "Number of locations");
  generate->add_option("--scenario", gen.scenario,
                       "1-4 or <fixed-main|free-main>/<feasible-only|all>");
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("--extent", gen.extent, "Side length of the square study area (m)");
  generate->add_option("--infeasible-share", gen.infeasible_share,
                       "Override the scenario's share of infeasible chains");

  SolveArgs sol;
  auto* solve = app.add_subcommand("solve", "Place the unplaced activities of every plan");
  solve->add_option("--config", sol.config, "Solver config (key=value)");
  solve->add_option("--locations", sol.locations, "Locations CSV")->required();
  solve->add_option("--plans", sol.plans, "Plans file")->required();
  solve->add_option("--out", sol.out, "Placed output CSV ('-' for stdout)")->required();
  solve->add_option("--report", sol.report, "Run report (key=value)");
  solve->add_option("--threads", sol.threads, "Worker threads (0 = all cores)");
  solve->add_option("--seed", sol.seed, "Override master_seed");
  solve->add_option("--cell-size", sol.cell_size, "Spatial index cell size (m)");

  ValidateArgs val;
  auto* validate = app.add_subcommand("validate", "Compare the solver against brute force");
  validate->add_option("--instances", val.instances, "Random instances to check");
  validate->add_option("--seed", val.seed, "Instance seed");
  validate->add_option("--min-locations", val.min_locations, "Smallest universe");
  validate->add_option("--max-locations", val.max_locations, "Largest universe");
  validate->add_option("--max-inner", val.max_inner, "Most unplaced activities per segment")
      ->check(CLI::Range(1, 4));

  SweepArgs swp;
  auto* sweep = app.add_subcommand("sweep", "Mean deviation and runtime per branch count");
  sweep->add_option("--config", swp.config, "Base solver config");
  sweep->add_option("--locations", swp.locations, "Locations CSV")->required();
  sweep->add_option("--plans", swp.plans, "Plans file")->required();
  sweep->add_option("--branches", swp.branches, "Comma-separated branch counts")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep->add_option("--out", swp.out, "Output CSV ('-' for stdout)");
  sweep->add_option("--threads", swp.threads, "Worker threads (0 = all cores)");
  sweep->add_option("--seed", swp.seed, "Override master_seed");

  FieldArgs fld;
  auto* field = app.add_subcommand("field", "Two-trip deviation field as CSV");
  field->add_option("--d1", fld.d1, "Distance from start");
  field->add_option("--d2", fld.d2, "Distance to end");
  field->add_option("--start", fld.start, "Start point x,y")->delimiter(',')->expected(2);
  field->add_option("--end", fld.end, "End point x,y")->delimiter(',')->expected(2);
  field->add_option("--bbox", fld.bbox, "min_x,min_y,max_x,max_y")->delimiter(',')->expected(4);
  field->add_option("--resolution", fld.resolution, "Grid spacing");
  field->add_option("--out", fld.out, "Output CSV ('-' for stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (*generate) return run_generate(gen, out);
    if (*solve) return run_solve(sol, out, err);
    if (*validate) return run_validate(val, out);
    if (*sweep) return run_sweep(swp, out);
    if (*field) return run_field(fld, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}

}  // namespace chainloc::cli
