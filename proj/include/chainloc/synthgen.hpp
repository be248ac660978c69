#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chainloc/model.hpp"

namespace chainloc::synth {

struct BoundingBox {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 10000.0;
  double max_y = 10000.0;
};

struct PotentialLaw {
  enum class Kind { Constant, Uniform, Pareto };

  Kind kind = Kind::Constant;
  double a = 1.0;  // constant value, lower bound, or Pareto x_min
  double b = 1.0;  // upper bound or Pareto shape

  static PotentialLaw constant(double value) { return {Kind::Constant, value, value}; }
  static PotentialLaw uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
  static PotentialLaw pareto(double x_min, double shape) { return {Kind::Pareto, x_min, shape}; }
};

using TypeMix = std::vector<std::pair<std::string, double>>;

/// Uniform positions in `box`, one type per location drawn from `type_mix`,
/// ids 1..count. Throws Error{InvalidConfig} when the shares do not sum to 1.
std::vector<Location> generate_locations(std::size_t count, const BoundingBox& box,
                                         const TypeMix& type_mix, const PotentialLaw& potential,
                                         std::uint64_t seed);

struct ChainLengthLaw {
  std::size_t min_trips = 2;
  std::size_t max_trips = 6;
};

/// Log-normal leg lengths; plans with any trip above `max_m` are rejected.
struct TripDistanceLaw {
  double median_m = 2000.0;
  double sigma = 0.8;
  double max_m = 30000.0;
};

struct PopulationSpec {
  std::size_t n_persons = 100;
  ChainLengthLaw chain_length;
  TripDistanceLaw trip_distance;
  double infeasible_share = 0.0;
  bool fix_main_activity = false;
  std::string home_type = "home";
  std::string main_type = "work";
  std::vector<std::string> secondary_types = {"shopping", "leisure", "errand"};
  BoundingBox area;
  std::uint64_t seed = 1;
};

struct Population {
  std::vector<PersonPlan> plans;
  std::vector<bool> infeasible;  // per plan: some segment cannot be realized exactly
};

/// Chains start and end at home. Feasible plans are walked through actual
/// locations of `locations`, so every segment has an exact realization.
/// Exactly floor(infeasible_share * n_persons) plans get one segment whose
/// distances cannot connect its endpoints. Throws Error{InvalidConfig}.
Population generate_population(const PopulationSpec& spec, const std::vector<Location>& locations);

/// True when no segment of the plan violates its reachability bounds.
bool plan_is_feasible(const PersonPlan& plan);

/// Scenario presets: fixed or free main activity, feasible-only or with a
/// 30% share of infeasible chains.
struct Scenario {
  bool fix_main_activity = false;
  bool feasible_only = true;
};

/// Accepts "1".."4" or "<fixed-main|free-main>/<feasible-only|all>".
/// Throws Error{InvalidConfig}.
Scenario parse_scenario(const std::string& text);
std::string to_string(const Scenario& scenario);

struct Dataset {
  std::vector<Location> locations;
  Population population;
};

/// Location set and population for a scenario on a square study area.
Dataset generate_dataset(std::size_t n_persons, std::size_t n_locations, const Scenario& scenario,
                         std::uint64_t seed, double extent_m = 15000.0);

/// Random single segment with n inner activities over a small universe, used
/// for solver/oracle comparisons.
struct SegmentInstance {
  Segment segment;
  std::vector<Location> locations;
};

SegmentInstance generate_segment_instance(std::size_t inner_count, std::size_t location_count,
                                          std::uint64_t seed, double extent_m = 5000.0);

}  // namespace chainloc::synth
