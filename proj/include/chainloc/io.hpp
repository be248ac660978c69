#pragma once

// Text formats:
//   locations CSV   id,x,y,types,potential   (types joined by '|')
//   plans           person_id; type[@x,y]; distance[:mode]; type[@x,y]; ...
//   placed CSV      person_id,activity_index,type,location_id,x,y
//   config          key=value, keys named after SolverConfig fields
//   report          key=value

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chainloc/batch.hpp"
#include "chainloc/model.hpp"
#include "chainloc/solver.hpp"

namespace chainloc::io {

/// Shortest text that parses back to the same double.
std::string format_double(double value);

std::vector<Location> read_locations(std::istream& in, std::string_view source_name);
std::vector<Location> read_locations_file(const std::filesystem::path& path);
void write_locations(std::ostream& out, std::span<const Location> locations);

std::vector<PersonPlan> read_plans(std::istream& in, std::string_view source_name);
std::vector<PersonPlan> read_plans_file(const std::filesystem::path& path);
void write_plans(std::ostream& out, std::span<const PersonPlan> plans);
std::string format_plan_line(const PersonPlan& plan);

void write_placed(std::ostream& out, std::span<const PlacedPlan> plans);

SolverConfig read_config(std::istream& in, std::string_view source_name);
SolverConfig read_config_file(const std::filesystem::path& path);
void write_config(std::ostream& out, const SolverConfig& config);

void write_report(std::ostream& out, const RunReport& report);

/// Replaces the file with `content`. Throws Error{InvalidInput}.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace chainloc::io
