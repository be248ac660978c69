#include "chainloc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "chainloc/error.hpp"

namespace chainloc::io {

namespace {

// Field of a delimited line together with its 1-based column.
struct Field {
  std::string_view text;
  std::size_t column = 1;
};

class SourcePos {
 public:
  explicit SourcePos(std::string_view source) : source_(source) {}

  void set_line(std::size_t line) { line_ = line; }

  [[noreturn]] void fail(std::size_t column, const std::string& message) const {
    throw Error(ErrorKind::InvalidInput, std::string(source_) + ":" + std::to_string(line_) + ":" +
                                             std::to_string(column) + ": " + message);
  }

 private:
  std::string_view source_;
  std::size_t line_ = 0;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

Field trim(Field f) {
  while (!f.text.empty() && is_space(f.text.front())) {
    f.text.remove_prefix(1);
    ++f.column;
  }
  while (!f.text.empty() && is_space(f.text.back())) f.text.remove_suffix(1);
  return f;
}

std::vector<Field> split(Field whole, char delim) {
  std::vector<Field> out;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t end = whole.text.find(delim, begin);
    const std::size_t stop = end == std::string_view::npos ? whole.text.size() : end;
    out.push_back({whole.text.substr(begin, stop - begin), whole.column + begin});
    if (end == std::string_view::npos) return out;
    begin = end + 1;
  }
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <typename Int>
std::optional<Int> to_integer(std::string_view s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

double parse_double(const SourcePos& pos, Field f, const char* what) {
  const auto v = to_double(f.text);
  if (!v) pos.fail(f.column, std::string("invalid ") + what + " '" + std::string(f.text) + "'");
  return *v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string());
  return in;
}

Point2D parse_point(const SourcePos& pos, Field f) {
  const auto parts = split(f, ',');
  if (parts.size() != 2) pos.fail(f.column, "expected coordinates as x,y");
  return {parse_double(pos, trim(parts[0]), "x coordinate"),
          parse_double(pos, trim(parts[1]), "y coordinate")};
}

Activity parse_activity(const SourcePos& pos, Field f, std::size_t index) {
  Activity activity;
  activity.index_in_chain = index;
  const std::size_t at = f.text.find('@');
  const Field type = trim({f.text.substr(0, at), f.column});
  if (type.text.empty()) pos.fail(f.column, "activity without a type");
  activity.type = ActivityType(std::string(type.text));
  if (at != std::string_view::npos) {
    activity.fixed = parse_point(pos, {f.text.substr(at + 1), f.column + at + 1});
  }
  return activity;
}

Trip parse_trip(const SourcePos& pos, Field f, std::size_t index) {
  Trip trip;
  trip.index_in_chain = index;
  const std::size_t colon = f.text.find(':');
  const Field dist = trim({f.text.substr(0, colon), f.column});
  trip.distance = parse_double(pos, dist, "trip distance");
  if (trip.distance < 0.0) pos.fail(dist.column, "trip distance must be >= 0");
  if (colon != std::string_view::npos) {
    const Field mode = trim({f.text.substr(colon + 1), f.column + colon + 1});
    if (mode.text.empty()) pos.fail(mode.column, "empty trip mode");
    trip.mode = std::string(mode.text);
  }
  return trip;
}

std::string format_strategy(const SelectionStrategy& s) { return std::string(to_string(s.variant)); }

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::vector<Location> read_locations(std::istream& in, std::string_view source_name) {
  SourcePos pos(source_name);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) {
    pos.set_line(1);
    pos.fail(1, "missing header 'id,x,y,types,potential'");
  }
  ++line_no;
  pos.set_line(line_no);
  if (trim({line, 1}).text != "id,x,y,types,potential") {
    pos.fail(1, "expected header 'id,x,y,types,potential'");
  }

  std::vector<Location> out;
  std::map<LocationId, std::size_t> seen;
  while (std::getline(in, line)) {
    ++line_no;
    pos.set_line(line_no);
    const Field row = trim({line, 1});
    if (row.text.empty()) continue;
    const auto cols = split(row, ',');
    if (cols.size() != 5) pos.fail(1, "expected 5 columns, got " + std::to_string(cols.size()));

    Location loc;
    const Field id = trim(cols[0]);
    const auto parsed_id = to_integer<LocationId>(id.text);
    if (!parsed_id) pos.fail(id.column, "invalid id '" + std::string(id.text) + "'");
    loc.id = *parsed_id;
    if (const auto [it, fresh] = seen.emplace(loc.id, line_no); !fresh) {
      pos.fail(id.column, "duplicate location id " + std::to_string(loc.id) + " (first on line " +
                              std::to_string(it->second) + ")");
    }
    loc.position = {parse_double(pos, trim(cols[1]), "x coordinate"),
                    parse_double(pos, trim(cols[2]), "y coordinate")};

    std::set<std::string_view> types_seen;
    for (const Field& t : split(trim(cols[3]), '|')) {
      const Field type = trim(t);
      if (type.text.empty()) pos.fail(type.column, "empty activity type");
      if (!types_seen.insert(type.text).second) {
        pos.fail(type.column, "repeated type '" + std::string(type.text) + "'");
      }
      loc.types.emplace_back(std::string(type.text));
    }

    const Field potential = trim(cols[4]);
    if (!potential.text.empty()) {
      loc.potential = parse_double(pos, potential, "potential");
      if (loc.potential < 0.0) pos.fail(potential.column, "potential must be >= 0");
    }
    out.push_back(std::move(loc));
  }
  return out;
}

std::vector<Location> read_locations_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_locations(in, path.string());
}

void write_locations(std::ostream& out, std::span<const Location> locations) {
  out << "id,x,y,types,potential\n";
  for (const auto& loc : locations) {
    out << loc.id << ',' << format_double(loc.position.x) << ',' << format_double(loc.position.y)
        << ',';
    for (std::size_t i = 0; i < loc.types.size(); ++i) {
      if (i) out << '|';
      out << loc.types[i].name();
    }
    out << ',' << format_double(loc.potential) << '\n';
  }
}

std::vector<PersonPlan> read_plans(std::istream& in, std::string_view source_name) {
  SourcePos pos(source_name);
  std::vector<PersonPlan> out;
  std::map<std::string, std::size_t, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    pos.set_line(line_no);
    const Field row = trim({line, 1});
    if (row.text.empty() || row.text.front() == '#') continue;

    const auto fields = split(row, ';');
    if (fields.size() < 4 || fields.size() % 2 != 0) {
      pos.fail(1, "expected person_id followed by activity; trip; ...; activity");
    }
    PersonPlan plan;
    const Field id = trim(fields[0]);
    if (id.text.empty()) pos.fail(id.column, "empty person id");
    plan.person_id = std::string(id.text);
    if (const auto [it, fresh] = seen.emplace(plan.person_id, line_no); !fresh) {
      pos.fail(id.column, "duplicate person id '" + plan.person_id + "' (first on line " +
                              std::to_string(it->second) + ")");
    }
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const Field f = trim(fields[i]);
      if (i % 2 == 1) {
        plan.activities.push_back(parse_activity(pos, f, plan.activities.size()));
      } else {
        plan.trips.push_back(parse_trip(pos, f, plan.trips.size()));
      }
    }
    out.push_back(std::move(plan));
  }
  return out;
}

std::vector<PersonPlan> read_plans_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_plans(in, path.string());
}

std::string format_plan_line(const PersonPlan& plan) {
  std::string line = plan.person_id;
  for (std::size_t i = 0; i < plan.activities.size(); ++i) {
    const Activity& a = plan.activities[i];
    line += "; " + a.type.name();
    if (a.fixed) line += "@" + format_double(a.fixed->x) + "," + format_double(a.fixed->y);
    if (i < plan.trips.size()) {
      line += "; " + format_double(plan.trips[i].distance);
      if (plan.trips[i].mode) line += ":" + *plan.trips[i].mode;
    }
  }
  return line;
}

void write_plans(std::ostream& out, std::span<const PersonPlan> plans) {
  for (const auto& plan : plans) out << format_plan_line(plan) << '\n';
}

void write_placed(std::ostream& out, std::span<const PlacedPlan> plans) {
  out << "person_id,activity_index,type,location_id,x,y\n";
  for (const auto& plan : plans) {
    for (std::size_t i = 0; i < plan.activities.size(); ++i) {
      out << plan.person_id << ',' << i << ',' << plan.activities[i].type.name() << ',';
      if (plan.location_ids[i]) out << *plan.location_ids[i];
      out << ',' << format_double(plan.positions[i].x) << ',' << format_double(plan.positions[i].y)
          << '\n';
    }
  }
}

SolverConfig read_config(std::istream& in, std::string_view source_name) {
  SourcePos pos(source_name);
  SolverConfig config;

  struct StrategyKeys {
    std::optional<SelectionVariant> variant;
    std::optional<std::size_t> k;
    std::optional<std::size_t> cells;
  };
  StrategyKeys complex_keys;
  StrategyKeys two_trip_keys;
  std::set<std::string, std::less<>> given;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    pos.set_line(line_no);
    const Field row = trim({line, 1});
    if (row.text.empty() || row.text.front() == '#') continue;
    const std::size_t eq = row.text.find('=');
    if (eq == std::string_view::npos) pos.fail(row.column, "expected key=value");
    const Field key = trim({row.text.substr(0, eq), row.column});
    const Field value = trim({row.text.substr(eq + 1), row.column + eq + 1});
    if (!given.insert(std::string(key.text)).second) {
      pos.fail(key.column, "key '" + std::string(key.text) + "' given twice");
    }

    const auto real = [&] { return parse_double(pos, value, "number"); };
    const auto count = [&] {
      const auto v = to_integer<std::size_t>(value.text);
      if (!v) pos.fail(value.column, "expected a non-negative integer");
      return *v;
    };
    const auto variant = [&] {
      const auto v = parse_selection_variant(value.text);
      if (!v) pos.fail(value.column, "unknown selection strategy '" + std::string(value.text) + "'");
      return *v;
    };

    const std::string_view k = key.text;
    if (k == "alpha") config.alpha = real();
    else if (k == "beta") config.beta = real();
    else if (k == "number_of_branches") config.number_of_branches = count();
    else if (k == "min_candidates_complex_case") config.min_candidates_complex_case = count();
    else if (k == "candidates_two_trip_case") config.candidates_two_trip_case = count();
    else if (k == "expansion_factor") config.expansion_factor = real();
    else if (k == "max_expansions") config.max_expansions = count();
    else if (k == "master_seed") {
      const auto v = to_integer<std::uint64_t>(value.text);
      if (!v) pos.fail(value.column, "expected an unsigned 64-bit seed");
      config.master_seed = *v;
    } else if (k == "anchor_strategy") {
      if (value.text != "lower_middle") pos.fail(value.column, "anchor_strategy must be lower_middle");
      config.anchor_strategy = AnchorStrategy::LowerMiddle;
    } else if (k == "selection_strategy_complex_case") complex_keys.variant = variant();
    else if (k == "selection_strategy_complex_case.k") complex_keys.k = count();
    else if (k == "selection_strategy_complex_case.grid_cells_per_axis") complex_keys.cells = count();
    else if (k == "selection_strategy_two_trip_case") two_trip_keys.variant = variant();
    else if (k == "selection_strategy_two_trip_case.k") two_trip_keys.k = count();
    else if (k == "selection_strategy_two_trip_case.grid_cells_per_axis") two_trip_keys.cells = count();
    else pos.fail(key.column, "unknown key '" + std::string(key.text) + "'");
  }

  const auto apply = [](SelectionStrategy& target, const StrategyKeys& keys) {
    if (keys.variant) target = SelectionStrategy{*keys.variant, {}, {}};
    if (keys.k) target.k = keys.k;
    if (keys.cells) target.grid_cells_per_axis = keys.cells;
  };
  apply(config.selection_strategy_complex_case, complex_keys);
  apply(config.selection_strategy_two_trip_case, two_trip_keys);

  try {
    config.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidConfig, std::string(source_name) + ": " + e.what());
  }
  return config;
}

SolverConfig read_config_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_config(in, path.string());
}

void write_config(std::ostream& out, const SolverConfig& config) {
  const auto strategy = [&](const char* name, const SelectionStrategy& s) {
    out << name << '=' << format_strategy(s) << '\n';
    if (s.k) out << name << ".k=" << *s.k << '\n';
    if (s.grid_cells_per_axis) out << name << ".grid_cells_per_axis=" << *s.grid_cells_per_axis << '\n';
  };
  out << "alpha=" << format_double(config.alpha) << '\n'
      << "beta=" << format_double(config.beta) << '\n'
      << "number_of_branches=" << config.number_of_branches << '\n'
      << "min_candidates_complex_case=" << config.min_candidates_complex_case << '\n'
      << "candidates_two_trip_case=" << config.candidates_two_trip_case << '\n'
      << "anchor_strategy=lower_middle\n";
  strategy("selection_strategy_complex_case", config.selection_strategy_complex_case);
  strategy("selection_strategy_two_trip_case", config.selection_strategy_two_trip_case);
  out << "expansion_factor=" << format_double(config.expansion_factor) << '\n'
      << "max_expansions=" << config.max_expansions << '\n'
      << "master_seed=" << config.master_seed << '\n';
}

void write_report(std::ostream& out, const RunReport& report) {
  out << "persons_total=" << report.persons.size() + report.failures.size() << '\n'
      << "persons_solved=" << report.persons.size() << '\n'
      << "persons_failed=" << report.failures.size() << '\n'
      << "mean_deviation_m=" << format_double(report.mean_deviation) << '\n'
      << "median_deviation_m=" << format_double(report.median_deviation) << '\n'
      << "p95_deviation_m=" << format_double(report.p95_deviation) << '\n'
      << "total_runtime_s=" << format_double(report.total_runtime_s) << '\n'
      << "persons_per_second=" << format_double(report.persons_per_second) << '\n';
  for (const auto& p : report.persons) {
    out << "person." << p.person_id << ".deviation_m=" << format_double(p.total_deviation) << '\n'
        << "person." << p.person_id << ".score=" << format_double(p.total_score) << '\n'
        << "person." << p.person_id << ".wall_time_s=" << format_double(p.wall_time_s) << '\n';
  }
  for (const auto& f : report.failures) {
    std::string reason = f.reason;
    for (char& c : reason) {
      if (c == '\n' || c == '\r') c = ' ';
    }
    out << "failure." << f.person_id << '=' << reason << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::InvalidInput, "failed writing " + path.string());
}

}  // namespace chainloc::io
