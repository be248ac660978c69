#include "chainloc/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "chainloc/error.hpp"

namespace chainloc {

namespace {

bool better(const ScoredCandidate& a, const ScoredCandidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.location->id < b.location->id;
}

std::vector<ScoredCandidate> top_k(std::span<const ScoredCandidate> candidates, std::size_t n) {
  std::vector<ScoredCandidate> sorted(candidates.begin(), candidates.end());
  n = std::min(n, sorted.size());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n), sorted.end(),
                    better);
  sorted.resize(n);
  return sorted;
}

// Draws without replacement with weight (score - min + eps).
std::vector<ScoredCandidate> monte_carlo(std::span<const ScoredCandidate> candidates, std::size_t n,
                                         SeededRng& rng) {
  std::vector<ScoredCandidate> pool(candidates.begin(), candidates.end());
  n = std::min(n, pool.size());
  if (pool.empty()) return {};
  const auto [lo, hi] = std::minmax_element(
      pool.begin(), pool.end(),
      [](const ScoredCandidate& a, const ScoredCandidate& b) { return a.score < b.score; });
  const double min_score = lo->score;
  const double eps = 1e-9 * (hi->score - min_score + 1.0);

  std::vector<double> weights(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) weights[i] = pool[i].score - min_score + eps;

  std::vector<ScoredCandidate> out;
  out.reserve(n);
  while (out.size() < n) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double target = rng.uniform() * total;
    std::size_t pick = pool.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      acc += weights[i];
      if (target < acc) {
        pick = i;
        break;
      }
    }
    out.push_back(pool[pick]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

// Best-per-cell round robin over a g x g grid on the candidates' bounding box.
std::vector<ScoredCandidate> spatial_downsampling(std::span<const ScoredCandidate> candidates,
                                                  std::size_t n, std::size_t cells_per_axis) {
  n = std::min(n, candidates.size());
  if (n == 0) return {};

  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const auto& c : candidates) {
    min_x = std::min(min_x, c.location->position.x);
    min_y = std::min(min_y, c.location->position.y);
    max_x = std::max(max_x, c.location->position.x);
    max_y = std::max(max_y, c.location->position.y);
  }
  const auto g = static_cast<double>(cells_per_axis);
  const auto cell_index = [&](double v, double lo, double hi) {
    if (!(hi > lo)) return std::size_t{0};
    const auto i = static_cast<std::size_t>(std::floor((v - lo) / (hi - lo) * g));
    return std::min(i, cells_per_axis - 1);
  };

  std::map<std::size_t, std::vector<ScoredCandidate>> by_cell;  // row-major key
  for (const auto& c : candidates) {
    const std::size_t cx = cell_index(c.location->position.x, min_x, max_x);
    const std::size_t cy = cell_index(c.location->position.y, min_y, max_y);
    by_cell[cy * cells_per_axis + cx].push_back(c);
  }
  for (auto& [cell, members] : by_cell) std::sort(members.begin(), members.end(), better);

  std::vector<ScoredCandidate> out;
  out.reserve(n);
  for (std::size_t round = 0; out.size() < n; ++round) {
    for (const auto& [cell, members] : by_cell) {
      if (round < members.size()) {
        out.push_back(members[round]);
        if (out.size() == n) break;
      }
    }
  }
  return out;
}

std::vector<ScoredCandidate> without(std::span<const ScoredCandidate> all,
                                     const std::vector<ScoredCandidate>& taken) {
  std::vector<ScoredCandidate> rest;
  for (const auto& c : all) {
    const bool used = std::any_of(taken.begin(), taken.end(), [&](const ScoredCandidate& t) {
      return t.location == c.location;
    });
    if (!used) rest.push_back(c);
  }
  return rest;
}

}  // namespace

void SelectionStrategy::validate() const {
  const bool spatial = variant == SelectionVariant::SpatialDownsampling ||
                       variant == SelectionVariant::TopKSpatialDownsampling;
  const bool hybrid = variant == SelectionVariant::TopKMonteCarlo ||
                      variant == SelectionVariant::TopKSpatialDownsampling;
  const std::string name(to_string(variant));
  if (spatial && (!grid_cells_per_axis || *grid_cells_per_axis == 0)) {
    throw Error(ErrorKind::InvalidConfig, name + " needs a positive grid_cells_per_axis");
  }
  if (!spatial && grid_cells_per_axis) {
    throw Error(ErrorKind::InvalidConfig, name + " takes no grid_cells_per_axis");
  }
  if (!hybrid && k) throw Error(ErrorKind::InvalidConfig, name + " takes no k");
  if (hybrid && k && *k == 0) throw Error(ErrorKind::InvalidConfig, name + " needs k > 0");
}

std::string_view to_string(SelectionVariant variant) {
  switch (variant) {
    case SelectionVariant::KeepAll:
      return "keep_all";
    case SelectionVariant::TopK:
      return "top_k";
    case SelectionVariant::MonteCarlo:
      return "monte_carlo";
    case SelectionVariant::TopKMonteCarlo:
      return "top_k_monte_carlo";
    case SelectionVariant::SpatialDownsampling:
      return "spatial_downsampling";
    case SelectionVariant::TopKSpatialDownsampling:
      return "top_k_spatial_downsampling";
  }
  return "unknown";
}

std::optional<SelectionVariant> parse_selection_variant(std::string_view name) {
  for (auto v : {SelectionVariant::KeepAll, SelectionVariant::TopK, SelectionVariant::MonteCarlo,
                 SelectionVariant::TopKMonteCarlo, SelectionVariant::SpatialDownsampling,
                 SelectionVariant::TopKSpatialDownsampling}) {
    if (name == to_string(v)) return v;
  }
  if (name == "mixed") return SelectionVariant::TopKMonteCarlo;
  return std::nullopt;
}

std::vector<ScoredCandidate> select(std::span<const ScoredCandidate> candidates, std::size_t n,
                                    const SelectionStrategy& strategy, SeededRng& rng) {
  if (candidates.empty()) throw Error(ErrorKind::InvalidCall, "selection from no candidates");
  if (n == 0) throw Error(ErrorKind::InvalidCall, "selection of zero candidates");
  strategy.validate();

  const auto hybrid_head = [&] {
    const std::size_t head = strategy.k ? std::min(*strategy.k, n) : (n + 1) / 2;
    return top_k(candidates, head);
  };

  switch (strategy.variant) {
    case SelectionVariant::KeepAll:
      return {candidates.begin(), candidates.end()};
    case SelectionVariant::TopK:
      return top_k(candidates, n);
    case SelectionVariant::MonteCarlo:
      return monte_carlo(candidates, n, rng);
    case SelectionVariant::SpatialDownsampling:
      return spatial_downsampling(candidates, n, *strategy.grid_cells_per_axis);
    case SelectionVariant::TopKMonteCarlo:
    case SelectionVariant::TopKSpatialDownsampling: {
      auto out = hybrid_head();
      const std::size_t wanted = std::min(n, candidates.size());
      if (out.size() < wanted) {
        const auto rest = without(candidates, out);
        const std::size_t remaining = wanted - out.size();
        auto tail = strategy.variant == SelectionVariant::TopKMonteCarlo
                        ? monte_carlo(rest, remaining, rng)
                        : spatial_downsampling(rest, remaining, *strategy.grid_cells_per_axis);
        out.insert(out.end(), tail.begin(), tail.end());
      }
      return out;
    }
  }
  return {};
}

}  // namespace chainloc
