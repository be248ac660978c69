#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chainloc/model.hpp"
#include "chainloc/rng.hpp"

namespace chainloc {

enum class SelectionVariant {
  KeepAll,
  TopK,
  MonteCarlo,
  TopKMonteCarlo,
  SpatialDownsampling,
  TopKSpatialDownsampling,
};

/// Heuristic used to thin a candidate list down to the branches explored.
///
/// `k` only applies to the two hybrid variants: the number of top-scoring
/// candidates kept deterministically before the second stage fills up the
/// rest. Without it the hybrids keep ceil(n / 2). `grid_cells_per_axis` is
/// required by, and only allowed for, the spatial variants.
struct SelectionStrategy {
  SelectionVariant variant = SelectionVariant::TopK;
  std::optional<std::size_t> k;
  std::optional<std::size_t> grid_cells_per_axis;

  static SelectionStrategy keep_all() { return {SelectionVariant::KeepAll, {}, {}}; }
  static SelectionStrategy top_k() { return {SelectionVariant::TopK, {}, {}}; }
  static SelectionStrategy monte_carlo() { return {SelectionVariant::MonteCarlo, {}, {}}; }
  static SelectionStrategy top_k_monte_carlo(std::optional<std::size_t> k = {}) {
    return {SelectionVariant::TopKMonteCarlo, k, {}};
  }
  static SelectionStrategy spatial_downsampling(std::size_t cells) {
    return {SelectionVariant::SpatialDownsampling, {}, cells};
  }
  static SelectionStrategy top_k_spatial_downsampling(std::size_t cells,
                                                      std::optional<std::size_t> k = {}) {
    return {SelectionVariant::TopKSpatialDownsampling, k, cells};
  }

  /// Throws Error{InvalidConfig} when parameters do not match the variant.
  void validate() const;

  friend bool operator==(const SelectionStrategy&, const SelectionStrategy&) = default;
};

std::string_view to_string(SelectionVariant variant);
/// Accepts the snake_case names; "mixed" is an alias for top_k_monte_carlo.
std::optional<SelectionVariant> parse_selection_variant(std::string_view name);

/// Picks min(n, candidates.size()) distinct candidates (all of them for
/// KeepAll). Throws Error{InvalidCall} on an empty list.
std::vector<ScoredCandidate> select(std::span<const ScoredCandidate> candidates, std::size_t n,
                                    const SelectionStrategy& strategy, SeededRng& rng);

}  // namespace chainloc
