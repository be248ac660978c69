#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace chainloc {

/// Deterministic generator. A person's stream depends only on the master
/// seed and the person id, never on scheduling order.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  static SeededRng for_person(std::uint64_t master_seed, std::string_view person_id);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Standard normal via Box-Muller; no cached second value.
  double normal();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t master_seed, std::string_view key);

}  // namespace chainloc
