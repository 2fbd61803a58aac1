#pragma once

#include <cstdint>
#include <vector>

namespace scpm {

struct HashFamily {
  int n = 0;
  int k = 0;
  std::vector<std::vector<std::uint8_t>> functions;  // each maps [0,n) -> [0,k)
  bool randomized = false;
};

struct UniversalSet {
  int n = 0;
  int k = 0;
  int p = 0;
  std::vector<std::vector<std::uint8_t>> functions;  // each maps [0,n) -> {0,1}
  bool randomized = false;
};

struct DerandConfig {
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  // Deterministic greedy is used while the demand count stays below this.
  std::uint64_t max_demands = 400000;
  int candidates_per_round = 48;
  // Randomized fallback: target failure probability and hard cap on size.
  double failure_budget = 1e-9;
  std::size_t max_functions = 200000;
};

// For every k-subset of [0,n) some member is injective on it.
HashFamily build_hash_family(int n, int k, const DerandConfig& cfg = {});
// For every k-subset and every 0/1 pattern on it with exactly p ones some
// member realizes the pattern.
UniversalSet build_universal_set(int n, int k, int p, const DerandConfig& cfg = {});

// Memoized variants returning shared immutable families.
const HashFamily& cached_hash_family(int n, int k);
const UniversalSet& cached_universal_set(int n, int k, int p);

// Exhaustive for n <= 16, sampled above.
bool verify_family(const HashFamily& fam, std::uint64_t samples = 20000);
bool verify_universal(const UniversalSet& us, std::uint64_t samples = 20000);

}  // namespace scpm
