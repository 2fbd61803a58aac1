#include "scpm/derand.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <tuple>

#include "scpm/error.hpp"

namespace scpm {

namespace {

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  double v = std::exp(log_binomial(n, k));
  if (v > 1e18) return ~std::uint64_t{0};
  return static_cast<std::uint64_t>(std::llround(v));
}

// Gosper's hack over k-subsets of [0,n), n <= 64.
template <class Fn>
void for_each_subset(int n, int k, Fn&& fn) {
  if (k == 0) {
    fn(std::uint64_t{0});
    return;
  }
  if (k > n) return;
  std::uint64_t s = (k == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = n == 64 ? 0 : std::uint64_t{1} << n;
  while (true) {
    fn(s);
    std::uint64_t c = s & (~s + 1);
    std::uint64_t r = s + c;
    if (r == 0) break;
    s = (((r ^ s) >> 2) / c) | r;
    if (n < 64 && s >= limit) break;
  }
}

std::uint64_t software_pext(std::uint64_t x, std::uint64_t mask) {
  std::uint64_t out = 0;
  int i = 0;
  for (std::uint64_t m = mask; m; m &= m - 1, ++i) {
    if (x & m & (~m + 1)) out |= std::uint64_t{1} << i;
  }
  return out;
}

bool injective_on(const std::vector<std::uint8_t>& f, std::uint64_t s) {
  std::uint64_t used = 0;
  for (; s; s &= s - 1) {
    std::uint64_t bit = std::uint64_t{1} << f[std::countr_zero(s)];
    if (used & bit) return false;
    used |= bit;
  }
  return true;
}

std::uint64_t to_mask(const std::vector<std::uint8_t>& f) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i]) m |= std::uint64_t{1} << i;
  }
  return m;
}

std::vector<std::uint8_t> balanced_coloring(int n, int k, std::mt19937_64& rng, bool shuffle) {
  std::vector<std::uint8_t> f(n);
  for (int i = 0; i < n; ++i) f[i] = static_cast<std::uint8_t>(i % k);
  if (shuffle) std::shuffle(f.begin(), f.end(), rng);
  return f;
}

std::size_t random_size(double log_demands, double hit_prob, const DerandConfig& cfg) {
  double need = (log_demands - std::log(cfg.failure_budget)) / hit_prob;
  return static_cast<std::size_t>(std::min<double>(std::ceil(need), static_cast<double>(cfg.max_functions)));
}

}  // namespace

HashFamily build_hash_family(int n, int k, const DerandConfig& cfg) {
  if (n < 0 || k < 0 || k > n) throw PreconditionError("build_hash_family: need 0 <= k <= n");
  HashFamily fam{n, k, {}, false};
  if (k <= 1 || n == 0) {
    fam.functions.push_back(std::vector<std::uint8_t>(n, 0));
    return fam;
  }
  if (k > 64) throw SizeGuardError("build_hash_family: k above 64");
  std::mt19937_64 rng(cfg.seed ^ (static_cast<std::uint64_t>(n) << 32) ^ static_cast<std::uint64_t>(k));
  const std::uint64_t demands = binomial(n, k);
  const bool deterministic = n <= 64 && k <= 10 && demands <= cfg.max_demands;
  if (!deterministic) {
    double hit = std::exp(std::lgamma(k + 1.0) - k * std::log(static_cast<double>(k)));
    std::size_t size = random_size(log_binomial(n, k), hit, cfg);
    std::uniform_int_distribution<int> col(0, k - 1);
    for (std::size_t i = 0; i < size; ++i) {
      std::vector<std::uint8_t> f(n);
      for (auto& c : f) c = static_cast<std::uint8_t>(col(rng));
      fam.functions.push_back(std::move(f));
    }
    fam.randomized = true;
    return fam;
  }
  std::vector<std::uint64_t> open;
  open.reserve(demands);
  for_each_subset(n, k, [&](std::uint64_t s) { open.push_back(s); });
  bool first = true;
  while (!open.empty()) {
    std::vector<std::uint8_t> best;
    std::size_t best_hits = 0;
    for (int c = 0; c < cfg.candidates_per_round; ++c) {
      auto f = balanced_coloring(n, k, rng, !(first && c == 0));
      std::size_t hits = 0;
      for (auto s : open) hits += injective_on(f, s);
      if (hits > best_hits) {
        best_hits = hits;
        best = std::move(f);
      }
      if (hits == open.size()) break;
    }
    first = false;
    if (best_hits == 0) continue;
    std::erase_if(open, [&](std::uint64_t s) { return injective_on(best, s); });
    fam.functions.push_back(std::move(best));
  }
  return fam;
}

UniversalSet build_universal_set(int n, int k, int p, const DerandConfig& cfg) {
  if (n < 0 || k < 0 || p < 0 || p > k) throw PreconditionError("build_universal_set: need 0 <= p <= k");
  UniversalSet us{n, k, p, {}, false};
  if (k > n || p == 0) {
    // No k-subsets at all, or only the all-zero pattern is demanded.
    us.functions.push_back(std::vector<std::uint8_t>(n, 0));
    return us;
  }
  if (p == k) {
    us.functions.push_back(std::vector<std::uint8_t>(n, 1));
    return us;
  }
  if (n > 64) throw SizeGuardError("build_universal_set: n above 64");
  std::mt19937_64 rng(cfg.seed ^ (static_cast<std::uint64_t>(n) << 40) ^ (static_cast<std::uint64_t>(k) << 20) ^
                      static_cast<std::uint64_t>(p));
  const double density = static_cast<double>(p) / k;
  std::bernoulli_distribution bit(density);
  auto random_function = [&] {
    std::vector<std::uint8_t> f(n);
    for (auto& c : f) c = bit(rng) ? 1 : 0;
    return f;
  };
  const std::uint64_t subsets = binomial(n, k);
  const std::uint64_t patterns = binomial(k, p);
  const bool deterministic = k <= 16 && subsets != ~std::uint64_t{0} && subsets * patterns <= cfg.max_demands;
  if (!deterministic) {
    double hit = std::pow(density, p) * std::pow(1 - density, k - p);
    std::size_t size = random_size(log_binomial(n, k) + log_binomial(k, p), hit, cfg);
    for (std::size_t i = 0; i < size; ++i) us.functions.push_back(random_function());
    us.randomized = true;
    return us;
  }
  // Pattern index within a k-subset: rank of the compressed k-bit pattern.
  std::vector<int> pattern_rank(std::size_t{1} << k, -1);
  {
    int next = 0;
    for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << k); ++pat) {
      if (std::popcount(pat) == p) pattern_rank[pat] = next++;
    }
  }
  const std::size_t words = (patterns + 63) / 64;
  std::vector<std::uint64_t> sets;
  for_each_subset(n, k, [&](std::uint64_t s) { sets.push_back(s); });
  std::vector<std::uint64_t> covered(sets.size() * words, 0);
  std::vector<std::uint32_t> left(sets.size(), static_cast<std::uint32_t>(patterns));
  std::vector<std::uint32_t> active(sets.size());
  std::iota(active.begin(), active.end(), 0u);
  auto gain = [&](std::uint64_t c, std::uint32_t idx) -> int {
    std::uint64_t s = sets[idx];
    std::uint64_t o = c & s;
    if (std::popcount(o) != p) return -1;
    int r = pattern_rank[software_pext(o, s)];
    return (covered[idx * words + r / 64] >> (r % 64) & 1u) ? -1 : r;
  };
  while (!active.empty()) {
    std::vector<std::uint8_t> best;
    std::size_t best_hits = 0;
    for (int c = 0; c < cfg.candidates_per_round; ++c) {
      auto f = random_function();
      std::uint64_t mask = to_mask(f);
      std::size_t hits = 0;
      for (auto idx : active) hits += gain(mask, idx) >= 0;
      if (hits > best_hits) {
        best_hits = hits;
        best = std::move(f);
      }
    }
    if (best_hits == 0) continue;
    std::uint64_t mask = to_mask(best);
    for (auto idx : active) {
      int r = gain(mask, idx);
      if (r < 0) continue;
      covered[idx * words + r / 64] |= std::uint64_t{1} << (r % 64);
      --left[idx];
    }
    std::erase_if(active, [&](std::uint32_t idx) { return left[idx] == 0; });
    us.functions.push_back(std::move(best));
  }
  return us;
}

const HashFamily& cached_hash_family(int n, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, HashFamily> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({n, k});
  if (it == cache.end()) it = cache.emplace(std::make_pair(n, k), build_hash_family(n, k)).first;
  return it->second;
}

const UniversalSet& cached_universal_set(int n, int k, int p) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, UniversalSet> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n, k, p);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_universal_set(n, k, p)).first;
  return it->second;
}

bool verify_family(const HashFamily& fam, std::uint64_t samples) {
  const int n = fam.n, k = fam.k;
  if (k > n) return true;
  auto covered = [&](std::uint64_t s) {
    for (const auto& f : fam.functions) {
      if (injective_on(f, s)) return true;
    }
    return false;
  };
  if (n <= 16) {
    bool ok = true;
    for_each_subset(n, k, [&](std::uint64_t s) { ok = ok && covered(s); });
    return ok;
  }
  std::mt19937_64 rng(samples * 31 + n);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::shuffle(idx.begin(), idx.end(), rng);
    std::uint64_t s = 0;
    for (int j = 0; j < k; ++j) s |= std::uint64_t{1} << idx[j];
    if (!covered(s)) return false;
  }
  return true;
}

bool verify_universal(const UniversalSet& us, std::uint64_t samples) {
  const int n = us.n, k = us.k, p = us.p;
  if (k > n) return true;
  std::vector<std::uint64_t> masks;
  for (const auto& f : us.functions) masks.push_back(to_mask(f));
  auto realized = [&](std::uint64_t s, std::uint64_t o) {
    for (auto m : masks) {
      if ((m & s) == o) return true;
    }
    return false;
  };
  if (n <= 16) {
    bool ok = true;
    for_each_subset(n, k, [&](std::uint64_t s) {
      if (!ok) return;
      std::vector<int> pos;
      for (std::uint64_t x = s; x; x &= x - 1) pos.push_back(std::countr_zero(x));
      for_each_subset(k, p, [&](std::uint64_t pat) {
        std::uint64_t o = 0;
        for (int j = 0; j < k; ++j) {
          if (pat >> j & 1u) o |= std::uint64_t{1} << pos[j];
        }
        ok = ok && realized(s, o);
      });
    });
    return ok;
  }
  std::mt19937_64 rng(samples * 17 + n);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::shuffle(idx.begin(), idx.end(), rng);
    std::uint64_t s = 0, o = 0;
    for (int j = 0; j < k; ++j) {
      s |= std::uint64_t{1} << idx[j];
      if (j < p) o |= std::uint64_t{1} << idx[j];
    }
    if (!realized(s, o)) return false;
  }
  return true;
}

}  // namespace scpm
