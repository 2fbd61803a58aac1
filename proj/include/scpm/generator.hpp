#pragma once

#include <cstdint>
#include <random>

#include "scpm/instance.hpp"

namespace scpm {

struct RandomParams {
  int n = 5;
  int m = 7;
  int r = 1;           // P is a sum of r random rank-1 outer products
  int terminals = 1;
  int k = 2;
  Mode mode = Mode::primal;
  double loop_prob = 0.1;
};

SpaceCoverInstance random_instance(const RandomParams& prm, std::mt19937_64& rng);
// Random multigraph with the given counts; loops with probability loop_prob.
MultiGraph random_multigraph(int n, int m, double loop_prob, std::mt19937_64& rng);
Gf2Matrix random_low_rank(int rows, int cols, int r, std::mt19937_64& rng);

}  // namespace scpm
