#include "scpm/generator.hpp"

#include <algorithm>
#include <numeric>

#include "scpm/error.hpp"

namespace scpm {

MultiGraph random_multigraph(int n, int m, double loop_prob, std::mt19937_64& rng) {
  if (n <= 0 && m > 0) throw PreconditionError("random_multigraph: edges need vertices");
  MultiGraph g(n);
  std::uniform_int_distribution<int> pick(0, std::max(0, n - 1));
  std::bernoulli_distribution loop(loop_prob);
  for (int i = 0; i < m; ++i) {
    int u = pick(rng);
    int v = u;
    if (n > 1 && !loop(rng)) {
      while (v == u) v = pick(rng);
    }
    g.add_edge(u, v);
  }
  return g;
}

Gf2Matrix random_low_rank(int rows, int cols, int r, std::mt19937_64& rng) {
  Gf2Matrix p(rows, cols);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < r; ++i) {
    std::vector<char> u(rows), v(cols);
    for (auto& x : u) x = coin(rng);
    for (auto& x : v) x = coin(rng);
    for (int a = 0; a < rows; ++a) {
      if (!u[a]) continue;
      for (int b = 0; b < cols; ++b) {
        if (v[b]) p.set(a, b, !p.get(a, b));
      }
    }
  }
  return p;
}

SpaceCoverInstance random_instance(const RandomParams& prm, std::mt19937_64& rng) {
  if (prm.n < 1 || prm.m < 0 || prm.r < 0 || prm.k < 0 || prm.terminals < 0 || prm.terminals > prm.m) {
    throw PreconditionError("random_instance: invalid parameters");
  }
  SpaceCoverInstance inst;
  inst.g = random_multigraph(prm.n, prm.m, prm.loop_prob, rng);
  inst.p = random_low_rank(prm.n, prm.m, prm.r, rng);
  std::vector<int> idx(prm.m);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  inst.terminals.assign(idx.begin(), idx.begin() + prm.terminals);
  std::sort(inst.terminals.begin(), inst.terminals.end());
  inst.k = prm.k;
  inst.mode = prm.mode;
  return inst;
}

}  // namespace scpm
