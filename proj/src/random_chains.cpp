#include "mpt/random_chains.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "mpt/errors.hpp"

namespace mpt {

MarkovProcess random_chain(int n, bool reversible, CounterRng& rng) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "random chain needs at least 2 states");
  std::vector<std::string> ids;
  for (int x = 0; x < n; ++x) ids.push_back(std::to_string(x));
  std::vector<Transition> rates;
  if (reversible) {
    Vec w(n);
    for (double& v : w) v = rng.uniform(0.2, 2.0);
    auto link = [&](int x, int y) {
      const double c = rng.uniform(0.1, 2.0);
      rates.push_back({x, y, c / w[x]});
      rates.push_back({y, x, c / w[y]});
    };
    for (int x = 1; x < n; ++x) link(x, static_cast<int>(rng.below(x)));
    const int extra = static_cast<int>(rng.below(n + 1));
    for (int k = 0; k < extra; ++k) {
      const int x = static_cast<int>(rng.below(n));
      const int y = static_cast<int>(rng.below(n));
      if (x != y) link(x, y);
    }
    return MarkovProcess(std::move(ids), rates, w);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  for (int i = 0; i < n; ++i) rates.push_back({order[i], order[(i + 1) % n], rng.uniform(0.1, 2.0)});
  const int extra = static_cast<int>(rng.below(2 * n + 1));
  for (int k = 0; k < extra; ++k) {
    const int x = static_cast<int>(rng.below(n));
    const int y = static_cast<int>(rng.below(n));
    if (x != y) rates.push_back({x, y, rng.uniform(0.05, 2.0)});
  }
  return MarkovProcess(std::move(ids), rates);
}

SetPair random_sets(int n, CounterRng& rng, int free_states) {
  if (n < 2 + free_states) throw Error(ErrorKind::InvalidArgument, "too few states for random sets");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  const int room = n - free_states;
  const int a = 1 + static_cast<int>(rng.below(room - 1));
  const int b = 1 + static_cast<int>(rng.below(room - a));
  SetPair s;
  s.A.assign(perm.begin(), perm.begin() + a);
  s.B.assign(perm.begin() + a, perm.begin() + a + b);
  std::sort(s.A.begin(), s.A.end());
  std::sort(s.B.begin(), s.B.end());
  return s;
}

Vec random_function(int n, CounterRng& rng, double lo, double hi) {
  Vec f(n);
  for (double& v : f) v = rng.uniform(lo, hi);
  return f;
}

Vec random_feasible_function(int n, const StateSet& A, const StateSet& B, double a, double b, CounterRng& rng) {
  Vec f = random_function(n, rng, -0.5, 1.5);
  for (int x : A) f[x] = a;
  for (int x : B) f[x] = b;
  return f;
}

Flow random_circulation(std::shared_ptr<const EdgeSet> edges, CounterRng& rng, double scale) {
  const int n = edges->n;
  std::vector<int> parent(n, -1), parent_edge(n, -1), depth(n, -1);
  std::vector<char> tree(edges->edges.size(), 0);
  for (int root = 0; root < n; ++root) {
    if (depth[root] >= 0) continue;
    depth[root] = 0;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int x = q.front();
      q.pop();
      for (const auto& inc : edges->incident[x]) {
        const auto& e = edges->edges[inc.edge];
        const int y = e.lo == x ? e.hi : e.lo;
        if (depth[y] >= 0) continue;
        depth[y] = depth[x] + 1;
        parent[y] = x;
        parent_edge[y] = inc.edge;
        tree[inc.edge] = 1;
        q.push(y);
      }
    }
  }
  Flow phi(edges);
  auto push = [&](int edge, int from, double w) {
    phi.value[edge] += edges->edges[edge].lo == from ? w : -w;
  };
  for (std::size_t id = 0; id < edges->edges.size(); ++id) {
    if (tree[id]) continue;
    const double w = scale * rng.uniform(-1.0, 1.0);
    int u = edges->edges[id].hi;
    int v = edges->edges[id].lo;
    push(static_cast<int>(id), v, w);
    // close the cycle: route w from u back to v through the tree
    while (depth[u] > depth[v]) {
      push(parent_edge[u], u, w);
      u = parent[u];
    }
    while (depth[v] > depth[u]) {
      push(parent_edge[v], parent[v], w);
      v = parent[v];
    }
    while (u != v) {
      push(parent_edge[u], u, w);
      u = parent[u];
      push(parent_edge[v], parent[v], w);
      v = parent[v];
    }
  }
  return phi;
}

Flow random_flow(std::shared_ptr<const EdgeSet> edges, CounterRng& rng, double scale) {
  Flow phi(edges);
  for (double& v : phi.value) v = scale * rng.uniform(-1.0, 1.0);
  return phi;
}

}  // namespace mpt
