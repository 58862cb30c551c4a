#include "mpt/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_set>

#include <Eigen/Dense>

#include "mpt/errors.hpp"
#include "mpt/potential.hpp"

namespace mpt {

namespace {

Spins bit(int x) { return Spins{1} << x; }

std::string hex_id(Spins s) {
  static const char* digits = "0123456789abcdef";
  std::string out = "0x";
  bool started = false;
  for (int shift = 60; shift >= 0; shift -= 4) {
    const int d = static_cast<int>((s >> shift) & 0xF);
    if (d || started || shift == 0) {
      out += digits[d];
      started = true;
    }
  }
  return out;
}

ConfigSet sorted_unique(std::vector<Spins> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

int row_energy(int K, unsigned r) {
  if (K == 2) return ((r ^ (r >> 1)) & 1u) ? 1 : 0;
  int e = 0;
  for (int k = 0; k < K; ++k) e += ((r >> k) & 1u) != ((r >> ((k + 1) % K)) & 1u);
  return e;
}

// Interval test on T_n: members must form a contiguous cyclic block.
bool grows_interval(const std::vector<char>& in, int n, int next) {
  const int count = static_cast<int>(std::count(in.begin(), in.end(), 1));
  if (count == 0) return true;
  return in[(next + 1) % n] || in[(next + n - 1) % n];
}

bool is_permutation_interval_order(const std::vector<int>& order, int n) {
  if (static_cast<int>(order.size()) != n) return false;
  std::vector<char> in(n, 0);
  for (int x : order) {
    if (x < 0 || x >= n || in[x] || !grows_interval(in, n, x)) return false;
    in[x] = 1;
  }
  return true;
}

std::vector<int> random_interval_order(int n, CounterRng& rng) {
  const int start = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  std::vector<int> order{start};
  int lo = start, hi = start;
  while (static_cast<int>(order.size()) < n) {
    if (rng.below(2) == 0) {
      lo = (lo + n - 1) % n;
      order.push_back(lo);
    } else {
      hi = (hi + 1) % n;
      order.push_back(hi);
    }
  }
  return order;
}

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

bool contains(const ConfigSet& set, Spins s) { return std::binary_search(set.begin(), set.end(), s); }

ConfigSet set_union(const ConfigSet& a, const ConfigSet& b) {
  ConfigSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ConfigSet set_intersection(const ConfigSet& a, const ConfigSet& b) {
  ConfigSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ConfigSet set_difference(const ConfigSet& a, const ConfigSet& b) {
  ConfigSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IsingLattice::IsingLattice(int K, int L) : K_(K), L_(L) {
  if (K < 2 || L < 2) throw Error(ErrorKind::InvalidArgument, "lattice sides must be at least 2");
  if (K * L > 64) throw Error(ErrorKind::StateSpaceTooLarge, "at most 64 sites are supported");
  full_ = K * L == 64 ? ~Spins{0} : (bit(K * L) - 1);
  nbr_.resize(K * L);
  for (int l = 0; l < L; ++l)
    for (int k = 0; k < K; ++k) {
      const int s = site(k, l);
      std::vector<int> n{site(k + 1, l), site(k - 1, l), site(k, l + 1), site(k, l - 1)};
      std::sort(n.begin(), n.end());
      n.erase(std::unique(n.begin(), n.end()), n.end());
      nbr_[s] = n;
      for (int t : n)
        if (s < t) bonds_.emplace_back(s, t);
    }
}

int IsingLattice::site(int k, int l) const { return ((l % L_ + L_) % L_) * K_ + ((k % K_ + K_) % K_); }

int IsingLattice::hamiltonian(Spins s) const {
  int h = 0;
  for (const auto& [a, b] : bonds_) h += ((s >> a) & 1) != ((s >> b) & 1);
  return h;
}

int IsingLattice::flip_delta(Spins s, int x) const {
  const auto sx = (s >> x) & 1;
  int d = 0;
  for (int t : nbr_[x]) d += ((s >> t) & 1) == sx ? 1 : -1;
  return d;
}

double gibbs_weight(const IsingLattice& lat, Spins s, double beta, int offset) {
  return std::exp(-beta * (lat.hamiltonian(s) - offset));
}

double partition_function(const IsingLattice& lat, double beta) {
  const int K = lat.K(), L = lat.L();
  if (K > 10) throw Error(ErrorKind::StateSpaceTooLarge, "transfer matrix needs K <= 10");
  const int m = 1 << K;
  std::vector<int> hr(m);
  for (int r = 0; r < m; ++r) hr[r] = row_energy(K, static_cast<unsigned>(r));
  if (L == 2) {
    double z = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) z += std::exp(-beta * (hr[a] + hr[b] + std::popcount(static_cast<unsigned>(a ^ b))));
    return z;
  }
  Eigen::MatrixXd T(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      T(a, b) = std::exp(-beta * (0.5 * hr[a] + 0.5 * hr[b] + std::popcount(static_cast<unsigned>(a ^ b))));
  Eigen::MatrixXd P = T;
  for (int i = 1; i < L; ++i) P = P * T;
  return P.trace();
}

double partition_function_enumerated(const IsingLattice& lat, double beta) {
  if (lat.sites() > 24) throw Error(ErrorKind::StateSpaceTooLarge, "enumeration needs K*L <= 24");
  const Spins n = bit(lat.sites());
  std::vector<double> byH(2 * lat.sites() + 1, 0.0);
  for (Spins s = 0; s < n; ++s) byH[lat.hamiltonian(s)] += 1.0;
  double z = 0.0;
  for (std::size_t h = 0; h < byH.size(); ++h) z += byH[h] * std::exp(-beta * static_cast<double>(h));
  return z;
}

double metropolis_rate(const IsingLattice& lat, Spins s, Spins t, double beta) {
  const Spins d = s ^ t;
  if (std::popcount(d) != 1) return 0.0;
  const int x = std::countr_zero(d);
  return std::exp(-beta * std::max(0, lat.flip_delta(s, x)));
}

BarrierResult communication_height(const IsingLattice& lat, Spins from, Spins to, int cap, std::size_t budget) {
  const int h0 = lat.hamiltonian(from);
  if (cap < 0) cap = std::max({h0, lat.hamiltonian(to), lat.gamma()});
  if (h0 > cap || lat.hamiltonian(to) > cap)
    throw Error(ErrorKind::CapExceeded, "endpoint energy exceeds the cap");
  using Item = std::tuple<int, int, Spins, int>;  // bottleneck, distance to target, config, H
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  std::unordered_map<Spins, int> best;
  std::unordered_set<Spins> done;
  pq.emplace(h0, std::popcount(from ^ to), from, h0);
  best[from] = h0;
  BarrierResult res;
  while (!pq.empty()) {
    const auto [b, dist, s, h] = pq.top();
    pq.pop();
    (void)dist;
    if (!done.insert(s).second) continue;
    if (s == to) {
      res.value = b;
      return res;
    }
    if (++res.expanded > budget) throw Error(ErrorKind::BudgetExceeded, "bottleneck search exceeded its budget");
    for (int x = 0; x < lat.sites(); ++x) {
      const Spins t = s ^ bit(x);
      const int ht = h + lat.flip_delta(s, x);
      if (ht > cap || done.count(t)) continue;
      const int bt = std::max(b, ht);
      auto it = best.find(t);
      if (it != best.end() && it->second <= bt) continue;
      best[t] = bt;
      pq.emplace(bt, std::popcount(t ^ to), t, ht);
    }
  }
  throw Error(ErrorKind::CapExceeded, "no path below the energy cap " + std::to_string(cap));
}

int exhaustive_barrier(const IsingLattice& lat, Spins from, Spins to) {
  if (lat.sites() > 24) throw Error(ErrorKind::StateSpaceTooLarge, "exhaustive search needs K*L <= 24");
  const int n = 1 << lat.sites();
  const int hmax = 2 * lat.sites();
  std::vector<std::vector<int>> byH(hmax + 1);
  std::vector<int> H(n);
  for (int s = 0; s < n; ++s) {
    H[s] = lat.hamiltonian(static_cast<Spins>(s));
    byH[H[s]].push_back(s);
  }
  Dsu dsu(n);
  const int start = std::max(H[from], H[to]);
  for (int level = 0; level <= hmax; ++level) {
    for (int s : byH[level])
      for (int x = 0; x < lat.sites(); ++x) {
        const int t = s ^ (1 << x);
        if (H[t] <= level) dsu.unite(s, t);
      }
    if (level >= start && dsu.find(static_cast<int>(from)) == dsu.find(static_cast<int>(to))) return level;
  }
  throw Error(ErrorKind::SolveFailure, "configurations not connected");
}

Spins zeta(const IsingLattice& lat, int l, int v) {
  Spins s = 0;
  for (int n = 0; n < v; ++n)
    for (int k = 0; k < lat.K(); ++k) s |= bit(lat.site(k, l + n));
  return s;
}

Spins zeta_up(const IsingLattice& lat, int l, int v, int k, int h) {
  Spins s = zeta(lat, l, v);
  for (int n = 0; n < h; ++n) s |= bit(lat.site(k + n, l + v));
  return s;
}

Spins zeta_down(const IsingLattice& lat, int l, int v, int k, int h) {
  Spins s = zeta(lat, l, v);
  for (int n = 0; n < h; ++n) s |= bit(lat.site(k + n, l - 1));
  return s;
}

ConfigSet canonical_R(const IsingLattice& lat, int v) {
  std::vector<Spins> out;
  for (int l = 0; l < lat.L(); ++l) out.push_back(zeta(lat, l, v));
  return sorted_unique(out);
}

ConfigSet canonical_Q(const IsingLattice& lat, int v) {
  std::vector<Spins> out;
  for (int l = 0; l < lat.L(); ++l)
    for (int k = 0; k < lat.K(); ++k)
      for (int h = 1; h <= lat.K() - 1; ++h) {
        out.push_back(zeta_up(lat, l, v, k, h));
        out.push_back(zeta_down(lat, l, v, k, h));
      }
  return sorted_unique(out);
}

ConfigSet canonical_C(const IsingLattice& lat) {
  ConfigSet out;
  for (int v = 0; v <= lat.L(); ++v) out = set_union(out, canonical_R(lat, v));
  for (int v = 0; v <= lat.L() - 1; ++v) out = set_union(out, canonical_Q(lat, v));
  return out;
}

std::vector<Spins> canonical_path(const IsingLattice& lat, const std::vector<int>& rows,
                                  const std::vector<std::vector<int>>& cols) {
  if (!is_permutation_interval_order(rows, lat.L()) || static_cast<int>(cols.size()) != lat.L())
    throw Error(ErrorKind::InvalidArgument, "row order is not an increasing sequence of intervals");
  std::vector<Spins> path{lat.all_minus()};
  Spins s = 0;
  for (int i = 0; i < lat.L(); ++i) {
    if (!is_permutation_interval_order(cols[i], lat.K()))
      throw Error(ErrorKind::InvalidArgument, "column order is not an increasing sequence of intervals");
    for (int k : cols[i]) {
      s |= bit(lat.site(k, rows[i]));
      path.push_back(s);
    }
  }
  return path;
}

std::vector<Spins> random_canonical_path(const IsingLattice& lat, CounterRng& rng) {
  const auto rows = random_interval_order(lat.L(), rng);
  std::vector<std::vector<int>> cols;
  for (int i = 0; i < lat.L(); ++i) cols.push_back(random_interval_order(lat.K(), rng));
  return canonical_path(lat, rows, cols);
}

ConfigSet neighborhood(const IsingLattice& lat, const ConfigSet& seeds, int level, const ConfigSet& forbidden,
                       std::size_t budget) {
  std::unordered_set<Spins> seen;
  std::vector<std::pair<Spins, int>> stack;
  for (Spins s : seeds) {
    const int h = lat.hamiltonian(s);
    if (h > level || contains(forbidden, s) || !seen.insert(s).second) continue;
    stack.emplace_back(s, h);
  }
  while (!stack.empty()) {
    const auto [s, h] = stack.back();
    stack.pop_back();
    for (int x = 0; x < lat.sites(); ++x) {
      const int ht = h + lat.flip_delta(s, x);
      if (ht > level) continue;
      const Spins t = s ^ bit(x);
      if (seen.count(t) || contains(forbidden, t)) continue;
      seen.insert(t);
      if (seen.size() > budget)
        throw Error(ErrorKind::FrontierExplosion, "neighborhood exceeds " + std::to_string(budget) + " configurations");
      stack.emplace_back(t, ht);
    }
  }
  return sorted_unique(std::vector<Spins>(seen.begin(), seen.end()));
}

bool TypicalStructure::Invariants::all() const {
  return E_disjoint && E_minus_cap_B && E_plus_cap_B && E_cup_B && I_minus_form && I_plus_form && R_singletons &&
         low_energy && N_hat_equal && N_disjoint && set_lemma && e_symmetric;
}

namespace {

void build_edge_chain(EdgeChain& ch, const IsingLattice& lat, int sign, const ConfigSet& E, const ConfigSet& O,
                      const ConfigSet& N_ground, const ConfigSet& R, bool& singletons, bool& i_form) {
  const int Gamma = lat.gamma();
  ch.sign = sign;
  const Spins ground = sign < 0 ? lat.all_minus() : lat.all_plus();
  ch.vertices.push_back(ground);
  for (Spins r : R) ch.vertices.push_back(r);
  for (Spins o : O) ch.vertices.push_back(o);
  ch.O_size = O.size();
  for (std::size_t i = 0; i < ch.vertices.size(); ++i) ch.index[ch.vertices[i]] = static_cast<int>(i);

  for (Spins n : N_ground) ch.rep[n] = 0;
  singletons = true;
  for (std::size_t i = 0; i < R.size(); ++i) {
    const ConfigSet nr = neighborhood(lat, {R[i]}, Gamma - 1);
    if (nr.size() != 1) singletons = false;
    for (Spins n : nr) ch.rep[n] = static_cast<int>(1 + i);
  }
  for (Spins o : O) ch.rep[o] = ch.index[o];
  i_form = true;
  for (Spins s : E)
    if (!ch.rep.count(s)) i_form = false;

  std::map<std::pair<int, int>, int> counts;
  for (std::size_t q = 0; q < O.size(); ++q) {
    const Spins s = O[q];
    const int i = ch.index[s];
    for (int x = 0; x < lat.sites(); ++x) {
      const Spins t = s ^ bit(x);
      auto it = ch.index.find(t);
      if (it != ch.index.end() && it->second > static_cast<int>(R.size())) {
        if (i < it->second) ch.oo_edges.emplace_back(i, it->second);
        continue;
      }
      auto rt = ch.rep.find(t);
      if (rt == ch.rep.end() || rt->second > static_cast<int>(R.size())) continue;
      if (lat.hamiltonian(t) >= Gamma) continue;
      ch.crossings.push_back({i, rt->second, t});
      ++counts[{i, rt->second}];
    }
  }
  std::vector<Transition> rates;
  for (const auto& [a, b] : ch.oo_edges) {
    rates.push_back({a, b, 1.0});
    rates.push_back({b, a, 1.0});
  }
  for (const auto& [key, c] : counts) {
    rates.push_back({key.first, key.second, static_cast<double>(c)});
    rates.push_back({key.second, key.first, static_cast<double>(c)});
  }
  std::vector<std::string> ids;
  for (Spins v : ch.vertices) ids.push_back(hex_id(v));
  const int n = static_cast<int>(ch.vertices.size());
  ch.Z = std::make_unique<MarkovProcess>(std::move(ids), rates, Vec(n, 1.0));
  StateSet rset;
  for (std::size_t i = 0; i < R.size(); ++i) rset.push_back(static_cast<int>(1 + i));
  ch.h = equilibrium_potential(*ch.Z, {0}, rset);
  ch.cap = capacity(*ch.Z, {0}, rset).value;
  ch.e = 1.0 / (n * ch.cap);
}

}  // namespace

TypicalStructure typical_structure(const IsingLattice& lat, std::size_t budget) {
  const int K = lat.K(), L = lat.L();
  if (K >= L) throw Error(ErrorKind::DimensionOrder, "typical structure needs K < L");
  if (K < 3 || L < 6) throw Error(ErrorKind::InvalidArgument, "typical structure needs K >= 3 and L >= 6");
  TypicalStructure S;
  S.K = K;
  S.L = L;
  S.Gamma = lat.gamma();
  const int G = S.Gamma;
  const Spins minus = lat.all_minus(), plus = lat.all_plus();

  for (int v = 2; v <= L - 2; ++v) {
    for (Spins r : canonical_R(lat, v)) S.bulk_label[r] = {v, 0};
    S.B = set_union(S.B, canonical_R(lat, v));
  }
  for (int v = 2; v <= L - 3; ++v) {
    for (int l = 0; l < L; ++l)
      for (int k = 0; k < K; ++k)
        for (int h = 1; h <= K - 1; ++h) {
          S.bulk_label[zeta_up(lat, l, v, k, h)] = {v, h};
          S.bulk_label[zeta_down(lat, l, v, k, h)] = {v, h};
        }
    S.B_Gamma = set_union(S.B_Gamma, canonical_Q(lat, v));
  }
  S.B = set_union(S.B, S.B_Gamma);

  S.N_minus = neighborhood(lat, {minus}, G - 1, {}, budget);
  S.N_plus = neighborhood(lat, {plus}, G - 1, {}, budget);
  S.E_minus = neighborhood(lat, {minus}, G, S.B_Gamma, budget);
  S.E_plus = neighborhood(lat, {plus}, G, S.B_Gamma, budget);
  S.N_hat_S = neighborhood(lat, {minus, plus}, G, {}, budget);
  for (Spins s : S.E_minus) (lat.hamiltonian(s) == G ? S.O_minus : S.I_minus).push_back(s);
  for (Spins s : S.E_plus) (lat.hamiltonian(s) == G ? S.O_plus : S.I_plus).push_back(s);

  const ConfigSet R2 = canonical_R(lat, 2), RL2 = canonical_R(lat, L - 2);
  auto& inv = S.invariants;
  inv.E_disjoint = set_intersection(S.E_minus, S.E_plus).empty();
  inv.E_minus_cap_B = set_intersection(S.E_minus, S.B) == R2;
  inv.E_plus_cap_B = set_intersection(S.E_plus, S.B) == RL2;
  inv.E_cup_B = set_union(set_union(S.E_minus, S.E_plus), S.B) == S.N_hat_S;
  inv.I_minus_form = S.I_minus == set_union(S.N_minus, R2);
  inv.I_plus_form = S.I_plus == set_union(S.N_plus, RL2);
  inv.N_disjoint = set_intersection(S.N_minus, S.N_plus).empty();
  inv.N_hat_equal = contains(neighborhood(lat, {minus}, G, {}, budget), plus);
  inv.set_lemma = set_union(neighborhood(lat, {minus}, G, {plus}, budget),
                            neighborhood(lat, {plus}, G, {minus}, budget)) == S.N_hat_S;
  ConfigSet low_R;
  for (int v = 0; v <= L; ++v) low_R = set_union(low_R, canonical_R(lat, v));
  const ConfigSet N_S = set_union(S.N_minus, S.N_plus);
  inv.low_energy = true;
  for (Spins s : S.N_hat_S)
    if (lat.hamiltonian(s) < G && !contains(low_R, s) && !contains(N_S, s)) inv.low_energy = false;

  bool single_m = false, single_p = false, form_m = false, form_p = false;
  build_edge_chain(S.minus, lat, -1, S.E_minus, S.O_minus, S.N_minus, R2, single_m, form_m);
  build_edge_chain(S.plus, lat, +1, S.E_plus, S.O_plus, S.N_plus, RL2, single_p, form_p);
  inv.R_singletons = single_m && single_p;
  inv.I_minus_form = inv.I_minus_form && form_m;
  inv.I_plus_form = inv.I_plus_form && form_p;
  inv.e_symmetric = std::abs(S.minus.e - S.plus.e) <= 1e-10 * S.minus.e;

  S.b = static_cast<double>((K + 2) * (L - 4)) / (4.0 * K * L);
  S.e = S.minus.e;
  S.kappa = S.b + 2.0 * S.e;
  return S;
}

double f0_value(const TypicalStructure& S, Spins s) {
  const double ek = S.e / S.kappa;
  if (auto it = S.minus.rep.find(s); it != S.minus.rep.end()) return 1.0 - ek * (1.0 - S.minus.h[it->second]);
  if (auto it = S.plus.rep.find(s); it != S.plus.rep.end()) return ek * (1.0 - S.plus.h[it->second]);
  if (auto it = S.bulk_label.find(s); it != S.bulk_label.end()) {
    const auto [v, h] = it->second;
    const double KK = S.K + 2.0, LL = S.L - 4.0;
    const double frac = h == 0 ? (S.L - 2.0 - v) / LL : (KK * (S.L - 2.0 - v) - (h + 1.0)) / (KK * LL);
    return (frac * S.b + S.e) / S.kappa;
  }
  return 1.0;
}

F0Report dirichlet_of_f0(const TypicalStructure& S, const IsingLattice& lat, double beta) {
  F0Report rep;
  rep.beta = beta;
  rep.Z = partition_function(lat, beta);
  const int G = S.Gamma;
  std::unordered_map<Spins, double> f;
  f.reserve(S.N_hat_S.size() * 2);
  rep.in_unit_interval = true;
  for (Spins s : S.N_hat_S) {
    const double v = f0_value(S, s);
    f[s] = v;
    if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) rep.in_unit_interval = false;
  }
  rep.feasible = f0_value(S, lat.all_minus()) == 1.0 && f0_value(S, lat.all_plus()) == 0.0;
  double sum = 0.0;
  for (Spins s : S.N_hat_S) {
    const int hs = lat.hamiltonian(s);
    const double fs = f[s];
    for (int x = 0; x < lat.sites(); ++x) {
      const Spins t = s ^ bit(x);
      auto it = f.find(t);
      if (it != f.end() && t < s) continue;
      const double d = (it == f.end() ? 1.0 : it->second) - fs;
      if (d == 0.0) continue;
      const int ht = hs + lat.flip_delta(s, x);
      sum += std::exp(-beta * (std::max(hs, ht) - G)) * d * d;
    }
  }
  rep.scaled = 2.0 * S.kappa * sum / rep.Z;

  const double KK = S.K + 2.0, LL = S.L - 4.0;
  auto bulk = [&](int v) { return (((S.L - 2.0 - v) / LL) * S.b + S.e) / S.kappa; };
  (void)KK;
  for (Spins r : canonical_R(lat, 2))
    rep.r2_consistency = std::max(rep.r2_consistency,
                                  std::abs(1.0 - S.e / S.kappa * (1.0 - S.minus.h[S.minus.rep.at(r)]) - bulk(2)));
  for (Spins r : canonical_R(lat, S.L - 2))
    rep.r2_consistency = std::max(rep.r2_consistency,
                                  std::abs(S.e / S.kappa * (1.0 - S.plus.h[S.plus.rep.at(r)]) - bulk(S.L - 2)));
  return rep;
}

void IsingFlow::add(Spins from, Spins to, double v) {
  const Spins d = from ^ to;
  const int x = std::countr_zero(d);
  const Spins lo = std::min(from, to);
  value[(lo << 6) | static_cast<std::uint64_t>(x)] += from == lo ? v : -v;
}

double IsingFlow::at(Spins from, Spins to) const {
  const Spins d = from ^ to;
  const int x = std::countr_zero(d);
  const Spins lo = std::min(from, to);
  auto it = value.find((lo << 6) | static_cast<std::uint64_t>(x));
  if (it == value.end()) return 0.0;
  return from == lo ? it->second : -it->second;
}

IsingFlow test_flow_psi0(const TypicalStructure& S, const IsingLattice& lat) {
  if (lat.sites() > 58) throw Error(ErrorKind::StateSpaceTooLarge, "flow keys need K*L <= 58");
  IsingFlow psi;
  // Z^- carries flow away from the all-minus state; Z^+ carries it into the all-plus state.
  for (const EdgeChain* ch : {&S.minus, &S.plus}) {
    const double s = ch->sign < 0 ? S.e : -S.e;
    for (const auto& [a, b] : ch->oo_edges) psi.add(ch->vertices[a], ch->vertices[b], s * (ch->h[a] - ch->h[b]));
    for (const auto& c : ch->crossings) psi.add(ch->vertices[c.o], c.xi, s * (ch->h[c.o] - ch->h[c.i]));
  }
  const double u = S.b / ((S.K + 2.0) * (S.L - 4.0));
  const int K = S.K;
  for (int v = 2; v <= S.L - 3; ++v)
    for (int l = 0; l < S.L; ++l)
      for (int k = 0; k < K; ++k)
        for (auto z : {zeta_up, zeta_down}) {
          psi.add(z(lat, l, v, k, 0), z(lat, l, v, k, 1), 2.0 * u);
          psi.add(z(lat, l, v, k, K - 1), z(lat, l, v, k, K), 2.0 * u);
          for (int h = 1; h <= K - 2; ++h) {
            psi.add(z(lat, l, v, k, h), z(lat, l, v, k, h + 1), u);
            psi.add(z(lat, l, v, k, h), z(lat, l, v, k - 1, h + 1), u);
          }
        }
  return psi;
}

FlowReport flow_checks(const TypicalStructure& S, const IsingLattice& lat, const IsingFlow& psi, double beta) {
  FlowReport rep;
  rep.beta = beta;
  rep.edges = psi.value.size();
  rep.bulk_unit = S.b / ((S.K + 2.0) * (S.L - 4.0));
  const double Z = partition_function(lat, beta);
  std::unordered_map<Spins, double> div;
  double norm = 0.0;
  for (const auto& [key, val] : psi.value) {
    const Spins lo = key >> 6;
    const Spins hi = lo ^ bit(static_cast<int>(key & 63));
    div[lo] += val;
    div[hi] -= val;
    const int hmax = std::max(lat.hamiltonian(lo), lat.hamiltonian(hi));
    norm += val * val * std::exp(beta * (hmax - S.Gamma));
  }
  rep.scaled_norm = Z * norm / (2.0 * S.kappa);
  for (const auto& [s, d] : div) {
    if (contains(S.N_minus, s))
      rep.div_minus += d;
    else if (contains(S.N_plus, s))
      rep.div_plus += d;
    else
      rep.max_div_elsewhere = std::max(rep.max_div_elsewhere, std::abs(d));
  }
  return rep;
}

std::vector<RateApproxRow> rate_approximation_check(const TypicalStructure& S, const IsingLattice& lat,
                                                    const std::vector<double>& betas) {
  std::vector<RateApproxRow> rows;
  const int G = S.Gamma;
  for (double beta : betas) {
    RateApproxRow row;
    row.beta = beta;
    const double Z = partition_function(lat, beta);
    auto term = [&](Spins a, Spins b) {
      return std::exp(-beta * (std::max(lat.hamiltonian(a), lat.hamiltonian(b)) - G - 2)) / Z;
    };
    const double e2 = std::exp(2.0 * beta);
    for (const EdgeChain* ch : {&S.minus, &S.plus}) {
      for (const auto& [a, b] : ch->oo_edges) {
        const double dev = std::abs(0.5 * e2 - term(ch->vertices[a], ch->vertices[b]));
        row.scaled_dev = std::max(row.scaled_dev, dev);
        row.oo_dev = std::max(row.oo_dev, dev * std::exp(-(G + 2) * beta));
      }
      std::map<std::pair<int, int>, std::pair<int, double>> groups;
      for (const auto& c : ch->crossings) {
        auto& g = groups[{c.o, c.i}];
        ++g.first;
        g.second += term(ch->vertices[c.o], c.xi);
      }
      for (const auto& [key, g] : groups)
        row.scaled_dev = std::max(row.scaled_dev, std::abs(0.5 * e2 * ch->Z->rate(key.first, key.second) - g.second));
    }
    rows.push_back(row);
  }
  return rows;
}

MarkovProcess full_chain(const IsingLattice& lat, double beta) {
  if (lat.sites() > 20) throw Error(ErrorKind::StateSpaceTooLarge, "full chain needs K*L <= 20");
  const int n = 1 << lat.sites();
  std::vector<std::string> ids(n);
  Vec weight(n);
  std::vector<Transition> rates;
  rates.reserve(static_cast<std::size_t>(n) * lat.sites());
  for (int s = 0; s < n; ++s) {
    ids[s] = std::to_string(s);
    weight[s] = gibbs_weight(lat, static_cast<Spins>(s), beta);
    for (int x = 0; x < lat.sites(); ++x)
      rates.push_back({s, s ^ (1 << x), std::exp(-beta * std::max(0, lat.flip_delta(static_cast<Spins>(s), x)))});
  }
  return MarkovProcess(std::move(ids), rates, weight);
}

SmallLatticeReport exact_small_lattice(const IsingLattice& lat, const std::vector<double>& betas) {
  if (lat.sites() > 20) throw Error(ErrorKind::StateSpaceTooLarge, "exact small lattice needs K*L <= 20");
  SmallLatticeReport rep;
  rep.K = lat.K();
  rep.L = lat.L();
  const Spins minus = lat.all_minus(), plus = lat.all_plus();
  rep.barrier = exhaustive_barrier(lat, plus, minus);
  const ConfigSet Nplus = neighborhood(lat, {plus}, rep.barrier - 1);
  const ConfigSet Nminus = neighborhood(lat, {minus}, rep.barrier - 1);
  const int ip = static_cast<int>(plus), im = static_cast<int>(minus);
  for (double beta : betas) {
    const MarkovProcess P = full_chain(lat, beta);
    SmallLatticeRow row;
    row.beta = beta;
    row.cap = capacity(P, {ip}, {im}).value;
    row.cap_reverse = capacity(P, {im}, {ip}).value;
    row.cap_escape = capacity_via_escape(P, {ip}, {im}).value;
    const Vec h = equilibrium_potential(P, {im}, {ip});
    for (Spins s : Nplus) row.max_h_near_plus = std::max(row.max_h_near_plus, h[static_cast<int>(s)]);
    row.min_h_near_minus = 1.0;
    for (Spins s : Nminus) row.min_h_near_minus = std::min(row.min_h_near_minus, h[static_cast<int>(s)]);
    row.Z = partition_function(lat, beta);
    row.mu_plus = P.measure()[ip];
    rep.rows.push_back(row);
  }
  if (rep.rows.size() >= 2) {
    const auto& a = rep.rows[rep.rows.size() - 2];
    const auto& b = rep.rows.back();
    rep.log_slope = -(std::log(b.cap) - std::log(a.cap)) / (b.beta - a.beta);
  }
  return rep;
}

BridgeCensus bridge_census(const IsingLattice& lat, Spins s) {
  const int K = lat.K(), L = lat.L();
  BridgeCensus bc;
  auto spin = [&](int k, int l) { return static_cast<int>((s >> lat.site(k, l)) & 1); };
  for (int l = 0; l < L; ++l) {
    int plus = 0, e = 0;
    for (int k = 0; k < K; ++k) {
      plus += spin(k, l);
      if (K > 2 || k == 0) e += spin(k, l) != spin(k + 1, l);
    }
    bc.row_energy.push_back(e);
    if (plus == K) ++bc.plus_bridges;
    if (plus == 0) ++bc.minus_bridges;
  }
  for (int k = 0; k < K; ++k) {
    int plus = 0, e = 0;
    for (int l = 0; l < L; ++l) {
      plus += spin(k, l);
      if (L > 2 || l == 0) e += spin(k, l) != spin(k, l + 1);
    }
    bc.col_energy.push_back(e);
    if (plus == L) ++bc.plus_bridges;
    if (plus == 0) ++bc.minus_bridges;
  }
  bc.lower_bound = 2 * (K + L - bc.plus_bridges - bc.minus_bridges);
  return bc;
}

}  // namespace mpt
