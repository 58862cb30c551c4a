#include "mpt/zrp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mpt/collapse.hpp"
#include "mpt/errors.hpp"
#include "mpt/linalg.hpp"
#include "mpt/montecarlo.hpp"
#include "mpt/potential.hpp"
#include "mpt/random_chains.hpp"
#include "mpt/rng.hpp"

namespace mpt {

namespace {

// Number of occupation vectors of m particles on k sites.
std::size_t compositions(int k, int m) {
  if (k == 0) return m == 0 ? 1 : 0;
  // C(m + k - 1, k - 1)
  std::size_t r = 1;
  for (int i = 1; i <= k - 1; ++i) r = r * static_cast<std::size_t>(m + i) / static_cast<std::size_t>(i);
  return r;
}

void enumerate(int sites, int N, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  const int i = static_cast<int>(cur.size());
  int used = 0;
  for (int v : cur) used += v;
  if (i == sites - 1) {
    cur.push_back(N - used);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int v = 0; v <= N - used; ++v) {
    cur.push_back(v);
    enumerate(sites, N, cur, out);
    cur.pop_back();
  }
}

std::string config_id(const std::vector<int>& eta) {
  std::string s;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(eta[i]);
  }
  return s;
}

double inv_a_product(const std::vector<int>& eta, double alpha) {
  double w = 1.0;
  for (int v : eta) w /= zrp_a(v, alpha);
  return w;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double c0_for(double p) { return 4.0 / std::max(p, 1.0 - p); }

}  // namespace

double zrp_a(int n, double alpha) { return n == 0 ? 1.0 : std::pow(static_cast<double>(n), alpha); }

double zrp_g(int n, double alpha) { return n == 0 ? 0.0 : zrp_a(n, alpha) / zrp_a(n - 1, alpha); }

int valley_width(int N, int sites, double alpha, double width_fraction) {
  const double theta = (1.0 + alpha) / (1.0 + (sites - 1) * alpha);
  const double v = std::pow(static_cast<double>(N), width_fraction * theta);
  return std::max(1, static_cast<int>(std::floor(v + 1e-9)));
}

std::size_t zrp_state_count(int sites, int N) { return compositions(sites, N); }

int ZrpModel::rank(const std::vector<int>& eta) const {
  const int k = params.sites;
  int rem = params.N;
  std::size_t r = 0;
  for (int i = 0; i < k - 1; ++i) {
    for (int v = 0; v < eta[i]; ++v) r += compositions(k - i - 1, rem - v);
    rem -= eta[i];
  }
  return static_cast<int>(r);
}

StateSet ZrpModel::valleys_union(const std::vector<int>& sites) const {
  StateSet out;
  for (int x : sites) out.insert(out.end(), valley[x].begin(), valley[x].end());
  std::sort(out.begin(), out.end());
  return out;
}

StateSet ZrpModel::complement_valleys(const std::vector<int>& excluded) const {
  std::vector<int> keep;
  for (int x = 0; x < params.sites; ++x)
    if (std::find(excluded.begin(), excluded.end(), x) == excluded.end()) keep.push_back(x);
  return valleys_union(keep);
}

ZrpModel build_zrp(const ZrpParams& params) {
  if (!(params.alpha > 1.0)) throw Error(ErrorKind::AlphaOutOfRange, "alpha must exceed 1");
  if (params.sites < 2 || params.N < 1) throw Error(ErrorKind::InvalidArgument, "need at least 2 sites and 1 particle");
  if (!(params.p > 0.0 && params.p < 1.0)) throw Error(ErrorKind::InvalidArgument, "p must lie in (0,1)");
  const std::size_t count = zrp_state_count(params.sites, params.N);
  if (count > params.budget)
    throw Error(ErrorKind::StateSpaceTooLarge, std::to_string(count) + " configurations exceed the budget");

  ZrpModel m;
  m.params = params;
  std::vector<int> cur;
  enumerate(params.sites, params.N, cur, m.configs);
  const int n = static_cast<int>(m.configs.size());
  const int k = params.sites;

  std::vector<std::string> ids;
  std::vector<Transition> rates;
  for (int i = 0; i < n; ++i) {
    const auto& eta = m.configs[i];
    ids.push_back(config_id(eta));
    for (int x = 0; x < k; ++x) {
      if (eta[x] == 0) continue;
      const double g = zrp_g(eta[x], params.alpha);
      for (int dir : {1, -1}) {
        const int y = (x + dir + k) % k;
        auto next = eta;
        --next[x];
        ++next[y];
        rates.push_back({i, m.rank(next), g * (dir == 1 ? params.p : 1.0 - params.p)});
      }
    }
  }
  m.process = std::make_unique<MarkovProcess>(std::move(ids), rates);

  m.Z_N = zrp_partition_function(k, params.N, params.alpha);
  const double scale = std::pow(static_cast<double>(params.N), params.alpha) / m.Z_N;
  m.closed_form.resize(n);
  for (int i = 0; i < n; ++i) {
    m.closed_form[i] = scale * inv_a_product(m.configs[i], params.alpha);
    m.measure_rel_err = std::max(m.measure_rel_err, rel(m.process->measure()[i], m.closed_form[i]));
  }

  m.ell = valley_width(params.N, k, params.alpha, params.width_fraction);
  if (2 * m.ell >= params.N)
    throw Error(ErrorKind::ValleysOverlap, "valley width " + std::to_string(m.ell) + " is not below N/2");
  m.valley.assign(k, {});
  m.valley_of.assign(n, -1);
  m.condensate.assign(k, -1);
  for (int i = 0; i < n; ++i) {
    for (int x = 0; x < k; ++x) {
      if (m.configs[i][x] >= params.N - m.ell) {
        m.valley[x].push_back(i);
        m.valley_of[i] = x;
      }
      if (m.configs[i][x] == params.N) m.condensate[x] = i;
    }
    if (m.valley_of[i] < 0) m.delta.push_back(i);
  }
  return m;
}

double zrp_partition_function(int sites, int N, double alpha) {
  Vec w(N + 1);
  for (int j = 0; j <= N; ++j) w[j] = 1.0 / zrp_a(j, alpha);
  Vec acc = w;
  for (int s = 1; s < sites; ++s) {
    Vec next(N + 1, 0.0);
    for (int j = 0; j <= N; ++j)
      for (int i = 0; i <= j; ++i) next[j] += acc[i] * w[j - i];
    acc = std::move(next);
  }
  return std::pow(static_cast<double>(N), alpha) * acc[N];
}

LimitConstants limit_constants(int sites, double alpha) {
  if (!(alpha > 1.0)) throw Error(ErrorKind::AlphaOutOfRange, "alpha must exceed 1");
  LimitConstants c;
  // Euler-Maclaurin: sum_{n>=M} n^-a with derivative corrections up to f^(5).
  const int M = 200;
  double head = 0.0;
  for (int n = M - 1; n >= 1; --n) head += std::pow(static_cast<double>(n), -alpha);
  const double m = M, a = alpha;
  const double tail = std::pow(m, 1.0 - a) / (a - 1.0) + 0.5 * std::pow(m, -a) + a / 12.0 * std::pow(m, -a - 1.0) -
                      a * (a + 1) * (a + 2) / 720.0 * std::pow(m, -a - 3.0) +
                      a * (a + 1) * (a + 2) * (a + 3) * (a + 4) / 30240.0 * std::pow(m, -a - 5.0);
  c.Gamma = 1.0 + head + tail;
  c.I = std::beta(alpha + 1.0, alpha + 1.0);
  auto integrand = [alpha](double u) { return std::pow(u, alpha) * std::pow(1.0 - u, alpha); };
  c.I_quadrature = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-14);
  c.Z = sites * std::pow(c.Gamma, sites - 1);
  return c;
}

double LimitChain::cap_Y(const StateSet& A, const StateSet& B) const { return capacity(*Y, A, B).value; }

LimitChain limit_chain(int sites, double alpha, double p) {
  const LimitConstants lc = limit_constants(sites, alpha);
  const MarkovProcess X = cycle_walk(sites, p);
  LimitChain L;
  L.sites = sites;
  L.cap_X.assign(sites, Vec(sites, 0.0));
  L.a.assign(sites, Vec(sites, 0.0));
  std::vector<std::string> ids;
  std::vector<Transition> rates;
  for (int x = 0; x < sites; ++x) {
    ids.push_back(std::to_string(x));
    for (int y = 0; y < sites; ++y) {
      if (x == y) continue;
      L.cap_X[x][y] = capacity(X, {x}, {y}).value;
      L.a[x][y] = sites * L.cap_X[x][y] / (lc.Gamma * lc.I);
      rates.push_back({x, y, L.a[x][y]});
    }
  }
  L.Y = std::make_unique<MarkovProcess>(std::move(ids), rates, Vec(sites, 1.0));
  return L;
}

TraceResult trace_process(const MarkovProcess& P, const StateSet& E) {
  const int n = P.size();
  if (E.empty()) throw Error(ErrorKind::EmptyCollapseSet, "trace set is empty");
  const auto inE = to_mask(n, E);
  TraceResult tr;
  std::vector<int> local(n, -1);
  for (int x = 0; x < n; ++x)
    if (inE[x]) {
      local[x] = static_cast<int>(tr.members.size());
      tr.members.push_back(x);
    }
  const int m = static_cast<int>(tr.members.size());
  if (m == n) {
    std::vector<std::string> ids = P.states();
    tr.process = std::make_unique<MarkovProcess>(std::move(ids), P.transitions());
    return tr;
  }
  // hit[k][xi] = P_xi[first entrance into E happens at members[k]]
  InteriorSolver solver(P, inE);
  std::vector<Vec> hit(m);
  Vec boundary(n, 0.0);
  for (int k = 0; k < m; ++k) {
    boundary[tr.members[k]] = 1.0;
    hit[k] = solver.solve(boundary, {});
    boundary[tr.members[k]] = 0.0;
  }
  std::vector<Transition> rates;
  Vec row(m);
  for (int i = 0; i < m; ++i) {
    const int eta = tr.members[i];
    std::fill(row.begin(), row.end(), 0.0);
    auto ts = P.targets(eta);
    auto rs = P.rates(eta);
    for (std::size_t q = 0; q < ts.size(); ++q) {
      if (inE[ts[q]]) {
        row[local[ts[q]]] += rs[q];
      } else {
        for (int k = 0; k < m; ++k) row[k] += rs[q] * hit[k][ts[q]];
      }
    }
    double total = 0.0;
    for (int k = 0; k < m; ++k) {
      if (k == i) continue;
      total += row[k];
      if (row[k] > 0.0) rates.push_back({i, k, row[k]});
    }
    tr.max_row_excess = std::max(tr.max_row_excess, total - P.holding_rates()[eta]);
  }
  std::vector<std::string> ids;
  for (int x : tr.members) ids.push_back(P.state(x));
  tr.process = std::make_unique<MarkovProcess>(std::move(ids), rates);
  double muE = 0.0;
  for (int x : tr.members) muE += P.measure()[x];
  for (int i = 0; i < m; ++i)
    tr.measure_err = std::max(tr.measure_err, rel(tr.process->measure()[i], P.measure()[tr.members[i]] / muE));
  return tr;
}

CapacityRow zrp_capacity_row(const ZrpModel& m, const LimitChain& Y, const std::vector<int>& A,
                             const std::vector<int>& B) {
  const auto& P = m.P();
  const StateSet EA = m.valleys_union(A), EB = m.valleys_union(B);
  CapacityRow row;
  row.N = m.params.N;
  row.ell = m.ell;
  row.states = m.configs.size();
  row.cap = capacity(P, EA, EB).value;
  row.cap_s = capacity(symmetrize(P), EA, EB).value;
  row.scaled = std::pow(static_cast<double>(m.params.N), 1.0 + m.params.alpha) * row.cap;
  row.cap_Y = Y.cap_Y(A, B);
  row.rel_err = rel(row.scaled, row.cap_Y);
  row.C0 = c0_for(m.params.p);
  row.sandwich = row.cap_s - 1e-10 * row.cap <= row.cap && row.cap <= row.C0 * row.cap_s + 1e-10 * row.cap;
  return row;
}

SectorCheck sector_check_zrp(const ZrpModel& m, int samples, std::uint64_t seed) {
  const auto& P = m.P();
  const double pm = std::max(m.params.p, 1.0 - m.params.p);
  SectorCheck sc;
  sc.samples = samples;
  sc.bound = 4.0 / pm;
  sc.worst_linear = -INFINITY;
  for (int i = 0; i < samples; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const Vec f = random_function(P.size(), rng), g = random_function(P.size(), rng);
    Vec Lf = apply_generator(P, f);
    for (double& v : Lf) v = -v;
    const double ip = inner_product_mu(P, g, Lf);
    const double df = dirichlet_form(P, f), dg = dirichlet_form(P, g);
    sc.max_ratio = std::max(sc.max_ratio, ip * ip / (df * dg));
    sc.worst_linear = std::max(sc.worst_linear, (ip - df - dg / pm) / (df + dg));
  }
  sc.pass = sc.max_ratio <= sc.bound && sc.worst_linear <= 1e-10;
  return sc;
}

MeanJumpRates mean_jump_rates(const ZrpModel& m) {
  const auto& P = m.P();
  const int k = m.params.sites;
  std::vector<int> all(k);
  for (int x = 0; x < k; ++x) all[x] = x;
  const TraceResult tr = trace_process(P, m.valleys_union(all));
  MeanJumpRates out;
  out.trace_measure_err = tr.measure_err;
  out.r.assign(k, Vec(k, 0.0));
  out.lambda.assign(k, 0.0);
  out.mu_valley.assign(k, 0.0);
  for (int x = 0; x < k; ++x)
    for (int eta : m.valley[x]) out.mu_valley[x] += P.measure()[eta];
  const MarkovProcess& T = *tr.process;
  for (int i = 0; i < T.size(); ++i) {
    const int eta = tr.members[i];
    auto ts = T.targets(i);
    auto rs = T.rates(i);
    for (std::size_t q = 0; q < ts.size(); ++q) {
      const int x = m.valley_of[eta], y = m.valley_of[tr.members[ts[q]]];
      if (x != y) out.r[x][y] += P.measure()[eta] * rs[q];
    }
  }
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      out.r[x][y] /= out.mu_valley[x];
      if (x != y) out.lambda[x] += out.r[x][y];
    }
  for (int x = 0; x < k; ++x) {
    const double cap = capacity(P, m.valley[x], m.complement_valleys({x})).value;
    out.e610_err = std::max(out.e610_err, rel(out.lambda[x], cap / out.mu_valley[x]));
    const CollapsedProcess C = collapse_process(P, m.valley[x]);
    for (int y = 0; y < k; ++y) {
      if (y == x) continue;
      const StateSet rest = m.complement_valleys({x, y});
      double expected = 1.0;
      if (!rest.empty()) {
        const Vec h = equilibrium_potential(C.process, collapse_set(C, m.valley[y]), collapse_set(C, rest));
        expected = h[C.e_index];
      }
      out.e611_err = std::max(out.e611_err, rel(out.r[x][y] / out.lambda[x], expected));
    }
  }
  return out;
}

double er1_error(const ZrpModel& m, const MeanJumpRates& rates) {
  const auto& P = m.P();
  const int k = m.params.sites;
  double worst = 0.0;
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y) {
      if (x == y) continue;
      const double cx = capacity(P, m.valley[x], m.complement_valleys({x})).value;
      const double cy = capacity(P, m.valley[y], m.complement_valleys({y})).value;
      const StateSet rest = m.complement_valleys({x, y});
      const double cxy = rest.empty() ? 0.0 : capacity(P, m.valleys_union({x, y}), rest).value;
      const double formula = 0.5 * (cx + cy - cxy);
      worst = std::max(worst, rel(rates.mu_valley[x] * rates.r[x][y], formula));
    }
  return worst;
}

ConditionsRow martingale_conditions(const ZrpModel& m, const LimitChain& Y, const MeanJumpRates& rates) {
  const auto& P = m.P();
  const int k = m.params.sites;
  const double alpha = m.params.alpha;
  const double scale = std::pow(static_cast<double>(m.params.N), 1.0 + alpha);
  ConditionsRow row;
  row.N = m.params.N;
  row.ell = m.ell;
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < k; ++y)
      if (x != y) row.H0_err = std::max(row.H0_err, std::abs(scale * rates.r[x][y] / Y.a[x][y] - 1.0));

  const auto& E0 = m.valley[0];
  const double capE = capacity(P, E0, m.complement_valleys({0})).value;
  double min_cap = INFINITY;
  for (std::size_t i = 0; i < E0.size(); ++i)
    for (std::size_t j = i + 1; j < E0.size(); ++j) min_cap = std::min(min_cap, capacity(P, {E0[i]}, {E0[j]}).value);
  row.H1 = capE / min_cap;
  row.lemcap_const = min_cap * std::pow(static_cast<double>(m.ell), alpha * (k - 1) + 1.0);

  double muD = 0.0;
  for (int eta : m.delta) muD += P.measure()[eta];
  row.H2 = muD / rates.mu_valley[0];
  row.H3_stat = m.Z_N * muD;
  const int xi = m.condensate[0];
  for (int eta : E0)
    if (eta != xi) row.H3_hit = std::max(row.H3_hit, 1.0 / (scale * capacity(P, {eta}, {xi}).value));
  row.mu_valley_err = std::abs(rates.mu_valley[0] - 1.0 / k);
  return row;
}

U1Check u1_check(const ZrpModel& m, const ZrpModel& prev) {
  const int N = m.params.N;
  const double alpha = m.params.alpha;
  U1Check out;
  out.a_N = std::pow(static_cast<double>(N), alpha) * prev.Z_N /
            (std::pow(static_cast<double>(N - 1), alpha) * m.Z_N);
  for (std::size_t i = 0; i < m.configs.size(); ++i)
    for (int u = 0; u < m.params.sites; ++u) {
      const auto& eta = m.configs[i];
      if (eta[u] == 0) continue;
      auto zeta = eta;
      --zeta[u];
      const double lhs = m.P().measure()[i] * zrp_g(eta[u], alpha);
      const double rhs = out.a_N * prev.P().measure()[prev.rank(zeta)];
      out.max_err = std::max(out.max_err, rel(lhs, rhs));
    }
  return out;
}

double edr_check(const ZrpModel& m, const ZrpModel& prev, const Vec& f) {
  const int k = m.params.sites;
  const double p = m.params.p;
  const U1Check u1 = u1_check(m, prev);
  double rhs = 0.0;
  for (std::size_t i = 0; i < prev.configs.size(); ++i) {
    const auto& zeta = prev.configs[i];
    for (int x = 0; x < k; ++x)
      for (int dir : {1, -1}) {
        const int y = (x + dir + k) % k;
        auto ex = zeta, ey = zeta;
        ++ex[x];
        ++ey[y];
        const double d = f[m.rank(ex)] - f[m.rank(ey)];
        rhs += prev.P().measure()[i] * (dir == 1 ? p : 1.0 - p) * d * d;
      }
  }
  rhs *= 0.5 * u1.a_N;
  return rel(dirichlet_form(m.P(), f), rhs);
}

OrderChainStats order_chain_statistics(const ZrpModel& m, const LimitChain& Y, const MeanJumpRates& rates,
                                       int departures, std::uint64_t seed) {
  const auto& P = m.P();
  const int k = m.params.sites;
  const double scale = std::pow(static_cast<double>(m.params.N), 1.0 + m.params.alpha);
  std::vector<std::vector<char>> stop(k);
  for (int x = 0; x < k; ++x) stop[x] = to_mask(P.size(), m.complement_valleys({x}));
  OrderChainStats st;
  st.matrix.assign(k, std::vector<int>(k, 0));
  CounterRng rng(seed);
  RunningStats sojourn;
  int state = m.condensate[0];
  while (st.departures < departures) {
    const int x = m.valley_of[state];
    const HitResult hr = run_until_hit(P, state, stop[x], rng, 1'000'000'000ULL);
    const int y = m.valley_of[hr.state];
    ++st.matrix[x][y];
    ++st.transitions;
    if (x == 0) {
      ++st.departures;
      sojourn.add(hr.time / scale);
    }
    state = hr.state;
  }
  st.mean_sojourn = sojourn.mean;
  st.mean_sojourn_stderr = sojourn.stderr_mean();
  double total = 0.0, arate = 0.0;
  for (int y = 1; y < k; ++y) {
    total += Y.cap_X[0][y];
    arate += Y.a[0][y];
  }
  st.limit_sojourn = 1.0 / arate;
  st.expected_exact.assign(k, 0.0);
  st.expected_limit.assign(k, 0.0);
  st.z_exact.assign(k, 0.0);
  st.z_limit.assign(k, 0.0);
  auto z = [&](double q, int count) {
    const double se = std::sqrt(st.departures * q * (1.0 - q));
    return se > 0 ? (count - st.departures * q) / se : 0.0;
  };
  st.pass = true;
  for (int y = 1; y < k; ++y) {
    st.expected_exact[y] = rates.r[0][y] / rates.lambda[0];
    st.expected_limit[y] = Y.cap_X[0][y] / total;
    st.z_exact[y] = z(st.expected_exact[y], st.matrix[0][y]);
    st.z_limit[y] = z(st.expected_limit[y], st.matrix[0][y]);
    if (std::abs(st.z_exact[y]) > 3.0) st.pass = false;
  }
  return st;
}

}  // namespace mpt
