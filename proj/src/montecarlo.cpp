#include "mpt/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <thread>

#include "mpt/errors.hpp"

namespace mpt {

namespace {

int next_state(const MarkovProcess& P, int x, CounterRng& rng) {
  auto ts = P.targets(x);
  auto rs = P.rates(x);
  const double u = rng.uniform() * P.holding_rates()[x];
  double acc = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    acc += rs[k];
    if (u < acc) return ts[k];
  }
  return ts.back();
}

void push_label(LabelPath& out, int label, double dt) {
  if (!out.labels.empty() && out.labels.back() == label) {
    out.durations.back() += dt;
  } else {
    out.labels.push_back(label);
    out.durations.push_back(dt);
  }
}

}  // namespace

double Trajectory::total_time() const {
  double t = 0.0;
  for (double h : holds) t += h;
  return t;
}

Trajectory simulate(const MarkovProcess& P, int start, const SimulationConfig& config) {
  if (start < 0 || start >= P.size()) throw Error(ErrorKind::UnknownState, "start state out of range");
  if (config.max_events == 0) throw Error(ErrorKind::InvalidArgument, "event budget must be positive");
  CounterRng rng(config.seed, config.stream);
  Trajectory traj;
  int x = start;
  double t = 0.0;
  auto stopped = [&](int s) { return !config.stop_set.empty() && config.stop_set[s]; };
  for (std::uint64_t ev = 0;; ++ev) {
    if (stopped(x)) {
      traj.states.push_back(x);
      traj.holds.push_back(0.0);
      return traj;
    }
    if (ev >= config.max_events) throw Error(ErrorKind::BudgetExceeded, "event budget exhausted");
    double hold = rng.exponential(P.holding_rates()[x]);
    if (config.horizon > 0.0 && t + hold >= config.horizon) {
      traj.states.push_back(x);
      traj.holds.push_back(config.horizon - t);
      return traj;
    }
    traj.states.push_back(x);
    traj.holds.push_back(hold);
    t += hold;
    x = next_state(P, x, rng);
  }
}

HitResult run_until_hit(const MarkovProcess& P, int start, const std::vector<char>& stop_set, CounterRng& rng,
                        std::uint64_t max_events) {
  HitResult res;
  int x = start;
  while (!stop_set[x]) {
    if (res.events >= max_events) throw Error(ErrorKind::BudgetExceeded, "event budget exhausted");
    res.time += rng.exponential(P.holding_rates()[x]);
    x = next_state(P, x, rng);
    ++res.events;
  }
  res.state = x;
  return res;
}

void RunningStats::add(double x) {
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

void RunningStats::merge(const RunningStats& o) {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double total = static_cast<double>(n + o.n);
  const double d = o.mean - mean;
  mean += d * static_cast<double>(o.n) / total;
  m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
  n += o.n;
}

double RunningStats::stderr_mean() const { return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }

void parallel_for(std::uint64_t count, int threads, const std::function<void(std::uint64_t, int)>& body) {
  threads = std::max(1, threads);
  if (threads == 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i, 0);
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::uint64_t i = w; i < count; i += threads) body(i, w);
    });
  for (auto& th : pool) th.join();
}

HittingEstimate estimate_hitting_time(const MarkovProcess& P, const Measure& start_measure, const StateSet& B,
                                      std::uint64_t replications, std::uint64_t seed, int threads,
                                      std::uint64_t max_events) {
  if (B.empty()) throw Error(ErrorKind::EmptySet, "target set is empty");
  const auto stop = to_mask(P.size(), B);
  Vec cdf(P.size());
  double acc = 0.0;
  for (int x = 0; x < P.size(); ++x) {
    acc += start_measure[x];
    cdf[x] = acc;
  }
  threads = std::max(1, threads);
  std::vector<RunningStats> partial(threads);
  parallel_for(replications, threads, [&](std::uint64_t i, int w) {
    CounterRng rng(seed, i);
    const double u = rng.uniform() * acc;
    const int start = static_cast<int>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    const int z = std::min(start, P.size() - 1);
    partial[w].add(run_until_hit(P, z, stop, rng, max_events).time);
  });
  RunningStats total;
  for (const auto& s : partial) total.merge(s);
  return {total.mean, total.stderr_mean(), total.n};
}

LabelPath project_path(const LabelPath& path, const std::vector<int>& label_map, double time_scale,
                       ProjectionMode mode) {
  LabelPath out;
  for (std::size_t i = 0; i < path.labels.size(); ++i) {
    const int src = path.labels[i];
    const int label = src == kCemetery ? kCemetery : label_map[src];
    if (label == kCemetery && mode == ProjectionMode::Trace) continue;
    push_label(out, label, path.durations[i] / time_scale);
  }
  return out;
}

LabelPath project_trajectory(const Trajectory& traj, const std::vector<int>& valley_map, double time_scale,
                             ProjectionMode mode) {
  LabelPath raw{traj.states, traj.holds};
  return project_path(raw, valley_map, time_scale, mode);
}

double ks_statistic_exponential(Vec samples, double rate) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = -std::expm1(-rate * samples[i]);
    d = std::max({d, F - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - F});
  }
  return d;
}

double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

void write_trajectory_csv(std::ostream& os, const MarkovProcess& P, const Trajectory& traj) {
  os << "t,state\n";
  double t = 0.0;
  char buf[64];
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    auto res = std::to_chars(buf, buf + sizeof buf, t);
    os.write(buf, res.ptr - buf);
    os << ',' << P.state(traj.states[i]) << '\n';
    t += traj.holds[i];
  }
}

}  // namespace mpt
