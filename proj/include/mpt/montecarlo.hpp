#ifndef MPT_MONTECARLO_HPP
#define MPT_MONTECARLO_HPP

#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "mpt/markov.hpp"
#include "mpt/rng.hpp"

namespace mpt {

struct SimulationConfig {
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::uint64_t max_events = 10'000'000;
  std::vector<char> stop_set;  // stop on entering a state with stop_set[x] != 0
  double horizon = 0.0;        // stop once elapsed time reaches horizon (0 = none)
};

// Sequence of visited states with the time spent in each. For a run that
// stops on hitting, the final state carries holding time 0.
struct Trajectory {
  std::vector<int> states;
  Vec holds;
  double total_time() const;
};

// Jump choice uses inverse transform over successors in state-index order.
Trajectory simulate(const MarkovProcess& P, int start, const SimulationConfig& config);

// Runs until the stop set is hit; returns elapsed time and the entry state
// without storing the path.
struct HitResult {
  double time = 0.0;
  int state = -1;
  std::uint64_t events = 0;
};
HitResult run_until_hit(const MarkovProcess& P, int start, const std::vector<char>& stop_set, CounterRng& rng,
                        std::uint64_t max_events);

struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  void add(double x);
  void merge(const RunningStats& o);
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double stderr_mean() const;
};

struct HittingEstimate {
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::uint64_t replications = 0;
};

// Replication i draws its start from start_measure and then runs on
// stream i of the seed. Workers merge with Welford's rule.
HittingEstimate estimate_hitting_time(const MarkovProcess& P, const Measure& start_measure, const StateSet& B,
                                      std::uint64_t replications, std::uint64_t seed, int threads = 1,
                                      std::uint64_t max_events = 100'000'000);

// Runs body(i) for i in [0, count) over a fixed number of worker threads.
void parallel_for(std::uint64_t count, int threads, const std::function<void(std::uint64_t, int)>& body);

enum class ProjectionMode { Trace, Cemetery };
constexpr int kCemetery = -1;

// Piecewise-constant labelled path; consecutive equal labels are merged.
struct LabelPath {
  std::vector<int> labels;
  Vec durations;
};

// valley_map[x] is the label of state x, or kCemetery for states outside
// every valley. Trace mode excises cemetery time; Cemetery mode keeps it as
// the label kCemetery. Durations are divided by time_scale.
LabelPath project_trajectory(const Trajectory& traj, const std::vector<int>& valley_map, double time_scale,
                             ProjectionMode mode);
LabelPath project_path(const LabelPath& path, const std::vector<int>& label_map, double time_scale,
                       ProjectionMode mode);

// Kolmogorov-Smirnov distance between samples and Exp(rate).
double ks_statistic_exponential(Vec samples, double rate);
// Asymptotic 1% critical value 1.6276 / sqrt(n).
double ks_critical_1pct(std::size_t n);

void write_trajectory_csv(std::ostream& os, const MarkovProcess& P, const Trajectory& traj);

}  // namespace mpt

#endif
