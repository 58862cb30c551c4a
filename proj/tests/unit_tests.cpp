#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mpt/collapse.hpp"
#include "mpt/errors.hpp"
#include "mpt/flows.hpp"
#include "mpt/ising.hpp"
#include "mpt/markov.hpp"
#include "mpt/montecarlo.hpp"
#include "mpt/potential.hpp"
#include "mpt/random_chains.hpp"
#include "mpt/rng.hpp"
#include "mpt/variational.hpp"
#include "mpt/verify.hpp"
#include "mpt/zrp.hpp"

using namespace mpt;

namespace {

// Frozen values computed outside this library: exact rational arithmetic for
// the chain quantities, brute-force enumeration for the partition functions.
constexpr double kCycle8Cap = 1241.0 / 23200.0;   // cycle n=8, p=0.7, A={0}, B={4}
constexpr double kCycle6Hit = 237.0 / 37.0;       // cycle n=6, p=0.7, E_0[tau_3]
constexpr double kIsingZ_3x4 = 2.1693253325934236;   // beta = 1.3
constexpr double kIsingZ_2x2 = 5.080783692549713;    // beta = 0.7
constexpr double kIsingZ_3x3 = 11.675407969774131;   // beta = 0.5
constexpr double kIsingZ_2x5 = 4.956627750742207;    // beta = 1.0
constexpr double kZrpZ_3_10 = 28.44589486489041;     // sites 3, N 10, alpha 2
constexpr double kZrpZ_3_12 = 27.799553308244793;    // sites 3, N 12, alpha 2
constexpr double kZrpZ_4_8 = 120.50800423139484;     // sites 4, N 8, alpha 1.5

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("counter rng reproduces the SplitMix64 reference stream") {
  CounterRng rng(1);
  CHECK(rng.next_u64() == 0x910a2dec89025cc1ULL);
  CHECK(rng.next_u64() == 0xbeeb8da1658eec67ULL);
  CounterRng other(42, 3);
  CHECK(other.next_u64() == 0xd996835b8bd77e23ULL);
}

TEST_CASE("process parsing rejects malformed documents") {
  CHECK_THROWS_AS(process_from_json(nlohmann::json::parse(R"({"states":[0,1]})")), Error);
  try {
    process_from_json(nlohmann::json::parse(R"({"states":[0,1],"rates":[[0,2,1.0]]})"));
    FAIL("expected UnknownState");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownState);
  }
  const auto P = process_from_json(nlohmann::json::parse(R"({"states":["a","b"],"rates":[["a","b",2],["b","a",1]]})"));
  CHECK(P.measure()[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(P.measure()[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("cycle walk: uniform measure, adjoint reverses the drift") {
  const auto P = cycle_walk(8, 0.7);
  for (double m : P.measure()) CHECK(m == doctest::Approx(0.125).epsilon(1e-14));
  CHECK_FALSE(is_reversible(P));
  CHECK(is_reversible(cycle_walk(8, 0.5)));
  const auto Q = adjoint(P);
  CHECK(Q.rate(0, 1) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(Q.rate(1, 0) == doctest::Approx(0.7).epsilon(1e-14));
}

TEST_CASE("capacity of the driven cycle matches the exact rational value") {
  const auto P = cycle_walk(8, 0.7);
  CHECK(rel(capacity(P, {0}, {4}).value, kCycle8Cap) < 1e-13);
  CHECK(rel(capacity_via_escape(P, {0}, {4}).value, kCycle8Cap) < 1e-13);
  CHECK(rel(capacity(adjoint(P), {0}, {4}).value, kCycle8Cap) < 1e-13);
  CHECK(rel(capacity(P, {4}, {0}).value, kCycle8Cap) < 1e-13);
}

TEST_CASE("symmetric cycle capacity is two resistors in parallel") {
  // Edge conductance c = (1/n)(1/2); paths of length k and n-k.
  const auto P = cycle_walk(10, 0.5);
  const double c = 0.05;
  CHECK(rel(capacity(P, {0}, {3}).value, c * (1.0 / 3.0 + 1.0 / 7.0)) < 1e-13);
}

TEST_CASE("capacity errors and degenerate partitions") {
  const auto P = cycle_walk(6, 0.7);
  CHECK_THROWS_AS(capacity(P, {0, 1}, {1}), Error);
  CHECK_THROWS_AS(capacity(P, {}, {1}), Error);
  // Full partition: the potential is the indicator, cap = D(1_A).
  const StateSet A{0, 1, 2}, B{3, 4, 5};
  Vec ind(6, 0.0);
  for (int a : A) ind[a] = 1.0;
  CHECK(rel(capacity(P, A, B).value, dirichlet_form(P, ind)) < 1e-14);
}

TEST_CASE("mean hitting time equals the exact rational value") {
  const auto P = cycle_walk(6, 0.7);
  CHECK(rel(expected_hitting_times(P, {3})[0], kCycle6Hit) < 1e-13);
  CHECK(rel(mean_hitting_time(P, 0, {3}), kCycle6Hit) < 1e-12);
}

TEST_CASE("equilibrium potential is harmonic and bounded") {
  CounterRng rng(11);
  for (int t = 0; t < 20; ++t) {
    const auto P = random_chain(9, t % 2 == 0, rng);
    const auto s = random_sets(9, rng);
    const Vec h = equilibrium_potential(P, s.A, s.B);
    CHECK(harmonic_residual(P, h, s.A, s.B) < 1e-12);
    for (double v : h) {
      CHECK(v >= -1e-14);
      CHECK(v <= 1.0 + 1e-14);
    }
  }
}

TEST_CASE("flows: antisymmetry and unit flow divergence") {
  const auto P = cycle_walk(7, 0.7);
  const auto edges = build_edges(P);
  CounterRng rng(5);
  const Flow phi = random_flow(edges, rng);
  CHECK(phi.at(0, 1) == -phi.at(1, 0));
  for (auto kind : {UnitFlowKind::Phi, UnitFlowKind::PhiStar}) {
    const Flow u = unit_flow(P, edges, {0}, {3}, kind);
    CHECK(divergence(u, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(divergence(u, 3) == doctest::Approx(-1.0).epsilon(1e-12));
    for (int x : {1, 2, 4, 5, 6}) CHECK(std::abs(divergence(u, x)) < 1e-12);
  }
  // On a reversible chain the Thomson optimum is the unit flow with norm 1/cap.
  const auto R = cycle_walk(7, 0.5);
  const auto redges = build_edges(R);
  const Flow psi = unit_flow(R, redges, {0}, {3}, UnitFlowKind::Psi);
  CHECK(rel(flow_norm_sq(psi), 1.0 / capacity(R, {0}, {3}).value) < 1e-12);
}

TEST_CASE("variational principles bracket the capacity") {
  CounterRng rng(3);
  for (int t = 0; t < 6; ++t) {
    const auto P = random_chain(8, t % 2 == 0, rng);
    const auto s = random_sets(8, rng);
    for (const auto& pc : verify_principles(P, s.A, s.B, 30, 100 + t)) {
      INFO(pc.name);
      CHECK(pc.pass);
    }
  }
}

TEST_CASE("sector sandwich on the driven cycle") {
  const auto P = cycle_walk(8, 0.7);
  const auto sw = capacity_sandwich(P, {0}, {4}, 4.0 / 0.7);
  CHECK(sw.holds);
  CHECK(sw.cap_s <= sw.cap * (1 + 1e-12));
}

TEST_CASE("collapsing a set preserves the capacity to a disjoint set") {
  const auto P = cycle_walk(9, 0.7);
  const StateSet E{0, 1, 2}, A{5};
  const auto C = collapse_process(P, E);
  const double a = capacity(C.process, {C.e_index}, collapse_set(C, A)).value;
  CHECK(rel(a, capacity(P, E, A).value) < 1e-12);
  CHECK_THROWS_AS(collapse_process(P, {}), Error);
  const auto rep = verify_collapse_identities(P, E, A, 20, 9);
  CHECK(rep.pass());
}

TEST_CASE("Monte Carlo hitting time and KS constant") {
  const auto P = cycle_walk(6, 0.7);
  Measure start(6, 0.0);
  start[0] = 1.0;
  const auto est = estimate_hitting_time(P, start, {3}, 20000, 17, 1);
  CHECK(std::abs(est.mean - kCycle6Hit) < 3.0 * est.stderr_mean);
  const auto again = estimate_hitting_time(P, start, {3}, 20000, 17, 1);
  CHECK(again.mean == est.mean);
  CHECK(ks_critical_1pct(100) == doctest::Approx(0.16276).epsilon(1e-12));
}

TEST_CASE("Ising Hamiltonian and partition functions") {
  const IsingLattice lat(5, 6);
  CHECK(lat.hamiltonian(lat.all_plus()) == 0);
  CHECK(lat.hamiltonian(lat.all_plus() ^ 1) == 4);
  CHECK(lat.hamiltonian(zeta(lat, 0, 2)) == 2 * 5);
  CHECK(lat.gamma() == 12);
  CHECK(rel(partition_function(IsingLattice(3, 4), 1.3), kIsingZ_3x4) < 1e-13);
  CHECK(rel(partition_function(IsingLattice(2, 2), 0.7), kIsingZ_2x2) < 1e-13);
  CHECK(rel(partition_function(IsingLattice(3, 3), 0.5), kIsingZ_3x3) < 1e-13);
  CHECK(rel(partition_function(IsingLattice(2, 5), 1.0), kIsingZ_2x5) < 1e-13);
  CHECK(rel(partition_function_enumerated(IsingLattice(3, 4), 1.3), kIsingZ_3x4) < 1e-13);
  CHECK_THROWS_AS(IsingLattice(1, 4), Error);
}

TEST_CASE("flip delta agrees with the Hamiltonian difference") {
  const IsingLattice lat(4, 5);
  CounterRng rng(21);
  for (int t = 0; t < 200; ++t) {
    const Spins s = rng.next_u64() & lat.all_plus();
    const int x = static_cast<int>(rng.below(20));
    CHECK(lat.flip_delta(s, x) == lat.hamiltonian(s ^ (Spins{1} << x)) - lat.hamiltonian(s));
  }
}

TEST_CASE("bottleneck search equals exhaustive widest path on small lattices") {
  for (int K = 2; K <= 4; ++K)
    for (int L = K; K * L <= 16; ++L) {
      const IsingLattice lat(K, L);
      CAPTURE(K);
      CAPTURE(L);
      const int ex = exhaustive_barrier(lat, lat.all_plus(), lat.all_minus());
      CHECK(communication_height(lat, lat.all_plus(), lat.all_minus(), 2 * K * L).value == ex);
    }
  const IsingLattice lat(3, 4);
  CHECK(exhaustive_barrier(lat, lat.all_plus(), lat.all_minus()) == 8);
  CHECK_THROWS_AS(communication_height(lat, lat.all_plus(), lat.all_minus(), 6), Error);
}

TEST_CASE("canonical paths stay below the barrier") {
  const IsingLattice lat(5, 7);
  CounterRng rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto path = random_canonical_path(lat, rng);
    CHECK(path.size() == 36);
    CHECK(path.back() == lat.all_plus());
    int top = 0;
    for (Spins s : path) top = std::max(top, lat.hamiltonian(s));
    CHECK(top == lat.gamma());
  }
  CHECK_THROWS_AS(canonical_path(lat, {0, 2, 1, 3, 4, 5, 6}, std::vector<std::vector<int>>(7, {0, 1, 2, 3, 4})), Error);
}

TEST_CASE("bridge census lower bound") {
  const IsingLattice lat(5, 6);
  CounterRng rng(4);
  for (int t = 0; t < 100; ++t) {
    const Spins s = rng.next_u64() & lat.all_plus();
    CHECK(bridge_census(lat, s).lower_bound <= lat.hamiltonian(s));
  }
  CHECK(bridge_census(lat, zeta(lat, 1, 3)).lower_bound == lat.hamiltonian(zeta(lat, 1, 3)));
}

TEST_CASE("typical structure requires K < L") {
  CHECK_THROWS_AS(typical_structure(IsingLattice(5, 5)), Error);
}

TEST_CASE("ZRP partition function and state counts") {
  CHECK(rel(zrp_partition_function(3, 10, 2.0), kZrpZ_3_10) < 1e-13);
  CHECK(rel(zrp_partition_function(3, 12, 2.0), kZrpZ_3_12) < 1e-13);
  CHECK(rel(zrp_partition_function(4, 8, 1.5), kZrpZ_4_8) < 1e-13);
  CHECK(zrp_state_count(3, 10) == 66);
  CHECK(zrp_state_count(4, 8) == 165);
  ZrpParams prm;
  prm.N = 10;
  const auto m = build_zrp(prm);
  CHECK(m.configs.size() == 66);
  CHECK(rel(m.Z_N, kZrpZ_3_10) < 1e-13);
  CHECK(m.measure_rel_err < 1e-10);
}

TEST_CASE("ZRP limit constants") {
  const auto lc = limit_constants(3, 2.0);
  CHECK(rel(lc.Gamma, 1.0 + std::numbers::pi * std::numbers::pi / 6.0) < 1e-12);
  CHECK(rel(lc.I, 1.0 / 30.0) < 1e-14);
  CHECK(rel(lc.I_quadrature, 1.0 / 30.0) < 1e-12);
}

TEST_CASE("ZRP identities and reversible formula") {
  ZrpParams prm;
  prm.N = 10;
  const auto m = build_zrp(prm);
  const auto rates = mean_jump_rates(m);
  CHECK(rates.e610_err < 1e-8);
  CHECK(rates.e611_err < 1e-8);
  prm.p = 0.5;
  const auto ms = build_zrp(prm);
  CHECK(er1_error(ms, mean_jump_rates(ms)) < 1e-10);
}

TEST_CASE("ZRP parameter errors") {
  ZrpParams prm;
  prm.alpha = 0.5;
  CHECK_THROWS_AS(build_zrp(prm), Error);
  prm.alpha = 2.0;
  prm.N = 2;
  prm.width_fraction = 3.0;
  CHECK_THROWS_AS(build_zrp(prm), Error);
}

TEST_CASE("verification suites pass") {
  for (const auto& s : verify_suites()) {
    for (const auto& c : run_suite(s, 20, 2)) {
      INFO(s << "." << c.name << " metric " << c.metric);
      CHECK(c.pass);
    }
  }
  CHECK_THROWS_AS(run_suite("nope", 5, 1), Error);
}
