#include "mpt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mpt/collapse.hpp"
#include "mpt/errors.hpp"
#include "mpt/flows.hpp"
#include "mpt/markov.hpp"
#include "mpt/potential.hpp"
#include "mpt/random_chains.hpp"
#include "mpt/rng.hpp"
#include "mpt/variational.hpp"

namespace mpt {

namespace {

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

// Accumulates the worst metric per named check.
class Ledger {
 public:
  void record(const std::string& name, double metric, double tol) {
    for (auto& c : checks_)
      if (c.name == name) {
        if (!(metric <= c.metric)) c.metric = metric;
        c.pass = c.metric <= c.tolerance;
        return;
      }
    checks_.push_back({name, metric, tol, metric <= tol});
  }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  std::vector<Check> checks_;
};

struct Instance {
  MarkovProcess P;
  SetPair sets;
};

Instance random_instance(int trial, std::uint64_t seed) {
  CounterRng rng(seed, static_cast<std::uint64_t>(trial));
  const int n = 4 + static_cast<int>(rng.below(9));
  const bool reversible = trial % 2 == 0;
  MarkovProcess P = random_chain(n, reversible, rng);
  SetPair sets = random_sets(n, rng, 1);
  return {std::move(P), std::move(sets)};
}

std::vector<Check> suite_core(int trials, std::uint64_t seed) {
  Ledger out;
  for (int t = 0; t < trials; ++t) {
    const auto [P, sets] = random_instance(t, seed);
    (void)sets;
    out.record("stationarity_residual", P.stationarity_residual(), 1e-12);
    const MarkovProcess Pa = adjoint(P);
    const MarkovProcess Paa = adjoint(Pa);
    double diff = 0.0;
    for (int x = 0; x < P.size(); ++x)
      for (int y = 0; y < P.size(); ++y) diff = std::max(diff, std::abs(Paa.rate(x, y) - P.rate(x, y)));
    out.record("adjoint_involution", diff, 1e-12);
    double mu_diff = 0.0;
    for (int x = 0; x < P.size(); ++x) mu_diff = std::max(mu_diff, rel(Pa.measure()[x], P.measure()[x]));
    out.record("adjoint_measure", mu_diff, 1e-10);
    out.record("reversibility_flag", is_reversible(P) == (t % 2 == 0) ? 0.0 : 1.0, 0.0);
    out.record("symmetrized_reversible", is_reversible(symmetrize(P)) ? 0.0 : 1.0, 0.0);
    CounterRng rng(seed ^ 0xC0DEULL, static_cast<std::uint64_t>(t));
    const Vec f = random_function(P.size(), rng);
    out.record("dirichlet_two_forms", rel(dirichlet_form(P, f), dirichlet_form_generator(P, f)), 1e-10);
  }
  return out.take();
}

std::vector<Check> suite_potential(int trials, std::uint64_t seed) {
  Ledger out;
  for (int t = 0; t < trials; ++t) {
    const auto [P, sets] = random_instance(t, seed);
    const auto& [A, B] = sets;
    const double cap = capacity(P, A, B).value;
    out.record("cap_routes_agree", rel(cap, capacity_via_escape(P, A, B).value), 1e-10);
    out.record("cap_adjoint", rel(cap, capacity(adjoint(P), A, B).value), 1e-10);
    out.record("cap_symmetric_in_sets", rel(cap, capacity(P, B, A).value), 1e-10);
    const Vec h = equilibrium_potential(P, A, B);
    out.record("harmonic_residual", harmonic_residual(P, h, A, B), 1e-10);
    double range = 0.0;
    for (double v : h) range = std::max({range, -v, v - 1.0});
    out.record("potential_in_unit_interval", std::max(range, 0.0), 1e-12);

    // Enlarging A by one free state can only raise the capacity.
    std::vector<char> used(P.size(), 0);
    for (int a : A) used[a] = 1;
    for (int b : B) used[b] = 1;
    const auto it = std::find(used.begin(), used.end(), 0);
    if (it != used.end()) {
      StateSet A2 = A;
      A2.push_back(static_cast<int>(it - used.begin()));
      std::sort(A2.begin(), A2.end());
      const double cap2 = capacity(P, A2, B).value;
      out.record("monotone_in_sets", std::max(0.0, (cap - cap2) / cap), 1e-12);
    }

    // Mean hitting time from the equilibrium measure vs a direct occupation solve.
    CounterRng rng(seed ^ 0x4117ULL, static_cast<std::uint64_t>(t));
    Vec f = random_function(P.size(), rng, 0.0, 1.0);
    const Measure nu = equilibrium_measure(P, A, B);
    Vec u(P.size(), 0.0);
    for (int z = 0; z < P.size(); ++z) {
      const Vec occ = occupation_before_hitting(P, z, B);
      for (int x = 0; x < P.size(); ++x) u[x] += f[z] * occ[x];
    }
    double direct = 0.0;
    for (int a : A) direct += nu[a] * u[a];
    out.record("mean_hitting_formula", rel(mean_hitting_functional(P, A, B, f), direct), 1e-10);
  }
  return out.take();
}

std::vector<Check> suite_flows(int trials, std::uint64_t seed) {
  Ledger out;
  for (int t = 0; t < trials; ++t) {
    const auto [P, sets] = random_instance(t, seed);
    const auto& [A, B] = sets;
    const auto edges = build_edges(P);
    CounterRng rng(seed ^ 0xF10ULL, static_cast<std::uint64_t>(t));
    const Flow phi = random_flow(edges, rng);
    double anti = 0.0;
    for (const auto& e : edges->edges) anti = std::max(anti, std::abs(phi.at(e.lo, e.hi) + phi.at(e.hi, e.lo)));
    out.record("antisymmetry", anti, 0.0);
    double total = 0.0;
    for (double d : divergence_all(phi)) total += d;
    out.record("total_divergence", std::abs(total), 1e-12);
    const Flow circ = random_circulation(edges, rng);
    double div = 0.0;
    for (double d : divergence_all(circ)) div = std::max(div, std::abs(d));
    out.record("circulation_divergence_free", div, 1e-12);
    // psi_{A,B} is a unit flow only when h is also harmonic for the symmetrized chain.
    for (auto kind : {UnitFlowKind::Psi, UnitFlowKind::Phi, UnitFlowKind::PhiStar}) {
      if (kind == UnitFlowKind::Psi && !is_reversible(P)) continue;
      const Flow u = unit_flow(P, edges, A, B, kind);
      out.record("unit_flow_source", std::abs(divergence_set(u, A) - 1.0), 1e-10);
      out.record("unit_flow_sink", std::abs(divergence_set(u, B) + 1.0), 1e-10);
      double inner = 0.0;
      for (int x = 0; x < P.size(); ++x)
        if (!std::binary_search(A.begin(), A.end(), x) && !std::binary_search(B.begin(), B.end(), x))
          inner = std::max(inner, std::abs(divergence(u, x)));
      out.record("unit_flow_interior", inner, 1e-10);
    }
    const Vec f = random_function(P.size(), rng);
    const Flow ps = flow_from_function(edges, f, FlowKind::Psi);
    const Flow mix = 0.5 * (flow_from_function(edges, f, FlowKind::Phi) + flow_from_function(edges, f, FlowKind::PhiStar));
    double d = 0.0;
    for (std::size_t i = 0; i < ps.value.size(); ++i) d = std::max(d, std::abs(ps.value[i] - mix.value[i]));
    out.record("psi_is_mean_of_phi", d, 1e-12);
    out.record("psi_norm_is_dirichlet", rel(flow_norm_sq(ps), dirichlet_form(P, f)), 1e-10);
  }
  return out.take();
}

std::vector<Check> suite_variational(int trials, std::uint64_t seed) {
  Ledger out;
  const int chains = std::max(1, trials / 10);
  for (int t = 0; t < chains; ++t) {
    const auto [P, sets] = random_instance(t, seed);
    for (const auto& pc : verify_principles(P, sets.A, sets.B, trials, seed + static_cast<std::uint64_t>(t))) {
      out.record(pc.name + "_bound_violation", std::max(0.0, -pc.worst_margin), 1e-9);
      out.record(pc.name + "_optimizer", pc.optimizer_residual, 1e-9);
    }
  }
  return out.take();
}

std::vector<Check> suite_collapse(int trials, std::uint64_t seed) {
  Ledger out;
  const int chains = std::max(1, trials / 10);
  for (int t = 0; t < chains; ++t) {
    CounterRng rng(seed ^ 0xC011ULL, static_cast<std::uint64_t>(t));
    const int n = 6 + static_cast<int>(rng.below(7));
    const MarkovProcess P = random_chain(n, t % 2 == 0, rng);
    // E: two or three states, A: one other state.
    const int e_size = 2 + static_cast<int>(rng.below(2));
    StateSet E, A;
    for (int i = 0; i < e_size; ++i) E.push_back(i);
    A.push_back(n - 1);
    const CollapseReport r = verify_collapse_identities(P, E, A, trials, seed + static_cast<std::uint64_t>(t));
    out.record("collapsed_capacity", r.cap_rel_err, 1e-10);
    out.record("collapsed_measure", r.measure_residual, 1e-12);
    out.record("flow_norm_contraction", std::max(0.0, r.max_norm_ratio - 1.0), 1e-12);
    out.record("eqcon_norm_equality", r.eqcon_rel_err, 1e-12);
    out.record("collapsed_divergence", r.divergence_err, 1e-12);
    out.record("collapsed_phi_commutes", r.phi_commute_err, 1e-12);
    out.record("collapsed_dirichlet", r.dirichlet_rel_err, 1e-11);
    out.record("collapsed_bilinear", r.bilinear_rel_err, 1e-11);
    out.record("reversibility_inherited", r.reversibility_inherited ? 0.0 : 1.0, 0.0);
  }
  return out.take();
}

}  // namespace

nlohmann::json to_json(const Check& c) {
  return {{"name", c.name}, {"metric", c.metric}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"core", "potential", "flows", "variational", "collapse"};
  return names;
}

std::vector<Check> run_suite(const std::string& suite, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be positive");
  if (suite == "core") return suite_core(trials, seed);
  if (suite == "potential") return suite_potential(trials, seed);
  if (suite == "flows") return suite_flows(trials, seed);
  if (suite == "variational") return suite_variational(trials, seed);
  if (suite == "collapse") return suite_collapse(trials, seed);
  throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "'");
}

}  // namespace mpt
