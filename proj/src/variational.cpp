#include "mpt/variational.hpp"

#include <algorithm>
#include <cmath>

#include "mpt/errors.hpp"
#include "mpt/potential.hpp"
#include "mpt/random_chains.hpp"
#include "mpt/rng.hpp"

namespace mpt {

namespace {

void require_reversible(const MarkovProcess& P) {
  if (!is_reversible(P, 1e-10)) throw Error(ErrorKind::NotReversible, "principle requires a reversible process");
}

double weighted_div(const Vec& h, const Flow& phi) {
  const Vec d = divergence_all(phi);
  double s = 0.0;
  for (std::size_t x = 0; x < d.size(); ++x) s += h[x] * d[x];
  return s;
}

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

void check_function_class(const Vec& f, const StateSet& A, const StateSet& B, double a, double b) {
  for (int x : A)
    if (f[x] != a) throw Error(ErrorKind::InfeasibleFunction, "function differs from its boundary value on A");
  for (int x : B)
    if (f[x] != b) throw Error(ErrorKind::InfeasibleFunction, "function differs from its boundary value on B");
}

void check_flow_class(const Flow& phi, const StateSet& A, const StateSet& B, double a, double tol) {
  const Vec d = divergence_all(phi);
  std::vector<char> fixed(d.size(), 0);
  double da = 0.0, db = 0.0;
  for (int x : A) {
    fixed[x] = 1;
    da += d[x];
  }
  for (int x : B) {
    fixed[x] = 1;
    db += d[x];
  }
  const double scale = std::max(1.0, std::abs(a));
  for (std::size_t x = 0; x < d.size(); ++x)
    if (!fixed[x] && std::abs(d[x]) > tol * scale)
      throw Error(ErrorKind::InfeasibleFlow, "flow has divergence off A and B");
  if (std::abs(da - a) > tol * scale || std::abs(db + a) > tol * scale)
    throw Error(ErrorKind::InfeasibleFlow, "flow does not carry the declared mass from A to B");
}

double dirichlet_value_rev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Vec& f) {
  require_reversible(P);
  check_function_class(f, A, B, 1.0, 0.0);
  return dirichlet_form(P, f);
}

double thomson_value_rev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Flow& phi) {
  require_reversible(P);
  check_flow_class(phi, A, B, 1.0);
  return 1.0 / flow_norm_sq(phi);
}

double dirichlet_value_nonrev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Vec& f,
                              const Flow& phi) {
  check_function_class(f, A, B, 1.0, 0.0);
  check_flow_class(phi, A, B, 0.0);
  (void)P;
  return flow_norm_sq(flow_from_function(phi.edges, f, FlowKind::Phi) - phi);
}

double thomson_value_nonrev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Vec& g,
                            const Flow& psi) {
  check_function_class(g, A, B, 0.0, 0.0);
  check_flow_class(psi, A, B, 1.0);
  (void)P;
  return 1.0 / flow_norm_sq(flow_from_function(psi.edges, g, FlowKind::Phi) - psi);
}

double gen_thomson_rev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Flow& phi) {
  require_reversible(P);
  const double n2 = flow_norm_sq(phi);
  if (!(n2 > 0.0)) throw Error(ErrorKind::ZeroNormFlow, "flow has zero norm");
  const double s = weighted_div(equilibrium_potential(P, A, B), phi);
  return s * s / n2;
}

double gen_dirichlet_nonrev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Vec& f,
                            const Flow& phi) {
  check_function_class(f, A, B, 1.0, 0.0);
  const Vec h = equilibrium_potential(P, A, B);
  return flow_norm_sq(flow_from_function(phi.edges, f, FlowKind::Phi) - phi) - 2.0 * weighted_div(h, phi);
}

double gen_thomson_nonrev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Vec& g,
                          const Flow& psi) {
  check_function_class(g, A, B, 0.0, 0.0);
  const double n2 = flow_norm_sq(flow_from_function(psi.edges, g, FlowKind::Phi) - psi);
  if (!(n2 > 0.0)) throw Error(ErrorKind::ZeroNormFlow, "denominator flow has zero norm");
  const double s = weighted_div(equilibrium_potential(P, A, B), psi);
  return s * s / n2;
}

Optimizers principle_optimizers(const MarkovProcess& P, std::shared_ptr<const EdgeSet> edges, const StateSet& A,
                            const StateSet& B) {
  Optimizers o{0.0, {}, {}, Flow(edges), {}, Flow(edges), {}, Flow(edges)};
  o.h = equilibrium_potential(P, A, B);
  o.h_adj = equilibrium_potential(P, A, B, Variant::Adjoint);
  o.cap = capacity(P, A, B).value;
  if (!(o.cap > 0.0)) throw Error(ErrorKind::ZeroCapacity, "capacity vanishes");
  const int n = P.size();
  o.psi_ab = (-1.0 / o.cap) * flow_from_function(edges, o.h, FlowKind::Psi);
  const Flow phi_hd = flow_from_function(edges, o.h_adj, FlowKind::Phi);
  const Flow phis_h = flow_from_function(edges, o.h, FlowKind::PhiStar);
  o.dpo_f.resize(n);
  o.tpo_g.resize(n);
  for (int x = 0; x < n; ++x) {
    o.dpo_f[x] = 0.5 * (o.h[x] + o.h_adj[x]);
    o.tpo_g[x] = (o.h[x] - o.h_adj[x]) / (2.0 * o.cap);
  }
  // boundary values are exact by construction; remove solver round-off
  for (int x : A) {
    o.dpo_f[x] = 1.0;
    o.tpo_g[x] = 0.0;
  }
  for (int x : B) {
    o.dpo_f[x] = 0.0;
    o.tpo_g[x] = 0.0;
  }
  o.dpo_phi = 0.5 * (phi_hd - phis_h);
  o.tpo_psi = (-1.0 / (2.0 * o.cap)) * (phi_hd + phis_h);
  return o;
}

double estimate_sector_constant(const MarkovProcess& P, int samples, std::uint64_t seed) {
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const Vec f = random_function(P.size(), rng);
    const Vec g = i == 0 ? f : random_function(P.size(), rng);
    const double df = dirichlet_form(P, f), dg = dirichlet_form(P, g);
    if (!(df > 0.0) || !(dg > 0.0)) continue;
    Vec Lg = apply_generator(P, g);
    for (double& v : Lg) v = -v;
    const double ip = inner_product_mu(P, f, Lg);
    best = std::max(best, ip * ip / (df * dg));
  }
  return best;
}

Sandwich capacity_sandwich(const MarkovProcess& P, const StateSet& A, const StateSet& B, double C0) {
  Sandwich s;
  s.cap = capacity(P, A, B).value;
  s.cap_s = capacity(symmetrize(P), A, B).value;
  s.holds = s.cap_s - 1e-10 <= s.cap && s.cap <= C0 * s.cap_s + 1e-10;
  return s;
}

std::vector<PrincipleCheck> verify_principles(const MarkovProcess& P, const StateSet& A, const StateSet& B,
                                              int trials, std::uint64_t seed, double bound_tol,
                                              double attain_tol) {
  const auto edges = build_edges(P);
  const Optimizers o = principle_optimizers(P, edges, A, B);
  const double cap = o.cap;
  const int n = P.size();
  const bool rev = is_reversible(P, 1e-10);
  const Flow phi_ab = unit_flow(P, edges, A, B, UnitFlowKind::Phi);
  const Flow phis_ab = unit_flow(P, edges, A, B, UnitFlowKind::PhiStar);
  const double flow_scale = max_abs(o.psi_ab.value);
  const double gen_scale = max_abs(flow_from_function(edges, o.h, FlowKind::Phi).value) + 1e-300;

  std::vector<PrincipleCheck> out;
  // lower: value should be >= cap (Dirichlet type); otherwise <= cap
  auto run = [&](const std::string& name, bool lower, auto&& sample, std::vector<double> at_optimum) {
    PrincipleCheck pc;
    pc.name = name;
    pc.trials = trials;
    pc.worst_margin = INFINITY;
    for (int t = 0; t < trials; ++t) {
      CounterRng rng(seed, static_cast<std::uint64_t>(t) + (out.size() << 20));
      const double v = sample(rng);
      const double margin = (lower ? v - cap : cap - v) / cap;
      pc.worst_margin = std::min(pc.worst_margin, margin);
    }
    for (double v : at_optimum) pc.optimizer_residual = std::max(pc.optimizer_residual, std::abs(v - cap) / cap);
    pc.pass = pc.worst_margin >= -bound_tol && pc.optimizer_residual <= attain_tol;
    out.push_back(pc);
  };

  if (rev) {
    run("dirichlet_rev", true,
        [&](CounterRng& rng) { return dirichlet_value_rev(P, A, B, random_feasible_function(n, A, B, 1, 0, rng)); },
        {dirichlet_value_rev(P, A, B, [&] {
          Vec h = o.h;
          for (int x : A) h[x] = 1.0;
          for (int x : B) h[x] = 0.0;
          return h;
        }())});
    run("thomson_rev", false,
        [&](CounterRng& rng) {
          return thomson_value_rev(P, A, B, o.psi_ab + random_circulation(edges, rng, flow_scale));
        },
        {thomson_value_rev(P, A, B, o.psi_ab)});
    const Flow psi_h = flow_from_function(edges, o.h, FlowKind::Psi);
    run("gen_thomson_rev", false,
        [&](CounterRng& rng) { return gen_thomson_rev(P, A, B, random_flow(edges, rng, gen_scale)); },
        {gen_thomson_rev(P, A, B, psi_h), gen_thomson_rev(P, A, B, 2.0 * psi_h)});
  }
  run("dirichlet_nonrev", true,
      [&](CounterRng& rng) {
        const Vec f = random_feasible_function(n, A, B, 1, 0, rng);
        const double t = rng.uniform(-2.0, 2.0);
        const Flow phi = random_circulation(edges, rng, gen_scale) + t * (phi_ab - phis_ab);
        return dirichlet_value_nonrev(P, A, B, f, phi);
      },
      {dirichlet_value_nonrev(P, A, B, o.dpo_f, o.dpo_phi)});
  run("thomson_nonrev", false,
      [&](CounterRng& rng) {
        Vec g = random_feasible_function(n, A, B, 0, 0, rng);
        for (double& v : g) v /= cap;
        const double t = rng.uniform(-2.0, 2.0);
        const Flow psi = phis_ab + random_circulation(edges, rng, flow_scale) + t * (phi_ab - phis_ab);
        return thomson_value_nonrev(P, A, B, g, psi);
      },
      {thomson_value_nonrev(P, A, B, o.tpo_g, o.tpo_psi)});
  run("gen_dirichlet_nonrev", true,
      [&](CounterRng& rng) {
        const Vec f = random_feasible_function(n, A, B, 1, 0, rng);
        return gen_dirichlet_nonrev(P, A, B, f, random_flow(edges, rng, gen_scale));
      },
      {gen_dirichlet_nonrev(P, A, B, o.dpo_f, o.dpo_phi)});
  run("gen_thomson_nonrev", false,
      [&](CounterRng& rng) {
        Vec g = random_feasible_function(n, A, B, 0, 0, rng);
        for (double& v : g) v /= cap;
        return gen_thomson_nonrev(P, A, B, g, random_flow(edges, rng, flow_scale));
      },
      [&] {
        Vec g3 = o.tpo_g;
        for (double& v : g3) v *= 3.0;
        return std::vector<double>{gen_thomson_nonrev(P, A, B, g3, 3.0 * o.tpo_psi)};
      }());
  return out;
}

}  // namespace mpt
