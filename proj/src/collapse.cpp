#include "mpt/collapse.hpp"

#include <algorithm>
#include <cmath>

#include "mpt/errors.hpp"
#include "mpt/potential.hpp"
#include "mpt/random_chains.hpp"
#include "mpt/variational.hpp"

namespace mpt {

CollapsedProcess collapse_process(const MarkovProcess& P, const StateSet& E) {
  const int n = P.size();
  if (E.empty()) throw Error(ErrorKind::EmptyCollapseSet, "collapse set is empty");
  const auto inE = to_mask(n, E);
  int count = 0;
  for (char c : inE) count += c;
  if (count == n) throw Error(ErrorKind::FullCollapseSet, "collapse set covers every state");

  StateSet collapsed;
  std::vector<int> state_map(n, -1), base_index;
  std::vector<std::string> ids;
  for (int x = 0; x < n; ++x)
    if (inE[x]) {
      collapsed.push_back(x);
    } else {
      state_map[x] = static_cast<int>(ids.size());
      base_index.push_back(x);
      ids.push_back(P.state(x));
    }
  std::string name = "<collapsed>";
  while (P.has_state(name)) name += "'";
  const int e_index = static_cast<int>(ids.size());
  ids.push_back(name);
  base_index.push_back(-1);
  for (int z : collapsed) state_map[z] = e_index;

  const auto& mu = P.measure();
  double muE = 0.0;
  for (int z : collapsed) muE += mu[z];
  std::vector<Transition> rates;
  for (const auto& t : P.transitions()) {
    const bool a = inE[t.from], b = inE[t.to];
    if (a && b) continue;
    const double r = a ? mu[t.from] * t.rate / muE : t.rate;
    rates.push_back({state_map[t.from], state_map[t.to], r});
  }
  Vec mubar(ids.size());
  for (int x = 0; x < n; ++x)
    if (!inE[x]) mubar[state_map[x]] = mu[x];
  mubar[e_index] = muE;
  return CollapsedProcess{MarkovProcess(std::move(ids), rates, mubar), std::move(collapsed), e_index,
                          std::move(state_map), std::move(base_index)};
}

StateSet collapse_set(const CollapsedProcess& C, const StateSet& S) {
  StateSet out;
  for (int x : S) out.push_back(C.state_map[x]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Flow collapse_flow(const CollapsedProcess& C, std::shared_ptr<const EdgeSet> collapsed_edges, const Flow& phi) {
  Flow out(collapsed_edges);
  for (std::size_t i = 0; i < phi.value.size(); ++i) {
    const auto& e = phi.edges->edges[i];
    const int a = C.state_map[e.lo], b = C.state_map[e.hi];
    if (a == b) continue;
    const int id = collapsed_edges->find(a, b);
    if (id < 0) throw Error(ErrorKind::InvalidArgument, "collapsed edge missing");
    out.value[id] += collapsed_edges->edges[id].lo == a ? phi.value[i] : -phi.value[i];
  }
  return out;
}

Vec collapse_function(const CollapsedProcess& C, const Vec& f) {
  const double v = f[C.collapsed.front()];
  for (int z : C.collapsed)
    if (f[z] != v) throw Error(ErrorKind::NonConstantOnCollapseSet, "function is not constant on the collapse set");
  Vec out(C.process.size());
  for (std::size_t x = 0; x < C.base_index.size(); ++x) out[x] = C.base_index[x] < 0 ? v : f[C.base_index[x]];
  return out;
}

bool CollapseReport::pass(double cap_tol, double form_tol) const {
  return cap_rel_err <= cap_tol && measure_residual <= 1e-12 && max_norm_ratio <= 1.0 + 1e-12 &&
         eqcon_rel_err <= 1e-12 && divergence_err <= 1e-12 && phi_commute_err <= 1e-12 &&
         dirichlet_rel_err <= form_tol && bilinear_rel_err <= form_tol && reversibility_inherited;
}

CollapseReport verify_collapse_identities(const MarkovProcess& P, const StateSet& E, const StateSet& A,
                                          int trials, std::uint64_t seed, int sector_samples) {
  const int n = P.size();
  const CollapsedProcess C = collapse_process(P, E);
  const MarkovProcess& Q = C.process;
  CollapseReport rep;
  rep.measure_residual = stationarity_residual(Q, Q.measure());
  rep.cap = capacity(P, E, A).value;
  rep.cap_collapsed = capacity(Q, {C.e_index}, collapse_set(C, A)).value;
  rep.cap_rel_err = std::abs(rep.cap_collapsed - rep.cap) / rep.cap;
  rep.reversibility_inherited = !is_reversible(P) || is_reversible(Q);

  const auto edges = build_edges(P);
  const auto cedges = build_edges(Q);
  const auto inE = to_mask(n, E);
  auto e_constant = [&](CounterRng& rng) {
    Vec f = random_function(n, rng);
    const double v = rng.uniform(-1.0, 1.0);
    for (int z : E) f[z] = v;
    return f;
  };
  rep.flow_trials = trials;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(seed, static_cast<std::uint64_t>(t));
    const Flow phi = random_flow(edges, rng);
    const Flow bar = collapse_flow(C, cedges, phi);
    const double ratio = flow_norm_sq(bar) / flow_norm_sq(phi);
    rep.max_norm_ratio = std::max(rep.max_norm_ratio, ratio);
    if (ratio < 1.0 - 1e-12) ++rep.strict_contractions;

    const Vec d = divergence_all(phi), dbar = divergence_all(bar);
    double dE = 0.0, err = 0.0, scale = 1.0;
    for (int x = 0; x < n; ++x) {
      scale = std::max(scale, std::abs(d[x]));
      if (inE[x])
        dE += d[x];
      else
        err = std::max(err, std::abs(dbar[C.state_map[x]] - d[x]));
    }
    err = std::max(err, std::abs(dbar[C.e_index] - dE));
    rep.divergence_err = std::max(rep.divergence_err, err / scale);

    const Vec f = e_constant(rng), g = e_constant(rng);
    const Vec fb = collapse_function(C, f), gb = collapse_function(C, g);
    const Flow psi = flow_from_function(edges, f, FlowKind::Psi);
    const double n2 = flow_norm_sq(psi);
    rep.eqcon_rel_err =
        std::max(rep.eqcon_rel_err, std::abs(flow_norm_sq(collapse_flow(C, cedges, psi)) - n2) / n2);
    for (FlowKind kind : {FlowKind::Phi, FlowKind::PhiStar, FlowKind::Psi}) {
      const Flow a = collapse_flow(C, cedges, flow_from_function(edges, f, kind));
      const Flow b = flow_from_function(cedges, fb, kind);
      for (std::size_t i = 0; i < a.value.size(); ++i)
        rep.phi_commute_err = std::max(rep.phi_commute_err, std::abs(a.value[i] - b.value[i]));
    }
    const double D = dirichlet_form(P, f);
    rep.dirichlet_rel_err = std::max(rep.dirichlet_rel_err, std::abs(dirichlet_form(Q, fb) - D) / D);
    Vec Lf = apply_generator(P, f), Lfb = apply_generator(Q, fb);
    const double ip = -inner_product_mu(P, g, Lf);
    const double ipb = -inner_product_mu(Q, gb, Lfb);
    const double s = std::sqrt(dirichlet_form(P, f) * dirichlet_form(P, g));
    rep.bilinear_rel_err = std::max(rep.bilinear_rel_err, std::abs(ipb - ip) / s);
  }
  if (sector_samples > 0) rep.sector_ratio_max = estimate_sector_constant(Q, sector_samples, seed ^ 0x5EC7);
  return rep;
}

}  // namespace mpt
