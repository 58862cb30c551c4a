#ifndef MPT_COLLAPSE_HPP
#define MPT_COLLAPSE_HPP

#include <cstdint>
#include <memory>

#include "mpt/flows.hpp"
#include "mpt/markov.hpp"

namespace mpt {

// Process with the set E contracted to one new state, appended last.
struct CollapsedProcess {
  MarkovProcess process;
  StateSet collapsed;           // E, base indices
  int e_index = -1;             // index of the new state in `process`
  std::vector<int> state_map;   // base index -> collapsed index
  std::vector<int> base_index;  // collapsed index -> base index, -1 for the new state
};

CollapsedProcess collapse_process(const MarkovProcess& P, const StateSet& E);
// Maps a base set into the collapsed index space (E members map to e_index).
StateSet collapse_set(const CollapsedProcess& C, const StateSet& S);

Flow collapse_flow(const CollapsedProcess& C, std::shared_ptr<const EdgeSet> collapsed_edges, const Flow& phi);
// Throws NonConstantOnCollapseSet unless f is exactly constant on E.
Vec collapse_function(const CollapsedProcess& C, const Vec& f);

struct CollapseReport {
  double cap = 0.0;
  double cap_collapsed = 0.0;
  double cap_rel_err = 0.0;
  double measure_residual = 0.0;     // stationarity of the collapsed measure
  double max_norm_ratio = 0.0;       // max ||phi_bar||^2 / ||phi||^2 over random flows
  int strict_contractions = 0;       // random flows with ratio < 1 - 1e-12
  int flow_trials = 0;
  double eqcon_rel_err = 0.0;        // | ||bar Psi_f||^2 - ||Psi_f||^2 | / ||Psi_f||^2, f constant on E
  double divergence_err = 0.0;       // div of collapsed flow vs div of the original
  double phi_commute_err = 0.0;      // collapse(Phi_f) vs Phi_bar of collapsed f
  double dirichlet_rel_err = 0.0;
  double bilinear_rel_err = 0.0;
  double sector_ratio_max = 0.0;     // sampled sector ratio on the collapsed chain
  bool reversibility_inherited = true;
  bool pass(double cap_tol = 1e-10, double form_tol = 1e-11) const;
};

// A must avoid E. Random objects use `seed`; sector_samples = 0 skips the
// sector sampling.
CollapseReport verify_collapse_identities(const MarkovProcess& P, const StateSet& E, const StateSet& A,
                                          int trials, std::uint64_t seed, int sector_samples = 0);

}  // namespace mpt

#endif
