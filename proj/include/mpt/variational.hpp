#ifndef MPT_VARIATIONAL_HPP
#define MPT_VARIATIONAL_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mpt/flows.hpp"
#include "mpt/markov.hpp"

namespace mpt {

// f in C_{a,b}(A,B): f == a on A and f == b on B, compared exactly.
void check_function_class(const Vec& f, const StateSet& A, const StateSet& B, double a, double b);
// phi in U_a(A,B): divergence-free off A and B, div(A) = a = -div(B).
void check_flow_class(const Flow& phi, const StateSet& A, const StateSet& B, double a, double tol = 1e-10);

double dirichlet_value_rev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Vec& f);
double thomson_value_rev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Flow& phi);
// ||Phi_f - phi||^2 with f in C_{1,0}, phi in U_0.
double dirichlet_value_nonrev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Vec& f,
                              const Flow& phi);
// 1 / ||Phi_g - psi||^2 with g in C_{0,0}, psi in U_1.
double thomson_value_nonrev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Vec& g,
                            const Flow& psi);
// [sum h div phi]^2 / ||phi||^2 with the true h_{A,B}.
double gen_thomson_rev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Flow& phi);
// ||Phi_f - phi||^2 - 2 sum h div phi, f in C_{1,0}, phi arbitrary.
double gen_dirichlet_nonrev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Vec& f,
                            const Flow& phi);
// [sum h div psi]^2 / ||Phi_g - psi||^2, g in C_{0,0}, psi arbitrary.
double gen_thomson_nonrev(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Vec& g,
                          const Flow& psi);

struct Optimizers {
  double cap = 0.0;
  Vec h;
  Vec h_adj;
  Flow psi_ab;   // -Psi_h / cap
  Vec dpo_f;     // (h + h^dagger) / 2
  Flow dpo_phi;  // (Phi_{h^dagger} - Phi*_h) / 2
  Vec tpo_g;     // (h - h^dagger) / (2 cap)
  Flow tpo_psi;  // -(Phi_{h^dagger} + Phi*_h) / (2 cap)
};
Optimizers principle_optimizers(const MarkovProcess& P, std::shared_ptr<const EdgeSet> edges, const StateSet& A,
                            const StateSet& B);

// max of <f,-Lg>^2 / (D(f) D(g)) over sampled pairs; sample 0 uses f = g.
// Sample i draws from stream i, so more samples never lower the value.
double estimate_sector_constant(const MarkovProcess& P, int samples, std::uint64_t seed);

struct Sandwich {
  double cap_s = 0.0;
  double cap = 0.0;
  bool holds = false;
};
Sandwich capacity_sandwich(const MarkovProcess& P, const StateSet& A, const StateSet& B, double C0);

struct PrincipleCheck {
  std::string name;
  int trials = 0;
  double worst_margin = 0.0;  // min over trials of the signed distance to the bound (>= 0 is correct)
  double optimizer_residual = 0.0;
  bool pass = false;
};
// Runs every principle on random feasible objects and at its optimizer.
std::vector<PrincipleCheck> verify_principles(const MarkovProcess& P, const StateSet& A, const StateSet& B,
                                              int trials, std::uint64_t seed, double bound_tol = 1e-9,
                                              double attain_tol = 1e-9);

}  // namespace mpt

#endif
