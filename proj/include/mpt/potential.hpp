#ifndef MPT_POTENTIAL_HPP
#define MPT_POTENTIAL_HPP

#include <string>

#include "mpt/markov.hpp"

namespace mpt {

enum class Variant { Plain, Adjoint, Symmetrized };
enum class CapacityRoute { DirichletOfH, EscapeFormula };

const char* route_name(CapacityRoute route);

struct CapacityReport {
  double value = 0.0;
  CapacityRoute route = CapacityRoute::DirichletOfH;
  double residual = 0.0;
  StateSet A;
  StateSet B;
  // Escape route only: "dense-lu" or "sparse-lu".
  std::string solver;
};

nlohmann::json to_json(const MarkovProcess& P, const CapacityReport& rep);

// Throws EmptySet / OverlappingSets.
void check_disjoint(const MarkovProcess& P, const StateSet& A, const StateSet& B);

// h = 1 on A, 0 on B, harmonic elsewhere for the chosen variant.
PotentialFunction equilibrium_potential(const MarkovProcess& P, const StateSet& A, const StateSet& B,
                                        Variant variant = Variant::Plain);
// Harmonicity residual of h off A and B, relative to max holding rate.
double harmonic_residual(const MarkovProcess& P, const Vec& h, const StateSet& A, const StateSet& B);

CapacityReport capacity(const MarkovProcess& P, const StateSet& A, const StateSet& B);
// Escape probabilities P_x[tau_B < tau_A^+] for x in A, indexed like A.
Vec escape_probabilities(const MarkovProcess& P, const StateSet& A, const StateSet& B,
                         std::string* solver = nullptr);
CapacityReport capacity_via_escape(const MarkovProcess& P, const StateSet& A, const StateSet& B);

// Probability measure on the full state space supported on A.
Measure equilibrium_measure(const MarkovProcess& P, const StateSet& A, const StateSet& B,
                            Variant variant = Variant::Adjoint);

double mean_hitting_functional(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Vec& f);
double mean_hitting_time(const MarkovProcess& P, int z, const StateSet& B);
// Direct solve of (-L)u = 1 off B, u = 0 on B.
Vec expected_hitting_times(const MarkovProcess& P, const StateSet& B);
// Expected time spent at z before tau_B, as a function of the start.
Vec occupation_before_hitting(const MarkovProcess& P, int z, const StateSet& B);

struct PotentialBound {
  double bound = 0.0;
  double value = 0.0;  // h_{A,B}(x)
  bool holds = false;
};
PotentialBound potential_bound(const MarkovProcess& P, int x, const StateSet& A, const StateSet& B);

}  // namespace mpt

#endif
