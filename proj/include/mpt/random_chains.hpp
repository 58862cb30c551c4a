#ifndef MPT_RANDOM_CHAINS_HPP
#define MPT_RANDOM_CHAINS_HPP

#include <memory>

#include "mpt/flows.hpp"
#include "mpt/markov.hpp"
#include "mpt/rng.hpp"

namespace mpt {

// Random irreducible chain on n states. Reversible chains come from random
// weights and symmetric conductances on a connected graph; non-reversible
// ones from a directed Hamiltonian cycle plus random extra edges.
MarkovProcess random_chain(int n, bool reversible, CounterRng& rng);

struct SetPair {
  StateSet A;
  StateSet B;
};
// Disjoint non-empty A, B leaving at least `free_states` states outside.
SetPair random_sets(int n, CounterRng& rng, int free_states = 1);

Vec random_function(int n, CounterRng& rng, double lo = -1.0, double hi = 1.0);
// Random function in C_{a,b}(A,B): a on A, b on B, random elsewhere.
Vec random_feasible_function(int n, const StateSet& A, const StateSet& B, double a, double b, CounterRng& rng);
// Random divergence-free flow from the fundamental cycles of a spanning tree.
Flow random_circulation(std::shared_ptr<const EdgeSet> edges, CounterRng& rng, double scale = 1.0);
Flow random_flow(std::shared_ptr<const EdgeSet> edges, CounterRng& rng, double scale = 1.0);

}  // namespace mpt

#endif
