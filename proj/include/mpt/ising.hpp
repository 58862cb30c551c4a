#ifndef MPT_ISING_HPP
#define MPT_ISING_HPP

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "mpt/markov.hpp"
#include "mpt/rng.hpp"

namespace mpt {

// Bit s of a configuration is 1 when site s carries spin +. Site s = l*K + k
// for column k in T_K and row l in T_L.
using Spins = std::uint64_t;
// Sorted, duplicate-free list of configurations.
using ConfigSet = std::vector<Spins>;

bool contains(const ConfigSet& set, Spins s);
ConfigSet set_union(const ConfigSet& a, const ConfigSet& b);
ConfigSet set_intersection(const ConfigSet& a, const ConfigSet& b);
ConfigSet set_difference(const ConfigSet& a, const ConfigSet& b);

class IsingLattice {
 public:
  // Throws InvalidArgument unless K, L >= 2 and K*L <= 64.
  IsingLattice(int K, int L);

  int K() const { return K_; }
  int L() const { return L_; }
  int sites() const { return K_ * L_; }
  int site(int k, int l) const;
  Spins all_plus() const { return full_; }
  Spins all_minus() const { return 0; }
  // Gamma = 2K + 2 (the barrier for 5 <= K <= L).
  int gamma() const { return 2 * K_ + 2; }
  bool assumptions_ok() const { return K_ >= 5 && K_ <= L_; }

  int hamiltonian(Spins s) const;
  int flip_delta(Spins s, int x) const;
  const std::vector<int>& neighbors(int x) const { return nbr_[x]; }
  const std::vector<std::pair<int, int>>& bonds() const { return bonds_; }

 private:
  int K_, L_;
  Spins full_;
  std::vector<std::vector<int>> nbr_;
  std::vector<std::pair<int, int>> bonds_;
};

// e^{-beta (H(s) - offset)}
double gibbs_weight(const IsingLattice& lat, Spins s, double beta, int offset = 0);
// Transfer matrix over rows; requires K <= 10.
double partition_function(const IsingLattice& lat, double beta);
// Direct sum over all 2^{KL} configurations; throws StateSpaceTooLarge when KL > 24.
double partition_function_enumerated(const IsingLattice& lat, double beta);
// c_beta(s, t) = e^{-beta [H(t) - H(s)]_+} when t = s^x, else 0.
double metropolis_rate(const IsingLattice& lat, Spins s, Spins t, double beta);

struct BarrierResult {
  int value = 0;
  std::size_t expanded = 0;
};
// Bottleneck (min over paths of max H) search. Throws CapExceeded if no path
// stays below `cap`, BudgetExceeded past `budget` expansions. cap < 0 uses
// max(H(from), H(to), Gamma).
BarrierResult communication_height(const IsingLattice& lat, Spins from, Spins to, int cap = -1,
                                   std::size_t budget = 5'000'000);
// Union-find over all configurations by increasing energy; KL <= 24.
int exhaustive_barrier(const IsingLattice& lat, Spins from, Spins to);

// Canonical configurations.
Spins zeta(const IsingLattice& lat, int l, int v);
Spins zeta_up(const IsingLattice& lat, int l, int v, int k, int h);
Spins zeta_down(const IsingLattice& lat, int l, int v, int k, int h);
ConfigSet canonical_R(const IsingLattice& lat, int v);
ConfigSet canonical_Q(const IsingLattice& lat, int v);
ConfigSet canonical_C(const IsingLattice& lat);

// rows: order in which rows are filled (an increasing sequence of intervals of
// T_L); cols[i]: order of columns within the i-th row (intervals of T_K).
// Throws InvalidArgument otherwise.
std::vector<Spins> canonical_path(const IsingLattice& lat, const std::vector<int>& rows,
                                  const std::vector<std::vector<int>>& cols);
std::vector<Spins> random_canonical_path(const IsingLattice& lat, CounterRng& rng);

// Configurations joined to a seed by a path with H <= level avoiding
// `forbidden`. Seeds above level or inside forbidden contribute nothing.
// Throws FrontierExplosion when more than `budget` configurations are found.
ConfigSet neighborhood(const IsingLattice& lat, const ConfigSet& seeds, int level,
                       const ConfigSet& forbidden = {}, std::size_t budget = 5'000'000);

// Graph and chain Z^- (sign < 0, around the all-minus state) or Z^+.
struct EdgeChain {
  int sign = -1;
  std::vector<Spins> vertices;             // ground state first, then R_2 or R_{L-2}, then O
  std::unordered_map<Spins, int> index;    // vertex -> index
  std::unordered_map<Spins, int> rep;      // every edge-typical configuration -> its vertex
  std::unique_ptr<MarkovProcess> Z;
  Vec h;                                   // equilibrium potential between ground and R
  double cap = 0.0;                        // cap(ground, R) with uniform measure
  double e = 0.0;                          // 1 / (|V| cap)
  // For each O-I edge: (sigma1 index, sigma2 index, xi in N(sigma2) adjacent to sigma1).
  struct Crossing {
    int o, i;
    Spins xi;
  };
  std::vector<Crossing> crossings;
  std::vector<std::pair<int, int>> oo_edges;
  std::size_t O_size = 0;
};

struct TypicalStructure {
  int K = 0, L = 0, Gamma = 0;
  ConfigSet B, B_Gamma, E_minus, E_plus, O_minus, O_plus, I_minus, I_plus;
  ConfigSet N_minus, N_plus;  // N(all-minus), N(all-plus)
  ConfigSet N_hat_S;
  std::unordered_map<Spins, std::pair<int, int>> bulk_label;  // B -> (v, h); h = 0 on R_v
  EdgeChain minus, plus;
  double b = 0.0, e = 0.0, kappa = 0.0;

  struct Invariants {
    bool E_disjoint = false;         // E+ and E- disjoint
    bool E_minus_cap_B = false;      // = R_2
    bool E_plus_cap_B = false;       // = R_{L-2}
    bool E_cup_B = false;            // = N_hat(S)
    bool I_minus_form = false;       // = N(-) u R_2
    bool I_plus_form = false;        // = N(+) u R_{L-2}
    bool R_singletons = false;       // N(sigma) = {sigma} on R_v, v in [2, L-2]
    bool low_energy = false;         // H < Gamma implies R_v or N(S)
    bool N_hat_equal = false;        // N_hat(+) = N_hat(-)
    bool N_disjoint = false;         // N(+) and N(-) disjoint
    bool set_lemma = false;          // N_hat(S) = N_hat(-;+) u N_hat(+;-)
    bool e_symmetric = false;        // e from Z^- equals e from Z^+
    bool all() const;
  } invariants;
};

// Requires K < L (DimensionOrder otherwise), K >= 3 and L >= 6. Set identities
// are only asserted when assumptions_ok().
TypicalStructure typical_structure(const IsingLattice& lat, std::size_t budget = 5'000'000);

double f0_value(const TypicalStructure& S, Spins s);

struct F0Report {
  double beta = 0.0;
  double scaled = 0.0;  // e^{Gamma beta} 2 kappa D(f0)
  double Z = 0.0;
  bool feasible = false;    // f0(-) = 1, f0(+) = 0
  bool in_unit_interval = false;
  double r2_consistency = 0.0;  // |edge formula - bulk formula| on R_2 and R_{L-2}
};
F0Report dirichlet_of_f0(const TypicalStructure& S, const IsingLattice& lat, double beta);

// Antisymmetric flow keyed by (lower configuration, flipped site).
struct IsingFlow {
  std::unordered_map<std::uint64_t, double> value;
  void add(Spins from, Spins to, double v);
  double at(Spins from, Spins to) const;
};
IsingFlow test_flow_psi0(const TypicalStructure& S, const IsingLattice& lat);

struct FlowReport {
  double beta = 0.0;
  double scaled_norm = 0.0;     // e^{-Gamma beta} ||psi0||^2 / (2 kappa)
  double div_minus = 0.0;       // sum of div over N(-)
  double div_plus = 0.0;        // sum of div over N(+)
  double max_div_elsewhere = 0.0;
  double bulk_unit = 0.0;       // value on an interior bulk edge
  std::size_t edges = 0;
};
FlowReport flow_checks(const TypicalStructure& S, const IsingLattice& lat, const IsingFlow& psi, double beta);

struct RateApproxRow {
  double beta = 0.0;
  double scaled_dev = 0.0;  // max deviation times e^{(Gamma+2) beta}
  double oo_dev = 0.0;      // adjacent O pair, unscaled
};
std::vector<RateApproxRow> rate_approximation_check(const TypicalStructure& S, const IsingLattice& lat,
                                                    const std::vector<double>& betas);

struct SmallLatticeRow {
  double beta = 0.0;
  double cap = 0.0;
  double cap_reverse = 0.0;
  double cap_escape = 0.0;
  double max_h_near_plus = 0.0;   // max of h_{-,+} on N(+)
  double min_h_near_minus = 0.0;  // min of h_{-,+} on N(-)
  double Z = 0.0;
  double mu_plus = 0.0;
};
struct SmallLatticeReport {
  int K = 0, L = 0;
  int barrier = 0;        // exhaustive
  std::vector<SmallLatticeRow> rows;
  double log_slope = 0.0;  // -d log cap / d beta at the largest beta pair
};
// Full chain on 2^{KL} states; throws StateSpaceTooLarge when KL > 20.
SmallLatticeReport exact_small_lattice(const IsingLattice& lat, const std::vector<double>& betas);
MarkovProcess full_chain(const IsingLattice& lat, double beta);

struct BridgeCensus {
  int plus_bridges = 0;
  int minus_bridges = 0;
  std::vector<int> row_energy;  // H_{r_l}
  std::vector<int> col_energy;  // H_{c_k}
  int lower_bound = 0;          // 2 (K + L - B+ - B-)
};
BridgeCensus bridge_census(const IsingLattice& lat, Spins s);

}  // namespace mpt

#endif
