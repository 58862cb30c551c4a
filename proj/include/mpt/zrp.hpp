#ifndef MPT_ZRP_HPP
#define MPT_ZRP_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "mpt/markov.hpp"

namespace mpt {

double zrp_a(int n, double alpha);
double zrp_g(int n, double alpha);

struct ZrpParams {
  int sites = 3;
  int N = 10;
  double alpha = 2.0;
  double p = 0.7;
  // l_N = max(1, floor(N^(width_fraction * theta))), theta = (1+a)/(1+(k-1)a)
  double width_fraction = 5.0 / 6.0;
  std::size_t budget = 200'000;
};

int valley_width(int N, int sites, double alpha, double width_fraction);

struct ZrpModel {
  ZrpParams params;
  std::vector<std::vector<int>> configs;  // lexicographic order of occupation vectors
  std::unique_ptr<MarkovProcess> process;
  Measure closed_form;                    // N^a / (Z_N a(eta))
  double Z_N = 0.0;
  double measure_rel_err = 0.0;           // solver vs closed form, max relative
  int ell = 0;
  std::vector<StateSet> valley;           // E_N^x
  StateSet delta;                         // Delta_N
  std::vector<int> condensate;            // index of xi_N^x (all particles at x)
  std::vector<int> valley_of;             // valley label per state, -1 on Delta

  int rank(const std::vector<int>& eta) const;
  const MarkovProcess& P() const { return *process; }
  StateSet valleys_union(const std::vector<int>& sites) const;
  StateSet complement_valleys(const std::vector<int>& excluded) const;
};

// Throws StateSpaceTooLarge, AlphaOutOfRange, ValleysOverlap.
ZrpModel build_zrp(const ZrpParams& params);
std::size_t zrp_state_count(int sites, int N);

// N^a sum_eta prod 1/a(eta_x), by convolution (no enumeration).
double zrp_partition_function(int sites, int N, double alpha);

struct LimitConstants {
  double Gamma = 0.0;     // 1 + sum_{n>=1} n^-a
  double I = 0.0;         // Beta(a+1, a+1)
  double I_quadrature = 0.0;
  double Z = 0.0;         // k Gamma^(k-1)
};
LimitConstants limit_constants(int sites, double alpha);

struct LimitChain {
  int sites = 0;
  std::vector<Vec> cap_X;  // underlying walk capacities cap_X(x, y)
  std::vector<Vec> a;      // a(x, y) = k cap_X(x,y) / (Gamma I)
  std::unique_ptr<MarkovProcess> Y;
  double cap_Y(const StateSet& A, const StateSet& B) const;
};
LimitChain limit_chain(int sites, double alpha, double p);

// Stochastic complement of P on E (Delta-excursions folded into rates).
struct TraceResult {
  std::unique_ptr<MarkovProcess> process;
  StateSet members;        // base indices, in trace index order
  double measure_err = 0.0;  // trace invariant measure vs conditioned mu
  double max_row_excess = 0.0;  // max_eta (sum_zeta j - lambda), should be <= 0
};
TraceResult trace_process(const MarkovProcess& P, const StateSet& E);

struct CapacityRow {
  int N = 0;
  int ell = 0;
  std::size_t states = 0;
  double cap = 0.0;
  double cap_s = 0.0;
  double scaled = 0.0;  // N^(1+a) cap
  double cap_Y = 0.0;
  double rel_err = 0.0;
  bool sandwich = false;
  double C0 = 0.0;
};
CapacityRow zrp_capacity_row(const ZrpModel& m, const LimitChain& Y, const std::vector<int>& A,
                             const std::vector<int>& B);

struct SectorCheck {
  int samples = 0;
  double max_ratio = 0.0;        // <g,-Lf>^2 / (D f D g)
  double worst_linear = 0.0;     // max of <g,-Lf> - D f - D g / p
  double bound = 0.0;            // 4 / p
  bool pass = false;
};
SectorCheck sector_check_zrp(const ZrpModel& m, int samples, std::uint64_t seed);

struct MeanJumpRates {
  std::vector<Vec> r;         // r_N(x, y)
  Vec lambda;                 // lambda_N(x) = sum_y r_N(x,y)
  Vec mu_valley;              // mu_N(E^x)
  double e610_err = 0.0;      // max relative error of lambda vs cap / mu(E^x)
  double e611_err = 0.0;      // max relative error of r/lambda vs collapsed potential
  double trace_measure_err = 0.0;
};
MeanJumpRates mean_jump_rates(const ZrpModel& m);
// max relative error of mu(E^x) r_N(x,y) vs the three-capacity formula.
double er1_error(const ZrpModel& m, const MeanJumpRates& rates);

struct ConditionsRow {
  int N = 0;
  int ell = 0;
  double H0_err = 0.0;     // max |N^(1+a) r_N(x,y) / a(x,y) - 1|
  double H1 = 0.0;         // sup cap(E^x, rest) / cap(eta, zeta) over eta, zeta in E^x
  double lemcap_const = 0.0;  // min cap(eta,zeta) * l^(a(k-1)+1)
  double H2 = 0.0;         // mu(Delta) / mu(E^x)
  double H3_hit = 0.0;     // max_eta 1 / (N^(1+a) cap(eta, xi^x))
  double H3_stat = 0.0;    // Z_N mu(Delta)
  double mu_valley_err = 0.0;  // |mu(E^x) - 1/k|
};
ConditionsRow martingale_conditions(const ZrpModel& m, const LimitChain& Y, const MeanJumpRates& rates);

// mu_N(eta) g(eta_u) = a_N mu_{N-1}(eta - omega^u); returns max relative error and a_N.
struct U1Check {
  double max_err = 0.0;
  double a_N = 0.0;
};
U1Check u1_check(const ZrpModel& m, const ZrpModel& m_prev);
// Dirichlet form vs its (N-1)-indexed rewriting, for the given f.
double edr_check(const ZrpModel& m, const ZrpModel& m_prev, const Vec& f);

struct OrderChainStats {
  int departures = 0;                 // transitions out of valley 0
  int transitions = 0;                // all valley-to-valley transitions
  std::vector<std::vector<int>> matrix;  // matrix[x][y]: observed x -> y transitions
  Vec expected_exact;                 // r_N(0,y) / lambda_N(0)
  Vec expected_limit;                 // cap_X(0,y) / sum_z cap_X(0,z)
  Vec z_exact;
  Vec z_limit;
  double mean_sojourn = 0.0;          // time in valley 0 before the next valley, scaled by N^(1+a)
  double mean_sojourn_stderr = 0.0;
  double limit_sojourn = 0.0;         // 1 / sum_y a(0,y)
  bool pass = false;                  // |z_exact| <= 3 for every y
};
// One trajectory from xi^0, run until `departures` transitions out of valley 0
// have been observed. Delta excursions count toward the sojourn.
OrderChainStats order_chain_statistics(const ZrpModel& m, const LimitChain& Y, const MeanJumpRates& rates,
                                       int departures, std::uint64_t seed);

}  // namespace mpt

#endif
