#ifndef MPT_MARKOV_HPP
#define MPT_MARKOV_HPP

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace mpt {

using Vec = std::vector<double>;
using Measure = Vec;
using PotentialFunction = Vec;
using StateSet = std::vector<int>;

struct Transition {
  int from;
  int to;
  double rate;
};

// Finite-state continuous-time Markov process. Rates are stored row-wise
// (CSR) with targets sorted by index. The invariant measure and holding
// rates are computed once at construction; the object is immutable after.
class MarkovProcess {
 public:
  // Duplicate (from, to) entries are summed; zero rates are dropped.
  // If known_measure is given it is normalized and verified by residual
  // instead of being solved for.
  MarkovProcess(std::vector<std::string> states, const std::vector<Transition>& rates,
                std::optional<Vec> known_measure = std::nullopt);

  int size() const { return static_cast<int>(ids_.size()); }
  const std::string& state(int i) const { return ids_[i]; }
  const std::vector<std::string>& states() const { return ids_; }
  int index(const std::string& id) const;
  bool has_state(const std::string& id) const { return lookup_.count(id) > 0; }

  std::span<const int> targets(int x) const {
    return {cols_.data() + offsets_[x], cols_.data() + offsets_[x + 1]};
  }
  std::span<const double> rates(int x) const {
    return {vals_.data() + offsets_[x], vals_.data() + offsets_[x + 1]};
  }
  double rate(int x, int y) const;
  std::vector<Transition> transitions() const;
  std::size_t transition_count() const { return cols_.size(); }

  const Vec& holding_rates() const { return lambda_; }
  const Vec& measure() const { return mu_; }
  // max_y |sum_x mu(x) r(x,y) - mu(y) lambda(y)| / (max lambda * max mu)
  double stationarity_residual() const { return residual_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> lookup_;
  std::vector<std::size_t> offsets_;
  std::vector<int> cols_;
  Vec vals_;
  Vec lambda_;
  Vec mu_;
  double residual_ = 0.0;
};

struct EmbeddedChain {
  std::vector<std::size_t> offsets;
  std::vector<int> cols;
  Vec probs;
  Measure M;  // lambda * mu

  std::span<const int> targets(int x) const {
    return {cols.data() + offsets[x], cols.data() + offsets[x + 1]};
  }
  std::span<const double> row(int x) const {
    return {probs.data() + offsets[x], probs.data() + offsets[x + 1]};
  }
};

MarkovProcess cycle_walk(int n, double p);

// Relative residual of mu Q = 0 for an arbitrary measure.
double stationarity_residual(const MarkovProcess& P, const Vec& mu);
const Measure& invariant_measure(const MarkovProcess& P);
bool is_reversible(const MarkovProcess& P, double tol = 1e-10);
MarkovProcess adjoint(const MarkovProcess& P);
MarkovProcess symmetrize(const MarkovProcess& P);
// adjoint = true gives p^dagger(x,y) = M(y) p(y,x) / M(x).
EmbeddedChain embedded_chain(const MarkovProcess& P, bool adjoint_chain = false);

Vec apply_generator(const MarkovProcess& P, const Vec& f);
double inner_product_mu(const MarkovProcess& P, const Vec& f, const Vec& g);
// Edge-sum form 1/2 sum mu(x) r(x,y) (f(y) - f(x))^2.
double dirichlet_form(const MarkovProcess& P, const Vec& f);
// <f, -Lf>_mu form.
double dirichlet_form_generator(const MarkovProcess& P, const Vec& f);

StateSet to_indices(const MarkovProcess& P, const std::vector<std::string>& ids);
std::vector<char> to_mask(int n, const StateSet& set);

nlohmann::json process_to_json(const MarkovProcess& P);
MarkovProcess process_from_json(const nlohmann::json& doc);

}  // namespace mpt

#endif
