#include "mpt/markov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mpt/errors.hpp"
#include "mpt/linalg.hpp"

namespace mpt {

namespace {

std::vector<char> reach(int n, const std::vector<std::vector<int>>& adj) {
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int y : adj[x])
      if (!seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
  }
  return seen;
}

}  // namespace

MarkovProcess::MarkovProcess(std::vector<std::string> states, const std::vector<Transition>& rates,
                             std::optional<Vec> known_measure)
    : ids_(std::move(states)) {
  const int n = size();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "empty state set");
  for (int i = 0; i < n; ++i)
    if (!lookup_.emplace(ids_[i], i).second)
      throw Error(ErrorKind::DuplicateState, "state '" + ids_[i] + "' listed twice");

  std::vector<std::map<int, double>> rows(n);
  for (const auto& t : rates) {
    if (t.from < 0 || t.from >= n || t.to < 0 || t.to >= n)
      throw Error(ErrorKind::UnknownState, "transition endpoint out of range");
    if (!std::isfinite(t.rate)) throw Error(ErrorKind::InvalidRate, "non-finite rate");
    if (t.rate < 0.0) throw Error(ErrorKind::NegativeRate, "negative rate " + std::to_string(t.rate));
    if (t.rate == 0.0) continue;
    if (t.from == t.to) throw Error(ErrorKind::InvalidRate, "nonzero diagonal rate at " + ids_[t.from]);
    rows[t.from][t.to] += t.rate;
  }

  offsets_.assign(n + 1, 0);
  lambda_.assign(n, 0.0);
  for (int x = 0; x < n; ++x) {
    for (const auto& [y, r] : rows[x]) {
      cols_.push_back(y);
      vals_.push_back(r);
      lambda_[x] += r;
    }
    offsets_[x + 1] = cols_.size();
  }

  std::vector<std::vector<int>> fwd(n), bwd(n);
  for (int x = 0; x < n; ++x)
    for (int y : targets(x)) {
      fwd[x].push_back(y);
      bwd[y].push_back(x);
    }
  const auto f = reach(n, fwd);
  const auto b = reach(n, bwd);
  for (int x = 0; x < n; ++x)
    if (!f[x] || !b[x]) throw Error(ErrorKind::NotIrreducible, "state '" + ids_[x] + "' breaks irreducibility");

  if (known_measure) {
    if (static_cast<int>(known_measure->size()) != n)
      throw Error(ErrorKind::InvalidArgument, "known measure has wrong length");
    mu_ = std::move(*known_measure);
    const double total = std::accumulate(mu_.begin(), mu_.end(), 0.0);
    for (double& v : mu_) {
      if (!(v > 0.0)) throw Error(ErrorKind::InvalidArgument, "known measure must be strictly positive");
      v /= total;
    }
    residual_ = mpt::stationarity_residual(*this, mu_);
    if (residual_ > 1e-10) throw Error(ErrorKind::InvalidArgument, "known measure is not stationary");
  } else {
    mu_ = solve_stationary(n, offsets_, cols_, vals_, lambda_);
    for (double v : mu_)
      if (!(v > 0.0)) throw Error(ErrorKind::SolveFailure, "stationary solve produced a non-positive weight");
    residual_ = mpt::stationarity_residual(*this, mu_);
    if (residual_ > 1e-10) throw Error(ErrorKind::SolveFailure, "stationary residual too large");
  }
}

int MarkovProcess::index(const std::string& id) const {
  auto it = lookup_.find(id);
  if (it == lookup_.end()) throw Error(ErrorKind::UnknownState, "unknown state '" + id + "'");
  return it->second;
}

double MarkovProcess::rate(int x, int y) const {
  auto ts = targets(x);
  auto it = std::lower_bound(ts.begin(), ts.end(), y);
  if (it == ts.end() || *it != y) return 0.0;
  return rates(x)[it - ts.begin()];
}

std::vector<Transition> MarkovProcess::transitions() const {
  std::vector<Transition> out;
  out.reserve(cols_.size());
  for (int x = 0; x < size(); ++x) {
    auto ts = targets(x);
    auto rs = rates(x);
    for (std::size_t k = 0; k < ts.size(); ++k) out.push_back({x, ts[k], rs[k]});
  }
  return out;
}

double stationarity_residual(const MarkovProcess& P, const Vec& mu) {
  const int n = P.size();
  Vec flux(n, 0.0);
  for (int x = 0; x < n; ++x) {
    auto ts = P.targets(x);
    auto rs = P.rates(x);
    for (std::size_t k = 0; k < ts.size(); ++k) flux[ts[k]] += mu[x] * rs[k];
  }
  double worst = 0.0, lmax = 0.0;
  for (int y = 0; y < n; ++y) {
    worst = std::max(worst, std::abs(flux[y] - mu[y] * P.holding_rates()[y]));
    lmax = std::max(lmax, P.holding_rates()[y]);
  }
  return lmax > 0.0 ? worst / (2.0 * lmax) : 0.0;
}

const Measure& invariant_measure(const MarkovProcess& P) { return P.measure(); }

MarkovProcess cycle_walk(int n, double p) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "cycle needs at least 2 sites");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must lie in [0,1]");
  std::vector<std::string> ids;
  std::vector<Transition> rates;
  for (int x = 0; x < n; ++x) {
    ids.push_back(std::to_string(x));
    rates.push_back({x, (x + 1) % n, p});
    rates.push_back({x, (x + n - 1) % n, 1.0 - p});
  }
  return MarkovProcess(std::move(ids), rates, Vec(n, 1.0));
}

bool is_reversible(const MarkovProcess& P, double tol) {
  const auto& mu = P.measure();
  double worst = 0.0, cmax = 0.0;
  for (int x = 0; x < P.size(); ++x) {
    auto ts = P.targets(x);
    auto rs = P.rates(x);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double c = mu[x] * rs[k];
      cmax = std::max(cmax, c);
      worst = std::max(worst, std::abs(c - mu[ts[k]] * P.rate(ts[k], x)));
    }
  }
  return worst <= tol * cmax;
}

MarkovProcess adjoint(const MarkovProcess& P) {
  const auto& mu = P.measure();
  std::vector<Transition> rates;
  for (const auto& t : P.transitions()) rates.push_back({t.to, t.from, mu[t.from] * t.rate / mu[t.to]});
  return MarkovProcess(P.states(), rates, mu);
}

MarkovProcess symmetrize(const MarkovProcess& P) {
  const auto& mu = P.measure();
  std::vector<Transition> rates;
  for (const auto& t : P.transitions()) {
    rates.push_back({t.from, t.to, 0.5 * t.rate});
    rates.push_back({t.to, t.from, 0.5 * mu[t.from] * t.rate / mu[t.to]});
  }
  return MarkovProcess(P.states(), rates, mu);
}

EmbeddedChain embedded_chain(const MarkovProcess& P, bool adjoint_chain) {
  if (adjoint_chain) return embedded_chain(adjoint(P), false);
  EmbeddedChain ch;
  const int n = P.size();
  ch.offsets.assign(n + 1, 0);
  ch.M.resize(n);
  for (int x = 0; x < n; ++x) {
    const double lam = P.holding_rates()[x];
    auto ts = P.targets(x);
    auto rs = P.rates(x);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      ch.cols.push_back(ts[k]);
      ch.probs.push_back(rs[k] / lam);
    }
    ch.offsets[x + 1] = ch.cols.size();
    ch.M[x] = lam * P.measure()[x];
  }
  return ch;
}

Vec apply_generator(const MarkovProcess& P, const Vec& f) {
  Vec out(P.size(), 0.0);
  for (int x = 0; x < P.size(); ++x) {
    auto ts = P.targets(x);
    auto rs = P.rates(x);
    double v = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) v += rs[k] * (f[ts[k]] - f[x]);
    out[x] = v;
  }
  return out;
}

double inner_product_mu(const MarkovProcess& P, const Vec& f, const Vec& g) {
  double s = 0.0;
  for (int x = 0; x < P.size(); ++x) s += P.measure()[x] * f[x] * g[x];
  return s;
}

double dirichlet_form(const MarkovProcess& P, const Vec& f) {
  double s = 0.0;
  for (int x = 0; x < P.size(); ++x) {
    auto ts = P.targets(x);
    auto rs = P.rates(x);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double d = f[ts[k]] - f[x];
      s += P.measure()[x] * rs[k] * d * d;
    }
  }
  return 0.5 * s;
}

double dirichlet_form_generator(const MarkovProcess& P, const Vec& f) {
  Vec Lf = apply_generator(P, f);
  for (double& v : Lf) v = -v;
  return inner_product_mu(P, f, Lf);
}

StateSet to_indices(const MarkovProcess& P, const std::vector<std::string>& ids) {
  StateSet out;
  for (const auto& id : ids) out.push_back(P.index(id));
  return out;
}

std::vector<char> to_mask(int n, const StateSet& set) {
  std::vector<char> m(n, 0);
  for (int x : set) m[x] = 1;
  return m;
}

nlohmann::json process_to_json(const MarkovProcess& P) {
  nlohmann::json doc;
  doc["states"] = P.states();
  auto& rates = doc["rates"] = nlohmann::json::array();
  for (const auto& t : P.transitions()) rates.push_back({P.state(t.from), P.state(t.to), t.rate});
  return doc;
}

MarkovProcess process_from_json(const nlohmann::json& doc) {
  auto id_of = [](const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw Error(ErrorKind::ParseError, "state identifiers must be strings or integers");
  };
  if (!doc.is_object() || !doc.contains("states") || !doc.contains("rates"))
    throw Error(ErrorKind::ParseError, "process document needs 'states' and 'rates'");
  std::vector<std::string> ids;
  for (const auto& s : doc.at("states")) ids.push_back(id_of(s));
  std::unordered_map<std::string, int> idx;
  for (std::size_t i = 0; i < ids.size(); ++i) idx[ids[i]] = static_cast<int>(i);
  std::vector<Transition> rates;
  for (const auto& r : doc.at("rates")) {
    if (!r.is_array() || r.size() != 3 || !r[2].is_number())
      throw Error(ErrorKind::ParseError, "rate entries must be [from, to, rate]");
    const auto a = idx.find(id_of(r[0]));
    const auto b = idx.find(id_of(r[1]));
    if (a == idx.end() || b == idx.end()) throw Error(ErrorKind::UnknownState, "rate refers to an unknown state");
    rates.push_back({a->second, b->second, r[2].get<double>()});
  }
  return MarkovProcess(std::move(ids), rates);
}

}  // namespace mpt
