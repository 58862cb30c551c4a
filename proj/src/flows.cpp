#include "mpt/flows.hpp"

#include <algorithm>
#include <map>

#include "mpt/errors.hpp"
#include "mpt/potential.hpp"

namespace mpt {

int EdgeSet::find(int x, int y) const {
  for (const auto& inc : incident[x]) {
    const auto& e = edges[inc.edge];
    if ((e.lo == x && e.hi == y) || (e.lo == y && e.hi == x)) return inc.edge;
  }
  return -1;
}

std::shared_ptr<const EdgeSet> build_edges(const MarkovProcess& P) {
  auto es = std::make_shared<EdgeSet>();
  es->n = P.size();
  es->incident.resize(P.size());
  std::map<std::pair<int, int>, std::pair<double, double>> acc;
  const auto& mu = P.measure();
  for (const auto& t : P.transitions()) {
    const double c = mu[t.from] * t.rate;
    if (t.from < t.to)
      acc[{t.from, t.to}].first += c;
    else
      acc[{t.to, t.from}].second += c;
  }
  for (const auto& [key, cc] : acc) {
    const double cs = 0.5 * (cc.first + cc.second);
    if (!(cs > 0.0)) continue;
    const int id = static_cast<int>(es->edges.size());
    es->edges.push_back({key.first, key.second, cc.first, cc.second, cs});
    es->incident[key.first].push_back({id, 1.0});
    es->incident[key.second].push_back({id, -1.0});
  }
  return es;
}

double Flow::at(int x, int y) const {
  const int e = edges->find(x, y);
  if (e < 0) return 0.0;
  return edges->edges[e].lo == x ? value[e] : -value[e];
}

Flow& Flow::operator+=(const Flow& o) {
  for (std::size_t i = 0; i < value.size(); ++i) value[i] += o.value[i];
  return *this;
}

Flow& Flow::operator-=(const Flow& o) {
  for (std::size_t i = 0; i < value.size(); ++i) value[i] -= o.value[i];
  return *this;
}

Flow& Flow::operator*=(double c) {
  for (double& v : value) v *= c;
  return *this;
}

Flow operator+(Flow a, const Flow& b) { return a += b; }
Flow operator-(Flow a, const Flow& b) { return a -= b; }
Flow operator*(double c, Flow a) { return a *= c; }

double divergence(const Flow& phi, int x) {
  double s = 0.0;
  for (const auto& inc : phi.edges->incident[x]) s += inc.sign * phi.value[inc.edge];
  return s;
}

Vec divergence_all(const Flow& phi) {
  Vec d(phi.edges->n, 0.0);
  for (std::size_t e = 0; e < phi.value.size(); ++e) {
    d[phi.edges->edges[e].lo] += phi.value[e];
    d[phi.edges->edges[e].hi] -= phi.value[e];
  }
  return d;
}

double divergence_set(const Flow& phi, const StateSet& A) {
  double s = 0.0;
  for (int x : A) s += divergence(phi, x);
  return s;
}

double flow_inner(const Flow& phi, const Flow& psi) {
  double s = 0.0;
  for (std::size_t e = 0; e < phi.value.size(); ++e) s += phi.value[e] * psi.value[e] / phi.edges->edges[e].cs;
  return s;
}

double flow_norm_sq(const Flow& phi) { return flow_inner(phi, phi); }

Flow flow_from_function(std::shared_ptr<const EdgeSet> edges, const Vec& f, FlowKind kind) {
  Flow out(edges);
  for (std::size_t i = 0; i < edges->edges.size(); ++i) {
    const auto& e = edges->edges[i];
    const double fx = f[e.lo], fy = f[e.hi];
    switch (kind) {
      case FlowKind::Phi: out.value[i] = fy * e.c_bwd - fx * e.c_fwd; break;
      case FlowKind::PhiStar: out.value[i] = fy * e.c_fwd - fx * e.c_bwd; break;
      case FlowKind::Psi: out.value[i] = e.cs * (fy - fx); break;
    }
  }
  return out;
}

Flow unit_flow(const MarkovProcess& P, std::shared_ptr<const EdgeSet> edges, const StateSet& A,
               const StateSet& B, UnitFlowKind kind) {
  const double cap = capacity(P, A, B).value;
  if (!(cap > 0.0)) throw Error(ErrorKind::ZeroCapacity, "unit flow needs positive capacity");
  Flow out(edges);
  switch (kind) {
    case UnitFlowKind::Psi:
      out = flow_from_function(edges, equilibrium_potential(P, A, B), FlowKind::Psi);
      break;
    case UnitFlowKind::Phi:
      out = flow_from_function(edges, equilibrium_potential(P, A, B, Variant::Adjoint), FlowKind::Phi);
      break;
    case UnitFlowKind::PhiStar:
      out = flow_from_function(edges, equilibrium_potential(P, A, B), FlowKind::PhiStar);
      break;
  }
  out *= -1.0 / cap;
  return out;
}

nlohmann::json flow_to_json(const MarkovProcess& P, const Flow& phi) {
  auto arr = nlohmann::json::array();
  for (std::size_t i = 0; i < phi.value.size(); ++i) {
    const auto& e = phi.edges->edges[i];
    arr.push_back({P.state(e.lo), P.state(e.hi), phi.value[i]});
  }
  return arr;
}

}  // namespace mpt
