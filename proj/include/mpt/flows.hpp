#ifndef MPT_FLOWS_HPP
#define MPT_FLOWS_HPP

#include <memory>
#include <vector>

#include "mpt/markov.hpp"

namespace mpt {

// Undirected edges {i, j}, i < j, with c^s(i,j) > 0. Each edge stores the
// directed conductances c(i,j) = mu(i) r(i,j) and c(j,i).
struct EdgeSet {
  struct Edge {
    int lo;
    int hi;
    double c_fwd;  // c(lo, hi)
    double c_bwd;  // c(hi, lo)
    double cs;
  };
  struct Incidence {
    int edge;
    double sign;  // +1 if the node is the lo end
  };
  int n = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<Incidence>> incident;

  int find(int x, int y) const;  // -1 if absent
};

std::shared_ptr<const EdgeSet> build_edges(const MarkovProcess& P);

// Antisymmetric edge function stored on the lo -> hi orientation.
struct Flow {
  std::shared_ptr<const EdgeSet> edges;
  Vec value;

  explicit Flow(std::shared_ptr<const EdgeSet> e) : edges(std::move(e)), value(edges->edges.size(), 0.0) {}
  // phi(x, y); reading (y, x) returns the exact negation.
  double at(int x, int y) const;
  Flow& operator+=(const Flow& o);
  Flow& operator-=(const Flow& o);
  Flow& operator*=(double c);
};

Flow operator+(Flow a, const Flow& b);
Flow operator-(Flow a, const Flow& b);
Flow operator*(double c, Flow a);

enum class FlowKind { Phi, PhiStar, Psi };

double divergence(const Flow& phi, int x);
Vec divergence_all(const Flow& phi);
double divergence_set(const Flow& phi, const StateSet& A);

double flow_inner(const Flow& phi, const Flow& psi);
double flow_norm_sq(const Flow& phi);

// Phi_f(x,y) = f(y)c(y,x) - f(x)c(x,y); Phi*_f(x,y) = f(y)c(x,y) - f(x)c(y,x);
// Psi_f = (Phi_f + Phi*_f)/2 = c^s (f(y) - f(x)).
Flow flow_from_function(std::shared_ptr<const EdgeSet> edges, const Vec& f, FlowKind kind);

enum class UnitFlowKind { Psi, Phi, PhiStar };
// psi = -Psi_h / cap, phi = -Phi_{h^dagger} / cap, phi* = -Phi*_h / cap.
Flow unit_flow(const MarkovProcess& P, std::shared_ptr<const EdgeSet> edges, const StateSet& A,
               const StateSet& B, UnitFlowKind kind);

nlohmann::json flow_to_json(const MarkovProcess& P, const Flow& phi);

}  // namespace mpt

#endif
