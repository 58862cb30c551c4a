#include "mpt/potential.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "mpt/errors.hpp"
#include "mpt/linalg.hpp"

namespace mpt {

namespace {

constexpr int kDenseLimit = 1500;

MarkovProcess variant_process(const MarkovProcess& P, Variant v) {
  switch (v) {
    case Variant::Adjoint: return adjoint(P);
    case Variant::Symmetrized: return symmetrize(P);
    case Variant::Plain: break;
  }
  return P;
}

StateSet set_union(const StateSet& a, const StateSet& b) {
  StateSet u = a;
  u.insert(u.end(), b.begin(), b.end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

// h_{B,A} for the embedded chain: u = 1 on B, 0 on A, p-harmonic elsewhere.
// Solved from (I - P_FF) u_F = P_FB 1 without touching the generator solver.
Vec embedded_potential(const MarkovProcess& P, const StateSet& A, const StateSet& B, std::string* solver) {
  const int n = P.size();
  const EmbeddedChain ch = embedded_chain(P);
  std::vector<char> fixed(n, 0);
  Vec u(n, 0.0);
  for (int x : A) fixed[x] = 1;
  for (int x : B) {
    fixed[x] = 1;
    u[x] = 1.0;
  }
  std::vector<int> interior, local(n, -1);
  for (int x = 0; x < n; ++x)
    if (!fixed[x]) {
      local[x] = static_cast<int>(interior.size());
      interior.push_back(x);
    }
  const int m = static_cast<int>(interior.size());
  Vec b(m, 0.0);
  for (int i = 0; i < m; ++i) {
    auto ts = ch.targets(interior[i]);
    auto ps = ch.row(interior[i]);
    for (std::size_t k = 0; k < ts.size(); ++k)
      if (fixed[ts[k]]) b[i] += ps[k] * u[ts[k]];
  }
  Vec sol;
  if (m == 0) {
    if (solver) *solver = "none";
  } else if (m <= kDenseLimit) {
    std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
      a[static_cast<std::size_t>(i) * m + i] = 1.0;
      auto ts = ch.targets(interior[i]);
      auto ps = ch.row(interior[i]);
      for (std::size_t k = 0; k < ts.size(); ++k)
        if (local[ts[k]] >= 0) a[static_cast<std::size_t>(i) * m + local[ts[k]]] -= ps[k];
    }
    DenseLU lu(m, a);
    sol = lu.solve(b);
    // one refinement step
    Vec r = b;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) r[i] -= a[static_cast<std::size_t>(i) * m + j] * sol[j];
    const Vec dx = lu.solve(r);
    for (int i = 0; i < m; ++i) sol[i] += dx[i];
    if (solver) *solver = "dense-lu";
  } else {
    using SpMat = Eigen::SparseMatrix<double>;
    std::vector<Eigen::Triplet<double>> trips;
    for (int i = 0; i < m; ++i) {
      trips.emplace_back(i, i, 1.0);
      auto ts = ch.targets(interior[i]);
      auto ps = ch.row(interior[i]);
      for (std::size_t k = 0; k < ts.size(); ++k)
        if (local[ts[k]] >= 0) trips.emplace_back(i, local[ts[k]], -ps[k]);
    }
    SpMat a(m, m);
    a.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu(a);
    if (lu.info() != Eigen::Success) throw Error(ErrorKind::SolveFailure, "embedded-chain factorization failed");
    Eigen::Map<const Eigen::VectorXd> bv(b.data(), m);
    Eigen::VectorXd s = lu.solve(bv);
    s += lu.solve(Eigen::VectorXd(bv - a * s));
    sol.assign(s.data(), s.data() + m);
    if (solver) *solver = "sparse-lu";
  }
  for (int i = 0; i < m; ++i) u[interior[i]] = sol[i];
  return u;
}

}  // namespace

const char* route_name(CapacityRoute route) {
  return route == CapacityRoute::DirichletOfH ? "dirichlet_of_h" : "escape_formula";
}

nlohmann::json to_json(const MarkovProcess& P, const CapacityReport& rep) {
  nlohmann::json j;
  j["value"] = rep.value;
  j["route"] = route_name(rep.route);
  j["residual"] = rep.residual;
  auto ids = [&](const StateSet& s) {
    std::vector<std::string> out;
    for (int x : s) out.push_back(P.state(x));
    return out;
  };
  j["A"] = ids(rep.A);
  j["B"] = ids(rep.B);
  if (!rep.solver.empty()) j["solver"] = rep.solver;
  return j;
}

void check_disjoint(const MarkovProcess& P, const StateSet& A, const StateSet& B) {
  if (A.empty() || B.empty()) throw Error(ErrorKind::EmptySet, "A and B must be non-empty");
  std::vector<char> in(P.size(), 0);
  for (int x : A) {
    if (x < 0 || x >= P.size()) throw Error(ErrorKind::UnknownState, "set member out of range");
    in[x] = 1;
  }
  for (int x : B) {
    if (x < 0 || x >= P.size()) throw Error(ErrorKind::UnknownState, "set member out of range");
    if (in[x]) throw Error(ErrorKind::OverlappingSets, "state '" + P.state(x) + "' lies in both A and B");
  }
}

PotentialFunction equilibrium_potential(const MarkovProcess& P, const StateSet& A, const StateSet& B,
                                        Variant variant) {
  check_disjoint(P, A, B);
  const MarkovProcess Q = variant_process(P, variant);
  std::vector<char> fixed(P.size(), 0);
  Vec boundary(P.size(), 0.0);
  for (int x : A) {
    fixed[x] = 1;
    boundary[x] = 1.0;
  }
  for (int x : B) fixed[x] = 1;
  InteriorSolver solver(Q, fixed);
  return solver.solve(boundary, {});
}

double harmonic_residual(const MarkovProcess& P, const Vec& h, const StateSet& A, const StateSet& B) {
  std::vector<char> fixed = to_mask(P.size(), A);
  for (int x : B) fixed[x] = 1;
  const Vec Lh = apply_generator(P, h);
  double worst = 0.0, lmax = 0.0;
  for (int x = 0; x < P.size(); ++x) {
    lmax = std::max(lmax, P.holding_rates()[x]);
    if (!fixed[x]) worst = std::max(worst, std::abs(Lh[x]));
  }
  return worst / lmax;
}

CapacityReport capacity(const MarkovProcess& P, const StateSet& A, const StateSet& B) {
  const Vec h = equilibrium_potential(P, A, B);
  CapacityReport rep;
  rep.value = dirichlet_form(P, h);
  rep.route = CapacityRoute::DirichletOfH;
  rep.residual = harmonic_residual(P, h, A, B);
  rep.A = A;
  rep.B = B;
  return rep;
}

Vec escape_probabilities(const MarkovProcess& P, const StateSet& A, const StateSet& B, std::string* solver) {
  check_disjoint(P, A, B);
  const Vec u = embedded_potential(P, A, B, solver);
  Vec out;
  for (int x : A) {
    auto ts = P.targets(x);
    auto rs = P.rates(x);
    double e = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) e += rs[k] * u[ts[k]];
    out.push_back(e / P.holding_rates()[x]);
  }
  return out;
}

CapacityReport capacity_via_escape(const MarkovProcess& P, const StateSet& A, const StateSet& B) {
  CapacityReport rep;
  const Vec e = escape_probabilities(P, A, B, &rep.solver);
  double cap = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) cap += P.holding_rates()[A[i]] * P.measure()[A[i]] * e[i];
  rep.value = cap;
  rep.route = CapacityRoute::EscapeFormula;
  rep.A = A;
  rep.B = B;
  return rep;
}

Measure equilibrium_measure(const MarkovProcess& P, const StateSet& A, const StateSet& B, Variant variant) {
  const MarkovProcess Q = variant_process(P, variant);
  const Vec e = escape_probabilities(Q, A, B);
  Measure nu(P.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    nu[A[i]] = Q.holding_rates()[A[i]] * Q.measure()[A[i]] * e[i];
    total += nu[A[i]];
  }
  if (!(total > 0.0)) throw Error(ErrorKind::ZeroCapacity, "capacity vanishes");
  for (double& v : nu) v /= total;
  return nu;
}

double mean_hitting_functional(const MarkovProcess& P, const StateSet& A, const StateSet& B, const Vec& f) {
  const Vec hd = equilibrium_potential(P, A, B, Variant::Adjoint);
  const double cap = capacity(P, A, B).value;
  if (!(cap > 0.0)) throw Error(ErrorKind::ZeroCapacity, "capacity vanishes");
  return inner_product_mu(P, f, hd) / cap;
}

double mean_hitting_time(const MarkovProcess& P, int z, const StateSet& B) {
  return mean_hitting_functional(P, {z}, B, Vec(P.size(), 1.0));
}

Vec expected_hitting_times(const MarkovProcess& P, const StateSet& B) {
  if (B.empty()) throw Error(ErrorKind::EmptySet, "target set is empty");
  InteriorSolver solver(P, to_mask(P.size(), B));
  return solver.solve(Vec(P.size(), 0.0), Vec(P.size(), 1.0));
}

Vec occupation_before_hitting(const MarkovProcess& P, int z, const StateSet& B) {
  if (B.empty()) throw Error(ErrorKind::EmptySet, "target set is empty");
  InteriorSolver solver(P, to_mask(P.size(), B));
  Vec src(P.size(), 0.0);
  src[z] = 1.0;
  return solver.solve(Vec(P.size(), 0.0), src);
}

PotentialBound potential_bound(const MarkovProcess& P, int x, const StateSet& A, const StateSet& B) {
  check_disjoint(P, A, B);
  if (std::find(A.begin(), A.end(), x) != A.end() || std::find(B.begin(), B.end(), x) != B.end())
    throw Error(ErrorKind::OverlappingSets, "x must lie outside A and B");
  PotentialBound pb;
  pb.bound = capacity(P, {x}, A).value / capacity(P, {x}, set_union(A, B)).value;
  pb.value = equilibrium_potential(P, A, B)[x];
  pb.holds = pb.value <= pb.bound + 1e-12;
  return pb;
}

}  // namespace mpt
