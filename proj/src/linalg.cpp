#include "mpt/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "mpt/errors.hpp"

namespace mpt {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double matrix_inf_norm(const SpMat& a) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it) rows[it.row()] += std::abs(it.value());
  return inf_norm(rows);
}

}  // namespace

// Reversible chains are solved in the symmetric form diag(mu) A, which admits
// a sparse LDLT with far less fill-in than LU.
struct InteriorSolver::Impl {
  SpMat A;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  Eigen::SimplicialLDLT<SpMat> ldlt;
  Eigen::VectorXd weight;
  bool symmetric = false;
  double norm = 0.0;

  Eigen::VectorXd apply(const Eigen::VectorXd& b) const {
    return symmetric ? Eigen::VectorXd(ldlt.solve(Eigen::VectorXd(weight.cwiseProduct(b)))) : Eigen::VectorXd(lu.solve(b));
  }
  void factor_lu() {
    symmetric = false;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw Error(ErrorKind::SolveFailure, "interior factorization failed");
  }
};

InteriorSolver::InteriorSolver(const MarkovProcess& P, const std::vector<char>& fixed)
    : P_(P), fixed_(fixed), local_(P.size(), -1), impl_(std::make_unique<Impl>()) {
  const int n = P.size();
  for (int x = 0; x < n; ++x)
    if (!fixed_[x]) {
      local_[x] = static_cast<int>(interior_.size());
      interior_.push_back(x);
    }
  const int m = static_cast<int>(interior_.size());
  if (m == 0) return;
  std::vector<Triplet> trips;
  for (int i = 0; i < m; ++i) {
    const int x = interior_[i];
    trips.emplace_back(i, i, P.holding_rates()[x]);
    auto ts = P.targets(x);
    auto rs = P.rates(x);
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const int j = local_[ts[k]];
      if (j >= 0) trips.emplace_back(i, j, -rs[k]);
    }
  }
  impl_->A.resize(m, m);
  impl_->A.setFromTriplets(trips.begin(), trips.end());
  impl_->A.makeCompressed();
  impl_->norm = matrix_inf_norm(impl_->A);
  if (m > 64 && is_reversible(P)) {
    impl_->weight.resize(m);
    for (int i = 0; i < m; ++i) impl_->weight[i] = P.measure()[interior_[i]];
    if (impl_->weight.minCoeff() > 0.0) {
      const SpMat S = impl_->weight.asDiagonal() * impl_->A;
      impl_->ldlt.compute(S);
      impl_->symmetric = impl_->ldlt.info() == Eigen::Success;
    }
  }
  if (!impl_->symmetric) impl_->factor_lu();
}

InteriorSolver::~InteriorSolver() = default;

Vec InteriorSolver::solve(const Vec& boundary, const Vec& source) const {
  const int n = P_.size();
  Vec u(n, 0.0);
  for (int x = 0; x < n; ++x)
    if (fixed_[x]) u[x] = boundary[x];
  const int m = static_cast<int>(interior_.size());
  if (m == 0) {
    residual_ = 0.0;
    return u;
  }
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    const int x = interior_[i];
    double v = source.empty() ? 0.0 : source[x];
    auto ts = P_.targets(x);
    auto rs = P_.rates(x);
    for (std::size_t k = 0; k < ts.size(); ++k)
      if (fixed_[ts[k]]) v += rs[k] * boundary[ts[k]];
    b[i] = v;
  }
  auto attempt = [&](Eigen::VectorXd& sol) {
    sol = impl_->apply(b);
    Eigen::VectorXd r = b - impl_->A * sol;
    sol += impl_->apply(r);
    r = b - impl_->A * sol;
    const double scale = impl_->norm * inf_norm(sol) + inf_norm(b);
    return scale > 0 ? inf_norm(r) / scale : 0.0;
  };
  Eigen::VectorXd sol;
  residual_ = attempt(sol);
  if (impl_->symmetric && !(residual_ <= 1e-12)) {
    impl_->factor_lu();
    residual_ = attempt(sol);
  }
  if (!std::isfinite(residual_) || residual_ > 1e-8)
    throw Error(ErrorKind::SolveFailure, "interior solve residual too large");
  for (int i = 0; i < m; ++i) u[interior_[i]] = sol[i];
  return u;
}

DenseLU::DenseLU(int n, std::vector<double> a) : n_(n), lu_(std::move(a)), piv_(n) {
  for (int k = 0; k < n_; ++k) {
    int p = k;
    double best = std::abs(lu_[k * n_ + k]);
    for (int i = k + 1; i < n_; ++i) {
      const double v = std::abs(lu_[i * n_ + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) throw Error(ErrorKind::SolveFailure, "singular dense matrix");
    piv_[k] = p;
    if (p != k)
      for (int j = 0; j < n_; ++j) std::swap(lu_[k * n_ + j], lu_[p * n_ + j]);
    const double d = lu_[k * n_ + k];
    for (int i = k + 1; i < n_; ++i) {
      double& l = lu_[i * n_ + k];
      if (l == 0.0) continue;
      l /= d;
      for (int j = k + 1; j < n_; ++j) lu_[i * n_ + j] -= l * lu_[k * n_ + j];
    }
  }
}

Vec DenseLU::solve(const Vec& b) const {
  Vec x = b;
  for (int k = 0; k < n_; ++k) std::swap(x[k], x[piv_[k]]);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < i; ++j) x[i] -= lu_[i * n_ + j] * x[j];
  for (int i = n_ - 1; i >= 0; --i) {
    for (int j = i + 1; j < n_; ++j) x[i] -= lu_[i * n_ + j] * x[j];
    x[i] /= lu_[i * n_ + i];
  }
  return x;
}

Vec solve_stationary(int n, const std::vector<std::size_t>& offsets, const std::vector<int>& cols,
                     const Vec& vals, const Vec& lambda) {
  if (n == 1) return {1.0};
  // A = Q^T with the last row replaced by the normalization constraint.
  std::vector<Triplet> trips;
  const int last = n - 1;
  for (int x = 0; x < n; ++x) {
    if (x != last) trips.emplace_back(x, x, -lambda[x]);
    for (std::size_t k = offsets[x]; k < offsets[x + 1]; ++k)
      if (cols[k] != last) trips.emplace_back(cols[k], x, vals[k]);
    trips.emplace_back(last, x, 1.0);
  }
  SpMat A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw Error(ErrorKind::SolveFailure, "stationary factorization failed");
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b[last] = 1.0;
  Eigen::VectorXd mu = lu.solve(b);
  Eigen::VectorXd r = b - A * mu;
  mu += lu.solve(r);
  Vec out(mu.data(), mu.data() + n);
  double sum = 0.0;
  for (double& v : out) {
    if (v < 0.0 && v > -1e-14) v = 0.0;
    sum += v;
  }
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace mpt
