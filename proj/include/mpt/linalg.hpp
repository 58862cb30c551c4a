#ifndef MPT_LINALG_HPP
#define MPT_LINALG_HPP

#include <memory>
#include <vector>

#include "mpt/markov.hpp"

namespace mpt {

// Solves (-L u)(x) = s(x) for x off the fixed set, with u = g on the fixed
// set. The interior block is factored once (sparse LU) and reused for every
// right-hand side; each solve does one step of iterative refinement.
class InteriorSolver {
 public:
  InteriorSolver(const MarkovProcess& P, const std::vector<char>& fixed);
  ~InteriorSolver();
  InteriorSolver(const InteriorSolver&) = delete;
  InteriorSolver& operator=(const InteriorSolver&) = delete;

  Vec solve(const Vec& boundary, const Vec& source) const;
  const std::vector<int>& interior() const { return interior_; }
  // Max relative residual of the last solve.
  double last_residual() const { return residual_; }

 private:
  struct Impl;
  const MarkovProcess& P_;
  std::vector<char> fixed_;
  std::vector<int> interior_;
  std::vector<int> local_;
  std::unique_ptr<Impl> impl_;
  mutable double residual_ = 0.0;
};

// Dense LU with partial pivoting, row-major storage.
class DenseLU {
 public:
  explicit DenseLU(int n, std::vector<double> a);
  Vec solve(const Vec& b) const;
  int size() const { return n_; }

 private:
  int n_;
  std::vector<double> lu_;
  std::vector<int> piv_;
};

// Null vector of Q^T normalized to a probability; one row replaced by the
// normalization constraint, then one refinement step.
Vec solve_stationary(int n, const std::vector<std::size_t>& offsets, const std::vector<int>& cols,
                     const Vec& vals, const Vec& lambda);

}  // namespace mpt

#endif
