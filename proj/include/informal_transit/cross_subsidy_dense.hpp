#pragma once

// Transfers by solving the full linear system (budget balance plus equal
// adjusted profits) with a dense LU factorization. Slower than the closed
// form in cross_subsidy.hpp; kept as an independent cross-check.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "informal_transit/cross_subsidy.hpp"

namespace informal_transit {

inline TransferVector transfers_for_target_dense(const Instance& inst, const Allocation& target) {
  check_allocation(inst, target);
  const auto n = static_cast<Eigen::Index>(inst.size());
  double mass = 0.0;
  for (double v : target) mass += v;
  if (!(mass > 0.0)) throw ValidationError("target allocation has no drivers");

  // Unknowns: tau_0..tau_{n-1}, pi_tilde.
  // Row 0: sum x_i tau_i = 0. Rows 1..n: tau_i - pi_tilde = -pi_i.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    a(0, i) = target[k];
    a(i + 1, i) = 1.0;
    a(i + 1, n) = -1.0;
    b(i + 1) = -per_driver_profit(inst.derived[k], target[k]);
  }
  const Eigen::VectorXd sol = a.fullPivLu().solve(b);
  TransferVector t;
  t.target = target;
  t.tau.resize(inst.size());
  for (Eigen::Index i = 0; i < n; ++i) t.tau[static_cast<std::size_t>(i)] = sol(i);
  t.pi_tilde = sol(n);
  return t;
}

} // namespace informal_transit
