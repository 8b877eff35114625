#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "informal_transit/equilibrium.hpp"
#include "informal_transit/errors.hpp"
#include "informal_transit/model_core.hpp"
#include "informal_transit/objective.hpp"

namespace informal_transit {

// Per-driver transfers that equalize adjusted profits at a target
// allocation. Positive entries are paid to drivers on that route.
struct TransferVector {
  std::vector<double> tau;
  Allocation target;
  double pi_tilde = 0.0; // common adjusted profit
};

inline TransferVector transfers_for_target(const Instance& inst, const Allocation& target) {
  check_allocation(inst, target);
  double mass = 0.0;
  double earned = 0.0;
  std::vector<double> pi(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) {
    pi[i] = per_driver_profit(inst.derived[i], target[i]);
    mass += target[i];
    earned += pi[i] * target[i];
  }
  if (!(mass > 0.0)) throw ValidationError("target allocation has no drivers");
  TransferVector t;
  t.target = target;
  t.pi_tilde = earned / mass;
  t.tau.resize(inst.size());
  for (std::size_t i = 0; i < inst.size(); ++i) t.tau[i] = t.pi_tilde - pi[i];
  return t;
}

struct SchemeReport {
  double budget_residual = 0.0; // sum tau_i x_i
  double budget_scale = 0.0;    // sum |tau_i| x_i
  double profit_spread = 0.0;   // max - min adjusted profit over all routes
  bool equilibrium_ok = false;  // target is an equilibrium under the transfers
  bool canonical_recovers = false;
  double canonical_deviation = 0.0; // max |x_canonical - target|
  double target_objective = 0.0;
  double scheme_objective = 0.0; // objective at the canonical equilibrium
  std::optional<bool> wage_ok;   // pi_tilde >= reservation wage
};

// `objective` selects the objective reported for the target and for the
// canonical equilibrium under transfers.
inline SchemeReport verify_scheme(const Instance& inst, const TransferVector& t,
                                  Objective objective = Objective::Profit, double tol = 1e-7,
                                  std::optional<double> reservation_wage = std::nullopt) {
  check_allocation(inst, t.target);
  const std::size_t n = inst.size();
  if (t.tau.size() != n) throw ValidationError("transfer vector has wrong length");
  SchemeReport rep;
  double mass = 0.0;
  double lo = kInf;
  double hi = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    rep.budget_residual += t.tau[i] * t.target[i];
    rep.budget_scale += std::abs(t.tau[i]) * t.target[i];
    mass += t.target[i];
    const double adj = per_driver_profit(inst.derived[i], t.target[i]) + t.tau[i];
    lo = std::min(lo, adj);
    hi = std::max(hi, adj);
  }
  rep.profit_spread = hi - lo;
  const std::vector<double> zero(n, 0.0);
  rep.equilibrium_ok = is_equilibrium(inst, t.target, zero, tol, t.tau).ok;

  EquilibriumOptions opt;
  opt.shifts = t.tau;
  const EquilibriumResult eq = wardrop_equilibrium(inst, mass, zero, opt);
  for (std::size_t i = 0; i < n; ++i)
    rep.canonical_deviation = std::max(rep.canonical_deviation, std::abs(eq.allocation[i] - t.target[i]));
  rep.canonical_recovers = rep.canonical_deviation <= tol * std::max(1.0, mass);
  rep.target_objective = objective_value(inst, objective, t.target);
  rep.scheme_objective = objective_value(inst, objective, eq.allocation);
  if (reservation_wage) rep.wage_ok = t.pi_tilde >= *reservation_wage;
  return rep;
}

} // namespace informal_transit
