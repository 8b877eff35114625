#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "informal_transit/equilibrium.hpp"
#include "informal_transit/errors.hpp"
#include "informal_transit/level_solver.hpp"
#include "informal_transit/model_core.hpp"
#include "informal_transit/objective.hpp"

namespace informal_transit {

// Left derivative of w * demand at x.
inline double marginal_value(const DerivedRoute& d, Objective o, double x) {
  if (!d.active || x > d.k_tilde_star) return 0.0;
  return rider_weight(d, o) * (d.zeta1 - 2.0 * d.zeta2 * std::max(x, 0.0));
}

inline std::vector<double> marginal_values(const Instance& inst, Objective o, const Allocation& x) {
  check_allocation(inst, x);
  std::vector<double> m(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) m[i] = marginal_value(inst.derived[i], o, x[i]);
  return m;
}

inline MarginalCurve marginal_curve(const DerivedRoute& d, Objective o) {
  MarginalCurve c;
  if (!d.active) return c;
  const double w = rider_weight(d, o);
  c.head = w * d.zeta1;
  c.slope = 2.0 * w * d.zeta2;
  c.knee = d.k_tilde_star;
  return c;
}

struct SeparableResult {
  Allocation x;
  double multiplier = 0.0; // common marginal value; 0 once every route is saturated
  int iterations = 0;
};

// Maximizes a separable concave objective given by its marginal curves under
// sum x = budget and the curves' floor/ceil. When every route can reach its
// knee, the surplus is spread in proportion to `spread_weights`, respecting
// ceilings.
inline SeparableResult maximize_separable(std::vector<MarginalCurve> curves, double budget,
                                          const std::vector<double>& spread_weights,
                                          const RankOrder& rank) {
  const std::size_t n = curves.size();
  if (!(budget >= 0.0) || !std::isfinite(budget))
    throw ValidationError("budget must be finite and non-negative");
  double floor_sum = 0.0;
  double ceil_sum = 0.0;
  double sat_sum = 0.0;
  for (const auto& c : curves) {
    if (c.floor > c.ceil) throw ValidationError("infeasible bounds: floor above ceiling");
    floor_sum += c.floor;
    ceil_sum += c.ceil;
    sat_sum += std::clamp(c.knee, c.floor, c.ceil);
  }
  const double slack = 1e-12 * std::max(1.0, budget);
  if (budget < floor_sum - slack)
    throw ValidationError("infeasible: budget below the sum of floors");
  if (budget > ceil_sum + slack)
    throw ValidationError("infeasible: budget above the sum of ceilings");

  SeparableResult r;
  if (sat_sum < budget) {
    r.x.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.x[i] = std::clamp(curves[i].knee, curves[i].floor, curves[i].ceil);
    double surplus = budget - sat_sum;
    std::vector<double> w = spread_weights;
    double wsum = 0.0;
    for (double v : w) wsum += v;
    if (!(wsum > 0.0)) w.assign(n, 1.0);
    std::vector<bool> open(n);
    for (std::size_t i = 0; i < n; ++i) open[i] = r.x[i] < curves[i].ceil;
    // Proportional water filling: routes hitting their ceiling drop out.
    for (std::size_t round = 0; round <= n && surplus > slack; ++round) {
      double ow = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (open[i]) ow += w[i];
      if (!(ow > 0.0)) {
        for (std::size_t i = 0; i < n; ++i)
          if (open[i]) w[i] = 1.0, ow += 1.0;
      }
      if (!(ow > 0.0)) break;
      double spent = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!open[i]) continue;
        const double want = surplus * w[i] / ow;
        const double room = curves[i].ceil - r.x[i];
        const double give = std::min(want, room);
        r.x[i] += give;
        spent += give;
        if (give >= room) open[i] = false;
      }
      surplus -= spent;
    }
    r.multiplier = 0.0;
    return r;
  }
  LevelSolution s = solve_levels(curves, budget, rank.fill_order);
  r.x = std::move(s.x);
  r.multiplier = s.level;
  r.iterations = s.iterations;
  return r;
}

struct OptimizeOptions {
  std::vector<double> floor;
  std::vector<double> ceiling;
  const RankOrder* rank = nullptr;
};

inline SeparableResult optimize_allocation_detail(const Instance& inst, Objective o, double budget,
                                                  const OptimizeOptions& opt = {}) {
  const std::size_t n = inst.size();
  if (!opt.floor.empty() && opt.floor.size() != n) throw ValidationError("floor vector has wrong length");
  if (!opt.ceiling.empty() && opt.ceiling.size() != n)
    throw ValidationError("ceiling vector has wrong length");
  std::vector<MarginalCurve> curves;
  std::vector<double> weights;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = inst.derived[i];
    MarginalCurve c = marginal_curve(d, o);
    c.knee = d.active ? d.k_tilde_star : 0.0;
    if (!opt.floor.empty()) c.floor = opt.floor[i];
    if (!opt.ceiling.empty()) c.ceil = opt.ceiling[i];
    curves.push_back(c);
    weights.push_back(d.active ? d.k_tilde_star : 0.0);
  }
  const RankOrder rank = opt.rank ? *opt.rank : default_rank(inst);
  return maximize_separable(std::move(curves), budget, weights, rank);
}

inline Allocation optimize_allocation(const Instance& inst, Objective o, double budget,
                                      const OptimizeOptions& opt = {}) {
  return optimize_allocation_detail(inst, o, budget, opt).x;
}

inline Allocation optimize_allocation(const Instance& inst, Objective o) {
  return optimize_allocation(inst, o, inst.drivers());
}

} // namespace informal_transit
