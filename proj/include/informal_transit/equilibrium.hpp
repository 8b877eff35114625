#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "informal_transit/errors.hpp"
#include "informal_transit/level_solver.hpp"
#include "informal_transit/model_core.hpp"
#include "informal_transit/objective.hpp"

namespace informal_transit {

// Routes listed from highest to lowest rank. On a flat profit level the
// higher-ranked route is filled first.
struct RankOrder {
  std::vector<std::size_t> fill_order;
};

// Lower zeta_tilde ranks higher; ties go to the lower route index.
inline RankOrder default_rank(const Instance& inst) {
  RankOrder r;
  r.fill_order.resize(inst.size());
  std::iota(r.fill_order.begin(), r.fill_order.end(), std::size_t{0});
  std::stable_sort(r.fill_order.begin(), r.fill_order.end(), [&](std::size_t a, std::size_t b) {
    return inst.derived[a].zeta_tilde < inst.derived[b].zeta_tilde;
  });
  return r;
}

struct EquilibriumResult {
  Allocation allocation;  // free drivers plus offsets
  Allocation free;        // free drivers only
  double pi_eq = 0.0;     // common (transfer-adjusted) profit of supported routes
  std::vector<std::size_t> supported;
  int iterations = 0;
};

struct EquilibriumOptions {
  double tol = 1e-8;
  int max_iter = 200;
  std::vector<double> shifts;        // per-route transfer added to profit
  const RankOrder* rank = nullptr;   // defaults to default_rank
};

inline ProfitCurve profit_curve(const DerivedRoute& d, double offset = 0.0, double shift = 0.0) {
  ProfitCurve c;
  c.offset = offset;
  c.shift = shift;
  if (!d.active || d.p == 0.0) return c;
  c.head = d.p * d.zeta1;
  c.slope = d.p * d.zeta2;
  c.knee = d.k_tilde_star;
  c.tail = d.p * d.total_demand;
  return c;
}

// Flat at p*zeta_tilde up to k*, then p*Λ/x.
inline ProfitCurve linearized_profit_curve(const DerivedRoute& d, double offset = 0.0) {
  ProfitCurve c;
  c.offset = offset;
  if (!d.active || d.p == 0.0) return c;
  c.head = d.p * d.zeta_tilde;
  c.knee = d.k_star;
  c.tail = d.p * d.total_demand;
  return c;
}

// Driver mass on one route consistent with per-driver profit pi.
inline MassBand supply_at_profit(const DerivedRoute& d, double pi) {
  return profit_curve(d).band(pi);
}

inline double mass_tolerance(double total) { return 1e-12 * std::max(1.0, total); }

namespace detail {
inline void check_offsets(std::size_t n, const std::vector<double>& offsets) {
  if (offsets.size() != n) throw ValidationError("offset vector has wrong length");
  for (double o : offsets)
    if (!(o >= 0.0) || !std::isfinite(o)) throw ValidationError("offsets must be non-negative");
}
} // namespace detail

// Equilibrium of free drivers over arbitrary profit curves. Offsets are read
// from the curves.
inline EquilibriumResult equilibrate(const std::vector<ProfitCurve>& curves, double free_mass,
                                     const RankOrder& rank, double tol = 1e-8,
                                     int max_iter = 200) {
  LevelSolution s = solve_levels(curves, free_mass, rank.fill_order, max_iter, tol);
  EquilibriumResult r;
  r.free = std::move(s.x);
  r.allocation.resize(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i) {
    r.allocation[i] = r.free[i] + curves[i].offset;
    if (r.free[i] > mass_tolerance(free_mass)) r.supported.push_back(i);
  }
  r.pi_eq = s.level;
  r.iterations = s.iterations;
  return r;
}

inline EquilibriumResult wardrop_equilibrium(const Instance& inst, double free_mass,
                                             const std::vector<double>& offsets,
                                             const EquilibriumOptions& opt = {}) {
  const std::size_t n = inst.size();
  detail::check_offsets(n, offsets);
  if (!opt.shifts.empty() && opt.shifts.size() != n)
    throw ValidationError("transfer vector has wrong length");
  std::vector<ProfitCurve> curves;
  curves.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    curves.push_back(profit_curve(inst.derived[i], offsets[i], opt.shifts.empty() ? 0.0 : opt.shifts[i]));
  const RankOrder rank = opt.rank ? *opt.rank : default_rank(inst);
  return equilibrate(curves, free_mass, rank, opt.tol, opt.max_iter);
}

inline EquilibriumResult wardrop_equilibrium(const Instance& inst, double free_mass) {
  return wardrop_equilibrium(inst, free_mass, std::vector<double>(inst.size(), 0.0));
}

inline EquilibriumResult wardrop_equilibrium(const Instance& inst) {
  return wardrop_equilibrium(inst, inst.drivers());
}

// Total drivers willing to work at per-driver profit pi.
inline MassBand aggregate_supply(const Instance& inst, double pi) {
  MassBand t;
  for (const auto& d : inst.derived) {
    const MassBand b = supply_at_profit(d, pi);
    t.lo += b.lo;
    t.hi += b.hi;
  }
  return t;
}

struct EquilibriumViolation {
  std::size_t from = 0; // route with free drivers
  std::size_t to = 0;   // strictly better route
  double profit_from = 0.0;
  double profit_to = 0.0;
};

struct EquilibriumReport {
  bool ok = true;
  std::vector<EquilibriumViolation> violations;
};

// No free driver can gain more than tol (relative) by switching routes.
inline EquilibriumReport is_equilibrium(const Instance& inst, const Allocation& x,
                                        const std::vector<double>& offsets, double tol = 1e-8,
                                        const std::vector<double>& shifts = {}) {
  check_allocation(inst, x);
  detail::check_offsets(inst.size(), offsets);
  const std::size_t n = inst.size();
  std::vector<double> pi(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pi[i] = per_driver_profit(inst.derived[i], x[i]) + (shifts.empty() ? 0.0 : shifts[i]);
    total += x[i];
  }
  EquilibriumReport rep;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] - offsets[i] <= mass_tolerance(total)) continue;
    for (std::size_t j = 0; j < n; ++j) {
      const double scale = std::max({std::abs(pi[i]), std::abs(pi[j]), 1e-300});
      if (pi[j] - pi[i] > tol * scale) rep.violations.push_back({i, j, pi[i], pi[j]});
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

inline EquilibriumReport is_equilibrium(const Instance& inst, const Allocation& x,
                                        double tol = 1e-8) {
  return is_equilibrium(inst, x, std::vector<double>(inst.size(), 0.0), tol);
}

// Lowest objective over equilibria (with no offsets). Equilibria differ only
// in how drivers split across routes sharing a flat at the equilibrium
// level, so this enumerates those splits on a grid. Intended for small n.
inline EquilibriumResult worst_equilibrium(const Instance& inst, double free_mass,
                                           const std::function<double(const Allocation&)>& score,
                                           int grid = 100) {
  const EquilibriumResult canon = wardrop_equilibrium(inst, free_mass);
  std::vector<std::size_t> flat;
  std::vector<MassBand> bands(inst.size());
  double fixed = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    bands[i] = profit_curve(inst.derived[i]).band(canon.pi_eq);
    if (bands[i].hi - bands[i].lo > mass_tolerance(free_mass)) flat.push_back(i);
    else fixed += canon.allocation[i];
  }
  if (flat.size() < 2) return canon;
  if (flat.size() > 6) throw ValidationError("worst_equilibrium supports at most 6 tied routes");
  EquilibriumResult best = canon;
  double best_score = score(canon.allocation);
  const double slack = free_mass - fixed;
  Allocation x = canon.allocation;
  // Enumerate the first |flat|-1 coordinates; the last takes the rest.
  std::vector<int> k(flat.size() - 1, 0);
  for (;;) {
    double used = 0.0;
    bool ok = true;
    for (std::size_t t = 0; t + 1 < flat.size(); ++t) {
      const std::size_t i = flat[t];
      const double v = bands[i].lo + (bands[i].hi - bands[i].lo) * k[t] / grid;
      x[flat[t]] = v;
      used += v;
    }
    const std::size_t last = flat.back();
    const double rest = slack - used;
    if (rest < bands[last].lo - 1e-12 || rest > bands[last].hi + 1e-12) ok = false;
    if (ok) {
      x[last] = std::clamp(rest, bands[last].lo, bands[last].hi);
      const double sc = score(x);
      if (sc < best_score) {
        best_score = sc;
        best.allocation = x;
        best.free = x;
      }
    }
    std::size_t t = 0;
    while (t < k.size() && ++k[t] > grid) k[t++] = 0;
    if (t == k.size()) break;
  }
  best.supported.clear();
  for (std::size_t i = 0; i < inst.size(); ++i)
    if (best.allocation[i] > mass_tolerance(free_mass)) best.supported.push_back(i);
  return best;
}

} // namespace informal_transit
