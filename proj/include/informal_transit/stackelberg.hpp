#pragma once

// Partial centralization: a planner places alpha*D drivers (y), the remaining
// drivers settle into an equilibrium on top of them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "informal_transit/allocation_opt.hpp"
#include "informal_transit/equilibrium.hpp"
#include "informal_transit/errors.hpp"
#include "informal_transit/model_core.hpp"
#include "informal_transit/objective.hpp"
#include "informal_transit/parallel.hpp"

namespace informal_transit {

struct StackelbergOutcome {
  Allocation y;          // planner-placed drivers
  Allocation x_response; // free drivers at equilibrium
  Allocation combined;
  double objective_value = 0.0;
  double alpha = 0.0;
};

namespace detail {
inline void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
}
} // namespace detail

// Equilibrium of the (1 - alpha) D free drivers given planner placement y.
inline StackelbergOutcome stackelberg_response(const Instance& inst, Objective o, double alpha,
                                               const Allocation& y) {
  detail::check_alpha(alpha);
  check_allocation(inst, y);
  const double free_mass = (1.0 - alpha) * inst.drivers();
  const EquilibriumResult eq = wardrop_equilibrium(inst, free_mass, y);
  StackelbergOutcome out;
  out.y = y;
  out.x_response = eq.free;
  out.combined = eq.allocation;
  out.objective_value = objective_value(inst, o, out.combined);
  out.alpha = alpha;
  return out;
}

// Lowest-profit-first: the planner covers the optimal allocation on the
// least profitable routes, where free drivers would not go on their own.
inline StackelbergOutcome lpf(const Instance& inst, double alpha, Objective o) {
  detail::check_alpha(alpha);
  const std::size_t n = inst.size();
  const Allocation target = optimize_allocation(inst, o, inst.drivers());
  std::vector<double> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = per_driver_profit(inst.derived[i], target[i]);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pi[a] < pi[b]; });
  // Equal profits: welfare fills the route carrying more riders per driver first.
  for (std::size_t s = 0; s < n;) {
    std::size_t e = s + 1;
    while (e < n && detail::near_level(pi[order[e]], pi[order[s]])) ++e;
    if (o == Objective::Welfare) {
      std::stable_sort(order.begin() + s, order.begin() + e, [&](std::size_t a, std::size_t b) {
        return inst.derived[a].zeta_tilde > inst.derived[b].zeta_tilde;
      });
    } else {
      std::sort(order.begin() + s, order.begin() + e);
    }
    s = e;
  }

  Allocation y(n, 0.0);
  double rest = alpha * inst.drivers();
  for (std::size_t i : order) {
    if (rest <= 0.0) break;
    y[i] = std::min(target[i], rest);
    rest -= y[i];
  }
  return stackelberg_response(inst, o, alpha, y);
}

// Linearized non-compliant-first: predict where free drivers go under the
// linearized profit, then let the planner fill what they leave uncovered.
inline StackelbergOutcome lncf(const Instance& inst, double alpha, Objective o) {
  detail::check_alpha(alpha);
  const std::size_t n = inst.size();
  const double drivers = inst.drivers();
  const RankOrder rank = default_rank(inst);

  std::vector<ProfitCurve> lin;
  for (const auto& d : inst.derived) lin.push_back(linearized_profit_curve(d));
  const EquilibriumResult x0 = equilibrate(lin, (1.0 - alpha) * drivers, rank);

  std::vector<MarginalCurve> curves(n);
  std::vector<double> spread(n, 0.0);
  double room_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& d = inst.derived[i];
    const double room = d.active ? std::max(d.k_star - x0.allocation[i], 0.0) : 0.0;
    curves[i].head = d.active ? rider_weight(d, o) * d.zeta_tilde : 0.0;
    curves[i].knee = room;
    curves[i].ceil = room;
    spread[i] = d.active ? d.k_star : 0.0;
    room_total += room;
  }
  const double budget = alpha * drivers;
  Allocation y;
  if (budget <= room_total) {
    y = maximize_separable(curves, budget, spread, rank).x;
  } else {
    // Free and planner drivers already cover every k*; spread the leftover
    // in proportion to k*.
    y.resize(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = curves[i].ceil;
    double wsum = std::accumulate(spread.begin(), spread.end(), 0.0);
    if (!(wsum > 0.0)) {
      spread.assign(n, 1.0);
      wsum = static_cast<double>(n);
    }
    const double leftover = budget - room_total;
    for (std::size_t i = 0; i < n; ++i) y[i] += leftover * spread[i] / wsum;
  }
  return stackelberg_response(inst, o, alpha, y);
}

// Planner optimizes its own alpha*D drivers in isolation.
inline StackelbergOutcome greedy(const Instance& inst, double alpha, Objective o) {
  detail::check_alpha(alpha);
  const Allocation y = optimize_allocation(inst, o, alpha * inst.drivers());
  return stackelberg_response(inst, o, alpha, y);
}

// Best planner placement over a simplex grid with spacing grid_step
// (default alpha*D/200). Exponential in n; limited to four routes.
inline StackelbergOutcome brute_force_stackelberg(const Instance& inst, double alpha, Objective o,
                                                  double grid_step = 0.0, unsigned threads = 0) {
  detail::check_alpha(alpha);
  const std::size_t n = inst.size();
  if (n > 4) throw ValidationError("brute-force search supports at most 4 routes");
  const double total = alpha * inst.drivers();
  if (total <= 0.0) return stackelberg_response(inst, o, alpha, Allocation(n, 0.0));
  if (grid_step <= 0.0) grid_step = total / 200.0;
  const int steps = std::max(1, static_cast<int>(std::lround(total / grid_step)));
  const double unit = total / steps;

  // One task per value of the first coordinate; each keeps its first best.
  struct Best {
    double value = -kInf;
    Allocation y;
  };
  std::vector<Best> best(static_cast<std::size_t>(steps) + 1);
  detail::parallel_for(
      best.size(),
      [&](std::size_t k0) {
        Best& b = best[k0];
        std::vector<int> k(n, 0);
        k[0] = static_cast<int>(k0);
        Allocation y(n, 0.0);
        auto visit = [&] {
          for (std::size_t i = 0; i < n; ++i) y[i] = unit * k[i];
          const double v = stackelberg_response(inst, o, alpha, y).objective_value;
          if (v > b.value) {
            b.value = v;
            b.y = y;
          }
        };
        const int rest = steps - k[0];
        if (n == 1) {
          if (rest == 0) visit();
          return;
        }
        // Enumerate k[1..n-2]; k[n-1] takes the remainder.
        std::vector<int> inner(n - 2, 0);
        for (;;) {
          int used = 0;
          for (std::size_t t = 0; t < inner.size(); ++t) {
            k[t + 1] = inner[t];
            used += inner[t];
          }
          if (used <= rest) {
            k[n - 1] = rest - used;
            visit();
          }
          std::size_t t = 0;
          while (t < inner.size() && ++inner[t] > rest) inner[t++] = 0;
          if (t == inner.size()) break;
        }
      },
      threads);

  const Best* winner = nullptr;
  for (const auto& b : best)
    if (!b.y.empty() && (!winner || b.value > winner->value)) winner = &b;
  return stackelberg_response(inst, o, alpha, winner->y);
}

enum class StackelbergAlgo { Lpf, Lncf, Greedy, Brute };

inline const char* to_string(StackelbergAlgo a) {
  switch (a) {
  case StackelbergAlgo::Lpf: return "lpf";
  case StackelbergAlgo::Lncf: return "lncf";
  case StackelbergAlgo::Greedy: return "greedy";
  case StackelbergAlgo::Brute: return "brute";
  }
  return "?";
}

inline StackelbergAlgo parse_algo(const std::string& s) {
  if (s == "lpf") return StackelbergAlgo::Lpf;
  if (s == "lncf") return StackelbergAlgo::Lncf;
  if (s == "greedy") return StackelbergAlgo::Greedy;
  if (s == "brute") return StackelbergAlgo::Brute;
  throw ValidationError("unknown algorithm '" + s + "' (expected lpf, lncf, greedy or brute)");
}

inline StackelbergOutcome run_stackelberg(const Instance& inst, StackelbergAlgo a, double alpha,
                                          Objective o) {
  switch (a) {
  case StackelbergAlgo::Lpf: return lpf(inst, alpha, o);
  case StackelbergAlgo::Lncf: return lncf(inst, alpha, o);
  case StackelbergAlgo::Greedy: return greedy(inst, alpha, o);
  case StackelbergAlgo::Brute: return brute_force_stackelberg(inst, alpha, o);
  }
  throw ValidationError("unknown algorithm");
}

} // namespace informal_transit
