#pragma once

// Shared fixtures and independent reference computations for the tests.
// The reference code works from raw route parameters and brute force, not
// from the library's derived quantities or level solver.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "informal_transit/informal_transit.hpp"

namespace support {

namespace it = informal_transit;

inline it::InstanceConfig base_config(double drivers = 100.0) {
  it::InstanceConfig c;
  c.capacity = 4.0;
  c.t1 = 0.0;
  c.t2 = 420.0;
  c.total_drivers = drivers;
  c.eta_E = 0.61;
  c.eta_L = 2.4;
  c.eta_T = 2.5;
  return c;
}

// p = fare - trip_cost/F; trip_cost = 0 makes p = fare.
inline it::RouteParams route(const std::string& id, double p, double l, double demand, double s) {
  it::RouteParams r;
  r.id = id;
  r.fare = p;
  r.trip_cost = 0.0;
  r.travel_time = l;
  r.total_demand = demand;
  r.s_direct = s;
  return r;
}

// F=4, l=10, window 420, demand 4200, S=0, p=10.
inline it::Instance fixture_lin(double drivers = 100.0) {
  return it::make_instance(base_config(drivers), {route("lin", 10.0, 10.0, 4200.0, 0.0)});
}

// Same with S = 30.
inline it::Instance fixture_vic(double drivers = 100.0) {
  return it::make_instance(base_config(drivers), {route("vic", 10.0, 10.0, 4200.0, 30.0)});
}

// Two routes with S = 0, one driver: the profit-ratio worst case with
// route 1 saturating at eps and route 2 at 1 - eps.
inline it::Instance two_route_gap(double eps = 0.25) {
  const it::InstanceConfig c = base_config(1.0);
  const double d2 = 100.0;
  const double k2 = 1.0 - eps;
  const double d1 = d2 / k2;
  auto l_for = [&](double k, double demand) { return k * c.capacity * c.window() / (2.0 * demand); };
  return it::make_instance(c, {route("a", 1.0, l_for(eps, d1), d1, 0.0), route("b", 1.0, l_for(k2, d2), d2, 0.0)});
}

inline double relative(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

inline double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// ----- reference model computed from raw parameters -----

struct RawRoute {
  double p, l, demand, s, F, window, eta_e, eta_l;
};

inline RawRoute raw(const it::Instance& inst, std::size_t i) {
  const auto& r = inst.routes[i];
  const auto& c = inst.config;
  double s = r.s_direct ? *r.s_direct : *r.outside_cost - (r.fare + c.eta_T * r.travel_time) / c.conversion();
  return {r.fare - r.trip_cost / c.capacity, r.travel_time, r.total_demand, s, c.capacity, c.window(), c.eta_E, c.eta_L};
}

// Riders served as throughput times service time, capped at total demand.
inline double ref_demand(const RawRoute& r, double x) {
  if (r.s < 0.0 || x <= 0.0) return 0.0;
  const double mu = x * r.F / (2.0 * r.l);
  const double lam = r.demand / r.window;
  const double wait_weight = 1.0 / r.eta_e + 1.0 / r.eta_l;
  double t = r.window;
  if (mu < lam) {
    const double s_bar = r.demand / (mu * wait_weight);
    t = r.window + std::min(r.s, s_bar) * wait_weight * (1.0 - mu / lam);
  }
  return std::min(mu * t, r.demand);
}

inline double ref_profit(const RawRoute& r, double x) {
  if (x <= 0.0) x = 1e-9 * std::max(1.0, r.demand);
  return r.p * ref_demand(r, x) / x;
}

// Root of a non-increasing function on [lo, hi] by plain bisection.
inline double bisect_decreasing(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  if (f(lo) <= 0.0) return lo;
  if (f(hi) >= 0.0) return hi;
  for (int k = 0; k < iters; ++k) {
    const double m = 0.5 * (lo + hi);
    if (f(m) > 0.0) lo = m;
    else hi = m;
  }
  return 0.5 * (lo + hi);
}

// Equilibrium split of `mass` free drivers between two routes with strictly
// decreasing profit, found by bisection on route 0's share.
inline std::vector<double> ref_two_route_equilibrium(const it::Instance& inst, double mass,
                                                     const std::vector<double>& offset = {0.0, 0.0}) {
  const RawRoute a = raw(inst, 0);
  const RawRoute b = raw(inst, 1);
  auto prof = [](const RawRoute& r, double z) {
    if (z <= 0.0) {
      // right limit at zero
      const double h = 1e-7;
      return ref_profit(r, h);
    }
    return ref_profit(r, z);
  };
  auto gap = [&](double x0) { return prof(a, offset[0] + x0) - prof(b, offset[1] + mass - x0); };
  const double x0 = bisect_decreasing(gap, 0.0, mass);
  return {offset[0] + x0, offset[1] + mass - x0};
}

// Dense grid search over the simplex {x >= 0, sum x = budget} for the best
// objective, with one local refinement pass. Works for 2 to 4 routes.
inline double ref_grid_optimum(const it::Instance& inst, it::Objective o, double budget, int coarse) {
  const std::size_t n = inst.size();
  std::vector<RawRoute> rs;
  for (std::size_t i = 0; i < n; ++i) rs.push_back(raw(inst, i));
  auto value = [&](const std::vector<double>& x) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) v += (o == it::Objective::Profit ? rs[i].p : 1.0) * ref_demand(rs[i], x[i]);
    return v;
  };
  double best = -1.0;
  std::vector<double> best_x(n, 0.0);
  auto search = [&](const std::vector<double>& center, double step, int half) {
    std::vector<int> k(n - 1, -half);
    std::vector<double> x(n);
    for (;;) {
      double used = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        x[i] = center[i] + step * k[i];
        if (x[i] < 0.0) ok = false;
        used += x[i];
      }
      x[n - 1] = budget - used;
      if (ok && x[n - 1] >= -1e-12) {
        x[n - 1] = std::max(0.0, x[n - 1]);
        const double v = value(x);
        if (v > best) {
          best = v;
          best_x = x;
        }
      }
      std::size_t t = 0;
      while (t < k.size() && ++k[t] > half) k[t++] = -half;
      if (t == k.size()) break;
    }
  };
  std::vector<double> origin(n, 0.0);
  const double step = budget / coarse;
  // coarse grid anchored at the origin
  {
    std::vector<int> k(n - 1, 0);
    std::vector<double> x(n);
    for (;;) {
      int used = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        x[i] = step * k[i];
        used += k[i];
      }
      if (used <= coarse) {
        x[n - 1] = budget - step * used;
        if (x[n - 1] < 0.0) x[n - 1] = 0.0;
        const double v = value(x);
        if (v > best) {
          best = v;
          best_x = x;
        }
      }
      std::size_t t = 0;
      while (t < k.size() && ++k[t] > coarse) k[t++] = 0;
      if (t == k.size()) break;
    }
  }
  search(best_x, step / 20.0, 20);
  search(best_x, step / 400.0, 20);
  return best;
}

// ----- random generators -----

inline double uniform(std::mt19937_64& rng, double a, double b) {
  return a + (b - a) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// One random route with S drawn from [s_lo, s_hi] (S = 0 when both are 0).
inline it::RouteParams random_route(std::mt19937_64& rng, const std::string& id, double s_lo, double s_hi) {
  it::RouteParams r;
  r.id = id;
  r.fare = uniform(rng, 10.0, 60.0);
  r.trip_cost = 0.8 * 4.0 * r.fare;
  r.travel_time = uniform(rng, 5.0, 40.0);
  r.total_demand = uniform(rng, 500.0, 10000.0);
  r.s_direct = s_hi > 0.0 ? uniform(rng, s_lo, s_hi) : 0.0;
  return r;
}

inline it::Instance random_instance(std::mt19937_64& rng, std::size_t n, double s_lo, double s_hi,
                                    double drivers = -1.0) {
  std::vector<it::RouteParams> rs;
  for (std::size_t i = 0; i < n; ++i) rs.push_back(random_route(rng, "r" + std::to_string(i), s_lo, s_hi));
  it::Instance probe = it::make_instance(base_config(1.0), rs);
  const double sat = it::saturation_total(probe);
  if (drivers <= 0.0) drivers = sat * uniform(rng, 0.3, 1.8);
  return it::make_instance(base_config(drivers), rs);
}

} // namespace support
