#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "informal_transit/allocation_opt.hpp"
#include "informal_transit/equilibrium.hpp"
#include "informal_transit/errors.hpp"
#include "informal_transit/model_core.hpp"
#include "informal_transit/objective.hpp"

namespace informal_transit {

struct RatioReport {
  double profit_ratio = 0.0;  // optimal profit / equilibrium profit
  double welfare_ratio = 0.0; // optimal riders served / equilibrium riders served
  double p_max_over_p_min = 0.0;
  double bound_profit = 2.0;
  double bound_welfare = 0.0; // 1 + pmax/pmin
  double eq_per_driver_profit = 0.0;
  double eq_profit = 0.0;
  double eq_riders = 0.0;
  double opt_profit = 0.0;
  double opt_riders = 0.0;
};

// pmax/pmin over active routes; +inf if an active route earns nothing.
inline double profit_spread_ratio(const Instance& inst) {
  double lo = kInf;
  double hi = 0.0;
  for (const auto& d : inst.derived) {
    if (!d.active) continue;
    lo = std::min(lo, d.p);
    hi = std::max(hi, d.p);
  }
  if (!std::isfinite(lo)) throw ValidationError("instance has no active route");
  return lo > 0.0 ? hi / lo : kInf;
}

inline RatioReport ratio_report(const Instance& inst) {
  const EquilibriumResult eq = wardrop_equilibrium(inst);
  RatioReport r;
  r.eq_profit = total_profit(inst, eq.allocation);
  r.eq_riders = riders_served(inst, eq.allocation);
  if (!(r.eq_profit > 0.0) || !(r.eq_riders > 0.0))
    throw UndefinedRatioError("equilibrium objective is zero; ratio undefined");
  r.opt_profit = total_profit(inst, optimize_allocation(inst, Objective::Profit));
  r.opt_riders = riders_served(inst, optimize_allocation(inst, Objective::Welfare));
  r.profit_ratio = r.opt_profit / r.eq_profit;
  r.welfare_ratio = r.opt_riders / r.eq_riders;
  r.p_max_over_p_min = profit_spread_ratio(inst);
  r.bound_welfare = 1.0 + r.p_max_over_p_min;
  r.eq_per_driver_profit = r.eq_profit / inst.drivers();
  return r;
}

// Base configuration used by generated instances: 7-hour window, 4 seats.
inline InstanceConfig standard_config(double drivers) {
  InstanceConfig c;
  c.capacity = 4.0;
  c.t1 = 0.0;
  c.t2 = 420.0;
  c.total_drivers = drivers;
  c.eta_E = 0.61;
  c.eta_L = 2.4;
  c.eta_T = 2.5;
  return c;
}

namespace detail {
// Route with S = 0 whose per-rider profit is p and whose saturation point
// k* equals k, given its demand.
inline RouteParams zero_slack_route(const std::string& id, double p, double demand, double k,
                                    const InstanceConfig& c) {
  RouteParams r;
  r.id = id;
  r.fare = 5.0 * p;
  r.trip_cost = 0.8 * c.capacity * r.fare;
  r.total_demand = demand;
  r.travel_time = k * c.capacity * c.window() / (2.0 * demand);
  r.s_direct = 0.0;
  return r;
}

inline void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0, 1)");
}
} // namespace detail

// Two routes, one driver. Route 2 saturates at 1 - eps drivers; route 1 at
// eps, with its full revenue equal to route 2's per-driver flat profit, so
// all drivers crowd onto route 1 at equilibrium.
inline Instance tight_welfare_instance(double eps, double r) {
  detail::check_eps(eps);
  if (!(r >= 1.0)) throw ValidationError("profit ratio r must be at least 1");
  const InstanceConfig c = standard_config(1.0);
  const double p2 = 1.0;
  const double p1 = r * p2;
  const double demand2 = 100.0;
  const double k2 = 1.0 - eps;
  const double demand1 = p2 * demand2 / (k2 * p1);
  return make_instance(c, {detail::zero_slack_route("r1", p1, demand1, eps, c),
                           detail::zero_slack_route("r2", p2, demand2, k2, c)});
}

inline Instance tight_profit_instance(double eps) { return tight_welfare_instance(eps, 1.0); }

// Same construction; LPF at share alpha attains (k2 + 1)/(min(alpha, k2) + 1).
inline Instance lpf_lower_bound_instance(double alpha, double eps) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
  return tight_profit_instance(eps);
}

// Portable uniform draws so generated instances do not depend on the
// standard library's distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
inline double uniform(std::mt19937_64& rng, double a, double b) { return a + (b - a) * uniform01(rng); }
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

enum class SlackMode { Mixed, Positive, Zero };

struct SamplerOptions {
  std::size_t min_routes = 2;
  std::size_t max_routes = 6;
  double drivers = 1000.0;
  SlackMode slack = SlackMode::Mixed;
  double zero_slack_probability = 0.3; // Mixed only
};

// Route draws: l in [5, 40], fare in [10, 60], trip cost 0.8*F*fare, S zero
// or uniform in [0, 60]. Demands are rescaled so the saturation total lies in
// [0.5 D, 2 D].
inline Instance sample_instance(std::mt19937_64& rng, const SamplerOptions& opt = {}) {
  const InstanceConfig c = standard_config(opt.drivers);
  const std::size_t n = uniform_index(rng, opt.min_routes, opt.max_routes);
  std::vector<RouteParams> routes(n);
  for (std::size_t i = 0; i < n; ++i) {
    RouteParams& r = routes[i];
    r.id = "r" + std::to_string(i + 1);
    r.travel_time = uniform(rng, 5.0, 40.0);
    r.fare = uniform(rng, 10.0, 60.0);
    r.trip_cost = 0.8 * c.capacity * r.fare;
    r.total_demand = uniform(rng, 1000.0, 10000.0);
    double s = 0.0;
    switch (opt.slack) {
    case SlackMode::Zero: s = 0.0; break;
    case SlackMode::Positive: s = uniform(rng, 0.5, 60.0); break;
    case SlackMode::Mixed:
      s = uniform01(rng) < opt.zero_slack_probability ? 0.0 : uniform(rng, 0.0, 60.0);
      break;
    }
    r.s_direct = s;
  }
  const double target = uniform(rng, 0.5, 2.0) * opt.drivers;
  // Saturation points scale linearly with demand.
  const double current = saturation_total(make_instance(c, routes));
  for (auto& r : routes) r.total_demand *= target / current;
  return make_instance(c, std::move(routes));
}

struct BoundViolation {
  std::size_t index = 0;
  std::string reason;
  RatioReport report;
  Instance instance;
};

struct CertifyResult {
  std::size_t checked = 0;
  std::vector<BoundViolation> violations;
};

using RatioFunction = std::function<RatioReport(const Instance&)>;

// Checks 1 <= ratio <= bound (+slack) for every instance.
inline CertifyResult certify_bounds(const std::vector<Instance>& instances, double slack = 1e-7,
                                    const RatioFunction& ratios = ratio_report) {
  CertifyResult out;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const RatioReport r = ratios(instances[k]);
    ++out.checked;
    auto flag = [&](const std::string& why) { out.violations.push_back({k, why, r, instances[k]}); };
    if (!(r.profit_ratio <= r.bound_profit + slack)) flag("profit ratio above 2");
    if (!(r.welfare_ratio <= r.bound_welfare + slack)) flag("welfare ratio above 1 + pmax/pmin");
    if (!(r.profit_ratio >= 1.0 - slack)) flag("profit ratio below 1");
    if (!(r.welfare_ratio >= 1.0 - slack)) flag("welfare ratio below 1");
  }
  return out;
}

inline std::vector<Instance> sample_instances(std::uint64_t seed, std::size_t count,
                                              const SamplerOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(sample_instance(rng, opt));
  return out;
}

} // namespace informal_transit
