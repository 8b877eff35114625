#pragma once

// Route-level demand model for minibus service competing with an outside
// option (walking). Times are in minutes, money in the fare currency, mass
// of riders and drivers in persons.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "informal_transit/errors.hpp"

namespace informal_transit {

struct RouteParams {
  std::string id;
  double fare = 0.0;         // paid by each rider
  double travel_time = 0.0;  // one-way trip time, minutes
  double trip_cost = 0.0;    // driver cost per trip
  double total_demand = 0.0; // riders over the whole window
  std::optional<double> outside_cost; // outside option cost, waiting minutes
  std::optional<double> s_direct;     // slack S given directly

  bool operator==(const RouteParams&) const = default;
};

struct InstanceConfig {
  double capacity = 0.0; // F, riders per vehicle
  double t1 = 0.0;
  double t2 = 0.0;
  double total_drivers = 0.0; // D
  double eta_E = 0.0;
  double eta_L = 0.0;
  double eta_T = 0.0;
  std::optional<double> money_per_minute; // defaults to eta_T

  double window() const { return t2 - t1; }
  double conversion() const { return money_per_minute.value_or(eta_T); }
  // (eta_E + eta_L) / (eta_E * eta_L)
  double delay_factor() const { return (eta_E + eta_L) / (eta_E * eta_L); }

  bool operator==(const InstanceConfig&) const = default;
};

struct DerivedRoute {
  std::string id;
  double p = 0.0;           // per-rider profit to a driver
  double s = 0.0;           // slack of the outside option over minibus cost
  double window = 0.0;      // Δ
  double lambda_rate = 0.0; // Λ/Δ
  double total_demand = 0.0;
  double travel_time = 0.0;
  double capacity = 0.0;
  double eta_E = 0.0;
  double eta_L = 0.0;
  double delay_factor = 0.0;
  double k_star = 0.0;       // drivers needed to carry everyone with no queue
  double k_tilde_star = 0.0; // drivers at which all demand is captured
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double zeta_tilde = 0.0; // Λ/k*
  double gamma = 0.0;
  bool active = false;

  // Rider throughput per minute with x drivers.
  double service_rate(double x) const { return x * capacity / (2.0 * travel_time); }
};

inline void validate(const InstanceConfig& c) {
  if (!(c.eta_E > 0.0 && c.eta_E < 1.0))
    throw ValidationError("eta_E must lie in (0, 1)");
  if (!(c.eta_L > 0.0)) throw ValidationError("eta_L must be positive");
  if (!(c.eta_T > 0.0)) throw ValidationError("eta_T must be positive");
  if (!(c.t2 > c.t1)) throw ValidationError("t2 must exceed t1");
  if (!(c.capacity > 0.0)) throw ValidationError("F must be positive");
  if (!(c.total_drivers > 0.0)) throw ValidationError("D must be positive");
  if (c.money_per_minute && !(*c.money_per_minute > 0.0))
    throw ValidationError("money_per_minute must be positive");
}

inline void validate(const RouteParams& r) {
  auto fail = [&](const std::string& what) {
    throw ValidationError("route '" + r.id + "': " + what);
  };
  if (!(r.fare > 0.0)) fail("fare must be positive");
  if (!(r.travel_time > 0.0)) fail("travel_time must be positive");
  if (!(r.trip_cost >= 0.0)) fail("trip_cost must be non-negative");
  if (!(r.total_demand > 0.0)) fail("Lambda must be positive");
  if (r.outside_cost.has_value() == r.s_direct.has_value())
    fail("exactly one of outside_cost and S must be given");
  if (r.outside_cost && !std::isfinite(*r.outside_cost)) fail("outside_cost must be finite");
  if (r.s_direct && !std::isfinite(*r.s_direct)) fail("S must be finite");
}

inline DerivedRoute derive_route(const RouteParams& r, const InstanceConfig& c) {
  validate(r);
  validate(c);
  DerivedRoute d;
  d.id = r.id;
  d.p = r.fare - r.trip_cost / c.capacity;
  if (d.p < 0.0)
    throw ValidationError("route '" + r.id + "': trip_cost/F exceeds fare (negative profit per rider)");
  d.s = r.s_direct ? *r.s_direct
                   : *r.outside_cost - (r.fare + c.eta_T * r.travel_time) / c.conversion();
  d.window = c.window();
  d.total_demand = r.total_demand;
  d.lambda_rate = r.total_demand / d.window;
  d.travel_time = r.travel_time;
  d.capacity = c.capacity;
  d.eta_E = c.eta_E;
  d.eta_L = c.eta_L;
  d.delay_factor = c.delay_factor();
  d.k_star = 2.0 * r.travel_time * d.lambda_rate / c.capacity;
  d.zeta_tilde = r.total_demand / d.k_star;
  d.active = d.s >= 0.0;
  if (!d.active) {
    d.k_tilde_star = d.k_star;
    return d;
  }
  const double sg = d.s * d.delay_factor;
  d.k_tilde_star = d.k_star;
  if (sg > 0.0)
    d.k_tilde_star = std::min(d.k_star, 2.0 * r.travel_time * r.total_demand / (c.capacity * sg));
  const double rate = c.capacity / (2.0 * r.travel_time);
  d.zeta1 = rate * (d.window + sg);
  d.zeta2 = rate * rate * sg * d.window / r.total_demand;
  d.gamma = sg / d.window;
  return d;
}

inline std::vector<DerivedRoute> derive_routes(const std::vector<RouteParams>& routes,
                                               const InstanceConfig& c) {
  std::vector<DerivedRoute> out;
  out.reserve(routes.size());
  for (const auto& r : routes) out.push_back(derive_route(r, c));
  return out;
}

// Riders served over the window with x drivers.
inline double minibus_demand(const DerivedRoute& d, double x) {
  if (!d.active || x <= 0.0) return 0.0;
  if (x < d.k_tilde_star) return d.zeta1 * x - d.zeta2 * x * x;
  return d.total_demand;
}

inline double per_driver_profit(const DerivedRoute& d, double x) {
  if (!d.active) return 0.0;
  if (x < d.k_tilde_star) return d.p * (d.zeta1 - d.zeta2 * std::max(x, 0.0));
  return d.p * d.total_demand / x;
}

// Expected minibus time (queueing plus on-time window) seen by a rider.
inline double service_time(const DerivedRoute& d, double x) {
  if (!(x > 0.0)) throw ValidationError("service_time needs x > 0");
  if (!d.active) throw RegimeError("route '" + d.id + "' is inactive (S < 0)");
  const double mu = d.service_rate(x);
  if (mu >= d.lambda_rate) return d.window;
  const double s_bar = d.total_demand / (mu * d.delay_factor);
  return d.window + std::min(d.s, s_bar) * d.delay_factor * (1.0 - mu / d.lambda_rate);
}

struct RiderSchedule {
  double n_early = 0.0;
  double n_late = 0.0;
  double len_early = 0.0;
  double len_ontime = 0.0;
  double len_late = 0.0;
};

inline RiderSchedule rider_schedule(const DerivedRoute& d, double x) {
  if (!(x > 0.0)) throw ValidationError("rider_schedule needs x > 0");
  if (!d.active) throw RegimeError("route '" + d.id + "' is inactive (S < 0)");
  const double mu = d.service_rate(x);
  if (mu >= d.lambda_rate) throw RegimeError("no queue: service rate covers arrivals");
  const double s_bar = d.total_demand / (mu * d.delay_factor);
  if (d.s >= s_bar) throw RegimeError("all demand captured: S is at or above S-bar");
  RiderSchedule r;
  r.n_early = mu * d.s / d.eta_E;
  r.n_late = mu * d.s / d.eta_L;
  r.len_early = d.s / d.eta_E;
  r.len_late = d.s / d.eta_L;
  r.len_ontime = (1.0 - d.s / s_bar) * d.window;
  return r;
}

inline double linearized_demand(const DerivedRoute& d, double x) {
  if (!d.active || x <= 0.0) return 0.0;
  return d.total_demand * std::min(x / d.k_star, 1.0);
}

inline double linearized_per_driver_profit(const DerivedRoute& d, double x) {
  if (!d.active) return 0.0;
  if (x <= d.k_star) return d.p * d.zeta_tilde;
  return d.p * d.total_demand / x;
}

inline double instance_gamma(const std::vector<DerivedRoute>& routes) {
  double g = -1.0;
  for (const auto& d : routes)
    if (d.active) g = std::max(g, d.gamma);
  if (g < 0.0) throw ValidationError("instance has no active route");
  return g;
}

struct Instance {
  InstanceConfig config;
  std::vector<RouteParams> routes;
  std::vector<DerivedRoute> derived;

  std::size_t size() const { return routes.size(); }
  double drivers() const { return config.total_drivers; }
};

inline Instance make_instance(InstanceConfig config, std::vector<RouteParams> routes) {
  if (routes.empty()) throw ValidationError("instance has no routes");
  for (std::size_t i = 0; i < routes.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (routes[i].id == routes[j].id) throw ValidationError("duplicate route id '" + routes[i].id + "'");
  Instance inst{std::move(config), std::move(routes), {}};
  inst.derived = derive_routes(inst.routes, inst.config);
  return inst;
}

inline Instance with_drivers(const Instance& inst, double drivers) {
  InstanceConfig c = inst.config;
  c.total_drivers = drivers;
  validate(c);
  Instance out = inst;
  out.config = c;
  return out;
}

inline double saturation_total(const Instance& inst) {
  double s = 0.0;
  for (const auto& d : inst.derived)
    if (d.active) s += d.k_tilde_star;
  return s;
}

} // namespace informal_transit
