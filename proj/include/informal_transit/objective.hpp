#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "informal_transit/errors.hpp"
#include "informal_transit/model_core.hpp"

namespace informal_transit {

// Driver count per route; sums to the number of drivers placed.
using Allocation = std::vector<double>;

enum class Objective { Profit, Welfare };

inline const char* to_string(Objective o) { return o == Objective::Profit ? "profit" : "welfare"; }

inline Objective parse_objective(const std::string& s) {
  if (s == "profit") return Objective::Profit;
  if (s == "welfare") return Objective::Welfare;
  throw ValidationError("unknown objective '" + s + "' (expected profit or welfare)");
}

// Weight of one served rider: p for profit, 1 for riders served.
inline double rider_weight(const DerivedRoute& d, Objective o) {
  return o == Objective::Profit ? d.p : 1.0;
}

inline void check_allocation(const Instance& inst, const Allocation& x) {
  if (x.size() != inst.size())
    throw ValidationError("allocation has " + std::to_string(x.size()) + " entries for " +
                          std::to_string(inst.size()) + " routes");
  for (double v : x)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ValidationError("allocation entries must be finite and non-negative");
}

inline double objective_value(const Instance& inst, Objective o, const Allocation& x) {
  check_allocation(inst, x);
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    total += rider_weight(inst.derived[i], o) * minibus_demand(inst.derived[i], x[i]);
  return total;
}

inline double total_profit(const Instance& inst, const Allocation& x) {
  return objective_value(inst, Objective::Profit, x);
}

inline double riders_served(const Instance& inst, const Allocation& x) {
  return objective_value(inst, Objective::Welfare, x);
}

} // namespace informal_transit
