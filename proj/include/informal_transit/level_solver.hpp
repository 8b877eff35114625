#pragma once

// Common-level solver for separable monotone curves.
//
// Each route exposes a non-increasing per-unit value curve. For a level v the
// curve reports the band [lo, hi] of masses whose value equals v (a point
// except on flats and at asymptotes). The solver finds the level at which
// the bands can absorb a given mass, and splits flat bands by a fill order.
// Both the driver equilibrium (per-driver profit) and the allocation
// optimizer (marginal objective) are instances of this problem.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "informal_transit/errors.hpp"

namespace informal_transit {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct MassBand {
  double lo = 0.0;
  double hi = 0.0;
};

namespace detail {
inline bool near_level(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) <= 1e-12 * scale;
}
} // namespace detail

// Value per driver at total route mass z: head - slope*z on [0, knee), tail/z
// beyond, plus a constant shift. `offset` is mass already on the route; the
// band is reported for the additional mass only.
struct ProfitCurve {
  double head = 0.0;
  double slope = 0.0;
  double knee = kInf;
  double tail = 0.0;
  double offset = 0.0;
  double shift = 0.0;

  double base_value(double z) const {
    if (z < knee) return head - slope * std::max(z, 0.0);
    return tail / z;
  }
  double value(double z) const { return base_value(z) + shift; }

  MassBand band(double level) const {
    const double u = level - shift;
    double zlo = 0.0;
    double zhi = 0.0;
    if (slope == 0.0 && detail::near_level(u, head)) {
      zlo = 0.0;
      zhi = knee;
    } else if (u >= head) {
      zlo = zhi = 0.0;
    } else {
      const double at_knee = std::isfinite(knee) ? head - slope * knee : -kInf;
      if (slope > 0.0 && u >= at_knee) {
        zlo = zhi = (head - u) / slope;
      } else if (std::isfinite(knee) && u > 0.0 && tail > 0.0) {
        zlo = zhi = std::max(tail / u, knee);
      } else {
        zlo = zhi = kInf;
      }
    }
    return {std::max(0.0, zlo - offset), std::max(0.0, zhi - offset)};
  }

  void critical_levels(std::vector<double>& out) const {
    out.push_back(value(offset));
    if (slope == 0.0 && offset < knee) out.push_back(head + shift);
    out.push_back(shift);
  }
};

// Marginal objective per driver: head - slope*x on [0, knee), zero beyond,
// restricted to [floor, ceil].
struct MarginalCurve {
  double head = 0.0;
  double slope = 0.0;
  double knee = 0.0;
  double floor = 0.0;
  double ceil = kInf;

  double value(double x) const { return x < knee ? head - slope * std::max(x, 0.0) : 0.0; }

  MassBand band(double level) const {
    double lo = 0.0;
    double hi = 0.0;
    if (level < 0.0) {
      lo = hi = kInf;
    } else if (level == 0.0) {
      lo = head > 0.0 ? knee : 0.0;
      hi = kInf;
    } else if (slope == 0.0) {
      if (detail::near_level(level, head)) {
        lo = 0.0;
        hi = knee;
      } else if (level > head) {
        lo = hi = 0.0;
      } else {
        lo = hi = knee;
      }
    } else if (level >= head) {
      lo = hi = 0.0;
    } else if (level >= head - slope * knee) {
      lo = hi = (head - level) / slope;
    } else {
      lo = hi = knee;
    }
    return {std::clamp(lo, floor, ceil), std::clamp(hi, floor, ceil)};
  }

  void critical_levels(std::vector<double>& out) const {
    out.push_back(head);
    if (floor < knee) out.push_back(value(floor));
    out.push_back(0.0);
  }
};

struct LevelSolution {
  std::vector<double> x;
  double level = 0.0;
  int iterations = 0;
};

// Finds the level v with sum lo(v) <= mass <= sum hi(v) and an allocation in
// the bands. Slack on flat bands goes to routes in `fill_order` sequence.
template <class Curve>
LevelSolution solve_levels(std::span<const Curve> curves, double mass,
                           std::span<const std::size_t> fill_order, int max_iter = 200,
                           double tol = 1e-8) {
  const std::size_t n = curves.size();
  if (!(mass >= 0.0) || !std::isfinite(mass))
    throw ValidationError("mass to allocate must be finite and non-negative");
  if (fill_order.size() != n) throw ValidationError("fill order must list every route");

  std::vector<double> levels;
  for (const auto& c : curves) c.critical_levels(levels);
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<MassBand> bands(n);
  auto totals = [&](double v, double& lo, double& hi) {
    lo = hi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      bands[i] = curves[i].band(v);
      lo += bands[i].lo;
      hi += bands[i].hi;
    }
  };

  LevelSolution sol;
  sol.x.assign(n, 0.0);
  double upper = kInf;
  for (double v : levels) {
    double lo = 0.0;
    double hi = 0.0;
    totals(v, lo, hi);
    if (hi < mass) {
      upper = v;
      continue;
    }
    if (lo <= mass) {
      double rest = mass - lo;
      for (std::size_t i = 0; i < n; ++i) sol.x[i] = bands[i].lo;
      for (std::size_t i : fill_order) {
        if (rest <= 0.0) break;
        const double give = std::min(bands[i].hi - bands[i].lo, rest);
        sol.x[i] += give;
        rest -= give;
      }
      sol.level = v;
      return sol;
    }

    // The bands are single points strictly between v and upper, and their
    // sum decreases continuously, so bisect on the level.
    double a = v;
    double b = upper;
    if (!std::isfinite(b)) {
      b = v + std::max(1.0, std::abs(v));
      for (int k = 0; k < 2100; ++k) {
        totals(b, lo, hi);
        if (hi < mass) break;
        b = v + 2.0 * (b - v);
      }
    }
    int it = 0;
    for (; it < max_iter; ++it) {
      const double m = a + 0.5 * (b - a);
      if (m <= a || m >= b) break;
      totals(m, lo, hi);
      if (hi >= mass) a = m;
      else b = m;
    }
    const double width = b - a;
    if (it >= max_iter && width > tol * std::max(std::abs(a), std::abs(b)))
      throw ConvergenceError("level bisection did not converge in " + std::to_string(max_iter) +
                             " iterations");
    // Take the allocation at b (sum just below mass) and hand the residual
    // to the routes whose band grows between b and a. Routes pinned at a
    // knee or bound stay exactly there.
    totals(b, lo, hi);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sol.x[i] = bands[i].hi;
      sum += sol.x[i];
    }
    const double residual = mass - sum;
    if (residual > 0.0) {
      totals(a, lo, hi);
      std::vector<double> w(n, 0.0);
      bool unbounded = false;
      for (std::size_t i = 0; i < n; ++i) unbounded = unbounded || !std::isfinite(bands[i].hi);
      double wsum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = unbounded ? (std::isfinite(bands[i].hi) ? 0.0 : 1.0) : std::max(bands[i].hi - sol.x[i], 0.0);
        wsum += w[i];
      }
      if (!(wsum > 0.0)) {
        for (std::size_t i = 0; i < n; ++i) w[i] = sol.x[i];
        wsum = sum;
      }
      if (wsum > 0.0) {
        for (std::size_t i = 0; i < n; ++i) sol.x[i] += residual * w[i] / wsum;
      } else {
        sol.x[fill_order.front()] += residual;
      }
    }
    sol.level = b;
    sol.iterations = it;
    return sol;
  }
  throw ValidationError("mass exceeds what the routes can absorb");
}

template <class Curve>
LevelSolution solve_levels(const std::vector<Curve>& curves, double mass,
                           const std::vector<std::size_t>& fill_order, int max_iter = 200,
                           double tol = 1e-8) {
  return solve_levels(std::span<const Curve>(curves), mass,
                      std::span<const std::size_t>(fill_order), max_iter, tol);
}

} // namespace informal_transit
