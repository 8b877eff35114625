#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace it = informal_transit;

namespace {

std::vector<it::DerivedRoute> random_routes(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<it::DerivedRoute> out;
  for (int k = 0; k < count; ++k) {
    const double s_hi = k % 4 == 0 ? 0.0 : 80.0;
    out.push_back(it::derive_route(support::random_route(rng, "q" + std::to_string(k), 0.0, s_hi),
                                   support::base_config()));
  }
  return out;
}

} // namespace

TEST(ModelProperties, DemandMonotoneAndProfitNonIncreasing) {
  for (const auto& d : random_routes(11, 200)) {
    const double top = 3.0 * d.k_tilde_star;
    double prev_l = -1.0;
    double prev_pi = it::per_driver_profit(d, 0.0);
    for (int k = 0; k <= 600; ++k) {
      const double x = top * k / 600.0;
      const double l = it::minibus_demand(d, x);
      const double pi = it::per_driver_profit(d, x);
      EXPECT_GE(l, prev_l - 1e-9 * d.total_demand) << d.id << " x=" << x;
      EXPECT_LE(pi, prev_pi + 1e-9 * prev_pi) << d.id << " x=" << x;
      prev_l = l;
      prev_pi = pi;
    }
  }
}

TEST(ModelProperties, ContinuousAtSaturation) {
  for (const auto& d : random_routes(12, 200)) {
    const double k = d.k_tilde_star;
    const double left = d.zeta1 * k - d.zeta2 * k * k;
    EXPECT_NEAR(left, d.total_demand, 1e-9 * d.total_demand) << d.id;
    EXPECT_NEAR(it::minibus_demand(d, std::nextafter(k, 0.0)), d.total_demand, 1e-9 * d.total_demand);
  }
}

TEST(ModelProperties, LinearizedSandwich) {
  for (const auto& d : random_routes(13, 200)) {
    for (int k = 0; k <= 400; ++k) {
      const double x = 2.0 * d.k_star * k / 400.0;
      const double lin = it::linearized_demand(d, x);
      const double l = it::minibus_demand(d, x);
      EXPECT_LE(lin, l * (1.0 + 1e-12) + 1e-12) << d.id << " x=" << x;
      EXPECT_LE(l, (1.0 + d.gamma) * lin * (1.0 + 1e-12) + 1e-12) << d.id << " x=" << x;
    }
  }
}

TEST(ModelProperties, ThroughputTimesServiceTimeMatchesDemand) {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 200; ++k) {
    const it::Instance inst = support::random_instance(rng, 1, 0.0, k % 3 ? 200.0 : 0.0);
    const auto& d = inst.derived[0];
    const auto ref = support::raw(inst, 0);
    for (int j = 1; j <= 200; ++j) {
      const double x = d.k_tilde_star * j / 200.0;
      const double closed = it::minibus_demand(d, x);
      EXPECT_NEAR(d.service_rate(x) * it::service_time(d, x), closed, 1e-9 * closed);
      EXPECT_NEAR(support::ref_demand(ref, x), closed, 1e-9 * closed);
    }
  }
}

TEST(ModelProperties, ScheduleMassConservation) {
  for (const auto& d : random_routes(15, 200)) {
    if (d.s <= 0.0) continue;
    for (int j = 1; j < 100; ++j) {
      const double x = d.k_tilde_star * j / 100.0;
      const double mu = d.service_rate(x);
      const double s_bar = d.total_demand / (mu * d.delay_factor);
      if (mu >= d.lambda_rate || d.s >= s_bar) continue;
      const it::RiderSchedule s = it::rider_schedule(d, x);
      const double expect = d.s / s_bar * d.total_demand;
      EXPECT_NEAR(s.n_early + s.n_late, expect, 1e-9 * expect);
      EXPECT_NEAR(s.len_early + s.len_ontime + s.len_late, it::service_time(d, x), 1e-9 * d.window);
    }
  }
}
