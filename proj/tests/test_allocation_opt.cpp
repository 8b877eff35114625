#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace it = informal_transit;
using it::Objective;

TEST(Objective, LinearFixtureValues) {
  const it::Instance inst = support::fixture_lin();
  EXPECT_NEAR(it::objective_value(inst, Objective::Profit, {25.0}), 21000.0, 1e-9);
  EXPECT_NEAR(it::objective_value(inst, Objective::Welfare, {25.0}), 2100.0, 1e-9);
  EXPECT_THROW(it::objective_value(inst, Objective::Profit, {-1.0}), it::ValidationError);
  EXPECT_THROW(it::objective_value(inst, Objective::Profit, {1.0, 2.0}), it::ValidationError);
}

TEST(MarginalValue, FixtureValues) {
  const auto& lin = support::fixture_lin().derived[0];
  EXPECT_NEAR(it::marginal_value(lin, Objective::Profit, 25.0), 840.0, 1e-9);
  EXPECT_NEAR(it::marginal_value(lin, Objective::Profit, 50.0), 840.0, 1e-9); // left derivative at the kink
  EXPECT_EQ(it::marginal_value(lin, Objective::Profit, 50.5), 0.0);
  const auto& vic = support::fixture_vic().derived[0];
  EXPECT_NEAR(it::marginal_value(vic, Objective::Welfare, 0.0), 96.336066, 1e-5);
}

TEST(MarginalValue, MatchesFiniteDifference) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 100; ++k) {
    const it::Instance inst = support::random_instance(rng, 1, 0.0, 60.0);
    const auto ref = support::raw(inst, 0);
    const auto& d = inst.derived[0];
    for (int j = 1; j < 20; ++j) {
      const double x = d.k_tilde_star * j / 20.0;
      const double h = 1e-6 * d.k_tilde_star;
      const double fd = ref.p * (support::ref_demand(ref, x + h) - support::ref_demand(ref, x - h)) / (2 * h);
      EXPECT_NEAR(it::marginal_value(d, Objective::Profit, x), fd, 1e-5 * std::abs(fd) + 1e-6);
    }
  }
}

TEST(Optimize, SaturatesBothRoutesInGapInstance) {
  const it::Instance inst = support::two_route_gap(0.25);
  const it::Allocation x = it::optimize_allocation(inst, Objective::Profit);
  EXPECT_NEAR(x[0], inst.derived[0].k_tilde_star, 1e-12);
  EXPECT_NEAR(x[1], inst.derived[1].k_tilde_star, 1e-12);
}

TEST(Optimize, IdenticalRoutesSplitEvenly) {
  const it::Instance inst = it::make_instance(
      support::base_config(40.0), {support::route("a", 10, 10, 4200, 30), support::route("b", 10, 10, 4200, 30)});
  const it::Allocation x = it::optimize_allocation(inst, Objective::Welfare);
  EXPECT_NEAR(x[0], 20.0, 1e-9);
  EXPECT_NEAR(x[1], 20.0, 1e-9);
}

TEST(Optimize, SurplusSpreadInProportionToSaturation) {
  const it::Instance inst = it::make_instance(
      support::base_config(300.0), {support::route("a", 10, 10, 4200, 30), support::route("b", 10, 20, 4200, 30)});
  const double k0 = inst.derived[0].k_tilde_star;
  const double k1 = inst.derived[1].k_tilde_star;
  const it::Allocation x = it::optimize_allocation(inst, Objective::Profit);
  const double surplus = 300.0 - k0 - k1;
  EXPECT_NEAR(x[0], k0 + surplus * k0 / (k0 + k1), 1e-9);
  EXPECT_NEAR(x[1], k1 + surplus * k1 / (k0 + k1), 1e-9);
}

TEST(Optimize, HonoursFloorsAndCeilings) {
  std::mt19937_64 rng(42);
  const it::Instance inst = support::random_instance(rng, 4, 1.0, 60.0);
  it::OptimizeOptions opt;
  opt.floor = {0.1 * inst.drivers(), 0.0, 0.0, 0.0};
  opt.ceiling = {it::kInf, 0.05 * inst.drivers(), it::kInf, it::kInf};
  const it::Allocation x = it::optimize_allocation(inst, Objective::Profit, inst.drivers(), opt);
  EXPECT_GE(x[0], opt.floor[0] - 1e-12);
  EXPECT_LE(x[1], opt.ceiling[1] + 1e-12);
  EXPECT_NEAR(support::sum(x), inst.drivers(), 1e-9 * inst.drivers());
}

TEST(Optimize, RejectsInfeasibleBounds) {
  const it::Instance inst = support::fixture_vic(10.0);
  it::OptimizeOptions lo;
  lo.floor = {20.0};
  EXPECT_THROW(it::optimize_allocation(inst, Objective::Profit, 10.0, lo), it::ValidationError);
  it::OptimizeOptions hi;
  hi.ceiling = {5.0};
  EXPECT_THROW(it::optimize_allocation(inst, Objective::Profit, 10.0, hi), it::ValidationError);
}

TEST(Optimize, MatchesDenseGridOnFourRoutes) {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 3; ++k) {
    const it::Instance inst = support::random_instance(rng, 4, 1.0, 60.0);
    for (Objective o : {Objective::Profit, Objective::Welfare}) {
      const double got = it::objective_value(inst, o, it::optimize_allocation(inst, o));
      // 180 steps per axis on the 3-dimensional simplex: about 10^6 points.
      const double grid = support::ref_grid_optimum(inst, o, inst.drivers(), 180);
      EXPECT_GE(got, grid * (1.0 - 1e-9));
      EXPECT_LE(got, grid * (1.0 + 1e-4));
    }
  }
}

TEST(OptimizeProperties, KktCertificate) {
  std::mt19937_64 rng(44);
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 1 + rng() % 6;
    const it::Instance inst = support::random_instance(rng, n, 0.0, k % 2 ? 60.0 : 0.0);
    for (Objective o : {Objective::Profit, Objective::Welfare}) {
      const it::SeparableResult r = it::optimize_allocation_detail(inst, o, inst.drivers());
      const double mu = r.multiplier;
      double scale = 0.0;
      for (const auto& d : inst.derived) scale = std::max(scale, it::rider_weight(d, o) * d.zeta1);
      EXPECT_NEAR(support::sum(r.x), inst.drivers(), 1e-9 * inst.drivers());
      for (std::size_t i = 0; i < n; ++i) {
        const auto& d = inst.derived[i];
        const double left = it::marginal_value(d, o, r.x[i]);
        const double right = r.x[i] < d.k_tilde_star && d.active
                                 ? it::rider_weight(d, o) * (d.zeta1 - 2.0 * d.zeta2 * r.x[i])
                                 : 0.0;
        if (r.x[i] > 0.0) {
          EXPECT_GE(left, mu - 1e-7 * scale) << "route " << i;
        }
        EXPECT_LE(right, mu + 1e-7 * scale) << "route " << i;
      }
    }
  }
}

TEST(OptimizeProperties, BeatsEquilibriumAndGrowsWithBudget) {
  std::mt19937_64 rng(45);
  for (int k = 0; k < 200; ++k) {
    const it::Instance inst = support::random_instance(rng, 2 + rng() % 5, 0.0, k % 2 ? 60.0 : 0.0);
    const it::EquilibriumResult eq = it::wardrop_equilibrium(inst);
    for (Objective o : {Objective::Profit, Objective::Welfare}) {
      const double opt = it::objective_value(inst, o, it::optimize_allocation(inst, o));
      EXPECT_GE(opt, it::objective_value(inst, o, eq.allocation) * (1.0 - 1e-12));
      double prev = 0.0;
      for (int j = 1; j <= 10; ++j) {
        const double v = it::objective_value(inst, o, it::optimize_allocation(inst, o, inst.drivers() * j / 5.0));
        EXPECT_GE(v, prev * (1.0 - 1e-12));
        prev = v;
      }
    }
  }
}
