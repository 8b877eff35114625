// Loads an instance, prints the equilibrium and the profit-optimal
// allocation side by side, then the transfers that make the optimum stable.
//
//   quickstart samples/nala_syn.inst

#include <cstdio>

#include "informal_transit/informal_transit.hpp"

namespace it = informal_transit;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s INSTANCE\n", argv[0]);
    return 1;
  }
  const it::Instance inst = it::load_instance(argv[1]);
  const it::EquilibriumResult eq = it::wardrop_equilibrium(inst);
  const it::Allocation best = it::optimize_allocation(inst, it::Objective::Profit);
  const it::TransferVector t = it::transfers_for_target(inst, best);

  std::printf("%-6s %10s %10s %10s\n", "route", "eq", "optimal", "transfer");
  for (std::size_t i = 0; i < inst.size(); ++i)
    std::printf("%-6s %10.3f %10.3f %10.3f\n", inst.routes[i].id.c_str(), eq.allocation[i], best[i], t.tau[i]);
  std::printf("profit: equilibrium %.1f, optimal %.1f\n", it::total_profit(inst, eq.allocation),
              it::total_profit(inst, best));
  return 0;
}
