// transitctl: command-line front end for the driver allocation library.
//
// Every command that takes an instance reads it from the positional path,
// or from stdin when the path is "-" or omitted. Output goes to stdout
// unless --out PATH is given.
//
// Usage:
//   transitctl equilibrium [FILE]
//   transitctl optimize --objective profit|welfare [FILE]
//   transitctl ratio [FILE]
//   transitctl sweep-drivers --from 100 --to 2000 --step 50 [FILE]
//   transitctl cross-subsidy --objective profit|welfare [--wage W] [FILE]
//   transitctl stackelberg --algos lpf,lncf,greedy --alpha-grid 0:0.1:1 --objective profit [FILE]
//   transitctl gen-tight --kind profit|welfare|lpf --eps 0.01 [--ratio 3] [--alpha 0.5]
//   transitctl gen-fixture [--drivers 1000]
//   transitctl certify --count 1000 --seed 7 [--max-routes 6]
//
// Exit codes: 0 ok, 1 validation error, 2 instance parse error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "informal_transit/informal_transit.hpp"

namespace it = informal_transit;

namespace {

struct Common {
  std::string input = "-";
  std::string out;
};

it::Instance read_input(const std::string& path) {
  if (path.empty() || path == "-") return it::parse_instance(it::read_text(std::cin));
  return it::load_instance(path);
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw it::ValidationError("cannot write '" + c.out + "'");
  f << text;
}

std::string kv(const std::string& key, double v) { return key + "=" + it::format_number(v) + "\n"; }

void add_common(CLI::App* cmd, Common& c, bool with_input = true) {
  if (with_input) cmd->add_option("file", c.input, "Instance file (- for stdin)");
  cmd->add_option("--out", c.out, "Write output to PATH instead of stdout");
}

std::vector<it::StackelbergAlgo> parse_algos(const std::string& list) {
  std::vector<it::StackelbergAlgo> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(it::parse_algo(item));
  if (out.empty()) throw it::ValidationError("no algorithms given");
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driver allocation tools for informal transit networks"};
  app.require_subcommand(1);

  Common c;
  std::string objective = "profit";
  double from = 0.0, to = 0.0, step = 0.0;
  std::string algos = "lpf,lncf,greedy";
  std::string alpha_grid = "0:0.1:1";
  std::string kind;
  double eps = 0.0, ratio = 3.0, alpha = 0.0, wage = -1.0, drivers = 1000.0;
  std::size_t count = 1000, max_routes = 6;
  std::uint64_t seed = 1;

  auto* eq = app.add_subcommand("equilibrium", "Driver equilibrium with all D drivers free");
  add_common(eq, c);
  auto* opt = app.add_subcommand("optimize", "Allocation maximizing profit or riders served");
  add_common(opt, c);
  opt->add_option("--objective", objective)->check(CLI::IsMember({"profit", "welfare"}));
  auto* rat = app.add_subcommand("ratio", "Optimal over equilibrium objective ratios");
  add_common(rat, c);
  auto* swd = app.add_subcommand("sweep-drivers", "Ratios over a range of driver counts (CSV)");
  add_common(swd, c);
  swd->add_option("--from", from, "First driver count")->required();
  swd->add_option("--to", to, "Last driver count (inclusive)")->required();
  swd->add_option("--step", step, "Grid spacing")->required();
  auto* cs = app.add_subcommand("cross-subsidy", "Transfers that make the optimum an equilibrium");
  add_common(cs, c);
  cs->add_option("--objective", objective)->check(CLI::IsMember({"profit", "welfare"}));
  cs->add_option("--wage", wage, "Reservation wage to check the common profit against");
  auto* st = app.add_subcommand("stackelberg", "Partial centralization sweep over alpha (CSV)");
  add_common(st, c);
  st->add_option("--algos", algos, "Comma list of lpf, lncf, greedy, brute");
  st->add_option("--alpha-grid", alpha_grid, "from:step:to or comma list");
  st->add_option("--objective", objective)->check(CLI::IsMember({"profit", "welfare"}));
  auto* gt = app.add_subcommand("gen-tight", "Emit an instance attaining a ratio bound");
  add_common(gt, c, false);
  gt->add_option("--kind", kind)->required()->check(CLI::IsMember({"profit", "welfare", "lpf"}));
  gt->add_option("--eps", eps)->required();
  gt->add_option("--ratio", ratio, "pmax/pmin for --kind welfare");
  gt->add_option("--alpha", alpha, "Planner share for --kind lpf");
  auto* gf = app.add_subcommand("gen-fixture", "Emit the bundled 18-route synthetic network");
  add_common(gf, c, false);
  gf->add_option("--drivers", drivers, "Total drivers D")->capture_default_str();
  auto* cert = app.add_subcommand("certify", "Check ratio bounds on random instances");
  add_common(cert, c, false);
  cert->add_option("--count", count, "Number of random instances")->capture_default_str();
  cert->add_option("--seed", seed, "Sampler seed")->capture_default_str();
  cert->add_option("--max-routes", max_routes, "Largest route count sampled")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (eq->parsed()) {
      const it::Instance inst = read_input(c.input);
      const it::EquilibriumResult r = it::wardrop_equilibrium(inst);
      std::string out = kv("pi_eq", r.pi_eq) + kv("total_profit", it::total_profit(inst, r.allocation)) +
                        kv("riders_served", it::riders_served(inst, r.allocation)) + "\n" +
                        "id,drivers,per_driver_profit,riders_served\n";
      for (std::size_t i = 0; i < inst.size(); ++i)
        out += inst.routes[i].id + "," + it::format_number(r.allocation[i]) + "," +
               it::format_number(it::per_driver_profit(inst.derived[i], r.allocation[i])) + "," +
               it::format_number(it::minibus_demand(inst.derived[i], r.allocation[i])) + "\n";
      emit(c, out);
    } else if (opt->parsed()) {
      const it::Instance inst = read_input(c.input);
      const it::Objective o = it::parse_objective(objective);
      const it::Allocation x = it::optimize_allocation(inst, o);
      std::string out = std::string("objective=") + it::to_string(o) + "\n" +
                        kv("value", it::objective_value(inst, o, x)) + "\n" + "id,drivers,marginal_value\n";
      for (std::size_t i = 0; i < inst.size(); ++i)
        out += inst.routes[i].id + "," + it::format_number(x[i]) + "," +
               it::format_number(it::marginal_value(inst.derived[i], o, x[i])) + "\n";
      emit(c, out);
    } else if (rat->parsed()) {
      const it::RatioReport r = it::ratio_report(read_input(c.input));
      emit(c, kv("profit_ratio", r.profit_ratio) + kv("welfare_ratio", r.welfare_ratio) +
                  kv("p_max_over_p_min", r.p_max_over_p_min) + kv("bound_profit", r.bound_profit) +
                  kv("bound_welfare", r.bound_welfare) + kv("eq_profit_per_driver", r.eq_per_driver_profit));
    } else if (swd->parsed()) {
      emit(c, it::sweep_drivers(read_input(c.input), from, to, step).to_csv());
    } else if (cs->parsed()) {
      const it::Instance inst = read_input(c.input);
      const it::Objective o = it::parse_objective(objective);
      const it::TransferVector t = it::transfers_for_target(inst, it::optimize_allocation(inst, o));
      std::optional<double> w;
      if (wage >= 0.0) w = wage;
      const it::SchemeReport rep = it::verify_scheme(inst, t, o, 1e-7, w);
      std::string out = kv("pi_tilde", t.pi_tilde) + kv("budget_residual", rep.budget_residual) +
                        kv("profit_spread", rep.profit_spread) +
                        "equilibrium_ok=" + (rep.equilibrium_ok ? "true" : "false") + "\n" +
                        "canonical_recovers=" + (rep.canonical_recovers ? "true" : "false") + "\n";
      if (rep.wage_ok) out += std::string("wage_ok=") + (*rep.wage_ok ? "true" : "false") + "\n";
      out += "\nid,target_drivers,transfer,adjusted_profit\n";
      for (std::size_t i = 0; i < inst.size(); ++i)
        out += inst.routes[i].id + "," + it::format_number(t.target[i]) + "," + it::format_number(t.tau[i]) + "," +
               it::format_number(it::per_driver_profit(inst.derived[i], t.target[i]) + t.tau[i]) + "\n";
      emit(c, out);
    } else if (st->parsed()) {
      emit(c, it::sweep_alpha(read_input(c.input), parse_algos(algos), it::parse_grid(alpha_grid),
                              it::parse_objective(objective))
                  .to_csv());
    } else if (gt->parsed()) {
      std::vector<std::string> header = {
          "units: times in minutes, money in fare currency, demand in riders per window,",
          "D in drivers, S and outside_cost in waiting-minute equivalents"};
      it::Instance inst = it::tight_profit_instance(0.5);
      if (kind == "profit") {
        inst = it::tight_profit_instance(eps);
        header.push_back("profit ratio at equilibrium: 2 - eps = " + it::format_number(2.0 - eps));
      } else if (kind == "welfare") {
        inst = it::tight_welfare_instance(eps, ratio);
        header.push_back("welfare ratio at equilibrium: 1 + (1 - eps) r = " +
                         it::format_number(1.0 + (1.0 - eps) * ratio));
      } else {
        inst = it::lpf_lower_bound_instance(alpha, eps);
        const double k2 = 1.0 - eps;
        header.push_back("LPF profit ratio at alpha " + it::format_number(alpha) + ": " +
                         it::format_number((k2 + 1.0) / (std::min(alpha, k2) + 1.0)));
      }
      emit(c, it::serialize_instance(inst, header));
    } else if (gf->parsed()) {
      emit(c, it::serialize_instance(
                  it::nala_syn_instance(drivers),
                  {"Synthetic 18-route evening network (window 17:00-24:00 in minutes of day).",
                   "Route k = 0..17: travel_time = 3 + 0.6k, fare = 10 + 20k/17 (cents),",
                   "trip_cost = 0.8 F fare, outside_cost = 4 travel_time,",
                   "Lambda = round(100000 w_k / sum w), w_k = 1 + 2 ((5k) mod 18) / 17."}));
    } else if (cert->parsed()) {
      it::SamplerOptions so;
      so.max_routes = max_routes;
      const it::CertifyResult r = it::certify_bounds(it::sample_instances(seed, count, so));
      std::string out = "seed=" + std::to_string(seed) + "\nchecked=" + std::to_string(r.checked) +
                        "\nviolations=" + std::to_string(r.violations.size()) + "\n";
      for (const auto& v : r.violations)
        out += "\n" + it::serialize_instance(v.instance, {"violation at sample " + std::to_string(v.index) + ": " +
                                                              v.reason});
      emit(c, out);
    }
  } catch (const it::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
