#pragma once

// Instance files, CSV tables and parameter sweeps.
//
// Instance file layout:
//
//   # comment
//   F = 4
//   t1 = 0
//   ...                      (F, t1, t2, D, eta_E, eta_L, eta_T required;
//                             money_per_minute optional, defaults to eta_T)
//   [routes]
//   id,fare,travel_time,trip_cost,Lambda,outside_cost[,S]
//   r1,20,10,64,5000,45
//
// A non-empty S cell sets the route slack directly and the outside_cost cell
// is ignored.

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "informal_transit/analysis.hpp"
#include "informal_transit/errors.hpp"
#include "informal_transit/model_core.hpp"
#include "informal_transit/objective.hpp"
#include "informal_transit/parallel.hpp"
#include "informal_transit/stackelberg.hpp"

namespace informal_transit {

// 12 significant digits, used for every CSV and report number.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) throw ValidationError("refusing to format a non-finite number");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Shortest text that reads back to the same double.
inline std::string format_exact(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s, std::size_t& lead) {
  lead = 0;
  while (lead < s.size() && (s[lead] == ' ' || s[lead] == '\t')) ++lead;
  std::size_t end = s.size();
  while (end > lead && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r')) --end;
  return s.substr(lead, end - lead);
}

inline double parse_double(std::string_view s, std::size_t line, std::size_t col) {
  if (s.empty()) throw ParseError(line, col, "expected a number");
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError(line, col, "invalid number '" + std::string(s) + "'");
  return v;
}

struct Cell {
  std::string_view text;
  std::size_t col = 1;
};

inline std::vector<Cell> split_csv(std::string_view line) {
  std::vector<Cell> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    const std::string_view raw = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    std::size_t lead = 0;
    const std::string_view t = trim(raw, lead);
    out.push_back({t, start + lead + 1});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

} // namespace detail

inline Instance parse_instance(std::string_view text) {
  static const std::array<const char*, 8> global_keys = {"F",     "t1",    "t2",    "D",
                                                         "eta_E", "eta_L", "eta_T", "money_per_minute"};
  static const std::array<const char*, 7> route_columns = {"id",     "fare",         "travel_time", "trip_cost",
                                                           "Lambda", "outside_cost", "S"};
  std::map<std::string, double> globals;
  std::vector<RouteParams> routes;
  std::vector<int> column_of(route_columns.size(), -1);
  enum class Section { Globals, Header, Rows } section = Section::Globals;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == text.npos ? text.npos : nl - pos);
    pos = nl == text.npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const std::size_t hash = line.find('#'); hash != line.npos) line = line.substr(0, hash);
    std::size_t lead = 0;
    const std::string_view body = detail::trim(line, lead);
    if (body.empty()) continue;

    if (section == Section::Globals) {
      if (body == "[routes]") {
        section = Section::Header;
        continue;
      }
      const std::size_t eq = body.find('=');
      if (eq == body.npos) throw ParseError(line_no, lead + 1, "expected key = value");
      std::size_t klead = 0;
      std::size_t vlead = 0;
      const std::string key(detail::trim(body.substr(0, eq), klead));
      const std::string_view value = detail::trim(body.substr(eq + 1), vlead);
      bool known = false;
      for (const char* k : global_keys) known = known || key == k;
      if (!known) throw ParseError(line_no, lead + klead + 1, "unknown key '" + key + "'");
      if (globals.count(key)) throw ParseError(line_no, lead + klead + 1, "duplicate key '" + key + "'");
      globals[key] = detail::parse_double(value, line_no, lead + eq + 1 + vlead + 1);
    } else if (section == Section::Header) {
      const auto cells = detail::split_csv(line);
      for (std::size_t c = 0; c < cells.size(); ++c) {
        std::size_t idx = route_columns.size();
        for (std::size_t k = 0; k < route_columns.size(); ++k)
          if (cells[c].text == route_columns[k]) idx = k;
        if (idx == route_columns.size())
          throw ParseError(line_no, cells[c].col, "unknown column '" + std::string(cells[c].text) + "'");
        if (column_of[idx] >= 0)
          throw ParseError(line_no, cells[c].col, "duplicate column '" + std::string(cells[c].text) + "'");
        column_of[idx] = static_cast<int>(c);
      }
      for (std::size_t k = 0; k < 5; ++k)
        if (column_of[k] < 0)
          throw ParseError(line_no, 1, std::string("missing column '") + route_columns[k] + "'");
      if (column_of[5] < 0 && column_of[6] < 0)
        throw ParseError(line_no, 1, "need an outside_cost or S column");
      section = Section::Rows;
    } else {
      const auto cells = detail::split_csv(line);
      std::size_t expected = 0;
      for (int c : column_of) expected += c >= 0;
      if (cells.size() != expected)
        throw ParseError(line_no, 1,
                         "expected " + std::to_string(expected) + " fields, got " + std::to_string(cells.size()));
      auto cell = [&](std::size_t k) -> const detail::Cell& { return cells[static_cast<std::size_t>(column_of[k])]; };
      auto number = [&](std::size_t k) { return detail::parse_double(cell(k).text, line_no, cell(k).col); };
      RouteParams r;
      r.id = std::string(cell(0).text);
      if (r.id.empty()) throw ParseError(line_no, cell(0).col, "empty route id");
      r.fare = number(1);
      r.travel_time = number(2);
      r.trip_cost = number(3);
      r.total_demand = number(4);
      if (column_of[6] >= 0 && !cell(6).text.empty()) {
        r.s_direct = number(6);
      } else {
        if (column_of[5] < 0 || cell(5).text.empty())
          throw ParseError(line_no, column_of[5] >= 0 ? cell(5).col : 1, "route needs outside_cost or S");
        r.outside_cost = number(5);
      }
      routes.push_back(std::move(r));
    }
  }
  if (section == Section::Globals) throw ParseError(line_no, 1, "missing [routes] section");
  if (section == Section::Header) throw ParseError(line_no, 1, "missing route header line");
  for (std::size_t k = 0; k + 1 < global_keys.size(); ++k)
    if (!globals.count(global_keys[k]))
      throw ParseError(line_no, 1, std::string("missing key '") + global_keys[k] + "'");

  InstanceConfig c;
  c.capacity = globals["F"];
  c.t1 = globals["t1"];
  c.t2 = globals["t2"];
  c.total_drivers = globals["D"];
  c.eta_E = globals["eta_E"];
  c.eta_L = globals["eta_L"];
  c.eta_T = globals["eta_T"];
  if (auto it = globals.find("money_per_minute"); it != globals.end()) c.money_per_minute = it->second;
  return make_instance(c, std::move(routes));
}

inline std::string read_text(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return parse_instance(read_text(in));
}

// `comment` lines are emitted first, each prefixed with "# ".
inline std::string serialize_instance(const Instance& inst, const std::vector<std::string>& comment = {}) {
  std::ostringstream out;
  for (const auto& line : comment) out << "# " << line << '\n';
  const InstanceConfig& c = inst.config;
  out << "F=" << format_exact(c.capacity) << '\n';
  out << "t1=" << format_exact(c.t1) << '\n';
  out << "t2=" << format_exact(c.t2) << '\n';
  out << "D=" << format_exact(c.total_drivers) << '\n';
  out << "eta_E=" << format_exact(c.eta_E) << '\n';
  out << "eta_L=" << format_exact(c.eta_L) << '\n';
  out << "eta_T=" << format_exact(c.eta_T) << '\n';
  if (c.money_per_minute) out << "money_per_minute=" << format_exact(*c.money_per_minute) << '\n';
  out << "[routes]\n";
  bool any_s = false;
  for (const auto& r : inst.routes) any_s = any_s || r.s_direct.has_value();
  out << "id,fare,travel_time,trip_cost,Lambda,outside_cost" << (any_s ? ",S" : "") << '\n';
  for (const auto& r : inst.routes) {
    out << r.id << ',' << format_exact(r.fare) << ',' << format_exact(r.travel_time) << ','
        << format_exact(r.trip_cost) << ',' << format_exact(r.total_demand) << ','
        << (r.outside_cost ? format_exact(*r.outside_cost) : "");
    if (any_s) out << ',' << (r.s_direct ? format_exact(*r.s_direct) : "");
    out << '\n';
  }
  return out.str();
}

struct Table {
  std::string header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const {
    std::string out = header + "\n";
    for (const auto& row : rows) {
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (k) out += ',';
        out += row[k];
      }
      out += '\n';
    }
    return out;
  }
};

inline constexpr const char* kDriverSweepHeader = "D,algo,profit_ratio,welfare_ratio,eq_profit_per_driver";
inline constexpr const char* kAlphaSweepHeader = "alpha,algo,objective,ratio";

// Evenly spaced points from `from` to `to` inclusive (within rounding).
inline std::vector<double> grid_points(double from, double to, double step) {
  if (!(step > 0.0) || !std::isfinite(from) || !std::isfinite(to) || to < from)
    throw ValidationError("grid needs from <= to and step > 0");
  std::vector<double> pts;
  const double n = std::floor((to - from) / step + 1e-9);
  for (double k = 0; k <= n; k += 1.0) pts.push_back(from + k * step);
  return pts;
}

// "a:step:b" or a comma-separated list.
inline std::vector<double> parse_grid(const std::string& text) {
  auto num = [](std::string_view s) {
    std::size_t lead = 0;
    s = detail::trim(s, lead);
    try {
      return detail::parse_double(s, 1, 1);
    } catch (const ParseError&) {
      throw ValidationError("invalid grid value '" + std::string(s) + "'");
    }
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const std::size_t a = text.find(':');
    const std::size_t b = text.find(':', a + 1);
    if (b == std::string::npos) throw ValidationError("grid range needs from:step:to");
    const std::string_view sv(text);
    return grid_points(num(sv.substr(0, a)), num(sv.substr(b + 1)), num(sv.substr(a + 1, b - a - 1)));
  }
  for (const auto& c : detail::split_csv(text)) out.push_back(num(c.text));
  if (out.empty()) throw ValidationError("empty grid");
  return out;
}

inline Table sweep_drivers(const Instance& inst, double from, double to, double step) {
  if (!(from > 0.0)) throw ValidationError("driver sweep must start above zero");
  const std::vector<double> pts = grid_points(from, to, step);
  Table t{kDriverSweepHeader, std::vector<std::vector<std::string>>(pts.size())};
  detail::parallel_for(pts.size(), [&](std::size_t k) {
    const RatioReport r = ratio_report(with_drivers(inst, pts[k]));
    t.rows[k] = {format_number(pts[k]), "eq", format_number(r.profit_ratio), format_number(r.welfare_ratio),
                 format_number(r.eq_per_driver_profit)};
  });
  return t;
}

inline Table sweep_alpha(const Instance& inst, const std::vector<StackelbergAlgo>& algos,
                         const std::vector<double>& alphas, Objective o) {
  for (double a : alphas)
    if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
  const double best = objective_value(inst, o, optimize_allocation(inst, o));
  Table t{kAlphaSweepHeader, std::vector<std::vector<std::string>>(alphas.size() * algos.size())};
  detail::parallel_for(t.rows.size(), [&](std::size_t k) {
    const double a = alphas[k / algos.size()];
    const StackelbergAlgo algo = algos[k % algos.size()];
    const StackelbergOutcome out = run_stackelberg(inst, algo, a, o);
    if (!(out.objective_value > 0.0)) throw UndefinedRatioError("objective is zero; ratio undefined");
    t.rows[k] = {format_number(a), to_string(algo), format_number(out.objective_value),
                 format_number(best / out.objective_value)};
  });
  return t;
}

// Synthetic 18-route network modelled on an evening shift (5 PM to
// midnight). Route k = 0..17:
//   travel_time = 3 + 0.6 k minutes
//   fare        = 10 + 20 k / 17, rounded to cents (fares span 10..30)
//   trip_cost   = 0.8 * F * fare, rounded to cents
//   outside_cost = 4 * travel_time (walking takes four times as long)
//   Lambda      = 100000 * w_k / sum w, rounded, w_k = 1 + 2 ((5 k) mod 18) / 17
inline Instance nala_syn_instance(double drivers = 1000.0) {
  InstanceConfig c;
  c.capacity = 4.0;
  c.t1 = 1020.0;
  c.t2 = 1440.0;
  c.total_drivers = drivers;
  c.eta_E = 0.61;
  c.eta_L = 2.4;
  c.eta_T = 2.5;
  auto cents = [](double v) { return std::round(v * 100.0) / 100.0; };
  double wsum = 0.0;
  std::vector<double> w(18);
  for (int k = 0; k < 18; ++k) {
    w[k] = 1.0 + 2.0 * ((5 * k) % 18) / 17.0;
    wsum += w[k];
  }
  std::vector<RouteParams> routes;
  for (int k = 0; k < 18; ++k) {
    RouteParams r;
    char id[8];
    std::snprintf(id, sizeof id, "R%02d", k + 1);
    r.id = id;
    r.travel_time = (30 + 6 * k) / 10.0;
    r.fare = cents(10.0 + 20.0 * k / 17.0);
    r.trip_cost = cents(0.8 * c.capacity * r.fare);
    r.outside_cost = (120 + 24 * k) / 10.0;
    r.total_demand = std::round(100000.0 * w[k] / wsum);
    routes.push_back(std::move(r));
  }
  return make_instance(c, std::move(routes));
}

} // namespace informal_transit
