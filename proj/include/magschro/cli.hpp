#pragma once

// Command-line front end. run_command() is the whole program minus main(),
// so tests can drive it in-process.
//
// Exit codes: 0 pass, 1 check failure (or unresolved within budget),
// 2 input error.

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "magschro/magschro.hpp"

namespace magschro::cli {

enum class Format { text, json, csv };

struct GraphOptions {
  std::string file;
  FamilySpec family;
};

namespace detail {

using nlohmann::json;

inline void add_graph_options(CLI::App* cmd, GraphOptions& g) {
  cmd->add_option("--graph", g.file, "graph file (JSON)");
  cmd->add_option("--family", g.family.family, "path-nat | path | cycle | star | binary-tree")
      ->check(CLI::IsMember({"path-nat", "path", "cycle", "star", "binary-tree"}));
  cmd->add_option("--size", g.family.size, "vertices (path, cycle), leaves (star) or depth (binary-tree)");
  cmd->add_option("--w", g.family.w, "vertex weight w(n)");
  cmd->add_option("--a", g.family.a, "edge weight a(n)");
  cmd->add_option("--W", g.family.W, "potential W(n)");
  cmd->add_option("--q", g.family.q, "minorant q(n)");
  cmd->add_option("--phase", g.family.phase, "phase angle theta(n), sigma = exp(i theta)");
}

inline WeightedGraph load(const GraphOptions& g) {
  if (!g.file.empty()) return load_graph(g.file);
  return make_family(g.family);
}

inline void add_format(CLI::App* cmd, Format& f) {
  cmd->add_option("--format", f, "text | json | csv")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"text", Format::text}, {"json", Format::json}, {"csv", Format::csv}}));
}

/// Integer id, or a label from a graph file with string ids.
inline VertexId resolve(const WeightedGraph& g, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size()) {
      g.vertex(VertexId{v});
      return VertexId{v};
    }
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
    throw InputError("vertex id out of range", text);
  }
  if (g.has_labels() && g.is_finite())
    for (VertexId x : g.vertices())
      if (g.label(x) == text) return x;
  throw InputError("unknown vertex", text);
}

inline LengthMode parse_mode(const std::string& m) {
  if (m == "with-q") return LengthMode::with_q;
  if (m == "unit-q") return LengthMode::unit_q;
  throw InputError("mode must be with-q or unit-q", m);
}

inline std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

inline json edge_json(const std::optional<OrientedEdge>& e) {
  if (!e) return nullptr;
  return json::array({e->origin.value, e->terminus.value});
}

inline std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("not a number list", text);
    }
  }
  if (out.empty()) throw InputError("empty list", text);
  return out;
}

/// "1=0.5,2=1:-0.25" -> {1: 0.5, 2: 1 - 0.25i}.
inline VertexFunction parse_function(const WeightedGraph& g, const std::string& text) {
  VertexFunction f;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("expected vertex=value", item);
    const VertexId x = resolve(g, item.substr(0, eq));
    const std::string value = item.substr(eq + 1);
    const auto colon = value.find(':');
    try {
      const double re = std::stod(value.substr(0, colon));
      const double im = colon == std::string::npos ? 0.0 : std::stod(value.substr(colon + 1));
      f.set(x, {re, im});
    } catch (const std::invalid_argument&) {
      throw InputError("bad function value", item);
    }
  }
  return f;
}

inline void print_check_lines(std::ostream& out, const std::vector<CheckLine>& lines) {
  for (const auto& l : lines)
    out << (l.pass ? "PASS" : "FAIL") << "  [" << l.id << "] " << l.name << ": " << l.detail << "\n";
}

}  // namespace detail

inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using detail::json;
  using detail::num;

  CLI::App app{"Magnetic Schrodinger operators on weighted graphs"};
  app.require_subcommand(1);
  Format format = Format::text;
  GraphOptions graph;

  // check
  auto* check = app.add_subcommand("check", "hypotheses of the self-adjointness criterion");
  std::string check_from = "1";
  std::size_t budget = default_budget();
  std::optional<double> user_C;
  detail::add_graph_options(check, graph);
  detail::add_format(check, format);
  check->add_option("--from", check_from, "base vertex x0");
  check->add_option("--budget", budget, "exploration budget (vertices)");
  check->add_option("--C", user_C, "Lipschitz constant to test against");

  // distance
  auto* dist = app.add_subcommand("distance", "path metric d_{w,a;q}");
  std::string from = "1", to, mode = "with-q";
  detail::add_graph_options(dist, graph);
  detail::add_format(dist, format);
  dist->add_option("--from", from);
  dist->add_option("--to", to)->required();
  dist->add_option("--mode", mode, "with-q | unit-q");
  dist->add_option("--budget", budget);

  // ball
  auto* ballc = app.add_subcommand("ball", "metric ball");
  std::string center = "1";
  double radius = 1;
  detail::add_graph_options(ballc, graph);
  detail::add_format(ballc, format);
  ballc->add_option("--center", center);
  ballc->add_option("--radius", radius)->required();
  ballc->add_option("--mode", mode, "with-q | unit-q");
  ballc->add_option("--budget", budget);

  // spectrum
  auto* spectrum_cmd = app.add_subcommand("spectrum", "extreme eigenvalues of nested truncations");
  std::string windows;
  std::int64_t first = 1;
  detail::add_graph_options(spectrum_cmd, graph);
  detail::add_format(spectrum_cmd, format);
  spectrum_cmd->add_option("--windows", windows, "comma-separated window sizes {first..first+K-1}");
  spectrum_cmd->add_option("--first", first, "first vertex of each window");

  // verify-identities
  auto* ident = app.add_subcommand("verify-identities", "randomized identity suites");
  std::uint64_t seed = 42;
  int graphs = 200, squares = 10000;
  double tol = 1e-10;
  detail::add_format(ident, format);
  ident->add_option("--seed", seed);
  ident->add_option("--graphs", graphs)->check(CLI::PositiveNumber);
  ident->add_option("--squares", squares, "square-average samples")->check(CLI::NonNegativeNumber);
  ident->add_option("--tol", tol, "relative tolerance");

  // estimate
  auto* est = app.add_subcommand("estimate", "energy estimate and J_s sweep");
  std::string u_text, v_text, s_list = "1,2,4,8,16,32,64,128", x0_text = "1";
  std::optional<double> est_C;
  std::optional<std::size_t> est_N;
  detail::add_graph_options(est, graph);
  detail::add_format(est, format);
  est->add_option("--u", u_text, "function u as vertex=re[:im],...")->required();
  est->add_option("--v", v_text, "second function v; enables the J_s sweep");
  est->add_option("--s", s_list, "J_s radii");
  est->add_option("--from", x0_text, "base point of P");
  est->add_option("--C", est_C, "Lipschitz constant (default: local best)");
  est->add_option("--N", est_N, "degree bound (default: local maximum)");

  // reproduce
  auto* repro = app.add_subcommand("reproduce", "run a worked example end to end");
  std::string which;
  detail::add_format(repro, format);
  repro->add_option("example", which, "paper-example")->required()->check(CLI::IsMember({"paper-example"}));

  std::vector<const char*> argv{"magschro"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (check->parsed()) {
      const auto g = detail::load(graph);
      const auto rep = theorem1_report(g, detail::resolve(g, check_from), budget, user_C);
      if (format == Format::json) {
        json j = {{"overall", to_string(rep.overall)},
                  {"scope", rep.scope},
                  {"window_size", rep.window_size},
                  {"degree", {{"observed", rep.degree.N_observed}, {"pass", rep.degree.pass}}},
                  {"minorant",
                   {{"worst_violation", rep.minorant.worst_violation},
                    {"witness", rep.minorant.witness ? json(rep.minorant.witness->value) : json(nullptr)},
                    {"pass", rep.minorant.pass}}},
                  {"lipschitz",
                   {{"C_best", rep.lipschitz.C_best},
                    {"witness", detail::edge_json(rep.lipschitz.witness)},
                    {"edges_checked", rep.lipschitz.edges_checked},
                    {"user_C", rep.user_C ? json(*rep.user_C) : json(nullptr)},
                    {"pass", rep.lipschitz_pass}}},
                  {"completeness",
                   {{"verdict", rep.completeness.label()},
                    {"rationale", rep.completeness.rationale},
                    {"settled", rep.completeness.settled},
                    {"settled_radius", rep.completeness.settled_radius}}}};
        j["degree"]["declared"] = rep.degree.N_declared ? json(*rep.degree.N_declared) : json(nullptr);
        out << j.dump(2) << "\n";
      } else {
        const auto& L = rep.lipschitz;
        out << "overall: " << to_string(rep.overall) << "\nscope: " << rep.scope << "\n"
            << "degree: max " << rep.degree.N_observed << (rep.degree.pass ? " (pass)" : " (FAIL)") << "\n"
            << "minorant: worst violation " << num(rep.minorant.worst_violation)
            << (rep.minorant.pass ? " (pass)" : " (FAIL)") << "\n"
            << "lipschitz: C_best = " << num(L.C_best);
        if (L.witness) out << " at [" << L.witness->origin << "," << L.witness->terminus << "]";
        if (rep.user_C) out << ", C = " << num(*rep.user_C) << (rep.lipschitz_pass ? " (pass)" : " (FAIL)");
        out << "\ncompleteness: " << rep.completeness.label() << ": " << rep.completeness.rationale << "\n";
      }
      return rep.overall == Verdict::fail ? 1 : 0;
    }

    if (dist->parsed()) {
      const auto g = detail::load(graph);
      const auto d = distance(g, detail::resolve(g, from), detail::resolve(g, to), detail::parse_mode(mode), budget);
      if (!d.resolved()) {
        err << "unresolved: budget exhausted after " << d.settled << " vertices\n";
        return 1;
      }
      if (format == Format::json) out << json{{"from", from}, {"to", to}, {"mode", mode}, {"distance", *d.value}}.dump(2) << "\n";
      else if (format == Format::csv) out << "from,to,mode,distance\n" << from << "," << to << "," << mode << "," << num(*d.value) << "\n";
      else out << num(*d.value) << "\n";
      return 0;
    }

    if (ballc->parsed()) {
      const auto g = detail::load(graph);
      const auto b = ball(g, detail::resolve(g, center), radius, detail::parse_mode(mode), budget);
      if (format == Format::json) {
        json members = json::array();
        for (const auto& [x, d] : b.members) members.push_back({{"vertex", x.value}, {"distance", d}});
        out << json{{"center", b.center.value}, {"radius", radius}, {"mode", mode}, {"complete", b.complete},
                    {"members", members}}.dump(2) << "\n";
      } else {
        out << "vertex,distance\n";
        for (const auto& [x, d] : b.members) out << x.value << "," << num(d) << "\n";
      }
      if (!b.complete) {
        err << "incomplete: budget exhausted before radius " << num(radius) << "\n";
        return 1;
      }
      return 0;
    }

    if (spectrum_cmd->parsed()) {
      const auto g = detail::load(graph);
      std::vector<std::vector<VertexId>> ws;
      if (windows.empty()) {
        if (!g.is_finite()) throw InputError("--windows is required for infinite graphs");
        ws.push_back(g.vertices());
      } else {
        for (double K : detail::parse_list(windows)) {
          if (K < 1 || K != std::floor(K)) throw InputError("window sizes must be positive integers", windows);
          ws.push_back(prefix_window(static_cast<std::int64_t>(K), first));
        }
      }
      const auto rep = semibounded_probe(g, ws);
      const auto trend = spectral_trend(g, ws);
      if (format == Format::json) {
        json rows = json::array();
        for (std::size_t i = 0; i < trend.size(); ++i)
          rows.push_back({{"window_size", trend[i].window_size},
                          {"lambda_min", trend[i].lambda_min},
                          {"lambda_max", trend[i].lambda_max},
                          {"residual", trend[i].residual},
                          {"delta_rayleigh_min", rep.rows[i].delta_rayleigh_min}});
        out << json{{"rows", rows}, {"monotone", rep.monotone}, {"trend", to_string(rep.trend)}}.dump(2) << "\n";
      } else {
        out << "window_size,lambda_min,lambda_max,residual,delta_rayleigh_min\n";
        for (std::size_t i = 0; i < trend.size(); ++i)
          out << trend[i].window_size << "," << num(trend[i].lambda_min) << "," << num(trend[i].lambda_max) << ","
              << num(trend[i].residual) << "," << num(rep.rows[i].delta_rayleigh_min) << "\n";
        if (format == Format::text) out << "# trend: " << to_string(rep.trend) << "\n";
      }
      return 0;
    }

    if (ident->parsed()) {
      auto res = run_identity_suite(seed, graphs, tol);
      if (squares > 0) res.lines.push_back(run_square_average_suite(seed, squares));
      if (format == Format::json) {
        json lines = json::array();
        for (const auto& l : res.lines)
          lines.push_back({{"name", l.name}, {"cases", l.cases}, {"violations", l.violations},
                           {"worst_relative", l.worst_relative}});
        out << json{{"seed", seed}, {"graphs", graphs}, {"tolerance", tol}, {"seconds", res.seconds},
                    {"suites", lines}, {"pass", res.pass()}}.dump(2) << "\n";
      } else {
        out << "suite,cases,violations,worst_relative\n";
        for (const auto& l : res.lines)
          out << l.name << "," << l.cases << "," << l.violations << "," << num(l.worst_relative) << "\n";
      }
      return res.pass() ? 0 : 1;
    }

    if (est->parsed()) {
      const auto g = detail::load(graph);
      const auto u = detail::parse_function(g, u_text);
      const auto b = energy_estimate_check(g, u, est_C, est_N);
      bool pass = b.holds() && b.chain_holds();
      std::vector<JsBoundReport> sweep;
      if (!v_text.empty()) {
        const auto v = detail::parse_function(g, v_text);
        const VertexId x0 = detail::resolve(g, x0_text);
        for (double s : detail::parse_list(s_list)) {
          sweep.push_back(J_s_bound_check(g, u, v, x0, s, est_N));
          pass = pass && sweep.back().holds();
        }
      }
      if (format == Format::json) {
        json contributions = json::array();
        for (const auto& c : b.contributions)
          contributions.push_back({{"edge", {c.edge.origin.value, c.edge.terminus.value}}, {"value", c.value}});
        json rows = json::array();
        for (const auto& r : sweep)
          rows.push_back({{"s", r.s}, {"abs_J", r.abs_J}, {"bound", r.bound}, {"slack", r.slack}});
        out << json{{"lhs", b.lhs}, {"rhs", b.rhs}, {"averaged_lhs", b.averaged_lhs}, {"C", b.C}, {"N", b.N},
                    {"norm_u", b.norm_u}, {"norm_Hu", b.norm_Hu}, {"slack", b.slack},
                    {"contributions", contributions}, {"J_s", rows}, {"pass", pass}}.dump(2) << "\n";
      } else {
        out << "lhs,rhs,averaged_lhs,C,N,norm_u,norm_Hu,slack\n"
            << num(b.lhs) << "," << num(b.rhs) << "," << num(b.averaged_lhs) << "," << num(b.C) << "," << b.N << ","
            << num(b.norm_u) << "," << num(b.norm_Hu) << "," << num(b.slack) << "\n";
        if (!sweep.empty()) {
          out << "s,abs_J,bound,slack\n";
          for (const auto& r : sweep)
            out << num(r.s) << "," << num(r.abs_J) << "," << num(r.bound) << "," << num(r.slack) << "\n";
        }
      }
      return pass ? 0 : 1;
    }

    if (repro->parsed()) {
      auto lines = run_worked_example();
      const auto suite = run_identity_suite(42, 200);
      CheckLine identities{1, "identity-suites", suite.pass(), ""};
      for (const auto& l : suite.lines)
        identities.detail += l.name + " " + std::to_string(l.violations) + "/" + std::to_string(l.cases) + "; ";
      const auto squares = run_square_average_suite(42, 10000);
      CheckLine square_average{2, "square-average", squares.violations == 0,
                               std::to_string(squares.violations) + " violations in " +
                                   std::to_string(squares.cases) + " samples"};
      lines.insert(lines.begin(), {identities, square_average});
      bool all = true;
      for (const auto& l : lines) all = all && l.pass;
      if (format == Format::json) {
        json arr = json::array();
        for (const auto& l : lines) arr.push_back({{"id", l.id}, {"name", l.name}, {"pass", l.pass}, {"detail", l.detail}});
        out << json{{"checks", arr}, {"pass", all}}.dump(2) << "\n";
      } else {
        detail::print_check_lines(out, lines);
        out << (all ? "summary: all checks pass\n" : "summary: FAILURES present\n");
      }
      return all ? 0 : 1;
    }
  } catch (const CheckRefused& e) {
    err << "refused: " << e.what() << "\n";
    return 1;
  } catch (const BudgetExhausted& e) {
    err << "unresolved: " << e.what() << "\n";
    return 1;
  } catch (const ConvergenceError& e) {
    err << "no convergence: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace magschro::cli
