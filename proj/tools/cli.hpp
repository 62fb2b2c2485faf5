#pragma once

// twospin command-line driver. Reports go to `out` as JSON, diagnostics to
// `err`. Exit status: 0 success, 1 input error (or a failed verify check),
// 2 approximation inapplicable ((d-1) tanh J >= 1).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twospin/twospin.hpp"
#include "twospin/suites.hpp"

namespace twospin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitInapplicable = 2;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_argument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SpinSystem load_system(const std::string& path) {
  try {
    return parse_system(read_file(path));
  } catch (const parse_error& e) {
    throw parse_error(path + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
}

// "1=+,3=-" or "1+,3-".
inline Condition parse_condition(const std::string& text) {
  Condition cond;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const char sign = item.back();
    std::string label = item.substr(0, item.size() - 1);
    if (!label.empty() && label.back() == '=') label.pop_back();
    if ((sign != '+' && sign != '-') || label.empty() ||
        label.find_first_not_of("0123456789") != std::string::npos) {
      throw invalid_argument("bad condition entry '" + item + "' (expected e.g. 3=+ or 3-)");
    }
    const auto v = static_cast<Vertex>(std::stoul(label));
    if (!cond.emplace(v, sign == '+' ? Spin::plus : Spin::minus).second) {
      throw invalid_argument("vertex " + label + " conditioned twice");
    }
  }
  return cond;
}

inline LogRatio parse_frontier(const std::string& text) {
  if (text == "minus") return LogRatio::fixed_minus();
  if (text == "plus") return LogRatio::fixed_plus();
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || std::isnan(x)) {
    throw invalid_argument("frontier must be 'minus', 'plus' or a log-ratio, got '" + text + "'");
  }
  return LogRatio(x);
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic partition-function approximation for two-state spin systems"};
  app.require_subcommand(1, 1);

  std::string graph_path;
  std::optional<int> degree;

  auto* estimate = app.add_subcommand("estimate", "Approximate log Z within eps");
  double eps = 0.0;
  std::string frontier = "minus";
  unsigned threads = 0;
  bool timing = false;
  estimate->add_option("-g,--graph", graph_path, "Graph file")->required();
  estimate->add_option("-e,--eps", eps, "Precision: |log Z_hat - log Z| <= eps")->required();
  estimate->add_option("-d,--degree", degree, "Degree bound d >= max degree");
  estimate->add_option("--frontier", frontier, "Frontier log-ratio: minus, plus or a number");
  estimate->add_option("-j,--threads", threads, "Worker threads (0 = all cores)");
  estimate->add_flag("--timing", timing, "Include wall-clock time in the report");

  auto* exact = app.add_subcommand("exact", "Exact log Z by enumeration (<= 24 free vertices)");
  std::string cond_text;
  exact->add_option("-g,--graph", graph_path, "Graph file")->required();
  exact->add_option("-c,--cond", cond_text, "Condition, e.g. 1=+,3=-");

  auto* verify = app.add_subcommand("verify", "Run property checks against the exact oracle");
  std::string suite = "all";
  std::optional<std::size_t> trials;
  std::uint64_t seed = 1;
  std::optional<double> tolerance;
  verify->add_option("-s,--suite", suite, "saw, saw-random, contraction, lipschitz, decay, telescoping, fptas or all")
      ->check(CLI::IsMember({"saw", "saw-random", "contraction", "lipschitz", "decay",
                             "telescoping", "fptas", "all"}));
  verify->add_option("-n,--trials", trials, "Trials per suite (suite-specific default)");
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--tolerance", tolerance, "Override the suite tolerance");

  auto* decay = app.add_subcommand("decay", "Measure boundary influence at distance t");
  Vertex root = 1;
  int distance = 1;
  std::size_t pairs = 100;
  decay->add_option("-g,--graph", graph_path, "Graph file")->required();
  decay->add_option("-r,--root", root, "Root vertex")->required();
  decay->add_option("-t,--distance", distance, "Boundary distance t")->required();
  decay->add_option("-n,--trials", pairs, "Boundary pairs");
  decay->add_option("--seed", seed, "Random seed");
  decay->add_option("-d,--degree", degree, "Degree bound d >= max degree");

  auto* gen = app.add_subcommand("gen", "Generate a seeded instance");
  std::string family = "cycle", model = "ising", out_path = "-";
  GenSpec spec;
  double coupling = 0.0, field = 0.0;
  gen->add_option("-f,--family", family, "path, cycle, grid, complete, random_regular, erdos_renyi");
  gen->add_option("--n", spec.n, "Vertex count");
  gen->add_option("--rows", spec.rows, "Grid rows");
  gen->add_option("--cols", spec.cols, "Grid columns");
  gen->add_option("--regular-degree", spec.degree, "Degree of random_regular");
  gen->add_option("--mean-degree", spec.mean_degree, "Mean degree of erdos_renyi");
  gen->add_option("-m,--model", model, "ising, ising-rf or random")
      ->check(CLI::IsMember({"ising", "ising-rf", "random"}));
  gen->add_option("-J,--coupling", coupling, "J (ising) or J_max (random)");
  gen->add_option("-B,--field", field, "B (ising) or B_max (ising-rf, random)");
  gen->add_option("--seed", spec.seed, "Random seed");
  gen->add_option("-o,--out", out_path, "Output file, - for stdout");

  auto* check = app.add_subcommand("check", "Report (d-1) tanh J, J_d and applicability");
  check->add_option("-g,--graph", graph_path, "Graph file")->required();
  check->add_option("-d,--degree", degree, "Degree bound d >= max degree");

  auto* tree = app.add_subcommand("saw-tree", "Dump a truncated self-avoiding tree as text");
  int depth = 0;
  tree->add_option("-g,--graph", graph_path, "Graph file")->required();
  tree->add_option("-r,--root", root, "Root vertex")->required();
  tree->add_option("--depth", depth, "Depth limit")->required();
  tree->add_option("-c,--cond", cond_text, "Condition, e.g. 1=+,3=-");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*estimate) {
      const SpinSystem sys = load_system(graph_path);
      EstimateOptions opt;
      opt.degree_bound = degree;
      opt.frontier = parse_frontier(frontier);
      opt.threads = threads;
      try {
        const auto report = fptas_log_partition(sys, eps, opt);
        out << format_report(to_json(report, timing));
      } catch (const inapplicable_error& e) {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "estimate";
        j["error"] = "inapplicable";
        j["contraction"] = e.contraction();
        j["degree_bound"] = e.degree_bound();
        j["J"] = e.coupling();
        out << format_report(j);
        err << "twospin: " << e.what() << '\n';
        return kExitInapplicable;
      }
    } else if (*exact) {
      const SpinSystem sys = load_system(graph_path);
      const Condition cond = parse_condition(cond_text);
      json j;
      j["schema_version"] = kSchemaVersion;
      j["command"] = "exact";
      j["condition"] = describe(cond);
      j["log_z"] = exact_log_partition(sys, cond);
      out << format_report(j);
    } else if (*verify) {
      json j;
      j["schema_version"] = kSchemaVersion;
      j["command"] = "verify";
      j["seed"] = seed;
      json checks = json::array();
      bool all_passed = true;
      auto emit = [&](CheckReport r) {
        if (tolerance) {
          r.tolerance = *tolerance;
          r.passed = r.max_violation <= r.tolerance;
        }
        all_passed = all_passed && r.passed;
        checks.push_back(to_json(r));
      };
      auto want = [&](const char* name) { return suite == "all" || suite == name; };
      if (want("saw")) emit(sweep_saw_identity_exhaustive(5, trials.value_or(20), seed));
      if (want("saw-random")) emit(sweep_saw_identity_random(trials.value_or(50), 10, seed));
      if (want("contraction")) emit(check_contraction(trials.value_or(100000), seed));
      if (want("lipschitz")) emit(check_log_lipschitz(trials.value_or(10000), seed));
      if (want("decay")) {
        const auto sweep = sweep_decay(5, 10, 0.4, {1, 2, 3}, trials.value_or(100), seed);
        for (const auto& r : sweep.per_distance) emit(r);
      }
      if (want("telescoping")) emit(sweep_telescoping(trials.value_or(50), 12, seed));
      if (want("fptas")) emit(sweep_fptas(fptas_instances(trials.value_or(200), seed)));
      j["checks"] = std::move(checks);
      j["passed"] = all_passed;
      out << format_report(j);
      return all_passed ? kExitOk : kExitInput;
    } else if (*decay) {
      const SpinSystem sys = load_system(graph_path);
      auto r = check_decay_bound(sys, root, distance, pairs, seed, degree);
      json j = to_json(r);
      const auto scalars = compute_scalars(sys, degree);
      j["bound"] = decay_function(distance, scalars.coupling, scalars.degree_bound);
      j["max_difference"] = r.max_statistic;
      out << format_report(j);
    } else if (*gen) {
      spec.family = parse_family(family);
      if (model == "ising") {
        spec.model = IsingModel{coupling, field};
      } else if (model == "ising-rf") {
        spec.model = IsingRandomFieldModel{coupling, field};
      } else {
        spec.model = RandomModel{coupling, field};
      }
      const SpinSystem sys = generate(spec);
      const std::string text = serialize_system(sys);
      if (out_path == "-") {
        out << text;
      } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) throw invalid_argument("cannot write '" + out_path + "'");
        file << text;
        json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = "gen";
        j["path"] = out_path;
        j["family"] = family_name(spec.family);
        j["vertices"] = sys.vertex_count();
        j["edges"] = sys.graph().edge_count();
        j["max_degree"] = sys.graph().max_degree();
        j["connected"] = sys.graph().connected();
        out << format_report(j);
      }
    } else if (*check) {
      const SpinSystem sys = load_system(graph_path);
      const auto s = compute_scalars(sys, degree);
      json j;
      j["schema_version"] = kSchemaVersion;
      j["command"] = "check";
      j["vertices"] = sys.vertex_count();
      j["max_degree"] = s.max_degree;
      j["degree_bound"] = s.degree_bound;
      j["J"] = s.coupling;
      j["critical_J"] = s.critical;
      j["contraction"] = s.contraction;
      j["applicable"] = decay_condition_holds(s);
      out << format_report(j);
      return decay_condition_holds(s) ? kExitOk : kExitInapplicable;
    } else if (*tree) {
      const SpinSystem sys = load_system(graph_path);
      build_saw_tree(sys, root, depth, parse_condition(cond_text)).dump(out);
    }
  } catch (const inapplicable_error& e) {
    err << "twospin: " << e.what() << '\n';
    return kExitInapplicable;
  } catch (const std::exception& e) {
    err << "twospin: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace twospin::cli
