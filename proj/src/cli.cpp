#include "transgress/cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>

#include "transgress/verify.hpp"

namespace transgress {

namespace {

struct CliOptions {
  std::string scenario;
  std::string out;
  std::string scenario_file;
  std::vector<int> orders;
  RunConfig run;
};

void add_numeric_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--order", [&opt](const CLI::results_t& v) {
    opt.run.order = std::stoi(v[0]);
    return true;
  }, "Gauss-Legendre points per non-periodic axis");
  cmd->add_option("--subdiv", [&opt](const CLI::results_t& v) {
    opt.run.subdivision = std::stoi(v[0]);
    return true;
  }, "integration cells per axis");
  cmd->add_option("--periodic-points", [&opt](const CLI::results_t& v) {
    opt.run.periodic_points = std::stoi(v[0]);
    return true;
  }, "trapezoid points per periodic axis");
  cmd->add_option("--fd-step", [&opt](const CLI::results_t& v) {
    opt.run.fd_step = std::stod(v[0]);
    return true;
  }, "central-difference step");
  cmd->add_option("--fd-step-curv", opt.run.fd_step_curvature,
                  "step for differentiating difference-built connections");
}

Scenario load_scenario(const CliOptions& opt) {
  if (!opt.scenario_file.empty()) {
    std::ifstream in(opt.scenario_file);
    if (!in) throw std::invalid_argument("cannot open scenario file: " + opt.scenario_file);
    json j;
    in >> j;
    return parse_scenario(j);
  }
  return find_scenario(opt.scenario);
}

void write_or_print(const std::string& out, const json& j) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::invalid_argument("cannot open output file: " + out);
  f << j.dump(2) << "\n";
}

void print_report_lines(const Report& r) {
  for (const CheckRecord& c : r.checks) {
    std::cout << (c.pass ? "PASS" : "FAIL") << "  " << r.scenario << "." << c.check_id
              << "  lhs=" << c.lhs << " rhs=" << c.rhs << " abs_err=" << c.abs_err
              << " tol=" << c.tolerance;
    if (!c.note.empty()) std::cout << "  [" << c.note << "]";
    std::cout << "\n";
  }
}

int cmd_verify(const CliOptions& opt) {
  Scenario s = load_scenario(opt);
  Report r = run_scenario(s, opt.run);
  print_report_lines(r);
  if (!opt.out.empty()) write_or_print(opt.out, r.to_json());
  return r.all_pass() ? 0 : 1;
}

// per-kind principal quantity for convergence tables
std::string principal_check(const Scenario& s) {
  if (s.kind == "index_identity") return "alpha_psi_integral";
  if (s.kind == "fiber_normalization") return "fiber_integral";
  if (s.kind == "gauss_bonnet") return "euler_integral";
  if (s.kind == "section_property") return "section_integral";
  if (s.kind == "connection_independence") return "zero_section_integral";
  if (s.kind == "thom_shadow") return "infinity_combination";
  if (s.kind == "stokes_cubes") return "max_boundary_ratio";
  if (s.kind == "transgression_cubes") return "max_residual_ratio";
  if (s.kind == "pointwise_special") return "max_pointwise_deviation";
  if (s.kind == "frame_equivariance") return "max_frame_deviation";
  throw std::invalid_argument("no principal check for kind " + s.kind);
}

int cmd_sweep(const CliOptions& opt) {
  Scenario s = load_scenario(opt);
  const std::string id = principal_check(s);
  std::string csv = "order,value,error_estimate\n";
  for (int order : opt.orders) {
    RunConfig run = opt.run;
    run.order = order;
    if (!run.periodic_points) run.periodic_points = 4 * order;
    Report r = run_scenario(s, run);
    for (const CheckRecord& c : r.checks)
      if (c.check_id == id)
        csv += std::to_string(order) + "," + std::to_string(c.lhs) + "," +
               std::to_string(c.error_estimate) + "\n";
  }
  if (opt.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(opt.out);
    if (!f) throw std::invalid_argument("cannot open output file: " + opt.out);
    f << csv;
  }
  return 0;
}

int thread_budget() {
  const char* env = std::getenv("TRANSGRESS_THREADS");
  if (!env) return 1;
  int t = std::atoi(env);
  return t > 0 ? t : 1;
}

int cmd_all(const CliOptions& opt) {
  const std::vector<Scenario>& scenarios = builtin_scenarios();
  std::vector<Report> reports(scenarios.size());

  const int threads = thread_budget();
  if (threads <= 1) {
    for (size_t i = 0; i < scenarios.size(); ++i)
      reports[i] = run_scenario(scenarios[i], opt.run);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t i = next.fetch_add(1); i < scenarios.size(); i = next.fetch_add(1))
        reports[i] = run_scenario(scenarios[i], opt.run);
    };
    std::vector<std::future<void>> pool;
    for (int t = 0; t < threads; ++t) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
  }

  bool ok = true;
  json all = json::array();
  for (size_t i = 0; i < reports.size(); ++i) {
    const Report& r = reports[i];
    bool pass = r.all_pass();
    ok = ok && pass;
    size_t passed = 0;
    for (const CheckRecord& c : r.checks) passed += c.pass ? 1 : 0;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << r.scenario << "  (" << passed << "/"
              << r.checks.size() << " checks)\n";
    all.push_back(r.to_json());
  }
  std::cout << (ok ? "all scenarios passed" : "FAILURES present") << "\n";
  if (!opt.out.empty()) write_or_print(opt.out, json{{"reports", all}});
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"secondary transgression-form verification suite"};
  app.require_subcommand(1);
  CliOptions opt;

  CLI::App* list = app.add_subcommand("list", "enumerate shipped scenarios");

  CLI::App* verify = app.add_subcommand("verify", "run one scenario and report");
  verify->add_option("--scenario", opt.scenario, "scenario name");
  verify->add_option("--scenario-file", opt.scenario_file, "load a scenario from a JSON file");
  verify->add_option("--out", opt.out, "write the JSON report here");
  add_numeric_flags(verify, opt);

  CLI::App* sweep = app.add_subcommand("sweep", "convergence table for one scenario");
  sweep->add_option("--scenario", opt.scenario, "scenario name");
  sweep->add_option("--scenario-file", opt.scenario_file, "load a scenario from a JSON file");
  sweep->add_option("--orders", opt.orders, "quadrature orders, e.g. 8,16,32")
      ->delimiter(',')
      ->required();
  sweep->add_option("--out", opt.out, "write the CSV here");
  add_numeric_flags(sweep, opt);

  CLI::App* all = app.add_subcommand("all", "run the full scenario suite");
  all->add_option("--out", opt.out, "write the aggregate JSON here");
  add_numeric_flags(all, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list->parsed()) {
      for (const std::string& name : scenario_names()) std::cout << name << "\n";
      return 0;
    }
    if (verify->parsed()) {
      if (opt.scenario.empty() && opt.scenario_file.empty())
        throw std::invalid_argument("verify needs --scenario or --scenario-file");
      return cmd_verify(opt);
    }
    if (sweep->parsed()) {
      if (opt.scenario.empty() && opt.scenario_file.empty())
        throw std::invalid_argument("sweep needs --scenario or --scenario-file");
      return cmd_sweep(opt);
    }
    if (all->parsed()) return cmd_all(opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    if (std::string(e.what()).rfind("unknown scenario", 0) == 0) {
      std::cerr << "available scenarios:\n";
      for (const std::string& name : scenario_names()) std::cerr << "  " << name << "\n";
    }
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace transgress
