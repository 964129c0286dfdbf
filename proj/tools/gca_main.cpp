// gca: analyzer for group cellular automata and group shifts.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gca/problem.hpp"

namespace {

struct Common {
  std::string input;
  std::string report_path;
  int budget_period = 12;
  int budget_box = 6;
  std::int64_t budget_steps = 50'000'000;
  bool cross_check = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--input", c.input, "problem file (JSON)")->required();
  cmd->add_option("--report", c.report_path, "write the JSON report here");
  cmd->add_option("--budget-period", c.budget_period, "torus period cap");
  cmd->add_option("--budget-box", c.budget_box, "refutation box cap");
  cmd->add_option("--budget-steps", c.budget_steps, "work unit cap");
  cmd->add_flag("--cross-check", c.cross_check, "validate results against the brute-force oracle");
}

int emit(const nlohmann::json& report, const Common& c) {
  const std::string text = report.dump(2);
  if (!c.report_path.empty()) {
    std::ofstream out(c.report_path);
    if (!out) {
      std::cerr << "cannot write report to " << c.report_path << "\n";
      return 1;
    }
    out << text << "\n";
  }
  std::cout << text << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"group cellular automaton analyzer"};
  app.require_subcommand(1);

  Common common;
  std::map<std::string, std::string> args;
  std::string pending_command;

  auto make_cmd = [&](const std::string& name, const std::string& desc,
                      const std::vector<std::pair<std::string, bool>>& options) {
    CLI::App* cmd = app.add_subcommand(name, desc);
    add_common(cmd, common);
    for (const auto& [opt, required] : options) {
      auto* o = cmd->add_option_function<std::string>(
          "--" + opt, [&args, opt](const std::string& v) { args[opt] = v; });
      if (required) o->required();
    }
    cmd->callback([&pending_command, name] { pending_command = name; });
    return cmd;
  };

  make_cmd("member", "decide pattern membership in a shift",
           {{"shift", true}, {"pattern", true}});
  make_cmd("compare", "compare two shift presentations", {{"left", true}, {"right", true}});
  make_cmd("project", "slice, track or general projection",
           {{"shift", true}, {"width", false}, {"track", false}, {"keep-dim", false},
            {"cells", false}});
  make_cmd("image", "image of a shift under a map", {{"map", true}, {"route", false}});
  make_cmd("kernel", "kernel presentation of a map", {{"map", true}});
  make_cmd("spacetime", "space-time shift of a cellular automaton", {{"map", true}});
  make_cmd("trace", "trace subshift on a window", {{"map", true}, {"cells", true}});
  make_cmd("limitset", "limit set of a cellular automaton", {{"map", true}});
  make_cmd("analyze", "run the full decision battery", {{"map", true}});
  make_cmd("entropy", "topological entropy of a 1D shift", {{"shift", true}, {"tol", false}});
  make_cmd("orbit", "render a space-time diagram",
           {{"map", true}, {"config", true}, {"steps", true}, {"format", false}, {"out", false}});

  CLI11_PARSE(app, argc, argv);

  try {
    const gca::ProblemFile pf = gca::parse_problem(common.input);
    gca::CommandOptions opts;
    opts.args = args;
    opts.budget.max_period = common.budget_period;
    opts.budget.max_box = common.budget_box;
    opts.budget.max_steps = common.budget_steps;
    opts.cross_check = common.cross_check;
    const nlohmann::json report = gca::run_command(pending_command, opts, pf);
    return emit(report, common);
  } catch (const gca::BudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const gca::Error& e) {
    using gca::Errc;
    std::cerr << e.what() << "\n";
    if (e.code() == Errc::ParseError || e.code() == Errc::ValidationError ||
        e.code() == Errc::NotGroupHom || e.code() == Errc::NotEndomorphism)
      return 3;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
