#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include "beltstab/commands.hpp"
#include "beltstab/errors.hpp"

using namespace beltstab;

namespace {

struct Common {
  std::string scenario;
  std::string out;
  std::string format = "table";
};

void add_output(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "write the report to this file instead of stdout");
  cmd->add_option("--format", c.format, "table, csv or structured")
      ->check(CLI::IsMember({"table", "csv", "structured", "json"}));
}

int emit(const report::Report& r, const Common& c) {
  const std::string text = report::render(r, report::format_from_string(c.format));
  if (c.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw DomainError("cannot write " + c.out);
    f << text;
  }
  for (const auto& n : r.notes) {
    if (c.format != "table" || !c.out.empty()) std::cerr << "note: " << n << "\n";
  }
  return r.exit_code;
}

scenario::Scenario load(const std::string& name) {
  return scenario::load_scenario(scenario::resolve_scenario_path(name));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability bounds and Monte Carlo checks for gravitating belts"};
  app.set_version_flag("--version", std::string(BELTSTAB_VERSION));
  app.require_subcommand(1);

  Common common;
  std::optional<double> eps;
  commands::SampleOptions sopt;
  std::optional<std::uint64_t> seed;
  std::uint64_t burn_in = 0;
  bool no_oracle = false;
  std::size_t body = 0;
  int verify_n = 4;
  int draws = 100;
  commands::AxisSpec axis;
  std::string dataset;

  auto* bound = app.add_subcommand("bound", "analytic epsilon bound for a scenario");
  bound->add_option("--scenario", common.scenario, "scenario file or bundled dataset name")->required();
  bound->add_option("--eps", eps, "stability target; adds N_max or the mass cap");
  add_output(bound, common);

  auto* sample = app.add_subcommand("sample", "Metropolis estimate of the orbital-radius variance");
  sample->add_option("--scenario", common.scenario, "scenario file or bundled dataset name")->required();
  sample->add_option("--seed", seed, "RNG seed (drawn and reported when omitted)");
  sample->add_option("--steps", sopt.steps, "sweeps per chain, burn-in included");
  auto* burn = sample->add_option("--burn-in", burn_in, "burn-in sweeps (default steps/10)");
  sample->add_option("--thinning", sopt.thinning, "record every k-th sweep");
  sample->add_option("--chains", sopt.chains, "independent chains");
  sample->add_flag("--no-oracle", no_oracle, "skip the two-body quadrature oracle");
  add_output(sample, common);

  auto* oracle = app.add_subcommand("oracle", "quadrature value of <xi^2> for a two-body system");
  oracle->add_option("--scenario", common.scenario, "scenario file or bundled dataset name")->required();
  oracle->add_option("--body", body, "body index (0 or 1)");
  add_output(oracle, common);

  auto* verify = app.add_subcommand("verify", "check the graph expansion identities numerically");
  verify->add_option("--n", verify_n, "number of vertices (at most 6)");
  verify->add_option("--seed", seed, "RNG seed for the weights");
  verify->add_option("--draws", draws, "random weight sets");
  add_output(verify, common);

  auto* sweep = app.add_subcommand("sweep", "tabulate the bound along one parameter");
  sweep->add_option("--scenario", common.scenario, "scenario file or bundled dataset name")->required();
  sweep->add_option("--axis", axis.axis, "parameter to vary")->required();
  sweep->add_option("--from", axis.from, "first value (SI)")->required();
  sweep->add_option("--to", axis.to, "last value (SI)")->required();
  sweep->add_option("--count", axis.count, "number of rows")->required();
  sweep->add_flag("--log", axis.log, "geometric spacing");
  add_output(sweep, common);

  auto* ds = app.add_subcommand("datasets", "bundled scenarios");
  ds->require_subcommand(1);
  auto* ds_list = ds->add_subcommand("list", "list bundled scenarios");
  add_output(ds_list, common);
  auto* ds_show = ds->add_subcommand("show", "print a bundled scenario");
  ds_show->add_option("name", dataset, "dataset name")->required();
  add_output(ds_show, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : report::kInput;
  }

  try {
    if (*bound) return emit(commands::run_bound(load(common.scenario), eps), common);
    if (*sample) {
      sopt.seed = seed;
      if (burn->count() > 0) sopt.burn_in = burn_in;
      sopt.with_oracle = !no_oracle;
      return emit(commands::run_sample(load(common.scenario), sopt), common);
    }
    if (*oracle) return emit(commands::run_oracle(load(common.scenario), body), common);
    if (*verify) {
      if (!seed) {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        std::cerr << "note: no seed given; drew seed " << *seed << "\n";
      }
      return emit(commands::run_verify(verify_n, *seed, draws), common);
    }
    if (*sweep) return emit(commands::run_sweep(load(common.scenario), axis), common);
    if (*ds_list) return emit(commands::datasets_list(), common);
    if (*ds_show) return emit(commands::datasets_show(dataset), common);
  } catch (const ScenarioError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return report::kInput;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return report::kInput;
  } catch (const EnumerationCapError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return report::kInput;
  } catch (const std::exception& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return report::kComputation;
  }
  return report::kInput;
}
