#pragma once

// The operations behind each CLI verb. Every command returns a Report whose
// exit_code is 0 on success and 1 when the computation diverged or the chain
// did not converge. Input problems throw (ScenarioError, DomainError) and map
// to exit code 2 in the tool.

#include <cstdint>
#include <optional>
#include <string>

#include "beltstab/report.hpp"
#include "beltstab/scenario.hpp"

namespace beltstab::commands {

report::Report run_bound(const scenario::Scenario& s, std::optional<double> eps_target = {});

struct SampleOptions {
  std::uint64_t steps = 200000;
  std::optional<std::uint64_t> burn_in;  // default steps / 10
  std::uint64_t thinning = 1;
  std::size_t chains = 4;
  std::optional<std::uint64_t> seed;     // drawn from std::random_device when empty
  double proposal_sigma_xi = 2.4;
  bool with_oracle = true;               // two-body Gaussian systems only
};

report::Report run_sample(const scenario::Scenario& s, const SampleOptions& opt);
report::Report run_oracle(const scenario::Scenario& s, std::size_t body = 0);

/// Residuals of the product-expansion, component-decomposition and Penrose
/// identities over `draws` random weight sets; n above 6 is refused.
report::Report run_verify(int n, std::uint64_t seed, int draws = 100);

struct AxisSpec {
  std::string axis;
  double from = 0.0;
  double to = 0.0;
  std::size_t count = 0;
  bool log = false;
};

report::Report run_sweep(const scenario::Scenario& s, const AxisSpec& axis);

report::Report datasets_list();
report::Report datasets_show(const std::string& name);

}  // namespace beltstab::commands
