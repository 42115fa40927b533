#include "beltstab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "beltstab/errors.hpp"
#include "beltstab/graphs.hpp"
#include "beltstab/oracle.hpp"
#include "beltstab/partition_scheme.hpp"

namespace beltstab::commands {

using report::json;
using report::Report;
using scenario::Kind;
using scenario::Scenario;

namespace {

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

Report start(const std::string& command, const Scenario& s, std::optional<std::uint64_t> seed) {
  Report r;
  r.command = command;
  r.input = s.echo();
  r.provenance = report::make_provenance(
      seed, {{"scenario", s.sha256}, {"constants", scenario::bundled_constants().sha256}});
  return r;
}

json planet_margins(const bounds::PlanetChainParams& p, const std::vector<std::string>& names,
                    bool& all_positive) {
  json rows = json::array();
  all_positive = true;
  for (int i = p.i_min; i < p.i_max; ++i) {
    const double m = bounds::collision_condition(p, i);
    const std::size_t k = static_cast<std::size_t>(i - p.i_min);
    rows.push_back({{"i", i},
                    {"pair", names.at(k) + "-" + names.at(k + 1)},
                    {"margin", m},
                    {"controlled", m > 0.0}});
    all_positive = all_positive && m > 0.0;
  }
  return rows;
}

// Tree-graph bound for an explicit system, maximised over the distinguished body.
std::optional<bounds::EpsilonBound> system_tree_bound(const model::StarSystem& sys,
                                                      std::string& why_not) {
  const int n = static_cast<int>(sys.size());
  if (n < 2 || n > graphs::kMaxIdentityVertices) {
    why_not = "tree bound needs 2 to 6 bodies";
    return std::nullopt;
  }
  const graphs::EdgeWeights vbar = bounds::pair_linf_bound(sys);
  try {
    std::optional<bounds::EpsilonBound> worst;
    for (int m = 0; m < n; ++m) {
      bounds::EpsilonBound b = bounds::tree_bound(n, m, vbar);
      if (!worst || *b.value > *worst->value) worst = b;
    }
    return worst;
  } catch (const DomainError& e) {
    why_not = e.what();
    return std::nullopt;
  }
}

void bound_similar(const Scenario& s, std::optional<double> eps, Report& r) {
  const bounds::EpsilonBound b = bounds::similar_epsilon_bound(s.similar);
  const double A = b.intermediate("A");
  r.results["bound"] = report::to_json(b);
  r.results["A"] = A;
  r.results["A_bar"] = b.intermediate("A_bar");
  r.results["A_below_one_fifth"] = A < 0.2;
  if (!b.diverged()) r.results["epsilon_at_most_2A"] = *b.value <= 2.0 * A;
  if (b.diverged()) {
    r.exit_code = report::kComputation;
    r.notes.push_back("bound diverged: A e^A_bar = " + fmt(b.intermediate("A_exp_A_bar")) + " >= 1");
  }
  if (eps) {
    const auto m = bounds::similar_max_N(s.similar, *eps);
    r.results["max_N"] = {{"eps_target", *eps}, {"N", m.N}, {"diagnostic", m.diagnostic}};
  }
}

void bound_powerlaw(const Scenario& s, std::optional<double> eps, Report& r) {
  const auto& p = s.powerlaw;
  const bounds::EpsilonBound b = bounds::powerlaw_epsilon_bound(p);
  const double A = b.intermediate("A");
  const double per_N = A / static_cast<double>(p.N);
  const double wall = bounds::powerlaw_divergence_A(p.L);
  r.results["bound"] = report::to_json(b);
  r.results["A"] = A;
  r.results["A_per_N"] = per_N;
  r.results["N_per_unit_A"] = 1.0 / per_N;
  r.results["divergence_A"] = wall;
  r.results["divergence_N"] = std::floor(wall / per_N);

  report::Table classes;
  classes.columns = {"l", "N_l", "w_ll"};
  for (int l = 1; l <= p.L; ++l) {
    classes.rows.push_back({l, bounds::powerlaw_class_size(static_cast<double>(p.N), l),
                            bounds::powerlaw_w(l, l, p)});
  }
  r.table = classes;

  if (wall < 0.25) {
    r.notes.push_back("the condition A <= 1/4 lies beyond the divergence wall of the displayed "
                      "bound (A L e^A = 1 at A = " + fmt(wall) + " for L = " +
                      std::to_string(p.L) + "); the displayed bound is used");
  }
  if (b.diverged()) {
    r.exit_code = report::kComputation;
    r.notes.push_back("bound diverged: A L e^A = " + fmt(b.intermediate("A_L_exp_A")) + " >= 1");
  }
  if (eps) {
    const auto m = bounds::powerlaw_max_N(p, *eps);
    r.results["max_N"] = {{"eps_target", *eps},
                          {"N", m.N},
                          {"A_at_max", per_N * static_cast<double>(m.N)},
                          {"diagnostic", m.diagnostic}};
  }
}

void bound_planets(const Scenario& s, std::optional<double> eps, Report& r) {
  const bounds::PlanetChainParams p = s.planets.effective();
  const bounds::PlanetConstants k = bounds::planet_constants(p);
  r.results["c1"] = k.c1;
  r.results["c2"] = k.c2;
  r.results["c3"] = k.c3;
  r.results["m_max"] = p.max_mass();
  r.results["m_max_over_M"] = p.max_mass() / p.M;
  r.results["estimate"] = std::string(bounds::to_string(p.estimate));

  json estimates = json::object();
  for (auto e : {bounds::PlanetEstimate::closed_form, bounds::PlanetEstimate::tree_enumeration}) {
    bounds::PlanetChainParams q = p;
    q.estimate = e;
    try {
      estimates[std::string(bounds::to_string(e))] = report::to_json(bounds::planets_bound(q));
    } catch (const std::exception& ex) {
      estimates[std::string(bounds::to_string(e))] = {{"error", ex.what()}};
    }
  }
  r.results["estimates"] = estimates;

  const double target = eps.value_or(1.0);
  bool margins_ok = false;
  const json margins = planet_margins(p, s.planets.names, margins_ok);
  report::Table t;
  t.columns = {"i", "pair", "margin", "controlled"};
  for (const auto& m : margins) t.rows.push_back({m["i"], m["pair"], m["margin"], m["controlled"]});
  r.table = t;

  try {
    const bounds::EpsilonBound b = bounds::planets_bound(p);
    r.results["bound"] = report::to_json(b);
    const bool within = !b.diverged() && *b.value <= target;
    r.results["eps_target"] = target;
    r.results["collisions_controlled"] = margins_ok;
    r.results["stable"] = within && margins_ok;
  } catch (const DomainError& e) {
    r.results["bound"] = {{"error", e.what()}};
    r.results["stable"] = false;
    r.exit_code = report::kComputation;
    r.notes.push_back(std::string("bound chain precondition failed: ") + e.what());
  }

  if (eps) {
    const bounds::MassCap cap = bounds::planets_max_mass(p, *eps);
    r.results["max_mass"] = {{"eps_target", *eps},
                             {"mass", cap.mass},
                             {"mass_over_M", cap.mass / p.M},
                             {"binding", cap.binding},
                             {"diagnostic", cap.diagnostic}};
  }
}

void bound_custom(const Scenario& s, Report& r) {
  std::string why;
  const auto b = system_tree_bound(s.custom.system, why);
  if (!b) {
    r.results["bound"] = {{"error", why}};
    r.exit_code = report::kComputation;
    r.notes.push_back("no analytic bound: " + why);
    return;
  }
  r.results["bound"] = report::to_json(*b);
}

}  // namespace

Report run_bound(const Scenario& s, std::optional<double> eps) {
  if (eps && !(*eps > 0.0)) throw DomainError("--eps must be positive");
  Report r = start("bound", s, std::nullopt);
  switch (s.kind) {
    case Kind::similar: bound_similar(s, eps, r); break;
    case Kind::powerlaw: bound_powerlaw(s, eps, r); break;
    case Kind::planets: bound_planets(s, eps, r); break;
    case Kind::custom_system: bound_custom(s, r); break;
  }
  return r;
}

Report run_sample(const Scenario& s, const SampleOptions& opt) {
  const scenario::SampleTarget target = scenario::sample_target(s);
  std::uint64_t seed = 0;
  bool drawn = false;
  if (opt.seed) {
    seed = *opt.seed;
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    drawn = true;
  }
  Report r = start("sample", s, seed);
  if (drawn) r.notes.push_back("no seed given; drew seed " + std::to_string(seed));

  sampler::ChainSettings cs;
  cs.steps = opt.steps;
  cs.burn_in = opt.burn_in.value_or(opt.steps / 10);
  cs.thinning = opt.thinning;
  cs.n_chains = opt.chains;
  cs.seed = seed;
  cs.proposal_sigma_xi = opt.proposal_sigma_xi;
  r.results["settings"] = {{"steps", cs.steps},       {"burn_in", cs.burn_in},
                           {"thinning", cs.thinning}, {"chains", cs.n_chains},
                           {"seed", cs.seed},         {"proposal_sigma_xi", cs.proposal_sigma_xi}};

  const sampler::SampleStats stats = sampler::metropolis_run(target.model, cs);
  r.results["stats"] = report::to_json(stats, target.names);
  if (!stats.converged) {
    r.exit_code = report::kComputation;
    r.notes.push_back("chain not converged: tau = " + fmt(stats.tau_max) + " recorded samples, " +
                      "limit " + fmt(static_cast<double>(stats.samples_per_chain) / 1000.0) +
                      (stats.tau_window_ok ? "" : " (autocorrelation window not reached)"));
    return r;
  }
  const auto eps = sampler::empirical_epsilon(stats, target.model.gamma);
  double eps_max = -1e300;
  double eps_max_se = 0.0;
  json per_body = json::array();
  for (std::size_t i = 0; i < eps.size(); ++i) {
    per_body.push_back({{"name", target.names.at(i)}, {"epsilon", eps[i].value}, {"se", eps[i].se}});
    if (eps[i].value > eps_max) {
      eps_max = eps[i].value;
      eps_max_se = eps[i].se;
    }
  }
  r.results["empirical_epsilon"] = per_body;

  std::optional<bounds::EpsilonBound> analytic;
  std::string why;
  try {
    switch (s.kind) {
      case Kind::similar: analytic = bounds::similar_epsilon_bound(s.similar); break;
      case Kind::planets: analytic = bounds::planets_bound(s.planets.effective()); break;
      case Kind::custom_system: analytic = system_tree_bound(s.custom.system, why); break;
      case Kind::powerlaw: break;
    }
  } catch (const DomainError& e) {
    why = e.what();
  }
  if (analytic) {
    json cmp = {{"bound", report::to_json(*analytic)}};
    if (!analytic->diverged()) {
      cmp["consistent"] = eps_max - 3.0 * eps_max_se <= *analytic->value;
      cmp["empirical_max"] = eps_max;
      cmp["empirical_max_se"] = eps_max_se;
    }
    r.results["analytic_comparison"] = cmp;
  } else if (!why.empty()) {
    r.notes.push_back("no analytic bound applies: " + why);
  }

  if (opt.with_oracle && target.system && target.system->size() == 2 &&
      target.model.free_measure == sampler::FreeMeasure::gaussian) {
    const auto o = oracle::oracle_two_body(*target.system, 0);
    const auto& b0 = stats.bodies[0];
    r.results["oracle"] = {{"xi2", o.second_moment},
                           {"error_estimate", o.error_estimate},
                           {"z", (b0.second_moment - o.second_moment) / b0.second_moment_se}};
  }
  return r;
}

Report run_oracle(const Scenario& s, std::size_t body) {
  const scenario::SampleTarget target = scenario::sample_target(s);
  if (!target.system || target.system->size() != 2 ||
      target.model.free_measure != sampler::FreeMeasure::gaussian) {
    throw DomainError("the oracle handles two-body systems with the Gaussian free measure");
  }
  Report r = start("oracle", s, std::nullopt);
  const auto o = oracle::oracle_two_body(*target.system, body);
  const double g = target.system->bodies.at(body).gamma;
  r.results = {{"body", body},
               {"xi2", o.second_moment},
               {"free_xi2", o.free_value},
               {"epsilon", o.second_moment * g * g - 1.0},
               {"error_estimate", o.error_estimate},
               {"evaluations", o.evaluations}};
  return r;
}

Report run_verify(int n, std::uint64_t seed, int draws) {
  graphs::check_vertex_cap(n, graphs::kMaxIdentityVertices);
  if (draws < 1) throw DomainError("draws must be at least 1");
  Report r;
  r.command = "verify";
  r.input = {{"n", n}, {"seed", seed}, {"draws", draws}};
  r.provenance = report::make_provenance(seed, {});

  auto rng = sampler::chain_rng(seed, 0);
  std::uniform_real_distribution<double> b_dist(-0.5, 0.5);
  std::uniform_real_distribution<double> v_dist(-0.4, 0.4);
  double product = 0.0, components = 0.0, penrose = 0.0;
  for (int d = 0; d < draws; ++d) {
    graphs::EdgeWeights w(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        w.set_b(i, j, b_dist(rng));
        w.set_v(i, j, v_dist(rng));
      }
    }
    product = std::max(product, graphs::product_expansion_check(n, w));
    components = std::max(components, graphs::component_decomposition_check(n, w));
    penrose = std::max(penrose, graphs::penrose_identity_check(n, w, 0));
  }
  const bool partition = graphs::penrose_partition_check(n, 0);
  const double threshold = 1e-10;
  const bool pass = partition && product <= threshold && components <= threshold &&
                    penrose <= threshold;
  r.results = {{"product_expansion_residual", product},
               {"component_decomposition_residual", components},
               {"penrose_identity_residual", penrose},
               {"partition_scheme_valid", partition},
               {"connected_graphs", graphs::partition_scheme(n, 0).connected_graph_count},
               {"trees", graphs::enumerate_trees(n).size()},
               {"threshold", threshold},
               {"pass", pass}};
  if (!pass) r.exit_code = report::kComputation;
  return r;
}

Report run_sweep(const Scenario& s, const AxisSpec& axis) {
  // Validates the axis name up front, also for empty sweeps.
  const auto axes = scenario::sweepable(s.kind);
  if (std::find(axes.begin(), axes.end(), axis.axis) == axes.end()) {
    scenario::with_parameter(s, axis.axis, axis.from);
  }
  if (axis.log && axis.count > 0 && !(axis.from > 0.0 && axis.to > 0.0)) {
    throw DomainError("log sweeps need positive end points");
  }
  Report r = start("sweep", s, std::nullopt);
  r.results = {{"axis", axis.axis},       {"from", axis.from}, {"to", axis.to},
               {"count", axis.count},     {"log", axis.log}};

  struct Row {
    double x;
    std::optional<double> eps;
    std::string status;
    std::vector<std::pair<std::string, double>> inter;
  };
  std::vector<Row> rows;
  for (std::size_t k = 0; k < axis.count; ++k) {
    const double t = axis.count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(axis.count - 1);
    const double x = axis.log ? std::exp(std::log(axis.from) + t * (std::log(axis.to) - std::log(axis.from)))
                              : axis.from + t * (axis.to - axis.from);
    Row row{x, std::nullopt, "ok", {}};
    try {
      const Scenario q = scenario::with_parameter(s, axis.axis, x);
      bounds::EpsilonBound b;
      switch (q.kind) {
        case Kind::similar: b = bounds::similar_epsilon_bound(q.similar); break;
        case Kind::powerlaw: b = bounds::powerlaw_epsilon_bound(q.powerlaw); break;
        case Kind::planets: {
          const auto p = q.planets.effective();
          b = bounds::planets_bound(p);
          double worst = 1e300;
          for (int i = p.i_min; i < p.i_max; ++i) worst = std::min(worst, bounds::collision_condition(p, i));
          b.record("min_collision_margin", worst);
          break;
        }
        case Kind::custom_system: break;
      }
      if (axis.axis == "N" || axis.axis == "L") row.x = q.si_params[axis.axis].get<double>();
      row.eps = b.value;
      if (b.diverged()) row.status = "diverged";
      row.inter = b.intermediates;
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
    rows.push_back(row);
  }

  report::Table t;
  t.columns = {axis.axis, "epsilon", "status"};
  for (const auto& row : rows) {
    for (const auto& [k, v] : row.inter) {
      if (std::find(t.columns.begin(), t.columns.end(), k) == t.columns.end()) t.columns.push_back(k);
    }
  }
  std::size_t crossings = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    std::vector<json> cells{row.x, row.eps ? json(*row.eps) : json(nullptr), row.status};
    for (std::size_t c = 3; c < t.columns.size(); ++c) {
      json cell = nullptr;
      for (const auto& [k, v] : row.inter) {
        if (k == t.columns[c]) cell = v;
      }
      cells.push_back(cell);
    }
    t.rows.push_back(cells);
    if (i > 0 && (rows[i - 1].status == "diverged") != (row.status == "diverged")) ++crossings;
  }
  r.table = t;
  r.results["rows"] = rows.size();
  r.results["divergence_crossings"] = crossings;
  if (s.kind == Kind::powerlaw) {
    r.results["divergence_A"] = bounds::powerlaw_divergence_A(s.powerlaw.L);
    r.notes.push_back("A <= 1/4 is not reachable below the divergence wall of the displayed bound");
  }
  return r;
}

Report datasets_list() {
  Report r;
  r.command = "datasets list";
  r.provenance = report::make_provenance(std::nullopt,
                                         {{"constants", scenario::bundled_constants().sha256}});
  report::Table t;
  t.columns = {"name", "kind", "sha256", "description"};
  for (const auto& d : scenario::list_datasets()) {
    t.rows.push_back({d.name, d.kind, d.sha256, d.description});
  }
  r.results = {{"directory", scenario::dataset_dir().string()}, {"count", t.rows.size()}};
  r.table = t;
  return r;
}

Report datasets_show(const std::string& name) {
  const auto path = scenario::resolve_scenario_path(name);
  const Scenario s = scenario::load_scenario(path);
  Report r = start("datasets show", s, std::nullopt);
  r.results = {{"path", path.string()}, {"file", json::parse(scenario::read_file(path))}};
  return r;
}

}  // namespace beltstab::commands
