#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mpt/errors.hpp"
#include "mpt/ising.hpp"
#include "mpt/markov.hpp"
#include "mpt/montecarlo.hpp"
#include "mpt/potential.hpp"
#include "mpt/verify.hpp"
#include "mpt/zrp.hpp"

using nlohmann::json;

namespace {

constexpr const char* kArtifactVersion = "1.0.0";

// Usage-class failures map to exit code 2, everything else to 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool is_usage_error(mpt::ErrorKind k) {
  using mpt::ErrorKind;
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::UnknownState:
    case ErrorKind::DuplicateState:
    case ErrorKind::NegativeRate:
    case ErrorKind::InvalidRate:
    case ErrorKind::NotIrreducible:
    case ErrorKind::OverlappingSets:
    case ErrorKind::EmptySet:
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionOrder:
    case ErrorKind::AlphaOutOfRange:
    case ErrorKind::ValleysOverlap:
    case ErrorKind::StateSpaceTooLarge:
      return true;
    default:
      return false;
  }
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number list: '" + s + "'");
    }
  }
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (double v : parse_doubles(s)) {
    if (v != std::floor(v)) throw UsageError("not an integer list: '" + s + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct Report {
  std::string command;
  json parameters = json::object();
  json results = json::object();
  std::vector<mpt::Check> checks;
  json timings = json::object();
  std::uint64_t seed = 0;

  void check(const std::string& name, double metric, double tol) { checks.push_back({name, metric, tol, metric <= tol}); }
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const mpt::Check& c) { return c.pass; });
  }
  json to_json() const {
    json c = json::array();
    for (const auto& x : checks) c.push_back(mpt::to_json(x));
    return {{"reportVersion", 1}, {"artifactVersion", kArtifactVersion}, {"command", command},
            {"parameters", parameters}, {"seed", seed}, {"results", results},
            {"checks", c}, {"pass", pass()}, {"timings", timings}};
  }
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::ofstream open_csv(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw UsageError("cannot open CSV path '" + path + "'");
  os.precision(17);
  return os;
}

mpt::MarkovProcess load_process(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open process file '" + path + "'");
  json doc;
  try {
    is >> doc;
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
  return mpt::process_from_json(doc);
}

mpt::StateSet state_list(const mpt::MarkovProcess& P, const std::string& s) {
  std::vector<std::string> ids = split(s, ',');
  if (ids.empty()) throw UsageError("empty state list");
  for (const auto& id : ids)
    if (!P.has_state(id)) throw UsageError("unknown state '" + id + "'");
  return mpt::to_indices(P, ids);
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
  std::string suite;
  int trials = 50;
  std::uint64_t seed = 1;
};

Report cmd_verify(const VerifyOpts& o) {
  Report r;
  r.command = "verify";
  r.seed = o.seed;
  r.parameters = {{"suite", o.suite}, {"trials", o.trials}};
  const std::vector<std::string> suites =
      o.suite == "all" ? mpt::verify_suites() : std::vector<std::string>{o.suite};
  for (const auto& s : suites) {
    Timer t;
    for (auto c : mpt::run_suite(s, o.trials, o.seed)) {
      c.name = s + "." + c.name;
      r.checks.push_back(c);
    }
    r.timings[s] = t.seconds();
  }
  return r;
}

// ---------------------------------------------------------------- cap

struct CapOpts {
  std::string process, A, B, routes = "dirichlet,escape";
  bool adjoint = false;
  double tolerance = 1e-10;
};

Report cmd_cap(const CapOpts& o) {
  Report r;
  r.command = "cap";
  r.parameters = {{"process", o.process}, {"A", o.A}, {"B", o.B}, {"routes", o.routes}, {"adjoint", o.adjoint}};
  Timer t;
  const mpt::MarkovProcess P = load_process(o.process);
  const mpt::StateSet A = state_list(P, o.A), B = state_list(P, o.B);
  mpt::check_disjoint(P, A, B);
  std::vector<double> values;
  for (const auto& route : split(o.routes, ',')) {
    if (route == "dirichlet")
      values.push_back(mpt::capacity(P, A, B).value);
    else if (route == "escape")
      values.push_back(mpt::capacity_via_escape(P, A, B).value);
    else
      throw UsageError("unknown route '" + route + "'");
    r.results[route] = values.back();
  }
  if (o.adjoint) {
    values.push_back(mpt::capacity(mpt::adjoint(P), A, B).value);
    r.results["adjoint"] = values.back();
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double spread = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
  r.results["cross_route_residual"] = spread;
  r.results["states"] = P.size();
  r.check("routes_agree", spread, o.tolerance);
  r.timings["total"] = t.seconds();
  return r;
}

// ---------------------------------------------------------------- ising

struct IsingOpts {
  int K = 5, L = 6;
  std::string beta_grid = "4,6,8";
  std::string mode = "barrier";
  std::string csv;
  std::size_t budget = 5'000'000;
};

json structure_json(const mpt::TypicalStructure& S) {
  const auto& i = S.invariants;
  return {{"constants", {{"Gamma", S.Gamma}, {"b", S.b}, {"e", S.e}, {"kappa", S.kappa}, {"e_plus", S.plus.e}}},
          {"sizes",
           {{"N_hat_S", S.N_hat_S.size()}, {"E_minus", S.E_minus.size()}, {"E_plus", S.E_plus.size()},
            {"O_minus", S.O_minus.size()}, {"O_plus", S.O_plus.size()}, {"B", S.B.size()},
            {"V_minus", S.minus.vertices.size()}, {"V_plus", S.plus.vertices.size()}}},
          {"invariants",
           {{"E_disjoint", i.E_disjoint}, {"E_minus_cap_B", i.E_minus_cap_B}, {"E_plus_cap_B", i.E_plus_cap_B},
            {"E_cup_B", i.E_cup_B}, {"I_minus_form", i.I_minus_form}, {"I_plus_form", i.I_plus_form},
            {"R_singletons", i.R_singletons}, {"low_energy", i.low_energy}, {"N_hat_equal", i.N_hat_equal},
            {"N_disjoint", i.N_disjoint}, {"set_lemma", i.set_lemma}, {"e_symmetric", i.e_symmetric}}}};
}

Report cmd_ising(const IsingOpts& o) {
  Report r;
  r.command = "ising";
  r.parameters = {{"K", o.K}, {"L", o.L}, {"mode", o.mode}, {"beta_grid", o.beta_grid}};
  const std::vector<double> betas = parse_doubles(o.beta_grid);
  const mpt::IsingLattice lat(o.K, o.L);
  r.results["assumptionsOK"] = lat.assumptions_ok();
  Timer t;
  if (o.mode == "barrier") {
    const auto b = mpt::communication_height(lat, lat.all_plus(), lat.all_minus(), -1, o.budget);
    r.results["barrier"] = b.value;
    r.results["expanded"] = b.expanded;
    r.results["Gamma"] = lat.gamma();
    if (lat.sites() <= 24) {
      const int ex = mpt::exhaustive_barrier(lat, lat.all_plus(), lat.all_minus());
      r.results["exhaustive"] = ex;
      r.check("matches_exhaustive", std::abs(b.value - ex), 0.0);
    }
    if (lat.assumptions_ok()) r.check("equals_2K_plus_2", std::abs(b.value - lat.gamma()), 0.0);
  } else if (o.mode == "structure" || o.mode == "f0" || o.mode == "psi0" || o.mode == "ek-report") {
    const mpt::TypicalStructure S = mpt::typical_structure(lat, o.budget);
    r.timings["structure"] = t.seconds();
    r.results["structure"] = structure_json(S);
    if (lat.assumptions_ok()) r.check("set_identities", S.invariants.all() ? 0.0 : 1.0, 0.0);
    r.check("e_in_range", S.e > 0.0 && S.e <= 1.0 / o.L ? 0.0 : 1.0, 0.0);
    const bool want_f = o.mode != "structure" && o.mode != "psi0";
    const bool want_psi = o.mode != "structure" && o.mode != "f0";
    std::vector<mpt::F0Report> fr;
    std::vector<mpt::FlowReport> pr;
    if (want_f) {
      json rows = json::array();
      for (double beta : betas) {
        fr.push_back(mpt::dirichlet_of_f0(S, lat, beta));
        const auto& f = fr.back();
        rows.push_back({{"beta", beta}, {"scaled", f.scaled}, {"Z", f.Z}, {"feasible", f.feasible},
                        {"in_unit_interval", f.in_unit_interval}, {"r2_consistency", f.r2_consistency}});
        r.check("f0_feasible_beta_" + std::to_string(beta), f.feasible && f.in_unit_interval ? 0.0 : 1.0, 0.0);
        r.check("f0_bulk_edge_match_beta_" + std::to_string(beta), f.r2_consistency, 1e-12);
      }
      r.results["f0"] = rows;
    }
    if (want_psi) {
      const mpt::IsingFlow psi = mpt::test_flow_psi0(S, lat);
      json rows = json::array();
      for (double beta : betas) {
        pr.push_back(mpt::flow_checks(S, lat, psi, beta));
        const auto& p = pr.back();
        rows.push_back({{"beta", beta}, {"scaled", p.scaled_norm}, {"div_minus", p.div_minus},
                        {"div_plus", p.div_plus}, {"max_div_elsewhere", p.max_div_elsewhere},
                        {"bulk_unit", p.bulk_unit}, {"edges", p.edges}});
      }
      if (!pr.empty()) {
        r.check("psi0_divergence_off_ground", pr.front().max_div_elsewhere, 1e-12);
        r.check("psi0_unit_source", std::abs(pr.front().div_minus - 1.0), 1e-12);
        r.check("psi0_unit_sink", std::abs(pr.front().div_plus + 1.0), 1e-12);
      }
      r.results["psi0"] = rows;
    }
    if (o.mode == "ek-report") {
      // e^{Gamma beta} 2 kappa cap is bracketed by 1 / (scaled flow norm) and the scaled Dirichlet form.
      json rows = json::array();
      std::ofstream csv;
      if (!o.csv.empty()) {
        csv = open_csv(o.csv);
        csv << "beta,scaledUpper,scaledLower\n";
      }
      for (std::size_t i = 0; i < betas.size(); ++i) {
        const double upper = fr[i].scaled, lower = 1.0 / pr[i].scaled_norm;
        rows.push_back({{"beta", betas[i]}, {"scaledUpper", upper}, {"scaledLower", lower}});
        r.check("bracket_ordered_beta_" + std::to_string(betas[i]), std::max(0.0, lower - upper), 0.0);
        if (csv) csv << betas[i] << ',' << upper << ',' << lower << '\n';
      }
      r.results["eyring_kramers"] = rows;
      json rate = json::array();
      for (const auto& row : mpt::rate_approximation_check(S, lat, betas))
        rate.push_back({{"beta", row.beta}, {"scaled_dev", row.scaled_dev}});
      r.results["rate_approximation"] = rate;
    } else if (!o.csv.empty()) {
      std::ofstream csv = open_csv(o.csv);
      csv << "beta,scaledUpper,scaledLower\n";
      for (std::size_t i = 0; i < betas.size(); ++i) {
        csv << betas[i] << ',';
        if (!fr.empty()) csv << fr[i].scaled;
        csv << ',';
        if (!pr.empty()) csv << 1.0 / pr[i].scaled_norm;
        csv << '\n';
      }
    }
  } else if (o.mode == "exact") {
    const auto rep = mpt::exact_small_lattice(lat, betas);
    json rows = json::array();
    for (const auto& row : rep.rows) {
      rows.push_back({{"beta", row.beta}, {"cap", row.cap}, {"cap_reverse", row.cap_reverse},
                      {"cap_escape", row.cap_escape}, {"max_h_near_plus", row.max_h_near_plus},
                      {"min_h_near_minus", row.min_h_near_minus}, {"Z", row.Z}, {"mu_plus", row.mu_plus}});
      r.check("routes_agree_beta_" + std::to_string(row.beta),
              std::abs(row.cap - row.cap_escape) / row.cap, 1e-8);
      r.check("cap_symmetric_beta_" + std::to_string(row.beta),
              std::abs(row.cap - row.cap_reverse) / row.cap, 1e-8);
    }
    r.results["rows"] = rows;
    r.results["barrier"] = rep.barrier;
    r.results["log_slope"] = rep.log_slope;
    if (rep.rows.size() >= 2)
      r.check("log_slope_vs_barrier", std::abs(rep.log_slope - rep.barrier) / rep.barrier, 0.10);
    if (!o.csv.empty()) {
      std::ofstream csv = open_csv(o.csv);
      csv << "beta,cap,capEscape\n";
      for (const auto& row : rep.rows) csv << row.beta << ',' << row.cap << ',' << row.cap_escape << '\n';
    }
  } else {
    throw UsageError("unknown ising mode '" + o.mode + "'");
  }
  r.timings["total"] = t.seconds();
  return r;
}

// ---------------------------------------------------------------- zrp

struct ZrpOpts {
  int sites = 3;
  double alpha = 2.0, p = 0.7;
  std::string n_grid = "10,20,30";
  std::string pairs = "0:1";
  std::string mode = "capacity";
  std::string csv;
  int transitions = 2000;
  std::uint64_t seed = 1;
};

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

Report cmd_zrp(const ZrpOpts& o) {
  Report r;
  r.command = "zrp";
  r.seed = o.seed;
  r.parameters = {{"sites", o.sites}, {"alpha", o.alpha}, {"p", o.p}, {"n_grid", o.n_grid},
                  {"pairs", o.pairs}, {"mode", o.mode}};
  const std::vector<int> grid = parse_ints(o.n_grid);
  Timer t;
  const mpt::LimitChain Y = mpt::limit_chain(o.sites, o.alpha, o.p);
  auto build = [&](int N) {
    mpt::ZrpParams prm;
    prm.sites = o.sites;
    prm.N = N;
    prm.alpha = o.alpha;
    prm.p = o.p;
    return mpt::build_zrp(prm);
  };
  json rows = json::array();
  if (o.mode == "capacity") {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs;
    for (const auto& pr : split(o.pairs, ',')) {
      const auto parts = split(pr, ':');
      if (parts.size() != 2) throw UsageError("pairs look like 0:1 or 0:1+2");
      std::vector<int> A, B;
      for (const auto& s : split(parts[0], '+')) A.push_back(std::stoi(s));
      for (const auto& s : split(parts[1], '+')) B.push_back(std::stoi(s));
      pairs.emplace_back(A, B);
    }
    std::ofstream csv;
    if (!o.csv.empty()) {
      csv = open_csv(o.csv);
      csv << "N,scaledCap,capY,relErr\n";
    }
    std::vector<std::vector<double>> errs(pairs.size());
    for (int N : grid) {
      const mpt::ZrpModel m = build(N);
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto row = mpt::zrp_capacity_row(m, Y, pairs[k].first, pairs[k].second);
        rows.push_back({{"N", N}, {"pair", k}, {"ell", row.ell}, {"states", row.states}, {"cap", row.cap},
                        {"cap_s", row.cap_s}, {"scaled", row.scaled}, {"cap_Y", row.cap_Y},
                        {"rel_err", row.rel_err}, {"sandwich", row.sandwich}, {"C0", row.C0}});
        r.check("sandwich_N" + std::to_string(N) + "_pair" + std::to_string(k), row.sandwich ? 0.0 : 1.0, 0.0);
        errs[k].push_back(row.rel_err);
        if (csv) csv << N << ',' << row.scaled << ',' << row.cap_Y << ',' << row.rel_err << '\n';
      }
    }
    for (std::size_t k = 0; k < pairs.size(); ++k)
      if (grid.size() > 1) r.check("rel_err_decreasing_pair" + std::to_string(k), strictly_decreasing(errs[k]) ? 0.0 : 1.0, 0.0);
  } else if (o.mode == "rates") {
    for (int N : grid) {
      const mpt::ZrpModel m = build(N);
      const auto rates = mpt::mean_jump_rates(m);
      json row = {{"N", N}, {"ell", m.ell}, {"lambda", rates.lambda}, {"r", rates.r},
                  {"mu_valley", rates.mu_valley}, {"e610_err", rates.e610_err}, {"e611_err", rates.e611_err}};
      r.check("e610_N" + std::to_string(N), rates.e610_err, 1e-8);
      r.check("e611_N" + std::to_string(N), rates.e611_err, 1e-8);
      if (o.p == 0.5) {
        const double er1 = mpt::er1_error(m, rates);
        row["er1_err"] = er1;
        r.check("er1_N" + std::to_string(N), er1, 1e-10);
      }
      rows.push_back(row);
    }
  } else if (o.mode == "conditions") {
    std::vector<double> h0, h1, h2, h3a, h3b, mv;
    for (int N : grid) {
      const mpt::ZrpModel m = build(N);
      const auto rates = mpt::mean_jump_rates(m);
      const auto c = mpt::martingale_conditions(m, Y, rates);
      rows.push_back({{"N", N}, {"ell", c.ell}, {"H0_err", c.H0_err}, {"H1", c.H1}, {"lemcap_const", c.lemcap_const},
                      {"H2", c.H2}, {"H3_hit", c.H3_hit}, {"H3_stat", c.H3_stat}, {"mu_valley_err", c.mu_valley_err}});
      h0.push_back(c.H0_err);
      h1.push_back(c.H1);
      h2.push_back(c.H2);
      h3a.push_back(c.H3_hit);
      h3b.push_back(c.H3_stat);
      mv.push_back(c.mu_valley_err);
    }
    if (grid.size() > 1) {
      r.check("H0_decreasing", strictly_decreasing(h0) ? 0.0 : 1.0, 0.0);
      r.check("H1_decreasing", strictly_decreasing(h1) ? 0.0 : 1.0, 0.0);
      r.check("H2_decreasing", strictly_decreasing(h2) ? 0.0 : 1.0, 0.0);
      r.check("H3_hit_decreasing", strictly_decreasing(h3a) ? 0.0 : 1.0, 0.0);
      r.check("H3_stat_decreasing", strictly_decreasing(h3b) ? 0.0 : 1.0, 0.0);
      r.check("mu_valley_decreasing", strictly_decreasing(mv) ? 0.0 : 1.0, 0.0);
    }
  } else if (o.mode == "order-mc") {
    for (int N : grid) {
      const mpt::ZrpModel m = build(N);
      const auto rates = mpt::mean_jump_rates(m);
      const auto s = mpt::order_chain_statistics(m, Y, rates, o.transitions, o.seed);
      rows.push_back({{"N", N}, {"departures", s.departures}, {"transitions", s.transitions},
                      {"matrix", s.matrix}, {"expected_exact", s.expected_exact},
                      {"expected_limit", s.expected_limit}, {"z_exact", s.z_exact}, {"z_limit", s.z_limit},
                      {"mean_sojourn", s.mean_sojourn}, {"mean_sojourn_stderr", s.mean_sojourn_stderr},
                      {"limit_sojourn", s.limit_sojourn}});
      double worst = 0.0;
      for (double z : s.z_exact) worst = std::max(worst, std::abs(z));
      r.check("first_jump_within_3se_N" + std::to_string(N), worst, 3.0);
    }
  } else {
    throw UsageError("unknown zrp mode '" + o.mode + "'");
  }
  r.results["rows"] = rows;
  r.timings["total"] = t.seconds();
  return r;
}

// ---------------------------------------------------------------- simulate

struct SimOpts {
  std::string process, hit, start;
  std::uint64_t reps = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
};

Report cmd_simulate(const SimOpts& o) {
  Report r;
  r.command = "simulate";
  r.seed = o.seed;
  r.parameters = {{"process", o.process}, {"hit", o.hit}, {"start", o.start}, {"reps", o.reps}};
  Timer t;
  const mpt::MarkovProcess P = load_process(o.process);
  const mpt::StateSet B = state_list(P, o.hit);
  const int z = o.start.empty() ? 0 : state_list(P, o.start).at(0);
  mpt::Measure start(P.size(), 0.0);
  start[z] = 1.0;
  const auto est = mpt::estimate_hitting_time(P, start, B, o.reps, o.seed, o.threads);
  const double exact = mpt::expected_hitting_times(P, B)[z];
  const double zscore = est.stderr_mean > 0.0 ? (est.mean - exact) / est.stderr_mean : 0.0;
  r.results = {{"start", P.state(z)}, {"mean", est.mean}, {"stderr", est.stderr_mean},
               {"replications", est.replications}, {"exact", exact}, {"z", zscore}};
  r.check("mean_within_3se", std::abs(zscore), 3.0);
  r.timings["total"] = t.seconds();
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Potential theory of finite Markov processes: capacities, variational principles, model packs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML configuration file; command-line flags take precedence");
  std::string out_path;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--out", out_path, "Write the JSON report to this file instead of stdout");
  app.add_option("--threads", threads, "Worker threads for Monte Carlo")->check(CLI::PositiveNumber);

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "Run an invariant suite");
  std::vector<std::string> suite_names = mpt::verify_suites();
  suite_names.push_back("all");
  verify->add_option("suite", vo.suite, "core, potential, flows, variational, collapse or all")
      ->required()
      ->check(CLI::IsMember(suite_names));
  verify->add_option("--trials", vo.trials, "Random instances per check")->check(CLI::PositiveNumber);
  verify->add_option("--seed", vo.seed);

  CapOpts co;
  auto* cap = app.add_subcommand("cap", "Capacity of a process read from JSON");
  cap->add_option("process", co.process, "Process file {states, rates}")->required();
  cap->add_option("-A,--A", co.A, "Comma-separated state ids")->required();
  cap->add_option("-B,--B", co.B, "Comma-separated state ids")->required();
  cap->add_option("--routes", co.routes, "dirichlet, escape");
  cap->add_flag("--adjoint", co.adjoint, "Also compute the capacity of the adjoint process");
  cap->add_option("--tolerance", co.tolerance);

  IsingOpts io;
  auto* ising = app.add_subcommand("ising", "Metropolis Ising model on the K x L torus");
  ising->add_option("--K", io.K)->check(CLI::Range(2, 64));
  ising->add_option("--L", io.L)->check(CLI::Range(2, 64));
  ising->add_option("--beta-grid", io.beta_grid);
  ising->add_option("--mode", io.mode)
      ->check(CLI::IsMember({"barrier", "structure", "f0", "psi0", "exact", "ek-report"}));
  ising->add_option("--csv", io.csv);
  ising->add_option("--budget", io.budget);

  ZrpOpts zo;
  auto* zrp = app.add_subcommand("zrp", "Asymmetric zero-range process on a cycle");
  zrp->add_option("--sites", zo.sites)->check(CLI::Range(2, 8));
  zrp->add_option("--alpha", zo.alpha);
  zrp->add_option("--p", zo.p);
  zrp->add_option("--n-grid", zo.n_grid);
  zrp->add_option("--pairs", zo.pairs, "Valley pairs A:B, e.g. 0:1,0:1+2");
  zrp->add_option("--mode", zo.mode)->check(CLI::IsMember({"capacity", "rates", "conditions", "order-mc"}));
  zrp->add_option("--csv", zo.csv);
  zrp->add_option("--transitions", zo.transitions, "Departures from valley 0 in order-mc")->check(CLI::PositiveNumber);
  zrp->add_option("--seed", zo.seed);

  SimOpts so;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo hitting times against the exact solve");
  sim->add_option("--process", so.process)->required();
  sim->add_option("--hit", so.hit, "Comma-separated target state ids")->required();
  sim->add_option("--start", so.start, "Start state id (default: first state)");
  sim->add_option("--reps", so.reps)->check(CLI::PositiveNumber);
  sim->add_option("--seed", so.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Report report;
  try {
    if (*verify) report = cmd_verify(vo);
    if (*cap) report = cmd_cap(co);
    if (*ising) report = cmd_ising(io);
    if (*zrp) report = cmd_zrp(zo);
    if (*sim) {
      so.threads = threads;
      report = cmd_simulate(so);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const mpt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_usage_error(e.kind()) ? 2 : 1;
  }

  const std::string text = report.to_json().dump(2);
  if (out_path.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream os(out_path);
    if (!os) {
      std::cerr << "error: cannot write " << out_path << '\n';
      return 2;
    }
    os << text << '\n';
  }
  return report.pass() ? 0 : 1;
}
