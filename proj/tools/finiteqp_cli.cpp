// Command-line front end: every pipeline behind deterministic seeding and
// CSV/JSON artifact emission. Exit codes: 0 success, 2 validation error,
// 3 optimizer non-convergence (results still written, flagged).

#include "CLI11.hpp"

#include "finiteqp/covariance.hpp"
#include "finiteqp/entanglement.hpp"
#include "finiteqp/io.hpp"
#include "finiteqp/metrology.hpp"
#include "finiteqp/minunc.hpp"
#include "finiteqp/operators.hpp"
#include "finiteqp/regions.hpp"
#include "finiteqp/states.hpp"

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

using finiteqp::CsvWriter;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;

struct Emitter {
  std::string output;
  std::string format = "csv";

  void emit(const std::string& csv, const json& full, const json& config) const {
    if (output.empty()) {
      if (format == "json") {
        std::cout << full.dump(2) << "\n";
      } else {
        std::cout << csv;
      }
      return;
    }
    finiteqp::write_with_config(
        output, format == "json" ? full.dump(2) + "\n" : csv, config);
  }
};

void add_output_flags(CLI::App* cmd, Emitter* em) {
  cmd->add_option("-o,--output", em->output, "Output file (stdout if omitted)");
  cmd->add_option("--format", em->format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

finiteqp::QuantumState ground_state(const finiteqp::HermitianOperator& op) {
  auto [ev, vec] = op.eigensystem();
  return finiteqp::QuantumState::from_vector(vec.col(0));
}

int run_ops(int dim, const Emitter& em) {
  auto pair = finiteqp::build_canonical_pair(dim);
  json out;
  out["dim"] = dim;
  out["q"] = finiteqp::to_json(pair.q);
  out["p"] = finiteqp::to_json(pair.p);
  out["fourier"] = finiteqp::to_json(pair.fourier.matrix());
  out["commutator_qp"] = finiteqp::to_json(finiteqp::commutator_qp(pair));
  json config = {{"command", "ops"}, {"dim", dim}};
  // matrices do not flatten usefully to CSV; always emit JSON
  Emitter forced = em;
  forced.format = "json";
  forced.emit("", out, config);
  return kExitOk;
}

int run_region_trace_det(int dim, int rank, int samples, int restarts,
                         std::uint64_t seed, const Emitter& em) {
  auto pair = finiteqp::build_canonical_pair(dim);
  auto region = finiteqp::trace_det_region(pair, samples, rank, restarts, seed);

  CsvWriter csv({"t_target", "trace", "det", "maximize", "rank", "converged"});
  json rows = json::array();
  bool all_converged = true;
  for (const auto& s : region) {
    csv.add_row({CsvWriter::cell(s.t_target), CsvWriter::cell(s.trace),
                 CsvWriter::cell(s.det), s.maximize ? "1" : "0",
                 std::to_string(s.rank), s.converged ? "1" : "0"});
    rows.push_back({{"t_target", s.t_target},
                    {"trace", s.trace},
                    {"det", s.det},
                    {"maximize", s.maximize},
                    {"rank", s.rank},
                    {"converged", s.converged}});
    all_converged = all_converged && s.converged;
  }
  json config = {{"command", "region trace-det"}, {"dim", dim},
                 {"rank", rank},                  {"samples", samples},
                 {"restarts", restarts},          {"seed", seed}};
  em.emit(csv.str(), {{"samples", rows}}, config);
  return all_converged ? kExitOk : kExitNoConvergence;
}

int run_region_extremes(int dim, const Emitter& em) {
  auto pair = finiteqp::build_canonical_pair(dim);
  auto lo = finiteqp::min_sum_variances(pair);
  auto hi = finiteqp::max_sum_variances(pair);

  CsvWriter csv({"kind", "value", "q_center", "p_center", "converged"});
  csv.add_row({"tau_min", CsvWriter::cell(lo.value), CsvWriter::cell(lo.q_center),
               CsvWriter::cell(lo.p_center), lo.converged ? "1" : "0"});
  csv.add_row({"tau_max", CsvWriter::cell(hi.value), CsvWriter::cell(hi.q_center),
               CsvWriter::cell(hi.p_center), hi.converged ? "1" : "0"});

  json orbit = json::array();
  for (const auto& [q, p] : lo.orbit) orbit.push_back({q, p});
  json out = {{"tau_min", lo.value},
              {"tau_max", hi.value},
              {"min_center", {lo.q_center, lo.p_center}},
              {"min_orbit", orbit}};
  json config = {{"command", "region extremes"}, {"dim", dim}};
  em.emit(csv.str(), out, config);
  return lo.converged ? kExitOk : kExitNoConvergence;
}

int run_jnr_support(int dim, const std::vector<double>& direction,
                    const Emitter& em) {
  auto pair = finiteqp::build_canonical_pair(dim);
  auto quad = finiteqp::build_quadratics(pair);
  std::vector<finiteqp::HermitianOperator> ops{pair.q,  pair.p,  quad.t,
                                               quad.g1, quad.g2, quad.g3};
  if (direction.size() != ops.size()) {
    std::cerr << "jnr support: --direction needs " << ops.size()
              << " components over (Q, P, T, G1, G2, G3)\n";
    return kExitValidation;
  }
  finiteqp::RealVector n(static_cast<Eigen::Index>(direction.size()));
  for (std::size_t i = 0; i < direction.size(); ++i) {
    n(static_cast<Eigen::Index>(i)) = direction[i];
  }
  auto pt = finiteqp::jnr_support(ops, n);

  CsvWriter csv({"op", "direction", "expectation"});
  const char* names[] = {"Q", "P", "T", "G1", "G2", "G3"};
  for (int i = 0; i < 6; ++i) {
    csv.add_row({names[i], CsvWriter::cell(n(i)),
                 CsvWriter::cell(pt.expectation(i))});
  }
  json out = {{"direction", direction},
              {"expectation", std::vector<double>(pt.expectation.data(),
                                                  pt.expectation.data() + 6)},
              {"degenerate", pt.degenerate}};
  json config = {{"command", "jnr support"}, {"dim", dim},
                 {"direction", direction}};
  em.emit(csv.str(), out, config);
  return kExitOk;
}

int run_jnr_cross(int dim, double t, int directions, std::uint64_t seed,
                  const Emitter& em) {
  auto pair = finiteqp::build_canonical_pair(dim);
  auto cs = finiteqp::jnr_cross_section(pair, t, directions, seed);

  CsvWriter csv({"g1", "g2", "g3"});
  json pts = json::array();
  for (const auto& g : cs.points) {
    csv.add_row({CsvWriter::cell(g(0)), CsvWriter::cell(g(1)),
                 CsvWriter::cell(g(2))});
    pts.push_back({g(0), g(1), g(2)});
  }
  json out = {{"t", cs.t},
              {"feasible", cs.feasible},
              {"det_min", cs.det_min},
              {"det_max", cs.det_max},
              {"points", pts}};
  json config = {{"command", "jnr cross"}, {"dim", dim},       {"t", t},
                 {"directions", directions}, {"seed", seed}};
  em.emit(csv.str(), out, config);
  return kExitOk;
}

int run_minunc(int dim, double lambda_re, double lambda_im, const Emitter& em) {
  auto pair = finiteqp::build_canonical_pair(dim);
  auto report = finiteqp::solve_minunc(pair.q, pair.p,
                                       {lambda_re, lambda_im});

  CsvWriter csv({"z_re", "z_im", "var_a", "var_b", "cov_ab",
                 "commutator_expectation", "residual"});
  json sols = json::array();
  for (const auto& s : report.solutions) {
    csv.add_row({CsvWriter::cell(s.eigenvalue_z.real()),
                 CsvWriter::cell(s.eigenvalue_z.imag()),
                 CsvWriter::cell(s.var_a), CsvWriter::cell(s.var_b),
                 CsvWriter::cell(s.cov_ab),
                 CsvWriter::cell(s.commutator_expectation),
                 CsvWriter::cell(s.residual)});
    json sol = {{"z", {s.eigenvalue_z.real(), s.eigenvalue_z.imag()}},
                {"var_a", s.var_a},
                {"var_b", s.var_b},
                {"cov_ab", s.cov_ab},
                {"commutator_expectation", s.commutator_expectation},
                {"residual", s.residual},
                {"state", finiteqp::to_json(s.state)}};
    sols.push_back(std::move(sol));
  }
  json out = {{"lambda", {lambda_re, lambda_im}},
              {"defective", report.defective},
              {"discarded_negative_commutator",
               report.discarded_negative_commutator},
              {"solutions", sols}};
  json config = {{"command", "minunc solve"},
                 {"dim", dim},
                 {"lambda", {lambda_re, lambda_im}}};
  em.emit(csv.str(), out, config);
  return kExitOk;
}

int run_metrology_scan(int d_min, int d_max, int restarts, std::uint64_t seed,
                       const Emitter& em) {
  std::vector<int> dims;
  for (int d = d_min; d <= d_max; ++d) dims.push_back(d);
  auto scan = finiteqp::accuracy_scan(dims, restarts, seed);

  CsvWriter csv({"d", "a_d", "a_d_c", "a_d_m", "gap_delta",
                 "saturability_residual", "converged"});
  json rows = json::array();
  bool all_converged = true;
  for (const auto& r : scan.reports) {
    csv.add_row({std::to_string(r.dim), CsvWriter::cell(r.a_d),
                 CsvWriter::cell(r.a_d_c), CsvWriter::cell(r.a_d_m),
                 CsvWriter::cell(r.gap_delta),
                 CsvWriter::cell(r.saturability_residual),
                 r.converged ? "1" : "0"});
    rows.push_back({{"d", r.dim},
                    {"a_d", r.a_d},
                    {"a_d_c", r.a_d_c},
                    {"a_d_m", r.a_d_m},
                    {"gap_delta", r.gap_delta},
                    {"saturability_residual", r.saturability_residual},
                    {"converged", r.converged}});
    all_converged = all_converged && r.converged;
  }
  json out = {{"slope", scan.slope}, {"reports", rows}};
  json config = {{"command", "metrology scan"}, {"d_min", d_min},
                 {"d_max", d_max},              {"restarts", restarts},
                 {"seed", seed}};
  em.emit(csv.str(), out, config);
  return all_converged ? kExitOk : kExitNoConvergence;
}

int run_metrology_sim(int dim, double theta, long long nu, int trials,
                      std::uint64_t seed, const Emitter& em) {
  auto pair = finiteqp::build_canonical_pair(dim);
  finiteqp::QuantumState probe =
      dim == 3 ? finiteqp::vacuum_d3()
               : ground_state(finiteqp::build_quadratics(pair).t);
  auto res = finiteqp::mom_simulate_single(probe, pair.q, pair.p, theta, nu,
                                           trials, seed);

  CsvWriter csv({"nu", "empirical_mse", "predicted_mse", "ratio"});
  csv.add_row({std::to_string(res.nu), CsvWriter::cell(res.empirical_mse),
               CsvWriter::cell(res.predicted_mse), CsvWriter::cell(res.ratio)});
  json out = {{"nu", res.nu},
              {"empirical_mse", res.empirical_mse},
              {"predicted_mse", res.predicted_mse},
              {"ratio", res.ratio}};
  json config = {{"command", "metrology sim"}, {"dim", dim},
                 {"theta", theta},             {"nu", nu},
                 {"trials", trials},           {"seed", seed}};
  em.emit(csv.str(), out, config);
  return kExitOk;
}

int run_entangle_witness(int dim, const std::string& state_name, double a,
                         double b, const Emitter& em) {
  auto pair = finiteqp::build_canonical_pair(dim);
  finiteqp::QuantumState state = [&] {
    if (state_name == "max-entangled") return finiteqp::max_entangled(dim);
    if (state_name == "two-mode-squeezed") {
      return finiteqp::two_mode_squeezed(dim, a, b);
    }
    throw CLI::ValidationError("--state must be max-entangled or two-mode-squeezed");
  }();
  auto res = finiteqp::duan_witness(state, pair);

  CsvWriter csv({"lhs", "bound", "delta_tilde", "verdict"});
  const std::string verdict =
      res.verdict == finiteqp::Verdict::Entangled ? "entangled" : "undetected";
  csv.add_row({CsvWriter::cell(res.lhs), CsvWriter::cell(res.bound),
               CsvWriter::cell(res.delta_tilde), verdict});
  json out = {{"lhs", res.lhs},
              {"bound", res.bound},
              {"delta_tilde", res.delta_tilde},
              {"verdict", verdict}};
  json config = {{"command", "entangle witness"}, {"dim", dim},
                 {"state", state_name},           {"a", a},
                 {"b", b}};
  em.emit(csv.str(), out, config);
  return kExitOk;
}

int run_entangle_thermal(int dim, double t_min, double t_max, double step,
                         const Emitter& em) {
  auto pair = finiteqp::build_canonical_pair(dim);
  auto scan = finiteqp::thermal_threshold(pair, t_min, t_max, step);

  CsvWriter csv({"temperature", "delta_tilde", "verdict"});
  json pts = json::array();
  for (const auto& pt : scan.points) {
    csv.add_row({CsvWriter::cell(pt.temperature),
                 CsvWriter::cell(pt.delta_tilde),
                 pt.entangled ? "entangled" : "undetected"});
    pts.push_back({{"temperature", pt.temperature},
                   {"delta_tilde", pt.delta_tilde},
                   {"entangled", pt.entangled}});
  }
  json out = {{"points", pts}};
  if (scan.threshold) {
    out["threshold"] = *scan.threshold;
    std::cerr << "threshold " << finiteqp::format_double(*scan.threshold)
              << "\n";
  } else {
    out["threshold"] = nullptr;
    std::cerr << "none detected\n";
  }
  json config = {{"command", "entangle thermal"}, {"dim", dim},
                 {"t_min", t_min},                {"t_max", t_max},
                 {"step", step}};
  em.emit(csv.str(), out, config);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty geometry of the finite-dimensional canonical "
               "pair (Q, P): covariance regions, minimum-uncertainty states, "
               "estimation bounds, entanglement witnesses"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read defaults from a TOML/INI config file");

  int dim = 3;
  int rank = 1;
  int samples = 40;
  int restarts = 32;
  std::uint64_t seed = 1;
  Emitter em;

  auto add_common = [&](CLI::App* cmd, bool with_seed) {
    cmd->add_option("-d,--dim", dim, "Hilbert-space dimension")
        ->check(CLI::Range(2, 64));
    if (with_seed) cmd->add_option("--seed", seed, "Root random seed");
    add_output_flags(cmd, &em);
  };

  // ops
  auto* ops_cmd = app.add_subcommand("ops", "Dump Q, P, F and [Q, P]");
  bool dump = false;
  ops_cmd->add_flag("--dump", dump, "Emit full matrices (always on)");
  add_common(ops_cmd, false);

  // region
  auto* region = app.add_subcommand("region", "Trace/determinant region");
  region->require_subcommand(1);
  auto* region_td = region->add_subcommand(
      "trace-det", "Min/max determinant across a trace grid");
  region_td->add_option("--rank", rank, "State rank (1 = pure)")
      ->check(CLI::Range(1, 64));
  region_td->add_option("--samples", samples, "Trace grid size");
  region_td->add_option("--restarts", restarts, "Optimizer restarts");
  add_common(region_td, true);
  auto* region_ex =
      region->add_subcommand("extremes", "tau_min / tau_max with centers");
  add_common(region_ex, false);

  // jnr
  auto* jnr = app.add_subcommand("jnr", "Joint numerical range");
  jnr->require_subcommand(1);
  auto* jnr_support = jnr->add_subcommand(
      "support", "Supporting point in a direction over (Q, P, T, G1, G2, G3)");
  std::vector<double> direction;
  jnr_support->add_option("--direction", direction, "Direction components")
      ->expected(6);
  add_common(jnr_support, false);
  auto* jnr_cross =
      jnr->add_subcommand("cross", "Cross-section at fixed <T> = t");
  double t_slice = 1.5;
  int n_directions = 64;
  jnr_cross->add_option("--t", t_slice, "Trace slice value");
  jnr_cross->add_option("--directions", n_directions, "Sampled directions");
  add_common(jnr_cross, true);

  // minunc
  auto* minunc = app.add_subcommand("minunc", "Minimum-uncertainty states");
  auto* minunc_solve =
      minunc->add_subcommand("solve", "Eigenpairs of lambda*Q + i*P");
  double lambda_re = 1.0, lambda_im = 0.0;
  minunc_solve->add_option("--lambda-re", lambda_re, "Re lambda (> 0)");
  minunc_solve->add_option("--lambda-im", lambda_im, "Im lambda");
  add_common(minunc_solve, false);

  // metrology
  auto* metrology = app.add_subcommand("metrology", "Estimation bounds");
  metrology->require_subcommand(1);
  auto* met_scan =
      metrology->add_subcommand("scan", "A_d, A_d^c, A_d^M over a dim range");
  int d_min = 3, d_max = 12;
  met_scan->add_option("--d-min", d_min, "Smallest dimension")
      ->check(CLI::Range(2, 64));
  met_scan->add_option("--d-max", d_max, "Largest dimension")
      ->check(CLI::Range(2, 64));
  met_scan->add_option("--restarts", restarts, "Optimizer restarts");
  met_scan->add_option("--seed", seed, "Root random seed");
  add_output_flags(met_scan, &em);
  auto* met_sim =
      metrology->add_subcommand("sim", "Monte-Carlo moment estimation");
  double theta = 0.1;
  long long nu = 100000;
  int trials = 200;
  met_sim->add_option("--theta", theta, "True displacement parameter");
  met_sim->add_option("--nu", nu, "Shots per trial");
  met_sim->add_option("--trials", trials, "Trials");
  add_common(met_sim, true);

  // entangle
  auto* entangle = app.add_subcommand("entangle", "Covariance witness");
  entangle->require_subcommand(1);
  auto* ent_witness =
      entangle->add_subcommand("witness", "Evaluate the variance-sum witness");
  std::string state_name = "max-entangled";
  double tms_a = 4.0, tms_b = 10.0;
  ent_witness->add_option("--state", state_name, "Probe family")
      ->check(CLI::IsMember({"max-entangled", "two-mode-squeezed"}));
  ent_witness->add_option("--a", tms_a, "Squeezing parameter a");
  ent_witness->add_option("--b", tms_b, "Squeezing parameter b");
  add_common(ent_witness, false);
  auto* ent_thermal =
      entangle->add_subcommand("thermal", "Temperature threshold scan");
  double t_min = 0.05, t_max = 4.0, step = 0.05;
  ent_thermal->add_option("--t-min", t_min, "Grid start");
  ent_thermal->add_option("--t-max", t_max, "Grid end");
  ent_thermal->add_option("--step", step, "Grid step");
  add_common(ent_thermal, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*ops_cmd) return run_ops(dim, em);
    if (*region_td) {
      return run_region_trace_det(dim, rank, samples, restarts, seed, em);
    }
    if (*region_ex) return run_region_extremes(dim, em);
    if (*jnr_support) return run_jnr_support(dim, direction, em);
    if (*jnr_cross) return run_jnr_cross(dim, t_slice, n_directions, seed, em);
    if (*minunc_solve) return run_minunc(dim, lambda_re, lambda_im, em);
    if (*met_scan) return run_metrology_scan(d_min, d_max, restarts, seed, em);
    if (*met_sim) return run_metrology_sim(dim, theta, nu, trials, seed, em);
    if (*ent_witness) {
      return run_entangle_witness(dim, state_name, tms_a, tms_b, em);
    }
    if (*ent_thermal) {
      return run_entangle_thermal(dim, t_min, t_max, step, em);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitNoConvergence;
  }
  return kExitValidation;
}
