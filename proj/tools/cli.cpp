#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "stealthgame/best_response.hpp"
#include "stealthgame/detection_sim.hpp"
#include "stealthgame/errors.hpp"
#include "stealthgame/game.hpp"
#include "stealthgame/info_metrics.hpp"
#include "stealthgame/linalg.hpp"
#include "stealthgame/parallel.hpp"

namespace stealthgame::cli {
namespace {

using nlohmann::json;

constexpr std::size_t kRocPoints = 201;

std::string num(double x) { return fmt::format("{:.17g}", x); }

json to_json(const Vector& v) {
  json out = json::array();
  for (const double x : v) out.push_back(x);
  return out;
}

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(m.row(r).transpose()));
  return out;
}

const char* variant_tag(int p, Br3Variant variant) {
  if (p != 3) return "-";
  return variant == Br3Variant::kLiteral ? "literal" : "consistent";
}

std::vector<std::string> model_metadata(const ModelFlags& flags, const LoadedModel& lm) {
  std::vector<std::string> out;
  out.push_back(flags.case_path.empty() ? "h_matrix=" + flags.h_matrix_path
                                        : "case=" + flags.case_path);
  out.push_back(fmt::format("m={} n={}", lm.model.m(), lm.model.n()));
  out.push_back(fmt::format("rho={} sigma2={} snr_db={}", num(lm.rho), num(lm.model.sigma2()),
                            num(lm.snr_db)));
  return out;
}

std::string header_block(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += "# " + l + "\n";
  return out;
}

void add_model_flags(CLI::App* cmd, ModelFlags& flags) {
  auto* c = cmd->add_option("--case", flags.case_path, "bus/branch network file");
  auto* h = cmd->add_option("--h-matrix", flags.h_matrix_path, "measurement matrix file");
  c->excludes(h);
  h->excludes(c);
  cmd->add_option("--rho", flags.rho, "state correlation, Sigma_XX(i,j) = rho^|i-j|");
  auto* snr = cmd->add_option("--snr-db", flags.snr_db, "calibrate sigma2 to this SNR");
  auto* s2 = cmd->add_option("--sigma2", flags.sigma2, "noise variance");
  snr->excludes(s2);
  s2->excludes(snr);
}

struct GameFlags {
  int p = 1;
  double lambda = 1.0;
  int t_max = 100;
  double tol = 1e-9;
  bool br3_literal = false;

  BrdOptions options() const {
    BrdOptions o;
    o.t_max = t_max;
    o.tol = tol;
    o.br3 = br3_literal ? Br3Variant::kLiteral : Br3Variant::kConsistent;
    return o;
  }
};

void add_game_flags(CLI::App* cmd, GameFlags& g) {
  cmd->add_option("--game", g.p, "game index")->check(CLI::IsMember({1, 2, 3}));
  cmd->add_option("--tmax", g.t_max, "maximum number of rounds");
  cmd->add_option("--tol", g.tol, "convergence tolerance on the per-round change");
  cmd->add_flag("--br3-literal", g.br3_literal,
                "game 3: use alpha_i inside the stationarity quadratic");
}

void warn_lambda(const GameSpec& spec, std::ostream& err) {
  if (auto w = lambda_warning(spec)) err << "warning: " << *w << "\n";
}

int cmd_build(const ModelFlags& flags, const std::string& out_path, std::ostream& out) {
  const LoadedModel lm = load_model(flags);
  const auto& model = lm.model;
  const Matrix& sxx = model.sigma_xx();
  const bool identity = sxx.isIdentity(0.0);

  json summary;
  summary["source"] = flags.case_path.empty() ? flags.h_matrix_path : flags.case_path;
  summary["m"] = model.m();
  summary["n"] = model.n();
  summary["rho"] = lm.rho;
  summary["sigma2"] = model.sigma2();
  summary["snr_db"] = lm.snr_db;
  summary["cond_sigma_xx"] = condition_number(sxx);
  summary["cond_sigma_yy"] = condition_number(model.sigma_yy());
  summary["sigma_xx_identity"] = identity;
  json rows = json::array();
  for (const auto& label : lm.jacobian.row_labels) rows.push_back(label.str());
  summary["rows"] = rows;
  out << summary.dump(2) << "\n";

  if (!out_path.empty()) {
    json cache = summary;
    cache["h"] = matrix_json(model.h());
    cache["sigma_xx"] = matrix_json(sxx);
    write_file(out_path, cache.dump(2) + "\n");
  }
  return kExitOk;
}

json ne_json(const GameSpec& spec, const MeasurementModel& model, const BrdResult& r,
             Br3Variant variant) {
  json j;
  j["game"] = spec.p;
  j["lambda"] = spec.lambda;
  j["variant"] = variant_tag(spec.p, variant);
  j["m"] = model.m();
  j["v_star"] = to_json(r.v_star.values());
  j["converged"] = r.report.converged;
  j["degenerate"] = r.report.degenerate;
  j["rounds"] = r.report.rounds_used;
  j["max_delta_last_round"] = r.report.max_delta_last_round;
  j["ne_residual"] = r.report.ne_residual;
  j["potential"] = potential(spec, model, r.v_star);
  j["mi_global"] = mi_global(model, r.v_star);
  j["kl_global"] = kl_global(model, r.v_star);
  return j;
}

int cmd_run(const ModelFlags& flags, const GameFlags& g, const std::string& prefix,
            std::ostream& out, std::ostream& err) {
  const GameSpec spec{g.p, g.lambda};
  validate_game(spec);
  warn_lambda(spec, err);
  const LoadedModel lm = load_model(flags);
  const BrdOptions opts = g.options();
  const BrdResult r = run_brd(spec, lm.model, AttackProfile::zeros(lm.model.m()), opts);

  auto meta = model_metadata(flags, lm);
  meta.push_back(fmt::format("game={} lambda={} variant={} tmax={} tol={}", spec.p,
                             num(spec.lambda), variant_tag(spec.p, opts.br3), opts.t_max,
                             num(opts.tol)));
  write_file(prefix + ".trajectory.csv", trajectory_csv(r.trajectory, meta));
  const json ne = ne_json(spec, lm.model, r, opts.br3);
  write_file(prefix + ".ne.json", ne.dump(2) + "\n");

  out << fmt::format("game {} lambda {}: {} after {} rounds, potential {}, MI {} nats, KL {} nats\n",
                     spec.p, num(spec.lambda), r.report.converged ? "converged" : "NOT converged",
                     r.report.rounds_used, num(ne["potential"].get<double>()),
                     num(ne["mi_global"].get<double>()), num(ne["kl_global"].get<double>()));
  if (r.report.degenerate) err << "warning: some best response hit the action cap\n";
  if (!r.report.converged) {
    err << fmt::format("no convergence within {} rounds (last change {})\n", opts.t_max,
                       num(r.report.max_delta_last_round));
    return kExitNoConvergence;
  }
  return kExitOk;
}

int cmd_sweep(const ModelFlags& flags, const GameFlags& g, std::vector<double> lambdas,
              const std::string& out_path, std::ostream& out, std::ostream& err) {
  if (lambdas.empty()) throw std::invalid_argument("--lambda-list is empty");
  std::stable_sort(lambdas.begin(), lambdas.end());
  for (const double l : lambdas) {
    const GameSpec spec{g.p, l};
    validate_game(spec);
    warn_lambda(spec, err);
  }
  const LoadedModel lm = load_model(flags);
  const BrdOptions base = g.options();

  std::vector<BrdResult> results(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t k) {
    BrdOptions o = base;
    o.record_trajectory = false;
    results[k] = run_brd({g.p, lambdas[k]}, lm.model, AttackProfile::zeros(lm.model.m()), o);
  });

  auto meta = model_metadata(flags, lm);
  meta.push_back(fmt::format("game={} variant={} tmax={} tol={}", g.p,
                             variant_tag(g.p, base.br3), base.t_max, num(base.tol)));
  std::string csv = header_block(meta);
  csv += "lambda,variant,v_min,v_mean,v_max,mi_global,kl_global,potential,rounds,converged,"
         "ne_residual\n";
  bool all_converged = true;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const auto& r = results[k];
    const Vector& v = r.v_star.values();
    all_converged = all_converged && r.report.converged;
    csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", num(lambdas[k]),
                       variant_tag(g.p, base.br3), num(v.minCoeff()), num(v.mean()),
                       num(v.maxCoeff()), num(mi_global(lm.model, r.v_star)),
                       num(kl_global(lm.model, r.v_star)),
                       num(potential({g.p, lambdas[k]}, lm.model, r.v_star)), r.report.rounds_used,
                       r.report.converged ? 1 : 0, num(r.report.ne_residual));
  }
  write_file(out_path, csv);
  out << fmt::format("wrote {} rows to {}\n", lambdas.size(), out_path);
  if (!all_converged) {
    err << "some lambda values did not converge (see the converged column)\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

AttackProfile read_ne_file(const std::string& path, Eigen::Index m) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw InputError(fmt::format("{}: {}", path, e.what()));
  }
  if (!j.contains("v_star") || !j["v_star"].is_array())
    throw InputError(fmt::format("{}: no v_star array", path));
  const auto& arr = j["v_star"];
  if (static_cast<Eigen::Index>(arr.size()) != m)
    throw InputError(fmt::format("{}: v_star has {} entries, model has m = {}", path, arr.size(), m));
  Vector v(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (!arr[i].is_number()) throw InputError(fmt::format("{}: v_star[{}] is not a number", path, i));
    v(i) = arr[i].get<double>();
  }
  try {
    return AttackProfile(std::move(v));
  } catch (const std::invalid_argument& e) {
    throw InputError(fmt::format("{}: {}", path, e.what()));
  }
}

int cmd_detect(const ModelFlags& flags, const std::string& ne_path, long long samples,
               std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  if (samples < 1000) throw std::invalid_argument("--samples must be at least 1000");
  const LoadedModel lm = load_model(flags);
  const AttackProfile v = read_ne_file(ne_path, lm.model.m());

  const LlrSamples llr = simulate_llr(lm.model, v, samples, seed);
  const double lo = std::min(llr.clean.minCoeff(), llr.attacked.minCoeff());
  const double hi = std::max(llr.clean.maxCoeff(), llr.attacked.maxCoeff());
  // One unit of margin on each side so the curve reaches both corners.
  std::vector<double> log_taus(kRocPoints);
  for (std::size_t k = 0; k < kRocPoints; ++k)
    log_taus[k] = (lo - 1.0) + (hi - lo + 2.0) * static_cast<double>(k) / (kRocPoints - 1);
  const auto curve = error_curve_log(llr, log_taus);
  const double kl = kl_global(lm.model, v);
  const double auc = empirical_auc(llr);

  auto meta = model_metadata(flags, lm);
  meta.push_back("ne=" + ne_path);
  meta.push_back(fmt::format("N={} seed={} kl_global={} auc={}", samples, seed, num(kl), num(auc)));
  std::string csv = header_block(meta);
  csv += "tau,log_tau,alpha_hat,beta_hat\n";
  for (const auto& pt : curve)
    csv += fmt::format("{},{},{},{}\n", num(pt.tau), num(pt.log_tau), num(pt.alpha_hat),
                       num(pt.beta_hat));
  write_file(out_path, csv);
  out << fmt::format("kl_global {} nats, AUC {}, wrote {} thresholds to {}\n", num(kl), num(auc),
                     curve.size(), out_path);
  return kExitOk;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError(fmt::format("'{}' is not a number", s));
  }
  if (used != s.size()) throw InputError(fmt::format("'{}' is not a number", s));
  return x;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path));
  out << contents;
  if (!out) throw InputError(fmt::format("write to '{}' failed", path));
}

LoadedModel load_model(const ModelFlags& flags) {
  if (flags.case_path.empty() == flags.h_matrix_path.empty())
    throw std::invalid_argument("give exactly one of --case and --h-matrix");
  if (flags.snr_db.has_value() == flags.sigma2.has_value())
    throw std::invalid_argument("give exactly one of --snr-db and --sigma2");
  if (!(flags.rho >= 0.0 && flags.rho < 1.0))
    throw std::invalid_argument(fmt::format("--rho {} outside [0, 1)", flags.rho));
  if (flags.sigma2 && !(*flags.sigma2 > 0.0 && std::isfinite(*flags.sigma2)))
    throw std::invalid_argument("--sigma2 must be positive");
  if (flags.snr_db && !std::isfinite(*flags.snr_db))
    throw std::invalid_argument("--snr-db must be finite");

  JacobianMatrix jac = !flags.case_path.empty()
                           ? build_dc_jacobian(parse_network(read_file(flags.case_path)))
                           : load_matrix(read_file(flags.h_matrix_path));
  try {
    const Matrix sxx = toeplitz_cov({jac.n(), flags.rho});
    const double sigma2 =
        flags.sigma2 ? *flags.sigma2 : calibrate_noise(jac.h, sxx, *flags.snr_db);
    const double snr = flags.snr_db ? *flags.snr_db : snr_db(jac.h, sxx, sigma2);
    auto model = MeasurementModel::build(jac.h, sxx, sigma2);
    return LoadedModel{std::move(jac), std::move(model), flags.rho, snr};
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

std::string trajectory_csv(const std::vector<TrajectoryRecord>& trajectory,
                           const std::vector<std::string>& metadata) {
  std::string csv = header_block(metadata);
  const Eigen::Index m = trajectory.empty() ? 0 : trajectory.front().v.size();
  csv += "t,player";
  for (Eigen::Index i = 0; i < m; ++i) csv += fmt::format(",v_{}", i + 1);
  csv += ",potential,mi_global,kl_global\n";
  for (const auto& rec : trajectory) {
    csv += fmt::format("{},{}", rec.round, rec.player ? *rec.player + 1 : 0);
    for (const double x : rec.v) csv += "," + num(x);
    csv += fmt::format(",{},{},{}\n", num(rec.potential), num(rec.mi_global), num(rec.kl_global));
  }
  return csv;
}

std::vector<TrajectoryRecord> parse_trajectory_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<TrajectoryRecord> out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line, ',');
    if (header.empty()) {
      header = std::move(cells);
      if (header.size() < 5 || header[0] != "t" || header[1] != "player")
        throw InputError("trajectory header must start with t,player");
      continue;
    }
    if (cells.size() != header.size())
      throw InputError(fmt::format("trajectory row has {} cells, header has {}", cells.size(),
                                   header.size()));
    const auto m = static_cast<Eigen::Index>(header.size()) - 5;
    TrajectoryRecord rec;
    rec.round = static_cast<int>(parse_double(cells[0]));
    const auto player = static_cast<Eigen::Index>(parse_double(cells[1]));
    if (player > 0) rec.player = player - 1;
    rec.v.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) rec.v(i) = parse_double(cells[2 + i]);
    rec.potential = parse_double(cells[2 + m]);
    rec.mi_global = parse_double(cells[3 + m]);
    rec.kl_global = parse_double(cells[4 + m]);
    out.push_back(std::move(rec));
  }
  if (header.empty()) throw InputError("trajectory has no header row");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decentralized stealth attack games on linearized state estimation"};
  app.require_subcommand(1);

  ModelFlags build_model;
  std::string build_out;
  auto* build = app.add_subcommand("build", "build the Gaussian model and print a summary");
  add_model_flags(build, build_model);
  build->add_option("--out", build_out, "write a JSON model cache here");

  ModelFlags run_model;
  GameFlags run_game;
  std::string run_out;
  auto* run_cmd = app.add_subcommand("run", "best-response dynamics for one game and lambda");
  add_model_flags(run_cmd, run_model);
  add_game_flags(run_cmd, run_game);
  run_cmd->add_option("--lambda", run_game.lambda, "weight of the detection term")->required();
  run_cmd->add_option("--out", run_out, "output prefix")->required();

  ModelFlags sweep_model;
  GameFlags sweep_game;
  std::vector<double> lambdas;
  std::string sweep_out;
  auto* sweep = app.add_subcommand("sweep", "NE summary over a list of lambda values");
  add_model_flags(sweep, sweep_model);
  add_game_flags(sweep, sweep_game);
  sweep->add_option("--lambda-list", lambdas, "comma-separated lambda values")
      ->delimiter(',')
      ->required();
  sweep->add_option("--out", sweep_out, "output CSV")->required();

  ModelFlags detect_model;
  std::string ne_path;
  std::string detect_out;
  long long samples = 10000;
  std::uint64_t seed = 1;
  auto* detect = app.add_subcommand("detect", "Monte-Carlo error curve of the joint LRT");
  add_model_flags(detect, detect_model);
  detect->add_option("--ne", ne_path, "ne.json written by run")->required();
  detect->add_option("--samples", samples, "samples per hypothesis");
  detect->add_option("--seed", seed, "random seed");
  detect->add_option("--out", detect_out, "output CSV")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (build->parsed()) return cmd_build(build_model, build_out, out);
    if (run_cmd->parsed()) return cmd_run(run_model, run_game, run_out, out, err);
    if (sweep->parsed()) return cmd_sweep(sweep_model, sweep_game, lambdas, sweep_out, out, err);
    return cmd_detect(detect_model, ne_path, samples, seed, detect_out, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputData;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitInputData;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace stealthgame::cli
