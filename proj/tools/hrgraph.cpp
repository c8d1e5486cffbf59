// hrgraph: simulate Hüsler-Reiss data, learn extremal graphs, evaluate and
// diagnose them, and run simulation studies.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hrgraph/diagnostics.hpp"
#include "hrgraph/eglearn.hpp"
#include "hrgraph/errors.hpp"
#include "hrgraph/experiment.hpp"
#include "hrgraph/io.hpp"
#include "hrgraph/log.hpp"
#include "hrgraph/simulate.hpp"
#include "hrgraph/tail_data.hpp"

namespace fs = std::filesystem;
using namespace hrgraph;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitIo = 4;

using Reason = ValidationError::Reason;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) out.push_back(part);
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError(Reason::bad_argument, "cannot read " + what + " from '" + s + "'");
}

int to_int(const std::string& s, const std::string& what) {
  const double v = to_double(s, what);
  if (v != std::floor(v)) throw ValidationError(Reason::bad_argument, what + " must be an integer");
  return static_cast<int>(v);
}

// lo:hi:count, geometric spacing.
std::vector<double> parse_rho_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ValidationError(Reason::bad_argument, "--rho-grid expects lo:hi:count");
  const double lo = to_double(parts[0], "grid lower end");
  const double hi = to_double(parts[1], "grid upper end");
  const int count = to_int(parts[2], "grid size");
  if (!(lo > 0.0) || !(hi >= lo) || count < 1 || (count == 1 && hi != lo)) {
    throw ValidationError(Reason::bad_argument, "--rho-grid needs 0 < lo <= hi and count >= 1");
  }
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) {
    grid[i] = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  }
  return grid;
}

struct Manifest {
  std::string command;
  Json config = Json::object();
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string started = utc_now();
  std::vector<fs::path> outputs;

  void write(const fs::path& dir) {
    Json j;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = has_seed ? Json(seed) : Json(nullptr);
    j["started"] = started;
    j["finished"] = utc_now();
    Json paths = Json::array();
    for (const auto& p : outputs) paths.push_back(p.string());
    j["outputs"] = std::move(paths);
    j["version"] = HRGRAPH_VERSION;
    write_json(dir / "manifest.json", j);
  }
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string model;
  int n = 0;
  int k = 0;
  std::string kind = "max_stable";
  std::string weights = "2:5";
  std::uint64_t seed = 1;
  std::string out = ".";
};

HrModel draw_model(const std::string& text, std::uint64_t seed, WeightRange weights) {
  const auto parts = split(text, ':');
  if (parts.size() == 3 && parts[0] == "ba") {
    const Graph g = barabasi_albert(to_int(parts[1], "d"), to_int(parts[2], "q"), seed);
    return laplacian_gamma(g, seed, weights);
  }
  if (parts.size() == 4 && parts[0] == "bm") {
    return block_model_gamma(to_int(parts[1], "n_C"), to_int(parts[2], "n_N"), to_double(parts[3], "alpha"), seed);
  }
  throw ValidationError(Reason::bad_argument, "--model expects ba:d:q or bm:n_C:n_N:alpha, got '" + text + "'");
}

int run_simulate(const SimulateArgs& a) {
  if ((a.n > 0) == (a.k > 0)) throw ValidationError(Reason::bad_argument, "give exactly one of --n and --k");
  const int n = a.n > 0 ? a.n : sample_size_for_k(a.k);
  const auto w = split(a.weights, ':');
  if (w.size() != 2) throw ValidationError(Reason::bad_argument, "--weight-range expects lo:hi");
  const WeightRange weights{to_double(w[0], "weight"), to_double(w[1], "weight")};
  if (a.kind != "max_stable" && a.kind != "mpd") {
    throw ValidationError(Reason::bad_argument, "--kind must be max_stable or mpd");
  }

  const HrModel model = draw_model(a.model, a.seed, weights);
  const Matrix data = a.kind == "mpd" ? sample_mpd_hr(model.gamma, n, a.seed) : sample_maxstable_hr(model.gamma, n, a.seed);

  const fs::path dir(a.out);
  ensure_dir(dir);
  Manifest manifest;
  manifest.command = "simulate";
  manifest.config = Json{{"model", a.model}, {"n", n}, {"kind", a.kind}, {"weight_range", {weights.low, weights.high}}};
  if (a.k > 0) manifest.config["k"] = a.k;
  manifest.seed = a.seed;
  manifest.has_seed = true;
  write_json(dir / "model.json", model_to_json(model));
  write_data_csv(dir / "data.csv", data);
  manifest.outputs = {dir / "model.json", dir / "data.csv"};
  manifest.write(dir);
  std::cout << "d=" << model.gamma.dim() << " n=" << n << " edges=" << model.graph.num_edges() << "\n";
  return 0;
}

// --- fit --------------------------------------------------------------------

struct FitArgs {
  std::string data;
  int k = 0;
  std::string method = "eglearn-ns";
  std::string rho_grid;
  std::string ic;
  std::string ic_fit = "rss";
  bool no_repair = false;
  std::string out = ".";
};

int run_fit(const FitArgs& a) {
  if (a.method != "eglearn-ns" && a.method != "eglearn-gl" && a.method != "mst") {
    throw ValidationError(Reason::bad_argument, "--method must be eglearn-ns, eglearn-gl or mst");
  }
  const DataMatrix data(read_data_csv(a.data));
  const int k = a.k > 0 ? a.k : default_k(data.n());
  if (k >= data.n()) throw ValidationError(Reason::bad_argument, "k must be smaller than n");
  const std::string ic = a.ic.empty() ? (a.method == "eglearn-ns" ? "bic" : "none") : a.ic;
  if (ic != "none" && a.method != "eglearn-ns") {
    throw ValidationError(Reason::bad_argument, "information criteria are available for eglearn-ns only");
  }

  const auto vario = empirical_variogram(data, k);
  const fs::path dir(a.out);
  ensure_dir(dir);
  Manifest manifest;
  manifest.command = "fit";
  manifest.config = Json{{"data", a.data}, {"n", data.n()}, {"d", data.d()}, {"k", k}, {"method", a.method}, {"ic", ic}};
  const IcFit ic_fit = ic_fit_from_string(a.ic_fit);
  manifest.config["ic_fit"] = a.ic_fit;
  write_json(dir / "gamma_hat.json", matrix_to_json(vario.pooled));
  manifest.outputs.push_back(dir / "gamma_hat.json");

  Graph graph;
  Json summary{{"n", data.n()}, {"d", data.d()}, {"k", k}};
  if (a.method == "mst") {
    graph = extremal_mst(vario.pooled);
  } else {
    const BaseLearner base = a.method == "eglearn-ns" ? BaseLearner::neighborhood_selection : BaseLearner::graphical_lasso;
    const auto grid = a.rho_grid.empty() ? default_rho_grid(vario.pooled, base) : parse_rho_grid(a.rho_grid);
    manifest.config["rho_grid"] = grid;
    const GraphPath path = eglearn_path(vario.pooled, base, grid);
    write_json(dir / "path.json", path_to_json(path));
    manifest.outputs.push_back(dir / "path.json");
    const auto connected = sparsest_connected(path);

    if (ic != "none") {
      const ICReport report = select_ic(vario.pooled, grid, criterion_from_string(ic), k, {}, ic_fit);
      write_json(dir / "ic_report.json", ic_report_to_json(report));
      manifest.outputs.push_back(dir / "ic_report.json");
      graph = report.graph;
    } else if (connected) {
      graph = *connected;
    } else {
      logger()->warn("no connected graph on the penalty path; reporting the graph at the smallest penalty");
      graph = path.graphs.front();
    }
    if (!is_connected(graph) && !a.no_repair) {
      if (connected) {
        logger()->warn("selected graph is disconnected; using the sparsest connected graph of the path");
        graph = *connected;
        summary["repaired"] = true;
      } else {
        logger()->warn("selected graph is disconnected and the path has no connected graph");
      }
    }
    summary["nested_path"] = is_nested(path);
  }
  write_json(dir / "graph.json", graph_to_json(graph));
  manifest.outputs.push_back(dir / "graph.json");
  summary["edges"] = graph.num_edges();
  summary["connected"] = is_connected(graph);
  manifest.write(dir);
  std::cout << summary.dump() << "\n";
  return 0;
}

// --- evaluate ---------------------------------------------------------------

// Accepts a graph JSON or a model bundle carrying one.
Graph load_graph(const std::string& path) {
  const Json j = read_json(path);
  if (j.is_object() && j.contains("edges")) return graph_from_json(j);
  if (j.is_object() && j.contains("gamma")) return model_from_json(j).graph;
  throw ValidationError(Reason::bad_argument, path + " holds neither a graph nor a model");
}

int run_evaluate(const std::string& truth_path, const std::string& estimate_path, const std::string& out) {
  const Graph truth = load_graph(truth_path);
  const Graph estimate = load_graph(estimate_path);
  const Confusion c = confusion(truth, estimate);
  const Json result{{"f_score", f_score(truth, estimate)},
                    {"true_positives", c.true_positives},
                    {"false_positives", c.false_positives},
                    {"false_negatives", c.false_negatives}};
  const fs::path dir(out);
  ensure_dir(dir);
  write_json(dir / "evaluation.json", result);
  Manifest manifest;
  manifest.command = "evaluate";
  manifest.config = Json{{"truth", truth_path}, {"estimate", estimate_path}};
  manifest.outputs = {dir / "evaluation.json"};
  manifest.write(dir);
  std::cout << result.dump() << "\n";
  return 0;
}

// --- diagnose ---------------------------------------------------------------

int run_diagnose(const std::string& model_path, std::optional<double> rho_min, std::optional<double> rho_max,
                 const std::string& out) {
  if (rho_min.has_value() != rho_max.has_value()) {
    throw ValidationError(Reason::bad_argument, "give both --rho-min and --rho-max or neither");
  }
  std::optional<PenaltyBounds> bounds;
  if (rho_min) {
    if (!(*rho_min > 0.0) || *rho_max < *rho_min) throw ValidationError(Reason::bad_argument, "need 0 < rho-min <= rho-max");
    bounds = PenaltyBounds{*rho_min, *rho_max};
  }
  const HrModel model = model_from_json(read_json(model_path));
  Json result;
  result["d"] = model.gamma.dim();
  result["edges"] = model.graph.num_edges();
  result["emtp2"] = emtp2_check(model.theta);
  result["positive_offdiag_fraction"] = positive_offdiag_fraction(model.theta);
  result["ns"] = ns_diagnostics_to_json(ns_diagnostics(model.gamma, model.graph, bounds));
  result["gl"] = gl_diagnostics_to_json(gl_diagnostics(model.gamma, model.graph, bounds));

  const fs::path dir(out);
  ensure_dir(dir);
  write_json(dir / "diagnostics.json", result);
  Manifest manifest;
  manifest.command = "diagnose";
  manifest.config = Json{{"model", model_path}};
  if (bounds) manifest.config["rho_bounds"] = {bounds->rho_min, bounds->rho_max};
  manifest.outputs = {dir / "diagnostics.json"};
  manifest.write(dir);
  std::cout << "eta_ns=" << result["ns"]["eta"].dump() << " eta_gl=" << result["gl"]["eta"].dump()
            << " emtp2=" << result["emtp2"].dump() << "\n";
  return 0;
}

// --- experiment -------------------------------------------------------------

int run_experiment_cmd(const std::string& preset, int reps, std::uint64_t seed, int jobs, const std::string& ic_fit,
                       const std::string& out) {
  const auto settings = preset_settings(preset);
  ReplicationOptions opts;
  opts.ic_fit = ic_fit_from_string(ic_fit);
  opts.model_diagnostics = preset.rfind("bm", 0) == 0;
  const auto rows = run_experiment(settings, reps, seed, jobs, opts);
  const fs::path dir(out);
  ensure_dir(dir);
  write_text(dir / "results.csv", format_experiment_csv(rows));
  Manifest manifest;
  manifest.command = "experiment";
  manifest.config = Json{{"preset", preset}, {"replications", reps}, {"jobs", jobs}, {"settings", settings.size()},
                         {"methods", all_methods().size()}, {"ic_fit", ic_fit}};
  manifest.seed = seed;
  manifest.has_seed = true;
  manifest.outputs = {dir / "results.csv"};
  manifest.write(dir);
  std::cout << rows.size() << " rows\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extremal graph learning for Hüsler-Reiss models"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Draw a random model and sample from it");
  simulate->add_option("--model", sim.model, "ba:d:q or bm:n_C:n_N:alpha")->required();
  simulate->add_option("--n", sim.n, "sample size");
  simulate->add_option("--k", sim.k, "target floor(n^0.7); sets n to the smallest size reaching it");
  simulate->add_option("--kind", sim.kind, "max_stable or mpd")->capture_default_str();
  simulate->add_option("--weight-range", sim.weights, "Laplacian weight range lo:hi")->capture_default_str();
  simulate->add_option("--seed", sim.seed)->capture_default_str();
  simulate->add_option("--out", sim.out)->capture_default_str();

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Learn a graph from a data CSV");
  fit_cmd->add_option("--data", fit.data)->required();
  fit_cmd->add_option("--k", fit.k, "number of exceedances (default floor(n^0.7))");
  fit_cmd->add_option("--method", fit.method, "eglearn-ns, eglearn-gl or mst")->capture_default_str();
  fit_cmd->add_option("--rho-grid", fit.rho_grid, "lo:hi:count, geometric");
  fit_cmd->add_option("--ic", fit.ic, "aic, bic, mbic or none (default bic for eglearn-ns)");
  fit_cmd->add_option("--ic-fit", fit.ic_fit, "fit term of the criterion: rss (default) or log_rss");
  fit_cmd->add_flag("--no-repair", fit.no_repair, "keep a disconnected selected graph");
  fit_cmd->add_option("--out", fit.out)->capture_default_str();

  std::string truth, estimate, eval_out = ".";
  auto* evaluate = app.add_subcommand("evaluate", "F-score of an estimated graph");
  evaluate->add_option("--truth", truth)->required();
  evaluate->add_option("--estimate", estimate)->required();
  evaluate->add_option("--out", eval_out)->capture_default_str();

  std::string model_path, diag_out = ".";
  std::optional<double> rho_min, rho_max;
  auto* diagnose = app.add_subcommand("diagnose", "Recovery constants of a model");
  diagnose->add_option("--model", model_path)->required();
  diagnose->add_option("--rho-min", rho_min);
  diagnose->add_option("--rho-max", rho_max);
  diagnose->add_option("--out", diag_out)->capture_default_str();

  std::string preset, exp_out = ".", exp_ic_fit = "rss";
  int reps = 100, jobs = 1;
  std::uint64_t exp_seed = 1;
  auto* experiment = app.add_subcommand("experiment", "Run a simulation study preset");
  experiment->add_option("--preset", preset, "ba-d20, ba-d50, ba-d100 or bm-d19")->required();
  experiment->add_option("--reps", reps)->capture_default_str();
  experiment->add_option("--seed", exp_seed)->capture_default_str();
  experiment->add_option("--jobs", jobs)->capture_default_str();
  experiment->add_option("--ic-fit", exp_ic_fit, "rss or log_rss")->capture_default_str();
  experiment->add_option("--out", exp_out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*fit_cmd) return run_fit(fit);
    if (*evaluate) return run_evaluate(truth, estimate, eval_out);
    if (*diagnose) return run_diagnose(model_path, rho_min, rho_max, diag_out);
    if (*experiment) return run_experiment_cmd(preset, reps, exp_seed, jobs, exp_ic_fit, exp_out);
  } catch (const ValidationError& e) {
    logger()->error("{}", e.what());
    return kExitValidation;
  } catch (const ConvergenceError& e) {
    logger()->error("{}", e.what());
    return kExitConvergence;
  } catch (const IoError& e) {
    logger()->error("{}", e.what());
    return kExitIo;
  } catch (const Json::exception& e) {
    logger()->error("malformed JSON input: {}", e.what());
    return kExitValidation;
  }
  return 1;
}
