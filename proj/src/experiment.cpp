#include "hrgraph/experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "hrgraph/diagnostics.hpp"
#include "hrgraph/errors.hpp"
#include "hrgraph/io.hpp"
#include "hrgraph/log.hpp"
#include "hrgraph/tail_data.hpp"

namespace hrgraph {

namespace {

using Reason = ValidationError::Reason;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ExperimentSetting ba(int d, int q, double k_over_d) {
  ExperimentSetting s;
  s.family = ExperimentSetting::Family::barabasi_albert;
  s.d = d;
  s.q = q;
  s.k_over_d = k_over_d;
  return s;
}

ExperimentSetting bm(int n_cliques, int n_nodes, double alpha, double k_over_d) {
  ExperimentSetting s;
  s.family = ExperimentSetting::Family::block_model;
  s.n_cliques = n_cliques;
  s.n_nodes = n_nodes;
  s.d = n_nodes + (n_cliques - 1) * (n_nodes - 1);
  s.alpha = alpha;
  s.k_over_d = k_over_d;
  return s;
}

std::vector<ExperimentSetting> ba_preset(int d) {
  std::vector<ExperimentSetting> out;
  for (double r : {0.5, 1.0, 2.5}) out.push_back(ba(d, 1, r));
  for (double r : {0.5, 1.0, 5.0}) out.push_back(ba(d, 2, r));
  return out;
}

ExperimentRow scored(const ExperimentRow& base, Method method, double rho, const Graph& truth, const Graph& estimate) {
  ExperimentRow row = base;
  row.method = method;
  row.rho = rho;
  const Confusion c = confusion(truth, estimate);
  row.f_score = f_score(truth, estimate);
  row.true_positives = c.true_positives;
  row.false_positives = c.false_positives;
  row.false_negatives = c.false_negatives;
  row.estimated_edges = static_cast<int>(estimate.num_edges());
  return row;
}

ExperimentRow failed(const ExperimentRow& base, Method method) {
  ExperimentRow row = base;
  row.method = method;
  row.rho = kNaN;
  row.f_score = kNaN;
  return row;
}

std::string csv_number(double x) { return std::isfinite(x) ? format_number(x) : "NA"; }

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::mst: return "mst";
    case Method::eglearn_ns_oracle: return "eglearn-ns-oracle";
    case Method::eglearn_gl_oracle: return "eglearn-gl-oracle";
    case Method::ns_aic: return "eglearn-ns-aic";
    case Method::ns_bic: return "eglearn-ns-bic";
    case Method::ns_mbic: return "eglearn-ns-mbic";
  }
  return "unknown";
}

std::vector<Method> all_methods() {
  return {Method::mst, Method::eglearn_ns_oracle, Method::eglearn_gl_oracle,
          Method::ns_aic, Method::ns_bic, Method::ns_mbic};
}

int ExperimentSetting::k() const { return std::max(1, static_cast<int>(std::lround(k_over_d * d))); }

int ExperimentSetting::n() const { return sample_size_for_k(k()); }

std::string ExperimentSetting::model_label() const {
  std::ostringstream out;
  if (family == Family::barabasi_albert) {
    out << "BA(" << d << "," << q << ")";
  } else {
    out << "BM(" << n_cliques << "," << n_nodes << "," << alpha << ")";
  }
  return out.str();
}

HrModel ExperimentSetting::draw_model(std::uint64_t seed) const {
  if (family == Family::barabasi_albert) return laplacian_gamma(barabasi_albert(d, q, seed), seed);
  return block_model_gamma(n_cliques, n_nodes, alpha, seed);
}

std::vector<ExperimentSetting> preset_settings(const std::string& name) {
  if (name == "ba-d20") return ba_preset(20);
  if (name == "ba-d50") return ba_preset(50);
  if (name == "ba-d100") return ba_preset(100);
  if (name == "bm-d19") {
    std::vector<ExperimentSetting> out;
    for (double r : {2.0, 10.0}) {
      for (double alpha : {0.1, 1.0, 2.0, 10.0, 20.0}) out.push_back(bm(6, 4, alpha, r));
    }
    return out;
  }
  throw ValidationError(Reason::bad_argument, "unknown preset '" + name + "' (ba-d20, ba-d50, ba-d100, bm-d19)");
}

OracleChoice oracle_choice(const Graph& truth, const GraphPath& path) {
  if (path.graphs.empty()) throw ValidationError(Reason::bad_argument, "empty path");
  OracleChoice best{path.rho_grid[0], path.graphs[0], f_score(truth, path.graphs[0])};
  for (std::size_t i = 1; i < path.graphs.size(); ++i) {
    const double f = f_score(truth, path.graphs[i]);
    if (f > best.f_score) best = OracleChoice{path.rho_grid[i], path.graphs[i], f};
  }
  return best;
}

std::vector<ExperimentRow> run_replication(const ExperimentSetting& setting, int replication, std::uint64_t seed,
                                           const ReplicationOptions& opts) {
  const HrModel model = setting.draw_model(seed);
  const int k = setting.k();
  const int n = setting.n();
  const Matrix data = sample_maxstable_hr(model.gamma, n, seed);
  const Matrix gamma_hat = empirical_variogram(DataMatrix(data), k).pooled;

  ExperimentRow base;
  base.model = setting.model_label();
  base.k_over_d = setting.k_over_d;
  base.d = setting.d;
  base.k = k;
  base.n = n;
  base.replication = replication;
  base.seed = seed;
  base.eta_ns = base.eta_gl = base.positive_fraction = kNaN;
  if (opts.model_diagnostics) {
    base.eta_ns = ns_diagnostics(model.gamma, model.graph).eta;
    base.eta_gl = gl_diagnostics(model.gamma, model.graph).eta;
    base.positive_fraction = positive_offdiag_fraction(model.theta);
  }

  std::optional<std::vector<double>> ns_grid;
  auto ns_rho_grid = [&]() -> const std::vector<double>& {
    if (!ns_grid) ns_grid = default_rho_grid(gamma_hat, BaseLearner::neighborhood_selection, 30, 100.0, opts.solver);
    return *ns_grid;
  };

  std::vector<ExperimentRow> rows;
  for (Method method : opts.methods) {
    try {
      switch (method) {
        case Method::mst:
          rows.push_back(scored(base, method, kNaN, model.graph, extremal_mst(gamma_hat)));
          break;
        case Method::eglearn_ns_oracle: {
          const auto path = eglearn_path(gamma_hat, BaseLearner::neighborhood_selection, ns_rho_grid(), opts.solver);
          const auto best = oracle_choice(model.graph, path);
          rows.push_back(scored(base, method, best.rho, model.graph, best.graph));
          break;
        }
        case Method::eglearn_gl_oracle: {
          const auto grid = default_rho_grid(gamma_hat, BaseLearner::graphical_lasso, 30, 100.0, opts.solver);
          const auto path = eglearn_path(gamma_hat, BaseLearner::graphical_lasso, grid, opts.solver);
          const auto best = oracle_choice(model.graph, path);
          rows.push_back(scored(base, method, best.rho, model.graph, best.graph));
          break;
        }
        case Method::ns_aic:
        case Method::ns_bic:
        case Method::ns_mbic: {
          const auto ic = method == Method::ns_aic   ? InformationCriterion::aic
                          : method == Method::ns_bic ? InformationCriterion::bic
                                                     : InformationCriterion::mbic;
          const auto report = select_ic(gamma_hat, ns_rho_grid(), ic, k, opts.solver, opts.ic_fit);
          rows.push_back(scored(base, method, kNaN, model.graph, report.graph));
          break;
        }
      }
    } catch (const ConvergenceError& e) {
      logger()->warn("{} rep {} {}: {}", base.model, replication + 1, to_string(method), e.what());
      rows.push_back(failed(base, method));
    }
  }
  return rows;
}

std::vector<ExperimentRow> run_experiment(const std::vector<ExperimentSetting>& settings, int replications,
                                          std::uint64_t seed, int jobs, const ReplicationOptions& opts) {
  if (replications < 1) throw ValidationError(Reason::bad_argument, "need at least one replication");
  const std::size_t tasks = settings.size() * static_cast<std::size_t>(replications);
  std::vector<std::vector<ExperimentRow>> results(tasks);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (std::size_t t = next++; t < tasks; t = next++) {
      try {
        const auto& setting = settings[t / replications];
        const int rep = static_cast<int>(t % replications);
        results[t] = run_replication(setting, rep, derive_seed(seed, t), opts);
        logger()->info("task {}/{} done ({} rep {})", t + 1, tasks, setting.model_label(), rep + 1);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = tasks;
      }
    }
  };

  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(tasks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<ExperimentRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

std::string format_experiment_csv(const std::vector<ExperimentRow>& rows) {
  std::string out =
      "model,k_over_d,d,k,n,replication,seed,method,rho,f_score,tp,fp,fn,edges,eta_ns,eta_gl,positive_fraction\n";
  for (const auto& r : rows) {
    out += "\"" + r.model + "\"," + format_number(r.k_over_d) + ',' + std::to_string(r.d) + ',' + std::to_string(r.k) + ',' +
           std::to_string(r.n) + ',' + std::to_string(r.replication + 1) + ',' + std::to_string(r.seed) + ',' +
           to_string(r.method) + ',' + csv_number(r.rho) + ',' + csv_number(r.f_score) + ',' +
           std::to_string(r.true_positives) + ',' + std::to_string(r.false_positives) + ',' +
           std::to_string(r.false_negatives) + ',' + std::to_string(r.estimated_edges) + ',' +
           csv_number(r.eta_ns) + ',' + csv_number(r.eta_gl) + ',' + csv_number(r.positive_fraction) + '\n';
  }
  return out;
}

}  // namespace hrgraph
