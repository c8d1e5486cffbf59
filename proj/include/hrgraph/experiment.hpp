#pragma once

// Simulation studies: random model, max-stable sample, empirical variogram,
// then every structure learner scored against the true graph.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hrgraph/eglearn.hpp"
#include "hrgraph/graph.hpp"
#include "hrgraph/simulate.hpp"

namespace hrgraph {

enum class Method { mst, eglearn_ns_oracle, eglearn_gl_oracle, ns_aic, ns_bic, ns_mbic };

std::string to_string(Method m);
std::vector<Method> all_methods();

struct ExperimentSetting {
  enum class Family { barabasi_albert, block_model };
  Family family = Family::barabasi_albert;
  int d = 0;
  int q = 1;            // Barabasi-Albert degree
  int n_cliques = 0;    // block model
  int n_nodes = 0;
  double alpha = 0.0;
  double k_over_d = 1.0;

  int k() const;
  int n() const;  // smallest n with floor(n^0.7) >= k
  std::string model_label() const;
  HrModel draw_model(std::uint64_t seed) const;
};

// Named settings: ba-d20, ba-d50, ba-d100, bm-d19.
std::vector<ExperimentSetting> preset_settings(const std::string& name);

struct ExperimentRow {
  std::string model;
  double k_over_d = 0.0;
  int d = 0;
  int k = 0;
  int n = 0;
  int replication = 0;
  std::uint64_t seed = 0;
  Method method = Method::mst;
  double rho = 0.0;  // NaN when the method has no single penalty
  double f_score = 0.0;
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
  int estimated_edges = 0;
  double eta_ns = 0.0;  // model incoherence, NaN if not computed
  double eta_gl = 0.0;
  double positive_fraction = 0.0;
};

struct OracleChoice {
  double rho = 0.0;
  Graph graph;
  double f_score = 0.0;
};

// Best F-score along a path; ties go to the smallest penalty.
OracleChoice oracle_choice(const Graph& truth, const GraphPath& path);

struct ReplicationOptions {
  std::vector<Method> methods = all_methods();
  bool model_diagnostics = false;  // fill eta_ns, eta_gl, positive_fraction
  SolverOptions solver;
  IcFit ic_fit = IcFit::rss;
};

// One replication; `seed` drives model and data.
std::vector<ExperimentRow> run_replication(const ExperimentSetting& setting, int replication, std::uint64_t seed,
                                           const ReplicationOptions& opts = {});

// settings x replications tasks, task t seeded with derive_seed(seed, t);
// rows come back in task order whatever the number of jobs.
std::vector<ExperimentRow> run_experiment(const std::vector<ExperimentSetting>& settings, int replications,
                                          std::uint64_t seed, int jobs, const ReplicationOptions& opts = {});

std::string format_experiment_csv(const std::vector<ExperimentRow>& rows);

}  // namespace hrgraph
