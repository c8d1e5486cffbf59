#include "hrgraph/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "hrgraph/errors.hpp"

namespace hrgraph {

namespace {

using Reason = ValidationError::Reason;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& value) {
  if (s.empty()) return false;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(value);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return buf.str();
}

const Json& require_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(Reason::bad_argument, std::string("JSON object lacks field '") + key + "'");
  }
  return j.at(key);
}

Json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

Matrix parse_data_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (first) {
      first = false;
      width = fields.size();
      double dummy = 0.0;
      bool numeric = true;
      for (const auto& f : fields) numeric = numeric && parse_double(f, dummy);
      if (!numeric) {
        bool any_numeric = false;
        for (const auto& f : fields) any_numeric = any_numeric || parse_double(f, dummy);
        // A first row mixing numbers and gaps is data with missing values.
        if (!any_numeric) continue;
      }
    }
    if (fields.size() != width) {
      throw ValidationError(Reason::dimension_mismatch, "line " + std::to_string(line_no) + " has " +
                                                            std::to_string(fields.size()) + " fields, expected " +
                                                            std::to_string(width));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      if (!parse_double(fields[c], row[c])) {
        throw ValidationError(Reason::not_finite, "missing or non-numeric value at line " + std::to_string(line_no) +
                                                      ", column " + std::to_string(c + 1));
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(Reason::too_small, "no data rows");
  Matrix out(rows.size(), width);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) out(r, c) = rows[r][c];
  }
  return out;
}

Matrix read_data_csv(const std::filesystem::path& path) { return parse_data_csv(read_file(path)); }

std::string format_data_csv(const Matrix& data) {
  std::string out;
  for (Eigen::Index c = 0; c < data.cols(); ++c) {
    if (c) out += ',';
    out += "v" + std::to_string(c + 1);
  }
  out += '\n';
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      if (c) out += ',';
      out += format_number(data(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_data_csv(const std::filesystem::path& path, const Matrix& data) { write_text(path, format_data_csv(data)); }

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      out += format_number(m(r, c));
    }
    out += '\n';
  }
  write_text(path, out);
}

Matrix read_matrix_csv(const std::filesystem::path& path) { return parse_data_csv(read_file(path)); }

Json matrix_to_json(const Matrix& m) {
  if (m.rows() != m.cols()) throw ValidationError(Reason::not_square, "only square matrices serialize to JSON");
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(number_or_null(m(r, c)));
  }
  return Json{{"dim", m.rows()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const Json& j) {
  const int d = require_field(j, "dim").get<int>();
  const Json& entries = require_field(j, "entries");
  if (d < 0 || !entries.is_array() || entries.size() != static_cast<std::size_t>(d) * d) {
    throw ValidationError(Reason::dimension_mismatch, "matrix JSON needs dim*dim entries");
  }
  Matrix m(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const Json& v = entries[static_cast<std::size_t>(r) * d + c];
      if (!v.is_number()) throw ValidationError(Reason::not_finite, "matrix JSON has a non-numeric entry");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back({e.lo + 1, e.hi + 1});
  return Json{{"dim", g.dim()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const Json& j) {
  const int d = require_field(j, "dim").get<int>();
  if (d < 1) throw ValidationError(Reason::too_small, "graph JSON needs dim >= 1");
  Graph g(d);
  for (const auto& e : require_field(j, "edges")) {
    if (!e.is_array() || e.size() != 2) throw ValidationError(Reason::bad_argument, "edges must be [i, j] pairs");
    const int a = e[0].get<int>();
    const int b = e[1].get<int>();
    if (a < 1 || b < 1 || a > d || b > d) throw ValidationError(Reason::bad_argument, "edge endpoint out of range");
    g.add_edge(a - 1, b - 1);
  }
  return g;
}

Json path_to_json(const GraphPath& path) {
  Json out = Json::array();
  for (std::size_t i = 0; i < path.graphs.size(); ++i) {
    out.push_back(Json{{"rho", path.rho_grid[i]},
                       {"density", path.densities[i]},
                       {"connected", static_cast<bool>(path.connected[i])},
                       {"edges", graph_to_json(path.graphs[i])["edges"]}});
  }
  return out;
}

Json ic_report_to_json(const ICReport& report) {
  const Eigen::Index d = report.selected_rho.rows();
  Json rho = Json::array();
  for (Eigen::Index m = 0; m < d; ++m) {
    Json row = Json::array();
    for (Eigen::Index l = 0; l < d; ++l) row.push_back(number_or_null(report.selected_rho(m, l)));
    rho.push_back(std::move(row));
  }
  Json abstained = Json::array();
  for (std::size_t m = 0; m < report.votes.layers.size(); ++m) {
    if (!report.votes.layers[m]) abstained.push_back(m + 1);
  }
  return Json{{"criterion", to_string(report.criterion)},
              {"fit", to_string(report.fit)},
              {"k", report.k},
              {"selected_rho", std::move(rho)},
              {"abstained_roots", std::move(abstained)},
              {"graph", graph_to_json(report.graph)}};
}

Json ns_diagnostics_to_json(const NsDiagnostics& diag) {
  Json pairs = Json::array();
  for (const auto& p : diag.pairs) {
    pairs.push_back(Json{{"root", p.root + 1},
                         {"ell", p.ell + 1},
                         {"lambda", number_or_null(p.lambda)},
                         {"kappa", number_or_null(p.kappa)},
                         {"vartheta", number_or_null(p.vartheta)},
                         {"eta", number_or_null(p.eta)}});
  }
  Json out{{"s", diag.s},
           {"theta_min", number_or_null(diag.theta_min)},
           {"lambda", number_or_null(diag.lambda)},
           {"kappa", number_or_null(diag.kappa)},
           {"vartheta", number_or_null(diag.vartheta)},
           {"eta", number_or_null(diag.eta)}};
  out["C"] = diag.recovery_radius ? number_or_null(*diag.recovery_radius) : Json(nullptr);
  out["pairs"] = std::move(pairs);
  return out;
}

Json gl_diagnostics_to_json(const GlDiagnostics& diag) {
  Json eta = Json::array();
  for (double e : diag.eta_per_root) eta.push_back(number_or_null(e));
  Json out{{"s", diag.s},
           {"theta_min", number_or_null(diag.theta_min)},
           {"kappa_sigma", number_or_null(diag.kappa_sigma)},
           {"kappa_omega", number_or_null(diag.kappa_omega)},
           {"eta", number_or_null(diag.eta)},
           {"chi0", number_or_null(diag.chi0)},
           {"min_farris_diagonal", number_or_null(diag.min_farris_diagonal)}};
  out["C"] = diag.recovery_radius ? number_or_null(*diag.recovery_radius) : Json(nullptr);
  out["eta_per_root"] = std::move(eta);
  return out;
}

Json model_to_json(const HrModel& model) {
  return Json{{"gamma", matrix_to_json(model.gamma.matrix())},
              {"theta", matrix_to_json(model.theta.matrix())},
              {"graph", graph_to_json(model.graph)}};
}

HrModel model_from_json(const Json& j) {
  VariogramMatrix gamma = validate_variogram(matrix_from_json(require_field(j, "gamma")));
  HRPrecision theta = precision_from_gamma(gamma);
  Graph g = graph_from_precision(theta);
  if (j.contains("theta")) {
    const Matrix stored = matrix_from_json(j.at("theta"));
    const double scale = std::max(1.0, theta.matrix().cwiseAbs().maxCoeff());
    if (stored.rows() != theta.dim() || (stored - theta.matrix()).cwiseAbs().maxCoeff() > 1e-6 * scale) {
      throw ValidationError(Reason::bad_argument, "stored precision does not match the variogram");
    }
    // Keep the stored matrix: it carries exact zeros where the model has them.
    theta = HRPrecision::from_matrix(stored);
    g = graph_from_precision(theta);
  }
  if (j.contains("graph") && !(graph_from_json(j.at("graph")) == g)) {
    throw ValidationError(Reason::bad_argument, "stored graph does not match the precision matrix");
  }
  return HrModel{std::move(g), std::move(gamma), std::move(theta)};
}

Json read_json(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(Reason::bad_argument, path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace hrgraph
