#pragma once

// CSV and JSON serialization of data, matrices, graphs and reports.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "hrgraph/diagnostics.hpp"
#include "hrgraph/eglearn.hpp"
#include "hrgraph/graph.hpp"
#include "hrgraph/hr_model.hpp"
#include "hrgraph/simulate.hpp"

namespace hrgraph {

using Json = nlohmann::ordered_json;

// n x d numeric table with an optional header row, detected when some field of
// the first row is not a number. Empty or non-numeric fields elsewhere are
// rejected with ValidationError; unreadable files raise IoError.
Matrix read_data_csv(const std::filesystem::path& path);
Matrix parse_data_csv(const std::string& text);

// Header v1..vd, shortest round-trip number formatting.
void write_data_csv(const std::filesystem::path& path, const Matrix& data);
std::string format_data_csv(const Matrix& data);

// Plain rectangular CSV without header.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

// {"dim": d, "entries": [row-major values]}
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

// {"dim": d, "edges": [[i, j], ...]} with 1-based i < j.
Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j);

// Array of {rho, density, connected, edges}.
Json path_to_json(const GraphPath& path);
Json ic_report_to_json(const ICReport& report);
Json ns_diagnostics_to_json(const NsDiagnostics& diag);
Json gl_diagnostics_to_json(const GlDiagnostics& diag);

// {"gamma": matrix, "theta": matrix, "graph": graph}. On reading, Gamma is
// validated and Theta and the graph are recomputed and checked against the
// stored values.
Json model_to_json(const HrModel& model);
HrModel model_from_json(const Json& j);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

std::string format_number(double x);

}  // namespace hrgraph
