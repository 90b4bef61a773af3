#pragma once

#include "igaasp/experiment.hpp"

#include <iosfwd>

namespace igaasp {

enum class OutputFormat { Csv, Json, Pretty };

std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& s);
/// Format from a file extension (.csv, .json, anything else: pretty).
OutputFormat output_format_for_path(const std::string& path);

const std::vector<std::string>& result_columns();

/// 3 significant digits, scientific.
std::string format_sci(double v);

/// Non-converged cells carry "-" in the iters column.
void write_csv(std::ostream& os, const std::vector<CellResult>& cells);
std::vector<CellResult> read_csv(std::istream& is);

nlohmann::json to_json(const CellResult& c);
nlohmann::json to_json(const std::vector<CellResult>& cells);
/// Throws std::invalid_argument naming the first offending field.
void validate_result_json(const nlohmann::json& j);

/// One grid per (problem, dim, precond, smoother, p): rows tau, columns n.
void write_pretty(std::ostream& os, const std::vector<CellResult>& cells, ReportItem what);

void emit(std::ostream& os, const std::vector<CellResult>& cells, OutputFormat fmt,
          const std::set<ReportItem>& report = {ReportItem::Iters});
void emit(const std::string& path, const std::vector<CellResult>& cells, OutputFormat fmt,
          const std::set<ReportItem>& report = {ReportItem::Iters});

}  // namespace igaasp
