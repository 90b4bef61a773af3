#include "igaasp/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace igaasp {

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Pretty: return "pretty";
  }
  return "?";
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  if (s == "pretty" || s == "table") return OutputFormat::Pretty;
  throw std::invalid_argument("unknown output format: " + s);
}

OutputFormat output_format_for_path(const std::string& path) {
  auto ends = [&](const std::string& ext) {
    return path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0;
  };
  if (ends(".csv")) return OutputFormat::Csv;
  if (ends(".json")) return OutputFormat::Json;
  return OutputFormat::Pretty;
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{"problem", "dim",       "p",       "n",      "tau",    "precond", "smoother",
                                             "iters",   "converged", "kappa2", "res_err", "l2_err", "wall_ms"};
  return cols;
}

std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

namespace {

std::string opt_sci(const std::optional<double>& v) { return v ? format_sci(*v) : std::string(); }

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<CellResult>& cells) {
  const auto& cols = result_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& c : cells) {
    os << c.problem << ',' << c.dim << ',' << c.p << ',' << c.n << ',' << format_sci(c.tau) << ',' << c.precond << ','
       << c.smoother << ',' << (c.converged ? std::to_string(c.iters) : std::string("-")) << ','
       << (c.converged ? "true" : "false") << ',' << opt_sci(c.kappa2) << ',' << opt_sci(c.res_err) << ','
       << opt_sci(c.l2_err) << ',' << opt_sci(c.wall_ms) << '\n';
  }
}

std::vector<CellResult> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("read_csv: missing header");
  const auto header = split_csv_line(line);
  if (header != result_columns()) throw std::invalid_argument("read_csv: unexpected header");
  std::vector<CellResult> out;
  int row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw std::invalid_argument("read_csv: wrong field count in row " + std::to_string(row));
    CellResult c;
    c.problem = f[0];
    c.dim = std::stoi(f[1]);
    c.p = std::stoi(f[2]);
    c.n = std::stoi(f[3]);
    c.tau = std::stod(f[4]);
    c.precond = f[5];
    c.smoother = f[6];
    c.converged = f[8] == "true";
    if (!c.converged && f[8] != "false") throw std::invalid_argument("read_csv: bad converged flag in row " + std::to_string(row));
    c.iters = f[7] == "-" ? 0 : std::stoi(f[7]);
    c.kappa2 = parse_opt(f[9]);
    c.res_err = parse_opt(f[10]);
    c.l2_err = parse_opt(f[11]);
    c.wall_ms = parse_opt(f[12]);
    out.push_back(c);
  }
  return out;
}

nlohmann::json to_json(const CellResult& c) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"problem", c.problem},   {"dim", c.dim},
          {"p", c.p},               {"n", c.n},
          {"tau", c.tau},           {"precond", c.precond},
          {"smoother", c.smoother}, {"iters", c.converged ? nlohmann::json(c.iters) : nlohmann::json("-")},
          {"converged", c.converged}, {"kappa2", opt(c.kappa2)},
          {"res_err", opt(c.res_err)}, {"l2_err", opt(c.l2_err)},
          {"wall_ms", opt(c.wall_ms)}};
}

nlohmann::json to_json(const std::vector<CellResult>& cells) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : cells) rows.push_back(to_json(c));
  return {{"columns", result_columns()}, {"rows", rows}};
}

void validate_result_json(const nlohmann::json& j) {
  auto fail = [](const std::string& what) { throw std::invalid_argument("result json: " + what); };
  if (!j.is_object() || !j.contains("columns") || !j.contains("rows")) fail("expected {columns, rows}");
  if (j.at("columns") != nlohmann::json(result_columns())) fail("columns differ");
  if (!j.at("rows").is_array()) fail("rows is not an array");
  for (const auto& r : j.at("rows")) {
    if (!r.is_object() || r.size() != result_columns().size()) fail("row has wrong field set");
    for (const char* k : {"problem", "precond", "smoother"})
      if (!r.contains(k) || !r.at(k).is_string()) fail(std::string(k) + " must be a string");
    for (const char* k : {"dim", "p", "n"})
      if (!r.contains(k) || !r.at(k).is_number_integer()) fail(std::string(k) + " must be an integer");
    if (!r.contains("tau") || !r.at("tau").is_number() || !(r.at("tau").get<double>() > 0)) fail("tau must be positive");
    if (!r.contains("converged") || !r.at("converged").is_boolean()) fail("converged must be a boolean");
    const auto& it = r.at("iters");
    if (r.at("converged").get<bool>() ? !it.is_number_integer() : it != "-") fail("iters inconsistent with converged");
    for (const char* k : {"kappa2", "res_err", "l2_err", "wall_ms"})
      if (!r.contains(k) || !(r.at(k).is_null() || r.at(k).is_number())) fail(std::string(k) + " must be a number or null");
  }
}

void write_pretty(std::ostream& os, const std::vector<CellResult>& cells, ReportItem what) {
  using Key = std::tuple<std::string, int, std::string, std::string, int>;
  std::vector<Key> groups;
  std::map<Key, std::vector<const CellResult*>> by_group;
  for (const auto& c : cells) {
    Key k{c.problem, c.dim, c.precond, c.smoother, c.p};
    if (!by_group.count(k)) groups.push_back(k);
    by_group[k].push_back(&c);
  }
  auto value = [what](const CellResult& c) -> std::string {
    if (what == ReportItem::Iters) return c.converged ? std::to_string(c.iters) : "-";
    if (what == ReportItem::Cond) return c.kappa2 ? format_sci(*c.kappa2) : "";
    return c.l2_err ? format_sci(*c.l2_err) : "";
  };
  const char* label = what == ReportItem::Iters ? "iterations" : what == ReportItem::Cond ? "kappa2" : "l2 error";
  for (const auto& k : groups) {
    const auto& rows = by_group[k];
    std::vector<int> ns;
    std::vector<double> taus;
    for (const auto* c : rows) {
      if (std::find(ns.begin(), ns.end(), c->n) == ns.end()) ns.push_back(c->n);
      if (std::find(taus.begin(), taus.end(), c->tau) == taus.end()) taus.push_back(c->tau);
    }
    os << std::get<0>(k) << ' ' << std::get<1>(k) << "-d, " << std::get<2>(k) << '/' << std::get<3>(k)
       << ", p=" << std::get<4>(k) << ": " << label << '\n';
    os << std::setw(10) << "tau \\ n";
    for (int n : ns) os << std::setw(11) << n;
    os << '\n';
    for (double t : taus) {
      os << std::setw(10) << format_sci(t);
      for (int n : ns) {
        std::string v;
        for (const auto* c : rows)
          if (c->n == n && c->tau == t) v = value(*c);
        os << std::setw(11) << v;
      }
      os << '\n';
    }
    os << '\n';
  }
}

void emit(std::ostream& os, const std::vector<CellResult>& cells, OutputFormat fmt, const std::set<ReportItem>& report) {
  switch (fmt) {
    case OutputFormat::Csv: write_csv(os, cells); break;
    case OutputFormat::Json: os << to_json(cells).dump(2) << '\n'; break;
    case OutputFormat::Pretty:
      for (auto r : report) write_pretty(os, cells, r);
      break;
  }
}

void emit(const std::string& path, const std::vector<CellResult>& cells, OutputFormat fmt,
          const std::set<ReportItem>& report) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  emit(f, cells, fmt, report);
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace igaasp
