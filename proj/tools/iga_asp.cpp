// iga-asp: parameter sweeps for the auxiliary-space preconditioners.
#include "igaasp/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

using namespace igaasp;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// "1..6" or "1,2,4"
std::vector<int> parse_int_range(const std::string& s) {
  std::vector<int> out;
  for (const auto& part : split(s, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(std::stoi(part));
      continue;
    }
    const int a = std::stoi(part.substr(0, dots)), b = std::stoi(part.substr(dots + 2));
    if (b < a) throw std::invalid_argument("empty range: " + part);
    for (int v = a; v <= b; ++v) out.push_back(v);
  }
  return out;
}

// "1e-4..1e4" walks decades; "1e-4,1,1e4" is a list
std::vector<double> parse_tau_range(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(std::stod(part));
      continue;
    }
    const double a = std::stod(part.substr(0, dots)), b = std::stod(part.substr(dots + 2));
    if (!(a > 0) || b < a) throw std::invalid_argument("bad tau range: " + part);
    const int k0 = static_cast<int>(std::lround(std::log10(a))), k1 = static_cast<int>(std::lround(std::log10(b)));
    if (std::abs(std::pow(10.0, k0) - a) > 1e-12 * a || std::abs(std::pow(10.0, k1) - b) > 1e-12 * b)
      throw std::invalid_argument("tau range endpoints must be powers of ten: " + part);
    for (int k = k0; k <= k1; ++k) out.push_back(std::stod("1e" + std::to_string(k)));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"B-spline curl-curl / grad-div solver sweeps with auxiliary-space preconditioning"};
  app.require_subcommand(1);
  CLI::App* run = app.add_subcommand("run", "run a (p, n, tau) sweep");

  std::string spec_path, problem = "curl", p_range = "1", n_range = "8", tau_range = "1e-4", precond = "asp",
                         smoother = "jacobi", curl_variant = "diag", nu2 = "psq", glt_step, report = "iters",
                         out_path, format, dump_dir, solution = "perturbed", kappa_metric = "singular",
                         inner = "direct", aux = "full";
  int dim = 2, nu1 = 1, nu_asp = 3, max_iter = 3000;
  double tol = 1e-6;
  bool allow_nonconverged = false, no_timing = false, quiet = false, print_spec = false;

  run->add_option("--spec", spec_path, "JSON experiment spec; explicit flags override it")->check(CLI::ExistingFile);
  auto* o_problem = run->add_option("--problem", problem, "curl | div");
  auto* o_dim = run->add_option("--dim", dim, "2 | 3");
  auto* o_p = run->add_option("--p", p_range, "degrees, e.g. 1..6 or 1,3");
  auto* o_n = run->add_option("--n", n_range, "elements per direction, e.g. 8,16,32");
  auto* o_tau = run->add_option("--tau", tau_range, "tau values, e.g. 1e-4..1e4 (decades) or 1e-4,1");
  auto* o_precond = run->add_option("--precond", precond, "none | asp | asp-glt");
  auto* o_smoother = run->add_option("--smoother", smoother, "jacobi | gs");
  auto* o_curl = run->add_option("--curl-variant", curl_variant, "3-D div curl-term smoother: diag | sgs");
  auto* o_nu1 = run->add_option("--nu1", nu1, "smoother sweeps per ASP-GLT cycle");
  auto* o_nu2 = run->add_option("--nu2", nu2, "GLT steps: psq | pcube | integer");
  auto* o_nuasp = run->add_option("--nu-asp", nu_asp, "ASP-GLT cycles per application");
  auto* o_glt = run->add_option("--glt-step", glt_step, "mass-preconditioned | mass-correction");
  auto* o_tol = run->add_option("--tol", tol, "relative residual tolerance");
  auto* o_maxit = run->add_option("--max-iter", max_iter, "CG iteration cap");
  auto* o_sol = run->add_option("--solution", solution, "2-D manufactured case: perturbed | pure");
  auto* o_report = run->add_option("--report", report, "comma list of iters, cond, errors");
  auto* o_kappa = run->add_option("--kappa-metric", kappa_metric, "singular | spectral");
  auto* o_inner = run->add_option("--inner", inner, "auxiliary solves: direct | cg");
  auto* o_aux = run->add_option("--aux-boundary", aux, "auxiliary space boundary mask: full | match-target");
  run->add_option("--out", out_path, "output file (.csv, .json, anything else: table)");
  run->add_option("--format", format, "csv | json | pretty, overrides the extension");
  auto* o_dump = run->add_option("--dump-matrices", dump_dir, "write Matrix Market files per cell into DIR");
  run->add_flag("--allow-nonconverged", allow_nonconverged, "exit 0 even if some cell did not converge");
  run->add_flag("--no-timing", no_timing, "leave wall_ms empty (byte-stable output)");
  run->add_flag("--quiet", quiet, "no table on stdout");
  run->add_flag("--print-spec", print_spec, "print the resolved spec as JSON and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentSpec spec;
    if (!spec_path.empty()) {
      std::ifstream f(spec_path);
      spec = experiment_spec_from_json(nlohmann::json::parse(f));
    }
    auto given = [&](CLI::Option* o) { return spec_path.empty() || o->count() > 0; };
    if (given(o_problem)) spec.problem = operator_from_string(problem);
    if (given(o_dim)) spec.dim = dim;
    if (given(o_p)) spec.degrees = parse_int_range(p_range);
    if (given(o_n)) spec.elements = parse_int_range(n_range);
    if (given(o_tau)) spec.taus = parse_tau_range(tau_range);
    if (given(o_precond)) spec.precond = precond_kind_from_string(precond);
    if (given(o_smoother)) spec.smoother = smoother_kind_from_string(smoother);
    if (given(o_curl)) spec.curl_variant = curl_smoother_variant_from_string(curl_variant);
    if (given(o_nu1)) spec.nu1 = nu1;
    if (given(o_nu2)) spec.nu2 = nu2_rule_from_string(nu2);
    if (given(o_nuasp)) spec.nu_asp = nu_asp;
    if (o_glt->count()) spec.glt_step = glt_step_from_string(glt_step);
    if (given(o_tol)) spec.tol = tol;
    if (given(o_maxit)) spec.max_iter = max_iter;
    if (given(o_sol)) spec.solution = manufactured_variant_from_string(solution);
    if (given(o_report)) {
      spec.report.clear();
      for (const auto& r : split(report, ',')) spec.report.insert(report_item_from_string(r));
    }
    if (given(o_kappa)) spec.kappa_metric = condition_metric_from_string(kappa_metric);
    if (given(o_inner)) spec.inner.kind = inner_solver_kind_from_string(inner);
    if (given(o_aux)) spec.aux_boundary = auxiliary_boundary_from_string(aux);
    if (o_dump->count()) spec.dump_dir = dump_dir;
    if (no_timing) spec.timing = false;
    spec.validate();

    if (print_spec) {
      std::cout << to_json(spec).dump(2) << '\n';
      return 0;
    }

    const auto cells = run_experiment(spec);
    if (!quiet) emit(std::cout, cells, OutputFormat::Pretty, spec.report);
    if (!out_path.empty()) {
      const OutputFormat fmt = format.empty() ? output_format_for_path(out_path) : output_format_from_string(format);
      emit(out_path, cells, fmt, spec.report);
    }
    const bool all = std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.converged; });
    if (!all && !allow_nonconverged) {
      std::cerr << "iga-asp: some cells did not converge\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "iga-asp: " << e.what() << '\n';
    return 2;
  }
}
