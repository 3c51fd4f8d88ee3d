#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "peakcount/classify.hpp"
#include "peakcount/config.hpp"
#include "peakcount/errors.hpp"
#include "peakcount/report.hpp"
#include "peakcount/selftest.hpp"

namespace {

using namespace peakcount;

struct GlobalFlags {
  std::string config_path;
  std::string json_path;
  bool quiet = false;
};

void emit(const GlobalFlags& g, const std::string& json_override, const JsonValue& v) {
  std::string path = !json_override.empty() ? json_override : g.json_path;
  std::string text = v.dump();
  if (!path.empty()) write_text_file(path, text);
  if (path.empty() && !g.quiet) std::cout << text;
}

RunConfig load_config(const GlobalFlags& g, const std::string& local) {
  std::string path = !local.empty() ? local : g.config_path;
  if (path.empty()) throw ValidationError("--config is required for this subcommand");
  return parse_config(path);
}

int run_ground_state(const GlobalFlags& g, double p, int dim, double tol,
                     const std::string& csv_path) {
  SolverOptions opts;
  if (tol > 0) {
    opts.ode_tol = tol;
    opts.shoot_tol = std::max(tol, 1e-15);
  }
  GroundState gs = solve_ground_state({p, dim}, opts);
  if (!csv_path.empty()) write_text_file(csv_path, ground_state_csv(gs));
  if (!g.quiet) {
    JsonValue out = JsonValue::object();
    out.set("p", JsonValue::number(p));
    out.set("dim", JsonValue::integer(dim));
    out.set("u0", JsonValue::number(gs.u0()));
    out.set("decay_rate", JsonValue::number(gs.decay_rate()));
    out.set("truncation_radius", JsonValue::number(gs.truncation_radius()));
    out.set("max_residual", JsonValue::number(gs.max_residual()));
    emit(g, "", out);
  }
  return 0;
}

int run_moments(const GlobalFlags& g, double p, int dim, int max_order,
                const std::string& json_path) {
  GroundState gs = solve_ground_state({p, dim});
  RadialWeight w(gs);
  MomentOptions mopts;
  MomentTable tab(w, max_order, mopts);
  std::vector<double> c, identity;
  for (int m = 0; m <= tab.max_order(); ++m) c.push_back(tab.c_moment(m));
  for (int k = 0; 2 * k <= tab.max_order(); ++k) identity.push_back(tab.c_moment_identity(k));
  emit(g, json_path, moments_json(p, dim, c, identity, tab.quad_tol()));
  return 0;
}

int run_reduce(const GlobalFlags& g, const std::string& config_path,
               const std::string& json_path) {
  RunConfig cfg = load_config(g, config_path);
  if (!cfg.profile) throw ValidationError("reduce requires a polynomial profile");
  GroundState gs = solve_ground_state({cfg.p, cfg.dim}, cfg.tol.solver);
  RadialWeight w(gs);
  MomentOptions mopts;
  mopts.quad_tol = cfg.tol.quad_tol;
  int order = std::max(2, cfg.profile->degree() - 1);
  if (cfg.moments_max_order > order) order = cfg.moments_max_order;
  MomentTable tab(w, order, mopts);
  ReduceOptions ropts;
  ropts.prune_rel = cfg.tol.prune_rel;
  ReducedField field = reduce_field(*cfg.profile, tab, ropts);

  JsonValue out = field_json(field);
  JsonValue prov = JsonValue::object();
  for (int m = 0; m <= tab.max_order(); ++m)
    prov.set("c" + std::to_string(m), JsonValue::number(tab.c_moment(m)));
  out.set("provenance_moments", std::move(prov));
  emit(g, json_path, out);
  return 0;
}

int run_zeros(const GlobalFlags& g, const std::string& config_path, double box, int grid,
              const std::string& json_path) {
  RunConfig cfg = load_config(g, config_path);
  if (!cfg.profile) throw ValidationError("zeros requires a polynomial profile");
  if (box > 0) cfg.tol.box_radius = box;
  if (grid > 0) cfg.tol.grid_per_axis = grid;
  GroundState gs = solve_ground_state({cfg.p, cfg.dim}, cfg.tol.solver);
  RadialWeight w(gs);
  MomentOptions mopts;
  mopts.quad_tol = cfg.tol.quad_tol;
  MomentTable tab(w, std::max(2, cfg.profile->degree() - 1), mopts);
  ReduceOptions ropts;
  ropts.prune_rel = cfg.tol.prune_rel;
  ReducedField field = reduce_field(*cfg.profile, tab, ropts);
  ZeroFindOptions zopts;
  zopts.box_radius = cfg.tol.box_radius;
  zopts.grid_per_axis = cfg.tol.grid_per_axis;
  zopts.zero_tol_rel = cfg.tol.zero_tol;
  zopts.det_tol = cfg.tol.det_tol;
  emit(g, json_path, zeros_json(find_zeros(field, zopts)));
  return 0;
}

int run_classify(const GlobalFlags& g, const std::string& config_path,
                 const std::string& json_path) {
  RunConfig cfg = load_config(g, config_path);
  std::string out_path = !json_path.empty() ? json_path
                          : !g.json_path.empty() ? g.json_path
                                                 : cfg.json_path;
  try {
    ClassificationReport rep = classify_domain(cfg);
    JsonValue out = report_json(rep);
    if (!out_path.empty()) write_text_file(out_path, out.dump());
    if (out_path.empty() && !g.quiet) std::cout << out.dump();
    if (!g.quiet && !out_path.empty()) {
      if (rep.exact)
        std::cout << "predicted count: exactly " << rep.predicted_count << "\n";
      else
        std::cout << "predicted count: >= " << rep.count_lower_bound << "\n";
    }
  } catch (const StageError& e) {
    // Stage-attributed failure; emit the partial artifact before exiting.
    JsonValue err = JsonValue::object();
    JsonValue detail = JsonValue::object();
    detail.set("stage", JsonValue::string(e.stage()));
    detail.set("message", JsonValue::string(e.what()));
    err.set("error", std::move(detail));
    if (!out_path.empty()) write_text_file(out_path, err.dump());
    throw;
  }
  return 0;
}

int run_curvature(const GlobalFlags& g, const std::string& config_path,
                  const std::string& json_path) {
  RunConfig cfg = load_config(g, config_path);
  if (!cfg.psi) throw ValidationError("curvature requires a psi profile (dim = 2 mode)");
  CurvatureAnalysis ca = curvature_order(*cfg.psi);
  JsonValue out = JsonValue::object();
  out.set("n", JsonValue::integer(ca.n));
  out.set("m", JsonValue::integer(ca.m));
  out.set("verdict", JsonValue::string(to_string(ca.verdict)));
  out.set("curvature_at_0", JsonValue::number(mean_curvature_eval(*cfg.psi, 0.0)));
  emit(g, json_path, out);
  return 0;
}

int run_selftest(const GlobalFlags& g) {
  bool ok = run_acceptance([&](const CriterionResult& r) {
    if (g.quiet && r.passed) return;
    std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.detail.empty() ? "" : " -- ",
                r.detail.c_str());
    std::fflush(stdout);
  });
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boundary single-peak solution counter for the singularly "
               "perturbed Neumann problem"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--config", g.config_path, "run configuration file (JSON)");
  app.add_option("--json", g.json_path, "write machine-readable output to this path");
  app.add_flag("--quiet", g.quiet, "suppress console output");
  auto add_quiet = [&](CLI::App* sub) {
    sub->add_flag("--quiet", g.quiet, "suppress console output");
  };

  // ground-state
  auto* gs_cmd = app.add_subcommand("ground-state", "solve the radial ground state");
  double gs_p = 2.0, gs_tol = -1.0;
  int gs_dim = 3;
  std::string gs_csv;
  gs_cmd->add_option("--p", gs_p, "nonlinearity exponent")->required();
  gs_cmd->add_option("--dim", gs_dim, "ambient dimension N")->required();
  gs_cmd->add_option("--tol", gs_tol, "integrator tolerance override");
  gs_cmd->add_option("--dump-csv", gs_csv, "CSV dump path (columns r,U,dU,residual)");

  // moments
  auto* mo_cmd = app.add_subcommand("moments", "compute energy-density moments");
  double mo_p = 2.0;
  int mo_dim = 3, mo_order = 6;
  std::string mo_json;
  mo_cmd->add_option("--p", mo_p, "nonlinearity exponent")->required();
  mo_cmd->add_option("--dim", mo_dim, "ambient dimension N")->required();
  mo_cmd->add_option("--max-order", mo_order, "largest moment order")->required();
  mo_cmd->add_option("--json", mo_json, "output path");

  // reduce
  auto* re_cmd = app.add_subcommand("reduce", "reduce the boundary profile to the polynomial field");
  std::string re_config, re_json;
  re_cmd->add_option("--config", re_config, "run configuration");
  re_cmd->add_option("--json", re_json, "output path");

  // zeros
  auto* ze_cmd = app.add_subcommand("zeros", "locate and classify field zeros");
  std::string ze_config, ze_json;
  double ze_box = -1.0;
  int ze_grid = -1;
  ze_cmd->add_option("--config", ze_config, "run configuration");
  ze_cmd->add_option("--box", ze_box, "search box radius");
  ze_cmd->add_option("--grid", ze_grid, "Newton starts per axis");
  ze_cmd->add_option("--json", ze_json, "output path");

  // classify
  auto* cl_cmd = app.add_subcommand("classify", "full multiplicity classification");
  std::string cl_config, cl_json;
  cl_cmd->add_option("--config", cl_config, "run configuration");
  cl_cmd->add_option("--json", cl_json, "report path");

  // curvature
  auto* cu_cmd = app.add_subcommand("curvature", "plane-curve order analysis (dim = 2)");
  std::string cu_config, cu_json;
  cu_cmd->add_option("--config", cu_config, "run configuration");
  cu_cmd->add_option("--json", cu_json, "output path");

  // selftest
  auto* st_cmd = app.add_subcommand("selftest", "run the acceptance suite");

  for (CLI::App* sub : {gs_cmd, mo_cmd, re_cmd, ze_cmd, cl_cmd, cu_cmd, st_cmd})
    add_quiet(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gs_cmd->parsed()) return run_ground_state(g, gs_p, gs_dim, gs_tol, gs_csv);
    if (mo_cmd->parsed()) return run_moments(g, mo_p, mo_dim, mo_order, mo_json);
    if (re_cmd->parsed()) return run_reduce(g, re_config, re_json);
    if (ze_cmd->parsed()) return run_zeros(g, ze_config, ze_box, ze_grid, ze_json);
    if (cl_cmd->parsed()) return run_classify(g, cl_config, cl_json);
    if (cu_cmd->parsed()) return run_curvature(g, cu_config, cu_json);
    if (st_cmd->parsed()) return run_selftest(g);
  } catch (const StageError& e) {
    std::cerr << "error in stage '" << e.stage() << "': " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
