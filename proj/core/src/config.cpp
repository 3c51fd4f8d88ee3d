#include "peakcount/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "peakcount/errors.hpp"

namespace peakcount {

namespace {

using nlohmann::json;

double require_positive(const json& j, const char* field) {
  double v = j.get<double>();
  if (!(v > 0.0)) throw ValidationError(std::string(field) + " must be strictly positive");
  return v;
}

SparsePoly parse_profile(const json& arr) {
  if (!arr.is_array() || arr.empty())
    throw ValidationError("profile must be a non-empty array of monomials");
  int nvars = -1;
  SparsePoly q;
  for (const auto& term : arr) {
    if (!term.contains("exponents") || !term.contains("coeff"))
      throw ValidationError("profile monomial needs 'exponents' and 'coeff'");
    std::vector<int> e = term["exponents"].get<std::vector<int>>();
    double c = term["coeff"].get<double>();
    if (nvars < 0) {
      nvars = static_cast<int>(e.size());
      if (nvars < 1) throw ValidationError("profile exponent vectors must be non-empty");
      q = SparsePoly(nvars);
    }
    if (static_cast<int>(e.size()) != nvars)
      throw ValidationError("profile exponent vectors have inconsistent lengths");
    for (int v : e)
      if (v < 0) throw ValidationError("profile exponents must be >= 0");
    q.add_term(e, c);
  }
  if (q.is_zero()) throw ValidationError("profile coefficients sum to zero");
  return q;
}

SparsePoly parse_psi(const json& obj) {
  if (!obj.contains("powers") || !obj["powers"].is_object())
    throw ValidationError("psi needs a 'powers' object mapping degree -> coeff");
  SparsePoly psi(1);
  for (const auto& [key, value] : obj["powers"].items()) {
    int degree;
    try {
      degree = std::stoi(key);
    } catch (...) {
      throw ValidationError("psi power key '" + key + "' is not an integer degree");
    }
    if (degree < 0) throw ValidationError("psi degrees must be >= 0");
    psi.add_term({degree}, value.get<double>());
  }
  if (psi.is_zero()) throw ValidationError("psi is identically zero");
  return psi;
}

RunConfig from_json(const json& j) {
  RunConfig cfg;
  if (!j.contains("p")) throw ValidationError("p required");
  if (!j.contains("dim")) throw ValidationError("dim required");
  cfg.p = j["p"].get<double>();
  cfg.dim = j["dim"].get<int>();

  bool has_profile = j.contains("profile");
  bool has_psi = j.contains("psi");
  if (has_profile == has_psi)
    throw ValidationError("exactly one of 'profile' / 'psi' must be present");
  if (has_profile) cfg.profile = parse_profile(j["profile"]);
  if (has_psi) cfg.psi = parse_psi(j["psi"]);

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (t.contains("quad_tol")) cfg.tol.quad_tol = require_positive(t["quad_tol"], "quad_tol");
    if (t.contains("zero_tol")) cfg.tol.zero_tol = require_positive(t["zero_tol"], "zero_tol");
    if (t.contains("det_tol")) cfg.tol.det_tol = require_positive(t["det_tol"], "det_tol");
    if (t.contains("flatness_tol"))
      cfg.tol.flatness_tol = require_positive(t["flatness_tol"], "flatness_tol");
    if (t.contains("box_radius"))
      cfg.tol.box_radius = require_positive(t["box_radius"], "box_radius");
    if (t.contains("grid_per_axis")) {
      cfg.tol.grid_per_axis = t["grid_per_axis"].get<int>();
      if (cfg.tol.grid_per_axis < 2)
        throw ValidationError("grid_per_axis must be >= 2");
    }
    if (t.contains("prune_rel")) cfg.tol.prune_rel = require_positive(t["prune_rel"], "prune_rel");
    if (t.contains("ode_tol")) cfg.tol.solver.ode_tol = require_positive(t["ode_tol"], "ode_tol");
  }
  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (o.contains("json")) cfg.json_path = o["json"].get<std::string>();
    if (o.contains("csv")) cfg.csv_path = o["csv"].get<std::string>();
  }
  if (j.contains("moments_max_order"))
    cfg.moments_max_order = j["moments_max_order"].get<int>();
  return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  try {
    return from_json(j);
  } catch (const ValidationError&) {
    throw;
  } catch (const json::exception& e) {
    throw ValidationError(origin + ": " + e.what());
  }
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string profile_to_config_json(const SparsePoly& q) {
  json arr = json::array();
  for (const auto& [e, c] : q.terms()) {
    json term;
    term["exponents"] = e;
    term["coeff"] = c;
    arr.push_back(term);
  }
  return arr.dump();
}

}  // namespace peakcount
