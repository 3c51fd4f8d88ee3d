#include "peakcount/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "peakcount/errors.hpp"

namespace peakcount {

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void escape_string(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

}  // namespace

JsonValue JsonValue::object() {
  JsonValue v;
  v.kind_ = Kind::object_k;
  return v;
}
JsonValue JsonValue::array() {
  JsonValue v;
  v.kind_ = Kind::array_k;
  return v;
}
JsonValue JsonValue::number(double x) {
  JsonValue v;
  v.kind_ = Kind::number_k;
  v.num_ = x;
  return v;
}
JsonValue JsonValue::integer(long x) {
  JsonValue v;
  v.kind_ = Kind::integer_k;
  v.int_ = x;
  return v;
}
JsonValue JsonValue::boolean(bool x) {
  JsonValue v;
  v.kind_ = Kind::bool_k;
  v.bool_ = x;
  return v;
}
JsonValue JsonValue::string(std::string x) {
  JsonValue v;
  v.kind_ = Kind::string_k;
  v.str_ = std::move(x);
  return v;
}
JsonValue JsonValue::null() { return JsonValue(); }

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  fields_.emplace_back(key, std::move(v));
  return *this;
}
JsonValue& JsonValue::push(JsonValue v) {
  items_.push_back(std::move(v));
  return *this;
}

void JsonValue::dump_to(std::string& out, int indent, int depth) const {
  auto pad = [&](int d) {
    if (indent > 0) out.append(static_cast<std::size_t>(indent) * d, ' ');
  };
  switch (kind_) {
    case Kind::null_k: out += "null"; break;
    case Kind::bool_k: out += bool_ ? "true" : "false"; break;
    case Kind::integer_k: out += std::to_string(int_); break;
    case Kind::number_k: out += format_number(num_); break;
    case Kind::string_k: escape_string(str_, out); break;
    case Kind::array_k: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += '[';
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (indent > 0) out += '\n';
        pad(depth + 1);
        items_[i].dump_to(out, indent, depth + 1);
        if (i + 1 < items_.size()) out += ',';
      }
      if (indent > 0) {
        out += '\n';
        pad(depth);
      }
      out += ']';
      break;
    }
    case Kind::object_k: {
      if (fields_.empty()) {
        out += "{}";
        break;
      }
      out += '{';
      for (std::size_t i = 0; i < fields_.size(); ++i) {
        if (indent > 0) out += '\n';
        pad(depth + 1);
        escape_string(fields_[i].first, out);
        out += indent > 0 ? ": " : ":";
        fields_[i].second.dump_to(out, indent, depth + 1);
        if (i + 1 < fields_.size()) out += ',';
      }
      if (indent > 0) {
        out += '\n';
        pad(depth);
      }
      out += '}';
      break;
    }
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  dump_to(out, indent, 0);
  out += '\n';
  return out;
}

JsonValue profile_json(const SparsePoly& q) {
  JsonValue arr = JsonValue::array();
  for (const auto& [e, c] : q.terms()) {
    JsonValue term = JsonValue::object();
    JsonValue exps = JsonValue::array();
    for (int v : e) exps.push(JsonValue::integer(v));
    term.set("exponents", std::move(exps));
    term.set("coeff", JsonValue::number(c));
    arr.push(std::move(term));
  }
  return arr;
}

JsonValue moments_json(double p, int dim, const std::vector<double>& c,
                       const std::vector<double>& identity, double quad_tol) {
  JsonValue out = JsonValue::object();
  out.set("p", JsonValue::number(p));
  out.set("dim", JsonValue::integer(dim));
  JsonValue cv = JsonValue::object();
  for (std::size_t m = 0; m < c.size(); ++m)
    cv.set(std::to_string(m), JsonValue::number(c[m]));
  out.set("c", std::move(cv));
  JsonValue idv = JsonValue::object();
  for (std::size_t k = 0; k < identity.size(); ++k)
    idv.set(std::to_string(k), JsonValue::number(identity[k]));
  out.set("identity_check", std::move(idv));
  out.set("quad_tol", JsonValue::number(quad_tol));
  return out;
}

JsonValue field_json(const ReducedField& field) {
  JsonValue out = JsonValue::object();
  JsonValue comps = JsonValue::array();
  for (const auto& c : field.components()) comps.push(profile_json(c));
  out.set("components", std::move(comps));
  out.set("identically_zero", JsonValue::boolean(field.identically_zero()));
  return out;
}

JsonValue zeros_json(const ZeroSet& zeros) {
  JsonValue out = JsonValue::object();
  out.set("search_box", JsonValue::number(zeros.search_box));
  out.set("grid_per_axis", JsonValue::integer(zeros.grid_per_axis));
  out.set("completeness", JsonValue::string(zeros.completeness));
  out.set("certified_radius", JsonValue::number(zeros.certified_radius));
  out.set("min_norm_on_grid", JsonValue::number(zeros.min_norm_on_grid));
  JsonValue recs = JsonValue::array();
  for (const auto& z : zeros.zeros) {
    JsonValue r = JsonValue::object();
    JsonValue loc = JsonValue::array();
    for (double v : z.location) loc.push(JsonValue::number(v));
    r.set("location", std::move(loc));
    r.set("residual", JsonValue::number(z.residual));
    JsonValue jac = JsonValue::array();
    for (const auto& row : z.jacobian) {
      JsonValue jr = JsonValue::array();
      for (double v : row) jr.push(JsonValue::number(v));
      jac.push(std::move(jr));
    }
    r.set("jacobian", std::move(jac));
    r.set("det", JsonValue::number(z.det));
    r.set("classification", JsonValue::string(to_string(z.classification)));
    if (z.local_degree)
      r.set("local_degree", JsonValue::integer(*z.local_degree));
    else
      r.set("local_degree", JsonValue::null());
    recs.push(std::move(r));
  }
  out.set("records", std::move(recs));
  return out;
}

JsonValue report_json(const ClassificationReport& rep) {
  JsonValue out = JsonValue::object();

  JsonValue params = JsonValue::object();
  params.set("p", JsonValue::number(rep.params.p));
  params.set("dim", JsonValue::integer(rep.params.dim));
  out.set("params", std::move(params));

  JsonValue prof = JsonValue::object();
  if (rep.profile) {
    prof.set("type", JsonValue::string("polynomial"));
    prof.set("alpha", JsonValue::integer(rep.profile->alpha));
    prof.set("monomials", profile_json(rep.profile->q));
  } else if (rep.raw_profile) {
    prof.set("type", JsonValue::string(rep.curvature ? "psi" : "polynomial"));
    prof.set("monomials", profile_json(*rep.raw_profile));
  }
  out.set("profile", std::move(prof));

  out.set("moments", moments_json(rep.params.p, rep.params.dim, rep.c_values,
                                  rep.identity_values, 0.0));

  if (rep.zeros) {
    JsonValue fld = JsonValue::object();
    fld.set("stable_zero_count", JsonValue::integer(rep.count_lower_bound));
    out.set("field", std::move(fld));
    out.set("zeros", zeros_json(*rep.zeros));
  } else {
    out.set("field", JsonValue::null());
    out.set("zeros", JsonValue::null());
  }

  JsonValue cond = JsonValue::object();
  cond.set("flatness_holds", JsonValue::boolean(rep.conditions.flatness_holds));
  cond.set("min_grad_laplacian_norm",
           JsonValue::number(rep.conditions.min_grad_laplacian_norm));
  cond.set("all_nondegenerate", JsonValue::boolean(rep.conditions.all_nondegenerate));
  cond.set("odd_monomial_shortcut", JsonValue::boolean(rep.conditions.odd_monomial_shortcut));
  cond.set("indeterminate_zeros_present",
           JsonValue::boolean(rep.conditions.indeterminate_zeros_present));
  cond.set("search_complete", JsonValue::boolean(rep.conditions.search_complete));
  cond.set("field_identically_zero",
           JsonValue::boolean(rep.conditions.field_identically_zero));
  out.set("conditions", std::move(cond));

  JsonValue verdict = JsonValue::object();
  verdict.set("count_lower_bound", JsonValue::integer(rep.count_lower_bound));
  verdict.set("exact", JsonValue::boolean(rep.exact));
  if (rep.exact)
    verdict.set("predicted_count", JsonValue::integer(rep.predicted_count));
  else
    verdict.set("predicted_count",
                JsonValue::string(">= " + std::to_string(rep.count_lower_bound)));
  if (!rep.shortcut.empty()) verdict.set("shortcut", JsonValue::string(rep.shortcut));
  if (rep.curvature) {
    JsonValue cv = JsonValue::object();
    cv.set("n", JsonValue::integer(rep.curvature->n));
    cv.set("m", JsonValue::integer(rep.curvature->m));
    cv.set("verdict", JsonValue::string(to_string(rep.curvature->verdict)));
    verdict.set("curvature", std::move(cv));
  }
  if (!rep.notes.empty()) {
    JsonValue notes = JsonValue::array();
    for (const auto& n : rep.notes) notes.push(JsonValue::string(n));
    verdict.set("notes", std::move(notes));
  }
  out.set("verdict", std::move(verdict));
  return out;
}

std::string ground_state_csv(const GroundState& gs) {
  std::string out = "r,U,dU,residual\n";
  auto residuals = gs.ode_residuals();
  char buf[160];
  for (std::size_t i = 0; i < gs.grid_size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", gs.grid_r(i),
                  gs.u_values()[i], gs.du_values()[i], residuals[i]);
    out += buf;
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << content;
  if (!out) throw Error("failed writing output file: " + path);
}

}  // namespace peakcount
