#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "peakcount/classify.hpp"

namespace peakcount {

/// Minimal ordered JSON value for report writing. Field order is insertion
/// order and every floating-point number is emitted with 17 significant
/// digits, so identical runs produce byte-identical reports.
class JsonValue {
public:
  static JsonValue object();
  static JsonValue array();
  static JsonValue number(double v);
  static JsonValue integer(long v);
  static JsonValue boolean(bool v);
  static JsonValue string(std::string v);
  static JsonValue null();

  JsonValue& set(const std::string& key, JsonValue v);  // object
  JsonValue& push(JsonValue v);                         // array

  std::string dump(int indent = 2) const;

private:
  enum class Kind { object_k, array_k, number_k, integer_k, bool_k, string_k, null_k };
  Kind kind_ = Kind::null_k;
  double num_ = 0.0;
  long int_ = 0;
  bool bool_ = false;
  std::string str_;
  std::vector<std::pair<std::string, JsonValue>> fields_;
  std::vector<JsonValue> items_;

  void dump_to(std::string& out, int indent, int depth) const;
};

JsonValue profile_json(const SparsePoly& q);
JsonValue moments_json(double p, int dim, const std::vector<double>& c,
                       const std::vector<double>& identity, double quad_tol);
JsonValue field_json(const ReducedField& field);
JsonValue zeros_json(const ZeroSet& zeros);

/// Full classification report with the stable field order
/// params, profile, moments, field, zeros, conditions, verdict.
JsonValue report_json(const ClassificationReport& rep);

/// Ground-state CSV with columns exactly r,U,dU,residual.
std::string ground_state_csv(const GroundState& gs);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace peakcount
