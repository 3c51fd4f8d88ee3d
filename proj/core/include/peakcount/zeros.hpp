#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peakcount/reduction.hpp"

namespace peakcount {

enum class ZeroClass {
  nondegenerate_stable,
  degenerate_stable,
  degenerate_unstable,
  indeterminate,
};

const char* to_string(ZeroClass c);

struct ZeroRecord {
  std::vector<double> location;
  double residual = 0.0;                       // |L(xi0)|
  std::vector<std::vector<double>> jacobian;
  double det = 0.0;
  ZeroClass classification = ZeroClass::indeterminate;
  std::optional<int> local_degree;

  bool stable() const {
    return classification == ZeroClass::nondegenerate_stable ||
           classification == ZeroClass::degenerate_stable;
  }
};

struct ZeroSet {
  std::vector<ZeroRecord> zeros;           // deduplicated, sorted by location
  double search_box = 0.0;
  int grid_per_axis = 0;
  std::string completeness;                // "complete" or "heuristic"
  double certified_radius = -1.0;          // bound on |zeros| when certified
  double min_norm_on_grid = 0.0;           // min |L| over the start grid
  bool field_identically_zero = false;

  std::size_t stable_count() const {
    std::size_t n = 0;
    for (const auto& z : zeros)
      if (z.stable()) ++n;
    return n;
  }
  bool any_indeterminate() const {
    for (const auto& z : zeros)
      if (z.classification == ZeroClass::indeterminate) return true;
    return false;
  }
};

struct ZeroFindOptions {
  double box_radius = 0.0;   // <= 0: automatic (moment-ratio default, extended
                             // to the certified bound when one exists)
  int grid_per_axis = 32;
  double zero_tol_rel = 1e-9;   // residual tolerance relative to field scale
  double dedup_tol_rel = 1e-6;  // relative to box radius
  double det_tol = 1e-8;        // nondegeneracy threshold on |det|/scale^d
  int max_newton_iterations = 60;
  int winding_samples = 512;
};

/// Multistart Newton search over a centered box, with deduplication and
/// classification of every zero found. Independent starts run concurrently.
ZeroSet find_zeros(const ReducedField& field, const ZeroFindOptions& opts = {});

/// Classification of a single zero: nondegenerate (det above threshold)
/// implies stable; otherwise the local Brouwer degree decides (sign change
/// in d = 1, winding number on a small circle in d = 2). Throws NotAZero
/// when the residual is above tolerance.
ZeroRecord classify_zero(const ReducedField& field, std::span<const double> xi,
                         const ZeroFindOptions& opts = {});

/// Winding number of the field along the circle of given radius (d = 2).
int winding_number(const ReducedField& field, std::span<const double> center,
                   double radius, int samples = 512);

/// Winding number along the boundary of the centered box (d = 2); equals the
/// sum of local degrees when every zero lies inside.
int boundary_winding_number(const ReducedField& field, double box_radius,
                            int samples_per_edge = 2048);

}  // namespace peakcount
