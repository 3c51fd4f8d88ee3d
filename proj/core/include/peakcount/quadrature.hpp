#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace peakcount {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  std::size_t evaluations = 0;
};

/// Single Gauss(7)/Kronrod(15) panel on [a, b]. Returns the Kronrod value,
/// with the usual QUADPACK-style error estimate.
QuadResult gk15(const std::function<double(double)>& f, double a, double b);

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  std::size_t max_panels = 4000;
  // Initial panel breakpoints; if empty, [a, b] is split uniformly.
  std::vector<double> breakpoints;
  std::size_t initial_panels = 32;
};

/// Adaptive bisection on Gauss-Kronrod panels. Refines the worst panel until
/// the summed error estimate meets max(abs_tol, rel_tol * |I|). Throws
/// QuadratureFailure if the budget is exhausted first.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, const AdaptiveOptions& opts = {});

/// Fixed-order composite Gauss-Legendre rule (n-point per panel), used by
/// test oracles and the tensor-product field oracle.
double gauss_legendre_panels(const std::function<double(double)>& f, double a,
                             double b, std::size_t panels, int order);

/// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1]
/// (n in {8, 12, 16, 20}, precomputed by Newton iteration on Legendre P_n).
void gauss_legendre_rule(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace peakcount
