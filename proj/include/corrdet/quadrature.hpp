#pragma once

#include <functional>

namespace corrdet {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`. Recursion is
/// split evenly between halves and capped at `max_depth`; the Richardson
/// correction (S2 - S1)/15 is applied on accepted panels.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol, int max_depth = 48);

}  // namespace corrdet
