#pragma once

#include <cstddef>
#include <functional>

namespace dpmk {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_evaluations = 1'000'000;
  int initial_subdivisions = 1;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

/// Global adaptive Gauss-Kronrod (7/15) on a finite interval.
/// Throws NumericError when the budget runs out before the tolerance is met.
QuadratureResult integrate(const std::function<double(double)>& f, double lo, double hi,
                           const QuadratureOptions& opts = {});

struct LogQuadratureResult {
  double log_value = 0.0;
  double rel_error = 0.0;
  std::size_t evaluations = 0;
};

/// log int_lo^hi exp(log_f(u)) du for a unimodal log_f (e.g. log-concave).
///
/// The mode is located by golden-section search, both flanks are trimmed
/// where log_f falls 80 nats below the mode, and each flank is integrated
/// after shifting by the mode value.
LogQuadratureResult log_integrate_unimodal(const std::function<double(double)>& log_f, double lo,
                                           double hi, const QuadratureOptions& opts = {});

/// log int_lo^hi exp(log_f(u)) du with no shape assumption: a grid scan
/// locates the shift and seeds the subdivision.
LogQuadratureResult log_integrate(const std::function<double(double)>& log_f, double lo, double hi,
                                  const QuadratureOptions& opts = {}, int scan_points = 256);

}  // namespace dpmk
