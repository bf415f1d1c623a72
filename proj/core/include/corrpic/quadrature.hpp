#pragma once

#include <cstddef>
#include <functional>

namespace corrpic {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_depth = 40;
  /// Panels laid down before refinement; raise for oscillatory integrands.
  std::size_t initial_panels = 64;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

using RealFunction = std::function<double(double)>;

/// Adaptive Simpson with Richardson correction over [a, b].
QuadratureResult integrate(const RealFunction& f, double a, double b, const QuadratureOptions& opts = {});

/**
 * Integral over [a, inf) split at `split`: [a, split] directly and the tail
 * through w = split / x on x in (0, 1]. f must decay faster than 1/w.
 */
QuadratureResult integrate_to_infinity(const RealFunction& f, double a, double split,
                                       const QuadratureOptions& opts = {});

}  // namespace corrpic
