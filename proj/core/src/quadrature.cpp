#include "corrpic/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "corrpic/errors.hpp"

namespace corrpic {

namespace {

struct Simpson {
  const RealFunction& f;
  std::size_t max_depth;
  std::size_t evaluations = 0;
  bool converged = true;
  double error = 0.0;

  double eval(double x) {
    ++evaluations;
    const double y = f(x);
    if (!std::isfinite(y)) throw NumericError("integrate: non-finite integrand");
    return y;
  }

  double refine(double a, double b, double fa, double fm, double fb, double whole, double eps,
                std::size_t depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = eval(lm), frm = eval(rm);
    const double h = (b - a) / 12.0;
    const double left = h * (fa + 4.0 * flm + fm);
    const double right = h * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * eps || depth >= max_depth) {
      if (depth >= max_depth && std::abs(diff) > 15.0 * eps) converged = false;
      error += std::abs(diff) / 15.0;
      return left + right + diff / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
  }
};

}  // namespace

QuadratureResult integrate(const RealFunction& f, double a, double b, const QuadratureOptions& opts) {
  QuadratureResult out;
  if (a == b) return out;
  const std::size_t n = std::max<std::size_t>(1, opts.initial_panels);
  const double h = (b - a) / static_cast<double>(n);
  Simpson s{f, opts.max_depth};

  std::vector<double> fx(2 * n + 1);
  for (std::size_t k = 0; k <= 2 * n; ++k) fx[k] = s.eval(a + 0.5 * h * static_cast<double>(k));
  std::vector<double> coarse(n);
  double total = 0.0, magnitude = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    coarse[p] = h / 6.0 * (fx[2 * p] + 4.0 * fx[2 * p + 1] + fx[2 * p + 2]);
    total += coarse[p];
    magnitude += h / 6.0 * (std::abs(fx[2 * p]) + 4.0 * std::abs(fx[2 * p + 1]) + std::abs(fx[2 * p + 2]));
  }
  // Tolerance against the absolute integral so cancelling integrands do not over-refine.
  const double tol = std::max(opts.abs_tol, opts.rel_tol * std::max(std::abs(total), 1e-3 * magnitude));
  const double panel_eps = tol / static_cast<double>(n);

  double value = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const double pa = a + h * static_cast<double>(p);
    value += s.refine(pa, pa + h, fx[2 * p], fx[2 * p + 1], fx[2 * p + 2], coarse[p], panel_eps, 0);
  }
  out.value = value;
  out.error = s.error;
  out.evaluations = s.evaluations;
  out.converged = s.converged;
  return out;
}

QuadratureResult integrate_to_infinity(const RealFunction& f, double a, double split,
                                       const QuadratureOptions& opts) {
  if (!(split > a) || split <= 0.0) throw PreconditionError("integrate_to_infinity: need split > max(a, 0)");
  auto head = integrate(f, a, split, opts);
  const RealFunction tail_integrand = [&f, split](double x) {
    if (x <= 0.0) return 0.0;
    return f(split / x) * split / (x * x);
  };
  QuadratureOptions tail_opts = opts;
  tail_opts.abs_tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(head.value));
  const auto tail = integrate(tail_integrand, 0.0, 1.0, tail_opts);
  head.value += tail.value;
  head.error += tail.error;
  head.evaluations += tail.evaluations;
  head.converged = head.converged && tail.converged;
  return head;
}

}  // namespace corrpic
