#include <cmath>
#include <numbers>

#include "corrpic/models.hpp"

namespace corrpic {

namespace {

constexpr cplx kI{0.0, 1.0};

// x / tanh(x)
double x_coth(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * x / 3.0;
  return x / std::tanh(x);
}

// sin(x)/x
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// {e^{-z} Ei(z), e^{z} E1(z)} for z > 0; asymptotic series once the exponentials overflow.
std::pair<double, double> exp_integral_pair(double z) {
  if (z < 40.0) return {std::exp(-z) * std::expint(z), -std::exp(z) * std::expint(-z)};
  double a = 0.0, b = 0.0, term = 1.0 / z;
  for (int k = 0; k < 60 && term > 1e-18 * a; ++k) {
    a += term;
    b += (k % 2 == 0 ? term : -term);
    term *= static_cast<double>(k + 1) / z;
  }
  return {a, b};
}

QuadratureOptions spectral_quadrature(const SpectralIntegralOptions& opts, double split, double tau) {
  QuadratureOptions q;
  q.rel_tol = opts.rel_tol;
  q.abs_tol = 1e-300;
  q.max_depth = 30;
  q.initial_panels = 64 + static_cast<std::size_t>(std::ceil(2.0 * split * std::abs(tau) / std::numbers::pi));
  return q;
}

QuadratureResult spectral_integral(const DephasingParams& p, const RealFunction& f, double tau,
                                   const SpectralIntegralOptions& opts) {
  const double split = opts.split_factor * p.omega_c;
  auto r = integrate_to_infinity(f, 0.0, split, spectral_quadrature(opts, split, tau));
  if (!std::isfinite(r.value)) throw NumericError("spectral integral is not finite");
  return r;
}

ComplexMatrix sx() { return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }
ComplexMatrix sz() { return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }
ComplexMatrix sp() { return ComplexMatrix::unit(2, 0, 1); }
ComplexMatrix sm() { return ComplexMatrix::unit(2, 1, 0); }

ComplexMatrix initial_state(const DephasingParams& p) {
  ComplexMatrix rho(2, 2);
  rho(0, 0) = p.rho_ee0;
  rho(1, 1) = 1.0 - p.rho_ee0;
  return rho;
}

void require_resonance_free(const DephasingParams& p, DephasingMethod m) {
  if (p.omega0 != 0.0)
    throw PreconditionError("dephasing: method '" + to_string(m) + "' is implemented for omega0 = 0 only");
}

// RK4 on the grid with a kernel tabulated at every stage time (multiples of h/2).
Trajectory kernel_evolve(const DephasingParams& p, const TimeGrid& grid, std::size_t substeps, bool subtract_mean,
                         const SpectralIntegralOptions& sopts) {
  grid.validate();
  if (substeps == 0) throw PreconditionError("substeps must be positive");
  const double h = grid.dt / static_cast<double>(substeps);
  const std::size_t nodes = 2 * grid.steps * substeps + 1;
  std::vector<cplx> kernel(nodes);
  for (std::size_t j = 0; j < nodes; ++j) kernel[j] = dephasing_kernel(p, 0.5 * h * static_cast<double>(j), sopts);

  const auto x = sx();
  auto rhs = [&](std::size_t node, const ComplexMatrix& rho) {
    auto y = x;
    if (subtract_mean) y -= ComplexMatrix::identity(2) * trace_product(x, rho).real();
    const cplx k = kernel[node];
    auto out = (x * y * rho - y * rho * x) * k + (rho * y * x - x * rho * y) * std::conj(k);
    return hermitize(out * -1.0);
  };

  Trajectory traj;
  traj.grid = grid;
  auto rho = initial_state(p);
  traj.states.push_back(rho);
  for (std::size_t k = 0; k < grid.steps; ++k) {
    for (std::size_t s = 0; s < substeps; ++s) {
      const std::size_t n0 = 2 * (k * substeps + s);
      const auto k1 = rhs(n0, rho);
      const auto k2 = rhs(n0 + 1, rho + k1 * (0.5 * h));
      const auto k3 = rhs(n0 + 1, rho + k2 * (0.5 * h));
      const auto k4 = rhs(n0 + 2, rho + k3 * h);
      rho.add_scaled(k1 + k2 * 2.0 + k3 * 2.0 + k4, h / 6.0);
    }
    if (!rho.all_finite()) throw NumericError("dephasing: non-finite state", k + 1);
    traj.states.push_back(rho);
  }
  return traj;
}

}  // namespace

double SpectralDensity::over_omega(double w) const {
  switch (kind) {
    case SpectralKind::ohmic_lorentz_sq: {
      const double q = 1.0 + (w / omega_c) * (w / omega_c);
      return eta / (q * q);
    }
    case SpectralKind::ohmic_exp:
      return eta * std::exp(-w / omega_c) / std::numbers::pi;
  }
  return 0.0;
}

double SpectralDensity::operator()(double w) const { return w * over_omega(w); }

double bose(double beta, double w) { return 1.0 / std::expm1(beta * w); }

double j_coth(const SpectralDensity& j, double beta, double w) {
  return j.over_omega(w) * (2.0 / beta) * x_coth(0.5 * beta * w);
}

void DephasingParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw PreconditionError("dephasing: beta must be positive");
  if (!(eta >= 0.0) || !(omega_c > 0.0)) throw PreconditionError("dephasing: need eta >= 0 and omega_c > 0");
  if (!std::isfinite(omega0)) throw PreconditionError("dephasing: omega0 must be finite");
  if (rho_ee0 < 0.0 || rho_ee0 > 1.0) throw PreconditionError("dephasing: rho_ee0 must lie in [0, 1]");
}

double dephasing_cov(const DephasingParams& p, const SpectralIntegralOptions& opts) {
  p.validate();
  if (p.eta == 0.0) return 0.0;
  const auto j = p.density();
  return spectral_integral(p, [&](double w) { return j_coth(j, p.beta, w); }, 0.0, opts).value;
}

double dephasing_phi(const DephasingParams& p, double tau, const SpectralIntegralOptions& opts) {
  p.validate();
  if (p.eta == 0.0 || tau == 0.0) return 0.0;
  const auto j = p.density();
  // sin^2(w tau/2)/w^2 = (tau/2)^2 sinc^2(w tau/2)
  const auto f = [&](double w) {
    const double s = 0.5 * tau * sinc(0.5 * w * tau);
    return 8.0 * j_coth(j, p.beta, w) * s * s;
  };
  return spectral_integral(p, f, tau, opts).value;
}

std::complex<double> dephasing_kernel(const DephasingParams& p, double tau, const SpectralIntegralOptions& opts) {
  p.validate();
  if (p.eta == 0.0 || tau == 0.0) return 0.0;
  const double c = p.omega_c;
  const double z = c * tau;
  // Im K = -int J (1 - cos w tau)/w dw, elementary for the Lorentzian-squared cutoff.
  const double im = -p.eta * 0.25 * std::numbers::pi * c * (1.0 - (1.0 + z) * std::exp(-z));
  // Re K = int J coth(beta w/2) sin(w tau)/w dw. The vacuum part (coth -> 1) reduces to
  // exponential integrals via A = e^{-z} Ei(z), B = e^{z} E1(z).
  const auto [a, b] = exp_integral_pair(z);
  const double vacuum = 0.25 * p.eta * c * (a + b + z * (a - b));
  // Thermal part 2 n(w) J sin(w tau)/w decays like e^{-beta w}.
  const auto j = p.density();
  const auto thermal = [&](double w) {
    if (w == 0.0) return 2.0 * p.eta * tau / p.beta;
    return 2.0 * j.over_omega(w) * std::sin(w * tau) / std::expm1(p.beta * w);
  };
  const double upper = std::min(45.0 / p.beta, opts.split_factor * c);
  auto q = spectral_quadrature(opts, upper, tau);
  q.abs_tol = 1e-16 * std::abs(vacuum);
  const auto r = integrate(thermal, 0.0, upper, q);
  if (!std::isfinite(r.value)) throw NumericError("dephasing kernel is not finite");
  return {vacuum + r.value, im};
}

double redfield_spectrum(const DephasingParams& p, double w) {
  const auto j = p.density();
  if (w == 0.0) return 2.0 * p.eta / p.beta;
  const double aw = std::abs(w);
  const double n = bose(p.beta, aw);
  return w > 0.0 ? 2.0 * (n + 1.0) * j(aw) : 2.0 * n * j(aw);
}

std::string to_string(DephasingMethod m) {
  switch (m) {
    case DephasingMethod::exact: return "exact";
    case DephasingMethod::mll: return "mll";
    case DephasingMethod::tcl2: return "tcl2";
    case DephasingMethod::tl_ull2: return "tl_ull2";
    case DephasingMethod::redfield: return "redfield";
  }
  return "?";
}

double dephasing_mll_closed_form(const DephasingParams& p, double cov, double tau) {
  return 0.5 + (p.rho_ee0 - 0.5) * std::exp(-2.0 * cov * tau * tau);
}

double dephasing_redfield_closed_form(const DephasingParams& p, double tau) {
  return 0.5 + (p.rho_ee0 - 0.5) * std::exp(-4.0 * (p.eta / p.beta) * tau);
}

double dephasing_exact_depletion(const DephasingParams& p, double tau, const SpectralIntegralOptions& opts) {
  const double phi = dephasing_phi(p, tau, opts);
  return (1.0 - p.rho_ee0) - (p.rho_ee0 - 0.5) * std::expm1(-phi);
}

Trajectory dephasing_populations(const DephasingParams& p, DephasingMethod method, const TimeGrid& grid,
                                 const DephasingRunOptions& opts) {
  p.validate();
  grid.validate();
  Trajectory traj;
  switch (method) {
    case DephasingMethod::exact: {
      require_resonance_free(p, method);
      traj.grid = grid;
      for (std::size_t k = 0; k <= grid.steps; ++k) {
        const double ee = 1.0 - dephasing_exact_depletion(p, grid.time(k) - grid.t0, opts.spectral);
        traj.states.push_back(ComplexMatrix(2, 2, {ee, 0.0, 0.0, 1.0 - ee}));
      }
      break;
    }
    case DephasingMethod::mll: {
      const double cov = dephasing_cov(p, opts.spectral);
      if (p.omega0 == 0.0) {
        // All generators commute: the sigma_x-odd part decays as e^{-2 Cov t^2}.
        const auto x = sx();
        const auto rho0 = initial_state(p);
        const auto even = (rho0 + x * rho0 * x) * 0.5;
        const auto odd = (rho0 - x * rho0 * x) * 0.5;
        traj.grid = grid;
        for (std::size_t k = 0; k <= grid.steps; ++k) {
          const double t = grid.time(k) - grid.t0;
          traj.states.push_back(even + odd * std::exp(-2.0 * cov * t * t));
        }
        break;
      }
      MllSpec spec;
      spec.h_s = sz() * (0.5 * p.omega0);
      spec.ops = {sx()};
      spec.cov = ComplexMatrix(1, 1, {cov});
      spec.lamb0 = ComplexMatrix(2, 2);
      spec.lamb1 = ComplexMatrix(2, 2);
      traj = mll_evolve(spec, initial_state(p), grid, opts.substeps);
      break;
    }
    case DephasingMethod::tcl2:
    case DephasingMethod::tl_ull2:
      require_resonance_free(p, method);
      traj = kernel_evolve(p, grid, opts.substeps, method == DephasingMethod::tl_ull2, opts.spectral);
      break;
    case DephasingMethod::redfield: {
      const double s_plus = redfield_spectrum(p, p.omega0);
      const double s_minus = redfield_spectrum(p, -p.omega0);
      const auto h_s = sz() * (0.5 * p.omega0);
      const auto up = sp(), dn = sm();
      const auto n_up = up * dn, n_dn = dn * up;  // sigma+ sigma-, sigma- sigma+
      const Rhs rhs = [=](double, const ComplexMatrix& rho) {
        auto out = commutator(h_s, rho) * (-kI);
        ComplexMatrix d = (up * rho * up + dn * rho * dn) * (s_minus + s_plus);
        d += up * rho * dn * (2.0 * s_minus) - anticommutator(rho, n_dn) * s_minus;
        d += dn * rho * up * (2.0 * s_plus) - anticommutator(rho, n_up) * s_plus;
        out += d * 0.5;
        return hermitize(out);
      };
      traj = rk4_evolve(rhs, initial_state(p), grid, opts.substeps);
      break;
    }
  }
  traj.add_population("pop_e", 0);
  return traj;
}

}  // namespace corrpic
