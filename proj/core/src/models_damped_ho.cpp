#include <cmath>
#include <numbers>

#include "corrpic/models.hpp"

namespace corrpic {

namespace {

constexpr cplx kI{0.0, 1.0};

ComplexMatrix number_op(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t k = 0; k < n; ++k) m(k, k) = static_cast<double>(k);
  return m;
}

ComplexMatrix system_initial(const DampedHOParams& p, std::size_t levels) {
  ComplexVector psi(levels, 0.0);
  psi[0] = p.c0;
  psi[1] = p.c1;
  return ComplexMatrix::outer(psi, psi);
}

// Richardson-extrapolated principal value of int_0^inf f(w)/(w0 - w) dw.
double principal_value(const SpectralDensity& j, double w0, double eps, double split) {
  QuadratureOptions q;
  q.rel_tol = 1e-13;
  q.abs_tol = 1e-300;
  q.initial_panels = 256;
  const RealFunction f = [&](double w) { return j(w) / (w0 - w); };
  auto excluded = [&](double e) {
    double v = integrate(f, 0.0, w0 - e, q).value;
    v += integrate(f, w0 + e, split, q).value;
    v += integrate_to_infinity(f, split, 2.0 * split, q).value;
    return v;
  };
  // The window integral is odd in eps (2 eps J'(w0) + O(eps^3)): two elimination levels.
  const double d1 = excluded(eps), d2 = excluded(0.5 * eps), d4 = excluded(0.25 * eps);
  const double r1 = 2.0 * d2 - d1, r2 = 2.0 * d4 - d2;
  return (8.0 * r2 - r1) / 7.0;
}

// Flat state for the moment-form memory equations.
struct MomentLayout {
  std::size_t n;  // system levels
  std::size_t m;  // modes
  std::size_t rho() const { return 0; }
  std::size_t beta() const { return n * n; }
  std::size_t nmat() const { return beta() + m; }
  std::size_t pmat() const { return nmat() + m * m; }
  std::size_t fops() const { return pmat() + m * m; }
  std::size_t size() const { return fops() + m * n * n; }
};

// Small dense helpers on row-major n x n blocks.
void mat_mul(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a[i * n + k] * b[k * n + j];
      out[i * n + j] = s;
    }
}

}  // namespace

void DampedHOParams::validate() const {
  if (modes == 0) throw PreconditionError("damped_ho: modes must be at least 1");
  if (!(omega_c > 0.0) || !std::isfinite(omega0)) throw PreconditionError("damped_ho: need omega_c > 0, finite omega0");
  if (std::abs(std::norm(c0) + std::norm(c1) - 1.0) > 1e-12)
    throw PreconditionError("damped_ho: |c0|^2 + |c1|^2 must be 1");
  if (system_levels < 2) throw PreconditionError("damped_ho: system_levels must be at least 2");
  if (!omega_k.empty() && omega_k.size() != modes)
    throw PreconditionError("damped_ho: omega_k override must have one entry per mode");
  for (double w : omega_k)
    if (!(w >= 0.0)) throw PreconditionError("damped_ho: omega_k entries must be non-negative");
}

OscillatorBath damped_ho_bath(const DampedHOParams& p) {
  p.validate();
  const auto j = p.density();
  OscillatorBath bath;
  bath.omega.resize(p.modes);
  bath.g.resize(p.modes);
  for (std::size_t k = 0; k < p.modes; ++k) {
    bath.omega[k] = p.omega_k.empty() ? 0.1 * static_cast<double>(k + 1) : p.omega_k[k];
    bath.g[k] = p.coupling_scale * std::sqrt(j(bath.omega[k]));
    bath.coupling_sum += bath.g[k] * bath.g[k];
  }
  return bath;
}

ComplexMatrix damped_ho_sector_hamiltonian(const DampedHOParams& p) {
  const auto bath = damped_ho_bath(p);
  const std::size_t n = p.modes + 2;
  ComplexMatrix h(n, n);
  h(1, 1) = p.omega0;
  for (std::size_t k = 0; k < p.modes; ++k) {
    h(2 + k, 2 + k) = bath.omega[k];
    h(1, 2 + k) = bath.g[k];
    h(2 + k, 1) = bath.g[k];
  }
  return h;
}

Trajectory damped_ho_exact(const DampedHOParams& p, const TimeGrid& grid) {
  grid.validate();
  const auto eig = hermitian_eig(damped_ho_sector_hamiltonian(p));
  const auto& v = eig.vectors;
  const std::size_t n = eig.values.size();
  // w = V^dagger psi0 with psi0 = c0 |vac> + c1 |1, vac>.
  ComplexVector w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = std::conj(v(0, k)) * p.c0 + std::conj(v(1, k)) * p.c1;

  Trajectory traj;
  traj.grid = grid;
  const std::size_t levels = p.system_levels;
  for (std::size_t s = 0; s <= grid.steps; ++s) {
    const double t = grid.time(s) - grid.t0;
    cplx psi0 = 0.0, psi1 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const cplx c = w[k] * std::exp(cplx{0.0, -eig.values[k] * t});
      psi0 += v(0, k) * c;
      psi1 += v(1, k) * c;
    }
    ComplexMatrix rho(levels, levels);
    const double p1 = std::norm(psi1);
    rho(0, 0) = 1.0 - p1;
    rho(1, 1) = p1;
    rho(1, 0) = psi1 * std::conj(psi0);
    rho(0, 1) = std::conj(rho(1, 0));
    traj.states.push_back(std::move(rho));
  }
  traj.add_population("pop_1", 1);
  return traj;
}

double damped_ho_asymptotic(const DampedHOParams& p, bool* degenerate) {
  const auto h = damped_ho_sector_hamiltonian(p);
  ComplexVector psi(h.rows(), 0.0);
  psi[0] = p.c0;
  psi[1] = p.c1;
  const auto rho_star = dephase_in_eigenbasis(hermitian_eig(h), ComplexMatrix::outer(psi, psi), 1e-9, degenerate);
  return rho_star(1, 1).real();
}

OpenSystemModel damped_ho_fock_model(const DampedHOParams& p, std::size_t fock_cut) {
  const auto bath = damped_ho_bath(p);
  if (fock_cut < 2) throw PreconditionError("damped_ho: fock_cut must be at least 2");
  std::size_t d_b = 1;
  for (std::size_t k = 0; k < p.modes; ++k) {
    d_b *= fock_cut;
    if (d_b > 4096) throw DimensionError("damped_ho: truncated Fock bath too large");
  }
  const auto a = lowering(fock_cut);
  const auto id = ComplexMatrix::identity(fock_cut);

  // Mode k lowering operator on the full bath space.
  auto mode_op = [&](std::size_t k, const ComplexMatrix& op) {
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (std::size_t l = 0; l < p.modes; ++l) out = kron(out, l == k ? op : id);
    return out;
  };

  OpenSystemModel model;
  model.ham.h_s = number_op(fock_cut) * p.omega0;
  model.ham.h_b = ComplexMatrix(d_b, d_b);
  model.ham.h_i = ComplexMatrix(fock_cut * d_b, fock_cut * d_b);
  for (std::size_t k = 0; k < p.modes; ++k) {
    const auto bk = mode_op(k, a);
    model.ham.h_b += mode_op(k, number_op(fock_cut)) * bath.omega[k];
    model.ham.h_i += (kron(a.adjoint(), bk) + kron(a, bk.adjoint())) * bath.g[k];
  }
  model.rho_s0 = system_initial(p, fock_cut);
  model.rho_b0 = ComplexMatrix::unit(d_b, 0, 0);
  return model;
}

LindbladShift damped_ho_lindblad_coefficients(const DampedHOParams& p) {
  p.validate();
  const auto j = p.density();
  LindbladShift out;
  out.gamma = std::numbers::pi * j(p.omega0);
  const double eps = std::min(1e-2, 0.25 * p.omega0);
  if (!(eps > 0.0)) throw PreconditionError("damped_ho: lindblad shift needs omega0 > 0");
  out.delta = principal_value(j, p.omega0, eps, std::max(50.0 * p.omega_c, 2.0 * p.omega0));
  return out;
}

std::pair<double, double> damped_ho_tcl2_coefficients(const OscillatorBath& bath, double omega0, double tau) {
  double gamma = 0.0, kappa = 0.0;
  for (std::size_t k = 0; k < bath.g.size(); ++k) {
    const double d = omega0 - bath.omega[k];
    const double g2 = bath.g[k] * bath.g[k];
    if (std::abs(d * tau) < 1e-8) {
      gamma += g2 * tau;
      kappa += 0.5 * g2 * d * tau * tau;
      continue;
    }
    const double s = std::sin(0.5 * d * tau);
    gamma += g2 * std::sin(d * tau) / d;
    kappa += 2.0 * g2 * s * s / d;
  }
  return {gamma, kappa};
}

std::string to_string(DampedHOMethod m) {
  switch (m) {
    case DampedHOMethod::exact: return "exact";
    case DampedHOMethod::mll: return "mll";
    case DampedHOMethod::lindblad: return "lindblad";
    case DampedHOMethod::tcl2: return "tcl2";
    case DampedHOMethod::ull2: return "ull2";
    case DampedHOMethod::nz2: return "nz2";
    case DampedHOMethod::asymptotic: return "asymptotic";
  }
  return "?";
}

Trajectory damped_ho_memory_evolve(const DampedHOParams& p, const TimeGrid& grid, bool nz2, std::size_t substeps) {
  grid.validate();
  if (substeps == 0) throw PreconditionError("substeps must be positive");
  const auto bath = damped_ho_bath(p);
  const MomentLayout lay{p.system_levels, p.modes};
  const std::size_t n = lay.n, n2 = n * n, m = lay.m;
  const auto a = lowering(n);
  const auto ad = a.adjoint();
  const auto h_s = number_op(n) * p.omega0;
  const auto& w = bath.omega;
  const auto& g = bath.g;

  auto block = [n](const cplx* src) {
    ComplexMatrix out(n, n);
    std::copy(src, src + n * n, out.data());
    return out;
  };

  // Derivative of the flat state y into dy.
  auto deriv = [&](const std::vector<cplx>& y, std::vector<cplx>& dy) {
    const auto rho = block(y.data() + lay.rho());
    const cplx* beta = y.data() + lay.beta();
    const cplx* nm = y.data() + lay.nmat();
    const cplx* pm = y.data() + lay.pmat();
    const cplx* f = y.data() + lay.fops();

    const cplx ea = trace_product(rho, a);
    cplx s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += g[k] * beta[k];
    const ComplexMatrix mean_field = nz2 ? ComplexMatrix(n, n) : ad * s + a * std::conj(s);

    ComplexMatrix f_sum(n, n);
    std::vector<cplx> tr_ad_f(m), tr_a_fd(m), tr_a_f(m);
    for (std::size_t k = 0; k < m; ++k) {
      const cplx* fk = f + k * n2;
      cplx t1 = 0.0, t2 = 0.0, t3 = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const cplx fij = fk[i * n + j];
          f_sum(i, j) += g[k] * fij;
          t1 += ad(j, i) * fij;              // Tr(a^dag F)
          t2 += a(i, j) * std::conj(fij);    // Tr(a F^dag)
          t3 += a(j, i) * fij;               // Tr(a F)
        }
      tr_ad_f[k] = t1;
      tr_a_fd[k] = t2;
      tr_a_f[k] = t3;
    }

    auto drho = commutator(h_s + mean_field, rho) + commutator(ad, f_sum) + commutator(a, f_sum.adjoint());
    drho *= -kI;
    std::copy(drho.data(), drho.data() + n2, dy.data() + lay.rho());

    cplx* dbeta = dy.data() + lay.beta();
    cplx* dnm = dy.data() + lay.nmat();
    cplx* dpm = dy.data() + lay.pmat();
    if (nz2) {
      std::fill(dbeta, dbeta + m + 2 * m * m, cplx{0.0, 0.0});
    } else {
      for (std::size_t k = 0; k < m; ++k) dbeta[k] = -kI * (w[k] * beta[k] + g[k] * ea);
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < m; ++j) {
          dnm[k * m + j] = -kI * ((w[j] - w[k]) * nm[k * m + j] - g[k] * std::conj(ea) * beta[j] +
                                  g[j] * ea * std::conj(beta[k]) - g[k] * tr_ad_f[j] + g[j] * tr_a_fd[k]);
          dpm[k * m + j] = -kI * ((w[k] + w[j]) * pm[k * m + j] + ea * (g[j] * beta[k] + g[k] * beta[j]) +
                                  g[j] * tr_a_f[k] + g[k] * tr_a_f[j]);
        }
    }

    const auto c_ad = commutator(ad, rho);
    const auto c_a = commutator(a, rho);
    const auto a_rho = a * rho;
    const auto c_mf = commutator(mean_field, rho);
    std::vector<cplx> hf(n2), fh(n2);
    for (std::size_t k = 0; k < m; ++k) {
      const cplx* fk = f + k * n2;
      cplx* dfk = dy.data() + lay.fops() + k * n2;
      cplx p_k = 0.0, n_k = 0.0;
      if (!nz2)
        for (std::size_t l = 0; l < m; ++l) {
          p_k += g[l] * pm[k * m + l];
          n_k += g[l] * nm[l * m + k];
        }
      mat_mul(h_s.data(), fk, hf.data(), n);
      mat_mul(fk, h_s.data(), fh.data(), n);
      for (std::size_t e = 0; e < n2; ++e) {
        cplx src = g[k] * a_rho.data()[e];
        if (!nz2)
          src += p_k * c_ad.data()[e] + n_k * c_a.data()[e] - beta[k] * c_mf.data()[e] - g[k] * ea * rho.data()[e];
        dfk[e] = -kI * (hf[e] - fh[e] + w[k] * fk[e] + src);
      }
    }
  };

  std::vector<cplx> y(lay.size(), cplx{0.0, 0.0});
  const auto rho0 = system_initial(p, n);
  std::copy(rho0.data(), rho0.data() + n2, y.begin());

  Trajectory traj;
  traj.grid = grid;
  traj.states.push_back(rho0);
  const double h = grid.dt / static_cast<double>(substeps);
  std::vector<cplx> k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
  for (std::size_t step = 0; step < grid.steps; ++step) {
    for (std::size_t sub = 0; sub < substeps; ++sub) {
      deriv(y, k1);
      for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      deriv(tmp, k2);
      for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      deriv(tmp, k3);
      for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
      deriv(tmp, k4);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    auto rho = hermitize(block(y.data()));
    if (!rho.all_finite()) throw NumericError("damped_ho memory solver: non-finite state", step + 1);
    traj.states.push_back(std::move(rho));
  }
  traj.add_population("pop_1", 1);
  return traj;
}

Trajectory damped_ho_populations(const DampedHOParams& p, DampedHOMethod method, const TimeGrid& grid,
                                 const DampedHORunOptions& opts) {
  p.validate();
  grid.validate();
  const std::size_t n = p.system_levels;
  const auto a = lowering(n);
  const auto ad = a.adjoint();
  const auto num = number_op(n);
  const auto rho0 = system_initial(p, n);

  auto damping = [a, ad, num](const ComplexMatrix& rho) {
    return a * rho * ad * 2.0 - anticommutator(num, rho);
  };

  switch (method) {
    case DampedHOMethod::exact:
      return damped_ho_exact(p, grid);
    case DampedHOMethod::asymptotic: {
      const double value = damped_ho_asymptotic(p);
      Trajectory traj;
      traj.grid = grid;
      ComplexMatrix rho(n, n);
      rho(0, 0) = 1.0 - value;
      rho(1, 1) = value;
      traj.states.assign(grid.steps + 1, rho);
      traj.add_population("pop_1", 1);
      return traj;
    }
    case DampedHOMethod::mll: {
      const double big_g = damped_ho_bath(p).coupling_sum;
      MllSpec spec;
      spec.h_s = num * p.omega0;
      spec.ops = {a + ad, (a - ad) * kI};
      spec.cov = ComplexMatrix(2, 2, {1.0, -kI, kI, 1.0}) * (0.25 * big_g);
      spec.lamb0 = ComplexMatrix(n, n);
      spec.lamb1 = ComplexMatrix(n, n);
      auto traj = mll_evolve(spec, rho0, grid, opts.substeps);
      traj.add_population("pop_1", 1);
      return traj;
    }
    case DampedHOMethod::lindblad: {
      const auto c = damped_ho_lindblad_coefficients(p);
      const auto h = num * (p.omega0 + c.delta);
      const Rhs rhs = [=](double, const ComplexMatrix& rho) {
        return hermitize(commutator(h, rho) * (-kI) + damping(rho) * c.gamma);
      };
      auto traj = rk4_evolve(rhs, rho0, grid, opts.substeps);
      traj.add_population("pop_1", 1);
      return traj;
    }
    case DampedHOMethod::tcl2: {
      const auto bath = damped_ho_bath(p);
      const double t0 = grid.t0;
      const double w0 = p.omega0;
      const Rhs rhs = [=](double t, const ComplexMatrix& rho) {
        const auto [gamma, kappa] = damped_ho_tcl2_coefficients(bath, w0, t - t0);
        return hermitize(commutator(num * (w0 + kappa), rho) * (-kI) + damping(rho) * gamma);
      };
      auto traj = rk4_evolve(rhs, rho0, grid, opts.substeps);
      traj.add_population("pop_1", 1);
      return traj;
    }
    case DampedHOMethod::ull2:
      return damped_ho_memory_evolve(p, grid, false, opts.substeps);
    case DampedHOMethod::nz2:
      return damped_ho_memory_evolve(p, grid, true, opts.substeps);
  }
  throw PreconditionError("damped_ho: unknown method");
}

}  // namespace corrpic
