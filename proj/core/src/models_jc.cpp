#include <cmath>

#include "corrpic/models.hpp"

namespace corrpic {

namespace {

constexpr cplx kI{0.0, 1.0};

ComplexMatrix sigma_plus() { return ComplexMatrix::unit(2, 0, 1); }
ComplexMatrix sigma_minus() { return ComplexMatrix::unit(2, 1, 0); }
ComplexMatrix sigma_z() {
  const double d[] = {1.0, -1.0};
  return ComplexMatrix::diagonal(std::span<const double>(d));
}

// Rate of the jump operator closest (normalized HS overlap) to `target`.
double rate_along(const ULLGenerator& gen, const ComplexMatrix& target) {
  double best = -1.0, rate = 0.0;
  const double tn = target.frobenius_norm();
  for (std::size_t m = 0; m < gen.jumps.size(); ++m) {
    const double ln = gen.jumps[m].frobenius_norm();
    if (ln == 0.0) continue;
    const double overlap = std::abs(hs_inner(target, gen.jumps[m])) / (tn * ln);
    if (overlap > best) {
      best = overlap;
      rate = gen.rates[m] * ln * ln / (tn * tn);
    }
  }
  return rate;
}

}  // namespace

ComplexMatrix lowering(std::size_t n) {
  ComplexMatrix a(n, n);
  for (std::size_t k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

void JCParams::validate() const {
  if (std::abs(r1 * r1 + r2 * r2 - 1.0) > 1e-12) throw PreconditionError("jaynes_cummings: r1^2 + r2^2 must be 1");
  if (fock_cut < 2) throw PreconditionError("jaynes_cummings: fock_cut must be at least 2");
  if (!std::isfinite(lambda) || !std::isfinite(omega0)) throw PreconditionError("jaynes_cummings: non-finite parameter");
}

BipartiteHamiltonian jc_hamiltonian(const JCParams& p) {
  p.validate();
  const auto a = lowering(p.fock_cut);
  ComplexMatrix n_op(p.fock_cut, p.fock_cut);
  for (std::size_t k = 0; k < p.fock_cut; ++k) n_op(k, k) = static_cast<double>(k);
  BipartiteHamiltonian h;
  h.h_s = sigma_z() * (0.5 * p.omega0);
  h.h_b = n_op * p.omega0;
  h.h_i = (kron(sigma_plus(), a) + kron(sigma_minus(), a.adjoint())) * p.lambda;
  return h;
}

JCExact jc_exact(const JCParams& p, double tau) {
  p.validate();
  const std::size_t nb = p.fock_cut;
  const double lt = p.lambda * tau;
  const cplx phase = std::exp(cplx{0.0, -0.5 * p.omega0 * tau});
  JCExact out;
  out.psi.assign(2 * nb, 0.0);
  out.psi[0 * nb + 0] = phase * cplx{p.r1 * std::cos(lt), -p.r2 * std::sin(lt)};
  out.psi[1 * nb + 1] = phase * cplx{p.r2 * std::cos(lt), -p.r1 * std::sin(lt)};
  out.state = JointState{ComplexMatrix::outer(out.psi, out.psi), BipartiteDims{2, nb}};
  out.dec = decompose(out.state);
  return out;
}

JointState jc_initial_state(const JCParams& p) { return jc_exact(p, 0.0).state; }

JCAlphas jc_alphas(const JCParams& p, double tau) {
  const double c = 1.0 - 2.0 * p.r1 * p.r1;
  return {c * std::cos(2.0 * p.lambda * tau), c * std::sin(2.0 * p.lambda * tau)};
}

ComplexMatrix jc_chi_closed_form(const JCParams& p, double tau) {
  const auto [a1, a2] = jc_alphas(p, tau);
  const double r1 = p.r1, r2 = p.r2;
  auto k = [](std::size_t s, std::size_t n) { return 2 * s + n; };
  ComplexMatrix chi(4, 4);
  const double d1 = (1.0 + 4.0 * r1 * r1 - 4.0 * r1 * r1 * r1 * r1 - a1 * a1 + a2 * a2) / 8.0;
  const double d2 = (a1 * a1 - 1.0) / 4.0;
  chi(k(0, 0), k(0, 0)) = d1;
  chi(k(1, 1), k(1, 1)) = d1;
  chi(k(0, 1), k(0, 1)) = d2;
  chi(k(1, 0), k(1, 0)) = d2;
  chi(k(0, 0), k(1, 1)) = cplx{r1 * r2, -0.5 * a2};
  chi(k(1, 1), k(0, 0)) = cplx{r1 * r2, 0.5 * a2};
  return chi;
}

std::array<ComplexMatrix, 4> jc_bath_parent_closed_form(const JCParams& p, double tau) {
  const auto [a1, a2] = jc_alphas(p, tau);
  const double rr = p.r1 * p.r2;
  const double s2 = std::sqrt(2.0);
  const double up = 1.0 + a1, um = 1.0 - a1;
  std::array<ComplexMatrix, 4> b{ComplexMatrix(2, 2), ComplexMatrix(2, 2), ComplexMatrix(2, 2), ComplexMatrix(2, 2)};
  b[0](0, 0) = kI * a1 / (s2 * um);
  b[0](1, 1) = -kI * a1 / (s2 * up);
  b[1](0, 1) = cplx{a2, 2.0 * rr} / (s2 * up * up);
  b[1](1, 0) = cplx{-a2, 2.0 * rr} / (s2 * um * um);
  b[2](0, 1) = cplx{-2.0 * rr, a2} / (s2 * up * up);
  b[2](1, 0) = cplx{2.0 * rr, a2} / (s2 * um * um);
  b[3](0, 0) = kI / (s2 * um);
  b[3](1, 1) = -kI / (s2 * up);
  return b;
}

JCCoefficients jc_ull_coefficients(const JCParams& p, double tau) {
  const auto [a1, a2] = jc_alphas(p, tau);
  JCCoefficients c;
  c.near_pole = std::abs(1.0 - a1) < 1e-10 || std::abs(1.0 + a1) < 1e-10;
  if (c.near_pole) return c;
  const double rr = p.r1 * p.r2;
  c.gamma1 = -p.lambda * a2 / (2.0 * (1.0 - a1));
  c.gamma2 = p.lambda * a2 / (2.0 * (1.0 + a1));
  c.omega_tilde =
      4.0 * p.lambda * rr * a1 / (1.0 + 4.0 * p.r1 * p.r1 - 4.0 * std::pow(p.r1, 4) - (a1 * a1 - a2 * a2));
  c.identity_shift = -rr * p.lambda / (a1 * a1 - 1.0);
  return c;
}

JCCoefficients jc_pipeline_coefficients(const JCParams& p, double tau) {
  const auto ham = jc_hamiltonian(p);
  const auto built = build_ull(ham, jc_exact(p, tau).state, build_basis(2));
  const auto h_l = built.gen.h_eff - ham.h_s;
  JCCoefficients c;
  const double a1 = jc_alphas(p, tau).a1;
  c.near_pole = std::abs(1.0 - a1) < 1e-10 || std::abs(1.0 + a1) < 1e-10;
  c.gamma1 = rate_along(built.gen, sigma_minus());
  c.gamma2 = rate_along(built.gen, sigma_plus());
  c.omega_tilde = 0.5 * trace_product(sigma_z(), h_l).real();
  c.identity_shift = 0.5 * h_l.trace().real();
  return c;
}

std::string to_string(JCMethod m) {
  switch (m) {
    case JCMethod::exact: return "exact";
    case JCMethod::ull: return "ull";
    case JCMethod::mll: return "mll";
    case JCMethod::ull2: return "ull2";
    case JCMethod::nz2: return "nz2";
    case JCMethod::tl_ull2: return "tl_ull2";
    case JCMethod::tcl2: return "tcl2";
  }
  return "?";
}

OpenSystemModel jc_product_model(const JCParams& p) {
  if (std::abs(p.r2) > 1e-12) throw PreconditionError("jaynes_cummings: approximate methods need r1 = 1 (product state)");
  const auto dec = jc_exact(p, 0.0).dec;
  return OpenSystemModel{jc_hamiltonian(p), dec.rho_s, dec.rho_b};
}

Trajectory jc_populations(const JCParams& p, JCMethod method, const TimeGrid& grid, std::size_t substeps) {
  grid.validate();
  Trajectory traj;
  switch (method) {
    case JCMethod::exact:
      traj = exact_evolve(jc_hamiltonian(p).joint(), jc_initial_state(p), grid);
      break;
    case JCMethod::ull: {
      // Exact generator rebuilt from the closed-form joint state at every stage time.
      const auto ham = jc_hamiltonian(p);
      const auto basis = build_basis(2);
      const double t0 = grid.t0;
      const Rhs rhs = [&](double t, const ComplexMatrix& rho) {
        return ull_rhs(rho, build_ull(ham, jc_exact(p, t - t0).state, basis).gen);
      };
      traj = rk4_evolve(rhs, jc_exact(p, 0.0).dec.rho_s, grid, substeps);
      break;
    }
    case JCMethod::mll: {
      const auto model = jc_product_model(p);
      traj = mll_evolve(model_mll_spec(model), model.rho_s0, grid, substeps);
      break;
    }
    case JCMethod::ull2:
      traj = ull2_evolve(jc_product_model(p), grid).system;
      break;
    case JCMethod::nz2:
      traj = nz2_evolve(jc_product_model(p), grid).system;
      break;
    case JCMethod::tl_ull2:
      traj = tl_ull2_evolve(jc_product_model(p), grid, substeps);
      break;
    case JCMethod::tcl2:
      traj = tcl2_evolve(jc_product_model(p), grid, substeps);
      break;
  }
  traj.add_population("pop_e", 0);
  return traj;
}

}  // namespace corrpic
