#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "corrpic/correlation.hpp"
#include "corrpic/quadrature.hpp"
#include "corrpic/solvers.hpp"
#include "corrpic/ull.hpp"

namespace corrpic {

// ---------------------------------------------------------------------------
// Spectral densities
// ---------------------------------------------------------------------------

enum class SpectralKind { ohmic_lorentz_sq, ohmic_exp };

/**
 * ohmic_lorentz_sq: J(w) = eta w (1 + w^2/wc^2)^-2
 * ohmic_exp:        J(w) = eta (w/pi) e^{-w/wc}   (eta = 1 for the oscillator bath)
 */
struct SpectralDensity {
  SpectralKind kind = SpectralKind::ohmic_lorentz_sq;
  double eta = 1.0;
  double omega_c = 1.0;

  double operator()(double w) const;
  /// J(w)/w, finite at w = 0.
  double over_omega(double w) const;
};

/// Bose occupation 1/(e^{beta w} - 1).
double bose(double beta, double w);
/// J(w) coth(beta w / 2) = J(w)(2n+1), with its finite limit at w = 0.
double j_coth(const SpectralDensity& j, double beta, double w);

// ---------------------------------------------------------------------------
// Jaynes-Cummings with an initially correlated pure state
// ---------------------------------------------------------------------------

/// |psi(0)> = r1 |e,0> + r2 |g,1>; system index 0 = e, 1 = g.
struct JCParams {
  double r1 = 1.0 / 1.4142135623730951;
  double r2 = 1.0 / 1.4142135623730951;
  double lambda = 1.0;
  double omega0 = 1.0;
  std::size_t fock_cut = 2;

  void validate() const;
};

/// H_S = w0 sz/2, H_B = w0 a^dag a, H_I = lambda (s+ (x) a + s- (x) a^dag).
BipartiteHamiltonian jc_hamiltonian(const JCParams& p);
JointState jc_initial_state(const JCParams& p);

struct JCExact {
  ComplexVector psi;
  JointState state;
  CorrelationDecomposition dec;
};

/// Closed-form state at time tau on the truncated space, with its decomposition.
JCExact jc_exact(const JCParams& p, double tau);

struct JCAlphas {
  double a1 = 0.0;
  double a2 = 0.0;
};
/// a1 = (1 - 2 r1^2) cos(2 lambda tau), a2 = (1 - 2 r1^2) sin(2 lambda tau)
JCAlphas jc_alphas(const JCParams& p, double tau);

/// Displayed closed form of chi(tau) on the {0,1} Fock sector (4x4).
ComplexMatrix jc_chi_closed_form(const JCParams& p, double tau);
/// Displayed closed forms of B_0^chi..B_3^chi on the {0,1} Fock sector.
std::array<ComplexMatrix, 4> jc_bath_parent_closed_form(const JCParams& p, double tau);

struct JCCoefficients {
  double gamma1 = 0.0;       ///< rate of the sigma_- jump
  double gamma2 = 0.0;       ///< rate of the sigma_+ jump
  double omega_tilde = 0.0;  ///< sigma_z coefficient of the Lamb-shift-like term
  double identity_shift = 0.0;
  bool near_pole = false;
};

/// Displayed closed forms; near_pole when |1 -+ a1| < 1e-10.
JCCoefficients jc_ull_coefficients(const JCParams& p, double tau);
/// The same quantities extracted from the generator built from jc_exact's state.
JCCoefficients jc_pipeline_coefficients(const JCParams& p, double tau);

/// ull integrates the exact generator; the others approximate it from a product state.
enum class JCMethod { exact, ull, mll, ull2, nz2, tl_ull2, tcl2 };
std::string to_string(JCMethod m);

/// Dense model for the approximate methods; requires r1 = 1.
OpenSystemModel jc_product_model(const JCParams& p);
/// Trajectory with observable "pop_e".
Trajectory jc_populations(const JCParams& p, JCMethod method, const TimeGrid& grid, std::size_t substeps = 1);

// ---------------------------------------------------------------------------
// Dephasing two-level atom (sigma_x coupling to a bosonic bath)
// ---------------------------------------------------------------------------

/// H_S = w0 sz/2, H_I = sx (x) O_B, O_B linear in the modes with density J.
struct DephasingParams {
  double beta = 1.0;
  double eta = 0.5;
  double omega_c = 100.0;
  double omega0 = 0.0;
  double rho_ee0 = 1.0;

  void validate() const;
  SpectralDensity density() const { return {SpectralKind::ohmic_lorentz_sq, eta, omega_c}; }
};

struct SpectralIntegralOptions {
  double rel_tol = 1e-11;
  /// Upper limit of the direct integral, in units of omega_c; the rest uses w = L/x.
  double split_factor = 50.0;
};

/// Cov_B0(O, O) = int J(w)(2n+1) dw.
double dephasing_cov(const DephasingParams& p, const SpectralIntegralOptions& opts = {});
/// Phi(tau) = 8 int J coth(beta w/2) sin^2(w tau/2)/w^2 dw; exact coherence decay exp(-Phi).
double dephasing_phi(const DephasingParams& p, double tau, const SpectralIntegralOptions& opts = {});
/// K(tau) = int_0^tau <O(u) O> du.
std::complex<double> dephasing_kernel(const DephasingParams& p, double tau,
                                      const SpectralIntegralOptions& opts = {});
/// S(beta, w) = 2 (n(w) + 1) J(w) for w > 0, 2 n(|w|) J(|w|) for w < 0, 2 eta/beta at 0.
double redfield_spectrum(const DephasingParams& p, double w);

enum class DephasingMethod { exact, mll, tcl2, tl_ull2, redfield };
std::string to_string(DephasingMethod m);

/// 1/2 + (rho_ee0 - 1/2) e^{-2 Cov tau^2}
double dephasing_mll_closed_form(const DephasingParams& p, double cov, double tau);
/// 1/2 + (rho_ee0 - 1/2) e^{-4 (eta/beta) tau}; valid for w0 = 0.
double dephasing_redfield_closed_form(const DephasingParams& p, double tau);
/// 1 - rho_ee(tau) of the exact solution, computed without cancellation (w0 = 0).
double dephasing_exact_depletion(const DephasingParams& p, double tau, const SpectralIntegralOptions& opts = {});

struct DephasingRunOptions {
  std::size_t substeps = 1;
  SpectralIntegralOptions spectral;
};

/// Trajectory with observable "pop_e". exact, tcl2 and tl_ull2 need w0 = 0.
Trajectory dephasing_populations(const DephasingParams& p, DephasingMethod method, const TimeGrid& grid,
                                 const DephasingRunOptions& opts = {});

// ---------------------------------------------------------------------------
// Damped oscillator in a bath of oscillators (vacuum, single excitation)
// ---------------------------------------------------------------------------

struct DampedHOParams {
  double omega0 = 1.0;
  double omega_c = 5.0;
  std::size_t modes = 255;
  std::complex<double> c0 = 0.0;
  std::complex<double> c1 = 1.0;
  /// Fock levels kept for the system oscillator in master-equation runs.
  std::size_t system_levels = 3;
  /// Replaces w_k = 0.1 k when non-empty (length must equal modes).
  std::vector<double> omega_k;
  /// Multiplies every g_k.
  double coupling_scale = 1.0;

  void validate() const;
  SpectralDensity density() const { return {SpectralKind::ohmic_exp, 1.0, omega_c}; }
};

struct OscillatorBath {
  std::vector<double> omega;
  std::vector<double> g;
  double coupling_sum = 0.0;  ///< G = sum g_k^2
};

/// w_k = 0.1 k, g_k = sqrt(J(w_k)), k = 1..M.
OscillatorBath damped_ho_bath(const DampedHOParams& p);

/// Single-excitation sector: index 0 vacuum, 1 system excitation, 1 + k mode k.
ComplexMatrix damped_ho_sector_hamiltonian(const DampedHOParams& p);

/// Exact populations from the sector eigenproblem ("pop_1").
Trajectory damped_ho_exact(const DampedHOParams& p, const TimeGrid& grid);
/// rho*_11 from the energy-dephased initial state of the sector.
double damped_ho_asymptotic(const DampedHOParams& p, bool* degenerate = nullptr);

/// Full truncated-Fock model: system and every mode cut at `fock_cut` levels.
OpenSystemModel damped_ho_fock_model(const DampedHOParams& p, std::size_t fock_cut);

struct LindbladShift {
  double delta = 0.0;
  double gamma = 0.0;
};
/// delta = P int J(w)/(w0 - w) dw, gamma = pi J(w0).
LindbladShift damped_ho_lindblad_coefficients(const DampedHOParams& p);

/// gamma(tau) = sum g^2 sin(D tau)/D, kappa(tau) = sum 2 g^2 sin^2(D tau/2)/D, D = w0 - w_k.
std::pair<double, double> damped_ho_tcl2_coefficients(const OscillatorBath& bath, double omega0, double tau);

enum class DampedHOMethod { exact, mll, lindblad, tcl2, ull2, nz2, asymptotic };
std::string to_string(DampedHOMethod m);

struct DampedHORunOptions {
  std::size_t substeps = 1;
};

/// Trajectory with observable "pop_1".
Trajectory damped_ho_populations(const DampedHOParams& p, DampedHOMethod method, const TimeGrid& grid,
                                 const DampedHORunOptions& opts = {});

/// Second-order memory equations in moment form; nz2 freezes the bath at the vacuum.
Trajectory damped_ho_memory_evolve(const DampedHOParams& p, const TimeGrid& grid, bool nz2,
                                   std::size_t substeps = 1);

// Lowering operator on n levels.
ComplexMatrix lowering(std::size_t n);

}  // namespace corrpic
