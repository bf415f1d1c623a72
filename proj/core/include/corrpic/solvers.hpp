#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "corrpic/correlation.hpp"
#include "corrpic/linalg.hpp"
#include "corrpic/ull.hpp"

namespace corrpic {

/// Uniform grid t_k = t0 + k dt, k = 0..steps.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.01;
  std::size_t steps = 0;

  double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
  double horizon() const { return dt * static_cast<double>(steps); }
  /// Throws PreconditionError on dt <= 0 or non-finite values.
  void validate() const;
};

/// Reduced states per grid point plus named scalar series.
struct Trajectory {
  TimeGrid grid;
  std::vector<ComplexMatrix> states;
  std::vector<ComplexMatrix> joint_states;  ///< filled only when requested
  std::map<std::string, std::vector<double>> observables;

  /// Records Re rho(level, level) for every state under `name`.
  void add_population(const std::string& name, std::size_t level);
  std::vector<double> times() const;
};

using Rhs = std::function<ComplexMatrix(double t, const ComplexMatrix& rho)>;

/// Classical RK4 with `substeps` internal steps per grid interval.
Trajectory rk4_evolve(const Rhs& rhs, const ComplexMatrix& initial, const TimeGrid& grid,
                      std::size_t substeps = 1);

struct ExactOptions {
  bool keep_joint = false;
  std::size_t max_joint_dim = 1024;
};

/// rho(t) = U_t rho(0) U_t^dagger from one eigendecomposition of H_SB; states are Tr_B rho(t).
Trajectory exact_evolve(const ComplexMatrix& h_sb, const JointState& initial, const TimeGrid& grid,
                        const ExactOptions& opts = {});

/// MLL equation from a product initial state.
Trajectory mll_evolve(const MllSpec& spec, const ComplexMatrix& rho_s0, const TimeGrid& grid,
                      std::size_t substeps = 1);

/// System, bath and coupling on a dense joint space, with a product initial state.
struct OpenSystemModel {
  BipartiteHamiltonian ham;
  ComplexMatrix rho_s0;
  ComplexMatrix rho_b0;

  BipartiteDims dims() const { return ham.dims(); }
  void validate() const;
};

struct MemoryOptions {
  /// Cap on the bytes held by the run (stored trajectory plus joint work set).
  std::size_t history_cap_bytes = std::size_t{1} << 30;
  bool keep_bath_states = false;
};

struct MemoryTrajectory {
  Trajectory system;
  std::vector<ComplexMatrix> bath_states;  ///< empty unless keep_bath_states
};

/**
 * Second-order weak-correlation equations, co-integrating rho_S and rho_B.
 *
 * The first-order correlation chi1(t) = -i int_0^t U0(t-s)[H~_I(s), rho_S(s) (x) rho_B(s)] U0(s-t) ds
 * is accumulated by the trapezoid rule on the grid, advanced in place each step.
 */
MemoryTrajectory ull2_evolve(const OpenSystemModel& model, const TimeGrid& grid, const MemoryOptions& opts = {});

/// Second-order memory equation with the bath frozen at its free evolution from rho_B0.
MemoryTrajectory nz2_evolve(const OpenSystemModel& model, const TimeGrid& grid, const MemoryOptions& opts = {});

/// Time-local ULL2 with constant bath rho_B0; requires Tr_B[H_I rho_B0] = 0 and [H_B, rho_B0] = 0.
Trajectory tl_ull2_evolve(const OpenSystemModel& model, const TimeGrid& grid, std::size_t substeps = 1);

/// Time-convolutionless second order; same preconditions as tl_ull2_evolve.
Trajectory tcl2_evolve(const OpenSystemModel& model, const TimeGrid& grid, std::size_t substeps = 1);

/// MLL spec derived from the model's Hamiltonian and product initial state.
MllSpec model_mll_spec(const OpenSystemModel& model);

/// V (block-diagonal part of V^dagger rho V) V^dagger over energy clusters of width gap_tol.
ComplexMatrix dephase_in_eigenbasis(const EigenDecomposition& eig, const ComplexMatrix& rho, double gap_tol,
                                    bool* degenerate = nullptr);

struct AsymptoticState {
  ComplexMatrix rho_sb;
  ComplexMatrix rho_s;
  bool degenerate = false;
};

/// Energy-eigenbasis dephasing of rho(0); degenerate blocks (gap <= gap_tol) are kept whole.
AsymptoticState asymptotic_state(const ComplexMatrix& h_sb, const JointState& initial, double gap_tol = 1e-9);

}  // namespace corrpic
