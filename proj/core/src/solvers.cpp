#include "corrpic/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace corrpic {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_finite(const ComplexMatrix& m, std::size_t step, const char* what) {
  if (!m.all_finite()) throw NumericError(std::string(what) + ": non-finite state at step " + std::to_string(step), step);
}

ComplexMatrix lift_s(const ComplexMatrix& x, std::size_t d_b) { return kron(x, ComplexMatrix::identity(d_b)); }
ComplexMatrix lift_b(const ComplexMatrix& y, std::size_t d_s) { return kron(ComplexMatrix::identity(d_s), y); }

// Tr_B[op (I (x) rho_b)]
ComplexMatrix mean_over_b(const ComplexMatrix& op, const ComplexMatrix& rho_b, BipartiteDims dims) {
  return partial_trace(op * lift_b(rho_b, dims.d_s), dims, TraceOver::B);
}

// Tr_S[(rho_s (x) I) op]
ComplexMatrix mean_over_s(const ComplexMatrix& op, const ComplexMatrix& rho_s, BipartiteDims dims) {
  return partial_trace(lift_s(rho_s, dims.d_b) * op, dims, TraceOver::S);
}

ComplexMatrix free_hamiltonian(const BipartiteHamiltonian& ham) {
  const auto dims = ham.dims();
  return lift_s(ham.h_s, dims.d_b) + lift_b(ham.h_b, dims.d_s);
}

void check_memory(const OpenSystemModel& model, const TimeGrid& grid, const MemoryOptions& opts) {
  const auto dims = model.dims();
  const double cell = sizeof(cplx);
  double stored = static_cast<double>(dims.d_s * dims.d_s);
  if (opts.keep_bath_states) stored += static_cast<double>(dims.d_b * dims.d_b);
  const double joint = static_cast<double>(dims.joint() * dims.joint());
  const double bytes = cell * (stored * static_cast<double>(grid.steps + 1) + 16.0 * joint);
  if (bytes > static_cast<double>(opts.history_cap_bytes))
    throw PreconditionError("memory solver: estimated " + std::to_string(static_cast<long long>(bytes)) +
                            " bytes exceeds the history cap; coarsen dt, shorten the horizon or raise the cap");
}

void require_centered_bath(const OpenSystemModel& model, const char* what) {
  const auto dims = model.dims();
  const double scale = std::max(1.0, model.ham.h_i.frobenius_norm());
  if (mean_over_b(model.ham.h_i, model.rho_b0, dims).frobenius_norm() > 1e-10 * scale)
    throw PreconditionError(std::string(what) + ": requires Tr_B[H_I rho_B0] = 0");
}

void require_stationary_bath(const OpenSystemModel& model, const char* what) {
  const double scale = std::max(1.0, model.ham.h_b.frobenius_norm());
  if (commutator(model.ham.h_b, model.rho_b0).frobenius_norm() > 1e-10 * scale)
    throw PreconditionError(std::string(what) + ": requires [H_B, rho_B0] = 0");
}

}  // namespace

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t0))
    throw PreconditionError("TimeGrid: dt must be positive and finite");
}

void Trajectory::add_population(const std::string& name, std::size_t level) {
  std::vector<double> series;
  series.reserve(states.size());
  for (const auto& s : states) {
    if (level >= s.rows()) throw DimensionError("add_population: level out of range");
    series.push_back(s(level, level).real());
  }
  observables[name] = std::move(series);
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t(grid.steps + 1);
  for (std::size_t k = 0; k <= grid.steps; ++k) t[k] = grid.time(k);
  return t;
}

Trajectory rk4_evolve(const Rhs& rhs, const ComplexMatrix& initial, const TimeGrid& grid, std::size_t substeps) {
  grid.validate();
  if (substeps == 0) throw PreconditionError("rk4_evolve: substeps must be positive");
  Trajectory traj;
  traj.grid = grid;
  traj.states.reserve(grid.steps + 1);
  traj.states.push_back(initial);
  ComplexMatrix rho = initial;
  const double h = grid.dt / static_cast<double>(substeps);
  for (std::size_t k = 0; k < grid.steps; ++k) {
    for (std::size_t s = 0; s < substeps; ++s) {
      const double t = grid.time(k) + h * static_cast<double>(s);
      const auto k1 = rhs(t, rho);
      const auto k2 = rhs(t + 0.5 * h, rho + k1 * (0.5 * h));
      const auto k3 = rhs(t + 0.5 * h, rho + k2 * (0.5 * h));
      const auto k4 = rhs(t + h, rho + k3 * h);
      rho.add_scaled(k1 + k2 * 2.0 + k3 * 2.0 + k4, h / 6.0);
    }
    check_finite(rho, k + 1, "rk4_evolve");
    traj.states.push_back(rho);
  }
  return traj;
}

Trajectory exact_evolve(const ComplexMatrix& h_sb, const JointState& initial, const TimeGrid& grid,
                        const ExactOptions& opts) {
  grid.validate();
  require_square(h_sb, "exact_evolve");
  if (h_sb.rows() != initial.dims.joint() || initial.rho_sb.rows() != initial.dims.joint())
    throw DimensionError("exact_evolve: Hamiltonian, state and dims disagree");
  if (h_sb.rows() > opts.max_joint_dim) throw DimensionError("exact_evolve: joint dimension too large");

  const auto eig = hermitian_eig(h_sb);
  const auto& v = eig.vectors;
  const auto vd = v.adjoint();
  const auto r0 = vd * initial.rho_sb * v;
  const std::size_t n = h_sb.rows();

  Trajectory traj;
  traj.grid = grid;
  traj.states.reserve(grid.steps + 1);
  for (std::size_t k = 0; k <= grid.steps; ++k) {
    const double t = grid.time(k) - grid.t0;
    ComplexMatrix r(n, n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        r(a, b) = r0(a, b) * std::exp(cplx{0.0, -(eig.values[a] - eig.values[b]) * t});
    auto rho = hermitize(v * r * vd);
    check_finite(rho, k, "exact_evolve");
    traj.states.push_back(partial_trace(rho, initial.dims, TraceOver::B));
    if (opts.keep_joint) traj.joint_states.push_back(std::move(rho));
  }
  return traj;
}

Trajectory mll_evolve(const MllSpec& spec, const ComplexMatrix& rho_s0, const TimeGrid& grid, std::size_t substeps) {
  grid.validate();
  // Rates grow with the time elapsed since the product state at t0, so the
  // equation stiffens; bound the generator norm at the horizon and keep h*|L| <= 1/2.
  const double t_end = grid.horizon();
  double norm = 2.0 * (spec.h_s.frobenius_norm() + spec.lamb0.frobenius_norm() + t_end * spec.lamb1.frobenius_norm());
  for (std::size_t i = 0; i < spec.ops.size(); ++i)
    for (std::size_t j = 0; j < spec.ops.size(); ++j)
      norm += 4.0 * t_end * std::abs(spec.cov(i, j)) * spec.ops[i].frobenius_norm() * spec.ops[j].frobenius_norm();
  const auto needed = static_cast<std::size_t>(std::ceil(2.0 * grid.dt * norm));
  substeps = std::max(substeps, needed);
  const double t0 = grid.t0;
  return rk4_evolve([&spec, t0](double t, const ComplexMatrix& rho) { return mll_rhs(t - t0, rho, spec); },
                    rho_s0, grid, substeps);
}

void OpenSystemModel::validate() const {
  const auto d = dims();
  if (ham.h_i.rows() != d.joint() || !ham.h_i.is_square()) throw DimensionError("model: H_I side != d_s*d_b");
  if (rho_s0.rows() != d.d_s || rho_b0.rows() != d.d_b) throw DimensionError("model: initial state dims");
  validate_density(rho_s0, 1e-10);
  validate_density(rho_b0, 1e-10);
}

namespace {

enum class MemoryKind { ull2, nz2 };

MemoryTrajectory memory_evolve(const OpenSystemModel& model, const TimeGrid& grid, const MemoryOptions& opts,
                               MemoryKind kind) {
  grid.validate();
  model.validate();
  check_memory(model, grid, opts);
  if (kind == MemoryKind::nz2) require_centered_bath(model, "nz2_evolve");

  const auto dims = model.dims();
  const auto& h_i = model.ham.h_i;
  const double dt = grid.dt;
  const SpectralPropagator free_prop(free_hamiltonian(model.ham));
  const auto u = free_prop.at(dt);
  const auto ud = u.adjoint();
  const SpectralPropagator bath_prop(model.ham.h_b);

  auto bath_at = [&](std::size_t k, const ComplexMatrix& rho_b) -> ComplexMatrix {
    if (kind == MemoryKind::ull2) return rho_b;
    const auto ub = bath_prop.at(grid.time(k) - grid.t0);
    return hermitize(ub * model.rho_b0 * ub.adjoint());
  };

  // Source of the correlation integral, K = [H~_I, rho_S (x) rho_B].
  auto source = [&](const ComplexMatrix& rs, const ComplexMatrix& rb) {
    const auto prod = kron(rs, rb);
    if (kind == MemoryKind::nz2) return commutator(h_i, prod);
    const auto h_tilde = h_i - lift_s(mean_over_b(h_i, rb, dims), dims.d_b) - lift_b(mean_over_s(h_i, rs, dims), dims.d_s);
    return commutator(h_tilde, prod);
  };

  auto d_sys = [&](const ComplexMatrix& rs, const ComplexMatrix& rb, const ComplexMatrix& chi) {
    auto h = model.ham.h_s;
    if (kind == MemoryKind::ull2) h += mean_over_b(h_i, rb, dims);
    auto out = commutator(h, rs) + partial_trace(commutator(h_i, chi), dims, TraceOver::B);
    return hermitize(out * (-kI));
  };

  auto d_bath = [&](const ComplexMatrix& rs, const ComplexMatrix& rb, const ComplexMatrix& chi) {
    const auto h = model.ham.h_b + mean_over_s(h_i, rs, dims);
    auto out = commutator(h, rb) + partial_trace(commutator(h_i, chi), dims, TraceOver::S);
    return hermitize(out * (-kI));
  };

  MemoryTrajectory out;
  out.system.grid = grid;
  out.system.states.reserve(grid.steps + 1);
  ComplexMatrix rs = model.rho_s0;
  ComplexMatrix rb = model.rho_b0;
  ComplexMatrix chi(dims.joint(), dims.joint());
  ComplexMatrix k_now = source(rs, bath_at(0, rb));
  out.system.states.push_back(rs);
  if (opts.keep_bath_states) out.bath_states.push_back(bath_at(0, rb));

  const cplx half_step = cplx{0.0, -0.5 * dt};
  for (std::size_t n = 0; n < grid.steps; ++n) {
    const auto rb_n = bath_at(n, rb);
    const auto fs0 = d_sys(rs, rb_n, chi);
    const ComplexMatrix fb0 = kind == MemoryKind::ull2 ? d_bath(rs, rb, chi) : ComplexMatrix();
    const auto chi_free = u * chi * ud;
    const auto k_prop = u * k_now * ud;

    // Predictor.
    auto rs_p = rs + fs0 * dt;
    auto rb_p = kind == MemoryKind::ull2 ? rb + fb0 * dt : rb;
    const auto rb_p_eff = bath_at(n + 1, rb_p);
    auto chi_p = chi_free + (k_prop + source(rs_p, rb_p_eff)) * half_step;

    // Corrector.
    const auto fs1 = d_sys(rs_p, rb_p_eff, chi_p);
    rs = hermitize(rs + (fs0 + fs1) * (0.5 * dt));
    if (kind == MemoryKind::ull2) {
      const auto fb1 = d_bath(rs_p, rb_p, chi_p);
      rb = hermitize(rb + (fb0 + fb1) * (0.5 * dt));
    }
    const auto rb_next = bath_at(n + 1, rb);
    k_now = source(rs, rb_next);
    chi = chi_free + (k_prop + k_now) * half_step;

    check_finite(rs, n + 1, kind == MemoryKind::ull2 ? "ull2_evolve" : "nz2_evolve");
    out.system.states.push_back(rs);
    if (opts.keep_bath_states) out.bath_states.push_back(rb_next);
  }
  return out;
}

// Builds int_0^tau e^{-i H0 u} X e^{i H0 u} du in the eigenbasis of H0.
class FreeIntegral {
 public:
  explicit FreeIntegral(const ComplexMatrix& h0) : eig_(hermitian_eig(h0)), vd_(eig_.vectors.adjoint()) {}

  ComplexMatrix operator()(const ComplexMatrix& x, double tau) const {
    auto xe = vd_ * x * eig_.vectors;
    const std::size_t n = xe.rows();
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t k = 0; k < n; ++k) xe(m, k) *= weight(eig_.values[m] - eig_.values[k], tau);
    return eig_.vectors * xe * vd_;
  }

  // (1 - e^{-i w tau}) / (i w)
  static cplx weight(double w, double tau) {
    const double x = w * tau;
    if (std::abs(x) < 1e-4) return tau * cplx{1.0 - x * x / 6.0, -0.5 * x + x * x * x / 24.0};
    return (1.0 - std::exp(cplx{0.0, -x})) / cplx{0.0, w};
  }

 private:
  EigenDecomposition eig_;
  ComplexMatrix vd_;
};

Trajectory time_local_evolve(const OpenSystemModel& model, const TimeGrid& grid, std::size_t substeps,
                             bool subtract_mean, const char* what) {
  grid.validate();
  model.validate();
  require_centered_bath(model, what);
  require_stationary_bath(model, what);
  const auto dims = model.dims();
  const auto integral = std::make_shared<FreeIntegral>(free_hamiltonian(model.ham));
  const double t0 = grid.t0;
  const auto rhs = [&model, dims, integral, t0, subtract_mean](double t, const ComplexMatrix& rho) {
    auto x = model.ham.h_i;
    if (subtract_mean) x -= lift_b(mean_over_s(model.ham.h_i, rho, dims), dims.d_s);
    const auto hbar = (*integral)(x, t - t0);
    const auto inner = commutator(hbar, kron(rho, model.rho_b0));
    auto out = commutator(model.ham.h_s, rho) * (-kI) -
               partial_trace(commutator(model.ham.h_i, inner), dims, TraceOver::B);
    return hermitize(out);
  };
  return rk4_evolve(rhs, model.rho_s0, grid, substeps);
}

}  // namespace

MemoryTrajectory ull2_evolve(const OpenSystemModel& model, const TimeGrid& grid, const MemoryOptions& opts) {
  return memory_evolve(model, grid, opts, MemoryKind::ull2);
}

MemoryTrajectory nz2_evolve(const OpenSystemModel& model, const TimeGrid& grid, const MemoryOptions& opts) {
  return memory_evolve(model, grid, opts, MemoryKind::nz2);
}

Trajectory tl_ull2_evolve(const OpenSystemModel& model, const TimeGrid& grid, std::size_t substeps) {
  return time_local_evolve(model, grid, substeps, true, "tl_ull2_evolve");
}

Trajectory tcl2_evolve(const OpenSystemModel& model, const TimeGrid& grid, std::size_t substeps) {
  return time_local_evolve(model, grid, substeps, false, "tcl2_evolve");
}

MllSpec model_mll_spec(const OpenSystemModel& model) {
  model.validate();
  return make_mll_spec(model.ham, model.rho_s0, model.rho_b0, build_basis(model.dims().d_s));
}

ComplexMatrix dephase_in_eigenbasis(const EigenDecomposition& eig, const ComplexMatrix& rho, double gap_tol,
                                    bool* degenerate) {
  const auto& v = eig.vectors;
  const auto vd = v.adjoint();
  auto r = vd * rho * v;
  const std::size_t n = r.rows();
  bool degen = false;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      if (std::abs(eig.values[a] - eig.values[b]) > gap_tol) {
        r(a, b) = 0.0;
      } else {
        degen = true;
      }
    }
  if (degenerate) *degenerate = degen;
  return hermitize(v * r * vd);
}

AsymptoticState asymptotic_state(const ComplexMatrix& h_sb, const JointState& initial, double gap_tol) {
  require_square(h_sb, "asymptotic_state");
  if (h_sb.rows() != initial.dims.joint()) throw DimensionError("asymptotic_state: dims disagree");
  AsymptoticState out;
  out.rho_sb = dephase_in_eigenbasis(hermitian_eig(h_sb), initial.rho_sb, gap_tol, &out.degenerate);
  out.rho_s = partial_trace(out.rho_sb, initial.dims, TraceOver::B);
  return out;
}

}  // namespace corrpic
