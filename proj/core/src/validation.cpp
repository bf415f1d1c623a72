#include "corrpic/validation.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "corrpic/random.hpp"
#include "corrpic/ull.hpp"

namespace corrpic {

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass(); });
}

const CheckResult& ValidationReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw PreconditionError("no validation check named " + name);
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  out << "instances " << instances << '\n';
  char line[160];
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-16s max %.3e  threshold %.1e  %s\n", c.name.c_str(), c.max_residual,
                  c.threshold, c.pass() ? "PASS" : "FAIL");
    out << line;
  }
  out << (pass() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

ValidationReport validate(const ValidationOptions& opts) {
  auto dims = opts.dims;
  if (dims.empty())
    for (std::size_t s = 2; s <= 4; ++s)
      for (std::size_t b = 2; b <= 4; ++b) dims.push_back({s, b});
  for (const auto& d : dims)
    if (d.d_s < 2 || d.d_b < 1 || d.joint() > 64) throw DimensionError("validate: need d_S >= 2 and d_S*d_B <= 64");

  ValidationReport report;
  report.instances = opts.instances;
  CheckResult exact{"ull_exactness", 0.0, 1e-8};
  CheckResult recon{"reconstruction", 0.0, 1e-8};
  CheckResult null{"null_compat", 0.0, 1e-10};
  CheckResult marg{"marginals", 0.0, 1e-12};
  CheckResult herm{"rhs_hermitian", 0.0, 1e-12};
  CheckResult trace{"rhs_trace", 0.0, 1e-12};

  Rng rng(opts.seed);
  for (std::size_t i = 0; i < opts.instances; ++i) {
    const auto d = dims[i % dims.size()];
    // Pure, rank-2 and full-rank states in turn; every fourth instance at the coupling ceiling.
    const std::size_t rank = std::array<std::size_t, 3>{1, 2, 0}[(i / dims.size()) % 3];
    const double coupling = i % 4 == 0 ? opts.max_coupling : rng.uniform(0.1, opts.max_coupling);
    const auto inst = random_instance(rng, d, coupling, rank);
    const auto basis = build_basis(d.d_s);

    const auto ull = build_ull(inst.ham, inst.state, basis);
    const auto rhs = ull_rhs(ull.dec.rho_s, ull.gen);
    const auto ref = exact_reduced_rhs(inst.ham.joint(), inst.state);
    exact.max_residual = std::max(exact.max_residual, (rhs - ref).frobenius_norm());
    herm.max_residual = std::max(herm.max_residual, hermiticity_residual(rhs));
    trace.max_residual = std::max(trace.max_residual, std::abs(rhs.trace()));
    marg.max_residual = std::max(marg.max_residual, marginal_residual(ull.dec));

    auto dec = ull.dec;
    if (opts.mutate) dec.chi += ComplexMatrix::identity(d.joint()) * (1e-3 / static_cast<double>(d.joint()));
    const auto parent = opts.mutate ? solve_parent(dec) : ull.parent;
    recon.max_residual = std::max(recon.max_residual, parent.reconstruction_residual);
    null.max_residual = std::max(null.max_residual, parent.null_residual);
  }
  report.checks = {exact, recon, null, marg, herm, trace};
  return report;
}

}  // namespace corrpic
