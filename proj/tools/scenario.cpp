#include "scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <thread>

namespace corrpic::app {

namespace {

const std::map<std::string, std::set<std::string>> kMethods = {
    {"jaynes_cummings", {"exact", "ull", "mll", "ull2", "nz2", "tl_ull2", "tcl2"}},
    {"dephasing", {"exact", "mll", "tcl2", "tl_ull2", "redfield"}},
    {"damped_ho", {"exact", "mll", "lindblad", "tcl2", "ull2", "nz2", "asymptotic"}},
    {"random_validate", {}},
};

const std::map<std::string, std::set<std::string>> kModelKeys = {
    {"jaynes_cummings", {"r1", "r2", "lambda", "omega0", "fock_cut"}},
    {"dephasing", {"beta", "eta", "omega_c", "omega0", "rho_ee0"}},
    {"damped_ho",
     {"omega0", "omega_c", "modes", "c0", "c1", "system_levels", "omega_k", "coupling_scale", "memory_bath",
      "fock_cut"}},
    {"random_validate", {}},
};

std::complex<double> amplitude(const Config& cfg, const std::string& key, std::complex<double> fallback) {
  if (!cfg.has(key)) return fallback;
  const auto v = cfg.numbers(key);
  if (v.empty() || v.size() > 2) throw ConfigError("config key '" + key + "': expected 're' or 're, im'");
  return {v[0], v.size() == 2 ? v[1] : 0.0};
}

std::vector<BipartiteDims> parse_dims(const std::vector<std::string>& items) {
  std::vector<BipartiteDims> out;
  for (const auto& item : items) {
    unsigned s = 0, b = 0;
    char tail = 0;
    if (std::sscanf(item.c_str(), "%ux%u%c", &s, &b, &tail) != 2 || s == 0 || b == 0)
      throw ConfigError("dims entry '" + item + "': expected <dS>x<dB>");
    out.push_back({s, b});
  }
  return out;
}

template <class Enum>
Enum pick(const std::string& name, std::initializer_list<Enum> all) {
  for (Enum e : all)
    if (to_string(e) == name) return e;
  throw ConfigError("unknown method '" + name + "'");
}

}  // namespace

Scenario load_scenario(const Config& cfg) {
  Scenario s;
  s.model = cfg.text("model");
  const auto methods = kMethods.find(s.model);
  if (methods == kMethods.end()) throw ConfigError("unknown model '" + s.model + "'");

  std::set<std::string> allowed = {"model", "methods", "grid.t0", "grid.dt", "grid.steps",
                                   "output.dir", "output.prefix", "solver.substeps"};
  for (const auto& k : kModelKeys.at(s.model)) allowed.insert(s.model + "." + k);
  if (s.model == "random_validate")
    allowed.insert({"validate.seed", "validate.instances", "validate.dims", "validate.mutate",
                    "validate.max_coupling"});
  cfg.require_known(allowed);

  if (s.model != "random_validate") {
    s.methods = cfg.list("methods");
    if (s.methods.empty()) throw ConfigError("methods must name at least one method");
    std::set<std::string> seen;
    for (const auto& m : s.methods) {
      if (!methods->second.count(m)) throw ConfigError("method '" + m + "' does not apply to model '" + s.model + "'");
      if (!seen.insert(m).second) throw ConfigError("method '" + m + "' listed twice");
    }
  }

  s.grid.t0 = cfg.number("grid.t0", 0.0);
  s.grid.dt = cfg.number("grid.dt", 0.01);
  s.grid.steps = cfg.count("grid.steps", 100);
  if (!(s.grid.dt > 0.0)) throw ConfigError("grid.dt must be positive");
  s.out_dir = cfg.text("output.dir", ".");
  s.prefix = cfg.text("output.prefix", s.model);
  s.substeps = cfg.count("solver.substeps", 1);
  if (s.substeps == 0) throw ConfigError("solver.substeps must be positive");

  const auto key = [&](const char* k) { return s.model + "." + k; };
  try {
    if (s.model == "jaynes_cummings") {
      auto& p = s.jc;
      p.r1 = cfg.number(key("r1"), p.r1);
      p.r2 = cfg.has(key("r2")) ? cfg.number(key("r2"), 0.0) : std::sqrt(std::max(0.0, 1.0 - p.r1 * p.r1));
      p.lambda = cfg.number(key("lambda"), p.lambda);
      p.omega0 = cfg.number(key("omega0"), p.omega0);
      p.fock_cut = cfg.count(key("fock_cut"), p.fock_cut);
      p.validate();
    } else if (s.model == "dephasing") {
      auto& p = s.dephasing;
      p.beta = cfg.number(key("beta"), p.beta);
      p.eta = cfg.number(key("eta"), p.eta);
      p.omega_c = cfg.number(key("omega_c"), p.omega_c);
      p.omega0 = cfg.number(key("omega0"), p.omega0);
      p.rho_ee0 = cfg.number(key("rho_ee0"), p.rho_ee0);
      p.validate();
    } else if (s.model == "damped_ho") {
      auto& p = s.damped_ho;
      p.omega0 = cfg.number(key("omega0"), p.omega0);
      p.omega_c = cfg.number(key("omega_c"), p.omega_c);
      p.modes = cfg.count(key("modes"), p.modes);
      p.c0 = amplitude(cfg, key("c0"), p.c0);
      p.c1 = amplitude(cfg, key("c1"), p.c1);
      p.system_levels = cfg.count(key("system_levels"), p.system_levels);
      if (cfg.has(key("omega_k"))) p.omega_k = cfg.numbers(key("omega_k"));
      p.coupling_scale = cfg.number(key("coupling_scale"), p.coupling_scale);
      s.memory_bath = cfg.text(key("memory_bath"), s.memory_bath);
      s.fock_cut = cfg.count(key("fock_cut"), s.fock_cut);
      if (s.memory_bath != "moments" && s.memory_bath != "fock")
        throw ConfigError("damped_ho.memory_bath must be 'moments' or 'fock'");
      p.validate();
    } else {
      auto& v = s.validation;
      v.seed = cfg.count("validate.seed", v.seed);
      v.instances = cfg.count("validate.instances", v.instances);
      v.mutate = cfg.flag("validate.mutate", v.mutate);
      v.max_coupling = cfg.number("validate.max_coupling", v.max_coupling);
      if (cfg.has("validate.dims")) v.dims = parse_dims(cfg.list("validate.dims"));
    }
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
  return s;
}

Trajectory run_method(const Scenario& s, const std::string& method) {
  if (s.model == "jaynes_cummings") {
    using M = JCMethod;
    const auto m = pick(method, {M::exact, M::ull, M::mll, M::ull2, M::nz2, M::tl_ull2, M::tcl2});
    return jc_populations(s.jc, m, s.grid, s.substeps);
  }
  if (s.model == "dephasing") {
    using M = DephasingMethod;
    const auto m = pick(method, {M::exact, M::mll, M::tcl2, M::tl_ull2, M::redfield});
    DephasingRunOptions opts;
    opts.substeps = s.substeps;
    return dephasing_populations(s.dephasing, m, s.grid, opts);
  }
  if (s.model == "damped_ho") {
    using M = DampedHOMethod;
    const auto m = pick(method, {M::exact, M::mll, M::lindblad, M::tcl2, M::ull2, M::nz2, M::asymptotic});
    if (s.memory_bath == "fock" && (m == M::ull2 || m == M::nz2)) {
      const auto model = damped_ho_fock_model(s.damped_ho, s.fock_cut);
      auto traj = (m == M::ull2 ? ull2_evolve(model, s.grid) : nz2_evolve(model, s.grid)).system;
      traj.add_population("pop_1", 1);
      return traj;
    }
    DampedHORunOptions opts;
    opts.substeps = s.substeps;
    return damped_ho_populations(s.damped_ho, m, s.grid, opts);
  }
  throw ConfigError("model '" + s.model + "' has no trajectory methods");
}

std::string format_csv(const Trajectory& traj) {
  std::string out = "time";
  for (const auto& [name, series] : traj.observables) out += "," + name;
  out += '\n';
  char cell[40];
  const std::size_t rows = traj.grid.steps + 1;
  for (const auto& [name, series] : traj.observables)
    if (series.size() != rows) throw NumericError(name + ": series length does not match the grid");
  for (std::size_t k = 0; k < rows; ++k) {
    std::snprintf(cell, sizeof cell, "%.17g", traj.grid.time(k));
    out += cell;
    for (const auto& [name, series] : traj.observables) {
      if (!std::isfinite(series.at(k))) throw NumericError("non-finite " + name + " value", k);
      std::snprintf(cell, sizeof cell, ",%.17g", series[k]);
      out += cell;
    }
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::error_code ec;
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content) || !out.flush()) throw IoError("cannot write '" + path + "'");
}

std::size_t thread_cap() {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("CORRPIC_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw ConfigError("CORRPIC_THREADS must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> run_scenario(const Scenario& s, std::size_t threads) {
  const std::size_t n = s.methods.size();
  std::vector<std::string> paths(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        paths[i] = (std::filesystem::path(s.out_dir) / (s.prefix + "_" + s.methods[i] + ".csv")).string();
        write_file(paths[i], format_csv(run_method(s, s.methods[i])));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::min(threads, n); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return paths;
}

ValidationReport run_validation(const Scenario& s) {
  try {
    return validate(s.validation);
  } catch (const DimensionError& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace corrpic::app
