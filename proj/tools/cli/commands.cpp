#include "commands.hpp"

#include <cstdlib>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "lambda_mixer/csv.hpp"
#include "lambda_mixer/errors.hpp"
#include "lambda_mixer/validation.hpp"

namespace lambda_mixer::cli {

namespace {

using nlohmann::json;

json complex_pair(Complex z) { return json::array({z.real(), z.imag()}); }

void run_eigen(const RunConfig& config, std::ostream& out) {
  const SystemParams params = config.params();
  // The Hamiltonian works in units of Δ, so fields carry the Ω₀/Δ scale.
  const FieldState fields = Complex(params.omega_over_delta) * seeded_initial_state(config.seed());
  const auto pairs = eig_exact(build_hamiltonian(config.model, fields, params));

  json doc;
  doc["model"] = to_string(config.model);
  doc["fields"] = {{"omega1", complex_pair(fields.omega1)},
                   {"omega2", complex_pair(fields.omega2)},
                   {"e1", complex_pair(fields.e1)},
                   {"e2", complex_pair(fields.e2)}};
  json list = json::array();
  for (const auto& p : pairs) {
    json vec = json::array();
    for (const Complex& c : p.vector) vec.push_back(complex_pair(c));
    list.push_back(
        {{"value_re", p.value.real()}, {"value_im", p.value.imag()}, {"vector", vec},
         {"residual", p.residual}});
  }
  doc["eigenpairs"] = list;
  const std::vector<Complex> ground = [&] {
    std::vector<Complex> e(pairs.size());
    e[0] = 1.0;
    return e;
  }();
  doc["ground_branch"] = select_ground_branch_index(pairs, ground);
  out << doc.dump(2) << '\n';
}

void run_simulate(const RunConfig& config, std::ostream& out) {
  const Trajectory traj =
      integrate(seeded_initial_state(config.seed()), config.params(), config.backend(), config.grid());
  write_trajectory_csv(out, traj);
}

void run_sweep(const RunConfig& config, std::ostream& out) {
  const auto eps = log_grid(config.eps_min, config.eps_max, config.points_per_decade);
  const BackendSpec specs[] = {{config.model, config.method, true},
                               {config.model, config.method, false}};
  SweepOptions options;
  options.threads = sweep_threads();
  write_sweep_csv(out, sweep_epsilon(eps, config.phi0, specs, config.params(), config.grid(),
                                     options));
}

int run_validate(const RunConfig& config, std::ostream& out) {
  ValidationOptions options;
  options.params = config.params();
  options.threads = sweep_threads();
  options.points_per_decade = config.points_per_decade;
  const ValidationReport report = run_validation(options);

  json checks = json::array();
  for (const auto& c : report.checks) {
    json metrics = json::object();
    for (const auto& [k, v] : c.metrics) metrics[k] = v;
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"measured", c.measured},
                      {"threshold", c.threshold},
                      {"detail", c.detail},
                      {"runtime_limit_s", c.runtime_limit},
                      {"metrics", metrics}});
  }
  // Wall-clock times are left out so that reports are reproducible.
  out << json{{"passed", report.all_passed()}, {"checks", checks}}.dump(2) << '\n';
  return report.all_passed() ? kExitOk : kExitValidation;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "eigen") return Command::kEigen;
  if (name == "simulate") return Command::kSimulate;
  if (name == "sweep") return Command::kSweep;
  if (name == "validate") return Command::kValidate;
  return std::nullopt;
}

unsigned sweep_threads() {
  if (const char* env = std::getenv("LAMBDA_MIXER_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    return n >= 1 ? static_cast<unsigned>(n) : 1u;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_error_record(std::ostream& err, const std::exception& e) {
  json rec;
  if (const auto* le = dynamic_cast<const Error*>(&e)) {
    rec["error"] = std::string(le->kind());
  } else {
    rec["error"] = "InternalError";
  }
  rec["message"] = e.what();
  if (const auto* pe = dynamic_cast<const ParseError*>(&e)) {
    rec["line"] = pe->line();
    rec["column"] = pe->column();
  } else if (const auto* ve = dynamic_cast<const ValidationError*>(&e)) {
    rec["key"] = ve->key();
  } else if (const auto* uk = dynamic_cast<const UnknownKey*>(&e)) {
    rec["key"] = uk->key();
  }
  err << rec.dump() << '\n';
}

int run_command(Command cmd, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (cmd) {
      case Command::kEigen: run_eigen(config, out); return kExitOk;
      case Command::kSimulate: run_simulate(config, out); return kExitOk;
      case Command::kSweep: run_sweep(config, out); return kExitOk;
      case Command::kValidate: return run_validate(config, out);
    }
  } catch (const ConfigError& e) {
    write_error_record(err, e);
    return kExitConfig;
  } catch (const std::exception& e) {
    write_error_record(err, e);
    return kExitNumerical;
  }
  return kExitConfig;
}

}  // namespace lambda_mixer::cli
