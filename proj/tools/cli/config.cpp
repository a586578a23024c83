#include "config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "lambda_mixer/errors.hpp"

namespace lambda_mixer::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool is_key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

double to_double(const std::string& key, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw ValidationError(key, "expected a finite number, got '" + std::string(text) + "'");
  }
  return v;
}

int to_int(const std::string& key, std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError(key, "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

bool to_bool(const std::string& key, std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ValidationError(key, "expected true or false, got '" + std::string(text) + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    const auto real = [&t](const char* key, double RunConfig::*field) {
      t[key] = [field](RunConfig& c, const std::string& k, std::string_view v) {
        c.*field = to_double(k, v);
      };
    };
    real("epsilon", &RunConfig::epsilon);
    real("phi0", &RunConfig::phi0);
    real("omega_over_delta", &RunConfig::omega_over_delta);
    real("gamma1", &RunConfig::gamma1);
    real("gamma2", &RunConfig::gamma2);
    real("zeta_max", &RunConfig::zeta_max);
    real("rel_tol", &RunConfig::rel_tol);
    real("abs_tol", &RunConfig::abs_tol);
    real("sample_stride", &RunConfig::sample_stride);
    real("eps_min", &RunConfig::eps_min);
    real("eps_max", &RunConfig::eps_max);
    t["points_per_decade"] = [](RunConfig& c, const std::string& k, std::string_view v) {
      c.points_per_decade = to_int(k, v);
    };
    t["include_phase_terms"] = [](RunConfig& c, const std::string& k, std::string_view v) {
      c.include_phase_terms = to_bool(k, v);
    };
    t["output_path"] = [](RunConfig& c, const std::string&, std::string_view v) {
      c.output_path = std::string(v);
    };
    t["model"] = [](RunConfig& c, const std::string& k, std::string_view v) {
      if (v == "four_level") {
        c.model = LevelModel::kFourLevel;
      } else if (v == "five_level") {
        c.model = LevelModel::kFiveLevel;
      } else {
        throw ValidationError(k, "expected four_level or five_level");
      }
    };
    t["method"] = [](RunConfig& c, const std::string& k, std::string_view v) {
      if (v == "closed_form") {
        c.method = Method::kClosedForm;
      } else if (v == "pert_eigen_gradient") {
        c.method = Method::kPertEigenGradient;
      } else if (v == "exact_eigen_gradient") {
        c.method = Method::kExactEigenGradient;
      } else {
        throw ValidationError(k, "expected closed_form, pert_eigen_gradient or exact_eigen_gradient");
      }
    };
    return t;
  }();
  return table;
}

void validate(const RunConfig& c) {
  c.params().validate();
  c.grid().validate();
  c.seed().validate();
  if (!(c.eps_min > 0.0)) throw ValidationError("eps_min", "must be > 0");
  if (!(c.eps_max >= c.eps_min)) throw ValidationError("eps_max", "must be >= eps_min");
  if (c.points_per_decade < 1 || c.points_per_decade > 1000) {
    throw ValidationError("points_per_decade", "must lie in [1, 1000]");
  }
}

}  // namespace

SystemParams RunConfig::params() const {
  SystemParams p;
  p.gamma1 = gamma1;
  p.gamma2 = gamma2;
  p.omega_over_delta = omega_over_delta;
  return p;
}

PropagationGrid RunConfig::grid() const {
  PropagationGrid g;
  g.zeta_max = zeta_max;
  g.rel_tol = rel_tol;
  g.abs_tol = abs_tol;
  g.sample_stride = sample_stride;
  return g;
}

SeedSpec RunConfig::seed() const { return {epsilon, phi0}; }

BackendSpec RunConfig::backend() const { return {model, method, include_phase_terms}; }

RunConfig parse_config(std::string_view source) {
  RunConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!source.empty()) {
    ++line_no;
    const auto nl = source.find('\n');
    std::string_view line = source.substr(0, nl);
    source = nl == std::string_view::npos ? std::string_view{} : source.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      const auto col = line.find_first_not_of(" \t") + 1;
      throw ParseError(line_no, col, "expected 'key = value'");
    }
    const std::string_view raw_key = line.substr(0, eq);
    const std::string_view key = trim(raw_key);
    const std::size_t key_col = raw_key.find_first_not_of(" \t") + 1;
    if (key.empty()) throw ParseError(line_no, eq + 1, "missing key before '='");
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (!is_key_char(key[i])) {
        throw ParseError(line_no, key_col + i, "invalid character in key");
      }
    }
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) throw ParseError(line_no, eq + 2, "missing value after '='");

    const auto it = setters().find(key);
    if (it == setters().end()) throw UnknownKey(std::string(key));
    if (!seen.emplace(key).second) {
      throw ParseError(line_no, key_col, "duplicate key '" + std::string(key) + "'");
    }
    it->second(config, std::string(key), value);
  }
  validate(config);
  return config;
}

}  // namespace lambda_mixer::cli
