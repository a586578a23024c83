#include "lambda_mixer/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

#include "lambda_mixer/errors.hpp"

namespace lambda_mixer {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void expect_header(std::istream& in, std::string_view columns) {
  std::string line;
  if (!next_line(in, line)) throw SchemaError("empty CSV: missing header");
  if (line != columns) throw SchemaError("unexpected CSV header: " + line);
}

std::string snake_case(std::string_view camel) {
  std::string out;
  for (const char c : camel) {
    if (std::isupper(static_cast<unsigned char>(c))) {
      if (!out.empty()) out += '_';
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return {buf, static_cast<std::size_t>(n)};
}

double parse_double(std::string_view text) {
  if (text == "nan") return kNaN;
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw SchemaError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << kTrajectoryColumns << '\n';
  for (const auto& s : traj.samples) {
    double phi = kNaN;
    try {
      phi = relative_phase(s.state);
    } catch (const UndefinedPhase&) {
    }
    const auto& f = s.state;
    const auto& c = s.invariants;
    const double cols[] = {s.zeta,          f.omega1.real(),     f.omega1.imag(),
                           f.omega2.real(), f.omega2.imag(),     f.e1.real(),
                           f.e1.imag(),     f.e2.real(),         f.e2.imag(),
                           std::norm(f.omega1), std::norm(f.omega2), std::norm(f.e1),
                           std::norm(f.e2), phi,                 c.c1,
                           c.c2,            c.c3,                c.c4,
                           s.lambda0};
    bool first = true;
    for (const double v : cols) {
      if (!first) out << ',';
      out << format_double(v);
      first = false;
    }
    out << '\n';
  }
}

Trajectory read_trajectory_csv(std::istream& in) {
  expect_header(in, kTrajectoryColumns);
  const std::size_t n_cols = split(kTrajectoryColumns).size();
  Trajectory traj;
  std::string line;
  while (next_line(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != n_cols) {
      throw SchemaError("trajectory row has " + std::to_string(fields.size()) + " columns");
    }
    std::vector<double> v(n_cols);
    for (std::size_t i = 0; i < n_cols; ++i) v[i] = parse_double(fields[i]);
    TrajectorySample s;
    s.zeta = v[0];
    s.state = {{v[1], v[2]}, {v[3], v[4]}, {v[5], v[6]}, {v[7], v[8]}};
    s.invariants = {v[14], v[15], v[16], v[17]};
    s.lambda0 = v[18];
    if (!traj.samples.empty() && !(s.zeta > traj.samples.back().zeta)) {
      throw SchemaError("zeta column is not strictly increasing");
    }
    traj.samples.push_back(s);
  }
  return traj;
}

std::vector<SweepRecord> to_records(const SweepTable& table) {
  std::vector<SweepRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    SweepRecord r;
    r.epsilon = row.epsilon;
    r.model = to_string(row.spec.model);
    r.phase_terms = row.spec.has_phase_terms();
    r.l_measured = row.measured ? row.measured->length : kNaN;
    r.e_measured = row.measured ? row.measured->efficiency : kNaN;
    r.l_analytic = row.analytic ? row.analytic->length : kNaN;
    r.e_analytic = row.analytic ? row.analytic->efficiency : kNaN;
    if (!row.measured) {
      r.validity_flag = snake_case(row.error.empty() ? "Failed" : row.error);
    } else if (!row.analytic) {
      r.validity_flag = "no_prediction";
    } else {
      r.validity_flag = to_string(row.analytic->validity);
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << kSweepColumns << '\n';
  for (const auto& r : records) {
    out << format_double(r.epsilon) << ',' << r.model << ',' << (r.phase_terms ? "true" : "false")
        << ',' << format_double(r.l_measured) << ',' << format_double(r.e_measured) << ','
        << format_double(r.l_analytic) << ',' << format_double(r.e_analytic) << ','
        << r.validity_flag << '\n';
  }
}

std::vector<SweepRecord> read_sweep_csv(std::istream& in) {
  expect_header(in, kSweepColumns);
  std::vector<SweepRecord> out;
  std::string line;
  while (next_line(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 8) {
      throw SchemaError("sweep row has " + std::to_string(f.size()) + " columns");
    }
    SweepRecord r;
    r.epsilon = parse_double(f[0]);
    r.model = std::string(f[1]);
    if (r.model != "four_level" && r.model != "five_level") {
      throw SchemaError("unknown model '" + r.model + "'");
    }
    if (f[2] != "true" && f[2] != "false") {
      throw SchemaError("phase_terms must be true or false");
    }
    r.phase_terms = f[2] == "true";
    r.l_measured = parse_double(f[3]);
    r.e_measured = parse_double(f[4]);
    r.l_analytic = parse_double(f[5]);
    r.e_analytic = parse_double(f[6]);
    r.validity_flag = std::string(f[7]);
    if (r.validity_flag.empty()) throw SchemaError("empty validity_flag");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace lambda_mixer
