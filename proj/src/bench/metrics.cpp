#include "liftrom/bench/metrics.hpp"

#include "liftrom/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <tuple>

namespace liftrom {

namespace {

void check_grids(const Trajectory& a, const Trajectory& b) {
  if (a.times.size() != b.times.size()) {
    throw DimensionError("trajectory grids differ in length (" + std::to_string(a.times.size()) +
                         " vs " + std::to_string(b.times.size()) + ")");
  }
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    if (std::abs(a.times[i] - b.times[i]) > 1e-12 * std::max(1.0, std::abs(a.times[i]))) {
      throw DimensionError("trajectory grids differ at index " + std::to_string(i));
    }
  }
}

std::vector<double> relative_errors(const Trajectory& fom, const Trajectory& rom,
                                    const std::vector<std::string>& names) {
  check_grids(fom, rom);
  const Trajectory a = fom.restrict_to(names);
  const Trajectory b = rom.restrict_to(names);
  std::vector<double> out(a.times.size());
  for (Index j = 0; j < a.steps(); ++j) {
    const double ref = a.states.col(j).norm();
    if (ref == 0.0) {
      throw DomainError("relative error undefined: reference state is zero at t = " +
                        std::to_string(a.times[static_cast<std::size_t>(j)]));
    }
    out[static_cast<std::size_t>(j)] = (a.states.col(j) - b.states.col(j)).norm() / ref;
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  return os;
}

}  // namespace

double avg_rel_state_error(const Trajectory& fom, const Trajectory& rom,
                           const std::vector<std::string>& names) {
  const auto errs = relative_errors(fom, rom, names);
  if (errs.empty()) return 0.0;
  double sum = 0.0;
  for (double e : errs) sum += e;
  return sum / static_cast<double>(errs.size());
}

double max_rel_state_error(const Trajectory& a, const Trajectory& b,
                           const std::vector<std::string>& names) {
  const auto errs = relative_errors(a, b, names);
  double m = 0.0;
  for (double e : errs) m = std::max(m, e);
  return m;
}

QoISeries extract_qoi(const Trajectory& traj, const std::string& which,
                      const std::string& label_prefix) {
  static const std::regex pattern(R"(^([A-Za-z_][A-Za-z0-9_]*)\((0|1),t\)$)");
  std::smatch m;
  if (!std::regex_match(which, m, pattern)) {
    throw ConfigError("unknown quantity of interest '" + which + "' (expected <var>(0,t) or <var>(1,t))");
  }
  const std::string var = m[1];
  if (!traj.layout.contains(var)) {
    throw ConfigError("quantity of interest '" + which + "': no variable '" + var + "'");
  }
  const auto& b = traj.layout.block(var);
  const Index row = m[2] == "0" ? b.offset : b.offset + b.size - 1;
  QoISeries q;
  q.label = label_prefix + var + "_" + std::string(m[2]);
  q.times = traj.times;
  q.values.resize(traj.times.size());
  for (Index j = 0; j < traj.steps(); ++j) q.values[static_cast<std::size_t>(j)] = traj.states(row, j);
  return q;
}

double oscillation_amplitude(const QoISeries& q, double window) {
  if (q.times.empty()) throw DimensionError("oscillation_amplitude: empty series");
  const double t0 = q.times.back() - window;
  double lo = INFINITY, hi = -INFINITY, sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < q.times.size(); ++i) {
    if (q.times[i] < t0 - 1e-12) continue;
    lo = std::min(lo, q.values[i]);
    hi = std::max(hi, q.values[i]);
    sum += q.values[i];
    ++count;
  }
  const double mean = sum / static_cast<double>(count);
  if (mean == 0.0) throw DomainError("oscillation_amplitude: zero mean");
  return 0.5 * (hi - lo) / std::abs(mean);
}

double estimate_period(const QoISeries& q, double window) {
  if (q.times.empty()) throw DimensionError("estimate_period: empty series");
  const double t0 = q.times.back() - window;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < q.times.size(); ++i) {
    if (q.times[i] < t0 - 1e-12) continue;
    sum += q.values[i];
    ++count;
  }
  const double mean = sum / static_cast<double>(count);
  std::vector<double> crossings;
  for (std::size_t i = 1; i < q.times.size(); ++i) {
    if (q.times[i - 1] < t0 - 1e-12) continue;
    const double a = q.values[i - 1] - mean, b = q.values[i] - mean;
    if (a < 0.0 && b >= 0.0) {
      crossings.push_back(q.times[i - 1] + (q.times[i] - q.times[i - 1]) * (-a) / (b - a));
    }
  }
  if (crossings.size() < 2) throw DomainError("estimate_period: fewer than two mean crossings");
  return (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
}

double shift_optimal_rel_error(const Trajectory& a, const Trajectory& b,
                               const std::vector<std::string>& names, double t_start,
                               Index max_shift) {
  if (a.times.size() != b.times.size()) {
    throw DimensionError("shift_optimal_rel_error: trajectories have different grids");
  }
  const Index n_t = a.steps();
  double best = INFINITY;
  for (Index s = -max_shift; s <= max_shift; ++s) {
    double worst = 0.0;
    bool any = false;
    for (Index i = 0; i < n_t; ++i) {
      const Index j = i + s;
      if (a.times[static_cast<std::size_t>(i)] < t_start - 1e-12 || j < 0 || j >= n_t) continue;
      double num = 0.0, den = 0.0;
      for (const auto& name : names) {
        const auto& ba = a.layout.block(name);
        const auto& bb = b.layout.block(name);
        const auto xa = a.states.col(i).segment(ba.offset, ba.size);
        const auto xb = b.states.col(j).segment(bb.offset, bb.size);
        num += (xa - xb).squaredNorm();
        den += xa.squaredNorm();
      }
      worst = std::max(worst, std::sqrt(num / den));
      any = true;
    }
    if (any) best = std::min(best, worst);
  }
  return best;
}

void sort_rows(std::vector<ErrorRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ErrorRow& a, const ErrorRow& b) {
    return std::tie(a.model, a.method, a.r1, a.r2, a.r_deim) <
           std::tie(b.model, b.method, b.r1, b.r2, b.r_deim);
  });
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_errors_csv(const std::filesystem::path& path, const std::vector<ErrorRow>& rows) {
  auto os = open_out(path);
  os << "model,method,r1,r2,r_deim,error\n";
  for (const auto& r : rows) {
    os << r.model << ',' << r.method << ',' << r.r1 << ',' << r.r2 << ',' << r.r_deim << ','
       << format_double(r.error) << '\n';
  }
}

void write_timings_csv(const std::filesystem::path& path, const std::vector<ErrorRow>& rows) {
  auto os = open_out(path);
  os << "model,method,r1,r2,r_deim,offline_seconds,online_seconds\n";
  for (const auto& r : rows) {
    os << r.model << ',' << r.method << ',' << r.r1 << ',' << r.r2 << ',' << r.r_deim << ','
       << format_double(r.offline_seconds) << ',' << format_double(r.online_seconds) << '\n';
  }
}

void write_qoi_csv(const std::filesystem::path& dir, const QoISeries& q) {
  auto os = open_out(dir / ("qoi_" + q.label + ".csv"));
  os << "t,value\n";
  for (std::size_t i = 0; i < q.times.size(); ++i) {
    os << format_double(q.times[i]) << ',' << format_double(q.values[i]) << '\n';
  }
}

void write_sigma_csv(const std::filesystem::path& path, const Vector& sigma) {
  auto os = open_out(path);
  os << "index,sigma,sigma_rel\n";
  const double s1 = sigma.size() > 0 ? sigma[0] : 0.0;
  for (Index i = 0; i < sigma.size(); ++i) {
    os << (i + 1) << ',' << format_double(sigma[i]) << ','
       << format_double(s1 > 0.0 ? sigma[i] / s1 : 0.0) << '\n';
  }
}

}  // namespace liftrom
