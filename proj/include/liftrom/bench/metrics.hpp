#pragma once

#include "liftrom/dynamics/trajectory.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace liftrom {

/// (1/n_t) sum_i ||x(t_i) - x_rom(t_i)|| / ||x(t_i)|| over the listed variables.
double avg_rel_state_error(const Trajectory& fom, const Trajectory& rom,
                           const std::vector<std::string>& names);

/// max_i ||x(t_i) - y(t_i)|| / ||x(t_i)|| over the listed variables.
double max_rel_state_error(const Trajectory& a, const Trajectory& b,
                           const std::vector<std::string>& names);

/// Boundary-node time series of one variable.
struct QoISeries {
  std::string label;
  std::vector<double> times;
  std::vector<double> values;
};

/// `which` is "<var>(0,t)" (first node) or "<var>(1,t)" (last node). The
/// label becomes "<prefix><var>_0" or "<prefix><var>_1".
QoISeries extract_qoi(const Trajectory& traj, const std::string& which,
                      const std::string& label_prefix = "");

/// Half the peak-to-peak range over t >= t_last - window, divided by |mean|.
double oscillation_amplitude(const QoISeries& q, double window = 5.0);

/// Mean spacing of upward mean crossings over t >= t_last - window.
/// Fewer than two crossings raise DomainError.
double estimate_period(const QoISeries& q, double window);

/// Relative state error after the best alignment in time: the minimum over
/// integer grid shifts |s| <= max_shift of
///   max_{t_i >= t_start} ||a(t_i) - b(t_{i+s})|| / ||a(t_i)||
/// over the listed variables. Both trajectories must share the grid.
double shift_optimal_rel_error(const Trajectory& a, const Trajectory& b,
                               const std::vector<std::string>& names, double t_start,
                               Index max_shift);

/// One row of errors.csv.
struct ErrorRow {
  std::string model;
  std::string method;
  Index r1 = 0;
  Index r2 = 0;
  Index r_deim = 0;
  double error = 0.0;
  double offline_seconds = 0.0;
  double online_seconds = 0.0;
};

/// Sorts by (model, method, r1, r2, r_deim).
void sort_rows(std::vector<ErrorRow>& rows);

void write_errors_csv(const std::filesystem::path& path, const std::vector<ErrorRow>& rows);
void write_timings_csv(const std::filesystem::path& path, const std::vector<ErrorRow>& rows);
void write_qoi_csv(const std::filesystem::path& dir, const QoISeries& q);
/// index (1-based), sigma, sigma / sigma_1.
void write_sigma_csv(const std::filesystem::path& path, const Vector& sigma);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace liftrom
