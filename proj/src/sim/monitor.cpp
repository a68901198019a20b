#include "sdcbf/csv.hpp"
#include "sdcbf/errors.hpp"
#include "sdcbf/sim.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace sdcbf {

SafetyReport safety_monitor(const Trajectory& traj, const BarrierSpec& barrier) {
  SafetyReport r;
  r.min_h = std::numeric_limits<double>::infinity();
  double dist_sum = 0.0;
  for (std::size_t i = 0; i < traj.fine_states.size(); ++i) {
    const double h = barrier.h(traj.fine_states[i]);
    r.times.push_back(traj.fine_times[i]);
    r.margins.push_back(h);
    r.min_h = std::min(r.min_h, h);
    if (h < 0.0 && !r.first_violation_index) {
      r.first_violation_index = i;
      r.first_violation_time = traj.fine_times[i];
    }
    if (barrier.boundary_distance) dist_sum += barrier.boundary_distance(traj.fine_states[i]);
  }
  if (barrier.boundary_distance && !traj.fine_states.empty()) {
    r.mean_boundary_distance = dist_sum / static_cast<double>(traj.fine_states.size());
  }
  return r;
}

void write_trajectory_csv(const Trajectory& traj, const BarrierSpec& barrier,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  const std::size_t n = traj.fine_states.empty() ? 0 : traj.fine_states.front().size();
  const std::size_t m = traj.inputs.empty() ? 1 : traj.inputs.front().size();
  std::vector<std::string> header{"t"};
  for (std::size_t i = 0; i < n; ++i) header.push_back("x_" + std::to_string(i));
  for (std::size_t i = 0; i < m; ++i) header.push_back("u_" + std::to_string(i));
  header.push_back("h");
  write_csv_row(out, header);

  const std::size_t per_period =
      traj.inputs.empty() ? 1 : (traj.fine_states.size() - 1) / traj.inputs.size();
  std::vector<double> row;
  for (std::size_t i = 0; i < traj.fine_states.size(); ++i) {
    row.clear();
    row.push_back(traj.fine_times[i]);
    row.insert(row.end(), traj.fine_states[i].begin(), traj.fine_states[i].end());
    if (traj.inputs.empty()) {
      row.insert(row.end(), m, std::numeric_limits<double>::quiet_NaN());
    } else {
      const std::size_t period = std::min(i / per_period, traj.inputs.size() - 1);
      row.insert(row.end(), traj.inputs[period].begin(), traj.inputs[period].end());
    }
    row.push_back(barrier.h(traj.fine_states[i]));
    write_csv_row(out, row);
  }
  if (!out) throw Error("failed writing " + path.string());
}

void write_diagnostics_csv(const std::vector<StepRecord>& steps, std::size_t input_dim,
                           const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  std::vector<std::string> header{"t", "h", "p_star", "ball_radius"};
  for (std::size_t i = 0; i < input_dim; ++i) header.push_back("u_" + std::to_string(i));
  for (const char* c : {"margin_pp", "margin_pm", "margin_mp", "margin_mm", "gronwall_term",
                        "status"}) {
    header.emplace_back(c);
  }
  write_csv_row(out, header);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> row;
  for (const auto& s : steps) {
    row.clear();
    row.push_back(s.t);
    row.push_back(s.h);
    const auto& d = s.output.decision;
    const auto& inf = s.output.infeasibility;
    row.push_back(d ? d->p_star : nan);
    row.push_back(d ? d->ball_radius : nan);
    for (std::size_t i = 0; i < input_dim; ++i) {
      row.push_back(s.output.u.size() > 0 ? s.output.u[static_cast<Eigen::Index>(i)] : nan);
    }
    for (std::size_t k = 0; k < 4; ++k) {
      row.push_back(d ? d->margins[k] : inf ? inf->margins[k] : nan);
    }
    row.push_back(d ? d->gronwall_term : inf ? inf->gronwall_term : nan);
    row.push_back(static_cast<double>(static_cast<int>(s.output.status)));
    write_csv_row(out, row);
  }
  if (!out) throw Error("failed writing " + path.string());
}

TrajectoryTable read_trajectory_csv(const std::filesystem::path& path) {
  const CsvTable csv = read_csv(path);
  TrajectoryTable t;
  for (const auto& col : csv.header) {
    if (col.rfind("x_", 0) == 0) ++t.state_dim;
    if (col.rfind("u_", 0) == 0) ++t.input_dim;
  }
  if (csv.header.empty() || csv.header.front() != "t" || csv.header.back() != "h" ||
      t.state_dim == 0 || csv.header.size() != 2 + t.state_dim + t.input_dim) {
    throw ParseError(path.string() + ": unexpected trajectory header");
  }
  if (csv.rows.empty()) throw ParseError(path.string() + ": trajectory has no rows");
  const auto n = static_cast<Eigen::Index>(t.state_dim);
  const auto m = static_cast<Eigen::Index>(t.input_dim);
  for (const auto& r : csv.rows) {
    t.t.push_back(r[0]);
    t.x.emplace_back(Eigen::Map<const Vector>(r.data() + 1, n));
    t.u.emplace_back(Eigen::Map<const Vector>(r.data() + 1 + n, m));
    t.h.push_back(r.back());
  }
  return t;
}

}  // namespace sdcbf
