#include "vortmix/reduction.hpp"

#include <cmath>

#include "vortmix/error.hpp"

namespace vortmix {

FieldPath FieldPath::slice(std::size_t first, std::size_t last) const {
  if (first > last || last >= values.size()) {
    throw Error(ErrorCode::kInvalidArgument, "path slice out of range");
  }
  FieldPath out;
  out.dt = dt;
  out.t0 = time(first);
  out.values.assign(values.begin() + static_cast<std::ptrdiff_t>(first),
                    values.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  return out;
}

SPath extract_s_path(const Trajectory& traj) {
  if (!traj.dense()) {
    throw Error(ErrorCode::kSamplingTooCoarse, "extract_s_path needs a densely recorded trajectory");
  }
  SPath s;
  s.dt = traj.dt;
  s.t0 = traj.times.empty() ? 0.0 : traj.times.front();
  s.values.reserve(traj.states.size());
  for (const auto& w : traj.states) s.values.push_back(project_low(w));
  return s;
}

LPath solve_l(const SPath& s, const VorticityField& l0, TransformWorkspace& ws) {
  if (!project_low(l0).is_zero()) {
    throw Error(ErrorCode::kPrecondition, "solve_l: l0 must be supported on high modes");
  }
  LPath l;
  l.dt = s.dt;
  l.t0 = s.t0;
  if (s.values.empty()) return l;
  const auto& grid = l0.grid();
  const ExponentialStepper stepper(grid, s.dt);
  l.values.reserve(s.values.size());
  l.values.push_back(l0);
  for (std::size_t i = 0; i + 1 < s.values.size(); ++i) {
    const VorticityField& current = l.values.back();
    const VorticityField w = s.values[i] + current;
    const VorticityField b = nonlinear_fast(w, ws);
    VorticityField next(grid);
    for (std::size_t m = 0; m < next.size(); ++m) {
      if (grid.is_low(m)) continue;
      next[m] = stepper.decay(m) * current[m] + stepper.phi_dt(m) * b[m];
    }
    if (!next.all_finite()) {
      const double t = s.time(i + 1);
      throw NonfiniteStateError(t, "solve_l: nonfinite high-mode state at t = " + std::to_string(t));
    }
    l.values.push_back(std::move(next));
  }
  return l;
}

double semigroup_check(const SPath& s, const VorticityField& l0, std::size_t mid,
                       TransformWorkspace& ws) {
  if (s.values.empty() || mid >= s.values.size()) {
    throw Error(ErrorCode::kInvalidArgument, "semigroup_check: split outside the path");
  }
  const std::size_t last = s.values.size() - 1;
  const LPath whole = solve_l(s, l0, ws);
  SPath first;
  static_cast<FieldPath&>(first) = s.slice(0, mid);
  const LPath head = solve_l(first, l0, ws);
  SPath second;
  static_cast<FieldPath&>(second) = s.slice(mid, last);
  const LPath tail = solve_l(second, head.values.back(), ws);
  return norm(whole.values.back() - tail.values.back());
}

std::vector<ContractionRow> contraction_report(const SPath& s, const VorticityField& l1,
                                               const VorticityField& l2, double a,
                                               TransformWorkspace& ws) {
  const LPath path1 = solve_l(s, l1, ws);
  const LPath path2 = solve_l(s, l2, ws);
  const double n_force = l1.grid().n_force();
  const double initial = norm(l1 - l2);

  std::vector<ContractionRow> rows;
  rows.reserve(s.values.size());
  double dissipation = 0.0;  // left-point sum of ||grad w1||^2 dt
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    const double t = s.time(i) - s.t0;
    ContractionRow row;
    row.t = s.time(i);
    row.lhs = norm(path1.values[i] - path2.values[i]);
    row.rhs = std::exp(-n_force * t + a * dissipation) * initial;
    row.rhs_gronwall = std::exp(0.5 * (-(n_force + 1.0) * t + a * dissipation)) * initial;
    row.ratio = row.rhs > 0.0 ? row.lhs / row.rhs : 0.0;
    rows.push_back(row);
    dissipation += h1_seminorm_sq(s.values[i] + path1.values[i]) * s.dt;
  }
  return rows;
}

bool contraction_holds(const std::vector<ContractionRow>& rows, double slack) {
  for (const auto& row : rows) {
    if (row.lhs > row.rhs * (1.0 + slack)) return false;
  }
  return true;
}

}  // namespace vortmix
