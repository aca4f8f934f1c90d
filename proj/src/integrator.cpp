#include "vortmix/integrator.hpp"

#include <cmath>
#include <string>

#include "vortmix/error.hpp"

namespace vortmix {

int steps_per_unit(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::kAlignment, "dt must be > 0");
  const double inverse = 1.0 / dt;
  const double rounded = std::round(inverse);
  if (rounded < 1.0 || std::abs(inverse - rounded) > 1e-9 * rounded) {
    throw Error(ErrorCode::kAlignment, "dt: 1/dt must be an integer (got dt = " +
                                           std::to_string(dt) + ")");
  }
  return static_cast<int>(rounded);
}

std::size_t step_count(double t_end, double dt) {
  if (t_end < 0.0 || !std::isfinite(t_end)) throw Error(ErrorCode::kAlignment, "t_end must be >= 0");
  const double per_unit = steps_per_unit(dt);
  const double steps = t_end * per_unit;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, rounded)) {
    throw Error(ErrorCode::kAlignment, "t_end must be a multiple of dt");
  }
  return static_cast<std::size_t>(rounded);
}

ExponentialStepper::ExponentialStepper(const SpectralGrid& grid, double dt)
    : grid_(grid), dt_(dt), decay_(grid.size()), phi_dt_(grid.size()) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be > 0");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double k2 = grid.norm_sq(i);
    decay_[i] = std::exp(-k2 * dt);
    phi_dt_[i] = -std::expm1(-k2 * dt) / k2;
  }
}

VorticityField ExponentialStepper::combine(const VorticityField& w, const VorticityField& nonlinear,
                                           const VorticityField* db) const {
  VorticityField out(grid_);
  for (std::size_t i = 0; i < out.size(); ++i) {
    Complex v = decay_[i] * w[i] + phi_dt_[i] * nonlinear[i];
    if (db) v += decay_[i] * (*db)[i];
    out[i] = v;
  }
  if (!out.all_finite()) {
    throw NonfiniteStateError(std::nan(""), "nonfinite coefficient after exponential step");
  }
  return out;
}

VorticityField ExponentialStepper::advance(const VorticityField& w, const VorticityField& db,
                                           TransformWorkspace& ws) const {
  return combine(w, nonlinear_fast(w, ws), &db);
}

VorticityField ExponentialStepper::advance(const VorticityField& w, TransformWorkspace& ws) const {
  return combine(w, nonlinear_fast(w, ws), nullptr);
}

VorticityField step(const VorticityField& w, const ForcingSpec& spec, double dt, Rng& rng,
                    TransformWorkspace& ws) {
  const ExponentialStepper stepper(w.grid(), dt);
  const VorticityField db = sample_increment(spec, dt, rng);
  return stepper.advance(w, db, ws);
}

int Trajectory::steps_per_unit() const { return vortmix::steps_per_unit(dt); }

Trajectory simulate(const VorticityField& w0, const ForcingSpec& spec, double t_end, double dt,
                    Rng& rng, const RecordPolicy& policy, const StepObserver& observer) {
  TransformWorkspace ws(w0.grid());
  return simulate(w0, spec, t_end, dt, rng, policy, ws, observer);
}

Trajectory simulate(const VorticityField& w0, const ForcingSpec& spec, double t_end, double dt,
                    Rng& rng, const RecordPolicy& policy, TransformWorkspace& ws,
                    const StepObserver& observer) {
  if (!(w0.grid() == spec.grid())) throw Error(ErrorCode::kInvalidArgument, "grid mismatch");
  const int per_unit = steps_per_unit(dt);
  const std::size_t n = step_count(t_end, dt);
  const std::size_t stride = policy.stride == 0 ? static_cast<std::size_t>(per_unit) : policy.stride;
  if (policy.noise && stride != 1) {
    throw Error(ErrorCode::kInvalidArgument, "noise logging requires a dense recording");
  }

  Trajectory traj;
  traj.dt = dt;
  traj.stride = stride;
  auto record = [&](std::size_t i, const VorticityField& w) {
    if (i % stride != 0) return;
    traj.times.push_back(static_cast<double>(i) / per_unit);
    traj.states.push_back(w);
  };

  const ExponentialStepper stepper(w0.grid(), dt);
  const VorticityField zero(w0.grid());
  VorticityField w = w0;
  for (std::size_t i = 0; i < n; ++i) {
    record(i, w);
    VorticityField db = policy.noise_off ? zero : sample_increment(spec, dt, rng);
    if (observer) observer(i, w, &db);
    try {
      w = stepper.advance(w, db, ws);
    } catch (const NonfiniteStateError&) {
      const double t = static_cast<double>(i + 1) / per_unit;
      throw NonfiniteStateError(t, "numerical blow-up: nonfinite state at t = " + std::to_string(t));
    }
    if (policy.noise) traj.noise_log.push_back(std::move(db));
  }
  record(n, w);
  if (observer) observer(n, w, nullptr);
  return traj;
}

}  // namespace vortmix
