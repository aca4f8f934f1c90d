#pragma once

// Exponential Euler-Maruyama for dw = F(w) dt + db:
//
//   w'_k = e^{-|k|^2 dt} w_k + phi1(-|k|^2 dt) dt B(w)_k + e^{-|k|^2 dt} db_k,
//   phi1(z) = (e^z - 1) / z,
//
// with B and the noise taken at the left point (Ito). The linear part is exact.

#include <cstddef>
#include <functional>
#include <vector>

#include "vortmix/dynamics.hpp"
#include "vortmix/forcing.hpp"

namespace vortmix {

// Number of steps per unit time; throws Error(kAlignment) unless 1/dt is an
// integer (to 1e-9 relative).
int steps_per_unit(double dt);
// Number of steps covering [0, t_end]; throws Error(kAlignment) unless t_end is
// a multiple of dt.
std::size_t step_count(double t_end, double dt);

class ExponentialStepper {
 public:
  ExponentialStepper(const SpectralGrid& grid, double dt);

  const SpectralGrid& grid() const { return grid_; }
  double dt() const { return dt_; }
  double decay(std::size_t i) const { return decay_[i]; }
  // dt * phi1(-|k|^2 dt) = (1 - e^{-|k|^2 dt}) / |k|^2
  double phi_dt(std::size_t i) const { return phi_dt_[i]; }

  // One step with a given increment (pass a zero field for the noise-free flow).
  // Throws NonfiniteStateError if the result has a NaN/inf coefficient.
  VorticityField advance(const VorticityField& w, const VorticityField& db,
                         TransformWorkspace& ws) const;
  VorticityField advance(const VorticityField& w, TransformWorkspace& ws) const;

  // Combines a precomputed nonlinear term into a step; advance() uses this.
  VorticityField combine(const VorticityField& w, const VorticityField& nonlinear,
                         const VorticityField* db) const;

 private:
  SpectralGrid grid_;
  double dt_;
  std::vector<double> decay_;
  std::vector<double> phi_dt_;
};

VorticityField step(const VorticityField& w, const ForcingSpec& spec, double dt, Rng& rng,
                    TransformWorkspace& ws);

struct RecordPolicy {
  // Record every `stride` steps; stride 1 is a dense recording. 0 means unit
  // times only.
  std::size_t stride = 0;
  // Keep the increment of every step (requires stride == 1).
  bool noise = false;
  // Turn the forcing off (db = 0); the rng is then not consumed.
  bool noise_off = false;
};

struct Trajectory {
  double dt = 0.0;
  std::size_t stride = 1;
  std::vector<double> times;
  std::vector<VorticityField> states;
  // noise_log[i] is the increment between states[i] and states[i + 1].
  std::vector<VorticityField> noise_log;

  bool dense() const { return stride == 1; }
  bool has_noise_log() const { return !states.empty() && noise_log.size() + 1 == states.size(); }
  int steps_per_unit() const;
};

// Called for every state i = 0..n with the increment applied next (nullptr after
// the final state).
using StepObserver =
    std::function<void(std::size_t step, const VorticityField& state, const VorticityField* db)>;

// Deterministic given (w0, spec, dt, rng state). Step failures are rethrown as
// NonfiniteStateError carrying the failing time.
Trajectory simulate(const VorticityField& w0, const ForcingSpec& spec, double t_end, double dt,
                    Rng& rng, const RecordPolicy& policy, const StepObserver& observer = {});

// Same as simulate but reuses a caller-owned workspace.
Trajectory simulate(const VorticityField& w0, const ForcingSpec& spec, double t_end, double dt,
                    Rng& rng, const RecordPolicy& policy, TransformWorkspace& ws,
                    const StepObserver& observer = {});

}  // namespace vortmix
