#pragma once

// Girsanov log-density of the low-mode process against the driftless Wiener
// law with the same covariance gamma, Ito left-point discretization:
//
//   increment_i = (f_i, gamma^-1 (s_{i+1} - s_i)) - 1/2 (f_i, gamma^-1 f_i) dt,
//   f_i = P F(w_i).
//
// Under the reference law (s_{i+1} - s_i = db_i) each exp(increment_i) has
// conditional mean exactly 1, so the discrete weights normalize exactly.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vortmix/integrator.hpp"
#include "vortmix/parallel.hpp"
#include "vortmix/stats.hpp"

namespace vortmix {

struct GirsanovOptions {
  // Cap on ||f||; 0 disables clipping. Clipped logs are flagged.
  double clip = 0.0;
  bool keep_increments = true;
};

struct GirsanovLog {
  double t0 = 0.0;
  double t1 = 0.0;
  std::vector<double> increments;
  ExactSum sum;
  std::size_t steps = 0;
  bool clipped = false;

  // Correctly rounded sum of the increments.
  double total() const { return sum.value(); }
};

// Log over [a.t0, b.t1]; requires a.t1 == b.t0. The total equals the one
// computed over the joined path exactly.
GirsanovLog concatenate(const GirsanovLog& a, const GirsanovLog& b);

// Streaming form. push() the states w_0, w_1, ... in order; the increment for
// step i is formed when w_{i+1} arrives and uses the drift of w_i only.
class GirsanovAccumulator {
 public:
  GirsanovAccumulator(const ForcingSpec& spec, double dt, double t0, GirsanovOptions options = {});

  void push(const VorticityField& state, TransformWorkspace& ws);
  // Same, with the drift of `state` already computed by the caller.
  void push(const VorticityField& state, const VorticityField& drift);
  const GirsanovLog& log() const { return log_; }

 private:
  VorticityField clipped_drift(VorticityField f);

  const ForcingSpec& spec_;
  double dt_;
  GirsanovOptions options_;
  GirsanovLog log_;
  std::optional<VorticityField> prev_low_;
  std::optional<VorticityField> prev_drift_;
};

// Throws Error(kMissingNoiseLog) unless traj is dense with a noise log.
GirsanovLog log_density(const Trajectory& traj, const ForcingSpec& spec, TransformWorkspace& ws,
                        const GirsanovOptions& options = {});
// Restricted to states [first, last].
GirsanovLog log_density(const Trajectory& traj, const ForcingSpec& spec, TransformWorkspace& ws,
                        std::size_t first, std::size_t last, const GirsanovOptions& options = {});

struct ReferencePath {
  VorticityField final_state;
  GirsanovLog log;
};

// Driftless low modes s_{i+1} = s_i + db_i with the high modes following the
// reduction step; the log-density is accumulated along the way. If `record`
// is given it receives the dense path with its noise log.
ReferencePath sample_reference_path(const VorticityField& w0, const ForcingSpec& spec, double t_end,
                                    double dt, Rng& rng, TransformWorkspace& ws,
                                    const GirsanovOptions& options = {},
                                    Trajectory* record = nullptr);

struct WeightedSample {
  double log_weight = 0.0;
  double value = 0.0;
};

struct ReweightedEstimate {
  std::size_t n = 0;
  double estimate = 0.0;        // mean of weight * value
  double standard_error = 0.0;
  double mean_weight = 0.0;
  double weight_standard_error = 0.0;
  double ess = 0.0;             // (sum w)^2 / sum w^2
  bool low_ess = false;         // ess < ess_fraction * n
};

ReweightedEstimate reweighted_expectation(std::span<const WeightedSample> samples,
                                          double ess_fraction = 0.01);

using Observable = std::function<double(const VorticityField&)>;

// n reference paths from w0 with seeds derive_seed(seed, "girsanov", i),
// returned in index order.
std::vector<WeightedSample> sample_weighted(const VorticityField& w0, const ForcingSpec& spec,
                                            double t_end, double dt, std::size_t n,
                                            const Observable& observable, std::uint64_t seed,
                                            const ParallelContext& ctx,
                                            const GirsanovOptions& options = {});

}  // namespace vortmix
