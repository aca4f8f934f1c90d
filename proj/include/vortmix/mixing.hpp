#pragma once

// Empirical mixing experiments: synchronous coupling of two trajectories,
// long-run stationary statistics and autocovariance decay of observables.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "vortmix/integrator.hpp"
#include "vortmix/stats.hpp"

namespace vortmix {

struct ExponentialFit {
  bool defined = false;  // false with fewer than 3 positive points in the window
  double rate = 0.0;     // slope of the log against time
  Interval ci;           // 95% percentile bootstrap over resampled points
  std::size_t points = 0;
};

// Least-squares fit of log(values) against times over times >= window_start,
// skipping nonpositive values, with a pairs bootstrap for the slope.
ExponentialFit fit_exponential(std::span<const double> times, std::span<const double> values,
                               double window_start, int resamples, Rng& rng);

struct CouplingReport {
  std::vector<double> times;
  std::vector<double> d_full;
  std::vector<double> d_low;
  std::vector<double> d_high;
  ExponentialFit fit;  // of d_full over the second half of the horizon
};

// Two trajectories driven by one noise stream (seeded from
// derive_seed(seed, "couple", 0)); distances recorded at unit times. The
// difference is propagated directly by its own equation, which is linear in
// the difference for given trajectories, so it stays resolvable far below
// the roundoff level of the fields themselves.
CouplingReport couple(const VorticityField& w1, const VorticityField& w2, const ForcingSpec& spec,
                      double t_end, double dt, std::uint64_t seed, int resamples = 200);

struct StationaryOptions {
  double dt = 1e-3;
  double burn_in = 10.0;
  double gap = 0.1;
  std::size_t samples = 0;
};

// Single trajectory from w0 subsampled every `gap` after `burn_in` (both
// multiples of dt); noise seeded from derive_seed(seed, "stationary", 0).
// Requires gap > 0 and burn_in >= 0.
std::vector<VorticityField> stationary_sample(const VorticityField& w0, const ForcingSpec& spec,
                                              const StationaryOptions& options, std::uint64_t seed);

struct MeanEstimate {
  std::size_t samples = 0;
  double mean = 0.0;
  double standard_error = 0.0;  // batch means
};

MeanEstimate batch_mean(std::span<const double> series, std::size_t batches = 20);

using StateObservable = std::function<double(const VorticityField&)>;

struct CorrelationReport {
  std::vector<double> lags;
  std::vector<double> autocovariance;
  std::vector<double> standard_error;  // moving-block bootstrap
  ExponentialFit fit;                  // of the autocovariance over all lags; rate = -m
};

// Autocovariance of a uniformly sampled series (spacing `sample_gap`) at the
// given lags (multiples of sample_gap), with moving-block bootstrap errors and
// a bootstrap CI for the fitted exponential rate.
CorrelationReport autocovariance_report(std::span<const double> series, double sample_gap,
                                        std::span<const double> lags, std::size_t block_length,
                                        int resamples, Rng& rng);

struct CorrelationOptions {
  StationaryOptions run;
  std::size_t block_length = 200;
  int resamples = 200;
};

CorrelationReport correlation_decay(const VorticityField& w0, const ForcingSpec& spec,
                                    const StateObservable& observable, std::span<const double> lags,
                                    const CorrelationOptions& options, std::uint64_t seed);

}  // namespace vortmix
