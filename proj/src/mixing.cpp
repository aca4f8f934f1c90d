#include "vortmix/mixing.hpp"

#include <array>
#include <cmath>

#include "vortmix/error.hpp"

namespace vortmix {

namespace {

std::size_t steps_for(double span, double dt, const char* what) {
  try {
    return step_count(span, dt);
  } catch (const Error&) {
    throw Error(ErrorCode::kAlignment, std::string(what) + " must be a multiple of dt");
  }
}

std::vector<double> autocovariances(std::span<const double> series, std::span<const std::size_t> lags) {
  const double m = mean(series);
  std::vector<double> out;
  out.reserve(lags.size());
  std::vector<double> products;
  for (std::size_t lag : lags) {
    products.assign(series.size() - lag, 0.0);
    for (std::size_t i = 0; i + lag < series.size(); ++i) {
      products[i] = (series[i] - m) * (series[i + lag] - m);
    }
    out.push_back(pairwise_sum(products) / static_cast<double>(series.size()));
  }
  return out;
}

}  // namespace

ExponentialFit fit_exponential(std::span<const double> times, std::span<const double> values,
                               double window_start, int resamples, Rng& rng) {
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= window_start && values[i] > 0.0) {
      x.push_back(times[i]);
      y.push_back(std::log(values[i]));
    }
  }
  ExponentialFit fit;
  fit.points = x.size();
  if (x.size() < 3) return fit;
  fit.defined = true;
  fit.rate = fit_line(x, y).slope;
  fit.ci = bootstrap_slope(x, y, resamples, 0.95, rng);
  return fit;
}

CouplingReport couple(const VorticityField& w1, const VorticityField& w2, const ForcingSpec& spec,
                      double t_end, double dt, std::uint64_t seed, int resamples) {
  if (!(w1.grid() == w2.grid()) || !(w1.grid() == spec.grid())) {
    throw Error(ErrorCode::kInvalidArgument, "couple: fields and forcing must share one grid");
  }
  const int per_unit = steps_per_unit(dt);
  const std::size_t n = step_count(t_end, dt);
  const auto& grid = w1.grid();
  TransformWorkspace ws(grid);
  const ExponentialStepper stepper(grid, dt);
  Rng rng(derive_seed(seed, "couple", 0));

  CouplingReport report;
  VorticityField base = w2;
  VorticityField diff = w1 - w2;
  auto record = [&](std::size_t i) {
    report.times.push_back(static_cast<double>(i) / per_unit);
    report.d_full.push_back(norm(diff));
    report.d_low.push_back(norm(project_low(diff)));
    report.d_high.push_back(norm(project_high(diff)));
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (i % static_cast<std::size_t>(per_unit) == 0) record(i);
    const VorticityField db = sample_increment(spec, dt, rng);
    // B(w1) - B(w2) = -u(diff) . grad w1 - u(w2) . grad diff
    const VorticityField first = base + diff;
    const std::array<TransformWorkspace::Term, 2> terms{{{&diff, &first}, {&base, &diff}}};
    const VorticityField forcing = ws.advection(terms);
    try {
      VorticityField next_diff = stepper.combine(diff, forcing, nullptr);
      base = stepper.advance(base, db, ws);
      diff = std::move(next_diff);
    } catch (const NonfiniteStateError&) {
      const double t = static_cast<double>(i + 1) / per_unit;
      throw NonfiniteStateError(t, "coupling blow-up at t = " + std::to_string(t));
    }
  }
  if (n % static_cast<std::size_t>(per_unit) == 0) record(n);

  Rng boot(derive_seed(seed, "couple", 1));
  report.fit = fit_exponential(report.times, report.d_full, 0.5 * t_end, resamples, boot);
  return report;
}

std::vector<VorticityField> stationary_sample(const VorticityField& w0, const ForcingSpec& spec,
                                              const StationaryOptions& options, std::uint64_t seed) {
  if (!(options.gap > 0.0) || options.burn_in < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "stationary_sample: need gap > 0 and burn_in >= 0");
  }
  std::vector<VorticityField> out;
  if (options.samples == 0) return out;
  const std::size_t burn = steps_for(options.burn_in, options.dt, "burn_in");
  const std::size_t gap = steps_for(options.gap, options.dt, "gap");
  const std::size_t total = burn + (options.samples - 1) * gap;
  out.reserve(options.samples);
  Rng rng(derive_seed(seed, "stationary", 0));
  RecordPolicy policy;
  policy.stride = total == 0 ? 1 : total;  // keep the recorded trajectory tiny
  const double t_end = static_cast<double>(total) * options.dt;
  simulate(w0, spec, t_end, options.dt, rng, policy,
           [&](std::size_t step, const VorticityField& w, const VorticityField*) {
             if (step >= burn && (step - burn) % gap == 0 && out.size() < options.samples) {
               out.push_back(w);
             }
           });
  return out;
}

MeanEstimate batch_mean(std::span<const double> series, std::size_t batches) {
  MeanEstimate est;
  est.samples = series.size();
  est.mean = mean(series);
  if (series.size() >= 2 * batches) {
    // Use only whole batches for the SE so every batch has equal weight.
    est.standard_error = batch_means_se(series.first(series.size() / batches * batches), batches);
  }
  return est;
}

CorrelationReport autocovariance_report(std::span<const double> series, double sample_gap,
                                        std::span<const double> lags, std::size_t block_length,
                                        int resamples, Rng& rng) {
  std::vector<std::size_t> lag_steps;
  for (double lag : lags) {
    const double steps = lag / sample_gap;
    const auto rounded = static_cast<std::size_t>(std::llround(steps));
    if (lag < 0.0 || std::abs(steps - static_cast<double>(rounded)) > 1e-9 * std::max(1.0, steps)) {
      throw Error(ErrorCode::kAlignment, "lags must be nonnegative multiples of the sample gap");
    }
    lag_steps.push_back(rounded);
  }
  std::size_t max_lag = 0;
  for (std::size_t l : lag_steps) max_lag = std::max(max_lag, l);
  if (series.size() < 2 * max_lag + 2 || block_length == 0 || block_length > series.size()) {
    throw Error(ErrorCode::kInvalidArgument, "autocovariance_report: series too short for the lags");
  }

  CorrelationReport report;
  report.lags.assign(lags.begin(), lags.end());
  report.autocovariance = autocovariances(series, lag_steps);

  const std::size_t n = series.size();
  const std::size_t starts = n - block_length + 1;
  std::vector<std::vector<double>> boot(lag_steps.size());
  std::vector<double> rates;
  std::vector<double> resampled(n);
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t filled = 0; filled < n;) {
      const std::size_t s = rng.below(starts);
      for (std::size_t j = 0; j < block_length && filled < n; ++j) resampled[filled++] = series[s + j];
    }
    const auto acov = autocovariances(resampled, lag_steps);
    for (std::size_t k = 0; k < acov.size(); ++k) boot[k].push_back(acov[k]);
    std::vector<double> x;
    std::vector<double> y;
    for (std::size_t k = 0; k < acov.size(); ++k) {
      if (acov[k] > 0.0) {
        x.push_back(lags[k]);
        y.push_back(std::log(acov[k]));
      }
    }
    if (x.size() >= 3) rates.push_back(fit_line(x, y).slope);
  }
  for (const auto& values : boot) {
    RunningStats s;
    for (double v : values) s.add(v);
    report.standard_error.push_back(std::sqrt(s.variance()));
  }

  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t k = 0; k < lags.size(); ++k) {
    if (report.autocovariance[k] > 0.0) {
      x.push_back(lags[k]);
      y.push_back(std::log(report.autocovariance[k]));
    }
  }
  report.fit.points = x.size();
  if (x.size() >= 3 && rates.size() >= 2) {
    report.fit.defined = true;
    report.fit.rate = fit_line(x, y).slope;
    report.fit.ci = {quantile(rates, 0.025), quantile(rates, 0.975)};
  }
  return report;
}

CorrelationReport correlation_decay(const VorticityField& w0, const ForcingSpec& spec,
                                    const StateObservable& observable, std::span<const double> lags,
                                    const CorrelationOptions& options, std::uint64_t seed) {
  const auto states = stationary_sample(w0, spec, options.run, seed);
  std::vector<double> series;
  series.reserve(states.size());
  for (const auto& w : states) series.push_back(observable(w));
  Rng rng(derive_seed(seed, "correlation", 0));
  return autocovariance_report(series, options.run.gap, lags, options.block_length,
                               options.resamples, rng);
}

}  // namespace vortmix
