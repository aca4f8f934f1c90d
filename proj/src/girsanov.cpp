#include "vortmix/girsanov.hpp"

#include <cmath>

#include "vortmix/error.hpp"

namespace vortmix {

GirsanovLog concatenate(const GirsanovLog& a, const GirsanovLog& b) {
  if (a.t1 != b.t0) throw Error(ErrorCode::kInvalidArgument, "concatenate: logs are not adjacent");
  GirsanovLog out = a;
  out.t1 = b.t1;
  out.increments.insert(out.increments.end(), b.increments.begin(), b.increments.end());
  out.sum.add(b.sum);
  out.steps += b.steps;
  out.clipped = a.clipped || b.clipped;
  return out;
}

GirsanovAccumulator::GirsanovAccumulator(const ForcingSpec& spec, double dt, double t0,
                                         GirsanovOptions options)
    : spec_(spec), dt_(dt), options_(options) {
  log_.t0 = t0;
  log_.t1 = t0;
}

VorticityField GirsanovAccumulator::clipped_drift(VorticityField f) {
  if (options_.clip > 0.0) {
    const double size = norm(f);
    if (size > options_.clip) {
      f *= options_.clip / size;
      log_.clipped = true;
    }
  }
  return f;
}

void GirsanovAccumulator::push(const VorticityField& state, TransformWorkspace& ws) {
  // The drift of the newest state is only needed once its successor arrives,
  // but computing it here keeps push() free of lookahead.
  push(state, reduced_drift(state, ws));
}

void GirsanovAccumulator::push(const VorticityField& state, const VorticityField& drift) {
  VorticityField low = project_low(state);
  if (prev_low_) {
    const VorticityField& f = *prev_drift_;
    const VorticityField ds = low - *prev_low_;
    const double increment =
        gamma_inv_inner(spec_, f, ds) - 0.5 * gamma_inv_inner(spec_, f, f) * dt_;
    if (options_.keep_increments) log_.increments.push_back(increment);
    log_.sum.add(increment);
    ++log_.steps;
    log_.t1 = log_.t0 + static_cast<double>(log_.steps) * dt_;
  }
  prev_low_ = std::move(low);
  prev_drift_ = clipped_drift(project_low(drift));
}

GirsanovLog log_density(const Trajectory& traj, const ForcingSpec& spec, TransformWorkspace& ws,
                        std::size_t first, std::size_t last, const GirsanovOptions& options) {
  if (!traj.dense() || !traj.has_noise_log()) {
    throw Error(ErrorCode::kMissingNoiseLog, "log_density needs a dense trajectory with a noise log");
  }
  if (first > last || last >= traj.states.size()) {
    throw Error(ErrorCode::kInvalidArgument, "log_density: state range out of bounds");
  }
  GirsanovAccumulator acc(spec, traj.dt, traj.times[first], options);
  for (std::size_t i = first; i <= last; ++i) acc.push(traj.states[i], ws);
  GirsanovLog out = acc.log();
  out.t1 = traj.times[last];
  return out;
}

GirsanovLog log_density(const Trajectory& traj, const ForcingSpec& spec, TransformWorkspace& ws,
                        const GirsanovOptions& options) {
  if (traj.states.empty()) {
    throw Error(ErrorCode::kMissingNoiseLog, "log_density: empty trajectory");
  }
  return log_density(traj, spec, ws, 0, traj.states.size() - 1, options);
}

ReferencePath sample_reference_path(const VorticityField& w0, const ForcingSpec& spec, double t_end,
                                    double dt, Rng& rng, TransformWorkspace& ws,
                                    const GirsanovOptions& options, Trajectory* record) {
  const int per_unit = steps_per_unit(dt);
  const std::size_t n = step_count(t_end, dt);
  const auto& grid = w0.grid();
  const ExponentialStepper stepper(grid, dt);
  GirsanovAccumulator acc(spec, dt, 0.0, options);
  if (record) {
    *record = Trajectory{};
    record->dt = dt;
    record->stride = 1;
  }

  VorticityField w = w0;
  for (std::size_t i = 0; i < n; ++i) {
    const DriftEval d = drift(w, ws);
    acc.push(w, d.total);
    VorticityField db = sample_increment(spec, dt, rng);
    VorticityField next(grid);
    for (std::size_t m = 0; m < next.size(); ++m) {
      next[m] = grid.is_low(m) ? w[m] + db[m]
                               : stepper.decay(m) * w[m] + stepper.phi_dt(m) * d.nonlinear[m];
    }
    if (!next.all_finite()) {
      const double t = static_cast<double>(i + 1) / per_unit;
      throw NonfiniteStateError(t, "reference path: nonfinite state at t = " + std::to_string(t));
    }
    if (record) {
      record->times.push_back(static_cast<double>(i) / per_unit);
      record->states.push_back(w);
      record->noise_log.push_back(std::move(db));
    }
    w = std::move(next);
  }
  acc.push(w, VorticityField(grid));
  if (record) {
    record->times.push_back(static_cast<double>(n) / per_unit);
    record->states.push_back(w);
  }
  GirsanovLog log = acc.log();
  log.t1 = static_cast<double>(n) / per_unit;
  return {std::move(w), std::move(log)};
}

ReweightedEstimate reweighted_expectation(std::span<const WeightedSample> samples,
                                          double ess_fraction) {
  ReweightedEstimate out;
  out.n = samples.size();
  if (samples.empty()) return out;
  std::vector<double> weights(samples.size());
  std::vector<double> weighted(samples.size());
  std::vector<double> squares(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    weights[i] = std::exp(samples[i].log_weight);
    weighted[i] = weights[i] * samples[i].value;
    squares[i] = weights[i] * weights[i];
  }
  const double n = static_cast<double>(samples.size());
  out.estimate = mean(weighted);
  out.mean_weight = mean(weights);
  auto standard_error = [&](const std::vector<double>& v, double m) {
    if (v.size() < 2) return 0.0;
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = (v[i] - m) * (v[i] - m);
    return std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
  };
  out.standard_error = standard_error(weighted, out.estimate);
  out.weight_standard_error = standard_error(weights, out.mean_weight);
  const double total = pairwise_sum(weights);
  const double total_sq = pairwise_sum(squares);
  out.ess = total_sq > 0.0 ? total * total / total_sq : 0.0;
  out.low_ess = out.ess < ess_fraction * n;
  return out;
}

std::vector<WeightedSample> sample_weighted(const VorticityField& w0, const ForcingSpec& spec,
                                            double t_end, double dt, std::size_t n,
                                            const Observable& observable, std::uint64_t seed,
                                            const ParallelContext& ctx,
                                            const GirsanovOptions& options) {
  std::vector<WeightedSample> out(n);
  std::vector<std::optional<TransformWorkspace>> workspaces(
      static_cast<std::size_t>(std::max(1, ctx.workers)));
  GirsanovOptions opts = options;
  opts.keep_increments = false;
  parallel_for(n, ctx, [&](std::size_t i, int worker) {
    auto& ws = workspaces[static_cast<std::size_t>(worker)];
    if (!ws) ws.emplace(w0.grid());
    Rng rng(derive_seed(seed, "girsanov", i));
    const ReferencePath path = sample_reference_path(w0, spec, t_end, dt, rng, *ws, opts);
    out[i] = {path.log.total(), observable(path.final_state)};
  });
  return out;
}

}  // namespace vortmix
