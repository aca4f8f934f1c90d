#include "vortmix/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "vortmix/error.hpp"

namespace vortmix {

UnitIntervalAccumulator::UnitIntervalAccumulator(const SpectralGrid& grid, double dt, double R,
                                                 bool track_balance)
    : per_unit_(static_cast<std::size_t>(steps_per_unit(dt))),
      dt_(dt),
      R_(R),
      track_balance_(track_balance),
      weight_(grid.size()) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    weight_[i] = -0.5 * std::expm1(-2.0 * grid.norm_sq(i) * dt);
  }
}

void UnitIntervalAccumulator::open(const VorticityField& state) {
  open_ = true;
  start_half_enstrophy_ = 0.5 * l2_norm_sq(state);
  sup_ = start_half_enstrophy_;
  dissipation_ = 0.0;
  exact_dissipation_ = {};
  martingale_ = {};
  quadratic_variation_ = {};
}

void UnitIntervalAccumulator::close(const VorticityField& state) {
  const double end_half_enstrophy = 0.5 * l2_norm_sq(state);
  sup_ = std::max(sup_, end_half_enstrophy);
  series_.Dn.push_back(sup_ + dissipation_);
  series_.sup_enstrophy.push_back(sup_);
  series_.dissipation.push_back(dissipation_);
  if (track_balance_) {
    const double change = end_half_enstrophy + exact_dissipation_.value() - start_half_enstrophy_ -
                          martingale_.value();
    series_.balance_residual.push_back(change - 0.5 * R_);
    series_.balance_residual_qv.push_back(change - 0.5 * quadratic_variation_.value());
  }
  open_ = false;
}

void UnitIntervalAccumulator::observe(std::size_t step, const VorticityField& state,
                                      const VorticityField* db) {
  if (step % per_unit_ == 0) {
    if (open_) close(state);
    if (!db) return;
    open(state);
  }
  if (!open_ || !db) return;
  const double half = 0.5 * l2_norm_sq(state);
  sup_ = std::max(sup_, half);
  dissipation_ += h1_seminorm_sq(state) * dt_;
  if (track_balance_) {
    double exact = 0.0;
    double qv = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
      exact += weight_[i] * std::norm(state[i] + (*db)[i]);
      qv += std::norm((*db)[i]);
    }
    exact_dissipation_.add(2.0 * exact);
    quadratic_variation_.add(2.0 * qv);
    martingale_.add(inner(state, *db));
  }
}

DiagnosticSeries compute_Dn(const Trajectory& traj, double R) {
  if (!traj.dense()) {
    throw Error(ErrorCode::kSamplingTooCoarse, "compute_Dn needs a densely recorded trajectory");
  }
  if (traj.states.empty()) return {};
  const bool noise = traj.has_noise_log();
  UnitIntervalAccumulator acc(traj.states.front().grid(), traj.dt, R, noise);
  const VorticityField zero(traj.states.front().grid());
  const std::size_t last = traj.states.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    const VorticityField* db = i == last ? nullptr : (noise ? &traj.noise_log[i] : &zero);
    acc.observe(i, traj.states[i], db);
  }
  return acc.take();
}

std::vector<double> balance_residual(const Trajectory& traj, const ForcingSpec& spec) {
  if (!traj.has_noise_log()) {
    throw Error(ErrorCode::kMissingNoiseLog, "balance_residual needs the noise log");
  }
  return compute_Dn(traj, spec.R()).balance_residual;
}

ExpMomentReport exp_moment_check(std::span<const double> enstrophy, double initial_enstrophy,
                                 double R, double t, std::span<const double> thresholds,
                                 Rng& rng, int resamples) {
  if (enstrophy.empty() || R <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "exp_moment_check: need samples and R > 0");
  }
  ExpMomentReport report;
  report.t = t;
  report.samples = enstrophy.size();
  std::vector<double> moments(enstrophy.size());
  for (std::size_t i = 0; i < enstrophy.size(); ++i) moments[i] = std::exp(enstrophy[i] / (4.0 * R));
  report.estimate = mean(moments);
  report.ci = bootstrap_mean(moments, resamples, 0.95, rng);
  const double memory = std::exp(std::exp(-t) * initial_enstrophy / (4.0 * R));
  report.bound = 3.0 * memory;
  report.pass = report.ci.lower <= report.bound;

  const double n = static_cast<double>(enstrophy.size());
  for (double threshold : thresholds) {
    TailRow row;
    row.threshold = threshold;
    row.hits = static_cast<std::size_t>(
        std::count_if(enstrophy.begin(), enstrophy.end(), [&](double e) { return e >= threshold; }));
    row.frequency = static_cast<double>(row.hits) / n;
    row.frequency_lower =
        std::max(0.0, row.frequency - 1.96 * std::sqrt(row.frequency * (1.0 - row.frequency) / n));
    row.bound = 3.0 * std::exp(-threshold / (4.0 * R)) * memory;
    row.pass = row.frequency_lower <= row.bound;
    report.tails.push_back(row);
  }
  return report;
}

TailSumReport tail_sum_check(const std::vector<std::vector<double>>& dn, double R, int t,
                             int t_prime, std::span<const double> betas, std::size_t min_hits) {
  if (!(t >= 1 && t_prime > t) || R <= 0.0 || dn.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "tail_sum_check: need 1 <= t < t', R > 0 and samples");
  }
  const double span = static_cast<double>(t_prime - t);
  std::vector<double> sums(dn.size());
  for (std::size_t i = 0; i < dn.size(); ++i) {
    if (dn[i].size() < static_cast<std::size_t>(t_prime - 1)) {
      throw Error(ErrorCode::kInvalidArgument, "tail_sum_check: D_n series too short");
    }
    double s = 0.0;
    for (int n = t; n < t_prime; ++n) s += dn[i][static_cast<std::size_t>(n - 1)];
    sums[i] = s;
  }

  TailSumReport report;
  report.t = t;
  report.t_prime = t_prime;
  report.mean_sum = mean(sums) / (R * span);
  std::vector<double> xs;
  std::vector<double> ys;
  const double n = static_cast<double>(sums.size());
  for (double beta : betas) {
    TailSumRow row;
    row.beta = beta;
    const double level = beta * R * span;
    row.hits = static_cast<std::size_t>(
        std::count_if(sums.begin(), sums.end(), [&](double s) { return s >= level; }));
    row.frequency = static_cast<double>(row.hits) / n;
    row.resolvable = row.hits >= min_hits && row.frequency <= 0.5;
    if (row.resolvable) {
      xs.push_back(beta);
      ys.push_back(std::log(row.frequency));
    }
    report.rows.push_back(row);
  }
  if (xs.size() >= 3) {
    report.fit = fit_line(xs, ys);
    report.rate = -report.fit.slope / span;
    report.pass = report.fit.slope < 0.0;
  }
  return report;
}

}  // namespace vortmix
