#pragma once

// Unit-interval path functionals:
//
//   D_n = 1/2 sup_{[n-1,n]} ||w||^2 + int_{n-1}^n ||grad w||^2
//
// with the sup taken over recorded steps (both endpoints included) and the
// integral as a left-point sum. Both under-estimate by O(dt).
//
// The enstrophy balance on [n-1, n] is
//
//   1/2 ||w(n)||^2 + int ||grad w||^2 = 1/2 ||w(n-1)||^2 + R/2 + int (w, db)
//
// (R/2 is the Ito term for E|b_k(t)|^2 = gamma_k t per complex mode). Its
// residual integrates ||grad w||^2 exactly along the linear flow within each
// step, which is the interpolant the exponential integrator uses; with a
// left-point sum the mean residual would carry an O(dt sum gamma |k|^2) bias
// from the linear part alone.

#include <cstddef>
#include <span>
#include <vector>

#include "vortmix/forcing.hpp"
#include "vortmix/integrator.hpp"
#include "vortmix/stats.hpp"

namespace vortmix {

struct DiagnosticSeries {
  std::vector<double> Dn;             // entry n-1 is D_n
  std::vector<double> sup_enstrophy;  // 1/2 max ||w||^2 over the interval
  std::vector<double> dissipation;    // left-point int ||grad w||^2
  // Empty unless increments were available.
  std::vector<double> balance_residual;
  // Same with the realized quadratic variation 1/2 sum ||db||^2 in place of
  // R/2: the martingale part cancels pathwise, leaving only discretization error.
  std::vector<double> balance_residual_qv;
};

// Streams a trajectory step by step; matches the StepObserver signature.
class UnitIntervalAccumulator {
 public:
  UnitIntervalAccumulator(const SpectralGrid& grid, double dt, double R, bool track_balance);

  // db is the increment applied after `state`, nullptr for the final state.
  void observe(std::size_t step, const VorticityField& state, const VorticityField* db);
  const DiagnosticSeries& series() const { return series_; }
  DiagnosticSeries take() { return std::move(series_); }

 private:
  void open(const VorticityField& state);
  void close(const VorticityField& state);

  std::size_t per_unit_;
  double dt_;
  double R_;
  bool track_balance_;
  std::vector<double> weight_;  // (1 - e^{-2|k|^2 dt}) / 2 per stored mode
  bool open_ = false;
  double start_half_enstrophy_ = 0.0;
  double sup_ = 0.0;
  double dissipation_ = 0.0;
  ExactSum exact_dissipation_;
  ExactSum martingale_;
  ExactSum quadratic_variation_;
  DiagnosticSeries series_;
};

// Requires a dense trajectory (Error(kSamplingTooCoarse)); 1/dt must be an
// integer (Error(kAlignment)). A trailing partial interval is dropped. The
// balance series are filled when the noise log is present.
DiagnosticSeries compute_Dn(const Trajectory& traj, double R = 0.0);

// Per-interval balance residuals; throws Error(kMissingNoiseLog) without a noise log.
std::vector<double> balance_residual(const Trajectory& traj, const ForcingSpec& spec);

struct TailRow {
  double threshold = 0.0;
  std::size_t hits = 0;
  double frequency = 0.0;
  double frequency_lower = 0.0;  // normal-approximation 95% lower limit
  double bound = 0.0;
  bool pass = false;
};

struct ExpMomentReport {
  double t = 0.0;
  std::size_t samples = 0;
  double estimate = 0.0;  // mean of exp(||w(t)||^2 / 4R)
  Interval ci;            // 95% percentile bootstrap
  double bound = 0.0;     // 3 exp(e^{-t} ||w(0)||^2 / 4R)
  bool pass = false;      // ci.lower <= bound
  std::vector<TailRow> tails;  // P(||w(t)||^2 >= D) <= 3 e^{-D/4R} e^{e^{-t}||w(0)||^2/4R}
};

// enstrophy[i] = ||w_i(t)||^2 for an ensemble started from a common w(0).
ExpMomentReport exp_moment_check(std::span<const double> enstrophy, double initial_enstrophy,
                                 double R, double t, std::span<const double> thresholds,
                                 Rng& rng, int resamples = 1000);

struct TailSumRow {
  double beta = 0.0;
  std::size_t hits = 0;
  double frequency = 0.0;
  bool resolvable = false;
};

struct TailSumReport {
  int t = 0;
  int t_prime = 0;
  double mean_sum = 0.0;       // ensemble mean of sum D_n / (R |t'-t|)
  std::vector<TailSumRow> rows;
  LinearFit fit;               // log frequency against beta over resolvable rows
  double rate = 0.0;           // -slope / |t'-t|
  bool pass = false;           // slope < 0 with >= 3 resolvable rows
};

// dn[i] is the D_n series of ensemble member i. Sums D_n for n = t .. t'-1.
// A row is resolvable with at least `min_hits` hits and frequency <= 1/2.
TailSumReport tail_sum_check(const std::vector<std::vector<double>>& dn, double R, int t,
                             int t_prime, std::span<const double> betas,
                             std::size_t min_hits = 10);

}  // namespace vortmix
