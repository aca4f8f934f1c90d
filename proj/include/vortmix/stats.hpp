#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vortmix/rng.hpp"

namespace vortmix {

// Running mean and variance (Welford). A constant stream yields its value exactly.
class RunningStats {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased
  double standard_error() const;
  void merge(const RunningStats& other);

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Exact floating-point summation (Shewchuk partials): value() is the correctly
// rounded sum of everything added, independent of the order of additions.
class ExactSum {
 public:
  void add(double x);
  void add(const ExactSum& other);
  double value() const;

 private:
  std::vector<double> partials_;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares y = intercept + slope x. Requires >= 2 distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double v) const { return lower <= v && v <= upper; }
};

// Percentile bootstrap of the OLS slope over resampled (x, y) pairs.
Interval bootstrap_slope(std::span<const double> x, std::span<const double> y, int resamples,
                         double level, Rng& rng);

// Percentile bootstrap of the mean.
Interval bootstrap_mean(std::span<const double> values, int resamples, double level, Rng& rng);

// Standard error of the mean of a correlated series from `batches` batch means.
double batch_means_se(std::span<const double> series, std::size_t batches);

double mean(std::span<const double> values);

// Empirical quantile with linear interpolation, q in [0, 1].
double quantile(std::vector<double> values, double q);

// Pairwise summation; used for ensemble reductions so the result depends only on
// the order of the inputs, not on how they were produced.
double pairwise_sum(std::span<const double> values);

}  // namespace vortmix
