#include <cmath>

#include "doctest.h"
#include "vortmix/error.hpp"
#include "vortmix/mixing.hpp"

using namespace vortmix;

TEST_CASE("identical initial conditions stay coupled") {
  const SpectralGrid grid(4, 2);
  const auto spec = uniform_spec(grid, 1.0);
  Rng rng(1);
  const auto w = sample_gaussian_field(grid, 1.0, rng);
  const auto report = couple(w, w, spec, 4.0, 1e-2, 7);
  REQUIRE(report.times.size() == 5);
  for (double d : report.d_full) CHECK(d == 0.0);
  CHECK_FALSE(report.fit.defined);
}

TEST_CASE("coupling matches two independent runs on one noise stream") {
  const SpectralGrid grid(6, 2);
  const auto spec = uniform_spec(grid, 1.0);
  Rng rng(2);
  const auto w1 = sample_gaussian_field(grid, 1.0, rng);
  const auto w2 = sample_gaussian_field(grid, 1.0, rng);
  const double t_end = 4.0;
  const double dt = 1e-2;
  const auto report = couple(w1, w2, spec, t_end, dt, 11);

  RecordPolicy policy;
  Rng noise1(derive_seed(11, "couple", 0));
  Rng noise2(derive_seed(11, "couple", 0));
  const auto a = simulate(w1, spec, t_end, dt, noise1, policy);
  const auto b = simulate(w2, spec, t_end, dt, noise2, policy);
  REQUIRE(a.states.size() == report.times.size());
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    const auto diff = a.states[i] - b.states[i];
    CHECK(report.d_full[i] == doctest::Approx(norm(diff)).epsilon(1e-8));
    const double lhs = report.d_full[i] * report.d_full[i];
    const double rhs = report.d_low[i] * report.d_low[i] + report.d_high[i] * report.d_high[i];
    CHECK(std::abs(lhs - rhs) <= 1e-10 * lhs);
  }

  const auto again = couple(w1, w2, spec, t_end, dt, 11);
  CHECK(again.d_full == report.d_full);
  CHECK(again.fit.rate == report.fit.rate);
}

TEST_CASE("high-mode difference contracts") {
  const SpectralGrid grid(6, 2);
  const auto spec = uniform_spec(grid, 1.0);
  Rng rng(3);
  const auto w2 = sample_gaussian_field(grid, 1.0, rng);
  const auto w1 = w2 + project_high(sample_gaussian_field(grid, 1.0, rng));
  const auto report = couple(w1, w2, spec, 20.0, 1e-2, 5);
  CHECK(report.d_low.front() == 0.0);
  CHECK(report.d_high.back() < report.d_high.front());
  REQUIRE(report.fit.defined);
  CHECK(report.fit.rate < 0.0);
  CHECK(report.fit.ci.upper < 0.0);
  // Pythagoras throughout, including far below the fields' own roundoff.
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    const double lhs = report.d_full[i] * report.d_full[i];
    const double rhs = report.d_low[i] * report.d_low[i] + report.d_high[i] * report.d_high[i];
    CHECK(std::abs(lhs - rhs) <= 1e-10 * lhs);
    CHECK(report.d_full[i] > 0.0);
  }
}

TEST_CASE("stationary samples") {
  const SpectralGrid grid(4, 2);
  const auto spec = uniform_spec(grid, 1.0);
  const VorticityField zero(grid);

  StationaryOptions none;
  CHECK(stationary_sample(zero, spec, none, 1).empty());

  StationaryOptions opts;
  opts.dt = 1e-2;
  opts.burn_in = 5.0;
  opts.gap = 0.5;
  opts.samples = 2000;
  auto enstrophy = [&](std::uint64_t seed, const VorticityField& w0, double burn_in) {
    StationaryOptions o = opts;
    o.burn_in = burn_in;
    const auto states = stationary_sample(w0, spec, o, seed);
    std::vector<double> e;
    for (const auto& w : states) e.push_back(l2_norm_sq(w));
    return e;
  };
  const auto a = enstrophy(1, zero, 5.0);
  const auto b = enstrophy(2, zero, 5.0);
  REQUIRE(a.size() == 2000);
  const auto ma = batch_mean(a);
  const auto mb = batch_mean(b);
  CHECK(ma.standard_error > 0.0);
  CHECK(std::abs(ma.mean - mb.mean) <= 3.0 * std::hypot(ma.standard_error, mb.standard_error));

  // From a field with ||w0||^2 >> R the early mean is inflated; burn-in removes it.
  Rng rng(4);
  VorticityField big = sample_gaussian_field(grid, 1.0, rng);
  big *= std::sqrt(200.0 / l2_norm_sq(big));
  opts.samples = 400;
  const auto cold = batch_mean(enstrophy(3, big, 0.0));
  const auto warm = batch_mean(enstrophy(3, big, 20.0));
  CHECK(std::abs(warm.mean - ma.mean) < std::abs(cold.mean - ma.mean));
  CHECK(std::abs(warm.mean - ma.mean) <= 3.0 * std::hypot(warm.standard_error, ma.standard_error));

  StationaryOptions bad = opts;
  bad.gap = 0.015;
  CHECK_THROWS_AS(stationary_sample(zero, spec, bad, 1), Error);
}

TEST_CASE("autocovariance of an AR(1) series") {
  // x_{i+1} = a x_i + e_i: covariance at lag k is a^k / (1 - a^2), rate log(a) / gap.
  Rng rng(5);
  const double a = 0.8;
  const double gap = 0.1;
  std::vector<double> series(40000);
  double x = 0.0;
  for (double& v : series) {
    x = a * x + rng.normal();
    v = x;
  }
  const std::vector<double> lags{0.0, 0.1, 0.2, 0.3, 0.5, 0.8};
  const auto report = autocovariance_report(series, gap, lags, 200, 200, rng);
  REQUIRE(report.autocovariance.size() == lags.size());
  for (std::size_t k = 0; k < lags.size(); ++k) {
    const double expected = std::pow(a, lags[k] / gap) / (1.0 - a * a);
    CHECK(std::abs(report.autocovariance[k] - expected) <= 4.0 * report.standard_error[k]);
  }
  REQUIRE(report.fit.defined);
  CHECK(report.fit.ci.contains(std::log(a) / gap));
  CHECK(report.fit.ci.upper < 0.0);

  const std::vector<double> constant(1000, 2.5);
  const auto flat = autocovariance_report(constant, gap, lags, 50, 20, rng);
  for (double c : flat.autocovariance) CHECK(c == 0.0);
  CHECK_FALSE(flat.fit.defined);

  const std::vector<double> off_grid{0.0, 0.15};
  CHECK_THROWS_AS(autocovariance_report(series, gap, off_grid, 200, 10, rng), Error);
}

TEST_CASE("correlation decay of a forced mode") {
  const SpectralGrid grid(4, 2);
  const auto spec = uniform_spec(grid, 1.0);
  CorrelationOptions opts;
  opts.run.dt = 1e-2;
  opts.run.burn_in = 5.0;
  opts.run.gap = 0.1;
  opts.run.samples = 20000;
  opts.block_length = 100;
  opts.resamples = 100;
  const std::vector<double> lags{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  const std::size_t index = *grid.index_of({1, 0});
  const StateObservable mode = [&](const VorticityField& w) { return w[index].real(); };
  const auto report = correlation_decay(VorticityField(grid), spec, mode, lags, opts, 9);
  CHECK(report.autocovariance[0] > 0.0);
  REQUIRE(report.fit.defined);
  CHECK(report.fit.rate < 0.0);
  CHECK(report.fit.ci.upper < 0.0);
}
