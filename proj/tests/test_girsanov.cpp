#include <cmath>

#include "doctest.h"
#include "vortmix/error.hpp"
#include "vortmix/girsanov.hpp"
#include "vortmix/reduction.hpp"

using namespace vortmix;

namespace {

Trajectory noisy_run(const ForcingSpec& spec, const VorticityField& w0, double t_end, double dt,
                     std::uint64_t seed) {
  Rng rng(seed);
  RecordPolicy policy;
  policy.stride = 1;
  policy.noise = true;
  return simulate(w0, spec, t_end, dt, rng, policy);
}

}  // namespace

TEST_CASE("zero drift path has zero log-density") {
  const SpectralGrid grid(4, 2);
  const auto spec = uniform_spec(grid, 1.0);
  TransformWorkspace ws(grid);
  Rng rng(1);
  RecordPolicy policy;
  policy.stride = 1;
  policy.noise = true;
  policy.noise_off = true;
  const auto traj = simulate(VorticityField(grid), spec, 0.1, 0.01, rng, policy);
  const auto log = log_density(traj, spec, ws);
  CHECK(log.total() == 0.0);
  CHECK(log.increments.size() == 10);
  CHECK(log.t0 == 0.0);
  CHECK(log.t1 == doctest::Approx(0.1));
}

TEST_CASE("missing noise log is rejected") {
  const SpectralGrid grid(4, 2);
  const auto spec = uniform_spec(grid, 1.0);
  TransformWorkspace ws(grid);
  Rng rng(2);
  RecordPolicy policy;
  policy.stride = 1;
  const auto traj = simulate(VorticityField(grid), spec, 0.05, 0.01, rng, policy);
  try {
    log_density(traj, spec, ws);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingNoiseLog);
  }
}

TEST_CASE("constant drift against Wiener increments: exact Gaussian moments") {
  // total ~ Normal(-Q t / 2, Q t) with Q = (f, gamma^-1 f), so E exp(total) = 1.
  const SpectralGrid grid(3, 2);
  ForcingSpec spec(grid, [&] {
    std::vector<double> g(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid.is_low(i)) g[i] = 0.05 * static_cast<double>(i + 1);
    }
    return g;
  }());
  VorticityField f(grid);
  f.set({1, 0}, {0.3, -0.2});
  f.set({1, 1}, {-0.1, 0.4});
  f.set({0, 1}, {0.25, 0.0});
  const double q = gamma_inv_inner(spec, f, f);
  const double dt = 0.01;
  const double t = 0.5;
  const std::size_t steps = 50;
  const int paths = 20000;

  RunningStats totals;
  RunningStats weights;
  Rng rng(3);
  for (int p = 0; p < paths; ++p) {
    GirsanovAccumulator acc(spec, dt, 0.0, {0.0, false});
    VorticityField s(grid);
    for (std::size_t i = 0; i < steps; ++i) {
      acc.push(s, f);
      s += sample_increment(spec, dt, rng);
    }
    acc.push(s, f);
    totals.add(acc.log().total());
    weights.add(std::exp(acc.log().total()));
  }
  const double expected_mean = -0.5 * q * t;
  const double expected_var = q * t;
  CHECK(std::abs(totals.mean() - expected_mean) <= 3.0 * std::sqrt(expected_var / paths));
  // Sample variance of a Gaussian has relative SE sqrt(2 / n).
  CHECK(std::abs(totals.variance() / expected_var - 1.0) <= 3.0 * std::sqrt(2.0 / paths));
  CHECK(std::abs(weights.mean() - 1.0) <= 3.0 * weights.standard_error());
}

TEST_CASE("additivity and prefix discipline") {
  const SpectralGrid grid(6, 2);
  const auto spec = uniform_spec(grid, 1.0);
  TransformWorkspace ws(grid);
  Rng rng(4);
  const auto w0 = sample_gaussian_field(grid, 1.0, rng);
  const auto traj = noisy_run(spec, w0, 0.3, 1e-2, 5);
  const std::size_t last = traj.states.size() - 1;

  const auto whole = log_density(traj, spec, ws);
  for (std::size_t mid : {std::size_t{0}, std::size_t{1}, std::size_t{13}, last}) {
    const auto head = log_density(traj, spec, ws, 0, mid);
    const auto tail = log_density(traj, spec, ws, mid, last);
    const auto joined = concatenate(head, tail);
    CHECK(joined.total() == whole.total());
    CHECK(joined.increments == whole.increments);
    CHECK(head.total() + tail.total() == doctest::Approx(whole.total()).epsilon(1e-14));
  }

  // Increment i depends only on states 0..i+1: perturbing the future leaves it unchanged.
  Trajectory altered = traj;
  for (std::size_t i = 20; i <= last; ++i) altered.states[i] *= 1.5;
  const auto perturbed = log_density(altered, spec, ws);
  for (std::size_t i = 0; i + 1 < 20; ++i) CHECK(perturbed.increments[i] == whole.increments[i]);
  CHECK(perturbed.increments[19] != whole.increments[19]);

  GirsanovLog gap;
  gap.t0 = 5.0;
  gap.t1 = 6.0;
  CHECK_THROWS_AS(concatenate(whole, gap), Error);
}

TEST_CASE("reference path is consistent with the reduction and the log") {
  const SpectralGrid grid(6, 2);
  const auto spec = uniform_spec(grid, 1.0);
  TransformWorkspace ws(grid);
  Rng seed_rng(6);
  const auto w0 = sample_gaussian_field(grid, 1.0, seed_rng);
  Rng rng(7);
  Trajectory record;
  const auto path = sample_reference_path(w0, spec, 0.2, 1e-2, rng, ws, {}, &record);
  REQUIRE(record.states.size() == 21);
  REQUIRE(record.has_noise_log());
  CHECK(record.states.back() == path.final_state);
  for (std::size_t i = 0; i + 1 < record.states.size(); ++i) {
    CHECK(project_low(record.states[i + 1]) ==
          project_low(record.states[i]) + record.noise_log[i]);
  }
  const auto l = solve_l(extract_s_path(record), project_high(w0), ws);
  for (std::size_t i = 0; i < record.states.size(); ++i) {
    CHECK(l.values[i] == project_high(record.states[i]));
  }
  CHECK(log_density(record, spec, ws).total() == path.log.total());
}

TEST_CASE("weights normalize and reweighting reproduces direct simulation") {
  const SpectralGrid grid(4, 2);
  const auto spec = uniform_spec(grid, 1.0);
  Rng rng(8);
  const auto w0 = sample_gaussian_field(grid, 0.1, rng);
  const double t = 0.2;
  const double dt = 1e-2;
  const std::size_t n = 4000;
  const Observable low_enstrophy = [](const VorticityField& w) {
    return l2_norm_sq(project_low(w));
  };
  const ParallelContext ctx{2};

  const auto samples = sample_weighted(w0, spec, t, dt, n, low_enstrophy, 11, ctx);
  const auto est = reweighted_expectation(samples);
  CHECK(std::abs(est.mean_weight - 1.0) <= 3.0 * est.weight_standard_error);
  CHECK_FALSE(est.low_ess);

  std::vector<WeightedSample> ones(samples.begin(), samples.end());
  for (auto& s : ones) s.value = 1.0;
  const auto normalization = reweighted_expectation(ones);
  CHECK(normalization.estimate == est.mean_weight);

  RunningStats direct;
  TransformWorkspace ws(grid);
  for (std::size_t i = 0; i < n; ++i) {
    Rng path_rng(derive_seed(12, "direct", i));
    RecordPolicy policy;
    policy.stride = step_count(t, dt);
    const auto traj = simulate(w0, spec, t, dt, path_rng, policy, ws);
    direct.add(low_enstrophy(traj.states.back()));
  }
  const double combined = std::hypot(est.standard_error, direct.standard_error());
  CHECK(std::abs(est.estimate - direct.mean()) <= 3.0 * combined);

  const auto at_zero = sample_weighted(w0, spec, 0.0, dt, 3, low_enstrophy, 13, ctx);
  for (const auto& s : at_zero) {
    CHECK(s.log_weight == 0.0);
    CHECK(s.value == low_enstrophy(w0));
  }
}

TEST_CASE("clipping caps the drift and is flagged") {
  const SpectralGrid grid(4, 2);
  const auto spec = uniform_spec(grid, 1.0);
  TransformWorkspace ws(grid);
  Rng rng(9);
  const auto w0 = sample_gaussian_field(grid, 5.0, rng);
  const auto traj = noisy_run(spec, w0, 0.1, 1e-2, 10);
  const auto plain = log_density(traj, spec, ws);
  const auto capped = log_density(traj, spec, ws, {1e-3, true});
  CHECK_FALSE(plain.clipped);
  CHECK(capped.clipped);
  CHECK(std::abs(capped.total()) < std::abs(plain.total()));

  const std::vector<WeightedSample> degenerate{{50.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
  CHECK(reweighted_expectation(degenerate, 0.5).low_ess);
}
