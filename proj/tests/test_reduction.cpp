#include <cmath>

#include "doctest.h"
#include "vortmix/error.hpp"
#include "vortmix/reduction.hpp"

using namespace vortmix;

namespace {

Trajectory dense_run(const ForcingSpec& spec, const VorticityField& w0, double t_end, double dt,
                     std::uint64_t seed) {
  Rng rng(seed);
  RecordPolicy policy;
  policy.stride = 1;
  return simulate(w0, spec, t_end, dt, rng, policy);
}

}  // namespace

TEST_CASE("extract_s_path") {
  const SpectralGrid grid(4, 2);
  const auto spec = uniform_spec(grid, 1.0);
  Rng rng(1);
  const auto w0 = sample_gaussian_field(grid, 1.0, rng);

  const auto traj = dense_run(spec, w0, 0.1, 0.01, 2);
  const auto s = extract_s_path(traj);
  CHECK(s.values.size() == traj.states.size());
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    CHECK(project_high(s.values[i]).is_zero());
    CHECK(s.values[i] == project_low(traj.states[i]));
  }

  RecordPolicy quiet;
  quiet.stride = 1;
  quiet.noise_off = true;
  const auto zero = simulate(VorticityField(grid), spec, 0.05, 0.01, rng, quiet);
  for (const auto& v : extract_s_path(zero).values) CHECK(v.is_zero());

  RecordPolicy coarse;
  coarse.stride = 5;
  const auto sparse = simulate(w0, spec, 0.1, 0.01, rng, coarse);
  CHECK_THROWS_AS(extract_s_path(sparse), Error);
  try {
    extract_s_path(sparse);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSamplingTooCoarse);
  }
}

TEST_CASE("solve_l: pure decay of a single high pair") {
  const SpectralGrid grid(4, 2);
  TransformWorkspace ws(grid);
  SPath s;
  s.dt = 0.01;
  s.values.assign(101, VorticityField(grid));
  VorticityField l0(grid);
  l0.set({1, 1}, {0.0, 0.0});
  l0.set({0, 2}, {0.7, -0.3});  // |k|^2 = 4 > N
  const auto l = solve_l(s, l0, ws);
  REQUIRE(l.values.size() == 101);
  for (std::size_t i = 0; i < l.values.size(); ++i) {
    const double t = l.time(i);
    const auto expected = std::exp(-4.0 * t) * l0;
    CHECK(norm(l.values[i] - expected) <= 1e-13);
    CHECK(project_low(l.values[i]).is_zero());
  }

  VorticityField low(grid);
  low.set({1, 0}, {1.0, 0.0});
  CHECK_THROWS_AS(solve_l(s, low, ws), Error);
}

TEST_CASE("solve_l reproduces the high modes of a simulated trajectory") {
  const SpectralGrid grid(8, 2);
  const auto spec = uniform_spec(grid, 1.0);
  TransformWorkspace ws(grid);
  Rng rng(3);
  const auto w0 = sample_gaussian_field(grid, 0.5, rng);
  const auto traj = dense_run(spec, w0, 1.0, 1e-3, 4);
  const auto l = solve_l(extract_s_path(traj), project_high(w0), ws);
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    worst = std::max(worst, norm(l.values[i] - project_high(traj.states[i])));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("solve_l stays bounded over ten time units") {
  const SpectralGrid grid(6, 2);
  const auto spec = uniform_spec(grid, 1.0);
  TransformWorkspace ws(grid);
  Rng rng(5);
  const auto w0 = sample_gaussian_field(grid, 1.0, rng);
  const auto s = extract_s_path(dense_run(spec, w0, 10.0, 1e-2, 6));
  double sup_s = 0.0;
  for (const auto& v : s.values) sup_s = std::max(sup_s, l2_norm_sq(v));
  const auto l0 = project_high(w0);
  const auto l = solve_l(s, l0, ws);
  // Energy estimate for the high modes: d/dt ||l||^2 <= -2(N+1)||l||^2 + C sup||s||^2 (...),
  // so a crude envelope suffices to detect blow-up.
  const double envelope = 10.0 * (1.0 + l2_norm_sq(l0) + sup_s) * (1.0 + sup_s);
  for (const auto& v : l.values) CHECK(l2_norm_sq(v) <= envelope);
}

TEST_CASE("semigroup identity") {
  const SpectralGrid grid(6, 2);
  const auto spec = uniform_spec(grid, 1.0);
  TransformWorkspace ws(grid);
  Rng rng(7);
  const auto w0 = sample_gaussian_field(grid, 1.0, rng);
  const auto s = extract_s_path(dense_run(spec, w0, 0.5, 1e-2, 8));
  const auto l0 = project_high(sample_gaussian_field(grid, 2.0, rng));
  const std::size_t last = s.values.size() - 1;
  CHECK(semigroup_check(s, l0, 0, ws) == 0.0);
  CHECK(semigroup_check(s, l0, last, ws) == 0.0);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t mid = 1 + rng.below(last - 1);
    CHECK(semigroup_check(s, l0, mid, ws) <= 1e-12 * std::max(1.0, norm(l0)));
  }
  CHECK_THROWS_AS(semigroup_check(s, l0, last + 1, ws), Error);
}

TEST_CASE("contraction report") {
  const SpectralGrid grid(8, 2);
  const auto spec = uniform_spec(grid, 1.0);
  TransformWorkspace ws(grid);
  const double a = constant_a().value;
  Rng rng(9);

  SUBCASE("identical initial conditions") {
    const auto s = extract_s_path(dense_run(spec, VorticityField(grid), 0.2, 1e-2, 10));
    const auto l1 = project_high(sample_gaussian_field(grid, 1.0, rng));
    const auto rows = contraction_report(s, l1, l1, a, ws);
    for (const auto& row : rows) CHECK(row.lhs == 0.0);
    CHECK(contraction_holds(rows, 1e-3));
  }

  SUBCASE("linear regime decays at least at rate N + 1") {
    SPath s;
    s.dt = 1e-3;
    s.values.assign(1001, VorticityField(grid));
    const auto l1 = project_high(sample_gaussian_field(grid, 1e-6, rng));
    const auto l2 = project_high(sample_gaussian_field(grid, 1e-6, rng));
    const auto rows = contraction_report(s, l1, l2, a, ws);
    const double n_force = grid.n_force();
    for (const auto& row : rows) {
      CHECK(row.lhs <= rows.front().lhs * std::exp(-(n_force + 1.0) * row.t) * (1.0 + 1e-9));
      CHECK(row.lhs <= row.rhs);
    }
    CHECK(contraction_holds(rows, 1e-3));
  }

  SUBCASE("random configurations satisfy the stated bound") {
    for (int trial = 0; trial < 5; ++trial) {
      const auto w0 = sample_gaussian_field(grid, 1.0, rng);
      const auto s = extract_s_path(dense_run(spec, w0, 0.5, 1e-3, 100 + trial));
      const auto l1 = project_high(w0);
      const auto l2 = project_high(sample_gaussian_field(grid, 1.0, rng));
      const auto rows = contraction_report(s, l1, l2, a, ws);
      CHECK(rows.size() == s.values.size());
      CHECK(contraction_holds(rows, 1e-3));
    }
  }
}
