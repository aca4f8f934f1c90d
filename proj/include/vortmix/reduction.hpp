#pragma once

// Finite-dimensional reduction: the high modes l = (1 - P) w solve the
// deterministic equation dl/dt = (1 - P) F(s + l) for a prescribed low-mode
// history s, discretized with the integrator's exponential scheme and s held
// at its left-point value over each step.

#include <cstddef>
#include <vector>

#include "vortmix/dynamics.hpp"
#include "vortmix/integrator.hpp"

namespace vortmix {

// Uniformly sampled path values[i] at time t0 + i dt.
struct FieldPath {
  double dt = 0.0;
  double t0 = 0.0;
  std::vector<VorticityField> values;

  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  double t1() const { return time(values.empty() ? 0 : values.size() - 1); }
  // Sub-path of values [first, last] (inclusive).
  FieldPath slice(std::size_t first, std::size_t last) const;
};

struct SPath : FieldPath {};
struct LPath : FieldPath {};

// Pointwise low projection. Throws Error(kSamplingTooCoarse) unless dense.
SPath extract_s_path(const Trajectory& traj);

// l(t, s([t0, t]), l0) at every instant of s. Requires l0 high-mode supported
// (Error(kPrecondition)); throws NonfiniteStateError on blow-up.
LPath solve_l(const SPath& s, const VorticityField& l0, TransformWorkspace& ws);

// || l(t1, s[t0,t1], l0) - l(t1, s[tm,t1], l(tm, s[t0,tm], l0)) || for the split
// at tm = t0 + mid * dt, 0 <= mid <= steps.
double semigroup_check(const SPath& s, const VorticityField& l0, std::size_t mid,
                       TransformWorkspace& ws);

struct ContractionRow {
  double t = 0.0;
  double lhs = 0.0;            // ||l(t, s, l1) - l(t, s, l2)||
  double rhs = 0.0;            // exp(-kappa R t + a int ||grad w1||^2) ||l1 - l2||, kappa R = N
  double rhs_gronwall = 0.0;   // exp((-(N+1) t + a int ||grad w1||^2) / 2) ||l1 - l2||
  double ratio = 0.0;          // lhs / rhs (0 when both vanish)
};

// a is the constant of dynamics.hpp; the integral uses the left-point Riemann
// sum on the instants of s.
std::vector<ContractionRow> contraction_report(const SPath& s, const VorticityField& l1,
                                               const VorticityField& l2, double a,
                                               TransformWorkspace& ws);

// lhs <= rhs (1 + slack) at every row.
bool contraction_holds(const std::vector<ContractionRow>& rows, double slack);

}  // namespace vortmix
