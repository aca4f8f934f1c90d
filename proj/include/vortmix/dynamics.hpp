#pragma once

// Drift of the vorticity equation,
//
//   F(w)_k = -|k|^2 w_k + B(w)_k,
//   B(w)_k = (1/2pi) sum_{l != 0, k} ((k1 l2 - l1 k2) / |l|^2) w_{k-l} w_l,
//
// which is -(u . grad w)_k in the normalization of spectral.hpp. B is evaluated
// either by the literal double sum (small grids only) or pseudo-spectrally on a
// zero-padded physical grid of size >= 3 kmax + 1, which makes the retained-mode
// convolution exact up to roundoff.

#include <memory>
#include <span>
#include <utility>

#include "vortmix/spectral.hpp"

namespace vortmix {

inline constexpr int kDirectOracleMaxKmax = 12;

// Smallest 2^a 3^b 5^c >= 3 kmax + 1.
int padded_size_for(int kmax);

// Per-worker FFT scratch space. Not thread-safe; construct one per thread.
class TransformWorkspace {
 public:
  explicit TransformWorkspace(const SpectralGrid& grid);
  ~TransformWorkspace();
  TransformWorkspace(TransformWorkspace&&) noexcept;
  TransformWorkspace& operator=(TransformWorkspace&&) noexcept;
  TransformWorkspace(const TransformWorkspace&) = delete;
  TransformWorkspace& operator=(const TransformWorkspace&) = delete;

  const SpectralGrid& grid() const;
  int padded_size() const;

  using Term = std::pair<const VorticityField*, const VorticityField*>;
  // -sum_i u(a_i) . grad(b_i), projected onto the grid.
  VorticityField advection(std::span<const Term> terms);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Literal double sum. Throws Error(kGridTooLarge) above kDirectOracleMaxKmax.
VorticityField nonlinear_direct(const VorticityField& w);
// -(u(a) . grad b) by direct summation:
// B(a, b)_k = (1/2pi) sum_l ((k1 l2 - l1 k2)/|l|^2) a_l b_{k-l}, so B(w, w) = B(w).
VorticityField bilinear_direct(const VorticityField& a, const VorticityField& b);

VorticityField nonlinear_fast(const VorticityField& w, TransformWorkspace& ws);
VorticityField nonlinear_fast(const VorticityField& w);

enum class NonlinearPath { kFast, kDirect };

struct DriftEval {
  VorticityField linear;
  VorticityField nonlinear;
  VorticityField total;
};

DriftEval drift(const VorticityField& w, TransformWorkspace& ws,
                NonlinearPath path = NonlinearPath::kFast);

// f(w) = P F(w), supported on |k|^2 <= n_force.
VorticityField reduced_drift(const VorticityField& w, TransformWorkspace& ws);

struct LatticeConstant {
  double lattice_sum = 0.0;  // sum_{k != 0} |k|^-4
  double value = 0.0;        // lattice_sum / (2pi)^2
  double error_bound = 0.0;  // certified bound on |value - true a|
};

// a = (2pi)^-2 sum_{k in Z^2 \ 0} |k|^-4: direct sum over the box
// |k1|, |k2| <= tail_cut plus a corrected integral for the tail, with a
// certified remainder bound. Requires tail_cut >= 10.
LatticeConstant constant_a(int tail_cut = 100);

}  // namespace vortmix
