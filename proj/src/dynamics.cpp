#include "vortmix/dynamics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "vortmix/error.hpp"

namespace vortmix {

VorticityField bilinear_direct(const VorticityField& a, const VorticityField& b) {
  const auto& grid = a.grid();
  if (!(grid == b.grid())) throw Error(ErrorCode::kInvalidArgument, "grid mismatch");
  const int kmax = grid.kmax();
  if (kmax > kDirectOracleMaxKmax) {
    throw Error(ErrorCode::kGridTooLarge,
                "direct convolution limited to kmax <= " + std::to_string(kDirectOracleMaxKmax));
  }
  const double prefactor = 1.0 / (2.0 * std::numbers::pi);
  const auto a_full = full_lattice(a);
  const auto b_full = full_lattice(b);
  const int side = 2 * kmax + 1;
  auto value = [&](const std::vector<Complex>& f, int k1, int k2) {
    return f[static_cast<std::size_t>((k1 + kmax) * side + (k2 + kmax))];
  };

  VorticityField out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Wavevector k = grid.mode(i);
    Complex sum{};
    for (int l1 = -kmax; l1 <= kmax; ++l1) {
      const int m1 = k.k1 - l1;
      if (m1 < -kmax || m1 > kmax) continue;
      for (int l2 = -kmax; l2 <= kmax; ++l2) {
        const int m2 = k.k2 - l2;
        if (m2 < -kmax || m2 > kmax) continue;
        // l = 0 is excluded; l = k contributes a_k b_0 = 0 since b_0 = 0.
        if (l1 == 0 && l2 == 0) continue;
        const double weight =
            static_cast<double>(k.k1 * l2 - l1 * k.k2) / static_cast<double>(l1 * l1 + l2 * l2);
        if (weight == 0.0) continue;
        sum += weight * value(a_full, l1, l2) * value(b_full, m1, m2);
      }
    }
    out[i] = prefactor * sum;
  }
  return out;
}

VorticityField nonlinear_direct(const VorticityField& w) { return bilinear_direct(w, w); }

VorticityField nonlinear_fast(const VorticityField& w, TransformWorkspace& ws) {
  const std::array<TransformWorkspace::Term, 1> terms{{{&w, &w}}};
  return ws.advection(terms);
}

VorticityField nonlinear_fast(const VorticityField& w) {
  TransformWorkspace ws(w.grid());
  return nonlinear_fast(w, ws);
}

DriftEval drift(const VorticityField& w, TransformWorkspace& ws, NonlinearPath path) {
  VorticityField linear(w.grid());
  for (std::size_t i = 0; i < w.size(); ++i) {
    linear[i] = -static_cast<double>(w.grid().norm_sq(i)) * w[i];
  }
  VorticityField nonlinear =
      path == NonlinearPath::kFast ? nonlinear_fast(w, ws) : nonlinear_direct(w);
  VorticityField total = linear + nonlinear;
  return {std::move(linear), std::move(nonlinear), std::move(total)};
}

VorticityField reduced_drift(const VorticityField& w, TransformWorkspace& ws) {
  return project_low(drift(w, ws).total);
}

LatticeConstant constant_a(int tail_cut) {
  if (tail_cut < 10) throw Error(ErrorCode::kInvalidArgument, "constant_a: tail_cut must be >= 10");
  const int cut = tail_cut;

  // Box sum, outermost ring first so small terms accumulate before large ones.
  double sum = 0.0;
  double carry = 0.0;
  auto add = [&](double term) {
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  };
  for (int ring = cut; ring >= 1; --ring) {
    // 8 * ring lattice points with max(|k1|, |k2|) == ring; by symmetry sum one
    // eighth-ish arc: points (ring, j) for j in (-ring, ring], times 4.
    double ring_sum = 0.0;
    for (int j = -ring + 1; j <= ring; ++j) {
      const double r2 = static_cast<double>(ring) * ring + static_cast<double>(j) * j;
      ring_sum += 1.0 / (r2 * r2);
    }
    add(4.0 * ring_sum);
  }

  // Tail over the complement of the box: each lattice point c is the centre of a
  // unit cell, and the midpoint rule with its Laplacian correction gives
  //   sum f(c) = int f - (1/24) sum Lap f(c) - sum R4,   Lap r^-4 = 16 r^-6,
  // with sum r^-6(c) replaced by its integral (remainder R2). Both integrals are
  // over the complement of the square of half-width L = cut + 1/2.
  const double pi = std::numbers::pi;
  const double half_width = cut + 0.5;
  const double tail_r4 = (pi / 2.0 + 1.0) / (half_width * half_width);
  const double tail_r6 = 2.0 * (3.0 * pi / 32.0 + 0.25) / std::pow(half_width, 4);
  const double tail = tail_r4 - (2.0 / 3.0) * tail_r6;

  // Remainders: |D^n_v r^-p| <= p (p+1) ... (p+n-1) r^-(p+n) along any unit
  // direction. Per cell, |R4| <= (840/24) * int |x|^4 * rmin^-8 = 35 * 7/180 * rmin^-8
  // and (2/3)|R2| <= (2/3) * (42/2) * int |x|^2 * rmin^-8 = (7/3) rmin^-8, where
  // rmin >= ring - sqrt(2)/2. Ring m holds 8m cells; the sum over rings m > cut is
  // bounded by 8 int_cut^inf x (x - c)^-8 dx.
  const double per_cell = 35.0 * 7.0 / 180.0 + 7.0 / 3.0;
  const double c = std::numbers::sqrt2 / 2.0;
  const double gap = cut - c;
  const double ring_bound = 8.0 * (std::pow(gap, -6) / 6.0 + c * std::pow(gap, -7) / 7.0);
  const double rounding = 1e-14 * sum;

  LatticeConstant out;
  out.lattice_sum = sum + tail;
  const double four_pi_sq = 4.0 * pi * pi;
  out.value = out.lattice_sum / four_pi_sq;
  out.error_bound = (per_cell * ring_bound + rounding) / four_pi_sq;
  return out;
}

}  // namespace vortmix
