#pragma once

// Low-mode Wiener forcing db with E b_k(t) conj(b_k(t')) = min(t, t') gamma_k on
// every forced lattice vector (|k|^2 <= n_force) and b_{-k} = conj(b_k).
//
// Sampling convention (the single home for it, see increment_sigma): gamma_k is
// the variance of the complex mode, so Re b_k and Im b_k are independent with
// variance gamma_k t / 2 each. Consequences used elsewhere:
//   E ||db||^2 = sum_k gamma_k dt = R dt          (Ito term of ||w||^2)
//   Var (f, gamma^-1 db) = (f, gamma^-1 f) dt      (Girsanov normalization)

#include <iosfwd>
#include <vector>

#include "vortmix/rng.hpp"
#include "vortmix/spectral.hpp"

namespace vortmix {

class ForcingSpec {
 public:
  // gamma indexed by storage index; must be > 0 on low modes and 0 elsewhere.
  ForcingSpec(SpectralGrid grid, std::vector<double> gamma);

  const SpectralGrid& grid() const { return grid_; }
  // Variance of mode i (storage index); zero on high modes.
  double gamma(std::size_t i) const { return gamma_[i]; }
  const std::vector<double>& gammas() const { return gamma_; }

  // sum over the full lattice (both signs), accumulated in storage order.
  double R() const { return R_; }
  double rho() const { return rho_; }
  double max_gamma() const { return max_gamma_; }
  // kappa = n_force / R, so that n_force = kappa R holds exactly.
  double kappa() const { return static_cast<double>(grid_.n_force()) / R_; }

 private:
  SpectralGrid grid_;
  std::vector<double> gamma_;
  double R_ = 0.0;
  double rho_ = 0.0;
  double max_gamma_ = 0.0;
};

// Total over the full lattice, accumulated in storage order as 2 * gamma per mode.
double total_variance(const std::vector<double>& gamma);

// gamma_k = R / (number of forced lattice vectors, both signs); the last stored
// low mode is adjusted so the total is exactly R.
ForcingSpec uniform_spec(const SpectralGrid& grid, double R);

// Reads "k1 k2 gamma" lines ('#' comments allowed) replacing entries of `base`.
// Either sign of k may be given. Throws Error(kConfig) for modes outside
// |k|^2 <= n_force, nonpositive gamma or malformed lines.
ForcingSpec apply_override(const ForcingSpec& base, std::istream& in);

// Standard deviation of Re db_k (and of Im db_k) for variance gamma over dt.
double increment_sigma(double gamma, double dt);

VorticityField sample_increment(const ForcingSpec& spec, double dt, Rng& rng);

// sum_{|k|^2 <= N} Re(conj(f_k) g_k) / gamma_k over the full lattice.
// Throws Error(kPrecondition) if f or g has support outside the low modes.
double gamma_inv_inner(const ForcingSpec& spec, const VorticityField& f, const VorticityField& g);

}  // namespace vortmix
