#pragma once

// Truncated Fourier representation of zero-mean real fields on the torus
// (R/2piZ)^2.
//
// Convention: w_k = (1/2pi) int exp(i k.x) w(x) dx, so that
// w(x) = (1/2pi) sum_k exp(-i k.x) w_k and the physical L2 norm equals the plain
// coefficient sum sum_k |w_k|^2 over the full (both-signs) lattice. No other
// normalization factor appears in the norms below.
//
// Only the canonical half-lattice (k1 > 0, or k1 == 0 and k2 > 0) is stored, in
// lexicographic (k1, k2) order; w_{-k} = conj(w_k) is implicit and k = 0 is never
// stored.

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "vortmix/rng.hpp"

namespace vortmix {

using Complex = std::complex<double>;

struct Wavevector {
  int k1 = 0;
  int k2 = 0;

  int norm_sq() const { return k1 * k1 + k2 * k2; }
  bool canonical() const { return k1 > 0 || (k1 == 0 && k2 > 0); }
  Wavevector operator-() const { return {-k1, -k2}; }
  friend bool operator==(const Wavevector&, const Wavevector&) = default;
};

// Lattice box |k1|, |k2| <= kmax with forced cutoff n_force: modes with
// |k|^2 <= n_force are "low", the rest "high".
class SpectralGrid {
 public:
  SpectralGrid(int kmax, int n_force);

  int kmax() const { return kmax_; }
  int n_force() const { return n_force_; }

  // Number of stored (half-lattice) modes.
  std::size_t size() const;
  // Number of nonzero lattice vectors in the box, both signs counted.
  std::size_t full_mode_count() const { return 2 * size(); }
  std::size_t low_count() const;

  Wavevector mode(std::size_t index) const;
  int norm_sq(std::size_t index) const;
  bool is_low(std::size_t index) const { return norm_sq(index) <= n_force_; }

  // Storage index of a canonical wavevector inside the box.
  std::optional<std::size_t> index_of(Wavevector k) const;

  friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) {
    return a.kmax_ == b.kmax_ && a.n_force_ == b.n_force_;
  }

 private:
  struct Layout;
  int kmax_;
  int n_force_;
  std::shared_ptr<const Layout> layout_;
};

class VorticityField {
 public:
  explicit VorticityField(SpectralGrid grid);
  VorticityField(SpectralGrid grid, std::vector<Complex> coeffs);

  const SpectralGrid& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }

  Complex operator[](std::size_t i) const { return coeffs_[i]; }
  Complex& operator[](std::size_t i) { return coeffs_[i]; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }

  // Coefficient at any lattice vector: conjugate for non-canonical k, zero at
  // k = 0 and outside the box.
  Complex at(Wavevector k) const;
  // Sets w_k (and implicitly w_{-k} = conj). k must be nonzero and inside the box.
  void set(Wavevector k, Complex value);

  bool is_zero() const;
  bool all_finite() const;

  VorticityField& operator+=(const VorticityField& other);
  VorticityField& operator-=(const VorticityField& other);
  VorticityField& operator*=(double scale);

  friend VorticityField operator+(VorticityField a, const VorticityField& b) { return a += b; }
  friend VorticityField operator-(VorticityField a, const VorticityField& b) { return a -= b; }
  friend VorticityField operator*(double s, VorticityField a) { return a *= s; }
  friend bool operator==(const VorticityField& a, const VorticityField& b) {
    return a.grid_ == b.grid_ && a.coeffs_ == b.coeffs_;
  }

 private:
  SpectralGrid grid_;
  std::vector<Complex> coeffs_;
};

// u_k = i (-k2, k1) |k|^-2 w_k on the half-lattice; k . u_k = 0 by construction.
struct VelocitySpectrum {
  SpectralGrid grid;
  std::vector<std::array<Complex, 2>> coeffs;
};

VorticityField project_low(const VorticityField& w);
VorticityField project_high(const VorticityField& w);
VelocitySpectrum velocity_from_vorticity(const VorticityField& w);

// Real inner product sum_k conj(a_k) b_k over the full lattice.
double inner(const VorticityField& a, const VorticityField& b);
double l2_norm_sq(const VorticityField& w);
double h1_seminorm_sq(const VorticityField& w);
double norm(const VorticityField& w);

// Independent complex Gaussian coefficients with E|w_k|^2 = amplitude^2 for
// every lattice vector of the box (Re and Im each of variance amplitude^2 / 2).
VorticityField sample_gaussian_field(const SpectralGrid& grid, double amplitude, Rng& rng);

// Full (2 kmax + 1)^2 array, row-major in (k1 + kmax, k2 + kmax), including the
// conjugate half and a zero at k = 0.
std::vector<Complex> full_lattice(const VorticityField& w);

// Values of the physical field w(x) at x = 2pi (j1, j2) / m, row-major in
// (j1, j2). Requires m > 2 kmax.
std::vector<double> physical_values(const VorticityField& w, int m);

// VORT1 snapshot: 8-byte magic "VORT1\0\0\0", little-endian u32 kmax, u32
// n_force, then (re, im) little-endian f64 per stored mode in storage order.
void write_vort1(std::ostream& out, const VorticityField& w);
VorticityField read_vort1(std::istream& in);

}  // namespace vortmix
