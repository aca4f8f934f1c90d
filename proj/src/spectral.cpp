#include "vortmix/spectral.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "vortmix/error.hpp"

namespace vortmix {

struct SpectralGrid::Layout {
  std::vector<Wavevector> modes;
  std::vector<int> norms;
  // Box position (k1 + kmax) * (2 kmax + 1) + (k2 + kmax) -> storage index, or -1.
  std::vector<std::ptrdiff_t> lookup;
  std::size_t low_count = 0;
};

SpectralGrid::SpectralGrid(int kmax, int n_force) : kmax_(kmax), n_force_(n_force) {
  if (kmax < 1) throw Error(ErrorCode::kInvalidArgument, "kmax must be >= 1");
  if (n_force < 1) throw Error(ErrorCode::kInvalidArgument, "n_force must be >= 1");
  if (n_force > 2 * kmax * kmax) {
    throw Error(ErrorCode::kInvalidArgument,
                "n_force must be <= 2*kmax^2 (every low mode representable)");
  }
  auto layout = std::make_shared<Layout>();
  const int side = 2 * kmax + 1;
  layout->lookup.assign(static_cast<std::size_t>(side * side), -1);
  for (int k1 = 0; k1 <= kmax; ++k1) {
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      const Wavevector k{k1, k2};
      if (!k.canonical()) continue;
      layout->lookup[static_cast<std::size_t>((k1 + kmax) * side + (k2 + kmax))] =
          static_cast<std::ptrdiff_t>(layout->modes.size());
      layout->modes.push_back(k);
      layout->norms.push_back(k.norm_sq());
      if (k.norm_sq() <= n_force) ++layout->low_count;
    }
  }
  layout_ = std::move(layout);
}

std::size_t SpectralGrid::size() const { return layout_->modes.size(); }
std::size_t SpectralGrid::low_count() const { return layout_->low_count; }
Wavevector SpectralGrid::mode(std::size_t index) const { return layout_->modes[index]; }
int SpectralGrid::norm_sq(std::size_t index) const { return layout_->norms[index]; }

std::optional<std::size_t> SpectralGrid::index_of(Wavevector k) const {
  if (std::abs(k.k1) > kmax_ || std::abs(k.k2) > kmax_) return std::nullopt;
  const int side = 2 * kmax_ + 1;
  const auto idx = layout_->lookup[static_cast<std::size_t>((k.k1 + kmax_) * side + (k.k2 + kmax_))];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

VorticityField::VorticityField(SpectralGrid grid)
    : grid_(std::move(grid)), coeffs_(grid_.size(), Complex{}) {}

VorticityField::VorticityField(SpectralGrid grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "coefficient count does not match grid");
  }
}

Complex VorticityField::at(Wavevector k) const {
  if (k.k1 == 0 && k.k2 == 0) return {};
  if (k.canonical()) {
    const auto idx = grid_.index_of(k);
    return idx ? coeffs_[*idx] : Complex{};
  }
  const auto idx = grid_.index_of(-k);
  return idx ? std::conj(coeffs_[*idx]) : Complex{};
}

void VorticityField::set(Wavevector k, Complex value) {
  if (k.k1 == 0 && k.k2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "the k = 0 mode is fixed to zero");
  }
  const bool canon = k.canonical();
  const auto idx = grid_.index_of(canon ? k : -k);
  if (!idx) throw Error(ErrorCode::kInvalidArgument, "wavevector outside the grid");
  coeffs_[*idx] = canon ? value : std::conj(value);
}

bool VorticityField::is_zero() const {
  for (const auto& c : coeffs_) {
    if (c != Complex{}) return false;
  }
  return true;
}

bool VorticityField::all_finite() const {
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

VorticityField& VorticityField::operator+=(const VorticityField& other) {
  if (!(grid_ == other.grid_)) throw Error(ErrorCode::kInvalidArgument, "grid mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

VorticityField& VorticityField::operator-=(const VorticityField& other) {
  if (!(grid_ == other.grid_)) throw Error(ErrorCode::kInvalidArgument, "grid mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

VorticityField& VorticityField::operator*=(double scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

VorticityField project_low(const VorticityField& w) {
  VorticityField out(w.grid());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w.grid().is_low(i)) out[i] = w[i];
  }
  return out;
}

VorticityField project_high(const VorticityField& w) {
  VorticityField out(w.grid());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w.grid().is_low(i)) out[i] = w[i];
  }
  return out;
}

VelocitySpectrum velocity_from_vorticity(const VorticityField& w) {
  const auto& grid = w.grid();
  VelocitySpectrum u{grid, std::vector<std::array<Complex, 2>>(w.size())};
  const Complex i_unit{0.0, 1.0};
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Wavevector k = grid.mode(i);
    const Complex scaled = i_unit * w[i] / static_cast<double>(k.norm_sq());
    u.coeffs[i] = {-static_cast<double>(k.k2) * scaled, static_cast<double>(k.k1) * scaled};
  }
  return u;
}

double inner(const VorticityField& a, const VorticityField& b) {
  if (!(a.grid() == b.grid())) throw Error(ErrorCode::kInvalidArgument, "grid mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  }
  return 2.0 * sum;
}

double l2_norm_sq(const VorticityField& w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += std::norm(w[i]);
  return 2.0 * sum;
}

double h1_seminorm_sq(const VorticityField& w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    sum += static_cast<double>(w.grid().norm_sq(i)) * std::norm(w[i]);
  }
  return 2.0 * sum;
}

double norm(const VorticityField& w) { return std::sqrt(l2_norm_sq(w)); }

VorticityField sample_gaussian_field(const SpectralGrid& grid, double amplitude, Rng& rng) {
  if (amplitude < 0.0) throw Error(ErrorCode::kInvalidArgument, "amplitude must be >= 0");
  VorticityField w(grid);
  const double sigma = amplitude / std::sqrt(2.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    w[i] = {sigma * re, sigma * im};
  }
  return w;
}

std::vector<Complex> full_lattice(const VorticityField& w) {
  const int kmax = w.grid().kmax();
  const int side = 2 * kmax + 1;
  std::vector<Complex> out(static_cast<std::size_t>(side * side));
  for (int k1 = -kmax; k1 <= kmax; ++k1) {
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      out[static_cast<std::size_t>((k1 + kmax) * side + (k2 + kmax))] = w.at({k1, k2});
    }
  }
  return out;
}

namespace {

constexpr char kMagic[8] = {'V', 'O', 'R', 'T', '1', '\0', '\0', '\0'};

static_assert(std::endian::native == std::endian::little,
              "VORT1 I/O assumes a little-endian host");

void put_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

double get_f64(std::istream& in) {
  double v = 0.0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void write_vort1(std::ostream& out, const VorticityField& w) {
  out.write(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(w.grid().kmax()));
  put_u32(out, static_cast<std::uint32_t>(w.grid().n_force()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    put_f64(out, w[i].real());
    put_f64(out, w[i].imag());
  }
  if (!out) throw Error(ErrorCode::kIo, "failed to write VORT1 snapshot");
}

VorticityField read_vort1(std::istream& in) {
  char magic[8] = {};
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorCode::kIo, "not a VORT1 snapshot (bad magic)");
  }
  const auto kmax = get_u32(in);
  const auto n_force = get_u32(in);
  if (!in) throw Error(ErrorCode::kIo, "truncated VORT1 header");
  VorticityField w(SpectralGrid(static_cast<int>(kmax), static_cast<int>(n_force)));
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    w[i] = {re, im};
  }
  if (!in) throw Error(ErrorCode::kIo, "truncated VORT1 payload");
  return w;
}

}  // namespace vortmix
