#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "vortmix/dynamics.hpp"
#include "vortmix/error.hpp"

namespace vortmix {

namespace {

// The FFTW planner is not re-entrant; plan creation and destruction go through here.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool smooth_number(int n) {
  for (int p : {2, 3, 5}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

// Real-to-complex plan pair on an m x m grid with FFTW_ESTIMATE, which chooses
// the same algorithm on every run (bitwise reproducible output).
class FftPair {
 public:
  explicit FftPair(int m) : m_(m), half_(m / 2 + 1) {
    spectral_ = fftw_alloc_complex(static_cast<std::size_t>(m_ * half_));
    physical_ = fftw_alloc_real(static_cast<std::size_t>(m_ * m_));
    std::lock_guard lock(planner_mutex());
    c2r_ = fftw_plan_dft_c2r_2d(m_, m_, spectral_, physical_, FFTW_ESTIMATE);
    r2c_ = fftw_plan_dft_r2c_2d(m_, m_, physical_, spectral_, FFTW_ESTIMATE);
  }

  ~FftPair() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(c2r_);
      fftw_destroy_plan(r2c_);
    }
    fftw_free(spectral_);
    fftw_free(physical_);
  }

  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;

  int m() const { return m_; }
  int half() const { return half_; }
  fftw_complex* spectral() { return spectral_; }
  double* physical() { return physical_; }

  void clear_spectral() {
    for (int i = 0; i < m_ * half_; ++i) {
      spectral_[i][0] = 0.0;
      spectral_[i][1] = 0.0;
    }
  }

  // Stores value at wavevector q of the half-complex array. Entries with
  // q2 == 0 must be supplied for both signs of q1.
  void put(int q1, int q2, Complex value) {
    const int row = ((q1 % m_) + m_) % m_;
    auto& cell = spectral_[row * half_ + q2];
    cell[0] = value.real();
    cell[1] = value.imag();
  }

  Complex get(int q1, int q2) const {
    const int row = ((q1 % m_) + m_) % m_;
    const auto& cell = spectral_[row * half_ + q2];
    return {cell[0], cell[1]};
  }

  void to_physical() { fftw_execute(c2r_); }
  void to_spectral() { fftw_execute(r2c_); }

 private:
  int m_;
  int half_;
  fftw_complex* spectral_ = nullptr;
  double* physical_ = nullptr;
  fftw_plan c2r_ = nullptr;
  fftw_plan r2c_ = nullptr;
};

// Loads the physical-space synthesis sum_k g_k exp(-i k.x) of the field whose
// half-lattice coefficients are coeff(i) * w_i, with coeff(i) given per storage
// index. The c2r transform uses exp(+i q.x), so position q holds g_{-q} = conj(g_q).
template <typename Coeff>
void load_synthesis(FftPair& fft, const VorticityField& w, Coeff coeff) {
  fft.clear_spectral();
  const auto& grid = w.grid();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const Wavevector k = grid.mode(i);
    const Complex g = coeff(k) * w[i];
    // g_{-q} at q = k is conj(g_k); at q = -k it is g_k.
    if (k.k2 >= 0) fft.put(k.k1, k.k2, std::conj(g));
    if (k.k2 <= 0) fft.put(-k.k1, -k.k2, g);
  }
  fft.to_physical();
}

}  // namespace

int padded_size_for(int kmax) {
  int m = 3 * kmax + 1;
  while (!smooth_number(m)) ++m;
  return m;
}

struct TransformWorkspace::Impl {
  explicit Impl(const SpectralGrid& g)
      : grid(g), fft(padded_size_for(g.kmax())),
        velocity1(static_cast<std::size_t>(fft.m() * fft.m())),
        velocity2(velocity1.size()),
        product(velocity1.size()) {
    const int m = fft.m();
    const int half = fft.half();
    auto cell = [&](int q1, int q2) { return (((q1 % m) + m) % m) * half + q2; };
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Wavevector k = grid.mode(i);
      const double k2 = k.norm_sq();
      modes.push_back({k.k2 >= 0 ? cell(k.k1, k.k2) : -1, k.k2 <= 0 ? cell(-k.k1, -k.k2) : -1,
                       static_cast<double>(k.k1), static_cast<double>(k.k2), k2});
    }
  }

  // Half-complex cells for +k (conjugate stored) and -k, or -1 when absent.
  struct ModeCells {
    int plus;
    int minus;
    double k1;
    double k2;
    double norm_sq;
  };

  // Same values as load_synthesis, with the cell positions precomputed.
  template <typename Coeff>
  void synthesize(const VorticityField& w, Coeff coeff) {
    fft.clear_spectral();
    fftw_complex* out = fft.spectral();
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const Complex g = coeff(modes[i]) * w[i];
      if (modes[i].plus >= 0) {
        out[modes[i].plus][0] = g.real();
        out[modes[i].plus][1] = -g.imag();
      }
      if (modes[i].minus >= 0) {
        out[modes[i].minus][0] = g.real();
        out[modes[i].minus][1] = g.imag();
      }
    }
    fft.to_physical();
  }

  SpectralGrid grid;
  FftPair fft;
  std::vector<double> velocity1;
  std::vector<double> velocity2;
  std::vector<double> product;
  std::vector<ModeCells> modes;
};

TransformWorkspace::TransformWorkspace(const SpectralGrid& grid)
    : impl_(std::make_unique<Impl>(grid)) {}
TransformWorkspace::~TransformWorkspace() = default;
TransformWorkspace::TransformWorkspace(TransformWorkspace&&) noexcept = default;
TransformWorkspace& TransformWorkspace::operator=(TransformWorkspace&&) noexcept = default;

const SpectralGrid& TransformWorkspace::grid() const { return impl_->grid; }
int TransformWorkspace::padded_size() const { return impl_->fft.m(); }

VorticityField TransformWorkspace::advection(std::span<const Term> terms) {
  auto& fft = impl_->fft;
  const auto& grid = impl_->grid;
  const std::size_t points = impl_->product.size();
  std::fill(impl_->product.begin(), impl_->product.end(), 0.0);
  const Complex i_unit{0.0, 1.0};

  for (const auto& [a, b] : terms) {
    if (!(a->grid() == grid) || !(b->grid() == grid)) {
      throw Error(ErrorCode::kInvalidArgument, "advection: grid mismatch");
    }
    // u_k = i (-k2, k1) / |k|^2 a_k
    using Cells = Impl::ModeCells;
    impl_->synthesize(*a, [&](const Cells& k) { return i_unit * (-k.k2 / k.norm_sq); });
    std::copy_n(fft.physical(), points, impl_->velocity1.begin());
    impl_->synthesize(*a, [&](const Cells& k) { return i_unit * (k.k1 / k.norm_sq); });
    std::copy_n(fft.physical(), points, impl_->velocity2.begin());
    // (grad b)_k = -i k b_k
    impl_->synthesize(*b, [&](const Cells& k) { return -i_unit * k.k1; });
    for (std::size_t p = 0; p < points; ++p) impl_->product[p] += impl_->velocity1[p] * fft.physical()[p];
    impl_->synthesize(*b, [&](const Cells& k) { return -i_unit * k.k2; });
    for (std::size_t p = 0; p < points; ++p) impl_->product[p] += impl_->velocity2[p] * fft.physical()[p];
  }

  std::copy(impl_->product.begin(), impl_->product.end(), fft.physical());
  fft.to_spectral();

  // Physical arrays hold 2pi times the true fields, so the true product is
  // product / (2pi)^2 and its coefficient is (1/2pi)(2pi/m)^2 sum_x exp(ik.x)(...).
  const double m = fft.m();
  const double scale = -1.0 / (2.0 * std::numbers::pi * m * m);
  VorticityField out(grid);
  const fftw_complex* y = fft.spectral();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& cells = impl_->modes[i];
    // sum_x exp(+ik.x) P(x) = conj(Y_k) = Y_{-k} for the r2c output Y.
    const Complex analysis = cells.plus >= 0 ? Complex{y[cells.plus][0], -y[cells.plus][1]}
                                             : Complex{y[cells.minus][0], y[cells.minus][1]};
    out[i] = scale * analysis;
  }
  return out;
}

std::vector<double> physical_values(const VorticityField& w, int m) {
  if (m <= 2 * w.grid().kmax()) {
    throw Error(ErrorCode::kInvalidArgument, "physical_values: m must exceed 2*kmax");
  }
  FftPair fft(m);
  load_synthesis(fft, w, [](Wavevector) { return Complex{1.0, 0.0}; });
  std::vector<double> out(fft.physical(), fft.physical() + static_cast<std::size_t>(m) * m);
  for (auto& v : out) v /= 2.0 * std::numbers::pi;
  return out;
}

}  // namespace vortmix
