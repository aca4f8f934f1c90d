#include "vortmix/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <string>

#include "vortmix/error.hpp"

namespace vortmix {

double total_variance(const std::vector<double>& gamma) {
  double sum = 0.0;
  for (double g : gamma) sum += 2.0 * g;
  return sum;
}

ForcingSpec::ForcingSpec(SpectralGrid grid, std::vector<double> gamma)
    : grid_(std::move(grid)), gamma_(std::move(gamma)) {
  if (gamma_.size() != grid_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "gamma count does not match grid");
  }
  rho_ = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gamma_.size(); ++i) {
    if (grid_.is_low(i)) {
      if (!(gamma_[i] > 0.0) || !std::isfinite(gamma_[i])) {
        throw Error(ErrorCode::kInvalidArgument, "gamma_k must be positive on every forced mode");
      }
      rho_ = std::min(rho_, gamma_[i]);
      max_gamma_ = std::max(max_gamma_, gamma_[i]);
    } else if (gamma_[i] != 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "gamma_k must vanish on high modes");
    }
  }
  R_ = total_variance(gamma_);
}

ForcingSpec uniform_spec(const SpectralGrid& grid, double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw Error(ErrorCode::kInvalidArgument, "R must be > 0");
  const double per_mode = R / static_cast<double>(2 * grid.low_count());
  std::vector<double> gamma(grid.size(), 0.0);
  std::size_t last = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.is_low(i)) {
      gamma[i] = per_mode;
      last = i;
    }
  }
  // Nudge the last forced mode by ulps until the storage-order total hits R.
  for (int guard = 0; guard < 4096 && total_variance(gamma) != R; ++guard) {
    const double toward = total_variance(gamma) < R ? std::numeric_limits<double>::infinity()
                                                    : -std::numeric_limits<double>::infinity();
    gamma[last] = std::nextafter(gamma[last], toward);
  }
  return ForcingSpec(grid, std::move(gamma));
}

ForcingSpec apply_override(const ForcingSpec& base, std::istream& in) {
  const auto& grid = base.grid();
  std::vector<double> gamma = base.gammas();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    int k1 = 0;
    int k2 = 0;
    double g = 0.0;
    if (!(fields >> k1)) continue;  // blank line
    std::string extra;
    if (!(fields >> k2 >> g) || (fields >> extra)) {
      throw Error(ErrorCode::kConfig,
                  "covariance override line " + std::to_string(line_no) + ": expected 'k1 k2 gamma'");
    }
    Wavevector k{k1, k2};
    if (k.norm_sq() == 0 || k.norm_sq() > grid.n_force()) {
      throw Error(ErrorCode::kConfig, "covariance override line " + std::to_string(line_no) +
                                          ": mode outside 0 < |k|^2 <= n_force");
    }
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw Error(ErrorCode::kConfig,
                  "covariance override line " + std::to_string(line_no) + ": gamma must be > 0");
    }
    if (!k.canonical()) k = -k;
    gamma[*grid.index_of(k)] = g;
  }
  return ForcingSpec(grid, std::move(gamma));
}

double increment_sigma(double gamma, double dt) { return std::sqrt(0.5 * gamma * dt); }

VorticityField sample_increment(const ForcingSpec& spec, double dt, Rng& rng) {
  if (dt < 0.0) throw Error(ErrorCode::kInvalidArgument, "dt must be >= 0");
  VorticityField db(spec.grid());
  for (std::size_t i = 0; i < db.size(); ++i) {
    if (!spec.grid().is_low(i)) continue;
    const double sigma = increment_sigma(spec.gamma(i), dt);
    const double re = rng.normal();
    const double im = rng.normal();
    db[i] = {sigma * re, sigma * im};
  }
  return db;
}

double gamma_inv_inner(const ForcingSpec& spec, const VorticityField& f, const VorticityField& g) {
  const auto& grid = spec.grid();
  if (!(f.grid() == grid) || !(g.grid() == grid)) {
    throw Error(ErrorCode::kInvalidArgument, "gamma_inv_inner: grid mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!grid.is_low(i)) {
      if (f[i] != Complex{} || g[i] != Complex{}) {
        throw Error(ErrorCode::kPrecondition, "gamma_inv_inner: argument has high-mode support");
      }
      continue;
    }
    sum += (f[i].real() * g[i].real() + f[i].imag() * g[i].imag()) / spec.gamma(i);
  }
  return 2.0 * sum;
}

}  // namespace vortmix
