#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace vortmix {

// Every random stream in the library is an Rng seeded through derive_seed, so a
// run is reproducible from (master_seed, component, index) alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t fnv1a64(std::string_view text);

// splitmix64(splitmix64(master ^ fnv1a64(component)) + index)
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view component,
                          std::uint64_t index);

}  // namespace vortmix
