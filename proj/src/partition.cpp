#include "vortmix/partition.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "vortmix/error.hpp"

namespace vortmix {

namespace {

double weight(int k) { return std::ldexp(1.0, k); }

std::vector<double> prefix_weights(const KVector& kv) {
  std::vector<double> prefix(kv.values.size() + 1, 0.0);
  for (std::size_t i = 0; i < kv.values.size(); ++i) prefix[i + 1] = prefix[i] + weight(kv.values[i]);
  return prefix;
}

double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * (3.0 - 2.0 * s);
}

// Rises from 0 at y = 2^k to 1 at y = 2^{k+1}.
double rise(int k, double y) {
  const double scale = std::ldexp(1.0, k);
  return smoothstep((y - scale) / scale);
}

// Blocks (1-based) covered by the T-closure of [m, e].
std::pair<int, int> closure_blocks(int m, int e, int T) { return {m / T + 1, (e + T - 1) / T}; }

std::string describe(const Block& b) {
  std::ostringstream out;
  out << "[" << b.span.start << ", " << b.span.end << "] " << to_string(b.label);
  return out.str();
}

}  // namespace

KVector::KVector(std::vector<int> v) : values(std::move(v)) {
  for (int k : values) {
    if (k < 0) throw Error(ErrorCode::kInvalidArgument, "k-vector entries must be nonnegative");
  }
}

void PartitionParams::validate() const {
  if (T < 1) throw Error(ErrorCode::kInvalidArgument, "partition: T must be >= 1");
  if (!(beta_prime > 0.0 && beta_prime < beta)) {
    throw Error(ErrorCode::kInvalidArgument, "partition: need 0 < beta' < beta");
  }
  if (!(R > 0.0)) throw Error(ErrorCode::kInvalidArgument, "partition: R must be positive");
}

double phi(int k, double x, double R) {
  if (k < 0 || x < 0.0 || !(R > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "phi: need k >= 0, x >= 0, R > 0");
  }
  const double y = x / R;
  if (k == 0) return 1.0 - rise(1, y);
  return rise(k, y) - rise(k + 1, y);
}

double gamma_L(const KVector& kv, TimeInterval L) {
  if (L.start < 0 || L.end > kv.size() || L.start > L.end) {
    throw Error(ErrorCode::kInvalidArgument, "gamma_L: interval outside the window");
  }
  double sum = 0.0;
  for (int n = L.start + 1; n <= L.end; ++n) sum += weight(kv(n));
  return sum;
}

double beta_of(int length, const PartitionParams& params) {
  if (2 * length > params.T) return params.beta * length;
  return 0.5 * params.beta * params.T;
}

bool interval_qualifies(const KVector& kv, TimeInterval L, const PartitionParams& params) {
  return L.length() > 0 && gamma_L(kv, L) > beta_of(L.length(), params);
}

bool block_qualifies(const KVector& kv, int block, const PartitionParams& params) {
  return weight(kv(block * params.T)) > params.beta_prime * params.T;
}

IntervalPartition classify(const KVector& kv, const PartitionParams& params) {
  params.validate();
  const int t = kv.size();
  const int T = params.T;
  if (t == 0 || t % T != 0) {
    throw Error(ErrorCode::kInvalidArgument, "classify: window length must be a positive multiple of T");
  }
  const int blocks = t / T;
  std::vector<char> covered(static_cast<std::size_t>(blocks) + 1, 0);
  const auto prefix = prefix_weights(kv);
  for (int m = 0; m < t; ++m) {
    for (int e = m + 1; e <= t; ++e) {
      if (prefix[static_cast<std::size_t>(e)] - prefix[static_cast<std::size_t>(m)] >
          beta_of(e - m, params)) {
        const auto [first, last] = closure_blocks(m, e, T);
        for (int b = first; b <= last; ++b) covered[static_cast<std::size_t>(b)] = 1;
      }
    }
  }
  for (int b = 1; b <= blocks; ++b) {
    if (block_qualifies(kv, b, params)) covered[static_cast<std::size_t>(b)] = 1;
  }

  IntervalPartition out;
  out.window = t;
  int b = 1;
  while (b <= blocks) {
    if (!covered[static_cast<std::size_t>(b)]) {
      out.blocks.push_back({{(b - 1) * T, b * T}, BlockLabel::kSmall});
      ++b;
      continue;
    }
    int last = b;
    while (last + 1 <= blocks && covered[static_cast<std::size_t>(last + 1)]) ++last;
    out.blocks.push_back({{(b - 1) * T, last * T}, BlockLabel::kLarge});
    b = last + 1;
  }
  return out;
}

BlockPropertyReport verify_block_properties(const IntervalPartition& partition, const KVector& kv,
                             const PartitionParams& params) {
  const int T = params.T;
  BlockPropertyReport report;
  const auto prefix = prefix_weights(kv);
  for (const Block& block : partition.blocks) {
    const TimeInterval J = block.span;
    if (block.label == BlockLabel::kSmall) {
      ++report.small_blocks;
      if (gamma_L(kv, J) > params.beta * T) {
        report.violations.push_back(describe(block) + ": sum of 2^k exceeds beta T");
      }
      if (weight(kv(J.end)) > params.beta_prime * T) {
        report.violations.push_back(describe(block) + ": 2^k at the right end exceeds beta' T");
      }
      continue;
    }
    ++report.large_blocks;
    // Unit membership of J' and J''.
    std::vector<char> primary(static_cast<std::size_t>(J.length()), 0);
    std::vector<char> secondary(static_cast<std::size_t>(J.length()), 0);
    for (int m = J.start; m < J.end; ++m) {
      for (int e = m + 1; e <= J.end; ++e) {
        if (prefix[static_cast<std::size_t>(e)] - prefix[static_cast<std::size_t>(m)] <=
            beta_of(e - m, params)) {
          continue;
        }
        const auto [first, last] = closure_blocks(m, e, T);
        for (int u = (first - 1) * T; u < last * T; ++u) primary[static_cast<std::size_t>(u - J.start)] = 1;
      }
    }
    for (int b = J.start / T + 1; b <= J.end / T; ++b) {
      if (!block_qualifies(kv, b, params)) continue;
      for (int u = (b - 1) * T; u < b * T; ++u) secondary[static_cast<std::size_t>(u - J.start)] = 1;
    }
    double gamma_primary = 0.0;
    int primary_length = 0;
    bool covered = true;
    for (int u = 0; u < J.length(); ++u) {
      const auto i = static_cast<std::size_t>(u);
      if (primary[i]) {
        gamma_primary += weight(kv(J.start + u + 1));
        ++primary_length;
      }
      if (!primary[i] && !secondary[i]) covered = false;
    }
    if (!covered) report.violations.push_back(describe(block) + ": J' u J'' does not cover J");
    if (primary_length > 0 && !(gamma_primary > 0.25 * params.beta * primary_length)) {
      report.violations.push_back(describe(block) + ": gamma_J' <= beta |J'| / 4");
    }
  }
  return report;
}

ConcatenationResult verify_concatenation(const IntervalPartition& partition, const std::vector<KVector>& kvs,
                             const PartitionParams& params) {
  params.validate();
  if (partition.blocks.size() != kvs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "verify_concatenation: one k-vector per block required");
  }
  KVector joined;
  for (std::size_t i = 0; i < kvs.size(); ++i) {
    const Block& block = partition.blocks[i];
    if (kvs[i].size() != block.span.length()) {
      throw Error(ErrorCode::kInvalidArgument, "verify_concatenation: k-vector length differs from its block");
    }
    const IntervalPartition local = classify(kvs[i], params);
    const Block expected{{0, block.span.length()}, block.label};
    if (local.blocks.size() != 1 || !(local.blocks.front() == expected)) {
      throw Error(ErrorCode::kPrecondition, "verify_concatenation: block " + std::to_string(i) +
                                                " is not classified as itself");
    }
    joined.values.insert(joined.values.end(), kvs[i].values.begin(), kvs[i].values.end());
  }

  ConcatenationResult result;
  result.concatenation_matches = classify(joined, params).blocks == partition.blocks;

  result.constraints_hold = true;
  const auto prefix = prefix_weights(joined);
  for (std::size_t i = 0; i + 1 < partition.blocks.size() && result.constraints_hold; ++i) {
    const int lo = partition.blocks[i].span.start;
    const int tau = partition.blocks[i].span.end;
    const int hi = partition.blocks[i + 1].span.end;
    for (int m = lo; m < tau && result.constraints_hold; ++m) {
      for (int e = tau + 1; e <= hi; ++e) {
        if (prefix[static_cast<std::size_t>(e)] - prefix[static_cast<std::size_t>(m)] >
            beta_of(e - m, params)) {
          result.constraints_hold = false;
          break;
        }
      }
    }
  }
  return result;
}

std::vector<IntervalPartition> admissible_partitions(int T, int blocks) {
  std::vector<IntervalPartition> out;
  std::vector<Block> current;
  // Extend `current`, which ends at unit block `at`, in every admissible way.
  auto extend = [&](auto&& self, int at) -> void {
    if (at == blocks) {
      out.push_back({blocks * T, current});
      return;
    }
    const bool after_large = !current.empty() && current.back().label == BlockLabel::kLarge;
    current.push_back({{at * T, (at + 1) * T}, BlockLabel::kSmall});
    self(self, at + 1);
    current.pop_back();
    if (after_large) return;
    for (int len = 1; at + len <= blocks; ++len) {
      current.push_back({{at * T, (at + len) * T}, BlockLabel::kLarge});
      self(self, at + len);
      current.pop_back();
    }
  };
  extend(extend, 0);
  return out;
}

ConcatenationScan scan_concatenation(const PartitionParams& params, int blocks, int max_entry) {
  params.validate();
  const int t = blocks * params.T;
  const auto partitions = admissible_partitions(params.T, blocks);
  ConcatenationScan scan;
  std::vector<int> k(static_cast<std::size_t>(t), 0);
  while (true) {
    ++scan.vectors;
    for (const auto& partition : partitions) {
      std::vector<KVector> pieces;
      bool admissible = true;
      for (const Block& block : partition.blocks) {
        KVector piece(std::vector<int>(k.begin() + block.span.start, k.begin() + block.span.end));
        const IntervalPartition local = classify(piece, params);
        const Block expected{{0, block.span.length()}, block.label};
        if (local.blocks.size() != 1 || !(local.blocks.front() == expected)) {
          admissible = false;
          break;
        }
        pieces.push_back(std::move(piece));
      }
      if (!admissible) continue;
      ++scan.cases;
      const ConcatenationResult r = verify_concatenation(partition, pieces, params);
      if (!r.equivalent()) {
        ++scan.counterexamples;
      } else if (r.concatenation_matches) {
        ++scan.both_true;
      } else {
        ++scan.both_false;
      }
    }
    // Odometer increment.
    int pos = 0;
    while (pos < t && k[static_cast<std::size_t>(pos)] == max_entry) k[static_cast<std::size_t>(pos++)] = 0;
    if (pos == t) break;
    ++k[static_cast<std::size_t>(pos)];
  }
  return scan;
}

BlockPropertyScan scan_block_properties(const PartitionParams& params, std::size_t trials, int max_blocks,
                         int max_entry, Rng& rng) {
  params.validate();
  BlockPropertyScan scan;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const int t = params.T * (1 + static_cast<int>(rng.below(static_cast<std::size_t>(max_blocks))));
    std::vector<int> values(static_cast<std::size_t>(t));
    for (int& v : values) {
      v = 0;
      while (v < max_entry && rng.uniform() < 0.5) ++v;
    }
    const KVector kv(std::move(values));
    const auto report = verify_block_properties(classify(kv, params), kv, params);
    ++scan.trials;
    if (!report.ok()) {
      ++scan.violations;
      if (scan.examples.size() < 5) {
        std::ostringstream out;
        out << "k =";
        for (int v : kv.values) out << ' ' << v;
        out << ": " << report.violations.front();
        scan.examples.push_back(out.str());
      }
    }
  }
  return scan;
}

double chi(const KVector& kv, std::span<const double> Dn, double R) {
  if (static_cast<std::size_t>(kv.size()) != Dn.size()) {
    throw Error(ErrorCode::kInvalidArgument, "chi: k-vector and D_n lengths differ");
  }
  double product = 1.0;
  for (int n = 1; n <= kv.size(); ++n) product *= phi(kv(n), Dn[static_cast<std::size_t>(n - 1)], R);
  return product;
}

KVector dominant_kvector(std::span<const double> Dn, double R) {
  std::vector<int> values;
  values.reserve(Dn.size());
  for (double d : Dn) {
    // Only k with 2^k R <= d can be nonzero besides k = 0.
    int best = 0;
    double best_value = phi(0, d, R);
    for (int k = 1; std::ldexp(R, k) <= d; ++k) {
      const double v = phi(k, d, R);
      if (v > best_value) {
        best = k;
        best_value = v;
      }
    }
    values.push_back(best);
  }
  return KVector(std::move(values));
}

KVector read_kvector(std::istream& in) {
  std::vector<int> values;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    int v = -1;
    try {
      v = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || v < 0) {
      throw Error(ErrorCode::kConfig, "k-vector file: '" + token + "' is not a nonnegative integer");
    }
    values.push_back(v);
  }
  return KVector(std::move(values));
}

std::string to_string(BlockLabel label) {
  return label == BlockLabel::kSmall ? "small" : "large";
}

void write_partition(std::ostream& out, const IntervalPartition& partition) {
  for (const Block& b : partition.blocks) {
    out << b.span.start << ' ' << b.span.end << ' ' << to_string(b.label) << '\n';
  }
}

}  // namespace vortmix
