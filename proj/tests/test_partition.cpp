#include <cmath>
#include <sstream>

#include "doctest.h"
#include "vortmix/error.hpp"
#include "vortmix/partition.hpp"

using namespace vortmix;

namespace {

// Independent oracle: the qualifying set evaluated straight from the
// definitions, returned as per-block coverage.
std::vector<bool> brute_force_cover(const KVector& kv, const PartitionParams& p) {
  const int t = kv.size();
  std::vector<bool> cover(static_cast<std::size_t>(t / p.T), false);
  for (int m = 0; m < t; ++m) {
    for (int e = m + 1; e <= t; ++e) {
      double g = 0.0;
      for (int n = m + 1; n <= e; ++n) g += std::pow(2.0, kv(n));
      const double threshold = (e - m) > p.T / 2.0 ? p.beta * (e - m) : p.beta * p.T / 2.0;
      if (g <= threshold) continue;
      const int lo = static_cast<int>(std::floor(static_cast<double>(m) / p.T));
      const int hi = static_cast<int>(std::ceil(static_cast<double>(e) / p.T));
      for (int b = lo; b < hi; ++b) cover[static_cast<std::size_t>(b)] = true;
    }
  }
  for (int b = 1; b <= t / p.T; ++b) {
    if (std::pow(2.0, kv(b * p.T)) > p.beta_prime * p.T) cover[static_cast<std::size_t>(b - 1)] = true;
  }
  return cover;
}

void check_structure(const IntervalPartition& part, const PartitionParams& p) {
  int at = 0;
  for (std::size_t i = 0; i < part.blocks.size(); ++i) {
    const Block& b = part.blocks[i];
    CHECK(b.span.start == at);
    CHECK(b.span.length() % p.T == 0);
    CHECK(b.span.length() > 0);
    if (b.span.length() > p.T) CHECK(b.label == BlockLabel::kLarge);
    if (i > 0 && b.label == BlockLabel::kLarge) {
      CHECK(part.blocks[i - 1].label == BlockLabel::kSmall);
    }
    at = b.span.end;
  }
  CHECK(at == part.window);
}

}  // namespace

TEST_CASE("phi is a partition of unity") {
  CHECK(phi(0, 0.0, 1.0) == 1.0);
  for (int k = 1; k < 20; ++k) CHECK(phi(k, 0.0, 1.0) == 0.0);

  Rng rng(1);
  for (int trial = 0; trial < 10000; ++trial) {
    const double R = 0.5 + rng.uniform();
    const double x = rng.uniform() * 1024.0 * R;
    double sum = 0.0;
    int nonzero = 0;
    for (int k = 0; k <= 14; ++k) {
      const double v = phi(k, x, R);
      CHECK(v >= 0.0);
      sum += v;
      if (v != 0.0) ++nonzero;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(nonzero <= 2);
  }
  for (int k = 1; k < 8; ++k) {
    const double R = 1.0;
    CHECK(phi(k, std::ldexp(R, k), R) == 0.0);
    CHECK(phi(k, std::ldexp(R, k + 2), R) == 0.0);
    CHECK(phi(k, std::ldexp(R, k + 1), R) == 1.0);
    int nonzero = 0;
    for (int j = 0; j < 12; ++j) nonzero += phi(j, 3.0 * std::ldexp(R, k), R) != 0.0;
    CHECK(nonzero <= 2);
  }
  // Rescaled derivative bounded uniformly in k.
  for (int k = 1; k < 12; ++k) {
    const double scale = std::ldexp(1.0, k);
    double worst = 0.0;
    for (int i = 0; i < 400; ++i) {
      const double y = scale * (1.0 + 3.0 * i / 400.0);
      const double h = 1e-6 * scale;
      worst = std::max(worst, std::abs(phi(k, y + h, 1.0) - phi(k, y - h, 1.0)) / (2e-6));
    }
    CHECK(worst <= 1.5 + 1e-6);
  }
  CHECK_THROWS_AS(phi(-1, 1.0, 1.0), Error);
}

TEST_CASE("gamma_L and beta_of") {
  const KVector zeros(std::vector<int>(5, 0));
  CHECK(gamma_L(zeros, {0, 5}) == 5.0);
  CHECK(gamma_L(zeros, {2, 2}) == 0.0);
  const KVector spike({3, 0, 0});
  CHECK(gamma_L(spike, {0, 3}) == 10.0);
  CHECK(gamma_L(spike, {1, 3}) == 2.0);
  CHECK_THROWS_AS(gamma_L(spike, {0, 4}), Error);

  const PartitionParams p{4, 3.0, 1.0, 1.0};
  CHECK(beta_of(4, p) == 12.0);
  CHECK(beta_of(1, p) == 6.0);  // |L| = T/4
  CHECK(beta_of(2, p) == 6.0);  // |L| = T/2 takes the short branch
  CHECK(beta_of(3, p) == 9.0);
  const PartitionParams odd{3, 3.0, 1.0, 1.0};
  CHECK(beta_of(1, odd) == 4.5);
  CHECK(beta_of(2, odd) == 6.0);

  CHECK_THROWS_AS(KVector({1, -1}), Error);
  CHECK_THROWS_AS((PartitionParams{2, 1.0, 1.0, 1.0}.validate()), Error);
}

TEST_CASE("classify examples") {
  SUBCASE("all zeros with a large beta") {
    const PartitionParams p{2, 10.0, 4.0, 1.0};
    const auto part = classify(KVector(std::vector<int>(8, 0)), p);
    REQUIRE(part.blocks.size() == 4);
    for (const auto& b : part.blocks) CHECK(b.label == BlockLabel::kSmall);
  }
  SUBCASE("interior spike") {
    const PartitionParams p{2, 6.0, 3.0, 1.0};
    // Unit 5 = [4, 5] with 2^4 = 16 > beta T = 12. Its closure is [4, 6], but
    // [3, 5] also qualifies (17 > 2 beta), which pulls in the block [2, 4].
    const KVector kv({0, 0, 0, 0, 4, 0, 0, 0});
    CHECK(interval_qualifies(kv, {4, 5}, p));
    CHECK(interval_qualifies(kv, {3, 5}, p));
    CHECK_FALSE(interval_qualifies(kv, {4, 7}, p));
    const auto part = classify(kv, p);
    const std::vector<Block> expected{{{0, 2}, BlockLabel::kSmall},
                                      {{2, 6}, BlockLabel::kLarge},
                                      {{6, 8}, BlockLabel::kSmall}};
    CHECK(part.blocks == expected);
    CHECK(verify_block_properties(part, kv, p).ok());
  }
  SUBCASE("large-prime block at a boundary") {
    // 2^2 = 4 > beta' T = 2 but the block sum 4 + 1 stays below beta T = 6.
    const PartitionParams p{2, 3.0, 1.0, 1.0};
    const KVector kv({0, 0, 0, 2, 0, 0});
    CHECK(gamma_L(kv, {2, 4}) <= beta_of(2, p));
    const auto part = classify(kv, p);
    REQUIRE(part.blocks.size() == 3);
    CHECK(part.blocks[1] == Block{{2, 4}, BlockLabel::kLarge});
    CHECK(part.blocks[0].label == BlockLabel::kSmall);
    CHECK(part.blocks[2].label == BlockLabel::kSmall);
    const auto report = verify_block_properties(part, kv, p);
    CHECK(report.ok());
    CHECK(report.large_blocks == 1);
  }
  CHECK_THROWS_AS(classify(KVector({0, 0, 0}), PartitionParams{2, 3.0, 1.0, 1.0}), Error);
}

TEST_CASE("classify agrees with the brute-force predicate and keeps its invariants") {
  Rng rng(2);
  for (int trial = 0; trial < 2000; ++trial) {
    const int T = 1 + static_cast<int>(rng.below(4));
    const int t = T * (1 + static_cast<int>(rng.below(6)));
    const double beta = 1.5 + 10.0 * rng.uniform();
    const PartitionParams p{T, beta, beta * (0.1 + 0.8 * rng.uniform()), 1.0};
    std::vector<int> values(static_cast<std::size_t>(t));
    for (int& v : values) v = static_cast<int>(rng.below(7));
    const KVector kv(values);
    const auto part = classify(kv, p);
    check_structure(part, p);

    const auto cover = brute_force_cover(kv, p);
    for (const auto& b : part.blocks) {
      for (int j = b.span.start / T; j < b.span.end / T; ++j) {
        CHECK(cover[static_cast<std::size_t>(j)] == (b.label == BlockLabel::kLarge));
      }
    }

    // Raising one entry never turns a large unit small.
    std::vector<int> raised = values;
    raised[rng.below(raised.size())] += 1 + static_cast<int>(rng.below(3));
    const auto bigger = classify(KVector(raised), p);
    auto large_units = [](const IntervalPartition& q) {
      std::vector<bool> u(static_cast<std::size_t>(q.window), false);
      for (const auto& b : q.blocks) {
        for (int n = b.span.start; n < b.span.end; ++n) u[static_cast<std::size_t>(n)] = b.label == BlockLabel::kLarge;
      }
      return u;
    };
    const auto before = large_units(part);
    const auto after = large_units(bigger);
    for (std::size_t n = 0; n < before.size(); ++n) {
      if (before[n]) CHECK(after[n]);
    }
  }
}

TEST_CASE("block properties on random k-vectors") {
  Rng rng(3);
  for (int T : {2, 4}) {
    for (auto [beta, beta_prime] : {std::pair{3.0, 2.0}, std::pair{8.0, 3.0}, std::pair{20.0, 10.0}}) {
      const auto scan = scan_block_properties({T, beta, beta_prime, 1.0}, 1000, 24 / T, 7, rng);
      CHECK(scan.trials == 1000);
      CHECK(scan.violations == 0);
    }
  }
  const PartitionParams p{2, 10.0, 4.0, 1.0};
  const KVector zeros(std::vector<int>(6, 0));
  const auto report = verify_block_properties(classify(zeros, p), zeros, p);
  CHECK(report.ok());
  CHECK(report.small_blocks == 3);
}

TEST_CASE("concatenation matches the boundary constraints") {
  const PartitionParams p{2, 4.0, 3.0, 1.0};
  const IntervalPartition two_small{4, {{{0, 2}, BlockLabel::kSmall}, {{2, 4}, BlockLabel::kSmall}}};

  SUBCASE("two small zero blocks") {
    const auto r = verify_concatenation(two_small, {KVector({0, 0}), KVector({0, 0})}, p);
    CHECK(r.concatenation_matches);
    CHECK(r.constraints_hold);
    CHECK(r.equivalent());
  }
  SUBCASE("spike straddling the boundary") {
    // The second block is large on its own (2^5 > beta T / 2 at its first
    // unit); [1, 3] reaches back into the small block with 1 + 32 > 2 beta.
    const IntervalPartition small_large{4, {{{0, 2}, BlockLabel::kSmall}, {{2, 4}, BlockLabel::kLarge}}};
    const std::vector<KVector> kvs{KVector({0, 0}), KVector({5, 0})};
    const auto r = verify_concatenation(small_large, kvs, p);
    CHECK_FALSE(r.constraints_hold);
    CHECK_FALSE(r.concatenation_matches);
    CHECK(r.equivalent());
    const KVector joined({0, 0, 5, 0});
    CHECK(classify(joined, p).blocks == std::vector<Block>{{{0, 4}, BlockLabel::kLarge}});
  }
  SUBCASE("precondition") {
    const std::vector<KVector> kvs{KVector({0, 6}), KVector({0, 0})};
    try {
      verify_concatenation(two_small, kvs, p);
      FAIL("expected a precondition error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kPrecondition);
    }
  }
  SUBCASE("admissible partitions of a two-block window") {
    const auto all = admissible_partitions(2, 2);
    // SS, SL, LS, and the single large [0, 4].
    CHECK(all.size() == 4);
  }
  SUBCASE("exhaustive scan") {
    for (auto [beta, beta_prime] : {std::pair{2.0, 1.0}, std::pair{5.0, 2.0}, std::pair{12.0, 4.0},
                                    std::pair{40.0, 15.0}}) {
      const auto scan = scan_concatenation({2, beta, beta_prime, 1.0}, 2, 6);
      CHECK(scan.vectors == 2401);
      CHECK(scan.cases > 0);
      CHECK(scan.both_false > 0);
      CHECK(scan.counterexamples == 0);
    }
  }
}

TEST_CASE("chi weights and k-vector files") {
  const std::vector<double> Dn{0.5, 3.0, 12.0, 100.0};
  const double R = 1.0;
  const auto dominant = dominant_kvector(Dn, R);
  CHECK(dominant == KVector({0, 0, 2, 6}));
  // Summing chi over all k-vectors factorizes into products of sums of phi.
  double total = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 5; ++c)
        for (int d = 0; d < 8; ++d) total += chi(KVector({a, b, c, d}), Dn, R);
  CHECK(std::abs(total - 1.0) <= 1e-12);
  CHECK(chi(dominant, Dn, R) > 0.0);

  std::istringstream in("0 3\n1  2\t0\n");
  CHECK(read_kvector(in) == KVector({0, 3, 1, 2, 0}));
  std::istringstream bad("0 x 1");
  CHECK_THROWS_AS(read_kvector(bad), Error);
  std::istringstream negative("1 -2");
  CHECK_THROWS_AS(read_kvector(negative), Error);

  std::ostringstream out;
  write_partition(out, IntervalPartition{4, {{{0, 2}, BlockLabel::kSmall}, {{2, 4}, BlockLabel::kLarge}}});
  CHECK(out.str() == "0 2 small\n2 4 large\n");
}
