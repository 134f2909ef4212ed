#include "symcap/weights.hpp"

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace {

using symcap::Rat;
using symcap::rat;
using symcap::weight_expansion;

// Euclid's algorithm on p/q, independent of the weight code.
std::vector<std::int64_t> continued_fraction(long p, long q) {
  std::vector<std::int64_t> out;
  while (q != 0) {
    out.push_back(p / q);
    long r = p % q;
    p = q;
    q = r;
  }
  return out;
}

TEST(WeightExpansion, Examples) {
  std::vector<Rat> w3 = weight_expansion(3).flat();
  EXPECT_EQ(w3, (std::vector<Rat>{1, 1, 1}));
  std::vector<Rat> w114 = weight_expansion(rat(11, 4)).flat();
  EXPECT_EQ(w114, (std::vector<Rat>{1, 1, rat(3, 4), rat(1, 4), rat(1, 4), rat(1, 4)}));
  EXPECT_EQ(weight_expansion(1).flat(), (std::vector<Rat>{1}));
}

TEST(WeightExpansion, Multiplicities) {
  EXPECT_EQ(multiplicities(weight_expansion(rat(11, 4))), (std::vector<std::int64_t>{2, 1, 3}));
  EXPECT_EQ(continued_fraction(11, 4), (std::vector<std::int64_t>{2, 1, 3}));
  EXPECT_EQ(multiplicities(weight_expansion(3)), (std::vector<std::int64_t>{3}));
  EXPECT_EQ(multiplicities(weight_expansion(1)), (std::vector<std::int64_t>{1}));
}

TEST(WeightExpansion, RejectsBelowOne) {
  EXPECT_THROW(weight_expansion(rat(1, 2)), std::domain_error);
  EXPECT_THROW(weight_expansion(0), std::domain_error);
}

TEST(WeightExpansion, RandomIdentities) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    long q = static_cast<long>(rng() % 50) + 1;
    long p = q + static_cast<long>(rng() % (99 * q + 1));  // a = p/q in [1, 100]
    Rat a = rat(p, q);
    long qq = a.den().get_si(), pp = a.num().get_si();

    auto w = weight_expansion(a);
    auto flat = w.flat();
    Rat sum = 0, sum_sq = 0;
    for (std::size_t j = 0; j < flat.size(); ++j) {
      ASSERT_GT(flat[j].sign(), 0);
      if (j) {
        ASSERT_LE(flat[j], flat[j - 1]);
      }
      sum += flat[j];
      sum_sq += flat[j] * flat[j];
    }
    ASSERT_EQ(sum_sq, a) << a;
    ASSERT_EQ(sum, a + Rat(1) - rat(1, qq)) << a;
    ASSERT_EQ(multiplicities(w), continued_fraction(pp, qq)) << a;
    ASSERT_EQ(w.blocks.front().value, Rat(1));
    for (std::size_t j = 1; j < w.blocks.size(); ++j) ASSERT_LT(w.blocks[j].value, w.blocks[j - 1].value);
    ASSERT_EQ(weight_expansion(a).blocks, w.blocks);
  }
}

}  // namespace
