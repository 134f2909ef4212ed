#include "symcap/packing.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "symcap/weights.hpp"

namespace {

using symcap::capacity;
using symcap::ClassVector;
using symcap::compare;
using symcap::constraint_value;
using symcap::Ordering;
using symcap::pack_decide;
using symcap::PackingProblem;
using symcap::PackVerdict;
using symcap::Rat;
using symcap::rat;
using symcap::RootBound;

ClassVector cv(std::int64_t d, std::vector<std::int64_t> m) { return ClassVector(d, std::move(m)); }
std::vector<Rat> ones(int k) { return std::vector<Rat>(static_cast<std::size_t>(k), Rat(1)); }

TEST(ConstraintValue, Examples) {
  EXPECT_EQ(constraint_value(cv(6, {3, 2, 2, 2, 2, 2, 2, 2}), ones(8)), rat(17, 6));
  EXPECT_EQ(constraint_value(cv(1, {1, 1}), ones(2)), Rat(2));
  auto w = symcap::weight_expansion(rat(13, 2)).flat();
  ASSERT_EQ(w, (std::vector<Rat>{1, 1, 1, 1, 1, 1, rat(1, 2), rat(1, 2)}));
  // (2*6*1 + 1*2*(1/2)) / 5
  EXPECT_EQ(constraint_value(cv(5, {2, 2, 2, 2, 2, 2, 1, 1}), w), rat(13, 5));
  // Shorter ball list is zero padded.
  EXPECT_EQ(constraint_value(cv(2, {1, 1, 1, 1, 1}), ones(3)), rat(3, 2));
}

TEST(PackDecide, Examples) {
  auto yes = pack_decide(PackingProblem(ones(2), Rat(2) + rat(1, 1000)), 1);
  EXPECT_EQ(yes.verdict, PackVerdict::Yes);
  EXPECT_TRUE(yes.certified);

  auto eight = pack_decide(PackingProblem(ones(8), rat(17, 6)), 7);
  EXPECT_EQ(eight.verdict, PackVerdict::No);
  ASSERT_FALSE(eight.witness.is_volume());
  EXPECT_EQ(*eight.witness.cls, cv(6, {3, 2, 2, 2, 2, 2, 2, 2}));

  auto two = pack_decide(PackingProblem(ones(2), rat(3, 2)), 1);
  EXPECT_EQ(two.verdict, PackVerdict::No);
  EXPECT_EQ(*two.witness.cls, cv(1, {1, 1}));

  auto vol = pack_decide(PackingProblem(ones(4), Rat(2)), 5);
  EXPECT_EQ(vol.verdict, PackVerdict::No);
  EXPECT_TRUE(vol.witness.is_volume());
}

TEST(PackDecide, UncertifiedWhenDegreeBoundTooSmall) {
  // A just above 17/6 for eight balls: classes up to degree 17 matter.
  auto p = PackingProblem(ones(8), rat(17, 6) + rat(1, 100000));
  auto low = pack_decide(p, 7);
  EXPECT_EQ(low.verdict, PackVerdict::Yes);
  EXPECT_FALSE(low.certified);
  auto high = pack_decide(p, 100);
  EXPECT_EQ(high.verdict, PackVerdict::Yes);
  EXPECT_TRUE(high.certified);
}

TEST(PackingProblem, Validation) {
  EXPECT_THROW(PackingProblem({}, Rat(1)), std::invalid_argument);
  EXPECT_THROW(PackingProblem({Rat(1), Rat(0)}, Rat(1)), std::invalid_argument);
  EXPECT_THROW(PackingProblem({Rat(1)}, Rat(-1)), std::invalid_argument);
  PackingProblem p({rat(1, 2), Rat(2), Rat(1)}, Rat(3));
  EXPECT_EQ(p.weights, (std::vector<Rat>{2, 1, rat(1, 2)}));
}

TEST(Capacity, Examples) {
  auto c8 = capacity(ones(8), 100);
  EXPECT_EQ(*c8.value.exact(), rat(17, 6));
  EXPECT_EQ(*c8.witness.cls, cv(6, {3, 2, 2, 2, 2, 2, 2, 2}));
  EXPECT_TRUE(c8.certified);

  auto c5 = capacity(ones(5), 100);
  EXPECT_EQ(*c5.value.exact(), rat(5, 2));
  EXPECT_EQ(*c5.witness.cls, cv(2, {1, 1, 1, 1, 1}));

  auto c1 = capacity(ones(1), 10);
  EXPECT_EQ(*c1.value.exact(), Rat(1));
  EXPECT_TRUE(c1.witness.is_volume());
  EXPECT_TRUE(c1.certified);

  EXPECT_THROW(capacity({}, 10), std::invalid_argument);
}

TEST(Capacity, CertificationNeedsLargeEnoughDegree) {
  // Below degree 6 only 8/3 < sqrt 8 is seen, so the volume is reported but not certified.
  auto low = capacity(ones(8), 5);
  EXPECT_TRUE(low.witness.is_volume());
  EXPECT_FALSE(low.certified);
  // 17/6 is found at degree 6 but needs d_max^2 >= 8 / (289/36 - 8) = 288.
  auto mid = capacity(ones(8), 6);
  EXPECT_EQ(*mid.value.exact(), rat(17, 6));
  EXPECT_FALSE(mid.certified);
  EXPECT_FALSE(capacity(ones(8), 16).certified);
  EXPECT_TRUE(capacity(ones(8), 17).certified);
}

TEST(PackingNumber, Examples) {
  EXPECT_EQ(symcap::packing_number(6, 100), rat(24, 25));
  EXPECT_EQ(symcap::packing_number(9, 100), Rat(1));
  EXPECT_EQ(symcap::packing_number(2, 100), rat(1, 2));
}

TEST(Capacity, PerfectSquaresFillTheBall) {
  for (int r : {3, 4, 5}) {
    auto c = capacity(ones(r * r), 60);
    ASSERT_TRUE(c.value.exact());
    EXPECT_EQ(*c.value.exact(), Rat(r));
    EXPECT_TRUE(c.witness.is_volume());
    EXPECT_TRUE(c.certified);
  }
  auto c10 = capacity(ones(10), 20);
  EXPECT_EQ(c10.value.expr(), "sqrt(10)");
  EXPECT_TRUE(c10.certified);
}

std::vector<Rat> random_weights(std::mt19937_64& rng, std::size_t max_len) {
  std::vector<Rat> a(1 + rng() % max_len);
  for (auto& x : a) x = rat(static_cast<long>(1 + rng() % 16), static_cast<long>(1 + rng() % 8));
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

TEST(Capacity, CauchySchwarzBoundOnCatalogClasses) {
  auto cat = symcap::build_catalog(12);
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    auto a = random_weights(rng, 10);
    Rat volume = symcap::sum_squares(a);
    for (const auto& e : cat.classes) {
      Rat c = constraint_value(e, a);
      Rat d2 = Rat(e.d() * e.d());
      ASSERT_LE(c * c, (Rat(1) + Rat(1) / d2) * volume) << e;
    }
  }
}

TEST(ConstraintValue, SortedPairingIsMaximal) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 500; ++t) {
    std::size_t n = 1 + rng() % 6;
    std::vector<std::int64_t> m(n);
    for (auto& x : m) x = static_cast<std::int64_t>(rng() % 7);
    ClassVector e(1 + static_cast<std::int64_t>(rng() % 9), m);
    auto a = random_weights(rng, 6);
    std::vector<std::int64_t> perm = m;
    perm.resize(std::max(n, a.size()), 0);
    std::sort(perm.begin(), perm.end());
    Rat best = -1;
    do {
      Rat s = 0;
      for (std::size_t i = 0; i < a.size(); ++i) s += Rat(perm[i]) * a[i];
      best = std::max(best, s / Rat(e.d()));
    } while (std::next_permutation(perm.begin(), perm.end()));
    ASSERT_EQ(constraint_value(e, a), best);
  }
}

TEST(Capacity, MatchesFullCatalogRoute) {
  const std::int64_t d_max = 11;
  auto cat = symcap::build_catalog(d_max);
  std::mt19937_64 rng(31);
  for (int t = 0; t < 150; ++t) {
    auto a = random_weights(rng, 9);
    auto fast = capacity(a, d_max);
    auto full = symcap::capacity_from_catalog(a, cat);
    ASSERT_EQ(compare(fast.value, full.value), Ordering::Equal) << fast.value << " vs " << full.value;
    ASSERT_EQ(fast.certified, full.certified);
    ASSERT_EQ(fast.witness.is_volume(), full.witness.is_volume());
  }
}

TEST(Capacity, MonotoneInEachBall) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 60; ++t) {
    auto a = random_weights(rng, 7);
    auto b = a;
    std::size_t i = rng() % b.size();
    b[i] += rat(static_cast<long>(1 + rng() % 4), 8);
    auto ca = capacity(a, 30), cb = capacity(b, 30);
    Ordering o = compare(ca.value, cb.value);
    ASSERT_TRUE(o == Ordering::Less || o == Ordering::Equal) << ca.value << " vs " << cb.value;
  }
}

TEST(NearVolumeCutoff, Cases) {
  // Uniform, nine or more balls: nothing beats the volume.
  EXPECT_TRUE(symcap::near_volume_cutoff(ones(9), 1));
  // One ball: degree bound (1 + 1) / (3 - 1) = 1.
  EXPECT_TRUE(symcap::near_volume_cutoff(ones(1), 1));
  // w(23/2) = (1^11, 1/2, 1/2): S = 12, V = 23/2, bound (sqrt 13 + 1) sqrt V / (S - 3 sqrt V) ~ 8.55.
  auto w = symcap::weight_expansion(rat(23, 2)).flat();
  EXPECT_FALSE(symcap::near_volume_cutoff(w, 8));
  EXPECT_TRUE(symcap::near_volume_cutoff(w, 9));
}

}  // namespace
