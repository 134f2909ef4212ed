#pragma once

// c(a) = inf { A : E(1, a) -> B(A) }, computed through the weight expansion,
// plus the closed form of the Fibonacci stairs on [1, tau^4] and grid scans.

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "symcap/numeric.hpp"
#include "symcap/packing.hpp"
#include "symcap/parallel.hpp"
#include "symcap/weights.hpp"

namespace symcap {

inline CapacityResult c_of_a(const Rat& a, std::int64_t d_max, int budget = kDefaultRefineBudget) {
  if (a < Rat(1)) throw std::domain_error("c(a) is defined for a >= 1, got " + a.str());
  return capacity(weight_expansion(a).flat(), d_max, budget);
}

// g_n = f_{2n-1}: 1, 1, 2, 5, 13, 34, ...
inline BigInt odd_fibonacci(int n) {
  if (n < 0) throw std::invalid_argument("odd_fibonacci: n must be >= 0");
  BigInt prev = 1, cur = 1;  // g_0, g_1; g_{n+1} = 3 g_n - g_{n-1}
  if (n == 0) return prev;
  for (int i = 1; i < n; ++i) {
    BigInt next = 3 * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

struct FibData {
  int n;
  BigInt g;
  Rat gamma;  // g_{n+1} / g_n
  Rat a;      // gamma^2, where the step touches the volume curve
  Rat b;      // g_{n+2} / g_n, where the slanted edge meets the next plateau
};

inline FibData fib_data(int n) {
  BigInt g0 = odd_fibonacci(n), g1 = odd_fibonacci(n + 1), g2 = odd_fibonacci(n + 2);
  Rat gamma(g1, g0);
  return {n, g0, gamma, gamma * gamma, Rat(g2, g0)};
}

// tau^4 = (7 + 3 sqrt 5) / 2.
inline RootBound tau4() { return RootBound(rat(7, 2)) + RootBound::sqrt(5) * rat(3, 2); }

// Fibonacci stairs. On [a_n, b_n] the graph is the line a / gamma_n through
// the origin (it meets sqrt(a) at a_n); on [b_n, a_{n+1}] it is the plateau
// gamma_{n+1}.
inline Rat fib_oracle(const Rat& a, int budget = kDefaultRefineBudget) {
  if (a < Rat(1)) throw std::out_of_range("fib_oracle: a must be >= 1");
  Ordering o = compare(RootBound(a), tau4(), budget);
  if (o == Ordering::Undecided) throw std::out_of_range("fib_oracle: cannot place a against tau^4");
  if (o != Ordering::Less) throw std::out_of_range("fib_oracle: a must be below tau^4, got " + a.str());
  int n = 0;
  while (fib_data(n + 1).a <= a) ++n;
  FibData step = fib_data(n);
  if (a <= step.b) return a / step.gamma;
  return fib_data(n + 1).gamma;
}

// Reduced fractions p/q in [lo, hi] with q <= denom_max, ascending.
inline std::vector<Rat> farey_grid(const Rat& lo, const Rat& hi, std::int64_t denom_max) {
  if (denom_max < 1) throw std::invalid_argument("farey_grid: denom_max must be >= 1");
  std::vector<Rat> out;
  for (std::int64_t q = 1; q <= denom_max; ++q) {
    BigInt p0 = (lo * Rat(q)).ceil(), p1 = (hi * Rat(q)).floor();
    for (BigInt p = p0; p <= p1; ++p) {
      Rat x(p, BigInt(static_cast<long>(q)));
      if (x.den() == q) out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct ScanRow {
  Rat a;
  CapacityResult c;
  std::optional<Rat> oracle;  // only below tau^4
};

inline std::vector<ScanRow> staircase_scan(const Rat& lo, const Rat& hi, std::int64_t denom_max, std::int64_t d_max,
                                           unsigned jobs = 1, int budget = kDefaultRefineBudget) {
  if (lo < Rat(1) || !(lo < hi)) throw std::invalid_argument("staircase_scan needs 1 <= lo < hi");
  auto grid = farey_grid(lo, hi, denom_max);
  std::vector<std::optional<ScanRow>> rows(grid.size());
  RootBound t4 = tau4();
  parallel_for(grid.size(), jobs, [&](std::size_t i) {
    const Rat& a = grid[i];
    ScanRow row{a, c_of_a(a, d_max, budget), std::nullopt};
    if (compare(RootBound(a), t4, budget) == Ordering::Less) row.oracle = fib_oracle(a, budget);
    rows[i] = std::move(row);
  });
  std::vector<ScanRow> out;
  out.reserve(rows.size());
  for (auto& r : rows) out.push_back(std::move(*r));
  return out;
}

}  // namespace symcap
