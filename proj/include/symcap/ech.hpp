#pragma once

// ECH capacities of 4-dimensional ellipsoids. N_k(a, b) is the k-th smallest
// element (with multiplicity, starting at N_0 = 0) of {m a + n b : m, n >= 0},
// and E(a, b) -> E(c, d) iff N_k(a, b) <= N_k(c, d) for all k.

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "symcap/numeric.hpp"

namespace symcap {

// Raised when two values cannot be ordered within the refinement budget.
class UndecidedComparison : public std::runtime_error {
 public:
  explicit UndecidedComparison(std::size_t index)
      : std::runtime_error("comparison undecided at index " + std::to_string(index)), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

struct Ellipsoid {
  RootBound a, b;
};

struct EchSequence {
  RootBound a, b;
  std::vector<RootBound> values;  // N_0, ..., N_K
};

// Enclosures start this tight so that most comparisons decide immediately.
inline constexpr int kEchPrerefine = 96;

inline void require_positive(const RootBound& x, const char* what) {
  if (compare(x, RootBound(0)) != Ordering::Greater) throw std::invalid_argument(std::string(what) + " must be > 0");
}

// Best-first walk over the lattice quadrant: pop the smallest m a + n b, push
// (m+1, n) and (m, n+1) unless already seen.
inline EchSequence ech_capacities(const RootBound& a_in, const RootBound& b_in, std::size_t K,
                                  int budget = kDefaultRefineBudget) {
  require_positive(a_in, "ech_capacities: a");
  require_positive(b_in, "ech_capacities: b");
  const RootBound a = a_in.refined(kEchPrerefine), b = b_in.refined(kEchPrerefine);

  struct Node {
    std::int64_t m, n;
    RootBound value;
  };
  std::size_t produced = 0;
  auto later = [&](const Node& x, const Node& y) {  // priority_queue puts the "largest" on top
    switch (compare(x.value, y.value, budget)) {
      case Ordering::Greater: return true;
      case Ordering::Less: return false;
      case Ordering::Equal: return std::pair(x.m, x.n) > std::pair(y.m, y.n);
      case Ordering::Undecided: break;
    }
    throw UndecidedComparison(produced);
  };
  auto node = [&](std::int64_t m, std::int64_t n) {
    return Node{m, n, a * Rat(static_cast<long>(m)) + b * Rat(static_cast<long>(n))};
  };

  std::priority_queue<Node, std::vector<Node>, decltype(later)> frontier(later);
  std::set<std::pair<std::int64_t, std::int64_t>> seen{{0, 0}};
  frontier.push(node(0, 0));
  EchSequence seq{a, b, {}};
  seq.values.reserve(K + 1);
  while (seq.values.size() <= K) {
    Node top = frontier.top();
    frontier.pop();
    seq.values.push_back(top.value);
    produced = seq.values.size();
    for (auto [m, n] : {std::pair(top.m + 1, top.n), std::pair(top.m, top.n + 1)})
      if (seen.insert({m, n}).second) frontier.push(node(m, n));
  }
  return seq;
}

inline EchSequence ech_capacities(const Rat& a, const Rat& b, std::size_t K) {
  return ech_capacities(RootBound(a), RootBound(b), K);
}

enum class EchVerdict { Embeds, Obstructed, Undecided };

inline const char* to_string(EchVerdict v) {
  switch (v) {
    case EchVerdict::Embeds: return "Embeds";
    case EchVerdict::Obstructed: return "Obstructed";
    case EchVerdict::Undecided: return "Undecided";
  }
  return "?";
}

struct EchDecision {
  EchVerdict verdict;
  std::size_t index = 0;            // first obstruction, or where a comparison stayed undecided
  std::size_t certified_up_to = 0;  // every N_k with k <= this was compared
  std::optional<BigInt> separation_index;
  bool fully_certified = false;     // Embeds and the tail past separation_index is settled
};

// Lattice counting gives sqrt(2ab(k+1)) - (a+b) <= N_k(a,b) <= sqrt(2ab(k+1)),
// so N_j(src) <= N_j(tgt) for every j >= k once
//     sqrt(2ab k) + (a+b) <= sqrt(2cd k) - (c+d).
// Returns the smallest k this inequality certifies from rational enclosures,
// or nothing if the volumes are not strictly separated.
inline std::optional<BigInt> separation_index(const Ellipsoid& src, const Ellipsoid& tgt) {
  constexpr unsigned kBits = 64;
  const Rat num = src.a.hi() + src.b.hi() + tgt.a.hi() + tgt.b.hi();
  const Rat tgt_area = Rat(2) * tgt.a.lo() * tgt.b.lo();
  const Rat src_area = Rat(2) * src.a.hi() * src.b.hi();
  if (tgt.a.lo().sign() <= 0 || tgt.b.lo().sign() <= 0) return std::nullopt;
  Rat gap = sqrt_bounds(tgt_area, kBits).first - sqrt_bounds(src_area, kBits).second;
  if (gap.sign() <= 0) return std::nullopt;
  Rat q = num / gap;
  return (q * q).ceil();
}

// Termwise comparison of two materialised sequences of equal length.
inline EchDecision compare_sequences(const std::vector<RootBound>& src, const std::vector<RootBound>& tgt,
                                     int budget = kDefaultRefineBudget) {
  if (src.size() != tgt.size()) throw std::invalid_argument("compare_sequences: length mismatch");
  for (std::size_t k = 0; k < src.size(); ++k) {
    switch (compare(src[k], tgt[k], budget)) {
      case Ordering::Greater:
        return {EchVerdict::Obstructed, k, k == 0 ? 0 : k - 1, std::nullopt, false};
      case Ordering::Undecided:
        return {EchVerdict::Undecided, k, k == 0 ? 0 : k - 1, std::nullopt, false};
      default:
        break;
    }
  }
  return {EchVerdict::Embeds, 0, src.empty() ? 0 : src.size() - 1, std::nullopt, false};
}

inline EchDecision ech_decide(const Ellipsoid& src, const Ellipsoid& tgt, std::size_t k_max,
                              int budget = kDefaultRefineBudget) {
  if (k_max < 1) throw std::invalid_argument("ech_decide: K_max must be >= 1");
  EchDecision r;
  try {
    auto s = ech_capacities(src.a, src.b, k_max, budget);
    auto t = ech_capacities(tgt.a, tgt.b, k_max, budget);
    r = compare_sequences(s.values, t.values, budget);
  } catch (const UndecidedComparison& e) {
    return {EchVerdict::Undecided, e.index(), 0, std::nullopt, false};
  }
  if (r.verdict == EchVerdict::Embeds) {
    r.separation_index = separation_index(src, tgt);
    r.fully_certified = r.separation_index && *r.separation_index <= BigInt(static_cast<unsigned long>(k_max));
  }
  return r;
}

struct Bracket {
  Rat lo, hi;
  int probes = 0;
};

// Bisection for the smallest ball B(A) admitting E(1, a) according to the
// first K_max ECH capacities. E(1,a) -> B(lo) is obstructed, E(1,a) -> B(hi)
// embeds (up to K_max), and hi - lo <= tol.
inline Bracket ech_ball_capacity(const Rat& a, std::size_t k_max, const Rat& tol) {
  if (a < Rat(1)) throw std::domain_error("ech_ball_capacity: a must be >= 1");
  if (tol.sign() <= 0) throw std::invalid_argument("ech_ball_capacity: tol must be > 0");
  if (a == Rat(1)) return {Rat(1), Rat(1), 0};
  if (k_max < 2) throw std::invalid_argument("ech_ball_capacity: K_max must be >= 2 to separate the bracket");
  const auto src = ech_capacities(RootBound(Rat(1)), RootBound(a), k_max).values;
  const auto ball = ech_capacities(RootBound(Rat(1)), RootBound(Rat(1)), k_max).values;
  Bracket br{Rat(1), a, 0};
  auto embeds = [&](const Rat& A) {
    ++br.probes;
    std::vector<RootBound> tgt;
    tgt.reserve(ball.size());
    for (const auto& v : ball) tgt.push_back(v * A);
    return compare_sequences(src, tgt).verdict == EchVerdict::Embeds;
  };
  if (embeds(br.lo) || !embeds(br.hi)) throw std::logic_error("ech_ball_capacity: initial bracket invalid");
  while (br.hi - br.lo > tol) {
    Rat mid = (br.lo + br.hi) / Rat(2);
    if (embeds(mid))
      br.hi = mid;
    else
      br.lo = mid;
  }
  return br;
}

enum class ChainVerdict { Holds, FailsAt, Undecided };

inline const char* to_string(ChainVerdict v) {
  switch (v) {
    case ChainVerdict::Holds: return "Holds";
    case ChainVerdict::FailsAt: return "FailsAt";
    case ChainVerdict::Undecided: return "Undecided";
  }
  return "?";
}

struct ChainResult {
  ChainVerdict verdict;
  int step = 0;            // 1: E(1,k) -> E(k^1/3, k^2/3);  2: E(1,k^2/3) -> B(k^1/3)
  std::size_t index = 0;   // failing or undecided index within that step
  std::size_t certified_up_to = 0;
  EchDecision steps[2];
};

// The two 4-dimensional ellipsoid embeddings behind the 6-dimensional chain
//   k B^6(1) -> E(1,1,k) -> E(1,k^1/3,k^2/3) -> B^6(k^1/3).
// The outer arrows (cutting into balls, suspension) are not computed.
inline ChainResult stability_chain_check(std::int64_t k, std::size_t k_max, int budget = kDefaultRefineBudget) {
  if (k < 2) throw std::invalid_argument("stability_chain_check: k must be >= 2");
  const Rat kk(static_cast<long>(k));
  const RootBound c1 = RootBound::cbrt(kk), c2 = RootBound::cbrt(kk * kk);
  ChainResult r{ChainVerdict::Holds, 0, 0, k_max, {}};
  r.steps[0] = ech_decide({RootBound(Rat(1)), RootBound(kk)}, {c1, c2}, k_max, budget);
  r.steps[1] = ech_decide({RootBound(Rat(1)), c2}, {c1, c1}, k_max, budget);
  for (int s = 0; s < 2; ++s) {
    const auto& d = r.steps[s];
    if (d.verdict == EchVerdict::Embeds) continue;
    r.verdict = d.verdict == EchVerdict::Obstructed ? ChainVerdict::FailsAt : ChainVerdict::Undecided;
    r.step = s + 1;
    r.index = d.index;
    r.certified_up_to = d.certified_up_to;
    return r;
  }
  return r;
}

}  // namespace symcap
