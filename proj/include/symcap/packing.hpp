#pragma once

// Ball packings  B(a_1) u ... u B(a_k) -> B(A)  in dimension four.
//
// An embedding exists iff A^2 > sum a_i^2 and A > (1/d) sum m_i a_i for every
// exceptional class (d; m). Capacities are the infimum of admissible A, i.e.
// the largest of these lower bounds.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "symcap/cremona.hpp"
#include "symcap/diophantine.hpp"
#include "symcap/numeric.hpp"

namespace symcap {

inline std::vector<Rat> sorted_weights(std::vector<Rat> a) {
  for (const auto& x : a)
    if (x.sign() <= 0) throw std::invalid_argument("ball sizes must be positive, got " + x.str());
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

struct PackingProblem {
  std::vector<Rat> weights;  // non-increasing, positive
  Rat target;

  PackingProblem(std::vector<Rat> a, Rat A) : weights(sorted_weights(std::move(a))), target(std::move(A)) {
    if (weights.empty()) throw std::invalid_argument("packing problem needs at least one ball");
    if (target.sign() <= 0) throw std::invalid_argument("target ball size must be positive");
  }
};

inline Rat sum_squares(std::span<const Rat> a) {
  Rat v = 0;
  for (const auto& x : a) v += x * x;
  return v;
}

// (sum m_i a_i) / d, pairing both sorted lists entry by entry; the shorter one
// is padded with zeros.
inline Rat constraint_value(const ClassVector& e, std::span<const Rat> a) {
  if (e.d() < 1) throw std::invalid_argument("constraint_value: class needs d >= 1");
  Rat s = 0;
  std::size_t n = std::min(e.parts(), a.size());
  for (std::size_t i = 0; i < n; ++i) s += Rat(e.m()[i]) * a[i];
  return s / Rat(e.d());
}

struct Witness {
  std::optional<ClassVector> cls;  // empty: the volume bound

  bool is_volume() const { return !cls.has_value(); }
  std::string str() const { return cls ? cls->str() : "volume"; }
};

struct CapacityResult {
  RootBound value;
  bool certified = false;
  Witness witness;
  std::int64_t d_max_used = 0;
};

// Cauchy-Schwarz on the system gives (sum m_i a_i / d)^2 <= (1 + 1/d^2) V, so
// classes with d^2 >= V / (v^2 - V) cannot beat v.
inline bool cauchy_schwarz_cutoff(const Rat& volume, const Rat& v_squared, std::int64_t d_max, bool strict) {
  if (v_squared <= volume) return false;
  Rat bound = volume / (v_squared - volume);
  Rat dd = Rat(d_max) * Rat(d_max);
  return strict ? dd > bound : dd >= bound;
}

// True when no exceptional class of degree > d_max beats the volume bound.
// A class beating it has at most k = len(a) parts and, with S = sum a_i,
// d |3 sqrt(V) - S| < (sqrt(k) + 1) sqrt(V). For equal weights and k >= 9
// no class beats it at all: sum m_i a_i / d <= a (3d - 1)/d < 3a <= sqrt(k) a.
inline bool near_volume_cutoff(std::span<const Rat> a, std::int64_t d_max, int budget = kDefaultRefineBudget) {
  if (a.empty()) return true;
  const Rat volume = sum_squares(a);
  const Rat k = static_cast<long>(a.size());
  bool uniform = std::all_of(a.begin(), a.end(), [&](const Rat& x) { return x == a.front(); });
  if (uniform && a.size() >= 9) return true;
  Rat s = 0;
  for (const auto& x : a) s += x;
  int side = compare(Rat(9) * volume, s * s) == Ordering::Greater ? 1 : -1;
  if (Rat(9) * volume == s * s) return false;
  RootBound lhs = (RootBound::sqrt(volume) * Rat(3) - RootBound(s)) * Rat(side * d_max);
  RootBound rhs = RootBound::sqrt(k * volume) + RootBound::sqrt(volume);
  Ordering o = compare(lhs, rhs, budget);
  return o == Ordering::Greater || o == Ordering::Equal;
}

namespace detail {

struct BestClass {
  std::optional<ClassVector> cls;
  Rat value;

  void offer(const ClassVector& e, std::span<const Rat> a) {
    Rat c = constraint_value(e, a);
    if (!cls || c > value) {
      cls = e;
      value = c;
    }
  }
};

inline CapacityResult finish_capacity(std::span<const Rat> a, const BestClass& best, std::int64_t d_max,
                                      bool cutoff_applies, int budget) {
  const Rat volume = sum_squares(a);
  CapacityResult r;
  r.d_max_used = d_max;
  if (best.cls && best.value * best.value > volume) {
    r.value = RootBound(best.value);
    r.witness.cls = best.cls;
    r.certified = cutoff_applies && (cauchy_schwarz_cutoff(volume, best.value * best.value, d_max, false) ||
                                     near_volume_cutoff(a, d_max, budget));
  } else {
    r.value = RootBound::sqrt(volume);
    r.certified = cutoff_applies && near_volume_cutoff(a, d_max, budget);
  }
  return r;
}

}  // namespace detail

// Capacity over all exceptional classes of degree <= d_max.
inline CapacityResult capacity(std::vector<Rat> a, std::int64_t d_max, int budget = kDefaultRefineBudget) {
  if (a.empty()) throw std::invalid_argument("capacity: empty list of balls");
  if (d_max < 1) throw std::invalid_argument("capacity: d_max must be >= 1");
  a = sorted_weights(std::move(a));
  detail::BestClass best;
  for (std::int64_t d = 1; d <= d_max; ++d)
    for (const auto& e : near_volume_classes(a, d)) best.offer(e, a);
  return detail::finish_capacity(a, best, d_max, true, budget);
}

// Same quantity, maximised over an explicit catalog. Certification needs the
// catalog to contain every class with at most len(a) parts.
inline CapacityResult capacity_from_catalog(std::vector<Rat> a, const Catalog& cat,
                                            int budget = kDefaultRefineBudget) {
  if (a.empty()) throw std::invalid_argument("capacity: empty list of balls");
  a = sorted_weights(std::move(a));
  detail::BestClass best;
  for (const auto& e : cat.classes) best.offer(e, a);
  bool complete = !cat.max_parts || *cat.max_parts >= a.size();
  return detail::finish_capacity(a, best, cat.d_max, complete, budget);
}

enum class PackVerdict { Yes, No };

struct PackDecision {
  PackVerdict verdict;
  bool certified;
  Witness witness;  // meaningful for No
};

inline PackDecision pack_decide(const PackingProblem& p, std::int64_t d_max, int budget = kDefaultRefineBudget) {
  if (d_max < 1) throw std::invalid_argument("pack_decide: d_max must be >= 1");
  const auto& a = p.weights;
  const Rat volume = sum_squares(a);
  const Rat a2 = p.target * p.target;
  if (a2 <= volume) return {PackVerdict::No, true, {}};
  detail::BestClass best;
  for (std::int64_t d = 1; d <= d_max; ++d)
    for (const auto& e : near_volume_classes(a, d)) best.offer(e, a);
  if (best.cls && best.value >= p.target) return {PackVerdict::No, true, {best.cls}};
  bool certified = cauchy_schwarz_cutoff(volume, a2, d_max, true) || near_volume_cutoff(a, d_max, budget);
  return {PackVerdict::Yes, certified, {}};
}

inline std::vector<Rat> equal_balls(std::int64_t k) {
  if (k < 1) throw std::invalid_argument("number of balls must be >= 1");
  return std::vector<Rat>(static_cast<std::size_t>(k), Rat(1));
}

// c_k^2 = k / p_k.
inline Rat packing_number_from(std::int64_t k, const CapacityResult& c) {
  Rat c2 = c.value.exact() ? *c.value.exact() * *c.value.exact() : Rat(k);
  return Rat(k) / c2;
}

inline Rat packing_number(std::int64_t k, std::int64_t d_max) {
  return packing_number_from(k, capacity(equal_balls(k), d_max));
}

struct PackingRow {
  std::int64_t k;
  CapacityResult capacity;
  Rat packing_number;
};

inline std::vector<PackingRow> packing_table(std::int64_t k_max, std::int64_t d_max) {
  std::vector<PackingRow> rows;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    auto c = capacity(equal_balls(k), d_max);
    Rat p = packing_number_from(k, c);
    rows.push_back({k, std::move(c), std::move(p)});
  }
  return rows;
}

}  // namespace symcap
