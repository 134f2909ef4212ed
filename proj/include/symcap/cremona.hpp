#pragma once

// Homology classes dL - sum m_i E_i in blow-ups of the projective plane, the
// Cremona move on them, and the reduction test that recognises exceptional
// classes.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace symcap {

class ClassVector {
 public:
  ClassVector() = default;
  ClassVector(std::int64_t d, std::vector<std::int64_t> m) : d_(d), m_(std::move(m)) { canonicalize(); }

  // The reduction target (0; -1).
  static ClassVector zero_class() { return ClassVector(0, {-1}); }

  std::int64_t d() const { return d_; }
  const std::vector<std::int64_t>& m() const { return m_; }
  std::size_t parts() const { return m_.size(); }

  std::int64_t entry(std::size_t i) const { return i < m_.size() ? m_[i] : 0; }

  std::int64_t sum() const { return std::accumulate(m_.begin(), m_.end(), std::int64_t{0}); }
  std::int64_t sum_squares() const {
    return std::accumulate(m_.begin(), m_.end(), std::int64_t{0},
                           [](std::int64_t acc, std::int64_t x) { return acc + x * x; });
  }

  // Deviations from the two equations sum m = 3d - 1 and sum m^2 = d^2 + 1.
  std::int64_t linear_defect() const { return sum() - (3 * d_ - 1); }
  std::int64_t quadratic_defect() const { return sum_squares() - (d_ * d_ + 1); }
  bool solves_de() const { return linear_defect() == 0 && quadratic_defect() == 0; }

  std::string str() const {
    std::ostringstream os;
    os << '(' << d_ << ';';
    for (std::size_t i = 0; i < m_.size(); ++i) os << (i ? "," : "") << m_[i];
    os << ')';
    return os.str();
  }

  friend bool operator==(const ClassVector&, const ClassVector&) = default;
  friend std::strong_ordering operator<=>(const ClassVector& x, const ClassVector& y) {
    if (auto c = x.d_ <=> y.d_; c != 0) return c;
    return x.m_ <=> y.m_;
  }
  friend std::ostream& operator<<(std::ostream& os, const ClassVector& v) { return os << v.str(); }

 private:
  // Zero entries carry no information and are dropped wherever they sit;
  // the rest is sorted non-increasing (negatives included).
  void canonicalize() {
    std::erase(m_, 0);
    std::sort(m_.begin(), m_.end(), std::greater<>());
  }

  std::int64_t d_ = 0;
  std::vector<std::int64_t> m_;
};

inline std::int64_t cremona_defect(const ClassVector& v) {
  return v.d() - (v.entry(0) + v.entry(1) + v.entry(2));
}

inline ClassVector cremona_move(const ClassVector& v) {
  std::int64_t delta = cremona_defect(v);
  std::vector<std::int64_t> m = v.m();
  m.resize(std::max<std::size_t>(m.size(), 3), 0);
  for (int i = 0; i < 3; ++i) m[i] += delta;
  return ClassVector(v.d() + delta, std::move(m));
}

enum class ReduceVerdict { ReducesToZero, Stuck, BudgetExhausted };

inline const char* to_string(ReduceVerdict v) {
  switch (v) {
    case ReduceVerdict::ReducesToZero: return "ReducesToZero";
    case ReduceVerdict::Stuck: return "Stuck";
    case ReduceVerdict::BudgetExhausted: return "BudgetExhausted";
  }
  return "?";
}

struct ReduceResult {
  ReduceVerdict verdict;
  std::int64_t steps;
  ClassVector final_class;
  std::vector<ClassVector> trace;  // every iterate, starting with the input
};

inline std::int64_t default_max_steps(const ClassVector& v) {
  return 10 * (std::max<std::int64_t>(v.d(), 0) + static_cast<std::int64_t>(v.parts())) + 64;
}

inline ReduceResult reduce(const ClassVector& v, std::int64_t max_steps) {
  if (max_steps < 1) throw std::invalid_argument("reduce: max_steps must be >= 1");
  const ClassVector target = ClassVector::zero_class();
  ReduceResult r{ReduceVerdict::BudgetExhausted, 0, v, {v}};
  ClassVector cur = v;
  for (std::int64_t step = 0;; ++step) {
    r.steps = step;
    r.final_class = cur;
    if (cur == target) {
      r.verdict = ReduceVerdict::ReducesToZero;
      return r;
    }
    if (cur.d() < 0 || cremona_defect(cur) == 0) {
      r.verdict = ReduceVerdict::Stuck;
      return r;
    }
    if (step == max_steps) return r;
    cur = cremona_move(cur);
    r.trace.push_back(cur);
  }
}

inline ReduceResult reduce(const ClassVector& v) { return reduce(v, default_max_steps(v)); }

inline bool is_exceptional_candidate(const ClassVector& v) {
  if (v.d() < 1) throw std::invalid_argument("exceptional class needs d >= 1: " + v.str());
  if (!v.m().empty() && v.m().back() < 0)
    throw std::invalid_argument("exceptional class needs non-negative entries: " + v.str());
  return v.solves_de() && reduce(v).verdict == ReduceVerdict::ReducesToZero;
}

}  // namespace symcap
