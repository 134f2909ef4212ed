#pragma once

// Weight expansion w(a) of a rational a >= 1: the ball sizes whose packing
// problem is equivalent to embedding the ellipsoid E(1, a) into a ball.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "symcap/numeric.hpp"

namespace symcap {

struct WeightBlock {
  Rat value;
  std::int64_t mult;

  friend bool operator==(const WeightBlock&, const WeightBlock&) = default;
};

struct WeightExpansion {
  Rat source;
  std::vector<WeightBlock> blocks;  // values strictly decreasing, first value 1

  std::vector<Rat> flat() const {
    std::vector<Rat> out;
    for (const auto& b : blocks)
      for (std::int64_t i = 0; i < b.mult; ++i) out.push_back(b.value);
    return out;
  }

  std::int64_t size() const {
    std::int64_t n = 0;
    for (const auto& b : blocks) n += b.mult;
    return n;
  }
};

// Euclid's algorithm on the pair (a, 1), carried out exactly: each block is
// (current unit, how many times it fits), the next unit is the remainder.
inline WeightExpansion weight_expansion(const Rat& a) {
  if (a < Rat(1)) throw std::domain_error("weight expansion needs a >= 1, got " + a.str());
  WeightExpansion w{a, {}};
  Rat big = a, unit = 1;
  while (unit.sign() > 0) {
    BigInt l = (big / unit).floor();
    if (!l.fits_slong_p()) throw std::overflow_error("weight multiplicity too large");
    w.blocks.push_back({unit, static_cast<std::int64_t>(l.get_si())});
    Rat rem = big - Rat(l) * unit;
    big = unit;
    unit = rem;
  }
  return w;
}

// The multiplicities are the continued-fraction digits of the source.
inline std::vector<std::int64_t> multiplicities(const WeightExpansion& w) {
  std::vector<std::int64_t> out;
  out.reserve(w.blocks.size());
  for (const auto& b : w.blocks) out.push_back(b.mult);
  return out;
}

}  // namespace symcap
