#pragma once

// Solutions of the Diophantine system
//     sum m_i = 3d - 1,   sum m_i^2 = d^2 + 1,
// catalogs of exceptional classes built from them, and the targeted search
// for the (few) classes that can beat the volume bound of a given packing.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "symcap/cremona.hpp"
#include "symcap/numeric.hpp"
#include "symcap/parallel.hpp"

namespace symcap {

namespace detail {

struct DeSearch {
  std::int64_t d;
  std::optional<std::size_t> max_parts;
  std::vector<std::int64_t> prefix;
  std::vector<ClassVector> out;

  // Smallest sum of squares of `slots` positive parts adding up to r.
  static std::int64_t min_squares(std::int64_t r, std::int64_t slots) {
    std::int64_t q = r / slots, extra = r % slots;
    return extra * (q + 1) * (q + 1) + (slots - extra) * q * q;
  }

  void run(std::int64_t rem_sum, std::int64_t rem_sq, std::int64_t upper) {
    if (rem_sum == 0) {
      if (rem_sq == 0) out.emplace_back(d, prefix);
      return;
    }
    std::optional<std::int64_t> slots;
    if (max_parts) {
      if (prefix.size() >= *max_parts) return;
      slots = static_cast<std::int64_t>(*max_parts - prefix.size());
    }
    for (std::int64_t m = std::min(upper, rem_sum); m >= 1; --m) {
      if (m * m > rem_sq) continue;
      std::int64_t r = rem_sum - m, q = rem_sq - m * m;
      // Largest square sum reachable with parts <= m; it only shrinks with m.
      if ((r / m) * m * m + (r % m) * (r % m) < q) break;
      if (r > 0) {
        if (slots) {
          if (*slots == 1 || min_squares(r, *slots - 1) > q) continue;
        } else if (r > q) {
          continue;
        }
      } else if (q != 0) {
        continue;
      }
      prefix.push_back(m);
      run(r, q, m);
      prefix.pop_back();
    }
  }
};

}  // namespace detail

// All non-increasing positive vectors m solving the system for this d.
// Parts are bounded by d because m_1^2 <= d^2 + 1.
inline std::vector<ClassVector> solve_de(std::int64_t d, std::optional<std::size_t> max_parts = std::nullopt) {
  if (d < 1) throw std::invalid_argument("solve_de: d must be >= 1");
  detail::DeSearch s{d, max_parts, {}, {}};
  s.run(3 * d - 1, d * d + 1, d);
  std::sort(s.out.begin(), s.out.end());
  return s.out;
}

// Largest d with (9-k) d^2 - 6d + (1-k) <= 0, which Cauchy-Schwarz forces on
// any solution with at most k parts.
inline std::int64_t max_degree_for_length(int k) {
  if (k < 1) throw std::invalid_argument("max_degree_for_length: k must be >= 1");
  if (k >= 9) throw std::domain_error("max_degree_for_length: no finite degree bound for k >= 9");
  auto holds = [k](std::int64_t d) { return (9 - k) * d * d - 6 * d + (1 - k) <= 0; };
  std::int64_t d = 0;
  while (holds(d + 1)) ++d;
  return d;
}

struct Catalog {
  static constexpr int kFormatVersion = 1;

  std::int64_t d_max = 0;
  std::optional<std::size_t> max_parts;
  std::vector<ClassVector> classes;   // exceptional, sorted, unique
  std::vector<ClassVector> rejected;  // (DE) solutions that fail the Cremona test

  std::vector<ClassVector> of_degree(std::int64_t d) const {
    std::vector<ClassVector> out;
    for (const auto& c : classes)
      if (c.d() == d) out.push_back(c);
    return out;
  }
};

inline Catalog build_catalog(std::int64_t d_max, std::optional<std::size_t> max_parts = std::nullopt,
                             unsigned jobs = 1) {
  if (d_max < 1) throw std::invalid_argument("build_catalog: d_max must be >= 1");
  std::vector<std::vector<ClassVector>> good(d_max), bad(d_max);
  parallel_for(static_cast<std::size_t>(d_max), jobs, [&](std::size_t i) {
    for (auto& v : solve_de(static_cast<std::int64_t>(i) + 1, max_parts)) {
      if (is_exceptional_candidate(v))
        good[i].push_back(std::move(v));
      else
        bad[i].push_back(std::move(v));
    }
  });
  Catalog cat{d_max, max_parts, {}, {}};
  for (std::int64_t i = 0; i < d_max; ++i) {
    cat.classes.insert(cat.classes.end(), good[i].begin(), good[i].end());
    cat.rejected.insert(cat.rejected.end(), bad[i].begin(), bad[i].end());
  }
  return cat;
}

// ---------------------------------------------------------------------------
// Catalog cache files
//
//   # symcap exceptional-class catalog
//   format_version 1
//   d_max 7
//   max_parts 8            (or "unlimited")
//   classes 6
//   1: 1 1
//   ...
//   rejected 0
//   ...

inline void write_catalog(const Catalog& cat, std::ostream& os) {
  auto line = [&os](const ClassVector& c) {
    os << c.d() << ':';
    for (auto x : c.m()) os << ' ' << x;
    os << '\n';
  };
  os << "# symcap exceptional-class catalog\n";
  os << "format_version " << Catalog::kFormatVersion << '\n';
  os << "d_max " << cat.d_max << '\n';
  os << "max_parts " << (cat.max_parts ? std::to_string(*cat.max_parts) : "unlimited") << '\n';
  os << "classes " << cat.classes.size() << '\n';
  for (const auto& c : cat.classes) line(c);
  os << "rejected " << cat.rejected.size() << '\n';
  for (const auto& c : cat.rejected) line(c);
}

inline Catalog read_catalog(std::istream& is) {
  auto fail = [](const std::string& what) { return std::runtime_error("catalog file: " + what); };
  std::string text;
  auto next = [&]() -> std::string {
    while (std::getline(is, text))
      if (!text.empty() && text[0] != '#') return text;
    throw fail("unexpected end of file");
  };
  auto keyed = [&](const std::string& key) {
    std::istringstream ls(next());
    std::string k, v;
    ls >> k >> v;
    if (k != key || v.empty()) throw fail("expected '" + key + "', got '" + text + "'");
    return v;
  };
  auto parse_class = [&](const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw fail("bad class line '" + s + "'");
    std::int64_t d = std::stoll(s.substr(0, colon));
    std::istringstream ls(s.substr(colon + 1));
    std::vector<std::int64_t> m;
    for (std::int64_t x; ls >> x;) m.push_back(x);
    if (!ls.eof()) throw fail("bad class line '" + s + "'");
    return ClassVector(d, std::move(m));
  };

  if (std::stoi(keyed("format_version")) != Catalog::kFormatVersion) throw fail("unsupported format version");
  Catalog cat;
  cat.d_max = std::stoll(keyed("d_max"));
  std::string mp = keyed("max_parts");
  if (mp != "unlimited") cat.max_parts = std::stoull(mp);
  std::size_t n = std::stoull(keyed("classes"));
  for (std::size_t i = 0; i < n; ++i) cat.classes.push_back(parse_class(next()));
  std::size_t r = std::stoull(keyed("rejected"));
  for (std::size_t i = 0; i < r; ++i) cat.rejected.push_back(parse_class(next()));
  return cat;
}

inline std::filesystem::path catalog_cache_file(const std::filesystem::path& dir, std::int64_t d_max,
                                                 std::optional<std::size_t> max_parts) {
  return dir / ("catalog-v" + std::to_string(Catalog::kFormatVersion) + "-d" + std::to_string(d_max) + "-p" +
                (max_parts ? std::to_string(*max_parts) : std::string("all")) + ".txt");
}

// SYMCAP_CACHE_DIR, then $XDG_DATA_HOME/symcap, then ~/.local/share/symcap.
inline std::filesystem::path default_cache_dir() {
  if (const char* p = std::getenv("SYMCAP_CACHE_DIR"); p && *p) return p;
  if (const char* p = std::getenv("XDG_DATA_HOME"); p && *p) return std::filesystem::path(p) / "symcap";
  if (const char* p = std::getenv("HOME"); p && *p) return std::filesystem::path(p) / ".local/share/symcap";
  return ".symcap-cache";
}

struct CatalogLoad {
  Catalog catalog;
  bool from_cache;
};

inline CatalogLoad load_or_build_catalog(const std::filesystem::path& dir, std::int64_t d_max,
                                         std::optional<std::size_t> max_parts, unsigned jobs = 1) {
  auto file = catalog_cache_file(dir, d_max, max_parts);
  if (std::ifstream in(file); in) {
    try {
      Catalog cat = read_catalog(in);
      if (cat.d_max == d_max && cat.max_parts == max_parts) return {std::move(cat), true};
    } catch (const std::exception&) {
      // stale or damaged cache: rebuild below
    }
  }
  Catalog cat = build_catalog(d_max, max_parts, jobs);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  auto tmp = file;
  tmp += ".tmp";
  if (std::ofstream out(tmp); out) {
    write_catalog(cat, out);
    out.close();
    std::filesystem::rename(tmp, file, ec);
  }
  return {std::move(cat), false};
}

// ---------------------------------------------------------------------------
// Classes that can beat the volume bound.
//
// Let a be sorted non-increasing with V = sum a_i^2. If an exceptional class
// of degree d has sum m_i a_i > d sqrt(V), write m = (d / sqrt V) a + eps.
// Expanding |m|^2 = d^2 + 1 gives |eps|^2 = 1 - 2 (d / sqrt V) <eps, a> < 1.
// So every m_i is the floor or the ceiling of x_i = d a_i / sqrt(V) (exactly
// x_i when that is an integer) and entries past the end of a are zero.
// The enumeration below produces every such vector that solves the system
// and passes the Cremona test; it may also return classes that stay below
// the volume bound.

inline std::vector<ClassVector> near_volume_classes(std::span<const Rat> a, std::int64_t d) {
  if (d < 1) throw std::invalid_argument("near_volume_classes: d must be >= 1");
  if (a.empty()) return {};
  Rat volume = 0;
  for (const auto& x : a) volume += x * x;
  if (volume.sign() <= 0) return {};

  struct Group {
    std::int64_t base;   // floor(x_i)
    std::int64_t count;  // entries in the group
    bool free;           // false when x_i is an integer
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < a.size();) {
    std::size_t j = i;
    while (j < a.size() && a[j] == a[i]) ++j;
    Rat x2 = Rat(d * d) * a[i] * a[i] / volume;
    BigInt f = floor_sqrt(x2);
    groups.push_back({f.get_si(), static_cast<std::int64_t>(j - i), Rat(f * f) != x2});
    i = j;
  }

  std::int64_t base_sum = 0, base_sq = 0;
  for (const auto& g : groups) {
    base_sum += g.count * g.base;
    base_sq += g.count * g.base * g.base;
  }
  // Raising one entry from b to b+1 adds 1 to the sum and 2b+1 to the squares.
  const std::int64_t need_raises = (3 * d - 1) - base_sum;
  const std::int64_t need_sq = (d * d + 1) - base_sq;
  if (need_raises < 0) return {};

  std::vector<std::int64_t> raises(groups.size(), 0);
  std::vector<ClassVector> out;
  auto emit = [&] {
    std::vector<std::int64_t> m;
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (std::int64_t i = 0; i < groups[g].count; ++i) m.push_back(groups[g].base + (i < raises[g] ? 1 : 0));
    ClassVector v(d, std::move(m));
    if (v.solves_de() && (v.m().empty() || v.m().back() >= 0) && reduce(v).verdict == ReduceVerdict::ReducesToZero)
      out.push_back(std::move(v));
  };
  // Bounds on the square increment achievable from groups [g, end) with r raises.
  auto reachable = [&](std::size_t g, std::int64_t r, std::int64_t sq) {
    std::int64_t lo = 0, hi = 0, left = r;
    for (std::size_t k = g; k < groups.size() && left > 0; ++k) {  // largest bases first
      if (!groups[k].free) continue;
      std::int64_t take = std::min(left, groups[k].count);
      hi += take * (2 * groups[k].base + 1);
      left -= take;
    }
    if (left > 0) return false;
    left = r;
    for (std::size_t k = groups.size(); k-- > g && left > 0;) {
      if (!groups[k].free) continue;
      std::int64_t take = std::min(left, groups[k].count);
      lo += take * (2 * groups[k].base + 1);
      left -= take;
    }
    return lo <= sq && sq <= hi;
  };
  auto search = [&](auto&& self, std::size_t g, std::int64_t r, std::int64_t sq) -> void {
    if (g == groups.size()) {
      if (r == 0 && sq == 0) emit();
      return;
    }
    if (!reachable(g, r, sq)) return;
    std::int64_t most = groups[g].free ? std::min(r, groups[g].count) : 0;
    for (std::int64_t c = most; c >= 0; --c) {
      raises[g] = c;
      self(self, g + 1, r - c, sq - c * (2 * groups[g].base + 1));
    }
    raises[g] = 0;
  };
  search(search, 0, need_raises, need_sq);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace symcap
