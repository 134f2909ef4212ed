// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "symcap/cli.hpp"
#include "symcap/cremona.hpp"
#include "symcap/diophantine.hpp"
#include "symcap/ech.hpp"
#include "symcap/ellipsoid.hpp"
#include "symcap/packing.hpp"
#include "symcap/weights.hpp"

namespace {

using namespace symcap;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (o.ok && secs > limit_s) o.fail("took " + std::to_string(secs) + " s");
  if (!o.ok) ++failures;
  std::ostringstream line;
  line << (o.ok ? "PASS" : "FAIL") << "  [" << id << "] " << name << "  (" << std::fixed << std::setprecision(2) << secs
       << " s, limit " << limit_s << " s)";
  if (!o.detail.empty()) line << "  " << o.detail;
  std::cout << line.str() << std::endl;
}

std::string show(const RootBound& x) { return x.is_exact() ? x.exact()->str() : x.expr(); }

// K+1 smallest m a + n b, by enumerating a triangle known to hold enough points.
std::vector<Rat> ech_brute_force(const Rat& a, const Rat& b, std::size_t K) {
  double need = std::sqrt(2.0 * a.to_double() * b.to_double() * static_cast<double>(K + 1));
  Rat cap = Rat(static_cast<long>(std::ceil(need))) + a + b;
  std::vector<Rat> all;
  for (long m = 0; Rat(m) * a <= cap; ++m)
    for (long n = 0; Rat(m) * a + Rat(n) * b <= cap; ++n) all.push_back(Rat(m) * a + Rat(n) * b);
  std::sort(all.begin(), all.end());
  all.resize(K + 1);
  return all;
}

std::vector<Rat> exact_values(const EchSequence& s) {
  std::vector<Rat> out;
  out.reserve(s.values.size());
  for (const auto& v : s.values) out.push_back(*v.exact());
  return out;
}

void table_reproduction(Outcome& o) {
  std::vector<const char*> argv{"symcap", "table2", "--format", "json"};
  std::ostringstream out, err;
  int code = cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) return o.fail("table2 exit " + std::to_string(code) + ": " + err.str());
  auto rows = cli::Json::parse(out.str());
  const std::vector<Rat> c{1, 2, 2, 2, rat(5, 2), rat(5, 2), rat(8, 3), rat(17, 6)};
  const std::vector<Rat> p{1, rat(1, 2), rat(3, 4), 1, rat(20, 25), rat(24, 25), rat(63, 64), rat(288, 289)};
  if (rows.size() != 12) return o.fail("expected 12 rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r["k"] != static_cast<int>(i + 1)) return o.fail("row order");
    Rat pk = Rat::parse(r["p"].get<std::string>());
    if (i < 8) {
      if (!r["c"].is_string() || Rat::parse(r["c"].get<std::string>()) != c[i])
        return o.fail("c_" + std::to_string(i + 1) + " = " + r["c"].dump());
      if (pk != p[i]) return o.fail("p_" + std::to_string(i + 1) + " = " + pk.str());
    } else if (pk != Rat(1) || !r["certified"].get<bool>()) {
      return o.fail("p_" + std::to_string(i + 1) + " = " + pk.str() + (r["certified"].get<bool>() ? "" : " uncertified"));
    }
  }
  o.detail = "c_1..8 and p_1..12 exact";
}

void de_census(Outcome& o) {
  std::vector<ClassVector> expected{
      ClassVector(1, {1, 1}),
      ClassVector(2, {1, 1, 1, 1, 1}),
      ClassVector(3, {2, 1, 1, 1, 1, 1, 1}),
      ClassVector(4, {2, 2, 2, 1, 1, 1, 1, 1}),
      ClassVector(5, {2, 2, 2, 2, 2, 2, 1, 1}),
      ClassVector(6, {3, 2, 2, 2, 2, 2, 2, 2}),
  };
  auto cat = build_catalog(7, 8);
  if (cat.classes != expected) return o.fail("catalog has " + std::to_string(cat.classes.size()) + " classes");
  for (const auto& c : cat.classes) {
    auto r = reduce(c);
    if (r.verdict != ReduceVerdict::ReducesToZero || r.trace.back() != ClassVector::zero_class())
      return o.fail(c.str() + " does not reduce");
  }
  o.detail = "6 classes, each reduced to (0;-1)";
}

void fibonacci_staircase(Outcome& o) {
  auto rows = staircase_scan(1, rat(27, 4), 8, 100, default_jobs());
  for (const auto& r : rows) {
    if (!r.oracle) return o.fail("no oracle at " + r.a.str());
    if (!r.c.value.exact() || *r.c.value.exact() != *r.oracle)
      return o.fail("c(" + r.a.str() + ") = " + show(r.c.value) + " but oracle " + r.oracle->str());
  }
  const std::vector<Rat> gammas{1, 2, rat(5, 2), rat(13, 5)};
  for (int n = 0; n <= 3; ++n) {
    auto f = fib_data(n);
    if (f.gamma != gammas[static_cast<std::size_t>(n)]) return o.fail("gamma_" + std::to_string(n));
    auto at_a = c_of_a(f.a, 100), at_b = c_of_a(f.b, 100);
    if (*at_a.value.exact() != f.gamma) return o.fail("vertex a_" + std::to_string(n));
    if (*at_b.value.exact() != fib_data(n + 1).gamma) return o.fail("plateau end b_" + std::to_string(n));
  }
  o.detail = std::to_string(rows.size()) + " grid points agree; vertices n=0..3 found";
}

void transition_vertices(Outcome& o) {
  auto c7 = c_of_a(7, 100), c8 = c_of_a(8, 100);
  if (!c7.value.exact() || *c7.value.exact() != rat(8, 3) || !c7.certified) return o.fail("c(7) = " + show(c7.value));
  if (!c8.value.exact() || *c8.value.exact() != rat(17, 6) || !c8.certified) return o.fail("c(8) = " + show(c8.value));
  o.detail = "c(7) = 8/3 via " + c7.witness.str() + ", c(8) = 17/6 via " + c8.witness.str();
}

void volume_regime(Outcome& o) {
  for (const Rat& a : {Rat(9), Rat(10), rat(23, 2), Rat(12)}) {
    auto c = c_of_a(a, 100);
    if (!c.witness.is_volume()) return o.fail("c(" + a.str() + ") obstructed by " + c.witness.str());
    if (compare(c.value, RootBound::sqrt(a)) != Ordering::Equal) return o.fail("c(" + a.str() + ") != sqrt(a)");
    if (!c.certified) return o.fail("c(" + a.str() + ") uncertified at d_max 100");
  }
  o.detail = "sqrt(a) certified for a = 9, 10, 23/2, 12";
}

void ech_cross_validation(Outcome& o) {
  const Rat tol = rat(1, 1000);
  for (const Rat& a : {Rat(2), Rat(4), Rat(5), rat(13, 2), Rat(7), Rat(8)}) {
    auto br = ech_ball_capacity(a, 2000, tol);
    Rat c = *c_of_a(a, 100).value.exact();
    if (br.hi - br.lo > tol) return o.fail("bracket for " + a.str() + " wider than 1/1000");
    if (c < br.lo || c > br.hi)
      return o.fail("c(" + a.str() + ") = " + c.str() + " outside [" + br.lo.str() + ", " + br.hi.str() + "]");
  }
  o.detail = "each bracket has width <= 1/1000 and contains c(a)";
}

void stability(Outcome& o) {
  for (std::int64_t k : {21, 22, 25, 27}) {
    auto r = stability_chain_check(k, 5000);
    if (r.verdict != ChainVerdict::Holds || r.certified_up_to != 5000)
      return o.fail("k=" + std::to_string(k) + ": " + to_string(r.verdict) + " step " + std::to_string(r.step) +
                    " index " + std::to_string(r.index));
  }
  for (std::int64_t k : {2, 3}) {
    auto r = stability_chain_check(k, 5000);
    if (r.verdict != ChainVerdict::FailsAt) return o.fail("k=" + std::to_string(k) + ": " + to_string(r.verdict));
  }
  o.detail = "Holds to index 5000 for 21, 22, 25, 27; FailsAt for 2, 3";
}

void properties(Outcome& o) {
  std::mt19937_64 rng(20240601);
  const int n = 500;
  auto draw = [&](long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };

  for (int i = 0; i < n; ++i) {
    std::vector<std::int64_t> m(static_cast<std::size_t>(draw(0, 12)));
    for (auto& x : m) x = draw(-5, 15);
    ClassVector v(draw(-10, 30), m), w = cremona_move(v);
    if (v.linear_defect() != w.linear_defect() || v.quadratic_defect() != w.quadratic_defect())
      return o.fail("Cremona defect changed for " + v.str());
  }

  for (int i = 0; i < n; ++i) {
    long q = draw(1, 60);
    Rat a(draw(q, 100 * q), q);
    auto flat = weight_expansion(a).flat();
    Rat s = 0, s2 = 0;
    for (const auto& x : flat) s += x, s2 += x * x;
    if (s2 != a || s != a + Rat(1) - Rat(1) / Rat(a.den())) return o.fail("weight sums for " + a.str());
  }

  for (int i = 0; i < n; ++i) {
    Rat a(draw(1, 30), draw(1, 7)), b(draw(1, 30), draw(1, 7)), lambda(draw(1, 20), draw(1, 11));
    auto ab = exact_values(ech_capacities(a, b, 100));
    if (ab != exact_values(ech_capacities(b, a, 100))) return o.fail("N_k symmetry for " + a.str() + "," + b.str());
    auto sc = exact_values(ech_capacities(a * lambda, b * lambda, 100));
    for (std::size_t k = 0; k < ab.size(); ++k)
      if (sc[k] != ab[k] * lambda) return o.fail("N_k scaling for " + a.str() + "," + b.str());
  }

  for (int i = 0; i < n; ++i) {
    Rat a(draw(1, 40), draw(1, 9)), b(draw(1, 40), draw(1, 9));
    std::size_t K = i % 50 == 0 ? 10000 : static_cast<std::size_t>(draw(1, 3000));
    if (exact_values(ech_capacities(a, b, K)) != ech_brute_force(a, b, K))
      return o.fail("frontier differs from brute force for " + a.str() + "," + b.str());
  }

  for (int i = 0; i < n; ++i) {
    std::vector<std::int64_t> m(static_cast<std::size_t>(draw(1, 6)));
    for (auto& x : m) x = draw(0, 6);
    ClassVector e(draw(1, 9), m);
    std::vector<Rat> a(static_cast<std::size_t>(draw(1, 6)));
    for (auto& x : a) x = Rat(draw(1, 16), draw(1, 8));
    std::sort(a.begin(), a.end(), std::greater<>());
    std::vector<std::int64_t> perm = m;
    perm.resize(std::max(perm.size(), a.size()), 0);
    std::sort(perm.begin(), perm.end());
    Rat best = -1;
    do {
      Rat s = 0;
      for (std::size_t j = 0; j < a.size(); ++j) s += Rat(perm[j]) * a[j];
      best = std::max(best, s / Rat(e.d()));
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (constraint_value(e, a) != best) return o.fail("sorted pairing not maximal for " + e.str());
  }
  o.detail = "5 suites x 500 cases";
}

}  // namespace

int main() {
  criterion(1, "table2 capacities and packing numbers", 10, table_reproduction);
  criterion(2, "(DE) census d <= 7, at most 8 parts", 1, de_census);
  criterion(3, "Fibonacci staircase on [1, 27/4], q <= 8", 300, fibonacci_staircase);
  criterion(4, "transition vertices c(7), c(8)", 60, transition_vertices);
  criterion(5, "volume regime a in {9, 10, 23/2, 12}", 60, volume_regime);
  criterion(6, "ECH ball capacity brackets c(a)", 120, ech_cross_validation);
  criterion(7, "packing-stability chain", 300, stability);
  criterion(8, "property suites", 300, properties);
  std::cout << (failures ? "FAILED " + std::to_string(failures) + " of 8" : std::string("ALL 8 PASSED")) << std::endl;
  return failures ? 1 : 0;
}
