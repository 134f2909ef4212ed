#pragma once

// Exact rationals and refinable enclosures of square and cube roots.
//
// Rat is a canonical fraction over arbitrary-precision integers. RootBound
// is a rational linear combination of radicals sqrt(q) / cbrt(q) together
// with a rational interval [lo, hi] that encloses its value. Intervals are
// refined by rational bisection only, so every decision taken from them is
// exact.

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symcap {

using BigInt = mpz_class;

class Rat {
 public:
  Rat() : q_(0) {}
  Rat(int v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  Rat(long long v) : q_(BigInt(std::to_string(v))) {}  // NOLINT
  Rat(const BigInt& v) : q_(v) {}  // NOLINT(google-explicit-constructor)

  Rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  // Accepts "p/q", "p" and terminating decimals such as "-6.75".
  static Rat parse(std::string_view text) {
    std::string s(text);
    auto bad = [&] { return std::invalid_argument("not a rational number: '" + s + "'"); };
    if (s.empty()) throw bad();
    auto is_int = [](std::string_view t) {
      if (!t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
      return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    auto to_int = [](std::string t) {
      if (!t.empty() && t[0] == '+') t.erase(0, 1);
      return BigInt(t, 10);
    };
    if (auto slash = s.find('/'); slash != std::string::npos) {
      std::string p = s.substr(0, slash), q = s.substr(slash + 1);
      if (!is_int(p) || !is_int(q)) throw bad();
      return Rat(to_int(p), to_int(q));
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
      std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
      bool neg = !head.empty() && head[0] == '-';
      std::string digits = head;
      if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) digits.erase(0, 1);
      if (digits.empty()) digits = "0";
      if (tail.empty() || !is_int(digits) || !std::all_of(tail.begin(), tail.end(), [](char c) {
            return c >= '0' && c <= '9';
          }))
        throw bad();
      BigInt den = 1;
      for (std::size_t i = 0; i < tail.size(); ++i) den *= 10;
      BigInt num = BigInt(digits + tail, 10);
      return Rat(neg ? BigInt(-num) : num, den);
    }
    if (!is_int(s)) throw bad();
    return Rat(to_int(s));
  }

  BigInt num() const { return q_.get_num(); }
  BigInt den() const { return q_.get_den(); }
  const mpq_class& gmp() const { return q_; }

  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  BigInt floor() const {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
  }
  BigInt ceil() const {
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return r;
  }

  double to_double() const { return q_.get_d(); }

  std::string str() const {
    if (is_integer()) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  Rat operator-() const { return from(-q_); }
  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.q_ == 0) throw std::domain_error("division by zero");
    q_ /= o.q_;
    return *this;
  }
  friend Rat operator+(Rat x, const Rat& y) { return x += y; }
  friend Rat operator-(Rat x, const Rat& y) { return x -= y; }
  friend Rat operator*(Rat x, const Rat& y) { return x *= y; }
  friend Rat operator/(Rat x, const Rat& y) { return x /= y; }

  friend bool operator==(const Rat& x, const Rat& y) { return x.q_ == y.q_; }
  friend std::strong_ordering operator<=>(const Rat& x, const Rat& y) {
    int c = cmp(x.q_, y.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  static Rat from(mpq_class q) {
    Rat r;
    r.q_ = std::move(q);
    return r;
  }
  mpq_class q_;
};

inline Rat rat(const BigInt& p, const BigInt& q) { return Rat(p, q); }
inline Rat rat(long p, long q) { return Rat(BigInt(p), BigInt(q)); }

inline Rat abs(const Rat& x) { return x.sign() < 0 ? -x : x; }

inline Rat pow(const Rat& x, unsigned e) {
  Rat r = 1;
  for (unsigned i = 0; i < e; ++i) r *= x;
  return r;
}

inline BigInt isqrt(const BigInt& n) {
  if (n < 0) throw std::domain_error("isqrt of negative integer");
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline BigInt iroot(const BigInt& n, unsigned long k) {
  if (n < 0) throw std::domain_error("iroot of negative integer");
  BigInt r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

// floor(sqrt(x)) for x >= 0: n^2 <= x iff n^2 <= floor(x).
inline BigInt floor_sqrt(const Rat& x) { return isqrt(x.floor()); }

// Dyadic bounds lo <= sqrt(x) <= hi with hi - lo <= 2^-bits.
inline std::pair<Rat, Rat> sqrt_bounds(const Rat& x, unsigned bits) {
  if (x.sign() < 0) throw std::domain_error("sqrt of negative rational");
  BigInt scale = BigInt(1) << bits;
  BigInt r = floor_sqrt(x * Rat(scale * scale));
  Rat lo(r, scale);
  Rat hi = (lo * lo == x) ? lo : Rat(r + 1, scale);
  return {lo, hi};
}

// Exact k-th root of a non-negative rational if it exists.
inline std::optional<Rat> exact_root(const Rat& x, unsigned k) {
  if (x.sign() < 0) return std::nullopt;
  BigInt p = x.num(), q = x.den();
  BigInt rp = iroot(p, k), rq = iroot(q, k);
  BigInt pp = 1, qq = 1;
  for (unsigned i = 0; i < k; ++i) { pp *= rp; qq *= rq; }
  if (pp == p && qq == q) return Rat(rp, rq);
  return std::nullopt;
}

enum class RootKind { Sqrt, Cbrt };

inline const char* to_string(RootKind k) { return k == RootKind::Sqrt ? "sqrt" : "cbrt"; }

// A radical with positive non-perfect radicand and its current enclosure.
struct Radical {
  RootKind kind;
  Rat radicand;
  Rat lo, hi;

  unsigned degree() const { return kind == RootKind::Sqrt ? 2 : 3; }

  Radical bisected() const {
    Rat mid = (lo + hi) / Rat(2);
    Radical r = *this;
    if (pow(mid, degree()) <= radicand)
      r.lo = mid;
    else
      r.hi = mid;
    return r;
  }

  bool same_expr(const Radical& o) const { return kind == o.kind && radicand == o.radicand; }
  bool expr_less(const Radical& o) const {
    if (kind != o.kind) return kind < o.kind;
    return radicand < o.radicand;
  }
};

enum class Ordering { Less, Equal, Greater, Undecided };

inline const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::Less: return "Less";
    case Ordering::Equal: return "Equal";
    case Ordering::Greater: return "Greater";
    case Ordering::Undecided: return "Undecided";
  }
  return "?";
}

inline constexpr int kDefaultRefineBudget = 256;

class RootBound {
 public:
  struct Term {
    Rat coeff;
    Radical radical;
  };

  RootBound() : RootBound(Rat(0)) {}
  RootBound(Rat value) : constant_(std::move(value)) { recompute(); }  // NOLINT
  RootBound(int value) : RootBound(Rat(value)) {}  // NOLINT

  static RootBound sqrt(const Rat& q) { return radical(RootKind::Sqrt, q); }
  static RootBound cbrt(const Rat& q) { return radical(RootKind::Cbrt, q); }

  const Rat& lo() const { return lo_; }
  const Rat& hi() const { return hi_; }
  Rat width() const { return hi_ - lo_; }
  bool is_exact() const { return terms_.empty(); }
  std::optional<Rat> exact() const {
    if (is_exact()) return constant_;
    return std::nullopt;
  }
  const Rat& constant() const { return constant_; }
  const std::vector<Term>& terms() const { return terms_; }

  // One bisection step on every radical; the enclosure width at least halves.
  RootBound refine() const {
    RootBound r = *this;
    for (auto& t : r.terms_) t.radical = t.radical.bisected();
    r.recompute();
    return r;
  }

  RootBound refined(int steps) const {
    RootBound r = *this;
    for (int i = 0; i < steps && !r.is_exact(); ++i) r = r.refine();
    return r;
  }

  std::string expr() const {
    if (terms_.empty()) return constant_.str();
    std::string out;
    if (constant_.sign() != 0) out = constant_.str();
    for (const auto& t : terms_) {
      std::string atom = std::string(to_string(t.radical.kind)) + "(" + t.radical.radicand.str() + ")";
      Rat c = t.coeff;
      bool neg = c.sign() < 0;
      if (neg) c = -c;
      if (!out.empty())
        out += neg ? " - " : " + ";
      else if (neg)
        out += "-";
      out += (c == Rat(1)) ? atom : c.str() + "*" + atom;
    }
    return out;
  }

  RootBound operator-() const { return *this * Rat(-1); }

  friend RootBound operator*(RootBound x, const Rat& s) {
    if (s.sign() == 0) return RootBound(Rat(0));
    x.constant_ *= s;
    for (auto& t : x.terms_) t.coeff *= s;
    x.recompute();
    return x;
  }
  friend RootBound operator*(const Rat& s, RootBound x) { return std::move(x) * s; }

  friend RootBound operator+(const RootBound& x, const RootBound& y) { return combine(x, y, Rat(1)); }
  friend RootBound operator-(const RootBound& x, const RootBound& y) { return combine(x, y, Rat(-1)); }

  friend std::ostream& operator<<(std::ostream& os, const RootBound& r) {
    return os << r.expr() << " in [" << r.lo_ << ", " << r.hi_ << "]";
  }

 private:
  static RootBound radical(RootKind kind, const Rat& q) {
    unsigned k = kind == RootKind::Sqrt ? 2 : 3;
    if (kind == RootKind::Sqrt && q.sign() < 0) throw std::domain_error("sqrt of negative rational");
    bool neg = q.sign() < 0;
    Rat mag = neg ? -q : q;
    if (auto r = exact_root(mag, k)) return RootBound(neg ? -*r : *r);
    // floor(root(p/q)) = floor(root(floor(p/q))) for integer-valued roots.
    BigInt f = iroot(mag.floor(), k);
    RootBound out;
    out.terms_.push_back({Rat(neg ? -1 : 1), Radical{kind, mag, Rat(f), Rat(f + 1)}});
    out.recompute();
    return out;
  }

  static RootBound combine(const RootBound& x, const RootBound& y, const Rat& ys) {
    RootBound out;
    out.constant_ = x.constant_ + ys * y.constant_;
    std::size_t i = 0, j = 0;
    auto push = [&](Term t) {
      if (t.coeff.sign() != 0) out.terms_.push_back(std::move(t));
    };
    while (i < x.terms_.size() || j < y.terms_.size()) {
      if (j == y.terms_.size() ||
          (i < x.terms_.size() && x.terms_[i].radical.expr_less(y.terms_[j].radical))) {
        push(x.terms_[i++]);
      } else if (i == x.terms_.size() || y.terms_[j].radical.expr_less(x.terms_[i].radical)) {
        Term t = y.terms_[j++];
        t.coeff *= ys;
        push(std::move(t));
      } else {
        // Same radical: both enclosures are valid, keep their intersection.
        Term t = x.terms_[i];
        const Radical& o = y.terms_[j].radical;
        t.coeff += ys * y.terms_[j].coeff;
        t.radical.lo = std::max(t.radical.lo, o.lo);
        t.radical.hi = std::min(t.radical.hi, o.hi);
        push(std::move(t));
        ++i;
        ++j;
      }
    }
    out.recompute();
    return out;
  }

  void recompute() {
    lo_ = constant_;
    hi_ = constant_;
    for (const auto& t : terms_) {
      if (t.coeff.sign() > 0) {
        lo_ += t.coeff * t.radical.lo;
        hi_ += t.coeff * t.radical.hi;
      } else {
        lo_ += t.coeff * t.radical.hi;
        hi_ += t.coeff * t.radical.lo;
      }
    }
  }

  Rat constant_;
  std::vector<Term> terms_;  // sorted by radical expression, nonzero coefficients
  Rat lo_, hi_;
};

// Less/Greater only once the enclosures separate. Equal only when the
// difference is syntactically zero (which covers equal rationals).
inline Ordering compare(const RootBound& x, const RootBound& y, int budget = kDefaultRefineBudget) {
  if (budget < 0) throw std::invalid_argument("negative refinement budget");
  RootBound diff = x - y;
  if (auto e = diff.exact()) {
    int s = e->sign();
    return s < 0 ? Ordering::Less : (s > 0 ? Ordering::Greater : Ordering::Equal);
  }
  for (int step = 0;; ++step) {
    if (diff.lo().sign() > 0) return Ordering::Greater;
    if (diff.hi().sign() < 0) return Ordering::Less;
    if (step == budget) return Ordering::Undecided;
    diff = diff.refine();
  }
}

inline Ordering compare(const Rat& x, const Rat& y) {
  auto c = x <=> y;
  return c < 0 ? Ordering::Less : (c > 0 ? Ordering::Greater : Ordering::Equal);
}

}  // namespace symcap
