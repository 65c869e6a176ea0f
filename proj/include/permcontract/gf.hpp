#pragma once

// Exact arithmetic in GF(p^m), q = p^m <= 2^20.
//
// Elements are identified by their canonical index: the coefficient vector of
// the polynomial representative read as a base-p number (constant term is the
// least significant digit). Index 0 is zero and index 1 is one.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "permcontract/error.hpp"

namespace permcontract::gf {

inline constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 20;

struct Elem {
  std::uint32_t index = 0;

  constexpr auto operator<=>(const Elem&) const = default;
};

// ---------------------------------------------------------------------------
// Integer number theory

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

/// Distinct prime factors in ascending order.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// (p, m) with q = p^m, or nullopt if q is not a prime power.
inline std::optional<std::pair<std::uint64_t, unsigned>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  auto f = prime_factors(q);
  if (f.size() != 1) return std::nullopt;
  unsigned m = 0;
  for (std::uint64_t t = q; t > 1; t /= f[0]) ++m;
  return std::make_pair(f[0], m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t mod) {
  unsigned __int128 r = 1 % mod, b = base % mod;
  while (e) {
    if (e & 1) r = r * b % mod;
    b = b * b % mod;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

/// Legendre symbol by Euler's criterion r^((p-1)/2) mod p.
inline int legendre(std::int64_t r, std::uint64_t p) {
  if (p < 3 || !is_prime(p)) fail(ErrorKind::EvenOrNonPrimeP, "legendre needs an odd prime, got " + std::to_string(p));
  auto sp = static_cast<std::int64_t>(p);
  std::int64_t red = ((r % sp) + sp) % sp;
  if (red == 0) return 0;
  std::uint64_t e = pow_mod(static_cast<std::uint64_t>(red), (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Polynomials over GF(p), coefficients low-to-high

namespace poly {

using Coeffs = std::vector<std::uint32_t>;

inline void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

/// Remainder of a modulo monic b.
inline Coeffs rem_monic(Coeffs a, const Coeffs& b, std::uint64_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    std::uint64_t lead = a.back();
    std::size_t shift = a.size() - 1 - db;
    for (std::size_t k = 0; k <= db; ++k) {
      std::uint64_t sub = lead * b[k] % p;
      a[shift + k] = static_cast<std::uint32_t>((a[shift + k] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

/// Irreducibility of a monic polynomial: no roots when deg <= 3, otherwise no
/// monic factor of degree <= deg/2 (exhaustive trial division).
inline bool is_irreducible(const Coeffs& f, std::uint64_t p) {
  const std::size_t m = f.size() - 1;
  if (m == 0 || f.back() != 1) return false;
  if (m == 1) return true;
  if (f[0] == 0) return false;
  if (m <= 3) {
    for (std::uint64_t x = 0; x < p; ++x) {
      std::uint64_t v = 0;
      for (std::size_t k = m + 1; k-- > 0;) v = (v * x + f[k]) % p;
      if (v == 0) return false;
    }
    return true;
  }
  for (std::size_t d = 1; d <= m / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t k = 0; k < d; ++k) count *= p;
    Coeffs g(d + 1, 0);
    g[d] = 1;
    for (std::uint64_t c = 0; c < count; ++c) {
      std::uint64_t t = c;
      for (std::size_t k = 0; k < d; ++k) {
        g[k] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      if (rem_monic(f, g, p).empty()) return false;
    }
  }
  return true;
}

/// Smallest monic irreducible of degree m, ordered lexicographically on
/// (c0, c1, ..., c_{m-1}) with the constant term most significant.
inline Coeffs smallest_irreducible(std::uint64_t p, unsigned m) {
  if (m == 1) return {0, 1};
  Coeffs f(m + 1, 0);
  f[m] = 1;
  for (;;) {
    if (is_irreducible(f, p)) return f;
    // increment with c_{m-1} the fastest-moving digit
    std::size_t k = m;
    while (k-- > 0) {
      if (++f[k] < p) break;
      f[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  fail(ErrorKind::NotIrreducible, "no irreducible found");
}

}  // namespace poly

// ---------------------------------------------------------------------------

struct FieldSpec {
  std::uint64_t p = 0;
  unsigned m = 0;
  poly::Coeffs modulus;

  std::uint64_t q() const {
    std::uint64_t q = 1;
    for (unsigned k = 0; k < m; ++k) q *= p;
    return q;
  }

  /// `p=<p> m=<m> modulus=<c0,c1,...,cm>`
  std::string to_string() const {
    std::ostringstream os;
    os << "p=" << p << " m=" << m << " modulus=";
    for (std::size_t k = 0; k < modulus.size(); ++k) os << (k ? "," : "") << modulus[k];
    return os.str();
  }

  static FieldSpec parse(std::string_view text) {
    FieldSpec s;
    std::istringstream is{std::string(text)};
    std::string tok;
    bool gp = false, gm = false, gmod = false;
    while (is >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) fail(ErrorKind::ParseError, "bad field token '" + tok + "'");
      auto key = tok.substr(0, eq), val = tok.substr(eq + 1);
      try {
        if (key == "p") {
          s.p = std::stoull(val);
          gp = true;
        } else if (key == "m") {
          s.m = static_cast<unsigned>(std::stoul(val));
          gm = true;
        } else if (key == "modulus") {
          std::istringstream cs(val);
          std::string c;
          while (std::getline(cs, c, ',')) s.modulus.push_back(static_cast<std::uint32_t>(std::stoul(c)));
          gmod = true;
        } else {
          fail(ErrorKind::ParseError, "unknown field key '" + key + "'");
        }
      } catch (const std::logic_error&) {
        fail(ErrorKind::ParseError, "bad number in '" + tok + "'");
      }
    }
    if (!gp || !gm || !gmod) fail(ErrorKind::ParseError, "field description needs p, m and modulus");
    return s;
  }

  bool operator==(const FieldSpec&) const = default;
};

class Field {
 public:
  /// GF(p^m) with the lexicographically smallest monic irreducible modulus.
  static Field create(std::uint64_t p, unsigned m) {
    if (!is_prime(p)) fail(ErrorKind::NonPrimeP, std::to_string(p) + " is not prime");
    check_size(p, m);
    FieldSpec spec{p, m, poly::smallest_irreducible(p, m)};
    return Field(std::move(spec));
  }

  /// Field for an explicit description; the modulus is re-verified.
  static Field from_spec(const FieldSpec& spec) {
    if (!is_prime(spec.p)) fail(ErrorKind::NonPrimeP, std::to_string(spec.p) + " is not prime");
    check_size(spec.p, spec.m);
    if (spec.modulus.size() != spec.m + 1) fail(ErrorKind::NotIrreducible, "modulus degree differs from m");
    for (auto c : spec.modulus)
      if (c >= spec.p) fail(ErrorKind::NotIrreducible, "modulus coefficient out of range");
    if (spec.m > 1 && !poly::is_irreducible(spec.modulus, spec.p))
      fail(ErrorKind::NotIrreducible, spec.to_string());
    if (spec.m == 1 && spec.modulus != poly::Coeffs{0, 1})
      fail(ErrorKind::NotIrreducible, "prime fields use modulus 0,1");
    return Field(spec);
  }

  /// Accepts a prime power q and factors it.
  static Field of_order(std::uint64_t q) {
    auto pm = prime_power(q);
    if (!pm) fail(ErrorKind::NonPrimeP, std::to_string(q) + " is not a prime power");
    return create(pm->first, pm->second);
  }

  std::uint64_t p() const { return t_->spec.p; }
  unsigned m() const { return t_->spec.m; }
  std::uint32_t q() const { return t_->q; }
  const FieldSpec& spec() const { return t_->spec; }
  bool operator==(const Field& o) const { return t_ == o.t_ || t_->spec == o.t_->spec; }

  Elem zero() const { return Elem{0}; }
  Elem one() const { return Elem{1}; }
  Elem elem(std::uint64_t index) const {
    if (index >= q()) fail(ErrorKind::ForeignElement, "index " + std::to_string(index) + " >= q");
    return Elem{static_cast<std::uint32_t>(index)};
  }
  /// Image of an integer in the prime subfield.
  Elem from_int(std::int64_t v) const {
    auto sp = static_cast<std::int64_t>(p());
    return Elem{static_cast<std::uint32_t>(((v % sp) + sp) % sp)};
  }

  Elem add(Elem x, Elem y) const {
    if (t_->p == 2) return Elem{x.index ^ y.index};
    if (!t_->add.empty()) return Elem{t_->add[std::size_t{x.index} * t_->q + y.index]};
    return Elem{digitwise(x.index, y.index)};
  }
  Elem neg(Elem x) const { return Elem{t_->neg[x.index]}; }
  Elem sub(Elem x, Elem y) const { return add(x, neg(y)); }
  Elem mul(Elem x, Elem y) const {
    if (x.index == 0 || y.index == 0) return Elem{0};
    return Elem{t_->exp[t_->log[x.index] + t_->log[y.index]]};
  }
  Elem inv(Elem x) const {
    if (x.index == 0) fail(ErrorKind::DivideByZero, "inverse of zero");
    std::uint32_t l = t_->log[x.index];
    return Elem{t_->exp[l == 0 ? 0 : t_->q - 1 - l]};
  }
  Elem div(Elem x, Elem y) const { return mul(x, inv(y)); }
  Elem pow(Elem x, std::int64_t e) const {
    if (x.index == 0) {
      if (e < 0) fail(ErrorKind::DivideByZero, "negative power of zero");
      return e == 0 ? one() : zero();
    }
    auto ord = static_cast<std::int64_t>(t_->q - 1);
    std::int64_t l = (static_cast<std::int64_t>(t_->log[x.index]) * (e % ord)) % ord;
    if (l < 0) l += ord;
    return Elem{t_->exp[static_cast<std::size_t>(l)]};
  }

  /// Multiplicative order of a nonzero element.
  std::uint64_t order(Elem x) const {
    if (x.index == 0) fail(ErrorKind::DivideByZero, "order of zero");
    std::uint64_t n = t_->q - 1;
    return n / std::gcd<std::uint64_t>(n, t_->log[x.index]);
  }
  bool is_generator(Elem x) const { return x.index != 0 && order(x) == t_->q - 1; }

  /// Discrete log with respect to the internal primitive element.
  std::uint32_t log(Elem x) const {
    if (x.index == 0) fail(ErrorKind::DivideByZero, "log of zero");
    return t_->log[x.index];
  }

  /// Primitive element used for the log tables (smallest-index generator).
  Elem primitive() const { return Elem{t_->q == 2 ? 1u : t_->exp[1]}; }

 private:
  struct Tables {
    FieldSpec spec;
    std::uint64_t p = 0;
    std::uint32_t q = 0;
    std::vector<std::uint32_t> exp;  // length 2(q-1), so exp[la + lb] needs no reduction
    std::vector<std::uint32_t> log;
    std::vector<std::uint32_t> neg;
    std::vector<std::uint32_t> add;  // full table for small odd-characteristic fields
  };

  static void check_size(std::uint64_t p, unsigned m) {
    if (m < 1) fail(ErrorKind::DegreeTooLarge, "degree must be >= 1");
    std::uint64_t q = 1;
    for (unsigned k = 0; k < m; ++k) {
      q *= p;
      if (q > kMaxOrder) fail(ErrorKind::DegreeTooLarge, "p^m exceeds 2^20");
    }
  }

  explicit Field(FieldSpec spec) {
    auto tables = std::make_shared<Tables>();
    t_ = tables;
    auto& t = *tables;
    t.spec = std::move(spec);
    t.p = t.spec.p;
    t.q = static_cast<std::uint32_t>(t.spec.q());
    const std::uint32_t q = t.q;

    t.neg.resize(q);
    for (std::uint32_t x = 0; x < q; ++x) t.neg[x] = negate_digits(x);
    if (t.p != 2 && q <= 1024) {
      t.add.resize(std::size_t{q} * q);
      for (std::uint32_t x = 0; x < q; ++x)
        for (std::uint32_t y = 0; y < q; ++y) t.add[std::size_t{x} * q + y] = digitwise(x, y);
    }

    // Primitive element of smallest index, found with schoolbook multiplication.
    t.log.assign(q, 0);
    t.exp.assign(2 * std::size_t{q - 1} + 1, 1);
    if (q == 2) return;
    auto factors = prime_factors(q - 1);
    std::uint32_t g = 0;
    for (std::uint32_t cand = 2; cand < q && g == 0; ++cand) {
      bool ok = true;
      for (auto l : factors)
        if (slow_pow(cand, (q - 1) / l) == 1) {
          ok = false;
          break;
        }
      if (ok) g = cand;
    }
    std::uint32_t cur = 1;
    for (std::uint32_t k = 0; k < q - 1; ++k) {
      t.exp[k] = cur;
      t.log[cur] = k;
      cur = slow_mul(cur, g);
    }
    for (std::uint32_t k = q - 1; k < t.exp.size(); ++k) t.exp[k] = t.exp[k - (q - 1)];
  }

  std::uint32_t negate_digits(std::uint32_t x) const {
    const std::uint64_t p = t_->p;
    std::uint32_t out = 0, scale = 1;
    for (unsigned k = 0; k < t_->spec.m; ++k) {
      std::uint32_t d = static_cast<std::uint32_t>(x % p);
      x /= static_cast<std::uint32_t>(p);
      out += static_cast<std::uint32_t>((p - d) % p) * scale;
      scale *= static_cast<std::uint32_t>(p);
    }
    return out;
  }

  std::uint32_t digitwise(std::uint32_t x, std::uint32_t y) const {
    const auto p = static_cast<std::uint32_t>(t_->p);
    std::uint32_t out = 0, scale = 1;
    for (unsigned k = 0; k < t_->spec.m; ++k) {
      out += ((x % p + y % p) % p) * scale;
      x /= p;
      y /= p;
      scale *= p;
    }
    return out;
  }

  poly::Coeffs to_coeffs(std::uint32_t x) const {
    poly::Coeffs c(t_->spec.m, 0);
    for (unsigned k = 0; k < t_->spec.m; ++k) {
      c[k] = static_cast<std::uint32_t>(x % t_->p);
      x /= static_cast<std::uint32_t>(t_->p);
    }
    return c;
  }

  std::uint32_t from_coeffs(const poly::Coeffs& c) const {
    std::uint32_t out = 0;
    for (std::size_t k = c.size(); k-- > 0;) out = out * static_cast<std::uint32_t>(t_->p) + c[k];
    return out;
  }

  std::uint32_t slow_mul(std::uint32_t x, std::uint32_t y) const {
    const std::uint64_t p = t_->p;
    auto a = to_coeffs(x), b = to_coeffs(y);
    poly::Coeffs prod(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{a[i]} * b[j]) % p);
    auto r = poly::rem_monic(prod, t_->spec.modulus, p);
    r.resize(t_->spec.m, 0);
    return from_coeffs(r);
  }

  std::uint32_t slow_pow(std::uint32_t x, std::uint64_t e) const {
    std::uint32_t r = 1;
    while (e) {
      if (e & 1) r = slow_mul(r, x);
      x = slow_mul(x, x);
      e >>= 1;
    }
    return r;
  }

  std::shared_ptr<const Tables> t_;
};

// ---------------------------------------------------------------------------
// Procedures used by the contraction-graph theory

/// Generator of GF(q)* with the smallest canonical index outside `avoid`.
inline Elem find_generator(const Field& f, std::span<const Elem> avoid = {}) {
  for (std::uint32_t x = 1; x < f.q(); ++x) {
    Elem e{x};
    if (std::find(avoid.begin(), avoid.end(), e) != avoid.end()) continue;
    if (f.is_generator(e)) return e;
  }
  fail(ErrorKind::NoGeneratorOutsideAvoid, "every generator of GF(" + std::to_string(f.q()) + ")* is excluded");
}

/// Absolute trace to GF(2): sum of x^(2^k), k = 0..m-1.
inline Elem trace_gf2(const Field& f, Elem x) {
  if (f.p() != 2) fail(ErrorKind::OddCharacteristic, "trace_gf2 needs characteristic 2");
  Elem acc = f.zero(), term = x;
  for (unsigned k = 0; k < f.m(); ++k) {
    acc = f.add(acc, term);
    term = f.mul(term, term);
  }
  return acc;
}

/// s with s^2 = -3; of the pair +-s the one with smaller index.
inline Elem sqrt_minus3(const Field& f) {
  if (f.p() == 2) fail(ErrorKind::EvenCharacteristic, "sqrt_minus3 needs odd characteristic");
  if (f.q() % 3 != 1) fail(ErrorKind::NotASquare, "-3 is not a square in GF(" + std::to_string(f.q()) + ")");
  Elem target = f.from_int(-3);
  std::uint32_t l = f.log(target);
  if (l % 2 != 0) fail(ErrorKind::NotASquare, "-3 has odd discrete log");
  Elem s = f.pow(f.primitive(), l / 2);
  if (f.mul(s, s) != target) fail(ErrorKind::NotASquare, "internal: square root check failed");
  Elem t = f.neg(s);
  return std::min(s, t);
}

/// Both roots (t, 1/t) of t^2 + t + 1 = 0, smaller index first.
inline std::pair<Elem, Elem> solve_unit_quadratic(const Field& f) {
  if (f.q() % 3 != 1) fail(ErrorKind::NoRoots, "t^2+t+1 has no roots in GF(" + std::to_string(f.q()) + ")");
  std::vector<Elem> roots;
  if (f.p() == 2) {
    if (trace_gf2(f, f.one()) != f.zero()) fail(ErrorKind::NoRoots, "Tr(1) != 0");
    for (std::uint32_t x = 0; x < f.q(); ++x) {
      Elem t{x};
      if (f.add(f.add(f.mul(t, t), t), f.one()) == f.zero()) roots.push_back(t);
    }
  } else {
    Elem s = sqrt_minus3(f);
    Elem half = f.inv(f.from_int(2));
    Elem m1 = f.neg(f.one());
    roots = {f.mul(f.add(m1, s), half), f.mul(f.sub(m1, s), half)};
  }
  if (roots.size() != 2 || roots[0] == roots[1]) fail(ErrorKind::NoRoots, "expected two distinct roots");
  std::sort(roots.begin(), roots.end());
  for (Elem t : roots) {
    if (f.pow(t, 3) != f.one() || t == f.one()) fail(ErrorKind::NoRoots, "root check failed");
  }
  if (f.inv(roots[0]) != roots[1]) fail(ErrorKind::NoRoots, "roots are not inverse");
  return {roots[0], roots[1]};
}

/// The two roots of x^2 - (i+j)x + ij + (i-j)^2 = 0 via
/// x = ((i+j) +- sqrt(-3)(i-j)) / 2, smaller index first.
inline std::pair<Elem, Elem> solve_agreement_quadratic(const Field& f, Elem i, Elem j) {
  if (f.p() == 2) fail(ErrorKind::EvenCharacteristic, "closed form needs odd characteristic");
  if (i == j) fail(ErrorKind::EqualInputs, "i == j");
  Elem s = sqrt_minus3(f);
  Elem half = f.inv(f.from_int(2));
  Elem sum = f.add(i, j), diff = f.mul(s, f.sub(i, j));
  Elem x1 = f.mul(f.add(sum, diff), half);
  Elem x2 = f.mul(f.sub(sum, diff), half);
  Elem b = f.neg(sum);
  Elem c = f.add(f.mul(i, j), f.mul(f.sub(i, j), f.sub(i, j)));
  for (Elem x : {x1, x2})
    if (f.add(f.add(f.mul(x, x), f.mul(b, x)), c) != f.zero()) fail(ErrorKind::NoRoots, "substitution check failed");
  if (x1 > x2) std::swap(x1, x2);
  return {x1, x2};
}

}  // namespace permcontract::gf
