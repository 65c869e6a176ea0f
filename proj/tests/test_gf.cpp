#include <gtest/gtest.h>

#include <numeric>
#include <set>
#include <vector>

#include "permcontract/gf.hpp"

using namespace permcontract;
using namespace permcontract::gf;

namespace {

// Schoolbook arithmetic on coefficient vectors, independent of the tables.
struct Oracle {
  std::uint64_t p;
  unsigned m;
  std::vector<std::uint32_t> mod;  // monic, low to high

  std::vector<std::uint64_t> digits(std::uint32_t x) const {
    std::vector<std::uint64_t> d(m);
    for (unsigned k = 0; k < m; ++k, x /= static_cast<std::uint32_t>(p)) d[k] = x % p;
    return d;
  }
  std::uint32_t index(const std::vector<std::uint64_t>& d) const {
    std::uint64_t x = 0;
    for (unsigned k = m; k-- > 0;) x = x * p + d[k] % p;
    return static_cast<std::uint32_t>(x);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    auto x = digits(a), y = digits(b);
    for (unsigned k = 0; k < m; ++k) x[k] = (x[k] + y[k]) % p;
    return index(x);
  }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    auto x = digits(a), y = digits(b);
    std::vector<std::uint64_t> prod(2 * m, 0);
    for (unsigned i = 0; i < m; ++i)
      for (unsigned j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
    for (unsigned k = 2 * m - 1; k >= m; --k) {
      std::uint64_t c = prod[k];
      if (!c) continue;
      for (unsigned t = 0; t <= m; ++t) prod[k - m + t] = (prod[k - m + t] + (p - c) * mod[t]) % p;
    }
    prod.resize(m);
    return index(prod);
  }
};

bool brute_irreducible(const std::vector<std::uint32_t>& f, std::uint64_t p) {
  // degree <= 3: irreducible iff no root
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t v = 0;
    for (std::size_t k = f.size(); k-- > 0;) v = (v * x + f[k]) % p;
    if (v == 0) return false;
  }
  return true;
}

std::set<std::uint64_t> squares_mod(std::uint64_t p) {
  std::set<std::uint64_t> s;
  for (std::uint64_t x = 1; x < p; ++x) s.insert(x * x % p);
  return s;
}

std::vector<std::uint64_t> primes_upto(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 2; k <= n; ++k) {
    bool pr = true;
    for (std::uint64_t d = 2; d * d <= k; ++d) pr = pr && k % d;
    if (pr) out.push_back(k);
  }
  return out;
}

}  // namespace

TEST(GfModulus, Gf16Golden) { EXPECT_EQ(Field::of_order(16).spec().to_string(), "p=2 m=4 modulus=1,0,0,1,1"); }

TEST(GfModulus, PrimeFieldIsLinear) { EXPECT_EQ(Field::of_order(7).spec().to_string(), "p=7 m=1 modulus=0,1"); }

TEST(GfModulus, SmallestByLeadingConstantTerm) {
  // first irreducible in the order c0 most significant, then c1, ...
  for (auto [p, m] : std::vector<std::pair<std::uint64_t, unsigned>>{{2, 2}, {2, 3}, {3, 2}, {5, 2}, {3, 3}, {7, 2}}) {
    std::vector<std::uint32_t> want;
    std::uint64_t total = 1;
    for (unsigned k = 0; k < m; ++k) total *= p;
    for (std::uint64_t code = 0; code < total; ++code) {
      std::vector<std::uint32_t> c(m + 1, 1);
      std::uint64_t x = code;
      for (unsigned k = m; k-- > 0;) {
        c[k] = static_cast<std::uint32_t>(x % p);
        x /= p;
      }
      if (brute_irreducible(c, p)) {
        want = c;
        break;
      }
    }
    EXPECT_EQ(Field::create(p, m).spec().modulus, want) << p << "^" << m;
  }
}

TEST(GfArithmetic, TablesMatchSchoolbook) {
  for (std::uint64_t q : {4, 8, 9, 16, 25, 27, 49, 7, 13}) {
    Field f = Field::of_order(q);
    Oracle o{f.p(), f.m(), f.spec().modulus};
    for (std::uint32_t a = 0; a < q; ++a)
      for (std::uint32_t b = 0; b < q; ++b) {
        ASSERT_EQ(f.add(Elem{a}, Elem{b}).index, o.add(a, b)) << q;
        ASSERT_EQ(f.mul(Elem{a}, Elem{b}).index, o.mul(a, b)) << q;
      }
  }
}

TEST(GfArithmetic, InverseAndDivision) {
  for (std::uint64_t q : {2, 3, 16, 25, 64, 343, 1024}) {
    Field f = Field::of_order(q);
    for (std::uint32_t x = 1; x < q; ++x) {
      EXPECT_EQ(f.mul(Elem{x}, f.inv(Elem{x})), f.one());
      EXPECT_EQ(f.add(Elem{x}, f.neg(Elem{x})), f.zero());
    }
    EXPECT_THROW(f.inv(f.zero()), Error);
    try {
      f.div(f.one(), f.zero());
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::DivideByZero);
    }
  }
}

TEST(GfArithmetic, Distributive) {
  Field f = Field::of_order(81);
  for (std::uint32_t a = 0; a < 81; a += 7)
    for (std::uint32_t b = 0; b < 81; b += 3)
      for (std::uint32_t c = 0; c < 81; c += 5)
        EXPECT_EQ(f.mul(Elem{a}, f.add(Elem{b}, Elem{c})), f.add(f.mul(Elem{a}, Elem{b}), f.mul(Elem{a}, Elem{c})));
}

TEST(GfArithmetic, LargestOrder) {
  Field f = Field::of_order(std::uint64_t{1} << 20);
  Elem x = f.elem(123457);
  EXPECT_EQ(f.mul(x, f.inv(x)), f.one());
  EXPECT_EQ(f.pow(x, (1 << 20) - 1), f.one());
}

TEST(GfErrors, Construction) {
  auto kind = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Usage;
  };
  EXPECT_EQ(kind([] { Field::create(4, 1); }), ErrorKind::NonPrimeP);
  EXPECT_EQ(kind([] { Field::create(2, 21); }), ErrorKind::DegreeTooLarge);
  EXPECT_EQ(kind([] { Field::of_order(12); }), ErrorKind::NonPrimeP);
}

TEST(GfSpec, RoundTrip) {
  for (std::uint64_t q : {2, 9, 16, 125}) {
    Field f = Field::of_order(q);
    auto s = FieldSpec::parse(f.spec().to_string());
    EXPECT_EQ(s, f.spec());
    EXPECT_EQ(Field::from_spec(s).q(), q);
  }
  EXPECT_THROW(FieldSpec::parse("p=2 m=2"), Error);
}

TEST(GfGenerator, SmallestAndAvoid) {
  Field f = Field::of_order(7);
  EXPECT_EQ(find_generator(f).index, 3u);
  std::vector<Elem> a1{Elem{3}};
  EXPECT_EQ(find_generator(f, a1).index, 5u);
  std::vector<Elem> a2{Elem{3}, Elem{5}};
  try {
    find_generator(f, a2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoGeneratorOutsideAvoid);
  }
}

TEST(GfGenerator, OrderCountsMatchTotient) {
  for (std::uint64_t q : {7, 16, 25, 27}) {
    Field f = Field::of_order(q);
    std::uint64_t gens = 0, phi = 0;
    for (std::uint32_t x = 1; x < q; ++x) gens += f.is_generator(Elem{x});
    for (std::uint64_t k = 1; k < q; ++k) phi += std::gcd(k, q - 1) == 1;
    EXPECT_EQ(gens, phi) << q;
  }
}

TEST(GfLegendre, MatchesSquareSets) {
  for (auto p : primes_upto(97)) {
    if (p == 2) continue;
    auto sq = squares_mod(p);
    for (std::int64_t r = -5; r < static_cast<std::int64_t>(2 * p); ++r) {
      auto red = static_cast<std::uint64_t>(((r % static_cast<std::int64_t>(p)) + p) % p);
      int want = red == 0 ? 0 : (sq.count(red) ? 1 : -1);
      ASSERT_EQ(legendre(r, p), want) << r << " mod " << p;
    }
  }
  EXPECT_THROW(legendre(3, 2), Error);
  EXPECT_THROW(legendre(3, 9), Error);
}

TEST(GfLegendre, Reciprocity) {
  auto ps = primes_upto(97);
  for (auto p : ps)
    for (auto q : ps) {
      if (p == 2 || q == 2 || p == q) continue;
      int sign = ((p - 1) / 2 * ((q - 1) / 2)) % 2 ? -1 : 1;
      EXPECT_EQ(legendre(static_cast<std::int64_t>(p), q) * legendre(static_cast<std::int64_t>(q), p), sign) << p << "," << q;
    }
}

TEST(GfLegendre, MinusThreeDichotomy) {
  for (auto p : primes_upto(500)) {
    if (p <= 3) continue;
    bool is_sq = squares_mod(p).count(p - 3) > 0;
    EXPECT_EQ(is_sq, p % 3 == 1) << p;
    EXPECT_EQ(legendre(-3, p) == 1, p % 3 == 1) << p;
  }
}

TEST(GfSqrt, MinusThree) {
  for (std::uint64_t q : {7, 13, 19, 25, 31, 49, 121, 343}) {
    Field f = Field::of_order(q);
    Elem s = sqrt_minus3(f);
    EXPECT_EQ(f.mul(s, s), f.from_int(-3)) << q;
    EXPECT_LE(s.index, f.neg(s).index);
  }
  for (std::uint64_t q : {5, 11, 17, 27}) {
    try {
      sqrt_minus3(Field::of_order(q));
      FAIL() << q;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NotASquare);
    }
  }
  EXPECT_THROW(sqrt_minus3(Field::of_order(16)), Error);
}

TEST(GfTrace, LinearAndBalanced) {
  for (std::uint64_t q : {2, 4, 8, 16, 32, 64}) {
    Field f = Field::of_order(q);
    std::size_t zeros = 0;
    for (std::uint32_t x = 0; x < q; ++x) {
      Elem t = trace_gf2(f, Elem{x});
      ASSERT_LE(t.index, 1u);
      zeros += t.index == 0;
      for (std::uint32_t y = 0; y < q; y += 3) ASSERT_EQ(trace_gf2(f, f.add(Elem{x}, Elem{y})), f.add(t, trace_gf2(f, Elem{y})));
    }
    EXPECT_EQ(zeros, q / 2);
    EXPECT_EQ(trace_gf2(f, f.one()).index, f.m() % 2);
  }
  EXPECT_THROW(trace_gf2(Field::of_order(9), Elem{1}), Error);
}

TEST(GfUnitQuadratic, RootsExistIffOneModThree) {
  for (std::uint64_t q : {4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 31, 64}) {
    Field f = Field::of_order(q);
    std::vector<std::uint32_t> brute;
    for (std::uint32_t t = 0; t < q; ++t) {
      Oracle o{f.p(), f.m(), f.spec().modulus};
      if (o.add(o.add(o.mul(t, t), t), 1) == 0) brute.push_back(t);
    }
    if (q % 3 == 1) {
      ASSERT_EQ(brute.size(), 2u) << q;
      auto [t1, t2] = solve_unit_quadratic(f);
      EXPECT_EQ(t1.index, brute[0]);
      EXPECT_EQ(t2.index, brute[1]);
      EXPECT_EQ(f.mul(t1, t2), f.one());
    } else {
      EXPECT_LE(brute.size(), 1u) << q;  // p = 3 has the double root 1
      try {
        solve_unit_quadratic(f);
        FAIL() << q;
      } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoRoots);
      }
    }
  }
}

TEST(GfAgreement, RootsBySubstitution) {
  Field f = Field::of_order(13);
  for (std::uint32_t i = 0; i < 13; ++i)
    for (std::uint32_t j = 0; j < 13; ++j) {
      if (i == j) continue;
      auto [x1, x2] = solve_agreement_quadratic(f, Elem{i}, Elem{j});
      std::vector<std::uint32_t> brute;
      for (std::uint32_t x = 0; x < 13; ++x) {
        std::int64_t v = (std::int64_t{x} * x - std::int64_t{i + j} * x + std::int64_t{i} * j + (std::int64_t{i} - j) * (std::int64_t{i} - j)) % 13;
        if ((v + 13) % 13 == 0) brute.push_back(x);
      }
      ASSERT_EQ(brute.size(), 2u);
      EXPECT_EQ(x1.index, brute[0]);
      EXPECT_EQ(x2.index, brute[1]);
    }
  EXPECT_THROW(solve_agreement_quadratic(f, Elem{2}, Elem{2}), Error);
  EXPECT_THROW(solve_agreement_quadratic(Field::of_order(16), Elem{1}, Elem{2}), Error);
}
