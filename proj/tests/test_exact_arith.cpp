#include <gtest/gtest.h>

#include <random>

#include "cma/arith/fp_poly.hpp"
#include "cma/arith/interval.hpp"
#include "cma/arith/lattice.hpp"
#include "cma/arith/matrix.hpp"
#include "cma/arith/sturm.hpp"
#include "support/oracles.hpp"

using namespace cma;

namespace {

PolyQ q(std::initializer_list<long> c) { return to_rational(PolyZ(c)); }

FpPoly fp(std::uint64_t p, std::vector<std::uint64_t> c) { return FpPoly(p, std::move(c)); }

const PolyZ kCubic{-1, 1, 0, 1};              // x^3 + x - 1
const PolyZ kQuartic{1, -16, 20, -8, 1};      // x^4 - 8x^3 + 20x^2 - 16x + 1
const PolyZ kGaussian{1, 0, 1};               // x^2 + 1

}  // namespace

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(to_string(parse_rational("4/5")), "4/5");
  EXPECT_EQ(to_string(parse_rational("-6/4")), "-3/2");
  EXPECT_EQ(to_string(parse_rational("10/5")), "2");
  EXPECT_THROW(parse_rational("1/0"), InvalidArgument);
  EXPECT_THROW(parse_rational("1.5"), InvalidArgument);
  EXPECT_THROW(parse_rational("3/-4"), InvalidArgument);
}

TEST(Gcd, Examples) {
  PolyQ f = q({-1, 1, 0, 1});
  EXPECT_EQ(poly_gcd(f, PolyQ()), monic(f));
  EXPECT_EQ(poly_gcd(q({-1, 0, 1}), q({-1, 1})), q({-1, 1}));
  EXPECT_EQ(poly_gcd(f, q({1, 0, 3})), q({1}));
  EXPECT_THROW(poly_gcd(PolyQ(), PolyQ()), InvalidArgument);
}

TEST(Gcd, CommonFactorProperty) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    PolyQ f = to_rational(oracle::random_poly(rng, 1 + trial % 3, 5, false));
    PolyQ g = to_rational(oracle::random_poly(rng, 1 + trial % 4, 5, false));
    PolyQ h = to_rational(oracle::random_poly(rng, 1 + trial % 2, 5, false));
    PolyQ d = poly_gcd(f * h, g * h);
    EXPECT_TRUE(rem(d, monic(h)).is_zero());
    EXPECT_TRUE(rem(f * h, d).is_zero());
    EXPECT_TRUE(rem(g * h, d).is_zero());
  }
}

TEST(Discriminant, Examples) {
  EXPECT_EQ(discriminant(kGaussian), -4);
  EXPECT_EQ(discriminant(PolyZ{-1, 0, 1}), 4);
  EXPECT_EQ(discriminant(kCubic), -31);
  EXPECT_EQ(discriminant(kQuartic), 2304);
  EXPECT_THROW(discriminant(PolyZ{1, 2}), InvalidArgument);
  EXPECT_THROW(discriminant(PolyZ{1, 0, 2}), InvalidArgument);
}

TEST(Discriminant, AgreesWithCubicFormula) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    PolyZ f = oracle::random_poly(rng, 3, 9, true);
    EXPECT_EQ(discriminant(f), oracle::cubic_discriminant(f.coeff(2), f.coeff(1), f.coeff(0)));
  }
}

TEST(Discriminant, VanishesModPExactlyWithRepeatedFactor) {
  std::mt19937_64 rng(5);
  auto primes = primes_below(100);
  for (int trial = 0; trial < 20; ++trial) {
    PolyZ f = oracle::random_poly(rng, 2 + trial % 4, 9, true);
    BigInt d = discriminant(f);
    for (auto p : primes) {
      bool repeated = false;
      for (const auto& fm : factor_mod_p(f, p)) repeated |= fm.multiplicity > 1;
      BigInt pp(static_cast<unsigned long>(p));
      EXPECT_EQ(repeated, mpz_divisible_p(d.get_mpz_t(), pp.get_mpz_t()) != 0)
          << pretty(f) << " mod " << p;
    }
  }
}

TEST(Sturm, Examples) {
  EXPECT_EQ(sturm_count_real_roots(kGaussian), 0U);
  EXPECT_EQ(sturm_count_real_roots(kCubic), 1U);
  EXPECT_EQ(sturm_count_real_roots(kQuartic), 4U);
  EXPECT_THROW(sturm_count_real_roots(PolyQ()), InvalidArgument);
  // repeated roots are counted once
  EXPECT_EQ(sturm_count_real_roots(q({-1, 0, 1}) * q({-1, 0, 1})), 2U);
}

TEST(Sturm, QuarticRootsIsolatedAsBisectionFinds) {
  PolyQ f = to_rational(kQuartic);
  EXPECT_EQ(sturm_count_in(f, BigRat(0), BigRat(1)), 1U);
  EXPECT_EQ(sturm_count_in(f, BigRat(1), BigRat(2)), 1U);
  EXPECT_EQ(sturm_count_in(f, BigRat(2), BigRat(3)), 1U);
  EXPECT_EQ(sturm_count_in(f, BigRat(3), BigRat(4)), 1U);
  EXPECT_EQ(sturm_count_in(f, BigRat(4), BigRat(100)), 0U);
  EXPECT_EQ(oracle::bisection_real_roots(f), 4U);
  EXPECT_EQ(oracle::bisection_real_roots(to_rational(kCubic)), 1U);
}

TEST(Sturm, AgreesWithBisectionOracle) {
  std::mt19937_64 rng(17);
  int checked = 0;
  while (checked < 200) {
    PolyQ f = to_rational(oracle::random_poly(rng, 1 + checked % 6, 9, false));
    if (f.degree() < 1 || poly_gcd(f, f.derivative()).degree() > 0) continue;
    ASSERT_EQ(sturm_count_real_roots(f), oracle::bisection_real_roots(f)) << pretty(f);
    ++checked;
  }
}

TEST(FactorModP, Examples) {
  auto f5 = factor_mod_p(kGaussian, 5);
  ASSERT_EQ(f5.size(), 2U);
  EXPECT_EQ(f5[0].factor, fp(5, {2, 1}));  // x + 2
  EXPECT_EQ(f5[1].factor, fp(5, {3, 1}));  // x + 3
  auto f3 = factor_mod_p(kGaussian, 3);
  ASSERT_EQ(f3.size(), 1U);
  EXPECT_EQ(f3[0].factor.degree(), 2);
  auto c2 = factor_mod_p(kCubic, 2);
  ASSERT_EQ(c2.size(), 1U);
  EXPECT_EQ(c2[0].factor.degree(), 3);
  EXPECT_THROW(factor_mod_p(kGaussian, 9), InvalidArgument);
  EXPECT_THROW(factor_mod_p(FpPoly(7)), InvalidArgument);
}

TEST(FactorModP, RemultipliesAndFactorsAreIrreducible) {
  std::mt19937_64 rng(23);
  const std::vector<std::uint64_t> primes{2, 3, 5, 7, 11, 13};
  for (int trial = 0; trial < 80; ++trial) {
    const auto p = primes[trial % primes.size()];
    std::uniform_int_distribution<std::uint64_t> d(0, p - 1);
    std::vector<std::uint64_t> c(2 + trial % 7);
    for (auto& v : c) v = d(rng);
    c.back() = 1 + d(rng) % (p - 1);
    FpPoly f(p, c);
    if (trial % 5 == 0) f = f * f;  // exercise multiplicities
    FpPoly prod = FpPoly::constant(p, 1);
    for (const auto& fm : factor_mod_p(f)) {
      EXPECT_TRUE(oracle::brute_force_irreducible(fm.factor));
      for (int i = 0; i < fm.multiplicity; ++i) prod = prod * fm.factor;
    }
    EXPECT_EQ(prod, f.monic());
  }
}

TEST(FactorModP, ExhaustiveFallbackSplits) {
  // (x+1)(x+2)(x+3) over F_7, and a product of two irreducible quadratics
  FpPoly g = fp(7, {1, 1}) * fp(7, {2, 1}) * fp(7, {3, 1});
  std::vector<FpPoly> out;
  detail::exhaustive_equal_degree(g, 1, out);
  EXPECT_EQ(out.size(), 3U);
  FpPoly h = fp(3, {1, 0, 1}) * fp(3, {2, 1, 1});
  out.clear();
  detail::exhaustive_equal_degree(h, 2, out);
  ASSERT_EQ(out.size(), 2U);
  EXPECT_EQ(out[0] * out[1], h);
}

TEST(FactorModP, DeterministicAcrossCalls) {
  PolyZ f{3, 1, 4, 1, 5, 9, 2, 6, 1};
  auto a = factor_mod_p(f, 101), b = factor_mod_p(f, 101);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].factor, b[i].factor);
}

TEST(SquareTest, Examples) {
  EXPECT_TRUE(is_square_integer(4));
  EXPECT_FALSE(is_square_integer(-31));
  EXPECT_TRUE(is_square_integer(25 * 49));
  EXPECT_FALSE(is_square_integer(2));
  EXPECT_TRUE(is_square_integer(0));
}

TEST(Matrix, DeterminantMatchesLeibniz) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> d(-7, 7);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 1 + trial % 5;
    MatQ m(n, n);
    MatZ z(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        int v = d(rng);
        m(i, j) = BigRat(v, 1 + (trial % 3));
        m(i, j).canonicalize();
        z(i, j) = v;
      }
    EXPECT_EQ(determinant(m), oracle::leibniz_determinant(m));
    EXPECT_EQ(determinant(z), oracle::leibniz_determinant(z));
  }
}

TEST(Matrix, InverseAndCharpoly) {
  MatQ g = to_rational(MatZ{{0, 0, 1}, {1, 0, -1}, {0, 1, 0}});
  EXPECT_EQ(g * inverse(g), MatQ::identity(3));
  EXPECT_EQ(charpoly(g), q({-1, 1, 0, 1}));
  EXPECT_THROW(inverse(to_rational(MatZ{{1, 2}, {2, 4}})), InvalidArgument);
}

TEST(Lattice, IntegerKernel) {
  MatZ a{{2, 4, 6}, {1, 1, 1}};
  auto ker = integer_kernel(a);
  ASSERT_EQ(ker.size(), 1U);
  const auto& v = ker[0];
  EXPECT_EQ(2 * v[0] + 4 * v[1] + 6 * v[2], 0);
  EXPECT_EQ(v[0] + v[1] + v[2], 0);
  // primitive generator of the kernel lattice, i.e. +-(1, -2, 1)
  EXPECT_EQ(abs(v[0]), 1);
}

TEST(Lattice, SmithInvariants) {
  auto d = smith_invariants(MatZ{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  ASSERT_EQ(d.size(), 3U);
  EXPECT_EQ(d[0], 2);
  EXPECT_EQ(d[1], 6);
  EXPECT_EQ(d[2], 12);
  // product of invariants = |det|
  EXPECT_EQ(d[0] * d[1] * d[2], abs(determinant(MatZ{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}})));
}

TEST(Interval, LogEnclosesTrueValue) {
  auto l2 = log_interval(BigInt(2), 64);
  const BigRat approx = parse_rational("693147180559945/1000000000000000");
  const BigRat eps = parse_rational("1/1000000000000000");
  EXPECT_LT(l2.lo(), approx + eps);
  EXPECT_GT(l2.hi(), approx);
  EXPECT_LT(l2.width(), eps);
  auto l1 = log_interval(RationalInterval(BigRat(1)), 64);
  EXPECT_TRUE(l1.contains_zero());
  EXPECT_THROW(log_interval(RationalInterval(BigRat(-1), BigRat(2)), 64), InvalidArgument);
}

TEST(Interval, SqrtBounds) {
  auto [lo, hi] = sqrt_bounds(BigRat(2), 40);
  EXPECT_LE(lo * lo, 2);
  EXPECT_GE(hi * hi, 2);
  auto [a, b] = sqrt_bounds(BigRat(9, 4), 10);
  EXPECT_EQ(a, BigRat(3, 2));
  EXPECT_EQ(b, BigRat(3, 2));
}
