#include <gtest/gtest.h>

#include <random>

#include "cma/etale/algebra.hpp"
#include "support/oracles.hpp"

using namespace cma;

namespace {

const PolyZ kCubic{-1, 1, 0, 1};
const PolyZ kQuartic{1, -16, 20, -8, 1};
const PolyZ kGaussian{1, 0, 1};

MatQ rat_rows(std::vector<std::vector<std::string>> rows) {
  std::vector<std::vector<BigRat>> r;
  for (auto& row : rows) {
    r.emplace_back();
    for (auto& s : row) r.back().push_back(parse_rational(s));
  }
  return MatQ::from_rows(r);
}

AlgebraElement random_element(std::mt19937_64& rng, std::size_t n, int bound, bool fractions) {
  std::uniform_int_distribution<int> d(-bound, bound), den(1, 4);
  std::vector<BigRat> c(n);
  for (auto& v : c) {
    v = BigRat(d(rng), fractions ? den(rng) : 1);
    v.canonicalize();
  }
  return AlgebraElement(std::move(c));
}

std::vector<EtaleAlgebra> test_algebras() {
  return {EtaleAlgebra::power_basis({kCubic}),
          EtaleAlgebra::power_basis({kGaussian}),
          EtaleAlgebra::power_basis({kQuartic}),
          EtaleAlgebra({kGaussian}, rat_rows({{"1", "0"}, {"0", "2"}})),
          EtaleAlgebra::power_basis({PolyZ{-2, 0, 1}}),
          EtaleAlgebra::power_basis({PolyZ{0, 1}, kGaussian}),
          EtaleAlgebra::power_basis({PolyZ{-3, 1}, PolyZ{1, 1}})};
}

}  // namespace

TEST(RegularRep, CubicGenerator) {
  auto e = EtaleAlgebra::power_basis({kCubic});
  EXPECT_EQ(regular_rep(e, e.x()), to_rational(MatZ{{0, 0, 1}, {1, 0, -1}, {0, 1, 0}}));
}

TEST(RegularRep, GaussianI) {
  auto e = EtaleAlgebra::power_basis({kGaussian});
  EXPECT_EQ(regular_rep(e, e.x()), to_rational(MatZ{{0, -1}, {1, 0}}));
  AlgebraElement g(std::vector<BigRat>{BigRat(4, 5), BigRat(3, 5)});
  EXPECT_EQ(regular_rep(e, g), rat_rows({{"4/5", "-3/5"}, {"3/5", "4/5"}}));
}

TEST(RegularRep, OneIsIdentity) {
  for (const auto& e : test_algebras())
    EXPECT_EQ(regular_rep(e, e.one()), MatQ::identity(e.degree()));
}

TEST(Norm, Examples) {
  auto g = EtaleAlgebra::power_basis({kGaussian});
  auto c = EtaleAlgebra::power_basis({kCubic});
  EXPECT_EQ(norm(g, g.x()), 1);
  EXPECT_EQ(norm(c, c.x()), 1);
  EXPECT_EQ(norm(g, AlgebraElement(std::vector<BigRat>{BigRat(4, 5), BigRat(3, 5)})), 1);
  EXPECT_EQ(norm(g, AlgebraElement{2, 1}), 5);
}

TEST(Trace, Examples) {
  auto g = EtaleAlgebra::power_basis({kGaussian});
  auto c = EtaleAlgebra::power_basis({kCubic});
  EXPECT_EQ(trace(c, c.one()), 3);
  EXPECT_EQ(trace(g, g.x()), 0);
  EXPECT_EQ(trace(c, c.x()), 0);
}

TEST(IsOrder, Examples) {
  EXPECT_TRUE(is_order(EtaleAlgebra::power_basis({kCubic})).ok);
  auto half = EtaleAlgebra({kGaussian}, rat_rows({{"1", "0"}, {"0", "1/2"}}));
  auto res = is_order(half);
  ASSERT_FALSE(res.ok);
  ASSERT_TRUE(res.witness.has_value());
  EXPECT_EQ(res.witness->i, 2U);
  EXPECT_EQ(res.witness->j, 2U);
  EXPECT_EQ(res.witness->value, BigRat(-1, 4));
  EXPECT_TRUE(is_order(EtaleAlgebra({kGaussian}, rat_rows({{"1", "0"}, {"0", "2"}}))).ok);
}

TEST(IsOrder, OneMustBeInTheLattice) {
  auto e = EtaleAlgebra({kGaussian}, rat_rows({{"2", "0"}, {"0", "1"}}));
  auto res = is_order(e);
  ASSERT_FALSE(res.ok);
  EXPECT_EQ(res.witness->i, 0U);
}

TEST(Construction, RejectsBadInput) {
  EXPECT_THROW(EtaleAlgebra::power_basis({PolyZ{-1, 0, 1}}), InvalidArgument);  // reducible
  EXPECT_THROW(EtaleAlgebra::power_basis({PolyZ{1, 0, 2}}), InvalidArgument);   // not monic
  EXPECT_THROW(EtaleAlgebra({kGaussian}, rat_rows({{"1", "1"}, {"2", "2"}})), InvalidArgument);
  EXPECT_THROW(EtaleAlgebra({kGaussian}, MatQ::identity(3)), InvalidArgument);
  EXPECT_THROW(EtaleAlgebra::power_basis({}), InvalidArgument);
  // x^4 + 4 = (x^2 + 2x + 2)(x^2 - 2x + 2) has no rational root
  EXPECT_THROW(EtaleAlgebra::power_basis({PolyZ{4, 0, 0, 0, 1}}), InvalidArgument);
}

TEST(ElementIsIntegral, Examples) {
  auto c = EtaleAlgebra::power_basis({kCubic});
  auto g = EtaleAlgebra::power_basis({kGaussian});
  EXPECT_TRUE(element_is_integral(c, c.x()));
  EXPECT_FALSE(element_is_integral(c, c.scale(BigRat(1, 2), c.x())));
  EXPECT_FALSE(element_is_integral(g, AlgebraElement(std::vector<BigRat>{BigRat(4, 5), BigRat(3, 5)})));
}

TEST(Irreducibility, Examples) {
  EXPECT_TRUE(decide_irreducible(kQuartic).irreducible);
  EXPECT_TRUE(decide_irreducible(PolyZ{1, 0, 0, 0, 1}).irreducible);
  EXPECT_FALSE(decide_irreducible(PolyZ{4, 0, 0, 0, 1}).irreducible);
  EXPECT_TRUE(decide_irreducible(PolyZ{1, 0, 3, 0, 1}).irreducible);
  auto quintic = decide_irreducible(PolyZ{-1, -1, 0, 0, 0, 1});
  EXPECT_TRUE(quintic.decided);
  EXPECT_TRUE(quintic.irreducible);
}

TEST(Irreducibility, ProductsOfQuadraticsDetected) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    PolyZ a = oracle::random_poly(rng, 2, 6, true), b = oracle::random_poly(rng, 2, 6, true);
    EXPECT_FALSE(decide_irreducible(a * b).irreducible) << pretty(a * b);
  }
}

TEST(Irreducibility, AgreesWithModPWitness) {
  // irreducible mod some unramified prime implies irreducible over Q
  std::mt19937_64 rng(43);
  int found = 0;
  for (int trial = 0; trial < 200; ++trial) {
    PolyZ f = oracle::random_poly(rng, 2 + trial % 3, 6, true);
    for (auto p : {2ULL, 3ULL, 5ULL, 7ULL}) {
      auto fac = factor_mod_p(f, p);
      if (fac.size() == 1 && fac[0].multiplicity == 1) {
        EXPECT_TRUE(decide_irreducible(f).irreducible) << pretty(f);
        ++found;
        break;
      }
    }
  }
  EXPECT_GT(found, 20);
}

TEST(Properties, RingHomomorphismNormAndTrace) {
  std::mt19937_64 rng(47);
  for (const auto& e : test_algebras()) {
    for (int trial = 0; trial < 100; ++trial) {
      auto a = random_element(rng, e.degree(), 5, trial % 2 == 1);
      auto b = random_element(rng, e.degree(), 5, trial % 3 == 1);
      auto ab = e.mul(a, b);
      ASSERT_EQ(e.regular_rep(ab), e.regular_rep(a) * e.regular_rep(b));
      ASSERT_EQ(e.regular_rep(e.add(a, b)), e.regular_rep(a) + e.regular_rep(b));
      ASSERT_EQ(e.norm(ab), e.norm(a) * e.norm(b));
      ASSERT_EQ(e.trace(e.add(a, b)), e.trace(a) + e.trace(b));
    }
  }
}

TEST(Properties, MultiplicationIsCommutativeAndAssociative) {
  std::mt19937_64 rng(53);
  for (const auto& e : test_algebras())
    for (int trial = 0; trial < 20; ++trial) {
      auto a = random_element(rng, e.degree(), 4, false);
      auto b = random_element(rng, e.degree(), 4, true);
      auto c = random_element(rng, e.degree(), 4, false);
      ASSERT_EQ(e.mul(a, b), e.mul(b, a));
      ASSERT_EQ(e.mul(e.mul(a, b), c), e.mul(a, e.mul(b, c)));
    }
}

TEST(Properties, CharpolyOfGenerator) {
  for (auto f : {kCubic, kGaussian, kQuartic}) {
    auto e = EtaleAlgebra::power_basis({f});
    EXPECT_EQ(charpoly(e.regular_rep(e.x())), to_rational(f));
  }
  // multi-factor: charpoly of x_k is f_k times x^(n - deg f_k)
  auto e = EtaleAlgebra::power_basis({PolyZ{-3, 1}, kGaussian});
  EXPECT_EQ(charpoly(e.regular_rep(e.generator(1))), to_rational(kGaussian * PolyZ{0, 1}));
  EXPECT_EQ(charpoly(e.regular_rep(e.generator(0))), to_rational(PolyZ{-3, 1} * PolyZ{0, 0, 1}));
}

TEST(Properties, InverseAndPowers) {
  std::mt19937_64 rng(59);
  for (const auto& e : test_algebras())
    for (int trial = 0; trial < 10; ++trial) {
      auto a = random_element(rng, e.degree(), 4, true);
      if (e.norm(a) == 0) continue;
      EXPECT_EQ(e.mul(a, e.inverse(a)), e.one());
      EXPECT_EQ(e.pow(a, -2), e.inverse(e.mul(a, a)));
      EXPECT_EQ(e.from_regular_rep(e.regular_rep(a)), a);
    }
}

TEST(Properties, BasisChangeConjugatesByIntegralMatrix) {
  std::mt19937_64 rng(61);
  auto e = EtaleAlgebra::power_basis({kQuartic});
  MatZ change{{1, 2, 0, 0}, {0, 1, 0, 0}, {3, -1, 1, 0}, {0, 5, 2, 1}};
  auto e2 = e.rebased(change);
  ASSERT_TRUE(is_order(e2).ok);
  MatQ p = to_rational(change.transpose());  // columns: new basis in old coordinates
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_element(rng, 4, 5, false);
    auto a2 = e2.from_power(e.to_power(a));
    EXPECT_EQ(e2.regular_rep(a2), inverse(p) * e.regular_rep(a) * p);
  }
  EXPECT_THROW(e.rebased(MatZ{{2, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
               InvalidArgument);
}
