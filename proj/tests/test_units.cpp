#include <gtest/gtest.h>

#include <random>

#include "cma/units/units.hpp"

using namespace cma;

namespace {

const PolyZ kCubic{-1, 1, 0, 1};
const PolyZ kQuartic{1, -16, 20, -8, 1};
const PolyZ kGaussian{1, 0, 1};

EtaleAlgebra power(const PolyZ& f) { return EtaleAlgebra::power_basis({f}); }

// Fundamental unit of Z[sqrt d] by brute force on x^2 - d y^2 = +-1.
std::pair<long, long> pell_unit(long d) {
  for (long y = 1; y < 100000; ++y)
    for (long s : {-1L, 1L}) {
      long x2 = d * y * y + s;
      long x = static_cast<long>(std::llround(std::sqrt(static_cast<double>(x2))));
      if (x > 0 && x * x == x2) return {x, y};
    }
  return {0, 0};
}

bool same_up_to_sign_and_inverse(const EtaleAlgebra& e, const AlgebraElement& a, const AlgebraElement& b) {
  for (const auto& c : {b, e.inverse(b)})
    if (a == c || a == e.scale(BigRat(-1), c)) return true;
  return false;
}

// Exponents of c in the free generators up to torsion. A numeric solve
// proposes integers; the exact torsion check decides.
std::optional<std::vector<long>> express(const EtaleAlgebra& e, const UnitSystem& sys,
                                         const AlgebraElement& c, long bound) {
  std::vector<long> ex;
  if (!sys.free.empty()) {
    ApproxLogs logs(e, sys.s_primes);
    std::vector<std::vector<long double>> rows;
    for (const auto& u : sys.free) rows.push_back(logs(u));
    for (auto x : detail::coefficients(rows, logs(c))) {
      if (std::fabs(x) > bound) return std::nullopt;
      ex.push_back(std::lround(x));
    }
  }
  std::vector<BigInt> neg;
  for (auto v : ex) neg.emplace_back(-v);
  if (is_torsion(e, e.mul(c, detail::power_product(e, sys.free, neg)))) return ex;
  return std::nullopt;
}

}  // namespace

TEST(SearchUnits, GaussianExamples) {
  auto e = power(kGaussian);
  auto units = search_units(e, 2, std::set<BigInt>{BigInt(1), BigInt(-1)});
  EXPECT_EQ(units.size(), 4U);
  auto five = search_units(e, 3, std::set<BigInt>{BigInt(5)});
  EXPECT_EQ(five.size(), 8U);
  for (const auto& a : five) EXPECT_EQ(e.norm(a), 5);
}

TEST(SearchUnits, CubicContainsGenerator) {
  auto e = power(kCubic);
  auto units = search_units(e, 1, std::vector<std::uint64_t>{});
  EXPECT_NE(std::find(units.begin(), units.end(), e.x()), units.end());
}

TEST(SearchUnits, BudgetAndOrderChecks) {
  auto e = power(kQuartic);
  EXPECT_THROW(search_units(e, 40, std::vector<std::uint64_t>{}), BudgetExceeded);
  MatQ half(2, 2);
  half(0, 0) = 1;
  half(1, 1) = BigRat(1, 2);
  EtaleAlgebra not_order({kGaussian}, half);
  EXPECT_THROW(search_units(not_order, 2, std::vector<std::uint64_t>{}), InvalidArgument);
}

TEST(SearchUnits, ClosedUnderNegationAndInverse) {
  for (const auto& f : {kGaussian, kCubic, kQuartic, PolyZ{-2, 0, 1}, PolyZ{-1, -1, 1}}) {
    auto e = power(f);
    auto units = search_units(e, f.degree() == 4 ? 4 : 6, std::vector<std::uint64_t>{});
    std::set<AlgebraElement> set(units.begin(), units.end());
    for (const auto& u : units) {
      EXPECT_TRUE(set.count(e.scale(BigRat(-1), u))) << pretty(f);
      EXPECT_TRUE(e.element_is_integral(e.inverse(u))) << pretty(f);
      EXPECT_TRUE(is_integral(inverse(e.regular_rep(u))));
    }
  }
}

TEST(Torsion, Examples) {
  auto gi = torsion_units(power(kGaussian));
  ASSERT_EQ(gi.size(), 1U);
  EXPECT_EQ(gi[0].order, 4U);
  EXPECT_EQ(gi[0].element, (AlgebraElement{0, 1}));
  for (const auto& f : {kCubic, kQuartic}) {
    auto t = torsion_units(power(f));
    ASSERT_EQ(t.size(), 1U);
    EXPECT_EQ(t[0].order, 2U);
    EXPECT_EQ(t[0].element, power(f).scalar(BigRat(-1)));
  }
  // Eisenstein: x^2 + x + 1 has sixth roots of unity
  auto eis = torsion_units(power(PolyZ{1, 1, 1}));
  EXPECT_EQ(eis[0].order, 6U);
  // Q x Q(i): two generators
  auto split = torsion_units(EtaleAlgebra::power_basis({PolyZ{0, 1}, kGaussian}));
  std::size_t total = torsion_elements(EtaleAlgebra::power_basis({PolyZ{0, 1}, kGaussian}), split).size();
  EXPECT_EQ(total, 8U);
}

TEST(Torsion, ExponentBound) {
  EXPECT_EQ(torsion_exponent_bound(1), 2U);
  EXPECT_EQ(torsion_exponent_bound(2), 12U);
  EXPECT_EQ(torsion_exponent_bound(4), 120U);
}

TEST(DirichletRank, Examples) {
  EXPECT_EQ(dirichlet_rank(power(kGaussian), {}), 0U);
  EXPECT_EQ(dirichlet_rank(power(kGaussian), {5}), 2U);
  EXPECT_EQ(dirichlet_rank(power(kGaussian), {3}), 1U);
  EXPECT_EQ(dirichlet_rank(power(kCubic), {}), 1U);
  EXPECT_EQ(dirichlet_rank(power(kQuartic), {}), 3U);
  EXPECT_EQ(dirichlet_rank(Signature{2, 1}, 2), 4U);
}

TEST(Valuation, GaussianFive) {
  auto e = power(kGaussian);
  auto places = finite_places(e, 5);
  ASSERT_EQ(places.size(), 2U);
  const AlgebraElement a{2, 1}, b{2, -1};
  EXPECT_EQ(valuation(e, places[0], a) + valuation(e, places[1], a), 1);
  EXPECT_EQ(valuation(e, places[0], a) + valuation(e, places[0], b), 1);
  EXPECT_EQ(valuation(e, places[0], e.inverse(a)), -valuation(e, places[0], a));
  EXPECT_EQ(valuation(e, places[0], e.scalar(25)), 2);
  EXPECT_THROW(finite_places(e, 2), RamifiedPlace);
}

TEST(Valuation, SumMatchesNormValuation) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> coef(-12, 12);
  for (const auto& f : {kGaussian, kCubic, kQuartic, PolyZ{-2, 0, 1}}) {
    auto e = power(f);
    for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL}) {
      if (discriminant(f) % BigInt(static_cast<unsigned long>(p)) == 0) continue;
      auto places = finite_places(e, p);
      for (int trial = 0; trial < 30; ++trial) {
        std::vector<BigRat> c;
        for (std::size_t i = 0; i < e.degree(); ++i) c.emplace_back(coef(rng));
        AlgebraElement a(c);
        if (a.is_zero()) continue;
        int sum = 0;
        for (const auto& pl : places) sum += pl.residue_degree * valuation(e, pl, a);
        EXPECT_EQ(sum, valuation(e.norm(a), BigInt(static_cast<unsigned long>(p)))) << pretty(f) << " p=" << p;
      }
    }
  }
}

TEST(Embeddings, LogsSumToLogNorm) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> coef(-9, 9);
  for (const auto& f : {kGaussian, kCubic, kQuartic, PolyZ{2, 0, 0, 0, 1}, PolyZ{1, 1, 0, 0, 1}}) {
    auto e = power(f);
    ArchimedeanPlaces arch(e, 96);
    auto sig = signature(f);
    EXPECT_EQ(arch.size(), static_cast<std::size_t>(sig.r1 + sig.r2));
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<BigRat> c;
      for (std::size_t i = 0; i < e.degree(); ++i) c.emplace_back(coef(rng));
      AlgebraElement a(c);
      if (a.is_zero()) continue;
      RationalInterval sum(BigRat(0));
      for (std::size_t j = 0; j < arch.size(); ++j) {
        auto l = arch.log_abs(e, a, j);
        ASSERT_TRUE(l.has_value());
        sum += *l;
      }
      const double expect = std::log(std::fabs(e.norm(a).get_d()));
      EXPECT_LE(sum.lo().get_d(), expect + 1e-12);
      EXPECT_GE(sum.hi().get_d(), expect - 1e-12);
      EXPECT_LT(sum.width().get_d(), 1e-10);
    }
  }
}

TEST(Embeddings, RootsAreOrdered) {
  auto roots = certify_roots(kQuartic, 64);
  ASSERT_TRUE(roots);
  ASSERT_EQ(roots->size(), 4U);
  for (std::size_t i = 0; i + 1 < 4; ++i) EXPECT_LT((*roots)[i].center.re, (*roots)[i + 1].center.re);
  EXPECT_NEAR((*roots)[0].center.re.get_d(), 0.0681483474, 1e-9);
  auto cub = certify_roots(kCubic, 64);
  ASSERT_TRUE(cub);
  EXPECT_TRUE((*cub)[0].real);
  EXPECT_FALSE((*cub)[1].real);
  EXPECT_GT((*cub)[1].center.im, 0);
}

TEST(UnitSystem, CubicIsGeneratedByX) {
  auto e = power(kCubic);
  auto sys = compute_unit_system(e, {}, 3);
  ASSERT_EQ(sys.free.size(), 1U);
  EXPECT_EQ(sys.free[0], e.x());
  auto cert = verify_unit_system(e, sys);
  EXPECT_TRUE(cert.valid);
  EXPECT_TRUE(cert.independent);
}

TEST(UnitSystem, RealQuadraticMatchesPell) {
  for (long d : {2L, 3L, 6L, 7L, 11L, 13L}) {
    auto e = power(PolyZ{-d, 0, 1});
    auto [x, y] = pell_unit(d);
    auto sys = compute_unit_system(e, {}, std::max(x, y) + 1);
    ASSERT_EQ(sys.free.size(), 1U) << d;
    EXPECT_TRUE(same_up_to_sign_and_inverse(e, sys.free[0], AlgebraElement{x, y})) << d;
    EXPECT_TRUE(verify_unit_system(e, sys).valid);
  }
}

TEST(UnitSystem, QuarticRankThree) {
  auto e = power(kQuartic);
  auto sys = compute_unit_system(e, {}, 3);
  EXPECT_EQ(sys.free.size(), 3U);
  auto cert = verify_unit_system(e, sys);
  EXPECT_TRUE(cert.valid);
  EXPECT_EQ(cert.minor_columns.size(), 3U);
  for (const auto& u : sys.free) EXPECT_EQ(abs(e.norm(u)), 1);
}

TEST(UnitSystem, BoxUnitsAreReachable) {
  // everything found in a box lies in the generated group with small
  // exponents
  for (const auto& f : {kCubic, kQuartic, PolyZ{-1, -1, 1}, PolyZ{-1, -1, 0, 1}}) {
    auto e = power(f);
    auto sys = compute_unit_system(e, {}, 3);
    for (const auto& c : search_units(e, 2, std::vector<std::uint64_t>{}))
      EXPECT_TRUE(express(e, sys, c, 30).has_value()) << pretty(f);
  }
}

TEST(UnitSystem, DirichletRankConsistency) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> coef(-4, 4);
  int done = 0;
  while (done < 12) {
    PolyZ f{coef(rng), coef(rng), coef(rng), 1};
    if (!decide_irreducible(f).irreducible) continue;
    auto e = power(f);
    UnitSystem sys;
    try {
      sys = compute_unit_system(e, {}, 6);
    } catch (const NoSuchElement&) {
      continue;  // fundamental unit outside the box
    }
    EXPECT_EQ(sys.free.size(), dirichlet_rank(e, {})) << pretty(f);
    EXPECT_TRUE(verify_unit_system(e, sys).valid) << pretty(f);
    ++done;
  }
}

TEST(UnitSystem, GaussianSUnits) {
  auto e = power(kGaussian);
  auto sys = compute_unit_system(e, {5}, 3);
  ASSERT_EQ(sys.free.size(), 2U);
  auto cert = verify_unit_system(e, sys);
  EXPECT_TRUE(cert.valid);
  for (const auto& u : sys.free) EXPECT_EQ(e.norm(u), 5);
}

TEST(Verify, DependentSystem) {
  auto e = power(PolyZ{-2, 0, 1});
  const AlgebraElement u{1, 1};
  UnitSystem sys{{{e.scalar(-1), 2}}, {u, e.mul(u, u)}, {}};
  auto cert = verify_unit_system(e, sys);
  EXPECT_FALSE(cert.valid);
  EXPECT_FALSE(cert.independent);
  ASSERT_TRUE(cert.relation);
  EXPECT_EQ(*cert.relation, (std::vector<long>{2, -1}));
}

TEST(Verify, NonUnitAndWrongTorsion) {
  auto e = power(kGaussian);
  UnitSystem bad{{{AlgebraElement{0, 1}, 2}}, {}, {}};
  EXPECT_FALSE(verify_unit_system(e, bad).valid);
  UnitSystem nonunit{{{AlgebraElement{0, 1}, 4}}, {AlgebraElement{2, 1}}, {}};
  EXPECT_FALSE(verify_unit_system(e, nonunit).valid);
  UnitSystem ok{{{AlgebraElement{0, 1}, 4}}, {AlgebraElement{2, 1}}, {5}};
  EXPECT_TRUE(verify_unit_system(e, ok).valid);
}

TEST(NormOne, RealQuadratic) {
  auto e = power(PolyZ{-2, 0, 1});
  auto sys = compute_unit_system(e, {}, 3);
  auto one = norm_one_subgroup(e, sys);
  ASSERT_EQ(one.free.size(), 1U);
  EXPECT_EQ(one.free[0], (AlgebraElement{3, 2}));
  EXPECT_EQ(one.torsion[0].order, 2U);
}

TEST(NormOne, GaussianFive) {
  auto e = power(kGaussian);
  auto sys = compute_unit_system(e, {5}, 3);
  auto one = norm_one_subgroup(e, sys);
  ASSERT_EQ(one.free.size(), 1U);
  EXPECT_EQ(one.free[0], AlgebraElement(std::vector<BigRat>{BigRat(4, 5), BigRat(3, 5)}));
  ASSERT_EQ(one.torsion.size(), 1U);
  EXPECT_EQ(one.torsion[0].element, (AlgebraElement{0, 1}));
  EXPECT_EQ(one.torsion[0].order, 4U);
}

TEST(NormOne, CubicHasTrivialTorsion) {
  auto e = power(kCubic);
  auto one = norm_one_subgroup(e, compute_unit_system(e, {}, 3));
  EXPECT_EQ(one.torsion[0].order, 1U);
  ASSERT_EQ(one.free.size(), 1U);
  EXPECT_EQ(one.free[0], e.x());
}

TEST(NormOne, GeneratorsHaveNormOneAndCaptureTheBox) {
  for (const auto& f : {kQuartic, PolyZ{-2, 0, 1}, PolyZ{-3, 0, 1}, kCubic, PolyZ{-1, -1, 1}}) {
    auto e = power(f);
    auto sys = compute_unit_system(e, {}, 3);
    auto one = norm_one_subgroup(e, sys);
    for (const auto& u : one.free) EXPECT_EQ(e.norm(u), 1) << pretty(f);
    for (const auto& t : one.torsion) EXPECT_EQ(e.norm(t.element), 1) << pretty(f);
    // every norm-one box unit is reached
    for (const auto& c : search_units(e, 2, std::set<BigInt>{BigInt(1)})) {
      auto ex = express(e, one, c, 30);
      ASSERT_TRUE(ex.has_value()) << pretty(f);
      std::vector<BigInt> neg;
      for (auto v : *ex) neg.emplace_back(-v);
      auto rest = e.mul(c, detail::power_product(e, one.free, neg));
      auto tors = torsion_elements(e, one.torsion);
      EXPECT_NE(std::find(tors.begin(), tors.end(), rest), tors.end()) << pretty(f);
    }
  }
}
