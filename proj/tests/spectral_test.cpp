#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "brute_force.hpp"
#include "cjsr/spectral.hpp"
#include "test_util.hpp"

namespace {

using namespace cjsr;
using namespace cjsr::fixtures;

MatrixSet twice_identity() { return MatrixSet({2.0 * Matrix::Identity(2, 2)}); }

TEST(RhoN, Examples) {
  const auto pair = golden_pair();
  EXPECT_DOUBLE_EQ(rho_n(pair, WordSource::all(2), 1, NormKind::RowSum), 2.0);
  for (int n : {1, 3, 7}) EXPECT_NEAR(rho_n(twice_identity(), WordSource::all(1), n), 2.0, 1e-14);

  std::mt19937 rng(1);
  const auto three = random_set(rng, 3, 2);
  for (int n : {1, 4, 12}) EXPECT_EQ(rho_n(three, WordSource::constrained(narrow_example()), n), 0.0);
}

TEST(RhoN, AlphabetMismatch) {
  try {
    rho_n(golden_pair(), WordSource::all(3), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AlphabetMismatch);
  }
}

TEST(RhoHatN, Examples) {
  const auto pair = golden_pair();
  EXPECT_NEAR(rho_hat_n(pair, WordSource::all(2), 2), kPhi, 1e-12);
  EXPECT_NEAR(rho_hat_n(pair, WordSource::all(2), 1), 1.0, 1e-12);
  EXPECT_NEAR(rho_hat_n(twice_identity(), WordSource::all(1), 5), 2.0, 1e-14);
}

TEST(RhoHatPerN, Examples) {
  const auto pair = golden_pair();
  EXPECT_NEAR(rho_hat_per_n(pair, WordSource::markov({{0, 1}, {1, 0}}), 2), kPhi, 1e-12);
  for (int n : {1, 2, 5}) EXPECT_NEAR(rho_hat_per_n(pair, WordSource::markov({{1, 0}, {0, 1}}), n), 1.0, 1e-9);
  EXPECT_EQ(rho_hat_per_n(pair, WordSource::constrained(balanced(2)), 3), 0.0);
}

TEST(Radii, MatchBruteForce) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const int r = 1 + trial % 3;
    const int d = 1 + trial % 3;
    const auto ms = random_set(rng, r, d);
    const auto c = random_constraint(rng, r, 1 + trial % 4);
    std::vector<std::vector<int>> omega(r, std::vector<int>(r));
    for (auto& row : omega)
      for (auto& x : row) x = static_cast<int>(rng() % 2);
    const std::array<WordSource, 3> srcs = {WordSource::all(r), WordSource::markov(omega),
                                            WordSource::constrained(c)};
    for (int kind = 0; kind < 3; ++kind) {
      for (int n = 1; n <= 5; ++n) {
        for (auto norm : kAllNorms) {
          const auto want = brute_radii(ms, kind, omega, &c, n, norm);
          const double got = rho_n(ms, srcs[kind], n, norm);
          ASSERT_NEAR(got, want.rho, 1e-10 * std::max(1.0, want.rho)) << kind << " n=" << n;
        }
        const auto want = brute_radii(ms, kind, omega, &c, n, NormKind::RowSum);
        ASSERT_NEAR(rho_hat_n(ms, srcs[kind], n), want.rho_hat, 1e-9 * std::max(1.0, want.rho_hat));
        ASSERT_NEAR(rho_hat_per_n(ms, srcs[kind], n), want.rho_hat_per, 1e-9 * std::max(1.0, want.rho_hat_per));
      }
    }
  }
}

TEST(Radii, LongProductsDoNotOverflow) {
  Matrix big(3, 3);
  big << 1e100, 1e100, 0, 0, 1e100, 0, 0, 0, 1;
  const MatrixSet ms({big});
  const auto br = bracket(ms, WordSource::all(1), 40);
  for (const auto& rec : br.records) {
    ASSERT_TRUE(std::isfinite(rec.upper));
    ASSERT_NEAR(rec.lower, 1e100, 1e88);
  }
}

TEST(MarkovLift, TwoCycle) {
  const auto lift = build_markov_lift(balanced(2));
  ASSERT_EQ(lift.size(), 2);
  EXPECT_EQ(lift.omega, (std::vector<std::vector<int>>{{0, 1}, {1, 0}}));
  EXPECT_EQ(lift.edge_symbol, (std::vector<Symbol>{2, 1}));
  // walk 12 -> 21 -> 12 -> 21 carries symbols 1,2,1 after the start block
  EXPECT_EQ(lift.symbols_of({1, 2, 1, 2}), (Word{2, 1, 2, 1}));
  const auto pair = golden_pair();
  const auto lm = lift.matrices(pair);
  const Matrix along = lm[2] * lm[1] * lm[2];
  const Matrix direct = pair[1] * pair[2] * pair[1];
  EXPECT_EQ(along, direct);
}

TEST(MarkovLift, FullShiftAndEmpty) {
  const auto lift = build_markov_lift(FrequencyConstraint::unconstrained(3, 1));
  EXPECT_EQ(lift.omega, (std::vector<std::vector<int>>(3, std::vector<int>(3, 1))));
  try {
    build_markov_lift(narrow_example());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyConstraint);
  }
}

TEST(Bracket, GelfandEndpoint) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ms = random_set(rng, 1, 3);
    const auto br = bracket(ms, WordSource::all(1), 1);
    EXPECT_NEAR(br.best_lower, spectral_radius(ms[1]), 1e-12);
    EXPECT_NEAR(br.best_upper, operator_norm(ms[1], NormKind::RowSum), 1e-12);
    EXPECT_LE(br.best_lower, br.best_upper);
  }
}

TEST(Bracket, GoldenAlternating) {
  const auto br = bracket(golden_pair(), WordSource::constrained(balanced(2)), 16, NormKind::RowSum);
  EXPECT_NEAR(br.records[1].lower_per, kPhi, 1e-10);
  EXPECT_NEAR(br.best_lower, kPhi, 1e-10);
  EXPECT_LE(br.best_upper - kPhi, 0.05);
  EXPECT_GE(br.best_upper, kPhi);
  EXPECT_EQ(br.best_lower_witness, (Word{1, 2}));
}

TEST(Bracket, Homogeneity) {
  std::mt19937 rng(9);
  const auto ms = random_set(rng, 2, 2);
  const auto src = WordSource::constrained(balanced(3));
  const auto base = bracket(ms, src, 8);
  const auto tripled = bracket(ms.scaled(3), src, 8);
  for (std::size_t i = 0; i < base.records.size(); ++i) {
    EXPECT_NEAR(tripled.records[i].upper, 3 * base.records[i].upper, 1e-12 * 3 * base.records[i].upper);
    EXPECT_NEAR(tripled.records[i].lower, 3 * base.records[i].lower, 1e-12 * 3 * base.records[i].lower);
    EXPECT_NEAR(tripled.records[i].lower_per, 3 * base.records[i].lower_per,
                1e-12 * 3 * base.records[i].lower_per);
  }
}

TEST(Bracket, PruningIsExact) {
  std::mt19937 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const int r = 2 + trial % 2;
    const auto ms = random_set(rng, r, 2);
    const auto c = random_constraint(rng, r, 1 + trial % 3);
    for (const auto& src : {WordSource::all(r), WordSource::constrained(c)}) {
      for (auto norm : kAllNorms) {
        const auto a = bracket(ms, src, 9, norm, true);
        const auto b = bracket(ms, src, 9, norm, false);
        for (std::size_t i = 0; i < a.records.size(); ++i) {
          ASSERT_EQ(a.records[i].upper, b.records[i].upper);
          ASSERT_EQ(a.records[i].lower, b.records[i].lower);
          ASSERT_EQ(a.records[i].lower_per, b.records[i].lower_per);
          ASSERT_EQ(a.records[i].upper_witness, b.records[i].upper_witness);
        }
      }
    }
  }
}

TEST(Bracket, NonPeriodicWordsAreNotLowerBounds) {
  // Alternating chain with products that vanish after two steps: the radius is
  // 0 while the single admissible word (1) has rho(M1) = 10.
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 0) = 10;
  b(1, 1) = 10;
  const auto br = bracket(MatrixSet({a, b}), WordSource::markov({{0, 1}, {1, 0}}), 6);
  EXPECT_NEAR(br.records[0].lower, 10, 1e-12);
  EXPECT_EQ(br.records[0].lower_per, 0);
  EXPECT_EQ(br.best_lower, 0);
  EXPECT_EQ(br.best_upper, 0);
}

TEST(ExactRadius, Examples) {
  const auto pair = golden_pair();
  const auto v = exact_radius_if_forced_periodic(pair, balanced(2));
  ASSERT_TRUE(v.has_value());
  EXPECT_NEAR(*v, kPhi, 1e-12);

  Matrix m(2, 2);
  m << 0.5, 2, -1, 0.3;
  const auto single = exact_radius_if_forced_periodic(MatrixSet({m}), FrequencyConstraint(1, 3, rats({"0"}), rats({"1"})));
  ASSERT_TRUE(single.has_value());
  EXPECT_NEAR(*single, spectral_radius(m), 1e-12);

  std::mt19937 rng(1);
  EXPECT_FALSE(exact_radius_if_forced_periodic(random_set(rng, 3, 2), wide_example()).has_value());
  EXPECT_THROW(exact_radius_if_forced_periodic(random_set(rng, 3, 2), narrow_example()), Error);
}

TEST(ExactRadius, AgreesWithLongPeriodicWords) {
  // Forced-periodic language: rho_hat_per at multiples of l reaches the cycle value.
  std::mt19937 rng(13);
  const auto c = balanced(4);
  const auto ms = random_set(rng, 2, 3);
  const double exact = *exact_radius_if_forced_periodic(ms, c);
  const auto br = bracket(ms, WordSource::constrained(c), 12);
  EXPECT_NEAR(br.best_lower, exact, 1e-9 * exact);
  EXPECT_GE(br.best_upper, exact * (1 - 1e-12));
}

TEST(VerifyBergerWang, GoldenPairAllWords) {
  const auto rep = verify_berger_wang(golden_pair(), WordSource::all(2), 8);
  EXPECT_TRUE(rep.chain_ok);
  EXPECT_TRUE(rep.nested_ok);
  EXPECT_TRUE(rep.cross_ok);
  EXPECT_NEAR(rep.best_lower, kPhi, 1e-10);
  EXPECT_GE(rep.best_upper, kPhi * (1 - 1e-12));
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    EXPECT_LE(rep.rows[i].best_upper - rep.rows[i].best_lower, rep.rows[i - 1].best_upper - rep.rows[i - 1].best_lower);
    EXPECT_LE(rep.rows[i].best_lower, kPhi + 1e-12);
    EXPECT_GE(rep.rows[i].best_upper, kPhi * (1 - 1e-12));
  }
}

TEST(VerifyBergerWang, EmptyLanguage) {
  std::mt19937 rng(3);
  const auto rep = verify_berger_wang(random_set(rng, 3, 2), WordSource::constrained(narrow_example()), 5);
  EXPECT_TRUE(rep.empty_language);
  EXPECT_EQ(rep.best_lower, 0);
  EXPECT_EQ(rep.best_upper, 0);
  for (const auto& row : rep.rows) {
    EXPECT_EQ(row.lower, 0);
    EXPECT_EQ(row.upper[0], 0);
  }
}

TEST(VerifyBergerWang, ForcedPeriodicGapCoversExactValue) {
  std::mt19937 rng(14);
  const auto ms = random_set(rng, 2, 2);
  const auto c = balanced(4);
  const auto rep = verify_berger_wang(ms, WordSource::constrained(c), 10);
  const double exact = *exact_radius_if_forced_periodic(ms, c);
  EXPECT_LE(std::abs(exact - rep.best_lower), rep.gap + 1e-12);
  EXPECT_LE(rep.best_lower, exact * (1 + 1e-9));
  EXPECT_GE(rep.best_upper, exact * (1 - 1e-9));
}

TEST(WordSource, MarkovValidationAndLength) {
  EXPECT_THROW(WordSource::markov({{0, 2}, {1, 0}}), Error);
  EXPECT_THROW(WordSource::markov({{0, 1}}), Error);
  EXPECT_TRUE(has_arbitrarily_long_words(WordSource::markov({{0, 1}, {1, 0}})));
  EXPECT_FALSE(has_arbitrarily_long_words(WordSource::markov({{0, 1}, {0, 0}})));
  EXPECT_FALSE(has_arbitrarily_long_words(WordSource::constrained(narrow_example())));
}

}  // namespace
