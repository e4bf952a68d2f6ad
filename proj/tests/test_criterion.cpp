#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "isoharm/criterion.hpp"
#include "isoharm/errors.hpp"

using isoharm::IsoparametricFamily;
using isoharm::Rat;

TEST(Criterion, ResidualMatchesExactEvaluation) {
    isoharm::HarmonicityQuery q{1.0, 6, 20, 36.0, 1.0 / 3.0};
    Rat exact = isoharm::residual_exact(Rat(1), 6, 20, Rat(36), Rat(1, 3));
    EXPECT_NEAR(isoharm::residual(q), isoharm::to_double(exact), 1e-9);
    // a2^2 - m c a2 - (r-2) m^2 c alpha^2 = 1296 - 216 - 18 * 36 / 3
    EXPECT_EQ(exact, Rat(1296 - 216 - 216));
}

TEST(Criterion, SpaceFormEqualityCaseVanishes) {
    for (int m = 1; m <= 10; ++m)
        for (int r = 2; r <= 50; ++r)
            EXPECT_EQ(isoharm::residual_exact(Rat(1), m, r, Rat(m * (r - 1)), Rat(r - 1)),
                      Rat(0));
}

TEST(Criterion, FlatAndNegativeCurvatureForbidProperSolutions) {
    isoharm::HarmonicityQuery flat{0.0, 4, 3, 5.0, 0.5};
    EXPECT_TRUE(isoharm::nonexistence_flat_or_negative(flat));
    isoharm::HarmonicityQuery hyper{-1.0, 4, 3, 5.0, 0.5};
    EXPECT_TRUE(isoharm::nonexistence_flat_or_negative(hyper));
    isoharm::HarmonicityQuery sphere{1.0, 4, 3, 5.0, 0.5};
    EXPECT_THROW(isoharm::nonexistence_flat_or_negative(sphere), std::invalid_argument);
    // The underlying sign argument: every term is nonnegative when c <= 0.
    for (int c : {0, -1, -5})
        for (int a2 = 1; a2 <= 5; ++a2)
            EXPECT_GT(isoharm::residual_exact(Rat(c), 3, 7, Rat(a2), Rat(1, 2)), Rat(0));
}

TEST(Criterion, DegreeQuadraticCoefficients) {
    auto q3 = isoharm::degree_quadratic(3, 20);
    EXPECT_EQ(q3.a, 20);
    EXPECT_EQ(q3.b, 14);
    EXPECT_EQ(q3.c, 2);
    auto q4 = isoharm::degree_quadratic(4, 42);
    EXPECT_EQ(q4.b, 20);
    EXPECT_EQ(q4.c, 2);
    auto q6 = isoharm::degree_quadratic(6, 110);
    EXPECT_EQ(q6.b, 32);
    EXPECT_EQ(q6.c, 2);
    EXPECT_THROW(isoharm::degree_quadratic(2, 10), isoharm::unsupported_error);
    EXPECT_THROW(isoharm::degree_quadratic(3, 1), std::invalid_argument);
}

TEST(Criterion, ThresholdRootsAreExactRationals) {
    auto roots = isoharm::degree_roots(3, 20);
    ASSERT_EQ(roots.size(), 2u);
    EXPECT_TRUE(roots[0].exact);
    EXPECT_EQ(roots[0].exact_value, Rat(-1, 2));
    EXPECT_EQ(roots[1].exact_value, Rat(-1, 5));

    auto roots4 = isoharm::degree_roots(4, 42);
    ASSERT_EQ(roots4.size(), 2u);
    EXPECT_EQ(roots4[0].exact_value, Rat(-1, 3));
    EXPECT_EQ(roots4[1].exact_value, Rat(-1, 7));

    auto roots6 = isoharm::degree_roots(6, 110);
    ASSERT_EQ(roots6.size(), 2u);
    EXPECT_EQ(roots6[0].exact_value, Rat(-1, 5));
    EXPECT_EQ(roots6[1].exact_value, Rat(-1, 11));

    EXPECT_TRUE(isoharm::degree_roots(3, 19).empty());
    EXPECT_TRUE(isoharm::degree_roots(4, 41).empty());
    EXPECT_TRUE(isoharm::degree_roots(6, 109).empty());
}

TEST(Criterion, OutOfRangeRootsGetExplanatoryNotes) {
    std::vector<isoharm::QuadraticRoot> raw;
    raw.push_back({-5.0, false, Rat(), 1});
    raw.push_back({-0.5, false, Rat(), 1});
    raw.push_back({1.5, false, Rat(), 1});
    auto pm = isoharm::roots_to_parameters(3, raw);
    EXPECT_EQ(pm.s_values.size(), 2u); // only the interior root maps, twice
    ASSERT_EQ(pm.notes.size(), 2u);
    EXPECT_NE(pm.notes[0].find("below the range"), std::string::npos);
    EXPECT_NE(pm.notes[1].find("above the range"), std::string::npos);
}

TEST(Criterion, ClassifyDegree3AtThreshold) {
    IsoparametricFamily fam(3, 2, 2);
    auto result = isoharm::classify(fam, 20);
    EXPECT_EQ(result.count, 4);
    EXPECT_EQ(result.regime, isoharm::Regime::some);
    ASSERT_EQ(result.solutions.size(), 4u);
    // cos(6s) = -1/2 and -1/5, two parameters each, sorted ascending.
    EXPECT_NEAR(result.solutions[0].s, 0.29535904126420495, 1e-12);
    EXPECT_NEAR(result.solutions[1].s, isoharm::pi / 9.0, 1e-12);
    EXPECT_NEAR(result.solutions[2].s, 2.0 * isoharm::pi / 9.0, 1e-12);
    EXPECT_NEAR(result.solutions[3].s, 0.75183850993239309, 1e-12);
    for (const auto& sol : result.solutions) {
        EXPECT_LT(std::abs(sol.residual), 1e-9);
        EXPECT_EQ(sol.multiplicity, 1);
    }

    auto below = isoharm::classify(fam, 19);
    EXPECT_EQ(below.count, 0);
    EXPECT_EQ(below.regime, isoharm::Regime::none);
}

TEST(Criterion, ClassifyUnequalMultiplicitiesViaQuartic) {
    IsoparametricFamily fam(4, 7, 8);
    auto result = isoharm::classify(fam, 47);
    EXPECT_EQ(result.count, 4);
    ASSERT_EQ(result.solutions.size(), 4u);
    // s = acos(sqrt(y)) / 2 for the quartic roots y, ascending in s.
    EXPECT_NEAR(result.solutions[0].s, 0.5 * std::acos(std::sqrt(0.84854225944274)), 1e-12);
    EXPECT_NEAR(result.solutions[1].s, 0.5 * std::acos(std::sqrt(0.8)), 1e-12);
    EXPECT_NEAR(result.solutions[2].s, 0.5 * std::acos(std::sqrt(0.30802403913738308)),
                1e-12);
    EXPECT_NEAR(result.solutions[3].s, 0.5 * std::acos(std::sqrt(0.11577412695179182)),
                1e-12);
    // P is positive at 0, y0, and 1, so the first negative dip crosses twice.
    EXPECT_EQ(isoharm::classify(fam, 37).count, 0);
    EXPECT_EQ(isoharm::classify(fam, 38).count, 2);
}

TEST(Criterion, ClassifyRejectsDegreesWithoutReduction) {
    EXPECT_THROW(isoharm::classify(IsoparametricFamily(1, 3, 3), 5),
                 isoharm::unsupported_error);
    EXPECT_THROW(isoharm::classify(IsoparametricFamily(2, 1, 2), 5),
                 isoharm::unsupported_error);
    EXPECT_THROW(isoharm::classify(IsoparametricFamily(3, 1, 1), 1), std::invalid_argument);
}

TEST(Criterion, ScanBracketsAgreeWithClassification) {
    IsoparametricFamily fam(3, 1, 1);
    auto cls = isoharm::classify(fam, 25);
    auto scan = isoharm::scan_residual(fam, 25, 200000);
    int weighted = 0;
    for (const auto& bracket : scan.brackets)
        weighted += bracket.tangency ? 2 : 1;
    EXPECT_EQ(weighted, cls.count);
    for (const auto& sol : cls.solutions) {
        bool covered = false;
        for (const auto& bracket : scan.brackets)
            covered = covered || (bracket.lo <= sol.s && sol.s <= bracket.hi);
        EXPECT_TRUE(covered) << "no bracket covers s = " << sol.s;
    }
    EXPECT_THROW(isoharm::scan_residual(fam, 25, 8), std::invalid_argument);
}

TEST(Criterion, TrigonometricDisplaysMatchInvariantForm) {
    std::mt19937 rng(2024);
    struct Case {
        int degree, m1, m2;
    };
    for (const Case& c : {Case{3, 2, 2}, Case{4, 7, 8}, Case{4, 3, 3}, Case{6, 1, 1}}) {
        IsoparametricFamily fam(c.degree, c.m1, c.m2);
        std::uniform_real_distribution<double> pick(1e-3, fam.s_max() - 1e-3);
        for (int r : {2, 20, 47}) {
            for (int i = 0; i < 200; ++i) {
                double s = pick(rng);
                auto inv = isoharm::invariants(fam, s);
                double reference = isoharm::residual(
                    {1.0, fam.dim(), r, inv.a2, inv.alpha * inv.alpha});
                double scale = std::max(1.0, std::abs(reference));
                EXPECT_NEAR(isoharm::forms::raw_display(fam, r, s), reference,
                            1e-9 * scale);
                EXPECT_NEAR(isoharm::forms::reduced_display(fam, r, s), reference,
                            1e-9 * scale);
                if (c.degree == 4)
                    EXPECT_NEAR(isoharm::forms::grouped_display_degree4(c.m1, c.m2, r, s),
                                reference, 1e-9 * scale);
            }
        }
    }
}
