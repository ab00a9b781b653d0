#include "klr/laurent.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace klr;

namespace {

LaurentPoly q(int e = 1) { return LaurentPoly::q(e); }

LaurentPoly random_poly(std::mt19937& rng) {
    std::uniform_int_distribution<int> n(0, 4), e(-4, 4), c(-5, 5), den(1, 3);
    LaurentPoly p;
    for (int k = n(rng); k > 0; --k) {
        Rational x(c(rng), den(rng));
        x.canonicalize();
        p.add_term(e(rng), x);
    }
    return p;
}

// Evaluation at a rational point, used as an independent check of identities.
Rational eval(const LaurentPoly& p, const Rational& x) {
    Rational s = 0;
    for (const auto& [e, c] : p.terms()) {
        Rational t = c;
        Rational base = e >= 0 ? x : Rational(1) / x;
        for (int k = 0; k < std::abs(e); ++k) t *= base;
        s += t;
    }
    return s;
}

}  // namespace

TEST(QLaurent, QIntegers) {
    EXPECT_EQ(q_int(2, 1), q() + q(-1));
    EXPECT_EQ(q_int(1, 3), LaurentPoly(1));
    EXPECT_EQ(q_int(3, 1), q(2) + LaurentPoly(1) + q(-2));
    EXPECT_EQ(q_int(0, 2), LaurentPoly());
    EXPECT_EQ(q_int(2, 2), q(2) + q(-2));
    EXPECT_THROW(q_int(-1, 1), std::invalid_argument);
}

TEST(QLaurent, QIntegerMatchesDefiningQuotient) {
    for (int d = 1; d <= 3; ++d)
        for (int k = 0; k <= 7; ++k) {
            LaurentPoly num = q(d * k) - q(-d * k), den = q(d) - q(-d);
            EXPECT_EQ(q_int(k, d) * den, num);
            EXPECT_EQ(divide_exact(num, den), q_int(k, d));
        }
}

TEST(QLaurent, FactorialsAndBinomials) {
    EXPECT_EQ(q_factorial(2, 1), q() + q(-1));
    EXPECT_EQ(q_factorial(0, 2), LaurentPoly(1));
    EXPECT_EQ(q_binom(2, 1, 1), q() + q(-1));
    for (int d = 1; d <= 3; ++d)
        for (int m = 0; m <= 6; ++m) {
            EXPECT_EQ(q_binom(m, 0, d), LaurentPoly(1));
            for (int k = 0; k <= m; ++k) EXPECT_EQ(q_binom(m, k, d), q_binom(m, m - k, d));
        }
    EXPECT_THROW(q_binom(2, 3, 1), std::invalid_argument);
}

TEST(QLaurent, QBinomialPascal) {
    // [m choose k] = q^{-k}[m-1 choose k-1]... in balanced form: q^{k}[m-1,k] + q^{-(m-k)}[m-1,k-1]
    for (int m = 2; m <= 7; ++m)
        for (int k = 1; k < m; ++k)
            EXPECT_EQ(q_binom(m, k, 1), q(k) * q_binom(m - 1, k, 1) + q(-(m - k)) * q_binom(m - 1, k - 1, 1));
}

TEST(QLaurent, Bar) {
    EXPECT_EQ(bar(q()), q(-1));
    EXPECT_EQ(bar(q() + q(-1)), q() + q(-1));
    EXPECT_EQ(bar(q(2) - LaurentPoly(3) * q()), q(-2) - LaurentPoly(3) * q(-1));
}

TEST(QLaurent, BraceFactorial) {
    EXPECT_EQ(brace_factorial(0, 3).to_laurent(), LaurentPoly(1));
    EXPECT_EQ(brace_factorial(1, 2).to_laurent(), LaurentPoly(1));
    EXPECT_EQ(brace_factorial(2, 2).to_laurent(), LaurentPoly(1) + q(2));
    EXPECT_THROW(brace_factorial(-1, 1), std::invalid_argument);
    EXPECT_THROW(brace_factorial(1, 0), std::invalid_argument);
}

TEST(QLaurent, SquareRoots) {
    EXPECT_EQ(laurent_sqrt((q() + q(-1)).pow(2)), q() + q(-1));
    EXPECT_EQ(laurent_sqrt(LaurentPoly(1)), LaurentPoly(1));
    LaurentPoly s = (q() - q(-1)).pow(2);
    EXPECT_EQ(laurent_sqrt(s.pow(2)), q(2) - LaurentPoly(2) + q(-2));
    EXPECT_THROW(laurent_sqrt(q() + q(-1)), ArithmeticError);
    EXPECT_THROW(laurent_sqrt(LaurentPoly(2)), ArithmeticError);
}

TEST(QLaurent, SquareRootRandomSquares) {
    std::mt19937 rng(7);
    for (int t = 0; t < 200; ++t) {
        LaurentPoly p = random_poly(rng);
        if (p.is_zero() || p.at_one() == 0) continue;
        LaurentPoly r = laurent_sqrt(p * p);
        EXPECT_EQ(r * r, p * p);
        EXPECT_GT(r.at_one(), 0);
        EXPECT_TRUE(r == p || r == p * LaurentPoly(-1));
    }
}

TEST(QLaurent, RingAxiomsRandomTriples) {
    std::mt19937 rng(11);
    for (int t = 0; t < 300; ++t) {
        auto a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(bar(bar(a)), a);
        EXPECT_EQ(bar(a * b), bar(a) * bar(b));
        Rational x(3, 2);
        EXPECT_EQ(eval(a * b, x), eval(a, x) * eval(b, x));
    }
}

TEST(QLaurent, CanonicalFormHasNoZeros) {
    LaurentPoly p = q() + q(2);
    p -= q();
    EXPECT_EQ(p.size(), 1u);
    EXPECT_EQ(p, q(2));
    p -= q(2);
    EXPECT_TRUE(p.is_zero());
}

TEST(QLaurent, RatFuncConversionExactlyWhenDivisible) {
    std::mt19937 rng(5);
    for (int t = 0; t < 100; ++t) {
        auto a = random_poly(rng), b = random_poly(rng);
        if (b.is_zero()) continue;
        RatFunc f(a * b, b);
        ASSERT_TRUE(f.is_laurent());
        EXPECT_EQ(f.to_laurent(), a);
        EXPECT_EQ(RatFunc(a).to_laurent(), a);
    }
    RatFunc g(LaurentPoly(1), LaurentPoly(1) - q(2));
    EXPECT_FALSE(g.is_laurent());
    EXPECT_THROW(g.to_laurent(), ArithmeticError);
    EXPECT_THROW(RatFunc(LaurentPoly(1), LaurentPoly()), ArithmeticError);
}

TEST(QLaurent, TextAndStructuredRendering) {
    LaurentPoly p = q(2) * Rational(3) - q(-1) * Rational(1, 2);
    EXPECT_EQ(p.to_string(), "3*q^2 - 1/2*q^-1");
    auto s = p.structured();
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0], (std::vector<std::string>{"-1", "-1", "2"}));
    EXPECT_EQ(s[1], (std::vector<std::string>{"2", "3", "1"}));
}
