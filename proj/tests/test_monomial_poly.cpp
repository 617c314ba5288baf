#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "weil/groebner.hpp"
#include "weil/poly.hpp"

namespace {

using namespace weil;

Monomial mono(std::vector<unsigned> e) { return Monomial(std::move(e)); }

TEST(Monomial, DegreeAndProduct) {
    const Monomial one = mono({});
    EXPECT_TRUE(one.is_one());
    EXPECT_EQ(one.degree(), 0u);
    const Monomial x0 = Monomial::var(0);
    const Monomial x1sq = Monomial::var(1, 2);
    EXPECT_EQ((x0 * x1sq).degree(), 3u);
    EXPECT_EQ(x0 * one, x0);
    EXPECT_EQ((x0 * x1sq).exponent(0), 1u);
    EXPECT_EQ((x0 * x1sq).exponent(1), 2u);
}

TEST(Monomial, OrderIsDegreeFirstThenLowIndexFirst) {
    // Contract: 1 < x0 < x1 < x0^2 < x0*x1 < x1^2 — this order defines every
    // basis listing and coordinate vector.
    std::vector<Monomial> expect = {mono({}),     Monomial::var(0),
                                    Monomial::var(1), Monomial::var(0, 2),
                                    Monomial::var(0) * Monomial::var(1),
                                    Monomial::var(1, 2)};
    std::vector<Monomial> shuffled = expect;
    std::mt19937 rng(7);
    for (int round = 0; round < 10; ++round) {
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        std::sort(shuffled.begin(), shuffled.end());
        EXPECT_EQ(shuffled, expect);
    }
    EXPECT_LT(Monomial::var(0), Monomial::var(1));
    EXPECT_LT(Monomial::var(1), Monomial::var(0, 2));
    // Different widths of the same monomial compare equal.
    EXPECT_EQ(mono({1, 0}), mono({1}));
    EXPECT_FALSE(mono({1}) < mono({1, 0}));
    EXPECT_FALSE(mono({1, 0}) < mono({1}));
}

TEST(Monomial, DivisionAndLcm) {
    const Monomial a = Monomial::var(0, 2) * Monomial::var(1);
    const Monomial b = Monomial::var(0);
    EXPECT_TRUE(b.divides(a));
    EXPECT_FALSE(a.divides(b));
    EXPECT_EQ(a / b, Monomial::var(0) * Monomial::var(1));
    EXPECT_EQ(lcm(Monomial::var(0, 2), Monomial::var(0) * Monomial::var(1)),
              Monomial::var(0, 2) * Monomial::var(1));
}

TEST(Poly, ArithmeticAgainstMapOracle) {
    // Independent oracle: exponent-vector -> coefficient maps multiplied by
    // the schoolbook double loop.
    const Poly p = Poly::var(0, 2) + Poly::var(1) * Poly::constant(Rat(3));
    const Poly q = Poly::var(0) - Poly::constant(Rat(2));
    const Poly prod = p * q;

    std::map<std::vector<unsigned>, Rat> oracle;
    const std::vector<std::pair<std::vector<unsigned>, Rat>> pt = {
        {{2, 0}, Rat(1)}, {{0, 1}, Rat(3)}};
    const std::vector<std::pair<std::vector<unsigned>, Rat>> qt = {
        {{1, 0}, Rat(1)}, {{0, 0}, Rat(-2)}};
    for (const auto& [em, ec] : pt)
        for (const auto& [fm, fc] : qt) {
            std::vector<unsigned> e = {em[0] + fm[0], em[1] + fm[1]};
            oracle[e] += ec * fc;
        }
    for (const auto& [m, c] : prod.terms()) {
        std::vector<unsigned> e = {m.exponent(0), m.exponent(1)};
        EXPECT_EQ(oracle[e], c) << prod.str({"x0", "x1"});
        oracle.erase(e);
    }
    for (const auto& [e, c] : oracle) EXPECT_EQ(c, 0);
}

TEST(Poly, PowAndStr) {
    const Poly p = Poly::var(0) + Poly::constant(Rat(1));
    const Poly cube = p.pow(3);
    // (x+1)^3 = x^3 + 3x^2 + 3x + 1.
    EXPECT_EQ(cube.terms().size(), 4u);
    EXPECT_EQ(cube.str({"x0"}), "1 + 3*x0 + 3*x0^2 + x0^3");
    EXPECT_EQ(Poly::constant(Rat(0)).str({}), "0");
    EXPECT_EQ((Poly::var(0) - Poly::var(0)).str({"x0"}), "0");
    EXPECT_TRUE(p.pow(0).terms().size() == 1 && p.pow(0).str({"x0"}) == "1");
}

TEST(Groebner, NormalFormIsIdempotentAndLinear) {
    const std::vector<Poly> rels = {Poly::var(0, 2), Poly::var(1, 2)};
    const auto gb = groebner_basis(rels);
    const Poly p = (Poly::var(0) + Poly::var(1)).pow(3);
    const Poly nf = normal_form(p, gb);
    EXPECT_EQ(normal_form(nf, gb), nf);
    // (x+y)^3 with x^2 = y^2 = 0 leaves 3x^2y + 3xy^2 + ... -> all terms die.
    EXPECT_TRUE(nf.is_zero());
    const Poly q = (Poly::var(0) + Poly::var(1)).pow(2);
    EXPECT_EQ(normal_form(q, gb).str({"x0", "x1"}), "2*x0*x1");
}

TEST(Groebner, HandlesNonMonomialRelations) {
    // x0^2 - x1 and x1^2: x0^4 = x1^2 = 0, basis {1, x0, x1, x0*x1} after
    // substituting x1 = x0^2 ... normal form sends x0^2 to x1.
    const std::vector<Poly> rels = {Poly::var(0, 2) - Poly::var(1), Poly::var(1, 2)};
    const auto gb = groebner_basis(rels);
    EXPECT_EQ(normal_form(Poly::var(0, 2), gb).str({"x0", "x1"}), "x1");
    EXPECT_TRUE(normal_form(Poly::var(0, 4), gb).is_zero());
    EXPECT_EQ(normal_form(Poly::var(0, 3), gb).str({"x0", "x1"}), "x0*x1");
}

TEST(Groebner, SPolynomialCompletionMatters) {
    // {x0*x1 - x1, x0^2} forces x1 = x0*x1 = x0^2*x1 = 0 in the quotient.
    const std::vector<Poly> rels = {Poly::var(0) * Poly::var(1) - Poly::var(1),
                                    Poly::var(0, 2)};
    const auto gb = groebner_basis(rels);
    EXPECT_TRUE(normal_form(Poly::var(1), gb).is_zero());
}

} // namespace
