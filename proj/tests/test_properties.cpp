#include <gtest/gtest.h>

#include "property_suites.hpp"

namespace {

using namespace weil_properties;

constexpr unsigned kCases = 1000;
constexpr std::uint64_t kSeed = 0xC0FFEE;

TEST(Properties, ParserRoundTrip) {
    const PropertyResult r = parser_round_trip(kSeed, kCases);
    EXPECT_EQ(r.cases, kCases);
    EXPECT_EQ(r.failures, 0u) << r.first_failure;
}

TEST(Properties, ParserRoundTripIsSeedReproducible) {
    const PropertyResult a = parser_round_trip(kSeed, kCases);
    const PropertyResult b = parser_round_trip(kSeed, kCases);
    EXPECT_EQ(a.fingerprint, b.fingerprint);
    EXPECT_EQ(a.failures, b.failures);
    // A different seed explores a different sample.
    const PropertyResult c = parser_round_trip(kSeed + 1, kCases);
    EXPECT_NE(a.fingerprint, c.fingerprint);
}

TEST(Properties, NormalFormIdempotence) {
    const PropertyResult r = normal_form_idempotence(kSeed, kCases);
    EXPECT_EQ(r.cases, kCases);
    EXPECT_EQ(r.failures, 0u) << r.first_failure;
}

TEST(Properties, NormalFormIsSeedReproducible) {
    const PropertyResult a = normal_form_idempotence(kSeed, kCases);
    const PropertyResult b = normal_form_idempotence(kSeed, kCases);
    EXPECT_EQ(a.fingerprint, b.fingerprint);
    const PropertyResult c = normal_form_idempotence(kSeed + 1, kCases);
    EXPECT_NE(a.fingerprint, c.fingerprint);
}

TEST(Properties, MorphismMultiplicativity) {
    const PropertyResult r = morphism_multiplicativity(kSeed, kCases);
    EXPECT_EQ(r.cases, kCases);
    EXPECT_EQ(r.failures, 0u) << r.first_failure;
}

TEST(Properties, MorphismSuiteIsSeedReproducible) {
    const PropertyResult a = morphism_multiplicativity(kSeed, kCases);
    const PropertyResult b = morphism_multiplicativity(kSeed, kCases);
    EXPECT_EQ(a.fingerprint, b.fingerprint);
    const PropertyResult c = morphism_multiplicativity(kSeed + 1, kCases);
    EXPECT_NE(a.fingerprint, c.fingerprint);
}

} // namespace
