#include <gtest/gtest.h>

#include <optional>
#include <vector>

#include "weil/limits.hpp"

namespace {

using namespace weil;

void expect_matrix(const Mat& m, const std::vector<std::vector<int>>& rows) {
    ASSERT_EQ(m.rows(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ASSERT_EQ(m.cols(), rows[i].size());
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            EXPECT_EQ(m.at(i, j), Rat(rows[i][j])) << "entry (" << i << ", " << j << ")";
    }
}

TEST(Limits, PullbackOfTwoAugmentationsIsDn2) {
    const WeilDiagram d = builtin_pullback_D2();
    const ConeCertificate c = compute_limit(d);
    ASSERT_TRUE(c.is_limit) << c.witness;
    EXPECT_EQ(c.solution_dim, 3u);
    EXPECT_EQ(c.apex->dim(), 3u);
    EXPECT_EQ(c.apex->nilpotency_index(), 2u);
    EXPECT_EQ(c.apex->n_gens(), 2u);
    // All pairwise generator products vanish: the presentation is exactly
    // the degree-two cut in two variables.
    EXPECT_EQ(c.apex->relation_strings(),
              (std::vector<std::string>{"x0^2", "x0*x1", "x1^2"}));
    const auto Dn2 = preset_named("Dn2").w;
    EXPECT_EQ(c.apex->dim(), Dn2->dim());
    EXPECT_EQ(c.apex->nilpotency_index(), Dn2->nilpotency_index());

    // Legs: each dual factor receives one generator, R the unit coordinate.
    ASSERT_EQ(c.legs.size(), 3u);
    expect_matrix(c.legs[0].matrix(), {{1, 0, 0}, {0, 1, 0}});
    expect_matrix(c.legs[1].matrix(), {{1, 0, 0}, {0, 0, 1}});
    expect_matrix(c.legs[2].matrix(), {{1, 0, 0}});
}

TEST(Limits, EqualizerOfIdentityAndUnitRetractionIsR) {
    const WeilDiagram d = builtin_equalizer_vertical();
    const ConeCertificate c = compute_limit(d);
    ASSERT_TRUE(c.is_limit) << c.witness;
    EXPECT_TRUE(c.apex->is_scalar_field());
    EXPECT_EQ(c.solution_dim, 1u);
}

TEST(Limits, EqualizerOfEqualArrowsIsTheNode) {
    const auto jet2 = preset_named("jet2").w;
    WeilDiagram d;
    d.nodes = {jet2, jet2};
    d.edges.push_back({0, 1, WeilMorphism::identity(jet2)});
    d.edges.push_back({0, 1, WeilMorphism::identity(jet2)});
    const ConeCertificate c = compute_limit(d);
    ASSERT_TRUE(c.is_limit) << c.witness;
    EXPECT_EQ(c.apex->dim(), 3u);
    EXPECT_EQ(c.apex->nilpotency_index(), 3u);
}

TEST(Limits, DiagramValidation) {
    const auto dual = preset_named("dual").w;
    const auto jet2 = preset_named("jet2").w;
    {
        WeilDiagram d;
        d.nodes = {dual, dual};
        try {
            compute_limit(d);
            FAIL() << "expected not_connected";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), errc::not_connected);
        }
    }
    {
        WeilDiagram d;
        try {
            compute_limit(d);
            FAIL() << "expected not_connected for the empty diagram";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), errc::not_connected);
        }
    }
    {
        WeilDiagram d;
        d.nodes = {dual, jet2};
        d.edges.push_back({0, 1, WeilMorphism::identity(dual)});
        try {
            compute_limit(d);
            FAIL() << "expected algebra_mismatch";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), errc::algebra_mismatch);
        }
    }
}

TEST(Microlinearity, ChartsPerceiveTheLimit) {
    const WeilDiagram d = builtin_pullback_D2();
    const ConeCertificate c = compute_limit(d);
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{2}}) {
        const LawReport r = check_microlinear_chart(n, std::nullopt, d, c, 99);
        EXPECT_TRUE(r.pass) << "chart arity " << n << ": " << r.counterexample;
        EXPECT_EQ(r.law, "microlinear");
    }
    const OpenBox box{{{Rat(0), Rat(1)}}};
    EXPECT_TRUE(check_microlinear_chart(1, box, d, c, 7).pass);
}

TEST(Microlinearity, UnverifiedCertificatesAreRejected) {
    const WeilDiagram d = builtin_pullback_D2();
    ConeCertificate bad = compute_limit(d);
    bad.is_limit = false;
    bad.witness = "synthetic";
    try {
        check_microlinear_chart(1, std::nullopt, d, bad, 1);
        FAIL() << "expected cone_not_verified";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::cone_not_verified);
    }
}

ChartCone product_cone() {
    ChartCone cone;
    cone.apex = {2, std::nullopt};
    cone.diagram.nodes = {{1, std::nullopt}, {1, std::nullopt}};
    cone.legs.push_back(SmoothMap::from_strings({"x0"}, 2));
    cone.legs.push_back(SmoothMap::from_strings({"x1"}, 2));
    return cone;
}

TEST(Transversality, ProductConeSurvivesAllProbes) {
    const std::vector<PresetAlgebra> probes{preset_named("R"), preset_named("dual"),
                                            preset_named("jet2")};
    const LawReport r = check_transversal(product_cone(), probes, 5);
    EXPECT_TRUE(r.pass) << r.counterexample;
    EXPECT_EQ(r.law, "transversal");
    EXPECT_EQ(r.probes.size(), 3u);
    // The full preset family works too.
    const LawReport r6 = check_transversal(product_cone(), preset_family(), 5);
    EXPECT_TRUE(r6.pass) << r6.counterexample;
    EXPECT_EQ(r6.probes.size(), 6u);
}

TEST(Transversality, WrongApexFailsAtTheScalarProbe) {
    ChartCone bad = product_cone();
    bad.apex.arity = 3;
    bad.legs.clear();
    bad.legs.push_back(SmoothMap::from_strings({"x0"}, 3));
    bad.legs.push_back(SmoothMap::from_strings({"x1"}, 3));
    const std::vector<PresetAlgebra> probes{preset_named("R"), preset_named("dual")};
    const LawReport r = check_transversal(bad, probes, 5);
    EXPECT_FALSE(r.pass);
    EXPECT_FALSE(r.counterexample.empty());
}

TEST(Transversality, NonAffineLegsAreRefused) {
    ChartCone quad = product_cone();
    quad.legs[0] = SmoothMap::from_strings({"x0^2"}, 2);
    const std::vector<PresetAlgebra> probes{preset_named("R")};
    try {
        check_transversal(quad, probes, 5);
        FAIL() << "expected non_affine_cone";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::non_affine_cone);
    }
}

TEST(Bundles, ProjectionRecognition) {
    const Bundle b = Bundle::from_map(SmoothMap::from_strings({"x0", "x1"}, 3));
    EXPECT_EQ(b.base_dims, 2u);
    EXPECT_EQ(b.fiber_dims, 1u);
    EXPECT_EQ(b.ambient(), 3u);
    try {
        Bundle::from_map(SmoothMap::from_strings({"x1"}, 2));
        FAIL() << "expected unsupported_bundle";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::unsupported_bundle);
    }
    EXPECT_THROW(Bundle::from_map(SmoothMap::from_strings({"x0 + x1"}, 2)), Error);
    EXPECT_THROW(Bundle::from_map(SmoothMap::from_strings({"x0", "x1"}, 1)), Error);
}

TEST(VerticalFunctor, CarrierShapeAndTransversality) {
    const auto dual = preset_named("dual").w;
    const auto R = preset_named("R").w;
    const std::vector<PresetAlgebra> probes{preset_named("R"), preset_named("dual"),
                                            preset_named("jet2")};
    Bundle b;
    b.base_dims = 1;
    b.fiber_dims = 2;
    const VerticalWeil v = vertical_weil(b, dual, probes, 11);
    // Carrier R^1 x W^2 inside W^3: chart dimension m + n*dim W.
    EXPECT_EQ(v.carrier_dim, 5u);
    EXPECT_EQ(v.nilpotent_coords, 2u);
    EXPECT_TRUE(v.transversality.pass) << v.transversality.counterexample;

    // W = R: the vertical functor is the whole chart, nothing nilpotent.
    const VerticalWeil vr = vertical_weil(b, R, probes, 11);
    EXPECT_EQ(vr.carrier_dim, 3u);
    EXPECT_EQ(vr.nilpotent_coords, 0u);
    EXPECT_TRUE(vr.transversality.pass);

    // m = 0: everything is vertical.
    Bundle b0;
    b0.base_dims = 0;
    b0.fiber_dims = 2;
    const VerticalWeil v0 = vertical_weil(b0, dual, probes, 11);
    EXPECT_EQ(v0.carrier_dim, 4u);
    EXPECT_TRUE(v0.transversality.pass);
}

TEST(VerticalFunctor, EmbeddingRestrictsAlongProbes) {
    const auto dual = preset_named("dual").w;
    const std::vector<PresetAlgebra> probes{preset_named("R"), preset_named("dual"),
                                            preset_named("jet2")};
    Bundle b;
    b.base_dims = 1;
    b.fiber_dims = 1;
    const LawReport r = check_vertical_embedding(b, dual, probes, 19);
    EXPECT_TRUE(r.pass) << r.counterexample;
    EXPECT_EQ(r.law, "vertical-embedding");
    EXPECT_GT(r.trials, 20u);
}

TEST(Limits, CertificateIsSeedIndependent) {
    // compute_limit is deterministic linear algebra; two runs agree exactly.
    const WeilDiagram d = builtin_pullback_D2();
    const ConeCertificate a = compute_limit(d);
    const ConeCertificate b = compute_limit(d);
    EXPECT_EQ(a.apex->relation_strings(), b.apex->relation_strings());
    ASSERT_EQ(a.legs.size(), b.legs.size());
    for (std::size_t i = 0; i < a.legs.size(); ++i)
        EXPECT_EQ(a.legs[i].matrix(), b.legs[i].matrix());
}

} // namespace
