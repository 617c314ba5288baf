#include <gtest/gtest.h>

#include <set>
#include <string>
#include <vector>

#include "weil/fault_injection.hpp"
#include "weil/laws.hpp"

namespace {

using namespace weil;

const LawReport* find_report(const std::vector<LawReport>& reports,
                             const std::string& law) {
    for (const auto& r : reports)
        if (r.law == law) return &r;
    return nullptr;
}

TEST(LawSuite, AllLawsHoldAtModestScale) {
    SuiteOptions opt;
    opt.seed = 20240917;
    opt.trials = 3;
    opt.maps = 2;
    const auto reports = run_law_suite("all", opt);
    const std::set<std::string> expected = {
        "composition",     "alpha-functoriality",  "coherence",
        "alpha-on-R",      "naturality",           "functoriality",
        "product-preservation", "identity-functor", "tensor-dimension",
        "embedding",       "construction-guards",
    };
    std::set<std::string> seen;
    for (const auto& r : reports) {
        seen.insert(r.law);
        EXPECT_TRUE(r.pass) << r.law << ": " << r.counterexample;
        EXPECT_FALSE(r.statement.empty()) << r.law;
        EXPECT_GT(r.trials, 0u) << r.law;
    }
    EXPECT_EQ(seen, expected);
}

TEST(LawSuite, SelectorsPickSubsets) {
    SuiteOptions opt;
    opt.trials = 2;
    opt.maps = 1;
    const auto composition_only = run_law_suite("composition", opt);
    ASSERT_EQ(composition_only.size(), 1u);
    EXPECT_EQ(composition_only[0].law, "composition");

    const auto alpha_group = run_law_suite("alpha", opt);
    std::set<std::string> seen;
    for (const auto& r : alpha_group) seen.insert(r.law);
    const std::set<std::string> expected = {"alpha-functoriality", "alpha-on-R",
                                            "naturality", "coherence"};
    EXPECT_EQ(seen, expected);
}

TEST(LawSuite, ReportsAreSeedReproducible) {
    SuiteOptions opt;
    opt.seed = 777;
    opt.trials = 2;
    opt.maps = 1;
    const auto a = run_law_suite("naturality", opt);
    const auto b = run_law_suite("naturality", opt);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].law, b[i].law);
        EXPECT_EQ(a[i].pass, b[i].pass);
        EXPECT_EQ(a[i].trials, b[i].trials);
        EXPECT_EQ(a[i].seed, b[i].seed);
        EXPECT_EQ(a[i].probes, b[i].probes);
    }
}

TEST(CompositionLaw, HoldsOnNamedExamples) {
    const auto dual = preset_named("dual").w;
    const auto jet2 = preset_named("jet2").w;
    const SmoothMap f = SmoothMap::from_strings({"x0^3 + x0*x1", "x1^2 - x0"}, 2);
    const LawReport rep = check_composition_law(dual, jet2, f, 5, 99);
    EXPECT_TRUE(rep.pass) << rep.counterexample;
    EXPECT_EQ(rep.law, "composition");
    EXPECT_GT(rep.trials, 0u);
}

TEST(CoherenceLaw, SpecifiedDiagramsCommute) {
    const auto dual = preset_named("dual").w;
    const auto jet2 = preset_named("jet2").w;
    const auto r = preset_named("R").w;
    const SmoothMap f = SmoothMap::from_strings({"x0^2 - x1", "x0*x1"}, 2);

    // phi = augmentation of the dual numbers, W = dual.
    const WeilMorphism aug = WeilMorphism::augmentation(dual, r);
    EXPECT_TRUE(check_monoidal_coherence(aug, dual, f, 4, 5).pass);
    // phi = identity: both squares are trivially commutative but still probed.
    EXPECT_TRUE(check_monoidal_coherence(WeilMorphism::identity(jet2), dual, f, 4, 6).pass);
    // W = R: tensoring with the unit algebra.
    const WeilMorphism tr = WeilMorphism::from_strings(jet2, dual, {"x0"});
    EXPECT_TRUE(check_monoidal_coherence(tr, r, f, 4, 7).pass);
}

TEST(AlphaOnR, RecoversTheMorphismForCatalogArrows) {
    const auto dual = preset_named("dual").w;
    const auto jet2 = preset_named("jet2").w;
    const auto r = preset_named("R").w;
    EXPECT_TRUE(check_alpha_on_R(WeilMorphism::from_strings(jet2, dual, {"x0"}), 6, 1).pass);
    EXPECT_TRUE(check_alpha_on_R(WeilMorphism::augmentation(dual, r), 6, 2).pass);
    EXPECT_TRUE(check_alpha_on_R(WeilMorphism::unit_inclusion(r, jet2), 6, 3).pass);
    EXPECT_TRUE(check_alpha_on_R(WeilMorphism::identity(dual), 6, 4).pass);
}

TEST(AlphaFunctoriality, ComposesAlongTheCatalog) {
    const auto dual = preset_named("dual").w;
    const auto jet2 = preset_named("jet2").w;
    const auto r = preset_named("R").w;
    const WeilMorphism tr = WeilMorphism::from_strings(jet2, dual, {"x0"});
    const WeilMorphism aug = WeilMorphism::augmentation(dual, r);
    const LawReport rep = check_alpha_functoriality(tr, aug, 2, 5, 123);
    EXPECT_TRUE(rep.pass) << rep.counterexample;
    // Identity component: alpha_id = id is part of the same law.
    EXPECT_TRUE(check_alpha_functoriality(WeilMorphism::identity(dual),
                                          WeilMorphism::identity(dual), 2, 5, 124)
                    .pass);
}

TEST(Naturality, SquareCommutesForSmoothMaps) {
    const auto jet2 = preset_named("jet2").w;
    const auto dual = preset_named("dual").w;
    const WeilMorphism tr = WeilMorphism::from_strings(jet2, dual, {"x0"});
    const SmoothMap f = SmoothMap::from_strings({"x0^3 - x0*x1^2 + 1"}, 2);
    EXPECT_TRUE(check_naturality(tr, f, 5, 31).pass);
    const SmoothMap g = SmoothMap::from_strings({"x0^4 - x1", "x0*x1 + 2"}, 2);
    EXPECT_TRUE(check_naturality(tr, g, 5, 32).pass);
}

TEST(EmbeddingTheorems, ProbeLevelIdentitiesHold) {
    const auto dual = preset_named("dual").w;
    const auto r = preset_named("R").w;
    const std::vector<PresetAlgebra> probes = {
        preset_named("R"), preset_named("dual"), preset_named("jet2"),
        preset_named("dual*dual")};
    const WeilMorphism aug = WeilMorphism::augmentation(dual, r);
    const LawReport rep = check_embedding_theorems(1, std::nullopt, dual, aug, probes, 9);
    EXPECT_TRUE(rep.pass) << rep.counterexample;
    // W = R and phi = id are the degenerate instances.
    EXPECT_TRUE(check_embedding_theorems(1, std::nullopt, r,
                                         WeilMorphism::identity(dual), probes, 10)
                    .pass);
    // Probe sets that miss the morphism's endpoints are rejected.
    const std::vector<PresetAlgebra> too_small = {preset_named("R"),
                                                  preset_named("jet2")};
    try {
        check_embedding_theorems(1, std::nullopt, dual, aug, too_small, 11);
        FAIL() << "expected probe_set_not_closed";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), errc::probe_set_not_closed);
    }
}

TEST(ConstructionGuards, RejectionsAreCheckedAsALaw) {
    const LawReport rep = check_construction_guards();
    EXPECT_TRUE(rep.pass) << rep.counterexample;
    EXPECT_EQ(rep.law, "construction-guards");
    EXPECT_GT(rep.trials, 0u);
}

TEST(FaultInjection, EachFaultBreaksAtLeastOneLaw) {
    SuiteOptions opt;
    opt.seed = 5150;
    opt.trials = 3;
    opt.maps = 2;
    const std::vector<std::string> fault_names = {
        "drop-taylor-factorial", "transpose-tensor-order", "skip-locality-check"};
    for (const std::string& name : fault_names) {
        ASSERT_TRUE(faults::set_by_name(name, true)) << name;
        const auto reports = run_law_suite("all", opt);
        faults::set_by_name(name, false);
        unsigned failures = 0;
        for (const auto& r : reports)
            if (!r.pass) ++failures;
        EXPECT_GE(failures, 1u) << "fault " << name << " went undetected";
        // A counterexample is recorded for the first failing law.
        for (const auto& r : reports)
            if (!r.pass) EXPECT_FALSE(r.counterexample.empty()) << r.law;
    }
    ASSERT_FALSE(faults::set_by_name("no-such-fault", true));
    // The suite is clean again once all faults are cleared.
    const auto clean = run_law_suite("composition", opt);
    for (const auto& r : clean) EXPECT_TRUE(r.pass) << r.counterexample;
}

TEST(LawSuite, AggregationMergesAcrossConfigurations) {
    SuiteOptions opt;
    opt.trials = 2;
    opt.maps = 1;
    const auto reports = run_law_suite("composition", opt);
    ASSERT_EQ(reports.size(), 1u);
    // 6 presets give 36 ordered pairs; trials accumulate across all of them.
    EXPECT_GE(reports[0].trials, 36u * opt.trials);
    EXPECT_GE(reports[0].probes.size(), 6u);
}

TEST(LawSuite, PresetFamilyAndCatalogShape) {
    const auto& family = preset_family();
    ASSERT_EQ(family.size(), 6u);
    std::set<std::string> names;
    for (const auto& p : family) names.insert(p.name);
    EXPECT_EQ(names, (std::set<std::string>{"R", "dual", "jet2", "jet3", "Dn2",
                                            "dual*dual"}));
    // Every preset has an identity, an augmentation, and a unit inclusion in
    // the catalog; endpoints of every arrow are presets.
    const auto& catalog = preset_morphisms();
    EXPECT_GE(catalog.size(), family.size() * 3 - 2);
    for (const auto& pm : catalog) {
        EXPECT_FALSE(preset_algebra_name(pm.phi.source()).empty()) << pm.name;
        EXPECT_FALSE(preset_algebra_name(pm.phi.target()).empty()) << pm.name;
    }
}

} // namespace
